//! Restricting the torus action of an affine or complete toric variety to a
//! subtorus.
//!
//! Lattices: deg: M′ → M is surjective with section s, M″ = ker(deg) with a
//! fixed basis K (its rows), and p = K: N′ → N″. For a pointed cone δ ⊂ N′
//! and a ray ρ of the quotient fan,
//!
//!   Δ_ρ = s*(p⁻¹(ρ) ∩ δ),   tail = s*(ker p ∩ δ),
//!
//! with Δ_ρ empty when ρ misses p(δ). The resulting divisor lives on the
//! toric variety of the quotient fan, with primes named after their rays.

use crate::base::{BaseVariety, PrimeId};
use crate::error::DowngradeError;
use crate::geom::lattice::{identity, mul, solve_integer, split_surjection, transpose, IMat};
use crate::geom::linalg::mat_vec;
use crate::geom::rational::{from_integers, primitive, Q, QVec};
use crate::geom::{common_refinement, Cone, TailedPolyhedron};
use crate::par;
use crate::ppdiv::PPDivisor;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Exact sequences 0 → M″ → M′ → M → 0 and 0 → N → N′ → N″ → 0 with the
/// chosen splittings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DowngradeData {
    n_prime: usize,
    deg: IMat,
    section: IMat,
    kernel: IMat,
    /// t*: M′ → M″ in the kernel basis; t* = id − s∘deg.
    t_dual: IMat,
}

fn to_q(m: &IMat) -> Vec<QVec> {
    m.iter().map(|r| from_integers(r)).collect()
}

impl DowngradeData {
    /// `deg` is k × n′ (rows are the M-coordinates). Without a section, the
    /// Hermite-form section is used.
    pub fn new(deg: &IMat, n_prime: usize, section: Option<&IMat>) -> Result<Self, DowngradeError> {
        let k = deg.len();
        if deg.iter().any(|r| r.len() != n_prime) || k > n_prime {
            return Err(DowngradeError::Shape(format!("degree map must be k x {n_prime} with k <= {n_prime}")));
        }
        let split = split_surjection(deg, n_prime).ok_or(DowngradeError::NotSurjective)?;
        let section = match section {
            None => split.section,
            Some(s) => {
                if s.len() != n_prime || s.iter().any(|r| r.len() != k) {
                    return Err(DowngradeError::Shape(format!("section must be {n_prime} x {k}")));
                }
                if mul(deg, s, k) != identity(k) {
                    return Err(DowngradeError::BadSection);
                }
                s.clone()
            }
        };
        let kernel = split.kernel;
        let r = kernel.len();
        // Column j of t*: coordinates of e_j − s(deg e_j) in the kernel basis.
        let proj = mul(&section, deg, n_prime);
        let kt = transpose(&kernel, n_prime);
        let mut cols: IMat = Vec::with_capacity(n_prime);
        for j in 0..n_prime {
            let rhs: Vec<BigInt> =
                (0..n_prime).map(|i| BigInt::from(u8::from(i == j)) - &proj[i][j]).collect();
            cols.push(solve_integer(&kt, &rhs, r).ok_or(DowngradeError::BadSection)?);
        }
        let t_dual = transpose(&cols, r);
        Ok(DowngradeData { n_prime, deg: deg.clone(), section, kernel, t_dual })
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    /// Rank of M and N.
    pub fn n(&self) -> usize {
        self.deg.len()
    }

    /// Rank of M″ and N″.
    pub fn n_quotient(&self) -> usize {
        self.kernel.len()
    }

    pub fn deg(&self) -> &IMat {
        &self.deg
    }

    pub fn section(&self) -> &IMat {
        &self.section
    }

    /// Rows form the basis of M″ ⊂ M′; as a matrix this is p: N′ → N″.
    pub fn kernel(&self) -> &IMat {
        &self.kernel
    }

    pub fn t_dual(&self) -> &IMat {
        &self.t_dual
    }

    /// t: N″ → N′ as an n′ × r matrix; p∘t = id.
    pub fn t(&self) -> IMat {
        transpose(&self.t_dual, self.n_prime)
    }

    pub fn p(&self, v: &[Q]) -> QVec {
        mat_vec(&to_q(&self.kernel), v)
    }

    /// s*: N′ → N.
    pub fn s_star(&self, v: &[Q]) -> QVec {
        mat_vec(&self.s_star_rows(), v)
    }

    fn s_star_rows(&self) -> Vec<QVec> {
        to_q(&transpose(&self.section, self.n()))
    }
}

/// Quotient fan Σ″ with primitive rays and maximal cones as ray indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientFan {
    pub dim: usize,
    pub rays: Vec<QVec>,
    pub cones: Vec<Vec<usize>>,
}

impl QuotientFan {
    pub fn base(&self) -> Result<BaseVariety, DowngradeError> {
        Ok(BaseVariety::toric(self.dim, &self.rays, &self.cones)?)
    }
}

fn check_cone(delta: &Cone, dd: &DowngradeData) -> Result<(), DowngradeError> {
    if delta.ambient_dim() != dd.n_prime {
        return Err(DowngradeError::Shape(format!("cone lives in rank {}, expected {}", delta.ambient_dim(), dd.n_prime)));
    }
    if !delta.is_pointed() {
        return Err(DowngradeError::NotPointed);
    }
    Ok(())
}

/// Coarsest common refinement of the images of the faces of the cones.
pub fn quotient_fan(cones: &[Cone], dd: &DowngradeData) -> Result<QuotientFan, DowngradeError> {
    for c in cones {
        check_cone(c, dd)?;
    }
    let p = to_q(&dd.kernel);
    let r = dd.n_quotient();
    let images: Vec<Vec<Cone>> = cones.iter().map(|c| c.faces().iter().map(|f| f.image(&p)).collect()).collect();
    let all = if images.is_empty() { vec![Cone::zero(r)] } else { common_refinement(&images)? };
    if all.iter().any(|c| !c.is_pointed()) {
        return Err(DowngradeError::NotPointed);
    }
    let mut rays: Vec<QVec> = all.iter().filter(|c| c.linear_dim() == 1).map(|c| primitive(&c.rays()[0])).collect();
    rays.sort();
    let maximal = crate::geom::complex::maximal_cones(&all);
    let cones = maximal.iter().map(|c| (0..rays.len()).filter(|&i| c.contains(&rays[i])).collect()).collect();
    Ok(QuotientFan { dim: r, rays, cones })
}

/// s*(p⁻¹(x) ∩ δ) for x ∈ N″.
fn fiber_image(delta: &Cone, dd: &DowngradeData, x: &[Q]) -> Result<TailedPolyhedron, DowngradeError> {
    let h = delta.hrep();
    let zero = Q::from_integer(0.into());
    let mut ineqs: Vec<(QVec, Q)> = h.ineqs.iter().map(|a| (a.clone(), zero.clone())).collect();
    for e in &h.eqs {
        ineqs.push((e.clone(), zero.clone()));
        ineqs.push((e.iter().map(|c| -c).collect(), zero.clone()));
    }
    let eqs: Vec<(QVec, Q)> = to_q(&dd.kernel).into_iter().zip(x.iter().cloned()).collect();
    let fiber = TailedPolyhedron::from_constraints(dd.n_prime, &ineqs, &eqs)?;
    Ok(fiber.image(&dd.s_star_rows())?)
}

/// The tail s*(ker p ∩ δ).
pub fn downgrade_tail(delta: &Cone, dd: &DowngradeData) -> Result<Cone, DowngradeError> {
    check_cone(delta, dd)?;
    let zero = vec![Q::from_integer(0.into()); dd.n_quotient()];
    Ok(fiber_image(delta, dd, &zero)?.tail().clone())
}

/// Divisor of δ on an already built quotient base.
pub fn downgrade_cone_on(
    delta: &Cone,
    dd: &DowngradeData,
    fan: &QuotientFan,
    base: &Arc<BaseVariety>,
) -> Result<PPDivisor, DowngradeError> {
    let tail = downgrade_tail(delta, dd)?;
    let p = to_q(&dd.kernel);
    let support = delta.image(&p);
    let mut coeffs: BTreeMap<PrimeId, TailedPolyhedron> = BTreeMap::new();
    for (i, rho) in fan.rays.iter().enumerate() {
        let c = if support.contains(rho) { fiber_image(delta, dd, rho)? } else { TailedPolyhedron::empty(tail.clone()) };
        coeffs.insert(PrimeId(i), c);
    }
    Ok(PPDivisor::new(base.clone(), tail, coeffs)?)
}

/// The divisor of the subtorus action on the affine toric variety of δ.
pub fn downgrade_cone(delta: &Cone, dd: &DowngradeData) -> Result<PPDivisor, DowngradeError> {
    let fan = quotient_fan(std::slice::from_ref(delta), dd)?;
    let base = Arc::new(fan.base()?);
    downgrade_cone_on(delta, dd, &fan, &base)
}

/// One divisor per input cone, all on the toric variety of the common
/// quotient fan.
pub fn downgrade_fan(cones: &[Cone], dd: &DowngradeData) -> Result<Vec<PPDivisor>, DowngradeError> {
    let fan = quotient_fan(cones, dd)?;
    let base = Arc::new(fan.base()?);
    par::map(cones, |c| downgrade_cone_on(c, dd, &fan, &base)).into_iter().collect()
}

/// t*(deg⁻¹(u) ∩ δ^∨) ⊂ M″: the weight polyhedron whose lattice points index
/// the degree-u functions. Pointed when δ is full-dimensional.
pub fn positive_fiber(delta: &Cone, dd: &DowngradeData, u: &[Q]) -> Result<TailedPolyhedron, DowngradeError> {
    check_cone(delta, dd)?;
    let dual = delta.dual();
    let h = dual.hrep();
    let zero = Q::from_integer(0.into());
    let mut ineqs: Vec<(QVec, Q)> = h.ineqs.iter().map(|a| (a.clone(), zero.clone())).collect();
    for e in &h.eqs {
        ineqs.push((e.clone(), zero.clone()));
        ineqs.push((e.iter().map(|c| -c).collect(), zero.clone()));
    }
    let eqs: Vec<(QVec, Q)> = to_q(&dd.deg).into_iter().zip(u.iter().cloned()).collect();
    let fiber = TailedPolyhedron::from_constraints(dd.n_prime, &ineqs, &eqs)?;
    Ok(fiber.image(&to_q(&dd.t_dual))?)
}

/// Moves a divisor to another base by renaming primes. Primes without a new
/// name must carry the trivial coefficient.
pub fn transport(d: &PPDivisor, target: &Arc<BaseVariety>, names: &[(&str, &str)]) -> Result<PPDivisor, DowngradeError> {
    let mut coeffs = Vec::new();
    for p in d.base().prime_ids() {
        let c = d.coeff(p);
        let from = d.base().name(p);
        match names.iter().find(|(a, _)| *a == from) {
            Some((_, to)) => coeffs.push((target.lookup(to)?, c)),
            None if c == TailedPolyhedron::from_cone(d.tail()) => {}
            None => return Err(crate::error::BaseError::UnknownPrime(from.to_string()).into()),
        }
    }
    Ok(PPDivisor::new(target.clone(), d.tail().clone(), coeffs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::lattice::imat;
    use crate::geom::rational::{qi, qvec};

    fn quadrant() -> Cone {
        Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])])
    }

    #[test]
    fn sum_map_data() {
        let dd = DowngradeData::new(&imat(&[&[1, 1]]), 2, None).unwrap();
        assert_eq!(dd.section(), &imat(&[&[1], &[0]]));
        assert_eq!(dd.kernel(), &imat(&[&[1, -1]]));
        // t* = id − s∘deg sends (m1, m2) to −m2 (1, −1).
        assert_eq!(dd.t_dual(), &imat(&[&[0, -1]]));
        assert_eq!(dd.t(), imat(&[&[0], &[-1]]));
        assert!(DowngradeData::new(&imat(&[&[2, 0]]), 2, None).is_err());
        assert_eq!(DowngradeData::new(&imat(&[&[1, 1]]), 2, Some(&imat(&[&[1], &[1]]))), Err(DowngradeError::BadSection));
    }

    #[test]
    fn quadrant_quotient_is_the_line_fan() {
        let dd = DowngradeData::new(&imat(&[&[1, 1]]), 2, None).unwrap();
        let f = quotient_fan(&[quadrant()], &dd).unwrap();
        assert_eq!(f.rays, vec![qvec(&[-1]), qvec(&[1])]);
        assert_eq!(f.cones, vec![vec![0], vec![1]]);
        let z = quotient_fan(&[Cone::zero(2)], &dd).unwrap();
        assert!(z.rays.is_empty());
    }

    #[test]
    fn trivial_downgrade_keeps_the_cone() {
        let dd = DowngradeData::new(&imat(&[&[1, 0], &[0, 1]]), 2, None).unwrap();
        let d = downgrade_cone(&quadrant(), &dd).unwrap();
        assert_eq!(d.tail(), &quadrant());
        assert!(d.base().primes().is_empty());
    }

    #[test]
    fn quadrant_gives_the_blowup_divisor() {
        let dd = DowngradeData::new(&imat(&[&[1, 1]]), 2, None).unwrap();
        let d = downgrade_cone(&quadrant(), &dd).unwrap();
        let b = d.base();
        assert_eq!(d.coeff(b.lookup("D[-1]").unwrap()), TailedPolyhedron::interval(Some(qi(0)), None));
        assert_eq!(d.coeff(b.lookup("D[1]").unwrap()), TailedPolyhedron::interval(Some(qi(1)), None));
    }
}
