//! Named divisorial fans: Danilov-Gizatullin completions, projectivized
//! rank-2 toric bundles and projectivized cotangent bundles.

use crate::base::{BaseVariety, PrimeId};
use crate::error::ConstructionError;
use crate::fan::{generate_fan, DivisorialFan};
use crate::geom::linalg::{inverse, rank};
use crate::geom::rational::{primitive_up_to_sign, q, qvec, sub, to_integers, unit_vec, zero_vec, Q, QVec};
use crate::geom::{Cone, TailedPolyhedron};
use crate::par;
use crate::ppdiv::PPDivisor;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Parameters of a Danilov-Gizatullin fan on P¹ with points p0, p1 and ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGParams {
    pub r: i64,
    pub s: i64,
    pub p0: String,
    pub p1: String,
}

impl DGParams {
    pub fn new(r: i64, s: i64) -> DGParams {
        DGParams { r, s, p0: "p0".into(), p1: "p1".into() }
    }
}

/// Name of the point at infinity in Danilov-Gizatullin fans.
pub const INFINITY: &str = "inf";

/// The generators D⁻, D⁰, D⁺ in this order.
pub fn danilov_gizatullin_generators(params: &DGParams) -> Result<Vec<PPDivisor>, ConstructionError> {
    if params.r < 1 || params.s < 1 {
        return Err(ConstructionError::InvalidParams("r and s must be at least 1".into()));
    }
    if params.p0 == params.p1 || params.p0 == INFINITY || params.p1 == INFINITY {
        return Err(ConstructionError::InvalidParams("the three points must be distinct".into()));
    }
    let base = Arc::new(BaseVariety::proj_line(&[params.p0.as_str(), params.p1.as_str(), INFINITY])?);
    let (ir, is) = (q(1, params.r), q(1, params.s));
    let iv = TailedPolyhedron::interval;
    let pos = Cone::from_rays(1, &[qvec(&[1])]);
    let neg = Cone::from_rays(1, &[qvec(&[-1])]);
    let minus = PPDivisor::new(
        base.clone(),
        neg,
        [(PrimeId(0), iv(None, Some(-ir.clone()))), (PrimeId(1), iv(None, Some(Q::zero())))],
    )?;
    let zero = PPDivisor::new(
        base.clone(),
        Cone::zero(1),
        [
            (PrimeId(0), iv(Some(-ir), Some(Q::zero()))),
            (PrimeId(1), iv(Some(Q::zero()), Some(is.clone()))),
            (PrimeId(2), TailedPolyhedron::empty(Cone::zero(1))),
        ],
    )?;
    let plus = PPDivisor::new(base, pos, [(PrimeId(0), iv(Some(Q::zero()), None)), (PrimeId(1), iv(Some(is), None))])?;
    Ok(vec![minus, zero, plus])
}

/// The closed and validated Danilov-Gizatullin fan.
pub fn danilov_gizatullin(params: &DGParams) -> Result<DivisorialFan, ConstructionError> {
    Ok(generate_fan(&danilov_gizatullin_generators(params)?)?)
}

/// A complete simplicial fan given by rays and maximal cones (ray indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanData {
    pub rays: Vec<QVec>,
    pub cones: Vec<Vec<usize>>,
}

impl FanData {
    pub fn dim(&self) -> usize {
        self.rays.first().map_or(0, Vec::len)
    }

    /// Fan of P² with rays e1, e2, -e1-e2.
    pub fn p2() -> FanData {
        FanData { rays: vec![qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[-1, -1])], cones: vec![vec![0, 1], vec![1, 2], vec![2, 0]] }
    }

    /// Fan of P¹.
    pub fn p1() -> FanData {
        FanData { rays: vec![qvec(&[1]), qvec(&[-1])], cones: vec![vec![0], vec![1]] }
    }

    /// Fan of the del Pezzo surface of degree 6 (hexagon).
    pub fn dp6() -> FanData {
        let rays = vec![qvec(&[1, 0]), qvec(&[1, 1]), qvec(&[0, 1]), qvec(&[-1, 0]), qvec(&[-1, -1]), qvec(&[0, -1])];
        let cones = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        FanData { rays, cones }
    }

    fn cone_rays(&self, k: usize) -> Vec<QVec> {
        self.cones[k].iter().map(|&i| self.rays[i].clone()).collect()
    }

    fn cone(&self, k: usize) -> Cone {
        Cone::from_rays(self.dim(), &self.cone_rays(k))
    }

    /// Dual basis of a smooth maximal cone: rows u_i with ⟨u_i, ρ_j⟩ = δ_ij.
    fn dual_basis(&self, k: usize) -> Result<Vec<QVec>, ConstructionError> {
        let rays = self.cone_rays(k);
        let n = self.dim();
        if rays.len() != n || rank(&rays, n) != n {
            return Err(ConstructionError::NotSmooth(k));
        }
        // Columns of the inverse of the ray matrix are the dual basis vectors.
        let inv = inverse(&rays).ok_or(ConstructionError::NotSmooth(k))?;
        let duals: Vec<QVec> = (0..n).map(|i| (0..n).map(|r| inv[r][i].clone()).collect()).collect();
        if duals.iter().any(|u| to_integers(u).is_none()) {
            return Err(ConstructionError::NotSmooth(k));
        }
        Ok(duals)
    }
}

fn half_space_in(cone: &Cone, w: &[Q], rhs: Q, geq: bool) -> Result<TailedPolyhedron, ConstructionError> {
    let h = cone.hrep();
    let mut ineqs: Vec<(QVec, Q)> = h.ineqs.iter().map(|a| (a.clone(), Q::zero())).collect();
    let eqs: Vec<(QVec, Q)> = h.eqs.iter().map(|a| (a.clone(), Q::zero())).collect();
    if geq {
        ineqs.push((w.to_vec(), rhs));
    } else {
        ineqs.push((w.iter().map(|x| -x).collect(), -rhs));
    }
    Ok(TailedPolyhedron::from_constraints(cone.ambient_dim(), &ineqs, &eqs)?)
}

/// Point name of the hyperplane u^⊥, canonical up to sign.
pub fn hyperplane_name(u: &[Q]) -> String {
    let p = primitive_up_to_sign(u);
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("H[{}]", parts.join(","))
}

/// Generators D^i_σ of the projectivized cotangent bundle, cone by cone.
pub fn cotangent_generators(sigma: &FanData) -> Result<Vec<PPDivisor>, ConstructionError> {
    let n = sigma.dim();
    if !(2..=3).contains(&n) {
        return Err(ConstructionError::InvalidParams("cotangent fans are supported in rank 2 and 3".into()));
    }
    let duals: Vec<Vec<QVec>> = (0..sigma.cones.len()).map(|k| sigma.dual_basis(k)).collect::<Result<_, _>>()?;
    // Primes: hyperplanes u^⊥, identified up to sign across cones.
    let mut names: Vec<String> = Vec::new();
    let mut normals: Vec<QVec> = Vec::new();
    for u in duals.iter().flatten() {
        let name = hyperplane_name(u);
        if !names.contains(&name) {
            names.push(name);
            normals.push(primitive_up_to_sign(u));
        }
    }
    let mut order: Vec<usize> = (0..names.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let (names, normals): (Vec<String>, Vec<QVec>) = order.into_iter().map(|k| (names[k].clone(), normals[k].clone())).unzip();
    let base = if n == 2 {
        BaseVariety::proj_line(&names)?
    } else {
        let hyper: Vec<(String, Q)> = names.iter().map(|s| (s.clone(), Q::one())).collect();
        let mut incidence: Vec<Vec<String>> = Vec::new();
        for i in 0..normals.len() {
            for j in i + 1..normals.len() {
                let pair = [normals[i].clone(), normals[j].clone()];
                let set: Vec<String> = (0..normals.len())
                    .filter(|&k| rank(&[pair[0].clone(), pair[1].clone(), normals[k].clone()], n) == 2)
                    .map(|k| names[k].clone())
                    .collect();
                if set.len() >= 3 && !incidence.contains(&set) {
                    incidence.push(set);
                }
            }
        }
        BaseVariety::proj_space(n - 1, &hyper, &incidence)?
    };
    let base = Arc::new(base);
    let per_cone = par::map(&(0..sigma.cones.len()).collect::<Vec<_>>(), |&k| {
        let cone = sigma.cone(k);
        let u = &duals[k];
        let mut out = Vec::new();
        for i in 0..n {
            let mut coeffs: BTreeMap<PrimeId, TailedPolyhedron> = BTreeMap::new();
            let mut tail = None;
            for j in 0..n {
                let h = cone.hrep();
                let mut ineqs: Vec<(QVec, Q)> = h.ineqs.iter().map(|a| (a.clone(), Q::zero())).collect();
                for (kk, uk) in u.iter().enumerate() {
                    let rhs = Q::from_integer(((i == j) as i64 - (j == kk) as i64).into());
                    ineqs.push((sub(uk, &u[i]), rhs));
                }
                let delta = TailedPolyhedron::from_constraints(n, &ineqs, &[])?;
                tail.get_or_insert_with(|| delta.tail().clone());
                let prime = base.lookup(&hyperplane_name(&u[j]))?;
                coeffs.insert(prime, delta);
            }
            out.push(PPDivisor::new(base.clone(), tail.expect("n >= 1"), coeffs)?);
        }
        Ok::<_, ConstructionError>(out)
    });
    let mut gens = Vec::new();
    for c in per_cone {
        gens.extend(c?);
    }
    Ok(gens)
}

/// The validated cotangent fan.
pub fn cotangent_fan(sigma: &FanData) -> Result<DivisorialFan, ConstructionError> {
    Ok(generate_fan(&cotangent_generators(sigma)?)?)
}

/// Per-cone data of a split-type rank-2 toric bundle: two characters and the
/// points of P¹ carrying the corresponding lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2ConeData {
    pub u1: QVec,
    pub u2: QVec,
    pub p1: String,
    pub p2: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank2BundleData {
    pub fan: FanData,
    /// One entry per maximal cone, in the order of `fan.cones`.
    pub cones: Vec<Rank2ConeData>,
}

/// Jump data of the filtration on a ray: the two weights, sorted, and the
/// point of the line carrying the larger weight when they differ. That line
/// is the intermediate step of the filtration, so it is shared by all cones
/// containing the ray.
fn ray_jump(d: &Rank2ConeData, ray: &[Q]) -> (Q, Q, Option<String>) {
    let a = crate::geom::rational::dot(&d.u1, ray);
    let b = crate::geom::rational::dot(&d.u2, ray);
    match a.cmp(&b) {
        std::cmp::Ordering::Less => (a, b, Some(d.p2.clone())),
        std::cmp::Ordering::Greater => (b, a, Some(d.p1.clone())),
        std::cmp::Ordering::Equal => (a, b, None),
    }
}

/// Generators D^±_σ for every maximal cone, in cone order.
pub fn rank2_generators(data: &Rank2BundleData) -> Result<Vec<PPDivisor>, ConstructionError> {
    let fan = &data.fan;
    let n = fan.dim();
    if data.cones.len() != fan.cones.len() {
        return Err(ConstructionError::InvalidParams("one data entry per maximal cone is required".into()));
    }
    for k in 0..fan.cones.len() {
        fan.dual_basis(k)?;
        let d = &data.cones[k];
        if d.u1.len() != n || d.u2.len() != n || to_integers(&d.u1).is_none() || to_integers(&d.u2).is_none() {
            return Err(ConstructionError::InvalidParams(format!("characters of cone {k} must be integral of rank {n}")));
        }
        if d.p1 == d.p2 {
            return Err(ConstructionError::InvalidParams(format!("cone {k} uses the same point twice")));
        }
    }
    for (ri, ray) in fan.rays.iter().enumerate() {
        let mut seen: Option<(Q, Q, Option<String>)> = None;
        for (k, c) in fan.cones.iter().enumerate() {
            if c.contains(&ri) {
                let j = ray_jump(&data.cones[k], ray);
                match &seen {
                    None => seen = Some(j),
                    Some(s) if *s != j => return Err(ConstructionError::InconsistentRay(crate::base::ray_name(ray))),
                    _ => {}
                }
            }
        }
    }
    let mut names: Vec<String> = Vec::new();
    for d in &data.cones {
        for p in [&d.p1, &d.p2] {
            if !names.contains(p) {
                names.push(p.clone());
            }
        }
    }
    names.sort();
    let base = Arc::new(BaseVariety::proj_line(&names)?);
    let mut gens = Vec::new();
    for (k, d) in data.cones.iter().enumerate() {
        let cone = fan.cone(k);
        let w = sub(&d.u1, &d.u2);
        let (p1, p2) = (base.lookup(&d.p1)?, base.lookup(&d.p2)?);
        let delta1 = half_space_in(&cone, &w, Q::one(), true)?;
        let nabla1 = half_space_in(&cone, &w, Q::one(), false)?;
        let delta2 = half_space_in(&cone, &w, -Q::one(), false)?;
        let nabla2 = half_space_in(&cone, &w, -Q::one(), true)?;
        let tail_plus = half_space_in(&cone, &w, Q::zero(), true)?.tail().clone();
        let tail_minus = half_space_in(&cone, &w, Q::zero(), false)?.tail().clone();
        gens.push(PPDivisor::new(base.clone(), tail_plus, [(p1, delta1), (p2, nabla2)])?);
        gens.push(PPDivisor::new(base.clone(), tail_minus, [(p1, nabla1), (p2, delta2)])?);
    }
    Ok(gens)
}

/// The validated fan of the projectivized bundle.
pub fn rank2_projectivization(data: &Rank2BundleData) -> Result<DivisorialFan, ConstructionError> {
    Ok(generate_fan(&rank2_generators(data)?)?)
}

/// Bundle data of the cotangent bundle of a smooth complete surface: on each
/// cone the characters are the dual basis u_1, u_2, and the line of u_1 sits
/// over the point u_2^⊥ (and vice versa).
pub fn cotangent_bundle_data(fan: &FanData) -> Result<Rank2BundleData, ConstructionError> {
    if fan.dim() != 2 {
        return Err(ConstructionError::InvalidParams("rank-2 bundle data needs a surface fan".into()));
    }
    let cones = (0..fan.cones.len())
        .map(|k| {
            let u = fan.dual_basis(k)?;
            Ok(Rank2ConeData { p1: hyperplane_name(&u[1]), p2: hyperplane_name(&u[0]), u1: u[0].clone(), u2: u[1].clone() })
        })
        .collect::<Result<Vec<_>, ConstructionError>>()?;
    Ok(Rank2BundleData { fan: fan.clone(), cones })
}

/// O ⊕ O(1) on P¹: the lines sit over the points "0" and "inf".
pub fn split_p1_bundle() -> Rank2BundleData {
    let zero = zero_vec(1);
    Rank2BundleData {
        fan: FanData::p1(),
        cones: vec![
            Rank2ConeData { u1: zero.clone(), u2: unit_vec(1, 0), p1: "0".into(), p2: "inf".into() },
            Rank2ConeData { u1: zero.clone(), u2: zero, p1: "0".into(), p2: "inf".into() },
        ],
    }
}

/// Tail cones of the maximal members of a fan.
pub fn tail_fan(fan: &DivisorialFan) -> Vec<Cone> {
    let mut tails: Vec<Cone> = fan.divisors().iter().map(|d| d.tail().clone()).collect();
    tails.sort();
    tails.dedup();
    crate::geom::complex::maximal_cones(&tails)
}

/// Two divisors with tail {0} over primes "D1" and "D2":
/// `([−1,0], [0,1])` and `([0,1], [−1,0])`. With `incident` the primes are the
/// coordinate axes of the affine plane, otherwise two points of the line.
pub fn noncoherent_pair(incident: bool) -> Result<Vec<PPDivisor>, ConstructionError> {
    let base = if incident {
        let a2 = BaseVariety::toric(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[vec![0, 1]])?;
        BaseVariety::rename(a2, &[("D[1,0]", "D1"), ("D[0,1]", "D2")])?
    } else {
        BaseVariety::affine_line(&["D1", "D2"])?
    };
    let base = Arc::new(base);
    let iv = |a: i64, b: i64| TailedPolyhedron::interval(Some(Q::from_integer(a.into())), Some(Q::from_integer(b.into())));
    let zero = Cone::zero(1);
    Ok(vec![
        PPDivisor::with_names(base.clone(), zero.clone(), &[("D1", iv(-1, 0)), ("D2", iv(0, 1))])?,
        PPDivisor::with_names(base, zero, &[("D1", iv(0, 1)), ("D2", iv(-1, 0))])?,
    ])
}

/// Affine charts K[x,y,s,t/y,xy²/t] and K[x,y,1/s,ty²,x/(ty)] of a
/// non-separated threefold, graded by (−deg s, deg t). The quotient is the
/// affine plane with coordinates x, y, i.e. primes `D[1,0]` and `D[0,1]`.
pub fn nonseparated_charts() -> (crate::downgrade::DowngradeData, [Cone; 2]) {
    let deg = crate::geom::lattice::imat(&[&[0, 0, -1, 0], &[0, 0, 0, 1]]);
    let dd = crate::downgrade::DowngradeData::new(&deg, 4, None).expect("surjective grading");
    let chart = |gens: [[i64; 4]; 5]| Cone::from_rays(4, &gens.map(|g| qvec(&g))).dual();
    let c1 = chart([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1], [1, 2, 0, -1]]);
    let c2 = chart([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 2, 0, 1], [1, -1, 0, -1]]);
    (dd, [c1, c2])
}

/// The two divisors of [`nonseparated_charts`].
pub fn nonseparated_pair() -> Result<Vec<PPDivisor>, ConstructionError> {
    let (dd, cones) = nonseparated_charts();
    Ok(crate::downgrade::downgrade_fan(&cones, &dd)?)
}

/// Four divisors on P² over two lines "D" and "E" whose prime slices cover Q
/// but whose slice at the intersection point D ∩ E does not.
pub fn noncomplete_p2() -> Result<Vec<PPDivisor>, ConstructionError> {
    let base = Arc::new(BaseVariety::proj_space(2, &[("D".to_string(), Q::one()), ("E".to_string(), Q::one())], &[])?);
    let n = |x: i64| Some(Q::from_integer(x.into()));
    let iv = TailedPolyhedron::interval;
    let pos = Cone::from_rays(1, &[qvec(&[1])]);
    let neg = Cone::from_rays(1, &[qvec(&[-1])]);
    let zero = Cone::zero(1);
    Ok(vec![
        PPDivisor::with_names(base.clone(), pos, &[("D", iv(n(1), None)), ("E", iv(n(0), None))])?,
        PPDivisor::with_names(base.clone(), zero.clone(), &[("D", iv(n(0), n(1))), ("E", TailedPolyhedron::empty(zero.clone()))])?,
        PPDivisor::with_names(base.clone(), zero.clone(), &[("D", TailedPolyhedron::empty(zero)), ("E", iv(n(-1), n(0)))])?,
        PPDivisor::with_names(base, neg, &[("D", iv(None, n(0))), ("E", iv(None, n(-1)))])?,
    ])
}
