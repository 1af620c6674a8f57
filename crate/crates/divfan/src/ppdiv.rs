//! Polyhedral divisors: evaluation, weighted sums, fibers, the pp test and
//! localization.

use crate::base::{BaseKind, BaseVariety, Principal, PrimeId, PrimeSet, QDivisor};
use crate::error::DivisorError;
use crate::geom::rational::{add, dot, scale, Q, QVec};
use crate::geom::{Cone, Extended, TailedPolyhedron};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// Finite formal sum of tailed polyhedra over prime divisors. Primes that are
/// not listed carry the tail cone; coefficients equal to the tail are never
/// stored, so structural equality is equality of divisors.
#[derive(Clone)]
pub struct PPDivisor {
    base: Arc<BaseVariety>,
    tail: Cone,
    coeffs: BTreeMap<PrimeId, TailedPolyhedron>,
}

impl PartialEq for PPDivisor {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base) && self.tail == other.tail && self.coeffs == other.coeffs
    }
}
impl Eq for PPDivisor {}

fn same_base(a: &Arc<BaseVariety>, b: &Arc<BaseVariety>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Nonnegative rational weights on prime divisors, finitely supported.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightFunction {
    weights: BTreeMap<PrimeId, Q>,
}

impl WeightFunction {
    pub fn new() -> WeightFunction {
        WeightFunction::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (PrimeId, Q)>) -> WeightFunction {
        let mut weights = BTreeMap::new();
        for (p, w) in pairs {
            if !w.is_zero() {
                weights.insert(p, w);
            }
        }
        WeightFunction { weights }
    }

    /// Weight 1 on every prime through the point.
    pub fn of_point(point: &PrimeSet) -> WeightFunction {
        WeightFunction::from_pairs(point.iter().map(|p| (*p, Q::from_integer(1.into()))))
    }

    pub fn get(&self, p: PrimeId) -> Q {
        self.weights.get(&p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (PrimeId, &Q)> {
        self.weights.iter().map(|(p, w)| (*p, w))
    }

    pub fn support(&self) -> PrimeSet {
        self.weights.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn add(&self, other: &WeightFunction) -> WeightFunction {
        let keys: BTreeSet<PrimeId> = self.weights.keys().chain(other.weights.keys()).copied().collect();
        WeightFunction::from_pairs(keys.into_iter().map(|p| (p, self.get(p) + other.get(p))))
    }
}

/// Outcome of the pp test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpVerdict {
    True,
    False,
    Unsupported,
}

impl PPDivisor {
    /// Builds a divisor; each proper coefficient must have tail exactly `tail`.
    pub fn new(
        base: Arc<BaseVariety>,
        tail: Cone,
        coeffs: impl IntoIterator<Item = (PrimeId, TailedPolyhedron)>,
    ) -> Result<PPDivisor, DivisorError> {
        if !tail.is_pointed() {
            return Err(DivisorError::TailNotPointed);
        }
        let dim = tail.ambient_dim();
        let default = TailedPolyhedron::from_cone(&tail);
        let mut map = BTreeMap::new();
        for (p, c) in coeffs {
            if p.0 >= base.primes().len() {
                return Err(crate::error::BaseError::UnknownPrime(format!("#{}", p.0)).into());
            }
            if c.dim() != dim {
                return Err(crate::error::GeomError::DimensionMismatch { expected: dim, found: c.dim() }.into());
            }
            let c = match c {
                TailedPolyhedron::Empty(_) => TailedPolyhedron::Empty(tail.clone()),
                TailedPolyhedron::Proper(ref poly) => {
                    if *poly.tail() != tail {
                        return Err(DivisorError::TailMismatch { prime: base.name(p).to_string() });
                    }
                    c
                }
            };
            if c != default {
                map.insert(p, c);
            }
        }
        Ok(PPDivisor { base, tail, coeffs: map })
    }

    /// Same as [`Self::new`] with primes given by name.
    pub fn with_names(
        base: Arc<BaseVariety>,
        tail: Cone,
        coeffs: &[(&str, TailedPolyhedron)],
    ) -> Result<PPDivisor, DivisorError> {
        let ids: Vec<(PrimeId, TailedPolyhedron)> =
            coeffs.iter().map(|(n, c)| Ok((base.lookup(n)?, c.clone()))).collect::<Result<_, DivisorError>>()?;
        PPDivisor::new(base, tail, ids)
    }

    pub fn base(&self) -> &Arc<BaseVariety> {
        &self.base
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn dim(&self) -> usize {
        self.tail.ambient_dim()
    }

    /// Coefficient at a prime; unlisted primes carry the tail.
    pub fn coeff(&self, p: PrimeId) -> TailedPolyhedron {
        self.coeffs.get(&p).cloned().unwrap_or_else(|| TailedPolyhedron::from_cone(&self.tail))
    }

    /// Explicitly stored coefficients (those different from the tail).
    pub fn listed(&self) -> impl Iterator<Item = (PrimeId, &TailedPolyhedron)> {
        self.coeffs.iter().map(|(p, c)| (*p, c))
    }

    pub fn listed_primes(&self) -> PrimeSet {
        self.coeffs.keys().copied().collect()
    }

    /// Primes with empty coefficient.
    pub fn irrelevant(&self) -> PrimeSet {
        self.coeffs.iter().filter(|(_, c)| c.is_empty()).map(|(p, _)| *p).collect()
    }

    pub fn same_base(&self, other: &PPDivisor) -> bool {
        same_base(&self.base, &other.base) && self.dim() == other.dim()
    }

    fn check_dual_tail(&self, u: &[Q]) -> Result<(), DivisorError> {
        if u.len() != self.dim() {
            return Err(crate::error::GeomError::DimensionMismatch { expected: self.dim(), found: u.len() }.into());
        }
        if self.tail.rays().iter().any(|r| dot(u, r).is_negative()) {
            return Err(DivisorError::OutsideDualTail);
        }
        Ok(())
    }

    /// D(u) = Σ min⟨u, Δ_P⟩ P over the locus; empty coefficients are skipped.
    pub fn evaluate(&self, u: &[Q]) -> Result<QDivisor, DivisorError> {
        self.check_dual_tail(u)?;
        let mut d = QDivisor::new();
        for (p, c) in &self.coeffs {
            match c.eval_min(u) {
                Extended::Finite(x) => d.add_term(*p, x),
                Extended::PosInf => {}
                Extended::NegInf => return Err(DivisorError::OutsideDualTail),
            }
        }
        Ok(d)
    }

    /// Σ μ(P)·Δ_P with 0·∅ = tail and ∅ absorbing.
    pub fn weighted_sum(&self, mu: &WeightFunction) -> Result<TailedPolyhedron, DivisorError> {
        let mut acc = TailedPolyhedron::from_cone(&self.tail);
        for (p, w) in mu.terms() {
            if w.is_negative() {
                return Err(DivisorError::NegativeWeight(self.base.name(p).to_string()));
            }
            if let Some(c) = self.coeffs.get(&p) {
                acc = acc.minkowski_sum(&c.scale(w)?)?;
            }
        }
        Ok(acc)
    }

    /// Δ_y for a point given by its incidence class.
    pub fn fiber_polyhedron(&self, point: &PrimeSet) -> Result<TailedPolyhedron, DivisorError> {
        if !self.base.is_point_class(point) {
            return Err(DivisorError::UndeclaredPoint);
        }
        self.weighted_sum(&WeightFunction::of_point(point))
    }

    /// Faces of Δ_y paired with their normal cones (orbits of the fiber).
    pub fn fiber_orbit_poset(&self, point: &PrimeSet) -> Result<Vec<(TailedPolyhedron, Cone)>, DivisorError> {
        let f = self.fiber_polyhedron(point)?;
        if f.is_empty() {
            return Err(DivisorError::EmptyFiber);
        }
        Ok(f.normal_fan()?)
    }

    /// deg D = Σ deg(P)·Δ_P on bases with degrees.
    pub fn degree(&self) -> Result<TailedPolyhedron, DivisorError> {
        if !matches!(self.base.kind(), BaseKind::ProjLine | BaseKind::ProjSpace(_)) {
            return Err(crate::error::BaseError::DegreeUndefined.into());
        }
        let mu = WeightFunction::from_pairs(
            self.coeffs.keys().map(|p| (*p, self.base.primes()[p.0].degree.clone().expect("projective degree"))),
        );
        self.weighted_sum(&mu)
    }

    /// The pp-criterion: D(u) semiample on the dual tail and big on its relative
    /// interior.
    pub fn is_pp(&self) -> PpVerdict {
        match self.base.kind() {
            BaseKind::AffineLine => PpVerdict::True,
            BaseKind::Toric { .. } => self.is_pp_toric(),
            BaseKind::ProjLine | BaseKind::ProjSpace(_) => self.is_pp_projective(),
        }
    }

    /// D is linear on each cell of the normal fan of the sum of its proper
    /// coefficients, and sums of semiample divisors are semiample, so cell
    /// generators decide semiampleness. Bigness is tested at one relative
    /// interior point per cell meeting the interior of the dual tail.
    fn is_pp_toric(&self) -> PpVerdict {
        let locus = self.base.toric_locus(&self.irrelevant()).expect("toric base");
        let mut sum = TailedPolyhedron::from_cone(&self.tail);
        for c in self.coeffs.values().filter(|c| !c.is_empty()) {
            match sum.minkowski_sum(c) {
                Ok(s) => sum = s,
                Err(_) => return PpVerdict::Unsupported,
            }
        }
        let Ok(cells) = sum.normal_fan() else {
            return PpVerdict::Unsupported;
        };
        let n = self.base.primes().len();
        let coeffs = |u: &[Q]| -> Option<Vec<Q>> {
            let d = self.evaluate(u).ok()?;
            Some((0..n).map(|i| d.get(PrimeId(i))).collect())
        };
        let mut generators: BTreeSet<QVec> = BTreeSet::new();
        for (_, c) in &cells {
            generators.extend(c.all_generators());
        }
        for g in &generators {
            match coeffs(g) {
                Some(a) if locus.is_semiample(&a) => {}
                Some(_) => return PpVerdict::False,
                None => return PpVerdict::Unsupported,
            }
        }
        for (_, c) in &cells {
            let u = c.relative_interior_point();
            if !crate::base::in_relative_interior_of_dual(&self.tail, &u) {
                continue;
            }
            match coeffs(&u) {
                Some(a) if locus.is_big(&a) => {}
                Some(_) => return PpVerdict::False,
                None => return PpVerdict::Unsupported,
            }
        }
        PpVerdict::True
    }

    fn is_pp_projective(&self) -> PpVerdict {
        let Ok(deg) = self.degree() else {
            return PpVerdict::Unsupported;
        };
        if deg.is_empty() {
            return PpVerdict::True;
        }
        let tail = TailedPolyhedron::from_cone(&self.tail);
        if !deg.is_subset_of(&tail) || deg == tail {
            return PpVerdict::False;
        }
        let Ok(fan) = deg.normal_fan() else {
            return PpVerdict::Unsupported;
        };
        let mut probes: BTreeSet<QVec> = BTreeSet::new();
        for (_, c) in &fan {
            probes.extend(c.all_generators());
        }
        for u in probes {
            if deg.eval_min(&u) != Extended::Finite(Q::zero()) {
                continue;
            }
            match self.evaluate(&u).map(|d| self.base.is_q_principal(&d)) {
                Ok(Principal::Yes) => {}
                Ok(Principal::No) => return PpVerdict::False,
                _ => return PpVerdict::Unsupported,
            }
        }
        PpVerdict::True
    }

    /// Coefficient-wise intersection.
    pub fn intersect(&self, other: &PPDivisor) -> Result<PPDivisor, DivisorError> {
        if !self.same_base(other) {
            return Err(DivisorError::BaseMismatch);
        }
        let tail = self.tail.intersect(&other.tail);
        let primes: BTreeSet<PrimeId> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        let mut coeffs = Vec::new();
        for p in primes {
            coeffs.push((p, self.coeff(p).intersect(&other.coeff(p))?));
        }
        PPDivisor::new(self.base.clone(), tail, coeffs)
    }

    /// Localization at a character `w` whose function has divisor
    /// `zero_set - D(w)`; primes in the support of `zero_set` become empty.
    pub fn localize(&self, w: &[Q], zero_set: &QDivisor) -> Result<PPDivisor, DivisorError> {
        self.check_dual_tail(w)?;
        if !zero_set.is_effective() {
            return Err(DivisorError::NotEffective);
        }
        let irr = self.irrelevant();
        let diff = zero_set.sub(&self.evaluate(w)?).restrict_away(&irr);
        let equivalent = diff.is_integral()
            && ((!irr.is_empty() && self.base.locus_class_trivial(&irr))
                || self.base.is_principal(&diff) == Principal::Yes);
        if !equivalent {
            return Err(DivisorError::NotEquivalent);
        }
        let tail = self.tail.face_at(w).ok_or(DivisorError::OutsideDualTail)?;
        let zeros = zero_set.support();
        let mut coeffs = Vec::new();
        for p in self.base.prime_ids() {
            let c = if zeros.contains(&p) {
                TailedPolyhedron::Empty(tail.clone())
            } else {
                self.coeff(p).face_at(w)?
            };
            coeffs.push((p, c));
        }
        PPDivisor::new(self.base.clone(), tail, coeffs)
    }

    /// Smallest k >= 0 for which every minimizer of u + k w lies in the w-face.
    pub fn localization_k_bound(&self, w: &[Q], u: &[Q]) -> Result<Q, DivisorError> {
        self.check_dual_tail(w)?;
        let mut bound = Q::zero();
        for r in self.tail.rays() {
            let wr = dot(w, r);
            if wr.is_positive() {
                bound = bound.max(-dot(u, r) / wr);
            } else if dot(u, r).is_negative() {
                return Err(DivisorError::OutsideDualTail);
            }
        }
        for c in self.coeffs.values() {
            let vs = c.vertices();
            if vs.is_empty() {
                continue;
            }
            let wmin = vs.iter().map(|v| dot(w, v)).min().expect("nonempty");
            let umin_face = vs.iter().filter(|v| dot(w, v) == wmin).map(|v| dot(u, v)).min().expect("nonempty");
            for v in vs {
                let gap = dot(w, v) - &wmin;
                if gap.is_positive() {
                    bound = bound.max((&umin_face - dot(u, v)) / gap);
                }
            }
        }
        Ok(bound)
    }

    /// Checks D_f(u) = D(u + k w) - D(k w) away from the zero set.
    pub fn localization_identity_check(&self, w: &[Q], zero_set: &QDivisor, u: &[Q], k: &Q) -> Result<bool, DivisorError> {
        let bound = self.localization_k_bound(w, u)?;
        if *k < bound {
            return Err(DivisorError::KTooSmall { k: k.to_string(), bound: bound.to_string() });
        }
        let local = self.localize(w, zero_set)?;
        let lhs = local.evaluate(u)?;
        let kw = scale(k, w);
        let rhs = self.evaluate(&add(u, &kw))?.sub(&self.evaluate(&kw)?);
        let mut away = zero_set.support();
        away.extend(local.irrelevant());
        Ok(lhs.restrict_away(&away) == rhs.restrict_away(&away))
    }
}

impl fmt::Debug for PPDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PPDivisor(tail={:?}", self.tail)?;
        for (p, c) in &self.coeffs {
            write!(f, ", {}: {:?}", self.base.name(*p), c)?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::{q, qi, qvec};

    fn iv(lo: Option<Q>, hi: Option<Q>) -> TailedPolyhedron {
        TailedPolyhedron::interval(lo, hi)
    }

    fn p1() -> Arc<BaseVariety> {
        Arc::new(BaseVariety::proj_line(&["0", "1", "inf"]).unwrap())
    }

    fn ray(sign: i64) -> Cone {
        Cone::from_rays(1, &[qvec(&[sign])])
    }

    fn blowup(b: &Arc<BaseVariety>) -> PPDivisor {
        PPDivisor::with_names(b.clone(), ray(1), &[("0", iv(Some(qi(0)), None)), ("inf", iv(Some(qi(1)), None))])
            .unwrap()
    }

    fn dg0(b: &Arc<BaseVariety>) -> PPDivisor {
        PPDivisor::with_names(
            b.clone(),
            Cone::zero(1),
            &[
                ("0", iv(Some(q(-1, 2)), Some(qi(0)))),
                ("1", iv(Some(qi(0)), Some(q(1, 3)))),
                ("inf", TailedPolyhedron::empty(Cone::zero(1))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let b = p1();
        let d = dg0(&b);
        assert_eq!(d.evaluate(&[qi(1)]).unwrap(), QDivisor::from_pairs([(PrimeId(0), q(-1, 2))]));
        assert_eq!(d.evaluate(&[qi(-1)]).unwrap(), QDivisor::from_pairs([(PrimeId(1), q(-1, 3))]));
        assert!(d.evaluate(&[qi(0)]).unwrap().is_zero());
        assert_eq!(blowup(&b).evaluate(&[qi(-1)]), Err(DivisorError::OutsideDualTail));
    }

    #[test]
    fn weighted_sums_and_fibers() {
        let b = p1();
        let d = dg0(&b);
        let mu = WeightFunction::from_pairs([(PrimeId(0), qi(1)), (PrimeId(1), qi(1))]);
        assert_eq!(d.weighted_sum(&mu).unwrap(), iv(Some(q(-1, 2)), Some(q(1, 3))));
        assert_eq!(d.weighted_sum(&WeightFunction::new()).unwrap(), TailedPolyhedron::point(vec![qi(0)]));
        assert_eq!(d.fiber_polyhedron(&PrimeSet::from([PrimeId(0)])).unwrap(), iv(Some(q(-1, 2)), Some(qi(0))));
        let bad = WeightFunction::from_pairs([(PrimeId(0), qi(-1))]);
        assert!(d.weighted_sum(&bad).is_err());
        assert_eq!(d.fiber_orbit_poset(&PrimeSet::from([PrimeId(0)])).unwrap().len(), 3);
    }

    #[test]
    fn degrees_and_pp() {
        let b = p1();
        assert_eq!(blowup(&b).degree().unwrap(), iv(Some(qi(1)), None));
        assert!(dg0(&b).degree().unwrap().is_empty());
        assert_eq!(blowup(&b).is_pp(), PpVerdict::True);
        let bad = PPDivisor::with_names(b.clone(), Cone::zero(1), &[("0", TailedPolyhedron::point(vec![qi(1)]))]).unwrap();
        assert_eq!(bad.is_pp(), PpVerdict::False);
        let a1 = Arc::new(BaseVariety::affine_line(&["0", "1"]).unwrap());
        let d = PPDivisor::with_names(a1, Cone::zero(1), &[("0", iv(Some(q(-1, 2)), Some(qi(0))))]).unwrap();
        assert_eq!(d.is_pp(), PpVerdict::True);
    }

    #[test]
    fn localization() {
        let b = p1();
        let d = blowup(&b);
        let z = QDivisor::from_pairs([(PrimeId(2), qi(1))]);
        let l = d.localize(&[qi(1)], &z).unwrap();
        assert_eq!(l.tail(), &Cone::zero(1));
        assert_eq!(l.coeff(PrimeId(0)), TailedPolyhedron::point(vec![qi(0)]));
        assert!(l.coeff(PrimeId(2)).is_empty());
        assert_eq!(d.localize(&[qi(0)], &QDivisor::new()).unwrap(), d);
        let bad = QDivisor::from_pairs([(PrimeId(1), qi(1)), (PrimeId(0), q(-1, 2))]);
        assert_eq!(dg0(&b).localize(&[qi(1)], &bad), Err(DivisorError::NotEffective));
        assert_eq!(d.localization_identity_check(&[qi(1)], &z, &[qi(0)], &qi(1)), Ok(true));
    }

    #[test]
    fn coefficients_equal_to_tail_are_dropped() {
        let b = p1();
        let d = PPDivisor::with_names(b, ray(1), &[("1", iv(Some(qi(0)), None))]).unwrap();
        assert_eq!(d.listed().count(), 0);
    }
}
