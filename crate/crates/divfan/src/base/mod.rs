//! Desk-scale base varieties: named prime divisors, degrees, incidence, and a
//! linear-equivalence oracle.
//!
//! Points are never stored. A point is represented by its incidence class,
//! the set of primes passing through it; the generic point has the empty class.

mod toric;

pub(crate) use toric::{in_relative_interior_of_dual, ToricLocus};

use crate::error::BaseError;
use crate::geom::complex::cones_cover;
use crate::geom::lattice::{solve_integer, IMat};
use crate::geom::linalg::{rank, solve};
use crate::geom::rational::{primitive, to_integers, Q, QVec};
use crate::geom::Cone;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Index of a prime divisor within its base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeId(pub usize);

pub type PrimeSet = BTreeSet<PrimeId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseKind {
    AffineLine,
    ProjLine,
    ProjSpace(usize),
    /// Toric base; each prime is the divisor of one ray, cones index into rays.
    Toric { dim: usize, rays: Vec<QVec>, cones: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prime {
    pub name: String,
    /// `None` on toric bases.
    pub degree: Option<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseVariety {
    kind: BaseKind,
    primes: Vec<Prime>,
    /// Declared incidence sets beyond the ones implied by the kind.
    declared: Vec<PrimeSet>,
    complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Principal {
    Yes,
    No,
    Unknown,
}

/// Rational Weil divisor; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QDivisor {
    coeffs: BTreeMap<PrimeId, Q>,
}

impl QDivisor {
    pub fn new() -> QDivisor {
        QDivisor::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (PrimeId, Q)>) -> QDivisor {
        let mut d = QDivisor::new();
        for (p, c) in pairs {
            d.add_term(p, c);
        }
        d
    }

    pub fn get(&self, p: PrimeId) -> Q {
        self.coeffs.get(&p).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, p: PrimeId, c: Q) {
        let v = self.get(p) + c;
        if v.is_zero() {
            self.coeffs.remove(&p);
        } else {
            self.coeffs.insert(p, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (PrimeId, &Q)> {
        self.coeffs.iter().map(|(p, c)| (*p, c))
    }

    pub fn support(&self) -> PrimeSet {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.values().all(|c| c.is_positive())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &QDivisor) -> QDivisor {
        let mut d = self.clone();
        for (p, c) in other.terms() {
            d.add_term(p, c.clone());
        }
        d
    }

    pub fn sub(&self, other: &QDivisor) -> QDivisor {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> QDivisor {
        QDivisor::from_pairs(self.terms().map(|(p, x)| (p, x * c)))
    }

    /// Drops the terms at the given primes.
    pub fn restrict_away(&self, drop: &PrimeSet) -> QDivisor {
        QDivisor::from_pairs(self.terms().filter(|(p, _)| !drop.contains(p)).map(|(p, c)| (p, c.clone())))
    }
}

impl BaseVariety {
    fn build(kind: BaseKind, primes: Vec<Prime>, declared: Vec<PrimeSet>, complete: bool) -> Result<Self, BaseError> {
        let mut seen = BTreeSet::new();
        for p in &primes {
            if !seen.insert(p.name.clone()) {
                return Err(BaseError::DuplicatePrime(p.name.clone()));
            }
        }
        for s in &declared {
            if s.iter().any(|p| p.0 >= primes.len()) {
                return Err(BaseError::BadIncidence("unknown prime index".into()));
            }
        }
        Ok(BaseVariety { kind, primes, declared, complete })
    }

    /// A¹ with the named points as primes.
    pub fn affine_line<S: AsRef<str>>(points: &[S]) -> Result<Self, BaseError> {
        let primes = points.iter().map(|n| Prime { name: n.as_ref().to_string(), degree: Some(Q::one()) }).collect();
        Self::build(BaseKind::AffineLine, primes, Vec::new(), false)
    }

    /// P¹ with the named points as primes.
    pub fn proj_line<S: AsRef<str>>(points: &[S]) -> Result<Self, BaseError> {
        let primes = points.iter().map(|n| Prime { name: n.as_ref().to_string(), degree: Some(Q::one()) }).collect();
        Self::build(BaseKind::ProjLine, primes, Vec::new(), true)
    }

    /// Pⁿ with named hypersurfaces of given degrees. Pairs are incident for
    /// n >= 2; larger incidence sets must be declared by name.
    pub fn proj_space<S: AsRef<str>>(n: usize, hypersurfaces: &[(S, Q)], incidence: &[Vec<S>]) -> Result<Self, BaseError> {
        if n == 0 {
            return Err(BaseError::BadIncidence("projective space needs n >= 1".into()));
        }
        let primes: Vec<Prime> = hypersurfaces
            .iter()
            .map(|(name, d)| Prime { name: name.as_ref().to_string(), degree: Some(d.clone()) })
            .collect();
        if primes.iter().any(|p| !p.degree.as_ref().is_some_and(|d| d.is_positive())) {
            return Err(BaseError::BadIncidence("hypersurface degrees must be positive".into()));
        }
        let lookup = |s: &S| {
            primes
                .iter()
                .position(|p| p.name == s.as_ref())
                .map(PrimeId)
                .ok_or_else(|| BaseError::UnknownPrime(s.as_ref().to_string()))
        };
        let mut declared = Vec::new();
        for set in incidence {
            let ids: PrimeSet = set.iter().map(lookup).collect::<Result<_, _>>()?;
            if ids.len() != set.len() {
                return Err(BaseError::BadIncidence("repeated hypersurface in an incidence set".into()));
            }
            declared.push(ids);
        }
        let kind = if n == 1 { BaseKind::ProjLine } else { BaseKind::ProjSpace(n) };
        Self::build(kind, primes, declared, true)
    }

    /// Toric base of a fan; primes are named by their primitive rays.
    pub fn toric(dim: usize, rays: &[QVec], cones: &[Vec<usize>]) -> Result<Self, BaseError> {
        let rays: Vec<QVec> = rays.iter().map(|r| primitive(r)).collect();
        if rays.iter().any(|r| r.len() != dim || r.iter().all(Q::is_zero)) {
            return Err(BaseError::BadIncidence("rays must be nonzero and of equal length".into()));
        }
        if cones.iter().flatten().any(|&i| i >= rays.len()) {
            return Err(BaseError::BadIncidence("cone refers to an unknown ray".into()));
        }
        let primes = rays.iter().map(|r| Prime { name: ray_name(r), degree: None }).collect();
        let geo: Vec<Cone> = cones.iter().map(|c| cone_of(dim, &rays, c)).collect();
        let complete = !geo.is_empty() && cones_cover(&geo);
        Self::build(BaseKind::Toric { dim, rays, cones: cones.to_vec() }, primes, Vec::new(), complete)
    }

    /// The same variety with some primes renamed.
    pub fn rename(self, names: &[(&str, &str)]) -> Result<Self, BaseError> {
        let mut primes = self.primes;
        for (from, to) in names {
            let p = primes.iter_mut().find(|p| p.name == *from).ok_or_else(|| BaseError::UnknownPrime(from.to_string()))?;
            p.name = to.to_string();
        }
        Self::build(self.kind, primes, self.declared, self.complete)
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn primes(&self) -> &[Prime] {
        &self.primes
    }

    pub fn prime_ids(&self) -> impl Iterator<Item = PrimeId> {
        (0..self.primes.len()).map(PrimeId)
    }

    pub fn name(&self, p: PrimeId) -> &str {
        &self.primes[p.0].name
    }

    pub fn lookup(&self, name: &str) -> Result<PrimeId, BaseError> {
        self.primes
            .iter()
            .position(|p| p.name == name)
            .map(PrimeId)
            .ok_or_else(|| BaseError::UnknownPrime(name.to_string()))
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Smooth curve bases.
    pub fn is_curve(&self) -> bool {
        match &self.kind {
            BaseKind::AffineLine | BaseKind::ProjLine => true,
            BaseKind::ProjSpace(n) => *n == 1,
            BaseKind::Toric { dim, .. } => *dim == 1,
        }
    }

    pub fn declared_incidence(&self) -> &[PrimeSet] {
        &self.declared
    }

    /// Incidence classes of points, generic point first, then by size.
    pub fn point_classes(&self) -> Vec<PrimeSet> {
        let mut out: Vec<PrimeSet> = vec![PrimeSet::new()];
        match &self.kind {
            BaseKind::Toric { dim, rays, cones } => {
                for c in cones {
                    for f in cone_of(*dim, rays, c).faces() {
                        out.push(c.iter().copied().filter(|&i| f.contains(&rays[i])).map(PrimeId).collect());
                    }
                }
            }
            kind => {
                out.extend(self.prime_ids().map(|p| PrimeSet::from([p])));
                if matches!(kind, BaseKind::ProjSpace(n) if *n >= 2) {
                    for i in 0..self.primes.len() {
                        for j in i + 1..self.primes.len() {
                            out.push(PrimeSet::from([PrimeId(i), PrimeId(j)]));
                        }
                    }
                }
                out.extend(self.declared.iter().cloned());
            }
        }
        let mut seen = BTreeSet::new();
        out.retain(|s| seen.insert(s.clone()));
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// Whether some point lies on exactly these primes (or on a superset).
    pub fn is_realizable(&self, primes: &PrimeSet) -> bool {
        self.point_classes().iter().any(|c| primes.is_subset(c))
    }

    pub fn is_point_class(&self, primes: &PrimeSet) -> bool {
        self.point_classes().contains(primes)
    }

    pub fn divisor_degree(&self, d: &QDivisor) -> Result<Q, BaseError> {
        let mut acc = Q::zero();
        for (p, c) in d.terms() {
            let deg = self.primes.get(p.0).ok_or_else(|| BaseError::UnknownPrime(format!("#{}", p.0)))?;
            acc += c * deg.degree.as_ref().ok_or(BaseError::DegreeUndefined)?;
        }
        Ok(acc)
    }

    /// Linear equivalence to zero of an integral divisor. Non-integral
    /// divisors are never principal; see [`Self::is_q_principal`].
    pub fn is_principal(&self, d: &QDivisor) -> Principal {
        if !d.is_integral() {
            return Principal::No;
        }
        match &self.kind {
            BaseKind::AffineLine => Principal::Yes,
            BaseKind::ProjLine | BaseKind::ProjSpace(_) => match self.divisor_degree(d) {
                Ok(x) if x.is_zero() => Principal::Yes,
                Ok(_) => Principal::No,
                Err(_) => Principal::Unknown,
            },
            BaseKind::Toric { dim, rays, .. } => {
                let dim = *dim;
                let rows: IMat = rays.iter().map(|r| to_integers(r).expect("rays are integral")).collect();
                let rhs: Vec<BigInt> = (0..rays.len()).map(|i| d.get(PrimeId(i)).to_integer()).collect();
                if solve_integer(&rows, &rhs, dim).is_some() {
                    Principal::Yes
                } else {
                    Principal::No
                }
            }
        }
    }

    /// Some positive multiple is principal.
    pub fn is_q_principal(&self, d: &QDivisor) -> Principal {
        match &self.kind {
            BaseKind::AffineLine => Principal::Yes,
            BaseKind::ProjLine | BaseKind::ProjSpace(_) => match self.divisor_degree(d) {
                Ok(x) if x.is_zero() => Principal::Yes,
                Ok(_) => Principal::No,
                Err(_) => Principal::Unknown,
            },
            BaseKind::Toric { dim, rays, .. } => {
                let rhs: QVec = (0..rays.len()).map(|i| d.get(PrimeId(i))).collect();
                if solve(rays, &rhs, *dim).is_some() {
                    Principal::Yes
                } else {
                    Principal::No
                }
            }
        }
    }

    /// Existence of an effective Q-divisor in the given degree class whose
    /// support contains `must_contain` and misses the point `avoid`.
    pub fn exists_effective_avoiding(&self, cls_degree: &Q, must_contain: &PrimeSet, avoid: &PrimeSet) -> Result<bool, BaseError> {
        match &self.kind {
            BaseKind::Toric { .. } => Err(BaseError::DegreeUndefined),
            BaseKind::AffineLine => Ok(must_contain.is_disjoint(avoid)),
            BaseKind::ProjLine | BaseKind::ProjSpace(_) => Ok((must_contain.is_empty() && cls_degree.is_zero())
                || (cls_degree.is_positive() && must_contain.is_disjoint(avoid))),
        }
    }

    /// Whether every Q-divisor class is trivial on the complement of `removed`.
    pub fn locus_class_trivial(&self, removed: &PrimeSet) -> bool {
        match &self.kind {
            BaseKind::AffineLine => true,
            BaseKind::ProjLine | BaseKind::ProjSpace(_) => !removed.is_empty(),
            BaseKind::Toric { dim, rays, .. } => {
                let kept: Vec<QVec> =
                    (0..rays.len()).filter(|i| !removed.contains(&PrimeId(*i))).map(|i| rays[i].clone()).collect();
                rank(&kept, *dim) == kept.len()
            }
        }
    }

    /// Invariant linear systems on the toric locus left after removing primes.
    pub(crate) fn toric_locus(&self, removed: &PrimeSet) -> Option<ToricLocus> {
        match &self.kind {
            BaseKind::Toric { dim, rays, cones } => Some(ToricLocus::new(*dim, rays, cones, removed)),
            _ => None,
        }
    }

    /// Maximal cones of a toric base as geometric cones.
    pub fn toric_cones(&self) -> Option<Vec<Cone>> {
        match &self.kind {
            BaseKind::Toric { dim, rays, cones } => Some(cones.iter().map(|c| cone_of(*dim, rays, c)).collect()),
            _ => None,
        }
    }
}

fn cone_of(dim: usize, rays: &[QVec], idx: &[usize]) -> Cone {
    let gens: Vec<QVec> = idx.iter().map(|&i| rays[i].clone()).collect();
    Cone::from_rays(dim, &gens)
}

/// Prime name of a toric ray, e.g. `D[1,-1]`.
pub fn ray_name(r: &[Q]) -> String {
    let parts: Vec<String> = r.iter().map(|x| x.to_string()).collect();
    format!("D[{}]", parts.join(","))
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::AffineLine => write!(f, "A1"),
            BaseKind::ProjLine => write!(f, "P1"),
            BaseKind::ProjSpace(n) => write!(f, "P{n}"),
            BaseKind::Toric { dim, .. } => write!(f, "toric(rank {})", dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::{q, qi, qvec};

    fn p1() -> BaseVariety {
        BaseVariety::proj_line(&["0", "1", "inf"]).unwrap()
    }

    #[test]
    fn degrees_on_lines_and_planes() {
        let b = p1();
        let d = QDivisor::from_pairs([(PrimeId(0), q(-1, 2))]);
        assert_eq!(b.divisor_degree(&d), Ok(q(-1, 2)));
        assert_eq!(b.divisor_degree(&QDivisor::new()), Ok(qi(0)));
        let p2 = BaseVariety::proj_space(2, &[("H1", qi(1)), ("H2", qi(1))], &[]).unwrap();
        let d = QDivisor::from_pairs([(PrimeId(0), qi(2)), (PrimeId(1), qi(3))]);
        assert_eq!(p2.divisor_degree(&d), Ok(qi(5)));
    }

    #[test]
    fn principal_divisors() {
        let b = p1();
        let d = QDivisor::from_pairs([(PrimeId(0), qi(1)), (PrimeId(1), qi(-1))]);
        assert_eq!(b.is_principal(&d), Principal::Yes);
        assert_eq!(b.is_principal(&QDivisor::from_pairs([(PrimeId(0), qi(1))])), Principal::No);
        let a1 = BaseVariety::affine_line(&["0", "1"]).unwrap();
        assert_eq!(a1.is_principal(&QDivisor::from_pairs([(PrimeId(1), qi(3))])), Principal::Yes);
        let a2 = BaseVariety::toric(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[vec![0, 1]]).unwrap();
        assert_eq!(a2.is_principal(&QDivisor::from_pairs([(PrimeId(0), qi(4))])), Principal::Yes);
        let p1t = BaseVariety::toric(1, &[qvec(&[1]), qvec(&[-1])], &[vec![0], vec![1]]).unwrap();
        assert!(p1t.is_complete());
        assert_eq!(p1t.is_principal(&QDivisor::from_pairs([(PrimeId(0), qi(1))])), Principal::No);
    }

    #[test]
    fn effective_avoiding() {
        let b = p1();
        let inf = PrimeSet::from([PrimeId(2)]);
        let zero = PrimeSet::from([PrimeId(0)]);
        assert_eq!(b.exists_effective_avoiding(&qi(1), &inf, &zero), Ok(true));
        assert_eq!(b.exists_effective_avoiding(&qi(0), &inf, &PrimeSet::new()), Ok(false));
        let p2 = BaseVariety::proj_space(2, &[("H", qi(1)), ("L", qi(1))], &[]).unwrap();
        let h = PrimeSet::from([PrimeId(0)]);
        let pt_on_h = PrimeSet::from([PrimeId(0), PrimeId(1)]);
        assert_eq!(p2.exists_effective_avoiding(&qi(1), &h, &pt_on_h), Ok(false));
    }

    #[test]
    fn point_classes_by_kind() {
        assert_eq!(p1().point_classes().len(), 4);
        let p2 = BaseVariety::proj_space(2, &[("D", qi(1)), ("E", qi(1)), ("F", qi(1))], &[]).unwrap();
        assert_eq!(p2.point_classes().len(), 1 + 3 + 3);
        let a2 = BaseVariety::toric(2, &[qvec(&[1, 0]), qvec(&[0, 1])], &[vec![0, 1]]).unwrap();
        assert_eq!(a2.point_classes().len(), 4);
        assert!(!a2.is_complete());
        assert_eq!(a2.name(PrimeId(1)), "D[0,1]");
    }
}
