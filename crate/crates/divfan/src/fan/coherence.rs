//! Coherence certificates for pairs of polyhedral divisors.
//!
//! A certificate for (D^i, D^j) is a linear form u with constants c_P such
//! that max⟨Δ^i_P, u⟩ <= c_P <= min⟨Δ^j_P, u⟩ and both coefficients cut the
//! hyperplane ⟨·, u⟩ = c_P in the same set, for every prime P and for the
//! tails (where c = 0). The inequalities are homogeneous in (u, c), so the
//! feasible set is a cone F; on the relative interior of each face of F the
//! tight vertices, hence the slices, are constant. Testing one interior point
//! per face therefore decides coherence exactly.

use crate::base::PrimeId;
use crate::error::FanError;
use crate::geom::rational::{is_zero, primitive, Q, QVec};
use crate::geom::{Cone, Extended, TailedPolyhedron};
use crate::par;
use crate::ppdiv::PPDivisor;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Faces of the feasible cone examined before giving up.
pub const FACE_CAP: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub u: QVec,
    /// Constants at listed primes; unlisted primes use 0.
    pub c: BTreeMap<PrimeId, Q>,
}

impl Certificate {
    pub fn c_at(&self, p: PrimeId) -> Q {
        self.c.get(&p).cloned().unwrap_or_else(Q::zero)
    }

    /// The certificate of the reversed pair: (−u, −c).
    pub fn reversed(&self) -> Certificate {
        Certificate { u: crate::geom::rational::neg(&self.u), c: self.c.iter().map(|(p, c)| (*p, -c.clone())).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coherence {
    Certified(Certificate),
    Refuted,
    Unknown,
}

impl Coherence {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            Coherence::Certified(c) => Some(c),
            _ => None,
        }
    }
}

fn max_of(p: &TailedPolyhedron, u: &[Q]) -> Extended {
    match p.eval_min(&crate::geom::rational::neg(u)) {
        Extended::Finite(x) => Extended::Finite(-x),
        Extended::NegInf => Extended::PosInf,
        Extended::PosInf => Extended::NegInf,
    }
}

/// Δ ∩ {⟨·, u⟩ = c}; `None` when empty. At the extremes this is a face.
fn slice_key(p: &TailedPolyhedron, u: &[Q], c: &Q) -> Option<TailedPolyhedron> {
    if p.is_empty() {
        return None;
    }
    let at = Extended::Finite(c.clone());
    if p.eval_min(u) == at {
        return p.face_at(u).ok();
    }
    if max_of(p, u) == at {
        return p.face_at(&crate::geom::rational::neg(u)).ok();
    }
    hyperplane_slice(p, u, c)
}

fn primes_of(a: &PPDivisor, b: &PPDivisor) -> Vec<PrimeId> {
    let s: BTreeSet<PrimeId> = a.listed_primes().union(&b.listed_primes()).copied().collect();
    s.into_iter().collect()
}

/// Independent check of a certificate for the ordered pair (a, b).
pub fn verify(a: &PPDivisor, b: &PPDivisor, cert: &Certificate) -> bool {
    if !a.same_base(b) || cert.u.len() != a.dim() {
        return false;
    }
    let tail_a = TailedPolyhedron::from_cone(a.tail());
    let tail_b = TailedPolyhedron::from_cone(b.tail());
    let mut checks = vec![(tail_a, tail_b, Q::zero())];
    for p in primes_of(a, b) {
        checks.push((a.coeff(p), b.coeff(p), cert.c_at(p)));
    }
    checks.iter().all(|(x, y, c)| {
        let lo_ok = match max_of(x, &cert.u) {
            Extended::Finite(m) => &m <= c,
            Extended::NegInf => true,
            Extended::PosInf => false,
        };
        let hi_ok = match y.eval_min(&cert.u) {
            Extended::Finite(m) => c <= &m,
            Extended::PosInf => true,
            Extended::NegInf => false,
        };
        lo_ok && hi_ok && hyperplane_slice(x, &cert.u, c) == hyperplane_slice(y, &cert.u, c)
    })
}

/// Δ ∩ {⟨·, u⟩ = c} through the constraint representation.
fn hyperplane_slice(p: &TailedPolyhedron, u: &[Q], c: &Q) -> Option<TailedPolyhedron> {
    let h = p.hrep()?;
    let mut eqs = h.eqs.clone();
    if is_zero(u) {
        if !c.is_zero() {
            return None;
        }
    } else {
        eqs.push((u.to_vec(), c.clone()));
    }
    match TailedPolyhedron::from_constraints(p.dim(), &h.ineqs, &eqs) {
        Ok(TailedPolyhedron::Proper(x)) => Some(TailedPolyhedron::Proper(x)),
        _ => None,
    }
}

/// Decides coherence of the ordered pair (a, b).
pub fn coherence_pair(a: &PPDivisor, b: &PPDivisor) -> Result<Coherence, FanError> {
    if !a.same_base(b) {
        return Err(crate::error::DivisorError::BaseMismatch.into());
    }
    let n = a.dim();
    let primes = primes_of(a, b);
    let nv = n + primes.len();
    // Variables x = (u, c_P for P in primes); constraints <row, x> >= 0.
    let mut ineqs: Vec<QVec> = Vec::new();
    let row = |coef_u: &[Q], slot: Option<usize>, sign: i64| -> QVec {
        let mut r: QVec = coef_u.iter().map(|x| x * Q::from_integer(sign.into())).collect();
        r.resize(nv, Q::zero());
        if let Some(k) = slot {
            r[n + k] = Q::from_integer((-sign).into());
        }
        r
    };
    let tail_rows = |c: &Cone, sign: i64, ineqs: &mut Vec<QVec>| {
        for r in c.rays() {
            ineqs.push(row(r, None, sign));
        }
    };
    tail_rows(a.tail(), -1, &mut ineqs);
    tail_rows(b.tail(), 1, &mut ineqs);
    for (k, p) in primes.iter().enumerate() {
        let (x, y) = (a.coeff(*p), b.coeff(*p));
        // <u, v> <= c_P on x, <u, v> >= c_P on y.
        for v in x.vertices() {
            ineqs.push(row(v, Some(k), -1));
        }
        for v in y.vertices() {
            ineqs.push(row(v, Some(k), 1));
        }
        if !x.is_empty() {
            tail_rows(x.tail(), -1, &mut ineqs);
        }
        if !y.is_empty() {
            tail_rows(y.tail(), 1, &mut ineqs);
        }
    }
    let feasible = Cone::from_constraints(nv, &ineqs, &[]);
    let faces = feasible.faces();
    if faces.len() > FACE_CAP {
        return Ok(Coherence::Unknown);
    }
    let tail_pair = (TailedPolyhedron::from_cone(a.tail()), TailedPolyhedron::from_cone(b.tail()));
    let hit = par::find_first(&faces, |f| {
        let x = f.relative_interior_point();
        let u = &x[..n];
        let zero = Q::zero();
        let ok = slice_key(&tail_pair.0, u, &zero) == slice_key(&tail_pair.1, u, &zero)
            && primes.iter().enumerate().all(|(k, p)| {
                let c = &x[n + k];
                slice_key(&a.coeff(*p), u, c) == slice_key(&b.coeff(*p), u, c)
            });
        ok.then_some(x)
    });
    Ok(match hit {
        Some((_, x)) => Coherence::Certified(normalize(n, &primes, &x)),
        None => Coherence::Refuted,
    })
}

/// Scales so that u is a primitive integral vector.
fn normalize(n: usize, primes: &[PrimeId], x: &[Q]) -> Certificate {
    let u = &x[..n];
    let factor = if is_zero(u) {
        Q::one()
    } else {
        let p = primitive(u);
        let i = u.iter().position(|c| !c.is_zero()).expect("nonzero");
        &p[i] / &u[i]
    };
    let scaled: Vec<Q> = x.iter().map(|c| c * &factor).collect();
    Certificate {
        u: scaled[..n].to_vec(),
        c: primes.iter().enumerate().map(|(k, p)| (*p, scaled[n + k].clone())).filter(|(_, c)| !c.is_zero()).collect(),
    }
}

/// Coherence of every unordered pair i < j, in pair order.
pub fn check_coherence(divisors: &[PPDivisor]) -> Result<BTreeMap<(usize, usize), Coherence>, FanError> {
    let pairs = par::pairs(divisors.len());
    let results = par::map(&pairs, |&(i, j)| coherence_pair(&divisors[i], &divisors[j]));
    pairs.into_iter().zip(results).map(|(p, r)| Ok((p, r?))).collect()
}

/// The sum of two certificates, as used for intersections: from
/// (D^i, D^k) and (D^j, D^k) one proposes a certificate for (D^i ∩ D^j, D^k).
pub fn combine(a: &Certificate, b: &Certificate) -> Certificate {
    let u = crate::geom::rational::add(&a.u, &b.u);
    let keys: BTreeSet<PrimeId> = a.c.keys().chain(b.c.keys()).copied().collect();
    let c = keys
        .into_iter()
        .map(|p| (p, a.c_at(p) + b.c_at(p)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Certificate { u, c }
}
