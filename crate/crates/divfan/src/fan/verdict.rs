//! Slices of a fan and the separateness/completeness verdicts.
//!
//! Verdicts are three-valued: a proof, a refutation with a witness weight
//! function, or "passed on every sampled weight function".

use super::coherence::{check_coherence, Coherence};
use super::DivisorialFan;
use crate::base::PrimeSet;
use crate::error::FanError;
use crate::geom::complex::{covers_complex, is_polyhedral_complex};
use crate::geom::rational::Q;
use crate::geom::TailedPolyhedron;
use crate::ppdiv::WeightFunction;
use std::collections::BTreeSet;

/// Default bound on integral weights in enumerated weight functions.
pub const DEFAULT_WEIGHT_BOUND: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub mu: WeightFunction,
    /// `cells[i]` is the weighted sum of member `i`.
    pub cells: Vec<TailedPolyhedron>,
    pub is_complex: bool,
    /// Covering of the whole space; only meaningful for complexes.
    pub covers: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatedReason {
    CurveBase,
    Coherent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeparatedVerdict {
    Separated(SeparatedReason),
    NotSeparated { witness: WeightFunction, pair: (usize, usize) },
    PassedSampled { tested: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompleteVerdict {
    Complete,
    /// `witness` is `None` when the base itself is not complete.
    NotComplete { witness: Option<WeightFunction> },
    PassedSampled { tested: usize },
}

/// The μ-slice of the fan.
pub fn slice(fan: &DivisorialFan, mu: &WeightFunction) -> Result<Slice, FanError> {
    let cells = fan.divisors().iter().map(|d| d.weighted_sum(mu)).collect::<Result<Vec<_>, _>>()?;
    let is_complex = is_polyhedral_complex(&cells);
    let covers = is_complex.then(|| covers_complex(&cells));
    Ok(Slice { mu: mu.clone(), cells, is_complex, covers })
}

fn check_realizable(fan: &DivisorialFan, mus: &[WeightFunction]) -> Result<(), FanError> {
    for mu in mus {
        if mu.terms().any(|(_, w)| w < &Q::from_integer(0.into())) || !fan.base().is_realizable(&mu.support()) {
            return Err(FanError::Unrealizable);
        }
    }
    Ok(())
}

/// Integral weight functions with weights in 1..=bound supported on point
/// classes, ordered by support size, total weight, then lexicographically.
pub fn enumerate_weights(fan: &DivisorialFan, bound: u32) -> Vec<WeightFunction> {
    let mut supports: BTreeSet<PrimeSet> = BTreeSet::new();
    for class in fan.base().point_classes() {
        let items: Vec<_> = class.iter().copied().collect();
        for mask in 1u32..(1 << items.len()) {
            supports.insert((0..items.len()).filter(|k| mask >> k & 1 == 1).map(|k| items[k]).collect());
        }
    }
    let mut out: Vec<(usize, u32, Vec<u32>, WeightFunction)> = Vec::new();
    for s in supports {
        let items: Vec<_> = s.iter().copied().collect();
        let mut w = vec![1u32; items.len()];
        loop {
            let mu = WeightFunction::from_pairs(items.iter().zip(&w).map(|(p, x)| (*p, Q::from_integer((*x).into()))));
            let mut key: Vec<u32> = vec![0; fan.base().primes().len()];
            for (p, x) in items.iter().zip(&w) {
                key[p.0] = *x;
            }
            out.push((items.len(), w.iter().sum(), key, mu));
            let Some(k) = (0..w.len()).find(|&k| w[k] < bound) else { break };
            w[k] += 1;
            for x in w.iter_mut().take(k) {
                *x = 1;
            }
        }
    }
    out.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));
    out.into_iter().map(|t| t.3).collect()
}

fn separation_failure(fan: &DivisorialFan, mu: &WeightFunction) -> Result<Option<(usize, usize)>, FanError> {
    let s = slice(fan, mu)?;
    for i in 0..fan.len() {
        for j in i + 1..fan.len() {
            let joint = s.cells[i].intersect(&s.cells[j])?;
            let meet = &s.cells[fan.meet(i, j)];
            let equal = (joint.is_empty() && meet.is_empty()) || joint == *meet;
            if !equal {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Separateness: proved for curve bases and coherent fans, otherwise
/// falsified by supplied and enumerated weight functions.
pub fn check_separated(fan: &DivisorialFan, mus: &[WeightFunction]) -> Result<SeparatedVerdict, FanError> {
    check_separated_with(fan, mus, DEFAULT_WEIGHT_BOUND)
}

pub fn check_separated_with(fan: &DivisorialFan, mus: &[WeightFunction], bound: u32) -> Result<SeparatedVerdict, FanError> {
    check_realizable(fan, mus)?;
    if fan.base().is_curve() {
        return Ok(SeparatedVerdict::Separated(SeparatedReason::CurveBase));
    }
    let coherence = check_coherence(fan.divisors())?;
    if coherence.values().all(|c| matches!(c, Coherence::Certified(_))) {
        return Ok(SeparatedVerdict::Separated(SeparatedReason::Coherent));
    }
    let candidates: Vec<WeightFunction> = mus.iter().cloned().chain(enumerate_weights(fan, bound)).collect();
    for mu in &candidates {
        if let Some(pair) = separation_failure(fan, mu)? {
            return Ok(SeparatedVerdict::NotSeparated { witness: mu.clone(), pair });
        }
    }
    Ok(SeparatedVerdict::PassedSampled { tested: candidates.len() })
}

fn slice_complete(fan: &DivisorialFan, mu: &WeightFunction) -> Result<bool, FanError> {
    let s = slice(fan, mu)?;
    Ok(s.is_complex && s.covers == Some(true))
}

/// Completeness: tail fan and prime slices must cover; on curves this is a
/// proof, elsewhere weighted slices are sampled.
pub fn check_complete(fan: &DivisorialFan, mus: &[WeightFunction]) -> Result<CompleteVerdict, FanError> {
    check_complete_with(fan, mus, DEFAULT_WEIGHT_BOUND)
}

pub fn check_complete_with(fan: &DivisorialFan, mus: &[WeightFunction], bound: u32) -> Result<CompleteVerdict, FanError> {
    check_realizable(fan, mus)?;
    if !fan.base().is_complete() {
        return Ok(CompleteVerdict::NotComplete { witness: None });
    }
    let tail = WeightFunction::new();
    if !slice_complete(fan, &tail)? {
        return Ok(CompleteVerdict::NotComplete { witness: Some(tail) });
    }
    for p in fan.base().prime_ids() {
        let mu = WeightFunction::from_pairs([(p, Q::from_integer(1.into()))]);
        if !slice_complete(fan, &mu)? {
            return Ok(CompleteVerdict::NotComplete { witness: Some(mu) });
        }
    }
    if fan.base().is_curve() {
        return Ok(CompleteVerdict::Complete);
    }
    if let SeparatedVerdict::NotSeparated { witness, .. } = check_separated_with(fan, mus, bound)? {
        return Ok(CompleteVerdict::NotComplete { witness: Some(witness) });
    }
    let candidates: Vec<WeightFunction> = mus.iter().cloned().chain(enumerate_weights(fan, bound)).collect();
    for mu in &candidates {
        if !slice_complete(fan, mu)? {
            return Ok(CompleteVerdict::NotComplete { witness: Some(mu.clone()) });
        }
    }
    Ok(CompleteVerdict::PassedSampled { tested: candidates.len() })
}
