//! Divisorial fans: closure under intersection, validation, coherence,
//! slices and the separateness/completeness verdicts.

pub mod coherence;
pub mod face;
pub mod verdict;

pub use coherence::{check_coherence, Certificate, Coherence};
pub use face::is_face;
pub use verdict::{check_complete, check_separated, slice, CompleteVerdict, SeparatedVerdict, Slice};

use crate::base::BaseVariety;
use crate::error::FanError;
use crate::par;
use crate::ppdiv::{PPDivisor, PpVerdict};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Intersection-closed set of polyhedral divisors. The first
/// `generators.len()` members are the distinct generators, in input order.
#[derive(Clone, Debug)]
pub struct DivisorialFan {
    divisors: Vec<PPDivisor>,
    generators: Vec<usize>,
    /// meets[(i, j)] = index of D^i ∩ D^j, for i < j.
    meets: BTreeMap<(usize, usize), usize>,
}

/// Coefficient-wise intersection of two divisors.
pub fn intersect_divisors(a: &PPDivisor, b: &PPDivisor) -> Result<PPDivisor, FanError> {
    Ok(a.intersect(b)?)
}

impl DivisorialFan {
    pub fn divisors(&self) -> &[PPDivisor] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Indices of the generators within [`Self::divisors`].
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn base(&self) -> &Arc<BaseVariety> {
        self.divisors[0].base()
    }

    pub fn dim(&self) -> usize {
        self.divisors[0].dim()
    }

    /// Index of D^i ∩ D^j.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        if i == j {
            return i;
        }
        self.meets[&(i.min(j), i.max(j))]
    }

    /// Members that are not contained in another member.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| (0..self.len()).all(|j| j == i || self.meet(i, j) != i)).collect()
    }
}

/// Closes the generators under pairwise intersection without validating.
pub fn close_unchecked(gens: &[PPDivisor]) -> Result<DivisorialFan, FanError> {
    let first = gens.first().ok_or(FanError::NoGenerators)?;
    if gens.iter().any(|g| !g.same_base(first)) {
        return Err(crate::error::DivisorError::BaseMismatch.into());
    }
    let mut divisors: Vec<PPDivisor> = Vec::new();
    for g in gens {
        if !divisors.contains(g) {
            divisors.push(g.clone());
        }
    }
    let generators: Vec<usize> = (0..divisors.len()).collect();
    let mut meets = BTreeMap::new();
    let mut done = 0;
    while done < divisors.len() {
        let n = divisors.len();
        let todo: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).filter(|&(_, j)| j >= done).collect();
        let results = par::map(&todo, |&(i, j)| divisors[i].intersect(&divisors[j]));
        for ((i, j), r) in todo.into_iter().zip(results) {
            let m = r?;
            let idx = match divisors.iter().position(|d| *d == m) {
                Some(k) => k,
                None => {
                    divisors.push(m);
                    divisors.len() - 1
                }
            };
            meets.insert((i, j), idx);
        }
        done = n;
    }
    Ok(DivisorialFan { divisors, generators, meets })
}

/// Closes and validates: generators are pp, every intersection is a pp face
/// of both parents, and intersection is associative on generator triples.
pub fn generate_fan(gens: &[PPDivisor]) -> Result<DivisorialFan, FanError> {
    for (i, g) in gens.iter().enumerate() {
        match g.is_pp() {
            PpVerdict::True => {}
            PpVerdict::False => return Err(FanError::NotPp(i)),
            PpVerdict::Unsupported => return Err(FanError::PpUnsupported(i)),
        }
    }
    let fan = close_unchecked(gens)?;
    validate(&fan)?;
    Ok(fan)
}

fn validate(fan: &DivisorialFan) -> Result<(), FanError> {
    let pairs: Vec<(usize, usize)> = fan.meets.keys().copied().collect();
    let failure = par::find_first(&pairs, |&(i, j)| {
        let m = fan.meets[&(i, j)];
        let meet = &fan.divisors[m];
        for parent in [i, j] {
            if m == parent {
                continue;
            }
            match is_face(meet, &fan.divisors[parent]) {
                Ok(true) => {}
                Ok(false) => return Some(FanError::NotAFace { i, j, parent }),
                Err(e) => return Some(e),
            }
        }
        if m != i && m != j {
            match meet.is_pp() {
                PpVerdict::True => {}
                PpVerdict::False => return Some(FanError::IntersectionNotPp { i, j }),
                PpVerdict::Unsupported => return Some(FanError::PpUnsupported(m)),
            }
        }
        None
    });
    if let Some((_, e)) = failure {
        return Err(e);
    }
    let g = &fan.generators;
    for a in 0..g.len() {
        for b in a + 1..g.len() {
            for c in b + 1..g.len() {
                let (x, y, z) = (g[a], g[b], g[c]);
                if fan.meet(fan.meet(x, y), z) != fan.meet(x, fan.meet(y, z)) {
                    return Err(FanError::NotAssociative(x, y, z));
                }
            }
        }
    }
    Ok(())
}
