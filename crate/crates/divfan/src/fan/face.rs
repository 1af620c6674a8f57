//! The face relation between polyhedral divisors.
//!
//! For each point class y outside Irr(D') we look for u with
//! (a) face(Δ_y, u) = Δ'_y and face(tail, u) = tail',
//! (b) every prime where the u-faces disagree, and every prime of Irr(D'),
//!     misses y,
//! (c) some effective divisor in the class of D(u) on Loc(D) contains the
//!     primes of (b) and misses y.
//! Conditions (a) and (b) are constant on the relative interior of each cell
//! of the normal fan of Σ(Δ_P + Δ'_P), and D(u) is linear on each cell, so
//! testing one interior point per cell (and the cell generators for (c)) is
//! exhaustive.

use crate::base::{PrimeId, PrimeSet};
use crate::error::FanError;
use crate::geom::rational::Q;
use crate::geom::{Cone, TailedPolyhedron};
use crate::ppdiv::{PPDivisor, WeightFunction};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

fn same_face(a: &TailedPolyhedron, b: &TailedPolyhedron) -> bool {
    (a.is_empty() && b.is_empty()) || a == b
}

/// Whether `dprime` is a face of `d`.
pub fn is_face(dprime: &PPDivisor, d: &PPDivisor) -> Result<bool, FanError> {
    if !dprime.same_base(d) {
        return Err(crate::error::DivisorError::BaseMismatch.into());
    }
    if !d.tail().contains_cone(dprime.tail()) {
        return Ok(false);
    }
    let primes: BTreeSet<PrimeId> = dprime.listed_primes().union(&d.listed_primes()).copied().collect();
    if primes.iter().any(|p| !dprime.coeff(*p).is_subset_of(&d.coeff(*p))) {
        return Ok(false);
    }
    let cells = candidate_cells(dprime, d, &primes)?;
    let irr_prime = dprime.irrelevant();
    for y in d.base().point_classes() {
        if !y.is_disjoint(&irr_prime) {
            continue;
        }
        if !point_admits_u(dprime, d, &primes, &y, &cells)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cells of the normal fan of Σ(Δ_P + Δ'_P) over proper coefficients.
fn candidate_cells(dprime: &PPDivisor, d: &PPDivisor, primes: &BTreeSet<PrimeId>) -> Result<Vec<Cone>, FanError> {
    let mut sum = TailedPolyhedron::from_cone(&d.tail().add(dprime.tail()));
    for p in primes {
        for c in [d.coeff(*p), dprime.coeff(*p)] {
            if !c.is_empty() {
                sum = sum.minkowski_sum(&c)?;
            }
        }
    }
    Ok(sum.normal_fan()?.into_iter().map(|(_, c)| c).collect())
}

fn point_admits_u(
    dprime: &PPDivisor,
    d: &PPDivisor,
    primes: &BTreeSet<PrimeId>,
    y: &PrimeSet,
    cells: &[Cone],
) -> Result<bool, FanError> {
    let mu = WeightFunction::of_point(y);
    let fiber = d.weighted_sum(&mu)?;
    let fiber_prime = dprime.weighted_sum(&mu)?;
    if fiber.is_empty() || !fiber_prime.is_face_of(&fiber) {
        return Ok(false);
    }
    let lambda = fiber.normal_cone(&fiber_prime)?;
    let irr = d.irrelevant();
    let irr_prime = dprime.irrelevant();
    for cell in cells {
        let cell = cell.intersect(&lambda);
        let u = cell.relative_interior_point();
        // (a)
        if fiber.face_at(&u)? != fiber_prime || d.tail().face_at(&u).as_ref() != Some(dprime.tail()) {
            continue;
        }
        // (b)
        let mut bad: PrimeSet = irr_prime.clone();
        for p in primes {
            if !same_face(&dprime.coeff(*p).face_at(&u)?, &d.coeff(*p).face_at(&u)?) {
                bad.insert(*p);
            }
        }
        if !bad.is_disjoint(y) {
            continue;
        }
        // (c)
        if condition_c(d, &cell, &u, &bad, &irr, y)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn condition_c(d: &PPDivisor, cell: &Cone, u: &[Q], bad: &PrimeSet, irr: &PrimeSet, y: &PrimeSet) -> Result<bool, FanError> {
    let base = d.base();
    if base.locus_class_trivial(irr) {
        return Ok(true);
    }
    if let Some(locus) = base.toric_locus(irr) {
        let du = d.evaluate(u)?;
        let a: Vec<Q> = base.prime_ids().map(|p| du.get(p)).collect();
        let must: PrimeSet = bad.difference(irr).copied().collect();
        return Ok(locus.effective_avoiding(&a, &must, y));
    }
    let degrees: Vec<Q> = cell
        .all_generators()
        .iter()
        .map(|g| Ok(base.divisor_degree(&d.evaluate(g)?)?))
        .collect::<Result<_, FanError>>()?;
    let must_contain = !bad.is_subset(irr);
    let some_positive = degrees.iter().any(Q::is_positive);
    Ok(if must_contain { some_positive } else { some_positive || degrees.iter().all(Q::is_zero) })
}
