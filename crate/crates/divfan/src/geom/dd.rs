//! Double description: generators of {x : <a, x> >= 0, <e, x> = 0}.
//!
//! Incremental Motzkin scheme with the combinatorial adjacency test. The
//! working cone is kept as lineality basis plus extreme rays, each ray tagged
//! with the set of processed constraints it makes tight.

use super::linalg::{mat_vec, nullspace};
use super::rational::{add, dot, is_zero, primitive, scale, sub, Q, QVec};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

struct Ray {
    v: QVec,
    zeros: BTreeSet<usize>,
}

/// Generators of the cone cut out by `ineqs` (>= 0) and `eqs` (= 0) in Q^dim.
pub fn generators(dim: usize, ineqs: &[QVec], eqs: &[QVec]) -> Generators {
    // Work inside the subspace defined by the equations.
    let basis = nullspace(eqs, dim);
    let k = basis.len();
    if k == 0 {
        return Generators::default();
    }
    // local[i][j] = <a_i, basis_j>
    let local: Vec<QVec> = ineqs.iter().map(|a| mat_vec(&basis, a)).collect();
    let g = generators_full(k, &local);
    let lift = |y: &QVec| -> QVec {
        let mut x = vec![Q::zero(); dim];
        for (c, b) in y.iter().zip(&basis) {
            if !c.is_zero() {
                x = add(&x, &scale(c, b));
            }
        }
        primitive(&x)
    };
    Generators {
        rays: g.rays.iter().map(lift).collect(),
        lineality: g.lineality.iter().map(lift).collect(),
    }
}

fn generators_full(k: usize, ineqs: &[QVec]) -> Generators {
    let mut lin: Vec<QVec> = (0..k).map(|i| super::rational::unit_vec(k, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();
    for (idx, a) in ineqs.iter().enumerate() {
        if is_zero(a) {
            continue;
        }
        if let Some(pos) = lin.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lin.remove(pos);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = super::rational::neg(&l0);
                al0 = -al0;
            }
            lin = lin
                .into_iter()
                .map(|l| {
                    let c = dot(a, &l) / &al0;
                    if c.is_zero() {
                        l
                    } else {
                        sub(&l, &scale(&c, &l0))
                    }
                })
                .collect();
            for r in rays.iter_mut() {
                let c = dot(a, &r.v) / &al0;
                if !c.is_zero() {
                    r.v = primitive(&sub(&r.v, &scale(&c, &l0)));
                }
                r.zeros.insert(idx);
            }
            rays.push(Ray { v: primitive(&l0), zeros: processed.iter().copied().collect() });
            processed.push(idx);
            continue;
        }
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.insert(idx);
                }
            }
            processed.push(idx);
            continue;
        }
        // Rank bound for adjacency: two rays are adjacent only if their common
        // zero set has size at least (pointed dimension - 2).
        let pointed_dim = k - lin.len();
        let mut new_rays: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common: BTreeSet<usize> = rays[p].zeros.intersection(&rays[n].zeros).copied().collect();
                if common.len() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == n || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v = sub(&scale(&vals[p], &rays[n].v), &scale(&vals[n], &rays[p].v));
                let mut zeros = common;
                zeros.insert(idx);
                new_rays.push(Ray { v: primitive(&v), zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(idx);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
        processed.push(idx);
    }
    Generators { rays: rays.into_iter().map(|r| r.v).collect(), lineality: lin }
}
