//! Linear systems of invariant Q-divisors on the open toric subvariety left
//! after removing some rays.
//!
//! A divisor is a coefficient vector `a` indexed by rays. Its sections are
//! spanned by characters m with ⟨m, v_ρ⟩ + a_ρ >= 0, and χ^m vanishes on D_ρ
//! exactly when the inequality is strict. Only ⟨m, v_ρ⟩ matters, so m is
//! written in coordinates y on the span of the kept rays, where the section
//! polyhedron is pointed.

use super::{PrimeId, PrimeSet};
use crate::geom::linalg::{canonical_basis, solve, transpose};
use crate::geom::rational::{dot, neg, Q, QVec};
use crate::geom::{Cone, Extended, TailedPolyhedron};
use std::collections::BTreeSet;

pub(crate) struct ToricLocus {
    /// Original indices of the kept rays.
    kept: Vec<usize>,
    /// coords[k] = kept ray k in y-coordinates.
    coords: Vec<QVec>,
    ydim: usize,
    /// Maximal cones of the locus, as sets of original ray indices.
    cones: Vec<BTreeSet<usize>>,
}

impl ToricLocus {
    pub(crate) fn new(dim: usize, rays: &[QVec], cones: &[Vec<usize>], removed: &PrimeSet) -> Self {
        let kept: Vec<usize> = (0..rays.len()).filter(|i| !removed.contains(&PrimeId(*i))).collect();
        let kept_rays: Vec<QVec> = kept.iter().map(|&i| rays[i].clone()).collect();
        let basis = canonical_basis(&kept_rays, dim);
        let bt = transpose(&basis, dim);
        let coords = kept_rays.iter().map(|v| solve(&bt, v, basis.len()).expect("ray lies in the span")).collect();
        let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for c in cones {
            let gens: Vec<QVec> = c.iter().map(|&i| rays[i].clone()).collect();
            for f in Cone::from_rays(dim, &gens).faces() {
                let set: BTreeSet<usize> = c.iter().copied().filter(|&i| f.contains(&rays[i])).collect();
                if set.iter().all(|i| !removed.contains(&PrimeId(*i))) {
                    faces.insert(set);
                }
            }
        }
        let cones = maximal_sets(&faces);
        ToricLocus { kept, coords, ydim: basis.len(), cones }
    }

    fn position(&self, ray: usize) -> Option<usize> {
        self.kept.iter().position(|&i| i == ray)
    }

    /// {y : ⟨c_ρ, y⟩ >= -a_ρ}, with equality on `tight`.
    fn sections(&self, a: &[Q], tight: &BTreeSet<usize>) -> TailedPolyhedron {
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for (k, &i) in self.kept.iter().enumerate() {
            let row = (self.coords[k].clone(), -a[i].clone());
            if tight.contains(&i) {
                eqs.push(row);
            } else {
                ineqs.push(row);
            }
        }
        TailedPolyhedron::from_constraints(self.ydim, &ineqs, &eqs).expect("kept rays span the y-space")
    }

    /// Whether some section is nonzero on D_ρ's complement, i.e. the
    /// inequality of `ray` is not an implicit equality of `p`.
    fn strict_somewhere(&self, p: &TailedPolyhedron, a: &[Q], ray: usize) -> bool {
        let k = self.position(ray).expect("kept ray");
        match p.eval_min(&neg(&self.coords[k])) {
            Extended::Finite(x) => -x > -a[ray].clone(),
            Extended::NegInf => true,
            Extended::PosInf => false,
        }
    }

    /// Semiample: on every maximal cone a local equation χ^{m_σ} is a global
    /// section.
    pub(crate) fn is_semiample(&self, a: &[Q]) -> bool {
        self.cones.iter().all(|c| !self.sections(a, c).is_empty())
    }

    /// Big: some multiple has a section whose complement is affine. The
    /// relative interior of the section polyhedron has the fewest tight rays,
    /// and the complement is the union of the cones spanned by tight rays.
    pub(crate) fn is_big(&self, a: &[Q]) -> bool {
        let p = self.sections(a, &BTreeSet::new());
        if p.is_empty() {
            return false;
        }
        let tight: BTreeSet<usize> = self.kept.iter().copied().filter(|&i| !self.strict_somewhere(&p, a, i)).collect();
        let faces: BTreeSet<BTreeSet<usize>> = self.cones.iter().map(|c| c.intersection(&tight).copied().collect()).collect();
        maximal_sets(&faces).len() == 1
    }

    /// Some effective divisor in the class of `a` contains every ray of
    /// `must_contain` and misses the orbit of the cone spanned by `avoid`.
    pub(crate) fn effective_avoiding(&self, a: &[Q], must_contain: &PrimeSet, avoid: &PrimeSet) -> bool {
        let tight: BTreeSet<usize> = avoid.iter().map(|p| p.0).collect();
        if tight.iter().any(|&i| self.position(i).is_none()) {
            return false;
        }
        let p = self.sections(a, &tight);
        if p.is_empty() {
            return false;
        }
        must_contain.iter().all(|r| self.position(r.0).is_some() && !tight.contains(&r.0) && self.strict_somewhere(&p, a, r.0))
    }
}

fn maximal_sets(sets: &BTreeSet<BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    sets.iter().filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t))).cloned().collect()
}

/// Whether `u` pairs positively with every ray of the pointed cone `c`.
pub(crate) fn in_relative_interior_of_dual(c: &Cone, u: &[Q]) -> bool {
    c.rays().iter().all(|r| dot(r, u) > Q::from_integer(0.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::{qi, qvec};

    fn p1() -> ToricLocus {
        ToricLocus::new(1, &[qvec(&[1]), qvec(&[-1])], &[vec![0], vec![1]], &PrimeSet::new())
    }

    #[test]
    fn projective_line_linear_systems() {
        let l = p1();
        assert!(l.is_semiample(&[qi(0), qi(0)]));
        assert!(!l.is_big(&[qi(0), qi(0)]));
        assert!(l.is_big(&[qi(1), qi(0)]));
        assert!(!l.is_semiample(&[qi(-1), qi(0)]));
        // O(1): a section vanishing on D[1] but not at the point of D[-1].
        let a = [qi(1), qi(0)];
        assert!(l.effective_avoiding(&a, &PrimeSet::from([PrimeId(0)]), &PrimeSet::from([PrimeId(1)])));
        assert!(!l.effective_avoiding(&[qi(0), qi(0)], &PrimeSet::from([PrimeId(0)]), &PrimeSet::new()));
    }

    #[test]
    fn removing_a_ray_leaves_an_affine_line() {
        let l = ToricLocus::new(1, &[qvec(&[1]), qvec(&[-1])], &[vec![0], vec![1]], &PrimeSet::from([PrimeId(1)]));
        assert!(l.is_big(&[qi(0), qi(0)]));
        assert!(l.is_semiample(&[qi(-3), qi(0)]));
    }
}
