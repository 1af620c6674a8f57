//! Polyhedral cones in V-representation with a lazily derived H-representation.

use super::dd;
use super::linalg::{canonical_basis, in_span, project_off, rank};
use super::rational::{dot, is_zero, neg, primitive, sum, zero_vec, Q, QVec};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// Facet inequalities `<a, x> >= 0` and equations `<e, x> = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub ineqs: Vec<QVec>,
    pub eqs: Vec<QVec>,
}

/// A polyhedral cone. Rays are primitive, reduced modulo the lineality
/// space and sorted, so structural equality is set equality.
#[derive(Clone)]
pub struct Cone {
    dim: usize,
    rays: Vec<QVec>,
    lineality: Vec<QVec>,
    hrep: OnceLock<HRep>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.lineality == other.lineality
    }
}
impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, self.linear_dim(), &self.lineality, &self.rays).cmp(&(
            other.dim,
            other.linear_dim(),
            &other.lineality,
            &other.rays,
        ))
    }
}

impl std::hash::Hash for Cone {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.rays.hash(state);
        self.lineality.hash(state);
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone(dim={}, rays=[", self.dim)?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", super::rational::ShowVec(r))?;
        }
        write!(f, "], lin=[")?;
        for (i, r) in self.lineality.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", super::rational::ShowVec(r))?;
        }
        write!(f, "])")
    }
}

impl Cone {
    fn from_raw(dim: usize, g: dd::Generators) -> Cone {
        let lineality = canonical_basis(&g.lineality, dim);
        let mut rays: Vec<QVec> = g
            .rays
            .iter()
            .map(|r| primitive(&project_off(&lineality, r)))
            .filter(|r| !is_zero(r))
            .collect();
        rays.sort();
        rays.dedup();
        Cone { dim, rays, lineality, hrep: OnceLock::new() }
    }

    /// {x : <a, x> >= 0 for a in ineqs, <e, x> = 0 for e in eqs}.
    pub fn from_constraints(dim: usize, ineqs: &[QVec], eqs: &[QVec]) -> Cone {
        Cone::from_raw(dim, dd::generators(dim, ineqs, eqs))
    }

    /// cone(rays) + span(lineality); redundant generators are removed.
    pub fn from_generators(dim: usize, rays: &[QVec], lineality: &[QVec]) -> Cone {
        let h = dual_hrep(dim, rays, lineality);
        let c = Cone::from_constraints(dim, &h.ineqs, &h.eqs);
        let _ = c.hrep.set(h);
        c
    }

    pub fn from_rays(dim: usize, rays: &[QVec]) -> Cone {
        Cone::from_generators(dim, rays, &[])
    }

    pub fn zero(dim: usize) -> Cone {
        Cone { dim, rays: Vec::new(), lineality: Vec::new(), hrep: OnceLock::new() }
    }

    pub fn full(dim: usize) -> Cone {
        let lin = (0..dim).map(|i| super::rational::unit_vec(dim, i)).collect::<Vec<_>>();
        Cone { dim, rays: Vec::new(), lineality: lin, hrep: OnceLock::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[QVec] {
        &self.rays
    }

    pub fn lineality(&self) -> &[QVec] {
        &self.lineality
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    /// Dimension of the linear span.
    pub fn linear_dim(&self) -> usize {
        let mut all = self.rays.clone();
        all.extend(self.lineality.iter().cloned());
        rank(&all, self.dim)
    }

    pub fn is_full_dim(&self) -> bool {
        self.linear_dim() == self.dim
    }

    /// All generators, with each lineality vector contributing both signs.
    pub fn all_generators(&self) -> Vec<QVec> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(neg(l));
        }
        g
    }

    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| dual_hrep(self.dim, &self.rays, &self.lineality))
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let h = self.hrep();
        h.eqs.iter().all(|e| dot(e, v).is_zero()) && h.ineqs.iter().all(|a| !dot(a, v).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other.lineality.iter().all(|l| self.contains(l) && self.contains(&neg(l)))
    }

    /// {u : <u, v> >= 0 for all v in the cone}.
    pub fn dual(&self) -> Cone {
        Cone::from_constraints(self.dim, &self.rays, &self.lineality)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        let (a, b) = (self.hrep(), other.hrep());
        let ineqs: Vec<QVec> = a.ineqs.iter().chain(&b.ineqs).cloned().collect();
        let eqs: Vec<QVec> = a.eqs.iter().chain(&b.eqs).cloned().collect();
        Cone::from_constraints(self.dim, &ineqs, &eqs)
    }

    /// Minkowski sum.
    pub fn add(&self, other: &Cone) -> Cone {
        let rays: Vec<QVec> = self.rays.iter().chain(&other.rays).cloned().collect();
        let lin: Vec<QVec> = self.lineality.iter().chain(&other.lineality).cloned().collect();
        Cone::from_generators(self.dim, &rays, &lin)
    }

    /// Image under the linear map with the given matrix rows.
    pub fn image(&self, rows: &[QVec]) -> Cone {
        let f = |v: &QVec| super::linalg::mat_vec(rows, v);
        let rays: Vec<QVec> = self.rays.iter().map(f).collect();
        let lin: Vec<QVec> = self.lineality.iter().map(f).collect();
        Cone::from_generators(rows.len(), &rays, &lin)
    }

    /// A point in the relative interior.
    pub fn relative_interior_point(&self) -> QVec {
        if self.rays.is_empty() {
            zero_vec(self.dim)
        } else {
            sum(self.dim, &self.rays)
        }
    }

    /// Face of minimizers of `w`; requires `w` in the dual cone.
    pub fn face_at(&self, w: &[Q]) -> Option<Cone> {
        if self.lineality.iter().any(|l| !dot(w, l).is_zero()) || self.rays.iter().any(|r| dot(w, r).is_negative()) {
            return None;
        }
        let rays: Vec<QVec> = self.rays.iter().filter(|r| dot(w, r).is_zero()).cloned().collect();
        Some(Cone { dim: self.dim, rays, lineality: self.lineality.clone(), hrep: OnceLock::new() })
    }

    /// Every face, including the cone itself and its lineality space.
    pub fn faces(&self) -> Vec<Cone> {
        let h = self.hrep();
        let tight: Vec<BTreeSet<usize>> = h
            .ineqs
            .iter()
            .map(|a| (0..self.rays.len()).filter(|&i| dot(a, &self.rays[i]).is_zero()).collect())
            .collect();
        let all: BTreeSet<usize> = (0..self.rays.len()).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = vec![all.clone()];
        seen.insert(all);
        while let Some(f) = queue.pop() {
            for t in &tight {
                let g: BTreeSet<usize> = f.intersection(t).copied().collect();
                if seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
        }
        let mut out: Vec<Cone> = seen
            .into_iter()
            .map(|s| Cone {
                dim: self.dim,
                rays: s.iter().map(|&i| self.rays[i].clone()).collect(),
                lineality: self.lineality.clone(),
                hrep: OnceLock::new(),
            })
            .collect();
        out.sort();
        out
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.contains_cone(self) && other.faces().iter().any(|f| f == self)
    }

    /// Points `w` in the linear span that pair to zero with every generator.
    pub fn orthogonal_complement(&self) -> Vec<QVec> {
        let mut rows = self.rays.clone();
        rows.extend(self.lineality.iter().cloned());
        super::linalg::nullspace(&rows, self.dim)
    }

    pub fn in_linear_span(&self, v: &[Q]) -> bool {
        let mut rows = self.rays.clone();
        rows.extend(self.lineality.iter().cloned());
        in_span(&rows, v, self.dim)
    }
}

/// Irredundant H-representation of cone(rays) + span(lineality).
pub fn dual_hrep(dim: usize, rays: &[QVec], lineality: &[QVec]) -> HRep {
    let d = dd::generators(dim, rays, lineality);
    let eqs = canonical_basis(&d.lineality, dim);
    let mut ineqs: Vec<QVec> = d
        .rays
        .iter()
        .map(|a| primitive(&project_off(&eqs, a)))
        .filter(|a| !is_zero(a))
        .collect();
    ineqs.sort();
    ineqs.dedup();
    HRep { ineqs, eqs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::qvec;

    #[test]
    fn redundant_generators_removed() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[1, 1]), qvec(&[0, 1]), qvec(&[2, 0])]);
        assert_eq!(c.rays(), &[qvec(&[0, 1]), qvec(&[1, 0])]);
        assert!(c.is_pointed());
    }

    #[test]
    fn half_plane_canonical() {
        let a = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[-1, 0]), qvec(&[0, 1])]);
        let b = Cone::from_constraints(2, &[qvec(&[0, 1])], &[]);
        assert_eq!(a, b);
        assert_eq!(a.lineality().len(), 1);
        assert_eq!(a.faces().len(), 2);
    }

    #[test]
    fn dual_of_quadrant() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[1, 1])]);
        let d = c.dual();
        assert_eq!(d.rays(), &[qvec(&[0, 1]), qvec(&[1, -1])]);
        assert_eq!(d.dual(), c);
    }

    #[test]
    fn faces_of_quadrant() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])]);
        assert_eq!(c.faces().len(), 4);
        assert!(Cone::from_rays(2, &[qvec(&[1, 0])]).is_face_of(&c));
        assert!(!Cone::from_rays(2, &[qvec(&[1, 1])]).is_face_of(&c));
    }

    #[test]
    fn image_projection() {
        let c = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])]);
        let img = c.image(&[qvec(&[1, -1])]);
        assert_eq!(img, Cone::full(1));
    }
}
