//! Collections of cells: complex tests, covering, and fan refinement.

use super::cone::Cone;
use super::polyhedron::TailedPolyhedron;
use super::rational::{Q, QVec};
use crate::error::GeomError;
use crate::par;
use std::collections::BTreeSet;

/// Every pairwise intersection of proper cells is a face of both.
pub fn is_polyhedral_complex(cells: &[TailedPolyhedron]) -> bool {
    first_non_face_pair(cells).is_none()
}

/// Smallest pair of cells whose intersection is not a face of both.
pub fn first_non_face_pair(cells: &[TailedPolyhedron]) -> Option<(usize, usize)> {
    let proper: Vec<usize> = (0..cells.len()).filter(|&i| !cells[i].is_empty()).collect();
    let pairs = par::pairs(proper.len());
    par::find_first(&pairs, |&(a, b)| {
        let (x, y) = (&cells[proper[a]], &cells[proper[b]]);
        let ok = match x.intersect(y) {
            Ok(i) => i.is_face_of(x) && i.is_face_of(y),
            Err(_) => false,
        };
        (!ok).then_some((proper[a], proper[b]))
    })
    .map(|(_, p)| p)
}

/// Union of the cells equals the ambient space; needs a complex.
pub fn covers_space(cells: &[TailedPolyhedron]) -> Result<bool, GeomError> {
    if !is_polyhedral_complex(cells) {
        return Err(GeomError::NotComplex);
    }
    Ok(covers_complex(cells))
}

/// Covering test for input already known to be a complex: every facet of a
/// full-dimensional cell lies in a second full-dimensional cell.
pub fn covers_complex(cells: &[TailedPolyhedron]) -> bool {
    let Some(dim) = cells.first().map(TailedPolyhedron::dim) else {
        return false;
    };
    let full: Vec<&TailedPolyhedron> = cells.iter().filter(|c| c.affine_dim() == Some(dim)).collect();
    if full.is_empty() {
        return false;
    }
    let full_idx: Vec<usize> = (0..full.len()).collect();
    let uncovered = par::find_first(&full_idx, |&i| {
        let c = full[i];
        let h = c.hrep().expect("proper cell");
        for (k, facet_eq) in h.ineqs.iter().enumerate() {
            let others: Vec<(QVec, Q)> =
                h.ineqs.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, x)| x.clone()).collect();
            let mut eqs = h.eqs.clone();
            eqs.push(facet_eq.clone());
            let Ok(facet) = TailedPolyhedron::from_constraints(dim, &others, &eqs) else {
                return Some(());
            };
            let shared = full.iter().enumerate().any(|(j, g)| j != i && facet.is_subset_of(g));
            if !shared {
                return Some(());
            }
        }
        None
    });
    uncovered.is_none()
}

/// Coarsest fan refining all input cone collections, closed under faces.
pub fn common_refinement(fans: &[Vec<Cone>]) -> Result<Vec<Cone>, GeomError> {
    let mut base: BTreeSet<Cone> = BTreeSet::new();
    let mut dim = None;
    for c in fans.iter().flatten() {
        if *dim.get_or_insert(c.ambient_dim()) != c.ambient_dim() {
            return Err(GeomError::DimensionMismatch { expected: dim.unwrap(), found: c.ambient_dim() });
        }
        base.extend(c.faces());
    }
    let base: Vec<Cone> = base.into_iter().collect();
    // Intersection closure of all input faces.
    let mut closed: BTreeSet<Cone> = base.iter().cloned().collect();
    let mut frontier: Vec<Cone> = base.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for b in &base {
                let i = f.intersect(b);
                if !closed.contains(&i) {
                    closed.insert(i.clone());
                    next.push(i);
                }
            }
        }
        frontier = next;
    }
    // The cell of a point is the intersection of all input cones containing it.
    let closed: Vec<Cone> = closed.into_iter().collect();
    let cells: Vec<Cone> = par::map(&closed, |k| {
        let y: QVec = k.relative_interior_point();
        let mut acc: Option<Cone> = None;
        for c in base.iter().filter(|c| c.contains(&y)) {
            acc = Some(match acc {
                None => c.clone(),
                Some(a) => a.intersect(c),
            });
        }
        acc.expect("point lies in its own cone")
    });
    let mut out: BTreeSet<Cone> = BTreeSet::new();
    for c in cells {
        out.extend(c.faces());
    }
    let out: Vec<Cone> = out.into_iter().collect();
    if !is_fan(&out) {
        return Err(GeomError::NotAFan);
    }
    Ok(out)
}

/// Pairwise intersections are common faces.
pub fn is_fan(cones: &[Cone]) -> bool {
    let pairs = par::pairs(cones.len());
    par::find_first(&pairs, |&(i, j)| {
        let x = cones[i].intersect(&cones[j]);
        (!(x.is_face_of(&cones[i]) && x.is_face_of(&cones[j]))).then_some(())
    })
    .is_none()
}

/// Maximal cones (under inclusion) of a collection.
pub fn maximal_cones(cones: &[Cone]) -> Vec<Cone> {
    let mut out: Vec<Cone> = cones
        .iter()
        .filter(|c| !cones.iter().any(|d| d != *c && d.contains_cone(c)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Whether a point lies in some cell.
pub fn point_covered(cells: &[TailedPolyhedron], x: &[Q]) -> bool {
    cells.iter().any(|c| c.contains(x))
}

/// Whether the cones cover the ambient space (cones must form a fan).
pub fn cones_cover(cones: &[Cone]) -> bool {
    let cells: Vec<TailedPolyhedron> = cones.iter().map(TailedPolyhedron::from_cone).collect();
    covers_complex(&cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rational::{q, qi, qvec};

    fn iv(a: i64, b: i64) -> TailedPolyhedron {
        TailedPolyhedron::interval(Some(qi(a)), Some(qi(b)))
    }

    #[test]
    fn complexes_in_dimension_one() {
        assert!(is_polyhedral_complex(&[iv(-1, 0), iv(0, 1)]));
        assert!(!is_polyhedral_complex(&[iv(-1, 1), TailedPolyhedron::point(vec![qi(0)])]));
        assert!(!is_polyhedral_complex(&[iv(-1, 1), iv(0, 2)]));
    }

    #[test]
    fn covering_in_dimension_one() {
        let neg = TailedPolyhedron::interval(None, Some(qi(0)));
        let pos = TailedPolyhedron::interval(Some(qi(0)), None);
        assert_eq!(covers_space(&[neg.clone(), pos.clone()]), Ok(true));
        assert_eq!(covers_space(std::slice::from_ref(&pos)), Ok(false));
        let mid = TailedPolyhedron::interval(Some(q(-1, 2)), Some(qi(0)));
        let left = TailedPolyhedron::interval(None, Some(q(-1, 2)));
        assert_eq!(covers_space(&[left, mid, pos]), Ok(true));
    }

    #[test]
    fn refinement_of_opposite_rays() {
        let a = vec![Cone::from_rays(1, &[qvec(&[1])])];
        let b = vec![Cone::from_rays(1, &[qvec(&[-1])])];
        let r = common_refinement(&[a.clone(), b]).unwrap();
        assert_eq!(r.len(), 3);
        let again = common_refinement(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(again, common_refinement(&[a]).unwrap());
    }

    #[test]
    fn projected_quadrant_faces() {
        let quad = Cone::from_rays(2, &[qvec(&[1, 0]), qvec(&[0, 1])]);
        let imgs: Vec<Cone> = quad.faces().iter().map(|f| f.image(&[qvec(&[1, -1])])).collect();
        let r = common_refinement(&[imgs]).unwrap();
        let expect = vec![Cone::zero(1), Cone::from_rays(1, &[qvec(&[-1])]), Cone::from_rays(1, &[qvec(&[1])])];
        let mut got = r.clone();
        got.sort();
        let mut e = expect;
        e.sort();
        assert_eq!(got, e);
    }
}
