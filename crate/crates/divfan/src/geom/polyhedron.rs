//! Tailed polyhedra: conv(vertices) + tail, or the distinguished empty element.

use super::cone::Cone;
use super::dd;
use super::linalg::{canonical_basis, rank};
use super::rational::{add, dot, is_zero, primitive, scale, sub, zero_vec, Q, QVec};
use crate::error::GeomError;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

/// Inequalities `<a, x> >= b` and equations `<a, x> = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHRep {
    pub ineqs: Vec<(QVec, Q)>,
    pub eqs: Vec<(QVec, Q)>,
}

/// Nonempty pointed polyhedron in canonical V-representation.
#[derive(Clone)]
pub struct Polyhedron {
    vertices: Vec<QVec>,
    tail: Cone,
    hrep: OnceLock<AffineHRep>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.tail == other.tail
    }
}
impl Eq for Polyhedron {}

#[derive(Clone, PartialEq, Eq)]
pub enum TailedPolyhedron {
    Proper(Polyhedron),
    /// The empty coefficient, carrying its nominal tail.
    Empty(Cone),
}

/// Value of a linear functional minimized over a tailed polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extended {
    NegInf,
    Finite(Q),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Extended::Finite(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Debug for TailedPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use super::rational::ShowVec;
        match self {
            TailedPolyhedron::Empty(t) => write!(f, "Empty[{:?}]", t),
            TailedPolyhedron::Proper(p) => {
                write!(f, "conv[")?;
                for (i, v) in p.vertices.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", ShowVec(v))?;
                }
                write!(f, "] + {:?}", p.tail)
            }
        }
    }
}

impl Polyhedron {
    pub fn vertices(&self) -> &[QVec] {
        &self.vertices
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn dim(&self) -> usize {
        self.tail.ambient_dim()
    }

    pub fn hrep(&self) -> &AffineHRep {
        self.hrep.get_or_init(|| affine_hrep(self.dim(), &self.vertices, &self.tail.all_generators()))
    }

    /// Affine dimension.
    pub fn affine_dim(&self) -> usize {
        let v0 = &self.vertices[0];
        let mut dirs: Vec<QVec> = self.vertices[1..].iter().map(|v| sub(v, v0)).collect();
        dirs.extend(self.tail.all_generators());
        rank(&dirs, self.dim())
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        let h = self.hrep();
        h.eqs.iter().all(|(a, b)| &dot(a, x) == b) && h.ineqs.iter().all(|(a, b)| &dot(a, x) >= b)
    }

    /// Vertex/ray index sets of every nonempty face, the polyhedron included.
    pub fn face_index_sets(&self) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        let h = self.hrep();
        let rays = self.tail.rays();
        let tight: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = h
            .ineqs
            .iter()
            .map(|(a, b)| {
                let vs = (0..self.vertices.len()).filter(|&i| &dot(a, &self.vertices[i]) == b).collect();
                let rs = (0..rays.len()).filter(|&i| dot(a, &rays[i]).is_zero()).collect();
                (vs, rs)
            })
            .collect();
        let top = ((0..self.vertices.len()).collect::<BTreeSet<_>>(), (0..rays.len()).collect::<BTreeSet<_>>());
        let mut seen = BTreeSet::new();
        seen.insert(top.clone());
        let mut queue = vec![top];
        while let Some((fv, fr)) = queue.pop() {
            for (tv, tr) in &tight {
                let gv: BTreeSet<usize> = fv.intersection(tv).copied().collect();
                if gv.is_empty() {
                    continue;
                }
                let gr: BTreeSet<usize> = fr.intersection(tr).copied().collect();
                let g = (gv, gr);
                if seen.insert(g.clone()) {
                    queue.push(g);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn sub_polyhedron(&self, vs: &BTreeSet<usize>, rs: &BTreeSet<usize>) -> Polyhedron {
        let vertices: Vec<QVec> = vs.iter().map(|&i| self.vertices[i].clone()).collect();
        let rays: Vec<QVec> = rs.iter().map(|&i| self.tail.rays()[i].clone()).collect();
        let tail = Cone::from_rays(self.dim(), &rays);
        Polyhedron { vertices, tail, hrep: OnceLock::new() }
    }
}

/// Irredundant affine H-representation of conv(vertices) + cone(rays).
fn affine_hrep(dim: usize, vertices: &[QVec], rays: &[QVec]) -> AffineHRep {
    let gens = homogenize(vertices, rays);
    let h = super::cone::dual_hrep(dim + 1, &gens, &[]);
    let split = |a: &QVec| -> (QVec, Q) { (a[..dim].to_vec(), -a[dim].clone()) };
    let ineqs = h
        .ineqs
        .iter()
        .filter(|a| !is_zero(&a[..dim]))
        .map(split)
        .collect();
    let eqs = h.eqs.iter().map(split).collect();
    AffineHRep { ineqs, eqs }
}

fn homogenize(vertices: &[QVec], rays: &[QVec]) -> Vec<QVec> {
    let mut gens: Vec<QVec> = vertices
        .iter()
        .map(|v| {
            let mut g = v.clone();
            g.push(Q::one());
            g
        })
        .collect();
    for r in rays {
        let mut g = r.clone();
        g.push(Q::zero());
        gens.push(g);
    }
    gens
}

fn from_homogeneous_cone(dim: usize, g: dd::Generators) -> Result<TailedPolyhedron, GeomError> {
    let lin = canonical_basis(&g.lineality, dim + 1);
    if !lin.is_empty() {
        return Err(GeomError::NotPointed);
    }
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in g.rays {
        let t = r[dim].clone();
        if t.is_zero() {
            rays.push(primitive(&r[..dim]));
        } else {
            vertices.push(scale(&(Q::one() / t), &r[..dim]));
        }
    }
    let tail = Cone::from_rays(dim, &rays);
    if vertices.is_empty() {
        return Ok(TailedPolyhedron::Empty(tail));
    }
    vertices.sort();
    vertices.dedup();
    Ok(TailedPolyhedron::Proper(Polyhedron { vertices, tail, hrep: OnceLock::new() }))
}

impl TailedPolyhedron {
    /// conv(points) + cone(rays), reduced to vertices and extreme rays.
    pub fn from_points(dim: usize, points: &[QVec], rays: &[QVec]) -> Result<TailedPolyhedron, GeomError> {
        for p in points.iter().chain(rays) {
            if p.len() != dim {
                return Err(GeomError::DimensionMismatch { expected: dim, found: p.len() });
            }
        }
        if points.is_empty() {
            return Ok(TailedPolyhedron::Empty(Cone::from_rays(dim, rays)));
        }
        let gens = homogenize(points, rays);
        let h = super::cone::dual_hrep(dim + 1, &gens, &[]);
        let g = dd::generators(dim + 1, &h.ineqs, &h.eqs);
        from_homogeneous_cone(dim, g)
    }

    /// {x : <a, x> >= b for (a, b) in ineqs, <a, x> = b for (a, b) in eqs}.
    pub fn from_constraints(dim: usize, ineqs: &[(QVec, Q)], eqs: &[(QVec, Q)]) -> Result<TailedPolyhedron, GeomError> {
        let lift = |(a, b): &(QVec, Q)| -> QVec {
            let mut h = a.clone();
            h.push(-b.clone());
            h
        };
        let mut hi: Vec<QVec> = ineqs.iter().map(lift).collect();
        let mut t = zero_vec(dim + 1);
        t[dim] = Q::one();
        hi.push(t);
        let he: Vec<QVec> = eqs.iter().map(lift).collect();
        let g = dd::generators(dim + 1, &hi, &he);
        match from_homogeneous_cone(dim, g)? {
            TailedPolyhedron::Empty(_) => {
                let rec_i: Vec<QVec> = ineqs.iter().map(|(a, _)| a.clone()).collect();
                let rec_e: Vec<QVec> = eqs.iter().map(|(a, _)| a.clone()).collect();
                Ok(TailedPolyhedron::Empty(Cone::from_constraints(dim, &rec_i, &rec_e)))
            }
            p => Ok(p),
        }
    }

    pub fn point(p: QVec) -> TailedPolyhedron {
        let dim = p.len();
        TailedPolyhedron::Proper(Polyhedron { vertices: vec![p], tail: Cone::zero(dim), hrep: OnceLock::new() })
    }

    /// The tail cone viewed as a polyhedron with vertex 0.
    pub fn from_cone(c: &Cone) -> TailedPolyhedron {
        TailedPolyhedron::Proper(Polyhedron {
            vertices: vec![zero_vec(c.ambient_dim())],
            tail: c.clone(),
            hrep: OnceLock::new(),
        })
    }

    pub fn empty(tail: Cone) -> TailedPolyhedron {
        TailedPolyhedron::Empty(tail)
    }

    /// 1-dimensional interval helper; `None` bounds are infinite.
    pub fn interval(lo: Option<Q>, hi: Option<Q>) -> TailedPolyhedron {
        use super::rational::qi;
        match (lo, hi) {
            (Some(a), Some(b)) => TailedPolyhedron::from_points(1, &[vec![a], vec![b]], &[]).unwrap(),
            (Some(a), None) => TailedPolyhedron::from_points(1, &[vec![a]], &[vec![qi(1)]]).unwrap(),
            (None, Some(b)) => TailedPolyhedron::from_points(1, &[vec![b]], &[vec![qi(-1)]]).unwrap(),
            (None, None) => panic!("a line is not a pointed polyhedron"),
        }
    }

    pub fn dim(&self) -> usize {
        self.tail().ambient_dim()
    }

    pub fn tail(&self) -> &Cone {
        match self {
            TailedPolyhedron::Proper(p) => &p.tail,
            TailedPolyhedron::Empty(t) => t,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, TailedPolyhedron::Empty(_))
    }

    pub fn as_proper(&self) -> Option<&Polyhedron> {
        match self {
            TailedPolyhedron::Proper(p) => Some(p),
            TailedPolyhedron::Empty(_) => None,
        }
    }

    pub fn vertices(&self) -> &[QVec] {
        match self {
            TailedPolyhedron::Proper(p) => &p.vertices,
            TailedPolyhedron::Empty(_) => &[],
        }
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.as_proper().is_some_and(|p| p.contains(x))
    }

    /// Set containment; the empty element is contained in everything.
    pub fn is_subset_of(&self, other: &TailedPolyhedron) -> bool {
        match (self, other) {
            (TailedPolyhedron::Empty(_), _) => true,
            (_, TailedPolyhedron::Empty(_)) => false,
            (TailedPolyhedron::Proper(a), TailedPolyhedron::Proper(b)) => {
                a.vertices.iter().all(|v| b.contains(v)) && b.tail.contains_cone(&a.tail)
            }
        }
    }

    pub fn minkowski_sum(&self, other: &TailedPolyhedron) -> Result<TailedPolyhedron, GeomError> {
        if self.dim() != other.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        match (self, other) {
            (TailedPolyhedron::Proper(a), TailedPolyhedron::Proper(b)) => {
                if b.vertices.len() == 1 && is_zero(&b.vertices[0]) && a.tail.contains_cone(&b.tail) {
                    return Ok(self.clone());
                }
                if a.vertices.len() == 1 && is_zero(&a.vertices[0]) && b.tail.contains_cone(&a.tail) {
                    return Ok(other.clone());
                }
                let pts: Vec<QVec> =
                    a.vertices.iter().flat_map(|v| b.vertices.iter().map(move |w| add(v, w))).collect();
                let rays: Vec<QVec> = a.tail.rays().iter().chain(b.tail.rays()).cloned().collect();
                TailedPolyhedron::from_points(self.dim(), &pts, &rays)
            }
            _ => {
                let tail = self.tail().add(other.tail());
                if !tail.is_pointed() {
                    return Err(GeomError::NotPointed);
                }
                Ok(TailedPolyhedron::Empty(tail))
            }
        }
    }

    /// c * self for c >= 0; 0 * anything is the tail.
    pub fn scale(&self, c: &Q) -> Result<TailedPolyhedron, GeomError> {
        if c.is_negative() {
            return Err(GeomError::NegativeScalar);
        }
        if c.is_zero() {
            return Ok(TailedPolyhedron::from_cone(self.tail()));
        }
        Ok(match self {
            TailedPolyhedron::Empty(t) => TailedPolyhedron::Empty(t.clone()),
            TailedPolyhedron::Proper(p) => TailedPolyhedron::Proper(Polyhedron {
                vertices: p.vertices.iter().map(|v| scale(c, v)).collect(),
                tail: p.tail.clone(),
                hrep: OnceLock::new(),
            }),
        })
    }

    /// min over the polyhedron of <u, .>.
    pub fn eval_min(&self, u: &[Q]) -> Extended {
        match self {
            TailedPolyhedron::Empty(_) => Extended::PosInf,
            TailedPolyhedron::Proper(p) => {
                if p.tail.rays().iter().any(|r| dot(u, r).is_negative()) {
                    return Extended::NegInf;
                }
                let m = p.vertices.iter().map(|v| dot(u, v)).min().expect("proper polyhedron has a vertex");
                Extended::Finite(m)
            }
        }
    }

    /// Face of minimizers of <w, .>; tail becomes tail ∩ w^⊥.
    pub fn face_at(&self, w: &[Q]) -> Result<TailedPolyhedron, GeomError> {
        let tail = self.tail().face_at(w).ok_or(GeomError::OutsideDualTail)?;
        Ok(match self {
            TailedPolyhedron::Empty(_) => TailedPolyhedron::Empty(tail),
            TailedPolyhedron::Proper(p) => {
                let vals: Vec<Q> = p.vertices.iter().map(|v| dot(w, v)).collect();
                let m = vals.iter().min().expect("nonempty").clone();
                let vertices: Vec<QVec> =
                    p.vertices.iter().zip(&vals).filter(|(_, x)| **x == m).map(|(v, _)| v.clone()).collect();
                TailedPolyhedron::Proper(Polyhedron { vertices, tail, hrep: OnceLock::new() })
            }
        })
    }

    pub fn intersect(&self, other: &TailedPolyhedron) -> Result<TailedPolyhedron, GeomError> {
        if self.dim() != other.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let tail = self.tail().intersect(other.tail());
        match (self, other) {
            (TailedPolyhedron::Proper(a), TailedPolyhedron::Proper(b)) => {
                if a == b {
                    return Ok(self.clone());
                }
                let (ha, hb) = (a.hrep(), b.hrep());
                let ineqs: Vec<(QVec, Q)> = ha.ineqs.iter().chain(&hb.ineqs).cloned().collect();
                let eqs: Vec<(QVec, Q)> = ha.eqs.iter().chain(&hb.eqs).cloned().collect();
                match TailedPolyhedron::from_constraints(self.dim(), &ineqs, &eqs)? {
                    TailedPolyhedron::Empty(_) => Ok(TailedPolyhedron::Empty(tail)),
                    p => Ok(p),
                }
            }
            _ => Ok(TailedPolyhedron::Empty(tail)),
        }
    }

    /// All nonempty faces of a proper polyhedron, itself included.
    pub fn faces(&self) -> Vec<TailedPolyhedron> {
        match self {
            TailedPolyhedron::Empty(_) => Vec::new(),
            TailedPolyhedron::Proper(p) => p
                .face_index_sets()
                .iter()
                .map(|(vs, rs)| TailedPolyhedron::Proper(p.sub_polyhedron(vs, rs)))
                .collect(),
        }
    }

    /// Whether `self` is a (possibly improper or empty) face of `other`.
    pub fn is_face_of(&self, other: &TailedPolyhedron) -> bool {
        match (self, other) {
            (TailedPolyhedron::Empty(_), _) => true,
            (_, TailedPolyhedron::Empty(_)) => false,
            _ => self.dim() == other.dim() && self.is_subset_of(other) && other.faces().iter().any(|f| f == self),
        }
    }

    /// Normal cone {u : <u, v - v'> >= 0 for v in self, v' in face}.
    pub fn normal_cone(&self, face: &TailedPolyhedron) -> Result<Cone, GeomError> {
        let (p, f) = match (self, face) {
            (TailedPolyhedron::Proper(p), TailedPolyhedron::Proper(f)) => (p, f),
            _ => return Err(GeomError::EmptyInput),
        };
        let v0 = &f.vertices[0];
        let mut ineqs: Vec<QVec> = p.vertices.iter().map(|v| sub(v, v0)).filter(|d| !is_zero(d)).collect();
        ineqs.extend(p.tail.rays().iter().cloned());
        let mut eqs: Vec<QVec> = f.vertices[1..].iter().map(|v| sub(v, v0)).collect();
        eqs.extend(f.tail.rays().iter().cloned());
        eqs.extend(f.tail.lineality().iter().cloned());
        Ok(Cone::from_constraints(self.dim(), &ineqs, &eqs))
    }

    /// Faces paired with their normal cones; the pairing reverses inclusion.
    pub fn normal_fan(&self) -> Result<Vec<(TailedPolyhedron, Cone)>, GeomError> {
        if self.is_empty() {
            return Err(GeomError::EmptyInput);
        }
        self.faces()
            .into_iter()
            .map(|f| {
                let c = self.normal_cone(&f)?;
                Ok((f, c))
            })
            .collect()
    }

    pub fn affine_dim(&self) -> Option<usize> {
        self.as_proper().map(Polyhedron::affine_dim)
    }

    pub fn hrep(&self) -> Option<&AffineHRep> {
        self.as_proper().map(Polyhedron::hrep)
    }

    /// Image under a linear map given by matrix rows.
    pub fn image(&self, rows: &[QVec]) -> Result<TailedPolyhedron, GeomError> {
        let f = |v: &QVec| super::linalg::mat_vec(rows, v);
        match self {
            TailedPolyhedron::Empty(t) => Ok(TailedPolyhedron::Empty(t.image(rows))),
            TailedPolyhedron::Proper(p) => {
                let pts: Vec<QVec> = p.vertices.iter().map(f).collect();
                let rays: Vec<QVec> = p.tail.rays().iter().map(f).collect();
                TailedPolyhedron::from_points(rows.len(), &pts, &rays)
            }
        }
    }

    /// Translate by a vector.
    pub fn translate(&self, t: &[Q]) -> TailedPolyhedron {
        match self {
            TailedPolyhedron::Empty(_) => self.clone(),
            TailedPolyhedron::Proper(p) => {
                let mut vertices: Vec<QVec> = p.vertices.iter().map(|v| add(v, t)).collect();
                vertices.sort();
                TailedPolyhedron::Proper(Polyhedron { vertices, tail: p.tail.clone(), hrep: OnceLock::new() })
            }
        }
    }
}
