//! Instance generators and independent oracles shared by the acceptance
//! target and the property suites.
//!
//! The oracles avoid the library's double description: faces come from
//! brute-force supporting hyperplanes, evaluations from minima over
//! generating points.

#![allow(dead_code)]

use divfan::base::{BaseVariety, PrimeId, QDivisor};
use divfan::fan::coherence::{check_coherence, combine, verify, Coherence};
use divfan::geom::linalg::{canonical_basis, nullspace, rank, solve, transpose};
use divfan::geom::rational::{add, dot, scale, sub, Q, QVec};
use divfan::geom::{Cone, Extended, TailedPolyhedron};
use divfan::ppdiv::{PPDivisor, WeightFunction};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn qi(x: i64) -> Q {
    Q::from_integer(x.into())
}

pub fn ivec(v: &[i64]) -> QVec {
    v.iter().map(|&x| qi(x)).collect()
}

pub fn random_ivec(rng: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> Vec<i64> {
    (0..dim).map(|_| rng.gen_range(lo..=hi)).collect()
}

pub fn random_points(rng: &mut impl Rng, dim: usize, n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    (0..n).map(|_| random_ivec(rng, dim, lo, hi)).collect()
}

/// Rays in the open half-space x_0 > 0, hence spanning a pointed cone.
pub fn random_tail_rays(rng: &mut impl Rng, dim: usize) -> Vec<QVec> {
    let count = rng.gen_range(0..=dim);
    (0..count)
        .map(|_| {
            let mut v = random_ivec(rng, dim, -2, 2);
            v[0] = rng.gen_range(1..=2);
            ivec(&v)
        })
        .collect()
}

pub fn polytope(points: &[Vec<i64>]) -> TailedPolyhedron {
    let pts: Vec<QVec> = points.iter().map(|p| ivec(p)).collect();
    TailedPolyhedron::from_points(pts[0].len(), &pts, &[]).expect("points of equal length")
}

/// min ⟨u, ·⟩ over conv(points) + cone(rays); `None` for −∞.
pub fn eval_oracle(points: &[QVec], rays: &[QVec], u: &[Q]) -> Option<Q> {
    if rays.iter().any(|r| dot(u, r).is_negative()) {
        return None;
    }
    points.iter().map(|p| dot(u, p)).min()
}

pub fn random_dual_vector(rng: &mut impl Rng, rays: &[QVec], dim: usize) -> QVec {
    for _ in 0..200 {
        let u = ivec(&random_ivec(rng, dim, -4, 4));
        if rays.iter().all(|r| !dot(&u, r).is_negative()) {
            return u;
        }
    }
    vec![Q::zero(); dim]
}

// ---------------------------------------------------------------------------
// Faces by brute force.

pub struct FaceOracle {
    pub points: Vec<QVec>,
    /// Indices of the points that are vertices.
    pub vertices: BTreeSet<usize>,
    /// Nonempty faces as sets of vertex indices.
    pub faces: BTreeSet<BTreeSet<usize>>,
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

/// Faces of conv(points): facets are supporting hyperplanes through affinely
/// independent point tuples of the affine hull; faces are their intersections.
pub fn brute_faces(points: &[QVec]) -> FaceOracle {
    let mut pts: Vec<QVec> = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    let d = pts[0].len();
    let diffs: Vec<QVec> = pts.iter().map(|p| sub(p, &pts[0])).collect();
    let basis = canonical_basis(&diffs, d);
    let k = basis.len();
    let bt = transpose(&basis, d);
    let coords: Vec<QVec> = diffs.iter().map(|v| solve(&bt, v, k).expect("in the affine hull")).collect();
    let all: BTreeSet<usize> = (0..n).collect();
    let mut faces: BTreeSet<BTreeSet<usize>> = BTreeSet::from([all.clone()]);
    if k > 0 {
        for t in subsets_of_size(n, k) {
            let rows: Vec<QVec> = t[1..].iter().map(|&i| sub(&coords[i], &coords[t[0]])).collect();
            if rank(&rows, k) != k - 1 {
                continue;
            }
            let normal = &nullspace(&rows, k)[0];
            let c = dot(normal, &coords[t[0]]);
            let s: Vec<Q> = coords.iter().map(|p| dot(normal, p) - &c).collect();
            if s.iter().all(|x| !x.is_negative()) || s.iter().all(|x| !x.is_positive()) {
                faces.insert((0..n).filter(|&i| s[i].is_zero()).collect());
            }
        }
    }
    loop {
        let list: Vec<BTreeSet<usize>> = faces.iter().cloned().collect();
        let before = faces.len();
        for a in &list {
            for b in &list {
                let x: BTreeSet<usize> = a.intersection(b).copied().collect();
                if !x.is_empty() {
                    faces.insert(x);
                }
            }
        }
        if faces.len() == before {
            break;
        }
    }
    let vertices: BTreeSet<usize> = (0..n).filter(|i| faces.contains(&BTreeSet::from([*i]))).collect();
    let faces = faces.into_iter().map(|f| f.intersection(&vertices).copied().collect()).collect();
    FaceOracle { points: pts, vertices, faces }
}

/// Library faces and face tests agree with the brute-force oracle.
pub fn check_faces(points: &[Vec<i64>], subsets: &[u32]) -> Check {
    let p = polytope(points);
    let oracle = brute_faces(&points.iter().map(|x| ivec(x)).collect::<Vec<_>>());
    let lib_vertices: BTreeSet<QVec> = p.vertices().iter().cloned().collect();
    let oracle_vertices: BTreeSet<QVec> = oracle.vertices.iter().map(|&i| oracle.points[i].clone()).collect();
    if lib_vertices != oracle_vertices {
        return Err(format!("vertices differ: {lib_vertices:?} vs {oracle_vertices:?}"));
    }
    let index = |v: &QVec| oracle.points.iter().position(|q| q == v).expect("vertex among points");
    let lib_faces: BTreeSet<BTreeSet<usize>> =
        p.faces().iter().map(|f| f.vertices().iter().map(index).collect()).collect();
    if lib_faces != oracle.faces {
        return Err(format!("face lattices differ: {} vs {} faces", lib_faces.len(), oracle.faces.len()));
    }
    let verts: Vec<usize> = oracle.vertices.iter().copied().collect();
    for mask in subsets {
        let s: BTreeSet<usize> = (0..verts.len()).filter(|i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        if s.is_empty() {
            continue;
        }
        let pts: Vec<QVec> = s.iter().map(|&i| oracle.points[i].clone()).collect();
        let q = TailedPolyhedron::from_points(pts[0].len(), &pts, &[]).map_err(|e| e.to_string())?;
        if q.is_face_of(&p) != oracle.faces.contains(&s) {
            return Err(format!("is_face_of disagrees on {s:?}"));
        }
    }
    Ok(())
}

/// V → H → V and H → V → H are identities.
pub fn check_round_trip(points: &[Vec<i64>], rays: &[QVec]) -> Check {
    let pts: Vec<QVec> = points.iter().map(|p| ivec(p)).collect();
    let dim = pts[0].len();
    let p = TailedPolyhedron::from_points(dim, &pts, rays).map_err(|e| e.to_string())?;
    let h = p.hrep().ok_or("empty polyhedron")?.clone();
    let back = TailedPolyhedron::from_constraints(dim, &h.ineqs, &h.eqs).map_err(|e| e.to_string())?;
    if back != p {
        return Err(format!("{p:?} came back as {back:?}"));
    }
    if back.hrep() != Some(&h) {
        return Err("constraint representation is not canonical".into());
    }
    let c = Cone::from_rays(dim, rays);
    let hc = c.hrep().clone();
    if Cone::from_constraints(dim, &hc.ineqs, &hc.eqs) != c {
        return Err("cone round trip failed".into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Random divisors on the projective line.

pub fn line_base(n: usize) -> Arc<BaseVariety> {
    let names: Vec<String> = (0..n).map(|i| format!("P{i}")).collect();
    Arc::new(BaseVariety::proj_line(&names).expect("distinct names"))
}

pub struct RandomDivisor {
    pub div: PPDivisor,
    pub rays: Vec<QVec>,
    /// Generating points of each listed coefficient.
    pub gens: BTreeMap<PrimeId, Vec<QVec>>,
}

impl RandomDivisor {
    /// D(u) computed from the generating points.
    pub fn eval_oracle(&self, u: &[Q]) -> BTreeMap<PrimeId, Q> {
        self.gens
            .iter()
            .filter_map(|(p, g)| eval_oracle(g, &self.rays, u).map(|x| (*p, x)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }
}

pub fn random_divisor(rng: &mut impl Rng, base: &Arc<BaseVariety>, dim: usize) -> RandomDivisor {
    let rays = random_tail_rays(rng, dim);
    let tail = Cone::from_rays(dim, &rays);
    let mut gens = BTreeMap::new();
    let mut coeffs = Vec::new();
    for p in base.prime_ids() {
        if rng.gen_bool(0.3) {
            continue;
        }
        let n = rng.gen_range(1..=4);
        let pts: Vec<QVec> = random_points(rng, dim, n, -3, 3).iter().map(|v| ivec(v)).collect();
        coeffs.push((p, TailedPolyhedron::from_points(dim, &pts, &rays).expect("valid points")));
        gens.insert(p, pts);
    }
    let div = PPDivisor::new(base.clone(), tail, coeffs).expect("coefficients share the tail");
    RandomDivisor { div, rays, gens }
}

fn as_map(d: &QDivisor) -> BTreeMap<PrimeId, Q> {
    d.terms().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (p, c.clone())).collect()
}

/// D(u + u′) >= D(u) + D(u′), and evaluation matches the oracle.
pub fn check_convexity(rng: &mut impl Rng, dim: usize) -> Check {
    let base = line_base(4);
    let r = random_divisor(rng, &base, dim);
    let u = random_dual_vector(rng, &r.rays, dim);
    let v = random_dual_vector(rng, &r.rays, dim);
    let du = r.div.evaluate(&u).map_err(|e| e.to_string())?;
    let dv = r.div.evaluate(&v).map_err(|e| e.to_string())?;
    let duv = r.div.evaluate(&add(&u, &v)).map_err(|e| e.to_string())?;
    if as_map(&du) != r.eval_oracle(&u) {
        return Err(format!("evaluation at {u:?} disagrees with the oracle"));
    }
    for p in base.prime_ids() {
        if duv.get(p) < du.get(p) + dv.get(p) {
            return Err(format!("convexity fails at {} for u={u:?}, u'={v:?}", base.name(p)));
        }
    }
    Ok(())
}

/// h_{P+Q} = h_P + h_Q, and min over a weighted sum is the weighted evaluation.
pub fn check_additivity(rng: &mut impl Rng, dim: usize) -> Check {
    let rays = random_tail_rays(rng, dim);
    let (na, nb) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a: Vec<QVec> = random_points(rng, dim, na, -3, 3).iter().map(|v| ivec(v)).collect();
    let b: Vec<QVec> = random_points(rng, dim, nb, -3, 3).iter().map(|v| ivec(v)).collect();
    let pa = TailedPolyhedron::from_points(dim, &a, &rays).map_err(|e| e.to_string())?;
    let pb = TailedPolyhedron::from_points(dim, &b, &rays).map_err(|e| e.to_string())?;
    let sum = pa.minkowski_sum(&pb).map_err(|e| e.to_string())?;
    let u = random_dual_vector(rng, &rays, dim);
    let lhs = sum.eval_min(&u);
    let rhs = match (eval_oracle(&a, &rays, &u), eval_oracle(&b, &rays, &u)) {
        (Some(x), Some(y)) => Extended::Finite(x + y),
        _ => Extended::NegInf,
    };
    if lhs != rhs {
        return Err(format!("support of a Minkowski sum at {u:?}: {lhs:?} vs {rhs:?}"));
    }
    let base = line_base(3);
    let r = random_divisor(rng, &base, dim);
    let mu = WeightFunction::from_pairs(base.prime_ids().map(|p| (p, Q::new(rng.gen_range(0..=3).into(), rng.gen_range(1..=2).into()))));
    let u = random_dual_vector(rng, &r.rays, dim);
    let ws = r.div.weighted_sum(&mu).map_err(|e| e.to_string())?;
    let expected: Q = r.eval_oracle(&u).iter().map(|(p, x)| mu.get(*p) * x).sum();
    if ws.eval_min(&u) != Extended::Finite(expected.clone()) {
        return Err(format!("weighted sum evaluates to {:?}, expected {expected}", ws.eval_min(&u)));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Localization.

/// One random instance of D_f(u) = D(u + k w) − D(k w) away from the zeros of
/// f. Returns `Ok(false)` when the sampled data admit no effective zero set.
pub fn check_localization(rng: &mut impl Rng, dim: usize) -> Result<bool, String> {
    let base = line_base(3);
    let r = random_divisor(rng, &base, dim);
    let w = random_dual_vector(rng, &r.rays, dim);
    let dw = r.eval_oracle(&w);
    let degree: Q = dw.values().sum();
    if degree.is_negative() {
        return Ok(false);
    }
    // zero_set − D(w) has degree 0 and integral coefficients, so it is principal.
    let target = PrimeId(rng.gen_range(0..3));
    let zero = if degree.is_zero() { QDivisor::new() } else { QDivisor::from_pairs([(target, degree)]) };
    let face = r.div.tail().face_at(&w).expect("w in the dual tail");
    let mut u = None;
    for _ in 0..50 {
        let c = ivec(&random_ivec(rng, dim, -4, 4));
        if face.rays().iter().all(|x| !dot(&c, x).is_negative()) && face.lineality().iter().all(|x| dot(&c, x).is_zero()) {
            u = Some(c);
            break;
        }
    }
    let u = u.unwrap_or_else(|| vec![Q::zero(); dim]);
    let bound = r.div.localization_k_bound(&w, &u).map_err(|e| e.to_string())?;
    let local = r.div.localize(&w, &zero).map_err(|e| e.to_string())?;
    let lhs = as_map(&local.evaluate(&u).map_err(|e| e.to_string())?);
    let zeros = zero.support();
    for extra in [0i64, 1, 7] {
        let k = bound.ceil() + qi(extra);
        let kw = scale(&k, &w);
        let a = r.eval_oracle(&add(&u, &kw));
        let b = r.eval_oracle(&kw);
        for p in base.prime_ids().filter(|p| !zeros.contains(p)) {
            let expected = a.get(&p).cloned().unwrap_or_default() - b.get(&p).cloned().unwrap_or_default();
            let got = lhs.get(&p).cloned().unwrap_or_default();
            if got != expected {
                return Err(format!("at {} with k={k}: {got} vs {expected}", base.name(p)));
            }
        }
    }
    if !r.div.localization_identity_check(&w, &zero, &u, &bound.ceil()).map_err(|e| e.to_string())? {
        return Err("library identity check disagrees".into());
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Coherent families from lower envelopes of affine functions.

/// Cell i at prime P is {v : ⟨m_i, v⟩ + h_{P,i} <= ⟨m_k, v⟩ + h_{P,k} ∀k};
/// every pair is coherent with u = m_i − m_j and c_P = h_{P,j} − h_{P,i}.
pub fn envelope_family(rng: &mut impl Rng, base: &Arc<BaseVariety>, dim: usize, cells: usize) -> Vec<PPDivisor> {
    let slopes: Vec<QVec> = loop {
        let mut s: Vec<Vec<i64>> = random_points(rng, dim, cells, -2, 2);
        s.sort();
        s.dedup();
        let q: Vec<QVec> = s.iter().map(|v| ivec(v)).collect();
        let diffs: Vec<QVec> = q.iter().map(|v| sub(v, &q[0])).collect();
        if q.len() == cells && rank(&diffs, dim) == dim {
            break q;
        }
    };
    let heights: Vec<Vec<Q>> = base.prime_ids().map(|_| (0..cells).map(|_| qi(rng.gen_range(-3..=3))).collect()).collect();
    (0..cells)
        .map(|i| {
            let normals: Vec<QVec> = (0..cells).filter(|&k| k != i).map(|k| sub(&slopes[k], &slopes[i])).collect();
            let tail = Cone::from_constraints(dim, &normals, &[]);
            let coeffs: Vec<(PrimeId, TailedPolyhedron)> = base
                .prime_ids()
                .map(|p| {
                    let h = &heights[p.0];
                    let ineqs: Vec<(QVec, Q)> =
                        (0..cells).filter(|&k| k != i).map(|k| (sub(&slopes[k], &slopes[i]), &h[i] - &h[k])).collect();
                    (p, TailedPolyhedron::from_constraints(dim, &ineqs, &[]).expect("pointed cells"))
                })
                .collect();
            PPDivisor::new(base.clone(), tail, coeffs).expect("cells share the tail")
        })
        .collect()
}

/// All pairs are certified, certificates verify, and for i, j, k the sum of
/// the certificates of (i, k) and (j, k) certifies (D^i ∩ D^j, D^k).
pub fn check_coherence_under_intersection(divs: &[PPDivisor]) -> Check {
    let certs = check_coherence(divs).map_err(|e| e.to_string())?;
    let mut oriented = BTreeMap::new();
    for ((i, j), c) in &certs {
        let Coherence::Certified(cert) = c else {
            return Err(format!("pair ({i}, {j}) not certified: {c:?}"));
        };
        if !verify(&divs[*i], &divs[*j], cert) {
            return Err(format!("certificate of ({i}, {j}) does not verify"));
        }
        oriented.insert((*i, *j), cert.clone());
        oriented.insert((*j, *i), cert.reversed());
    }
    let n = divs.len();
    for i in 0..n {
        for j in i + 1..n {
            let meet = divs[i].intersect(&divs[j]).map_err(|e| e.to_string())?;
            for k in (0..n).filter(|&k| k != i && k != j) {
                let cert = combine(&oriented[&(i, k)], &oriented[&(j, k)]);
                if !verify(&meet, &divs[k], &cert) {
                    return Err(format!("combined certificate fails for ({i} ∩ {j}, {k})"));
                }
            }
        }
    }
    Ok(())
}
