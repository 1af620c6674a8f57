use super::rational::{dot, is_zero, primitive, sub, scale, zero_vec, Q, QVec};
use num_traits::{One, Zero};

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[QVec], ncols: usize) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        m[r] = scale(&inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                m[i] = sub(&m[i], &scale(&f, &m[r]));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[QVec], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of {x : <row, x> = 0 for every row}.
pub fn nullspace(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let (m, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = zero_vec(ncols);
            v[f] = Q::one();
            for (row, &p) in m.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of the row space: rref rows scaled to primitive integers.
pub fn canonical_basis(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    rref(rows, ncols).0.iter().map(|r| primitive(r)).collect()
}

/// Some solution x of A x = b, where A is given by rows.
pub fn solve(a: &[QVec], b: &[Q], ncols: usize) -> Option<QVec> {
    let aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zero_vec(ncols);
    for (row, &p) in m.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn in_span(basis: &[QVec], v: &[Q], ncols: usize) -> bool {
    let mut rows = basis.to_vec();
    let r0 = rank(&rows, ncols);
    rows.push(v.to_vec());
    rank(&rows, ncols) == r0
}

/// Orthogonal projection of `v` onto the complement of span(basis).
pub fn project_off(basis: &[QVec], v: &[Q]) -> QVec {
    if basis.is_empty() || is_zero(v) {
        return v.to_vec();
    }
    let n = v.len();
    // Gram system G c = B v; v - B^T c is orthogonal to the span.
    let gram: Vec<QVec> = basis.iter().map(|a| basis.iter().map(|b| dot(a, b)).collect()).collect();
    let rhs: QVec = basis.iter().map(|a| dot(a, v)).collect();
    let c = solve(&gram, &rhs, basis.len()).expect("gram system is consistent");
    let mut out = v.to_vec();
    for (ci, b) in c.iter().zip(basis) {
        out = sub(&out, &scale(ci, b));
    }
    debug_assert_eq!(out.len(), n);
    out
}

/// Matrix-vector product with the matrix given by rows.
pub fn mat_vec(rows: &[QVec], v: &[Q]) -> QVec {
    rows.iter().map(|r| dot(r, v)).collect()
}

pub fn transpose(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    (0..ncols).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect()
}

/// Inverse of a square matrix, if nonsingular.
pub fn inverse(rows: &[QVec]) -> Option<Vec<QVec>> {
    let n = rows.len();
    let aug: Vec<QVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut a = r.clone();
            a.extend(super::rational::unit_vec(n, i));
            a
        })
        .collect();
    let (m, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}
