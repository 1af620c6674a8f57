//! Integer matrices: Hermite normal form, sections, saturated kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
pub type IMat = Vec<Vec<BigInt>>;

pub fn imat(rows: &[&[i64]]) -> IMat {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn transpose(a: &IMat, ncols: usize) -> IMat {
    (0..ncols).map(|c| a.iter().map(|r| r[c].clone()).collect()).collect()
}

pub fn mul(a: &IMat, b: &IMat, bcols: usize) -> IMat {
    a.iter()
        .map(|r| (0..bcols).map(|c| r.iter().zip(b).fold(BigInt::zero(), |acc, (x, row)| acc + x * &row[c])).collect())
        .collect()
}

fn col_op(m: &mut IMat, i: usize, j: usize, coeffs: [&BigInt; 4]) {
    // [ci, cj] <- [ci, cj] * [[a, b], [c, d]]
    let [a, b, c, d] = coeffs;
    for row in m.iter_mut() {
        let (x, y) = (row[i].clone(), row[j].clone());
        row[i] = &x * a + &y * c;
        row[j] = &x * b + &y * d;
    }
}

fn negate_col(m: &mut IMat, i: usize) {
    for row in m.iter_mut() {
        row[i] = -row[i].clone();
    }
}

/// Column Hermite form: returns (H, U, pivot columns per row) with A U = H,
/// U unimodular and H lower triangular in its pivot columns 0..rank.
pub fn column_hnf(a: &IMat, ncols: usize) -> (IMat, IMat, Vec<Option<usize>>) {
    let mut h = a.clone();
    let mut u = identity(ncols);
    let mut col = 0;
    let mut pivots = Vec::new();
    for r in 0..h.len() {
        if col == ncols {
            pivots.push(None);
            continue;
        }
        for c in col + 1..ncols {
            if h[r][c].is_zero() {
                continue;
            }
            let (x, y) = (h[r][col].clone(), h[r][c].clone());
            // Prefer a pure elimination when the pivot already divides.
            let (g, p, q) = if !x.is_zero() && (&y % &x).is_zero() {
                (x.abs(), x.signum(), BigInt::zero())
            } else {
                let e = x.extended_gcd(&y);
                (e.gcd, e.x, e.y)
            };
            let (xb, yb) = (&x / &g, &y / &g);
            let mb = -&yb;
            col_op(&mut h, col, c, [&p, &mb, &q, &xb]);
            col_op(&mut u, col, c, [&p, &mb, &q, &xb]);
        }
        if h[r][col].is_zero() {
            pivots.push(None);
            continue;
        }
        if h[r][col].is_negative() {
            negate_col(&mut h, col);
            negate_col(&mut u, col);
        }
        // Reduce entries left of the pivot.
        for j in 0..col {
            let f = h[r][j].div_floor(&h[r][col]);
            if !f.is_zero() {
                let one = BigInt::one();
                let zero = BigInt::zero();
                let mf = -f;
                // cj <- cj - f * ccol
                col_op(&mut h, j, col, [&one, &zero, &mf, &one]);
                col_op(&mut u, j, col, [&one, &zero, &mf, &one]);
            }
        }
        pivots.push(Some(col));
        col += 1;
    }
    (h, u, pivots)
}

/// Canonical basis (row Hermite form) of the lattice spanned by the rows.
pub fn row_hnf(rows: &IMat, ncols: usize) -> IMat {
    if rows.is_empty() {
        return Vec::new();
    }
    let t = transpose(rows, ncols);
    let (h, _, pivots) = column_hnf(&t, rows.len());
    let rank = pivots.iter().flatten().count();
    let ht = transpose(&h, rows.len());
    ht.into_iter().take(rank).collect()
}

/// Result of splitting a surjection `deg: Z^n -> Z^k`.
#[derive(Clone, Debug)]
pub struct Split {
    /// n x k matrix with deg * section = id.
    pub section: IMat,
    /// Rows form a canonical basis of ker(deg).
    pub kernel: IMat,
}

/// Splits `deg` (k x n); `None` when it is not surjective.
pub fn split_surjection(deg: &IMat, n: usize) -> Option<Split> {
    let k = deg.len();
    let (h, u, pivots) = column_hnf(deg, n);
    if pivots.iter().any(Option::is_none) || (0..k).any(|i| !h[i][i].is_one()) {
        return None;
    }
    // H is unit lower triangular; section = U[:, :k] * H^{-1}.
    let mut hinv = identity(k);
    for c in 0..k {
        for r in c + 1..k {
            let mut acc = BigInt::zero();
            for j in c..r {
                acc += &h[r][j] * &hinv[j][c];
            }
            hinv[r][c] = -acc;
        }
    }
    let u_left: IMat = u.iter().map(|row| row[..k].to_vec()).collect();
    let section = mul(&u_left, &hinv, k);
    let kernel_cols: IMat = u.iter().map(|row| row[k..].to_vec()).collect();
    let kernel = row_hnf(&transpose(&kernel_cols, n - k), n);
    Some(Split { section, kernel })
}

/// Integer solution of `rows * m = rhs`, if one exists.
pub fn solve_integer(rows: &IMat, rhs: &[BigInt], ncols: usize) -> Option<Vec<BigInt>> {
    let (h, u, pivots) = column_hnf(rows, ncols);
    let mut y = vec![BigInt::zero(); ncols];
    for (r, piv) in pivots.iter().enumerate() {
        let acc = h[r].iter().zip(&y).fold(BigInt::zero(), |a, (x, v)| a + x * v);
        match piv {
            Some(c) => {
                let rest = &rhs[r] - &acc;
                let (quot, rem) = rest.div_mod_floor(&h[r][*c]);
                if !rem.is_zero() {
                    return None;
                }
                y[*c] = quot;
            }
            None => {
                if acc != rhs[r] {
                    return None;
                }
            }
        }
    }
    Some(u.iter().map(|row| row.iter().zip(&y).fold(BigInt::zero(), |a, (x, v)| a + x * v)).collect())
}
