//! Exact rational scalars and dense vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Q = BigRational;
pub type QVec = Vec<Q>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| qi(x)).collect()
}

pub fn zero_vec(dim: usize) -> QVec {
    vec![Q::zero(); dim]
}

pub fn unit_vec(dim: usize, i: usize) -> QVec {
    let mut v = zero_vec(dim);
    v[i] = Q::one();
    v
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

pub fn neg(a: &[Q]) -> QVec {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn sum<'a>(dim: usize, vs: impl IntoIterator<Item = &'a QVec>) -> QVec {
    vs.into_iter().fold(zero_vec(dim), |acc, v| add(&acc, v))
}

/// Positive multiple of `a` with coprime integer entries; zero stays zero.
pub fn primitive(a: &[Q]) -> QVec {
    if is_zero(a) {
        return a.to_vec();
    }
    let mut l = BigInt::one();
    for x in a {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = a.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

/// Sign-normalized primitive vector: first nonzero entry positive.
pub fn primitive_up_to_sign(a: &[Q]) -> QVec {
    let p = primitive(a);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => neg(&p),
        _ => p,
    }
}

pub fn to_integers(a: &[Q]) -> Option<Vec<BigInt>> {
    a.iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
}

pub fn from_integers(a: &[BigInt]) -> QVec {
    a.iter().map(|x| Q::from_integer(x.clone())).collect()
}

pub fn cmp_q(a: &Q, b: &Q) -> Ordering {
    a.cmp(b)
}

/// Lowest-terms display, `p/q` or `p`.
pub struct ShowQ<'a>(pub &'a Q);

impl fmt::Display for ShowQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub struct ShowVec<'a>(pub &'a [Q]);

impl fmt::Display for ShowVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", ShowQ(x))?;
        }
        write!(f, ")")
    }
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Parses a comma separated vector of rationals.
pub fn parse_qvec(s: &str) -> Option<QVec> {
    let s = s.trim();
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(parse_q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_clears_denominators_and_gcd() {
        assert_eq!(primitive(&[q(1, 2), q(3, 4)]), qvec(&[2, 3]));
        assert_eq!(primitive(&qvec(&[4, -6])), qvec(&[2, -3]));
        assert_eq!(primitive_up_to_sign(&qvec(&[-4, 6])), qvec(&[2, -3]));
        assert_eq!(primitive(&qvec(&[0, 0])), qvec(&[0, 0]));
    }

    #[test]
    fn parse_roundtrip() {
        assert_eq!(parse_q("-1/2"), Some(q(-1, 2)));
        assert_eq!(parse_q("6/4"), Some(q(3, 2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(parse_qvec("1, -1/3"), Some(vec![qi(1), q(-1, 3)]));
        assert_eq!(format!("{}", ShowVec(&[q(-1, 2), qi(3)])), "(-1/2, 3)");
    }
}
