//! Exact rational helpers shared by every module.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `p/q`, always with an explicit denominator.
pub fn fmt_q(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::parse(0, format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(p, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn pow_q(b: &Q, e: u32) -> Q {
    num::pow::pow(b.clone(), e as usize)
}

/// A random rational with numerator in `[-num_bound, num_bound]` and
/// denominator in `[1, den_bound]`.
pub fn random_q<R: Rng>(rng: &mut R, num_bound: i64, den_bound: i64) -> Q {
    let n = rng.gen_range(-num_bound..=num_bound);
    let d = rng.gen_range(1..=den_bound);
    qf(n, d)
}

pub fn is_integer(v: &Q) -> bool {
    v.denom().is_one()
}

pub fn abs_q(v: &Q) -> Q {
    v.abs()
}

/// Solves `A x = b` exactly. Free variables are set to zero. Returns `None`
/// when the system is inconsistent.
pub fn solve_linear(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / &m[row][col];
        for c in col..=cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Inverse of the Vandermonde matrix `V[j][e] = points[j]^e`.
pub fn vandermonde_inverse(points: &[Q]) -> Result<Vec<Vec<Q>>> {
    let d = points.len();
    for i in 0..d {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!(
                    "repeated interpolation point {}",
                    fmt_q(&points[i])
                )));
            }
        }
    }
    let v: Vec<Vec<Q>> = points
        .iter()
        .map(|p| (0..d).map(|e| pow_q(p, e as u32)).collect())
        .collect();
    let mut inv = vec![vec![Q::zero(); d]; d];
    for col in 0..d {
        let mut e = vec![Q::zero(); d];
        e[col] = Q::one();
        let x = solve_linear(&v, &e).expect("Vandermonde matrix with distinct points is invertible");
        for (row, val) in x.into_iter().enumerate() {
            inv[row][col] = val;
        }
    }
    Ok(inv)
}

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// `< points.len()` through the given points.
pub fn lagrange(points: &[(Q, Q)]) -> Vec<Q> {
    let d = points.len();
    let mut out = vec![Q::zero(); d];
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (e, c) in basis.iter().enumerate() {
                next[e + 1] += c;
                next[e] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        let scale = yi / denom;
        for (e, c) in basis.into_iter().enumerate() {
            out[e] += c * &scale;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_always_has_denominator() {
        assert_eq!(fmt_q(&q(1)), "1/1");
        assert_eq!(fmt_q(&qf(-6, 4)), "-3/2");
        assert_eq!(parse_q("3/7").unwrap(), qf(3, 7));
        assert_eq!(parse_q("5").unwrap(), q(5));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn lagrange_hits_points() {
        let pts: Vec<(Q, Q)> = (0..4).map(|i| (q(i), q(if i == 0 { 1 } else { 0 }))).collect();
        let c = lagrange(&pts);
        for (x, y) in &pts {
            let v = c.iter().enumerate().fold(Q::zero(), |a, (e, c)| a + c * pow_q(x, e as u32));
            assert_eq!(&v, y);
        }
    }

    #[test]
    fn vandermonde_roundtrip() {
        let pts: Vec<Q> = (0..4).map(q).collect();
        let inv = vandermonde_inverse(&pts).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let s = (0..4).fold(Q::zero(), |a, e| a + &inv[i][e] * pow_q(&pts[e], j as u32));
                assert_eq!(s, q((i == j) as i64));
            }
        }
        assert!(vandermonde_inverse(&[q(1), q(1)]).is_err());
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve_linear(&a, &[q(1), q(3)]).is_none());
        let x = solve_linear(&a, &[q(1), q(2)]).unwrap();
        assert_eq!(&x[0] + &x[1], q(1));
    }
}
