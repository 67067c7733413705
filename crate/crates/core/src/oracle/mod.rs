//! Brute-force ground truth: hom/emb/sub counts on weighted hosts,
//! polynomial expansion and circuit identity testing.

mod ops;
mod poly;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::{BipartitePattern, WeightedHost};
use crate::rational::Q;

pub use ops::{brute_expr, direct_restricted_product, direct_restricted_sum, insert_label};
pub use poly::{
    circuits_equal, expand_circuit, monomial_symmetric, monomial_symmetric_via_power_sums, multilinearize, symbolic_sub_by_edge_classes, ExpandCaps,
    SparsePolynomial, Verdict,
};

pub const BRUTE_CAP: usize = 8;

/// Host scaled to integers by the lcm of its denominators.
struct ScaledHost {
    m: usize,
    x: Vec<BigInt>,
    small: Option<Vec<i128>>,
    denom: BigInt,
}

impl ScaledHost {
    fn new(g: &WeightedHost) -> Self {
        let mut d = BigInt::one();
        for q in g.entries() {
            d = d.lcm(q.denom());
        }
        let x: Vec<BigInt> = g.entries().iter().map(|q| q.numer() * (&d / q.denom())).collect();
        let small = x.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>();
        ScaledHost { m: g.cols(), x, small, denom: d }
    }
}

fn check_cap(f: &BipartitePattern) -> Result<()> {
    if f.vertex_count() > BRUTE_CAP {
        return Err(Error::cap("pattern vertex count for brute force", f.vertex_count(), BRUTE_CAP));
    }
    Ok(())
}

/// Sum over all maps of the left side; right vertices are summed independently.
fn hom_scaled_i128(f: &BipartitePattern, h: &ScaledHost, x: &[i128], n: usize) -> Option<i128> {
    let a = f.left_size();
    let mut nbrs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); f.right_size()];
    for (aa, b, mult) in f.edge_list() {
        nbrs[b].push((aa, mult));
    }
    let mut map = vec![0usize; a];
    let mut total: i128 = 0;
    loop {
        let mut prod: i128 = 1;
        for nb in &nbrs {
            let mut s: i128 = 0;
            for j in 0..h.m {
                let mut t: i128 = 1;
                for &(aa, mult) in nb {
                    t = t.checked_mul(x[map[aa] * h.m + j].checked_pow(mult)?)?;
                }
                s = s.checked_add(t)?;
            }
            prod = prod.checked_mul(s)?;
            if prod == 0 {
                break;
            }
        }
        total = total.checked_add(prod)?;
        let mut i = 0;
        while i < a {
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == a {
            return Some(total);
        }
    }
}

fn hom_scaled_big(f: &BipartitePattern, h: &ScaledHost, n: usize) -> BigInt {
    let a = f.left_size();
    let mut nbrs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); f.right_size()];
    for (aa, b, mult) in f.edge_list() {
        nbrs[b].push((aa, mult));
    }
    let mut map = vec![0usize; a];
    let mut total = BigInt::zero();
    loop {
        let mut prod = BigInt::one();
        for nb in &nbrs {
            let mut s = BigInt::zero();
            for j in 0..h.m {
                let mut t = BigInt::one();
                for &(aa, mult) in nb {
                    t *= num::pow::pow(h.x[map[aa] * h.m + j].clone(), mult as usize);
                }
                s += t;
            }
            prod *= s;
        }
        total += prod;
        let mut i = 0;
        while i < a {
            map[i] += 1;
            if map[i] < n {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == a {
            return total;
        }
    }
}

/// Σ over bipartition-respecting maps h of ∏_{ab ∈ E(F)} G(h(a), h(b)).
pub fn brute_hom(f: &BipartitePattern, g: &WeightedHost) -> Result<Q> {
    check_cap(f)?;
    let h = ScaledHost::new(g);
    let num = h
        .small
        .as_ref()
        .and_then(|x| hom_scaled_i128(f, &h, x, g.rows()))
        .map(BigInt::from)
        .unwrap_or_else(|| hom_scaled_big(f, &h, g.rows()));
    Ok(Q::new(num, num::pow::pow(h.denom.clone(), f.edge_count())))
}

fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(k: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(k, &mut cur, &mut used, &mut out);
    out
}

/// Σ over injective bipartition-respecting maps.
pub fn brute_emb(f: &BipartitePattern, g: &WeightedHost) -> Result<Q> {
    check_cap(f)?;
    if f.left_size() > g.rows() || f.right_size() > g.cols() {
        return Ok(Q::zero());
    }
    let h = ScaledHost::new(g);
    let left = injections(f.left_size(), g.rows());
    let right = injections(f.right_size(), g.cols());
    let edges = f.edge_list();
    let mut total = BigInt::zero();
    for l in &left {
        for r in &right {
            let mut t = BigInt::one();
            for &(a, b, mult) in &edges {
                t *= num::pow::pow(h.x[l[a] * h.m + r[b]].clone(), mult as usize);
                if t.is_zero() {
                    break;
                }
            }
            total += t;
        }
    }
    Ok(Q::new(total, num::pow::pow(h.denom.clone(), f.edge_count())))
}

pub fn brute_sub(f: &BipartitePattern, g: &WeightedHost) -> Result<Q> {
    let e = brute_emb(f, g)?;
    Ok(e / Q::from_integer(BigInt::from(f.automorphism_count())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn spec_examples() {
        let k2 = BipartitePattern::complete(1, 1);
        let ones = WeightedHost::constant(2, 3, q(1));
        assert_eq!(brute_hom(&k2, &ones).unwrap(), q(6));
        assert_eq!(brute_emb(&k2, &ones).unwrap(), q(6));
        assert_eq!(brute_sub(&k2, &ones).unwrap(), q(6));
        let p3 = BipartitePattern::complete(1, 2);
        for n in 1..4 {
            assert_eq!(brute_sub(&p3, &WeightedHost::constant(n, 1, q(1))).unwrap(), q(0));
        }
        let big = BipartitePattern::edgeless(5, 4);
        assert!(brute_hom(&big, &ones).is_err());
    }

    #[test]
    fn overflow_falls_back_to_bigints() {
        let f = BipartitePattern::new(1, 1, &[(0, 0, 8)]).unwrap();
        let g = WeightedHost::constant(2, 2, Q::from_integer(BigInt::from(1u64 << 40)));
        let expect = Q::from_integer(BigInt::from(4) * num::pow::pow(BigInt::from(1u64 << 40), 8));
        assert_eq!(brute_hom(&f, &g).unwrap(), expect);
    }
}
