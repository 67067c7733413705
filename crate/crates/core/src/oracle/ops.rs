//! Direct evaluation of the labelled-map operations from their defining
//! sums and products, with every term counted by brute force.

use num::{One, Zero};

use crate::graph::WeightedHost;
use crate::hompoly::{brute_labelled_hom, HomPolyExpr};
use crate::rational::Q;

/// Σ α_i · hom(𝐅_i pinned at (v, w)), by enumeration.
pub fn brute_expr(phi: &HomPolyExpr, v: &[usize], w: &[usize], g: &WeightedHost) -> Q {
    phi.terms().iter().fold(Q::zero(), |acc, t| acc + &t.coeff * brute_labelled_hom(&t.pattern, v, w, g))
}

/// `v` with `x` inserted at position `i`.
pub fn insert_label(v: &[usize], i: usize, x: usize) -> Vec<usize> {
    let mut out = v.to_vec();
    out.insert(i, x);
    out
}

fn excluded(v: &[usize], i: usize, x: usize, j: &[usize]) -> bool {
    let full = insert_label(v, i, x);
    j.iter().any(|&jj| full[jj] == x)
}

/// Σ over x ∈ [n] outside {v_j : j ∈ J} of φ(v[i/x], w); `v` has ℓ−1 entries
/// and J indexes the full ℓ-tuple.
pub fn direct_restricted_sum(phi: &HomPolyExpr, i: usize, j: &[usize], v: &[usize], w: &[usize], g: &WeightedHost) -> Q {
    (0..g.rows()).filter(|&x| !excluded(v, i, x, j)).fold(Q::zero(), |acc, x| acc + brute_expr(phi, &insert_label(v, i, x), w, g))
}

/// Product counterpart of [`direct_restricted_sum`].
pub fn direct_restricted_product(phi: &HomPolyExpr, i: usize, j: &[usize], v: &[usize], w: &[usize], g: &WeightedHost) -> Q {
    (0..g.rows()).filter(|&x| !excluded(v, i, x, j)).fold(Q::one(), |acc, x| acc * brute_expr(phi, &insert_label(v, i, x), w, g))
}
