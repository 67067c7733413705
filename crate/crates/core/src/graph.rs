//! Bipartite pattern multigraphs, labelled patterns and weighted hosts.
//!
//! Vertices of a pattern are addressed globally: left vertices are
//! `0..left_size`, right vertices follow at `left_size..left_size+right_size`.

use std::collections::BTreeMap;

use num::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{random_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BipartitePattern {
    left: usize,
    right: usize,
    /// (left index, right index) -> multiplicity >= 1
    edges: BTreeMap<(usize, usize), u32>,
}

impl BipartitePattern {
    pub fn new(left: usize, right: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut p = BipartitePattern { left, right, edges: BTreeMap::new() };
        for &(a, b, m) in edges {
            if a >= left || b >= right {
                return Err(Error::InvalidPattern(format!("edge ({a},{b}) out of range for ({left},{right})")));
            }
            if m == 0 {
                return Err(Error::InvalidPattern(format!("edge ({a},{b}) has multiplicity 0")));
            }
            *p.edges.entry((a, b)).or_insert(0) += m;
        }
        Ok(p)
    }

    /// Simple pattern from an edge list (each listed edge once).
    pub fn simple(left: usize, right: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let e: Vec<_> = edges.iter().map(|&(a, b)| (a, b, 1)).collect();
        Self::new(left, right, &e)
    }

    pub fn edgeless(left: usize, right: usize) -> Self {
        BipartitePattern { left, right, edges: BTreeMap::new() }
    }

    pub fn complete(left: usize, right: usize) -> Self {
        let mut edges = BTreeMap::new();
        for a in 0..left {
            for b in 0..right {
                edges.insert((a, b), 1);
            }
        }
        BipartitePattern { left, right, edges }
    }

    /// Path with `len` vertices alternating sides, starting on the left.
    pub fn path(len: usize) -> Self {
        let left = len.div_ceil(2);
        let right = len / 2;
        let mut e = Vec::new();
        for i in 0..len.saturating_sub(1) {
            let (a, b) = if i % 2 == 0 { (i / 2, i / 2) } else { (i / 2 + 1, i / 2) };
            e.push((a, b));
        }
        Self::simple(left, right, &e).expect("path edges are in range")
    }

    /// Even cycle with `2k` vertices.
    pub fn cycle(k: usize) -> Self {
        let mut e = Vec::new();
        for i in 0..k {
            e.push((i, i));
            e.push(((i + 1) % k, i));
        }
        let mut p = BipartitePattern::edgeless(k, k);
        for (a, b) in e {
            p.edges.insert((a, b), 1);
        }
        p
    }

    pub fn left_size(&self) -> usize {
        self.left
    }
    pub fn right_size(&self) -> usize {
        self.right
    }
    pub fn vertex_count(&self) -> usize {
        self.left + self.right
    }
    pub fn edges(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.edges
    }
    pub fn edge_list(&self) -> Vec<(usize, usize, u32)> {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m)).collect()
    }
    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        self.edges.get(&(a, b)).copied().unwrap_or(0)
    }
    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().map(|&m| m as usize).sum()
    }
    /// ‖F‖ = |V| + |E| with multiplicity.
    pub fn norm(&self) -> usize {
        self.vertex_count() + self.edge_count()
    }
    pub fn is_simple(&self) -> bool {
        self.edges.values().all(|&m| m == 1)
    }

    pub fn side(&self, v: usize) -> Side {
        if v < self.left {
            Side::Left
        } else {
            Side::Right
        }
    }
    /// Global id of the right vertex `b`.
    pub fn rv(&self, b: usize) -> usize {
        self.left + b
    }
    /// Index within its side.
    pub fn local(&self, v: usize) -> usize {
        if v < self.left {
            v
        } else {
            v - self.left
        }
    }

    /// Simple undirected adjacency over global ids (multiplicities dropped).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in self.edges.keys() {
            adj[a].push(self.left + b);
            adj[self.left + b].push(a);
        }
        adj
    }

    /// Global-id edges with multiplicity.
    pub fn global_edges(&self) -> Vec<(usize, usize, u32)> {
        self.edges.iter().map(|(&(a, b), &m)| (a, self.left + b, m)).collect()
    }

    pub fn transpose(&self) -> Self {
        BipartitePattern {
            left: self.right,
            right: self.left,
            edges: self.edges.iter().map(|(&(a, b), &m)| ((b, a), m)).collect(),
        }
    }

    /// Adds isolated vertices up to the given side sizes.
    pub fn padded(&self, n: usize, m: usize) -> Result<Self> {
        if n < self.left || m < self.right {
            return Err(Error::InvalidArgument(format!(
                "cannot pad ({},{}) down to ({n},{m})",
                self.left, self.right
            )));
        }
        Ok(BipartitePattern { left: n, right: m, edges: self.edges.clone() })
    }

    /// Bipartite complement of a simple pattern (Def. of the logical cover number).
    pub fn complement(&self) -> Result<Self> {
        if !self.is_simple() {
            return Err(Error::InvalidPattern("complement of a multigraph".into()));
        }
        let mut edges = BTreeMap::new();
        for a in 0..self.left {
            for b in 0..self.right {
                if !self.edges.contains_key(&(a, b)) {
                    edges.insert((a, b), 1);
                }
            }
        }
        Ok(BipartitePattern { left: self.left, right: self.right, edges })
    }

    /// Pattern with multiplicities reset to 1.
    pub fn underlying_simple(&self) -> Self {
        BipartitePattern {
            left: self.left,
            right: self.right,
            edges: self.edges.keys().map(|&k| (k, 1)).collect(),
        }
    }

    /// Quotient by partitions of the two sides given as block-index maps.
    pub fn quotient(&self, left_block: &[usize], left_blocks: usize, right_block: &[usize], right_blocks: usize) -> Self {
        let mut edges = BTreeMap::new();
        for (&(a, b), &m) in &self.edges {
            *edges.entry((left_block[a], right_block[b])).or_insert(0) += m;
        }
        BipartitePattern { left: left_blocks, right: right_blocks, edges }
    }

    /// Relabels by side-preserving permutations (`pa[a]` is the new index of `a`).
    pub fn relabel(&self, pa: &[usize], pb: &[usize]) -> Self {
        BipartitePattern {
            left: self.left,
            right: self.right,
            edges: self.edges.iter().map(|(&(a, b), &m)| ((pa[a], pb[b]), m)).collect(),
        }
    }

    /// Removes isolated vertices; returns the pattern and the isolated counts per side.
    pub fn without_isolated(&self) -> (Self, usize, usize) {
        let mut la = vec![false; self.left];
        let mut lb = vec![false; self.right];
        for &(a, b) in self.edges.keys() {
            la[a] = true;
            lb[b] = true;
        }
        let mut ma = vec![usize::MAX; self.left];
        let mut mb = vec![usize::MAX; self.right];
        let mut ca = 0;
        for a in 0..self.left {
            if la[a] {
                ma[a] = ca;
                ca += 1;
            }
        }
        let mut cb = 0;
        for b in 0..self.right {
            if lb[b] {
                mb[b] = cb;
                cb += 1;
            }
        }
        let edges = self.edges.iter().map(|(&(a, b), &m)| ((ma[a], mb[b]), m)).collect();
        (BipartitePattern { left: ca, right: cb, edges }, self.left - ca, self.right - cb)
    }

    /// Disjoint union; the second pattern's vertices come after the first's on each side.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let mut edges = self.edges.clone();
        for (&(a, b), &m) in &other.edges {
            edges.insert((a + self.left, b + self.right), m);
        }
        BipartitePattern { left: self.left + other.left, right: self.right + other.right, edges }
    }

    /// Number of bipartition-respecting automorphisms (brute force).
    pub fn automorphism_count(&self) -> usize {
        let mut count = 0;
        let la = permutations(self.left);
        let lb = permutations(self.right);
        for pa in &la {
            for pb in &lb {
                if self.edges.iter().all(|(&(a, b), &m)| self.multiplicity(pa[a], pb[b]) == m) {
                    count += 1;
                }
            }
        }
        count
    }

    /// Random multigraph with the given side sizes and total multiplicity.
    pub fn random<R: Rng>(rng: &mut R, left: usize, right: usize, total_mult: usize) -> Self {
        let mut p = BipartitePattern::edgeless(left, right);
        if left == 0 || right == 0 {
            return p;
        }
        for _ in 0..total_mult {
            let a = rng.gen_range(0..left);
            let b = rng.gen_range(0..right);
            *p.edges.entry((a, b)).or_insert(0) += 1;
        }
        p
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// An (ℓ, r)-labelled bipartite pattern; labels may repeat vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledPattern {
    pub base: BipartitePattern,
    /// Left-side local indices.
    pub left_labels: Vec<usize>,
    /// Right-side local indices.
    pub right_labels: Vec<usize>,
}

impl LabelledPattern {
    pub fn new(base: BipartitePattern, left_labels: Vec<usize>, right_labels: Vec<usize>) -> Result<Self> {
        if left_labels.iter().any(|&a| a >= base.left_size()) || right_labels.iter().any(|&b| b >= base.right_size()) {
            return Err(Error::InvalidPattern("label refers to a vertex outside its side".into()));
        }
        Ok(LabelledPattern { base, left_labels, right_labels })
    }

    pub fn unlabelled(base: BipartitePattern) -> Self {
        LabelledPattern { base, left_labels: vec![], right_labels: vec![] }
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.left_labels.len(), self.right_labels.len())
    }

    /// Global ids of labelled vertices, deduplicated and sorted.
    pub fn labelled_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .left_labels
            .iter()
            .copied()
            .chain(self.right_labels.iter().map(|&b| self.base.rv(b)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The fully labelled edgeless pattern 𝐉 of arity (ℓ, r).
    pub fn all_ones(l: usize, r: usize) -> Self {
        LabelledPattern {
            base: BipartitePattern::edgeless(l, r),
            left_labels: (0..l).collect(),
            right_labels: (0..r).collect(),
        }
    }

    /// The gadget D^{i,j}: edgeless, labels `i` and `j` (0-based, left side) on one vertex.
    pub fn diagonal(l: usize, r: usize, i: usize, j: usize) -> Self {
        assert!(i < l && j < l && i != j);
        let mut ids = vec![0; l];
        let mut next = 0;
        for p in 0..l {
            if p == i {
                continue;
            }
            ids[p] = next;
            next += 1;
        }
        ids[i] = ids[j];
        LabelledPattern {
            base: BipartitePattern::edgeless(l - 1, r),
            left_labels: ids,
            right_labels: (0..r).collect(),
        }
    }
}

/// An n×m matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedHost {
    n: usize,
    m: usize,
    entries: Vec<Q>,
}

impl WeightedHost {
    pub fn new(n: usize, m: usize, entries: Vec<Q>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::DimensionMismatch(format!("host dimensions must be positive, got {n}x{m}")));
        }
        if entries.len() != n * m {
            return Err(Error::DimensionMismatch(format!("expected {} entries, got {}", n * m, entries.len())));
        }
        Ok(WeightedHost { n, m, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged host rows".into()));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                entries.push(f(i, j));
            }
        }
        WeightedHost { n, m, entries }
    }

    pub fn constant(n: usize, m: usize, v: Q) -> Self {
        Self::from_fn(n, m, |_, _| v.clone())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Q::from_integer(1.into()) } else { Q::zero() })
    }

    /// 0/1 host from a bitmask over row-major positions.
    pub fn from_bits(n: usize, m: usize, bits: u64) -> Self {
        Self::from_fn(n, m, |i, j| Q::from_integer((((bits >> (i * m + j)) & 1) as i64).into()))
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize, m: usize, num_bound: i64, den_bound: i64) -> Self {
        let entries = (0..n * m).map(|_| random_q(rng, num_bound, den_bound)).collect();
        WeightedHost { n, m, entries }
    }

    pub fn rows(&self) -> usize {
        self.n
    }
    pub fn cols(&self) -> usize {
        self.m
    }
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i * self.m + j]
    }
    pub fn entries(&self) -> &[Q] {
        &self.entries
    }
    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.entries[i * self.m + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.m, self.n, |i, j| self.get(j, i).clone())
    }

    /// Host with rows and columns moved: new (π(i), σ(j)) = old (i, j).
    pub fn permuted(&self, pi: &[usize], sigma: &[usize]) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.m {
                out.set(pi[i], sigma[j], self.get(i, j).clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_and_counts() {
        let p = BipartitePattern::new(2, 1, &[(0, 0, 2), (1, 0, 1)]).unwrap();
        assert_eq!(p.edge_count(), 3);
        assert_eq!(p.norm(), 6);
        assert!(!p.is_simple());
        assert!(BipartitePattern::new(1, 1, &[(1, 0, 1)]).is_err());
        assert!(BipartitePattern::new(1, 1, &[(0, 0, 0)]).is_err());
    }

    #[test]
    fn complement_examples() {
        let e = BipartitePattern::edgeless(2, 2);
        assert_eq!(e.complement().unwrap(), BipartitePattern::complete(2, 2));
        let pm = BipartitePattern::simple(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let c = pm.complement().unwrap();
        assert_eq!(c.edge_count(), 6);
        assert_eq!(c.complement().unwrap(), pm);
        let multi = BipartitePattern::new(1, 1, &[(0, 0, 2)]).unwrap();
        assert!(multi.complement().is_err());
    }

    #[test]
    fn automorphisms() {
        assert_eq!(BipartitePattern::complete(2, 2).automorphism_count(), 4);
        assert_eq!(BipartitePattern::path(3).automorphism_count(), 2);
        assert_eq!(BipartitePattern::complete(1, 1).automorphism_count(), 1);
        assert_eq!(BipartitePattern::cycle(3).automorphism_count(), 6);
    }

    #[test]
    fn path_shapes() {
        let p = BipartitePattern::path(6);
        assert_eq!((p.left_size(), p.right_size(), p.edge_count()), (3, 3, 5));
        let p3 = BipartitePattern::path(3);
        assert_eq!((p3.left_size(), p3.right_size()), (2, 1));
    }

    #[test]
    fn permutation_enumeration() {
        assert_eq!(permutations(0).len(), 1);
        assert_eq!(permutations(4).len(), 24);
    }

    #[test]
    fn diagonal_gadget() {
        let d = LabelledPattern::diagonal(3, 1, 0, 2);
        assert_eq!(d.left_labels[0], d.left_labels[2]);
        assert_ne!(d.left_labels[1], d.left_labels[0]);
        assert_eq!(d.base.left_size(), 2);
    }
}
