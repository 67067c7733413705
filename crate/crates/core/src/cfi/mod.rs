//! Lower-bound laboratory: simple graphs, CFI graphs, homomorphism counts,
//! Weisfeiler–Leman refinement, oddomorphisms, double covers and
//! counting-width experiments.

mod construct;
mod hom;
mod iso;
mod oddo;
mod width;
mod wl;

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{permutations, BipartitePattern, Side, WeightedHost};
use crate::rational::Q;

pub use construct::{bipartite_double_cover, cfi, cfi_even_odd, cfi_twist_isomorphism, CfiInstance};
pub use hom::{brute_hom_count, cfi_hom_count, dp_hom_count, hom_count, weighted_hom_count, BRUTE_HOM_CAP};
pub use iso::{find_isomorphism, is_isomorphism, ISO_NODE_CAP};
pub use oddo::{exists_weak_oddomorphism, OddomorphismWitness, ODDO_CAP};
pub use width::{counting_width_experiment, generate_ck_pairs, matching_counts, perfect_matching_count, WidthPair, WidthReport};
pub use wl::{ck_equivalent, k_wl_equivalent, WlVerdict};

/// A finite graph with optional bipartition, vertex colours, rational edge
/// weights and edge directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    /// Undirected: u < v. Directed: arcs (u, v).
    edges: BTreeSet<(usize, usize)>,
    directed: bool,
    adj: Vec<Vec<usize>>,
    side: Option<Vec<Side>>,
    colors: Option<Vec<u32>>,
    weights: BTreeMap<(usize, usize), Q>,
}

impl SimpleGraph {
    /// Undirected graph; loops are rejected, repeated edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edges, false)
    }

    pub fn directed(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, arcs, true)
    }

    fn build(n: usize, edges: &[(usize, usize)], directed: bool) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) outside a graph on {n} vertices")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("loop at vertex {u}")));
            }
            set.insert(if directed { (u, v) } else { (u.min(v), u.max(v)) });
        }
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in &set {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(SimpleGraph {
            n,
            edges: set,
            directed,
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            side: None,
            colors: None,
            weights: BTreeMap::new(),
        })
    }

    /// Fixes a bipartition; every edge must cross it.
    pub fn with_sides(mut self, side: Vec<Side>) -> Result<Self> {
        if side.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} sides for {} vertices", side.len(), self.n)));
        }
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| side[u] == side[v]) {
            return Err(Error::InvalidArgument(format!("edge ({u},{v}) does not cross the bipartition")));
        }
        self.side = Some(side);
        Ok(self)
    }

    pub fn with_colors(mut self, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != self.n {
            return Err(Error::DimensionMismatch(format!("{} colours for {} vertices", colors.len(), self.n)));
        }
        self.colors = Some(colors);
        Ok(self)
    }

    /// Attaches weights to existing edges; unlisted edges weigh 1.
    pub fn with_weights(mut self, weights: impl IntoIterator<Item = ((usize, usize), Q)>) -> Result<Self> {
        for ((u, v), w) in weights {
            let key = self.key(u, v);
            if !self.edges.contains(&key) {
                return Err(Error::InvalidArgument(format!("weight on the non-edge ({u},{v})")));
            }
            if w.is_one() {
                self.weights.remove(&key);
            } else {
                self.weights.insert(key, w);
            }
        }
        Ok(self)
    }

    fn key(&self, u: usize, v: usize) -> (usize, usize) {
        if self.directed {
            (u, v)
        } else {
            (u.min(v), u.max(v))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
    pub fn is_directed(&self) -> bool {
        self.directed
    }
    pub fn sides(&self) -> Option<&[Side]> {
        self.side.as_deref()
    }
    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }
    pub fn is_weighted(&self) -> bool {
        !self.weights.is_empty()
    }

    /// Neighbours ignoring direction, sorted.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Respects direction for directed graphs.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.edges.contains(&self.key(u, v))
    }

    /// Weight of an edge (1 when unweighted), 0 for non-edges.
    pub fn weight(&self, u: usize, v: usize) -> Q {
        if !self.has_edge(u, v) {
            return Q::zero();
        }
        self.weights.get(&self.key(u, v)).cloned().unwrap_or_else(Q::one)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if !std::mem::replace(&mut seen[u], true) {
                    stack.push(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Two-colouring of a connected undirected graph, vertex 0 on the left.
    pub fn two_colouring(&self) -> Option<Vec<Side>> {
        let mut side: Vec<Option<Side>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(Side::Left);
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                let other = if side[v] == Some(Side::Left) { Side::Right } else { Side::Left };
                for &u in &self.adj[v] {
                    match side[u] {
                        None => {
                            side[u] = Some(other);
                            stack.push(u);
                        }
                        Some(x) if x != other => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.expect("every vertex visited")).collect())
    }

    /// Image under a vertex permutation (old vertex v becomes perm[v]).
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        let mut g = Self::build(self.n, &edges, self.directed).expect("a permutation keeps edges valid");
        fn moved<T: Copy>(xs: &[T], perm: &[usize]) -> Vec<T> {
            let mut out = xs.to_vec();
            for (v, &x) in xs.iter().enumerate() {
                out[perm[v]] = x;
            }
            out
        }
        g.side = self.side.as_deref().map(|s| moved(s, perm));
        g.colors = self.colors.as_deref().map(|c| moved(c, perm));
        g.weights = self.weights.iter().map(|(&(u, v), w)| (g.key(perm[u], perm[v]), w.clone())).collect();
        g
    }

    /// Edge list of the underlying undirected simple graph.
    pub fn undirected_edges(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self.edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        set.into_iter().collect()
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument("a cycle needs at least 3 vertices".into()));
        }
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges).expect("valid")
    }

    /// K_{a,b} with the first a vertices on the left.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
        let side = (0..a + b).map(|v| if v < a { Side::Left } else { Side::Right }).collect();
        Self::new(a + b, &edges).expect("valid").with_sides(side).expect("crossing edges")
    }

    /// The r×c grid, sides by coordinate parity.
    pub fn grid(r: usize, c: usize) -> Self {
        let id = |i: usize, j: usize| i * c + j;
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i + 1 < r {
                    edges.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    edges.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        let side = (0..r * c).map(|v| if (v / c + v % c) % 2 == 0 { Side::Left } else { Side::Right }).collect();
        Self::new(r * c, &edges).expect("valid").with_sides(side).expect("crossing edges")
    }

    /// Underlying simple graph of a pattern; left vertices first.
    pub fn from_pattern(f: &BipartitePattern) -> Self {
        let a = f.left_size();
        let edges: Vec<(usize, usize)> = f.edges().keys().map(|&(x, y)| (x, a + y)).collect();
        let side = (0..f.vertex_count()).map(|v| if v < a { Side::Left } else { Side::Right }).collect();
        Self::new(f.vertex_count(), &edges).expect("valid").with_sides(side).expect("crossing edges")
    }

    /// Pattern with the bipartition of this graph (sides required).
    pub fn to_pattern(&self) -> Result<BipartitePattern> {
        let (_, rows, cols) = self.biadjacency()?;
        let mut pos = vec![0usize; self.n];
        for (i, &v) in rows.iter().enumerate() {
            pos[v] = i;
        }
        for (j, &v) in cols.iter().enumerate() {
            pos[v] = j;
        }
        let edges: Vec<(usize, usize)> = self
            .undirected_edges()
            .into_iter()
            .map(|(u, v)| if rows.binary_search(&u).is_ok() { (pos[u], pos[v]) } else { (pos[v], pos[u]) })
            .collect();
        BipartitePattern::simple(rows.len(), cols.len(), &edges)
    }

    /// Bi-adjacency matrix with edge weights; rows are the left vertices in
    /// increasing order, columns the right ones.
    pub fn biadjacency(&self) -> Result<(WeightedHost, Vec<usize>, Vec<usize>)> {
        let side = self.side.as_ref().ok_or_else(|| Error::InvalidArgument("graph has no fixed bipartition".into()))?;
        let rows: Vec<usize> = (0..self.n).filter(|&v| side[v] == Side::Left).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&v| side[v] == Side::Right).collect();
        let host = WeightedHost::from_fn(rows.len(), cols.len(), |i, j| self.weight(rows[i], cols[j]));
        Ok((host, rows, cols))
    }

    /// Graph of the nonzero entries of a host; rows come first.
    pub fn from_biadjacency(g: &WeightedHost) -> Self {
        let (n, m) = (g.rows(), g.cols());
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        for i in 0..n {
            for j in 0..m {
                let w = g.get(i, j);
                if !w.is_zero() {
                    edges.push((i, n + j));
                    weights.push(((i, n + j), w.clone()));
                }
            }
        }
        let side = (0..n + m).map(|v| if v < n { Side::Left } else { Side::Right }).collect();
        Self::new(n + m, &edges)
            .expect("valid")
            .with_sides(side)
            .expect("crossing edges")
            .with_weights(weights)
            .expect("weights on edges")
    }

    /// Disjoint union; the other graph's vertices follow ours.
    pub fn disjoint_union(&self, o: &Self) -> Result<Self> {
        if self.directed != o.directed {
            return Err(Error::InvalidArgument("cannot unite a directed and an undirected graph".into()));
        }
        let mut edges: Vec<(usize, usize)> = self.edges.iter().copied().collect();
        edges.extend(o.edges.iter().map(|&(u, v)| (u + self.n, v + self.n)));
        let mut g = Self::build(self.n + o.n, &edges, self.directed)?;
        if let (Some(a), Some(b)) = (&self.side, &o.side) {
            g.side = Some(a.iter().chain(b).copied().collect());
        }
        if let (Some(a), Some(b)) = (&self.colors, &o.colors) {
            g.colors = Some(a.iter().chain(b).copied().collect());
        }
        g.weights = self.weights.clone();
        g.weights.extend(o.weights.iter().map(|(&(u, v), w)| ((u + self.n, v + self.n), w.clone())));
        Ok(g)
    }

    fn adjacency_bits(&self, perm: &[usize]) -> u64 {
        let n = self.n;
        let mut bits = 0u64;
        for &(u, v) in &self.edges {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            bits |= 1 << (a * n + b - (a + 1) * (a + 2) / 2);
        }
        bits
    }

    /// Smallest adjacency bitmask over all relabellings (undirected, n ≤ 8).
    pub fn brute_canonical_code(&self, perms: &[Vec<usize>]) -> u64 {
        perms.iter().map(|p| self.adjacency_bits(p)).min().unwrap_or(0)
    }
}

/// One representative of every isomorphism class of simple graphs on n
/// vertices (n ≤ 7), optionally only the connected ones.
pub fn all_graphs(n: usize, connected_only: bool) -> Result<Vec<SimpleGraph>> {
    if n > 7 {
        return Err(Error::cap("vertex count for graph enumeration", n, 7));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = SimpleGraph::new(n, &edges)?;
        if connected_only && !g.is_connected() {
            continue;
        }
        let code = g.brute_canonical_code(&perms);
        if seen.insert(code) {
            out.push(g);
        }
    }
    Ok(out)
}
