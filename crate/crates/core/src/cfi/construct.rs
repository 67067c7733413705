use super::SimpleGraph;
use crate::error::{Error, Result};
use crate::graph::Side;

/// G_U with its gadget map ρ: vertex x of the CFI graph is (rho[x], T) where
/// bit i of `gadget[x]` is T on the edge to the i-th neighbour of rho[x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfiInstance {
    pub base: SimpleGraph,
    pub twist: Vec<bool>,
    pub graph: SimpleGraph,
    pub rho: Vec<usize>,
    pub gadget: Vec<u64>,
}

impl CfiInstance {
    pub fn parity(&self) -> bool {
        self.twist.iter().filter(|&&t| t).count() % 2 == 1
    }

    /// γ(G) = Σ_v 2^{deg(v)−1}.
    pub fn expected_size(base: &SimpleGraph) -> usize {
        (0..base.vertex_count()).map(|v| if base.degree(v) == 0 { 1 } else { 1 << (base.degree(v) - 1) }).sum()
    }
}

pub fn cfi(base: &SimpleGraph, twist: &[bool]) -> Result<CfiInstance> {
    if base.is_directed() {
        return Err(Error::InvalidArgument("CFI bases are undirected".into()));
    }
    if base.vertex_count() == 0 || !base.is_connected() {
        return Err(Error::InvalidArgument("CFI base must be connected and non-empty".into()));
    }
    if twist.len() != base.vertex_count() {
        return Err(Error::DimensionMismatch(format!("twist of length {} for {} base vertices", twist.len(), base.vertex_count())));
    }
    if (0..base.vertex_count()).any(|v| base.degree(v) > 20) {
        return Err(Error::cap("base degree", (0..base.vertex_count()).map(|v| base.degree(v)).max().unwrap_or(0), 20));
    }
    let mut rho = Vec::new();
    let mut gadget = Vec::new();
    let mut first = Vec::with_capacity(base.vertex_count());
    for v in 0..base.vertex_count() {
        first.push(rho.len());
        let d = base.degree(v);
        for t in 0u64..(1 << d) {
            if (t.count_ones() % 2 == 1) == twist[v] {
                rho.push(v);
                gadget.push(t);
            }
        }
    }
    let pos = |v: usize, u: usize| base.neighbours(v).binary_search(&u).expect("u is a neighbour of v");
    let mut edges = Vec::new();
    for x in 0..rho.len() {
        let v = rho[x];
        for y in x + 1..rho.len() {
            let u = rho[y];
            if base.has_edge(v, u) && (gadget[x] >> pos(v, u) & 1) == (gadget[y] >> pos(u, v) & 1) {
                edges.push((x, y));
            }
        }
    }
    let mut graph = SimpleGraph::new(rho.len(), &edges)?;
    if let Some(side) = base.sides() {
        graph = graph.with_sides(rho.iter().map(|&v| side[v]).collect())?;
    }
    Ok(CfiInstance { base: base.clone(), twist: twist.to_vec(), graph, rho, gadget })
}

/// G_0 and G_1 (odd twist on vertex 0).
pub fn cfi_even_odd(base: &SimpleGraph) -> Result<(CfiInstance, CfiInstance)> {
    let mut u = vec![false; base.vertex_count()];
    let g0 = cfi(base, &u)?;
    u[0] = true;
    Ok((g0, cfi(base, &u)?))
}

/// Explicit isomorphism a → b when both twists have equal parity: flip T
/// along a set of base edges whose odd-degree vertices are exactly where
/// the twists differ.
pub fn cfi_twist_isomorphism(a: &CfiInstance, b: &CfiInstance) -> Option<Vec<usize>> {
    let base = &a.base;
    if base != &b.base || a.parity() != b.parity() {
        return None;
    }
    let n = base.vertex_count();
    let mut need: Vec<bool> = (0..n).map(|v| a.twist[v] != b.twist[v]).collect();
    // spanning tree by DFS, then fix parities from the leaves up
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &u in base.neighbours(v) {
            if !std::mem::replace(&mut seen[u], true) {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    let mut flip = vec![0u64; n];
    let pos = |v: usize, u: usize| base.neighbours(v).binary_search(&u).expect("neighbour");
    for &v in order.iter().rev() {
        if v != 0 && need[v] {
            let p = parent[v];
            flip[v] ^= 1 << pos(v, p);
            flip[p] ^= 1 << pos(p, v);
            need[v] = false;
            need[p] = !need[p];
        }
    }
    let index: std::collections::HashMap<(usize, u64), usize> = b.rho.iter().zip(&b.gadget).enumerate().map(|(x, (&v, &t))| ((v, t), x)).collect();
    let map: Option<Vec<usize>> = a.rho.iter().zip(&a.gadget).map(|(&v, &t)| index.get(&(v, t ^ flip[v])).copied()).collect();
    map.filter(|m| super::is_isomorphism(&a.graph, &b.graph, m))
}

/// G × K_2 with X = V × {0} (vertices 0..n) and Y = V × {1}.
pub fn bipartite_double_cover(g: &SimpleGraph) -> Result<SimpleGraph> {
    let n = g.vertex_count();
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for (u, v) in g.edges() {
        for (x, y) in [(u, v), (v, u)] {
            if g.is_directed() && (x, y) != (u, v) {
                continue;
            }
            edges.push((x, n + y));
            weights.push(((x, n + y), g.weight(x, y)));
        }
    }
    let side = (0..2 * n).map(|v| if v < n { Side::Left } else { Side::Right }).collect();
    SimpleGraph::new(2 * n, &edges)?.with_sides(side)?.with_weights(weights)
}
