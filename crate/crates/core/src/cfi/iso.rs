use super::wl::{colour_counts, initial_colours, stable_pair_colours};
use super::SimpleGraph;
use crate::error::{Error, Result};

pub const ISO_NODE_CAP: usize = 200_000;

/// Whether `map` (vertex of g ↦ vertex of h) is an isomorphism preserving
/// edges, directions, weights, sides and colours.
pub fn is_isomorphism(g: &SimpleGraph, h: &SimpleGraph, map: &[usize]) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || map.len() != n || g.edge_count() != h.edge_count() || g.is_directed() != h.is_directed() {
        return false;
    }
    let mut seen = vec![false; n];
    if !map.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true)) {
        return false;
    }
    if let (Some(a), Some(b)) = (g.sides(), h.sides()) {
        if (0..n).any(|v| a[v] != b[map[v]]) {
            return false;
        }
    } else if g.sides().is_some() != h.sides().is_some() {
        return false;
    }
    if let (Some(a), Some(b)) = (g.colors(), h.colors()) {
        if (0..n).any(|v| a[v] != b[map[v]]) {
            return false;
        }
    } else if g.colors().is_some() != h.colors().is_some() {
        return false;
    }
    g.edges().all(|(u, v)| h.has_edge(map[u], map[v]) && g.weight(u, v) == h.weight(map[u], map[v]))
}

/// Individualisation–refinement search; errors when more than
/// [`ISO_NODE_CAP`] search nodes are needed.
pub fn find_isomorphism(g: &SimpleGraph, h: &SimpleGraph) -> Result<Option<Vec<usize>>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(None);
    }
    let mut nodes = 0;
    search(g, h, initial_colours(g, h), &mut nodes)
}

fn search(g: &SimpleGraph, h: &SimpleGraph, init: [Vec<u32>; 2], nodes: &mut usize) -> Result<Option<Vec<usize>>> {
    *nodes += 1;
    if *nodes > ISO_NODE_CAP {
        return Err(Error::cap("isomorphism search nodes", *nodes, ISO_NODE_CAP));
    }
    let [cg, ch] = stable_pair_colours(g, h, init);
    let (hg, hh) = (colour_counts(&cg), colour_counts(&ch));
    if hg != hh {
        return Ok(None);
    }
    let n = g.vertex_count();
    let Some(target) = hg.iter().filter(|(_, &c)| c > 1).map(|(&col, _)| col).min() else {
        let mut where_h = std::collections::HashMap::new();
        for (v, &c) in ch.iter().enumerate() {
            where_h.insert(c, v);
        }
        let map: Vec<usize> = cg.iter().map(|c| where_h[c]).collect();
        return Ok(if is_isomorphism(g, h, &map) { Some(map) } else { None });
    };
    let v = (0..n).find(|&x| cg[x] == target).expect("class is non-empty");
    let fresh = cg.iter().chain(ch.iter()).max().copied().unwrap_or(0) + 1;
    for w in (0..n).filter(|&x| ch[x] == target) {
        let mut a = cg.clone();
        let mut b = ch.clone();
        a[v] = fresh;
        b[w] = fresh;
        if let Some(m) = search(g, h, [a, b], nodes)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
