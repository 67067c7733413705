use serde::Serialize;

use super::SimpleGraph;
use crate::error::{Error, Result};

pub const ODDO_CAP: usize = 7;

/// φ: V(F) → V(G) together with the edge set of the subgraph F′ on which
/// it is an oddomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OddomorphismWitness {
    pub phi: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// Checks the oddomorphism conditions for φ on (V(F), `edges`).
fn is_oddomorphism(f_n: usize, edges: &[(usize, usize)], g: &SimpleGraph, phi: &[usize]) -> bool {
    let gn = g.vertex_count();
    // counts[a][v] = |N_{F'}(a) ∩ φ⁻¹(v)| mod 2
    let mut counts = vec![vec![false; gn]; f_n];
    for &(a, b) in edges {
        counts[a][phi[b]] ^= true;
        counts[b][phi[a]] ^= true;
    }
    let mut odd_in_fibre = vec![0usize; gn];
    let mut fibre_size = vec![0usize; gn];
    for a in 0..f_n {
        let v = phi[a];
        fibre_size[v] += 1;
        let nb = g.neighbours(v);
        if nb.is_empty() {
            continue;
        }
        let first = counts[a][nb[0]];
        if nb.iter().any(|&u| counts[a][u] != first) {
            return false;
        }
        if first {
            odd_in_fibre[v] += 1;
        }
    }
    (0..gn).all(|v| if g.degree(v) == 0 { fibre_size[v] > 0 } else { odd_in_fibre[v] % 2 == 1 })
}

/// Exhaustive search over homomorphisms φ: F → G and edge subsets of F for a
/// weak oddomorphism. Bipartitions are respected when both graphs carry one.
pub fn exists_weak_oddomorphism(f: &SimpleGraph, g: &SimpleGraph) -> Result<Option<OddomorphismWitness>> {
    if f.is_directed() || g.is_directed() {
        return Err(Error::InvalidArgument("oddomorphisms are defined for undirected graphs".into()));
    }
    if f.vertex_count() > ODDO_CAP || g.vertex_count() > ODDO_CAP {
        return Err(Error::cap("graph size for the oddomorphism search", f.vertex_count().max(g.vertex_count()), ODDO_CAP));
    }
    let n = f.vertex_count();
    let f_edges: Vec<(usize, usize)> = f.edges().collect();
    let sides = match (f.sides(), g.sides()) {
        (Some(a), Some(b)) => Some((a.to_vec(), b.to_vec())),
        _ => None,
    };
    let mut phi = Vec::with_capacity(n);
    let mut found = None;
    search(0, f, g, &sides, &f_edges, &mut phi, &mut found);
    Ok(found)
}

fn search(
    i: usize,
    f: &SimpleGraph,
    g: &SimpleGraph,
    sides: &Option<(Vec<crate::graph::Side>, Vec<crate::graph::Side>)>,
    f_edges: &[(usize, usize)],
    phi: &mut Vec<usize>,
    found: &mut Option<OddomorphismWitness>,
) {
    if found.is_some() {
        return;
    }
    let n = f.vertex_count();
    if i == n {
        let mut hit = vec![false; g.vertex_count()];
        for &v in phi.iter() {
            hit[v] = true;
        }
        if !hit.iter().all(|&x| x) {
            return;
        }
        for mask in 0u64..(1 << f_edges.len()) {
            let edges: Vec<(usize, usize)> = f_edges.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            if is_oddomorphism(n, &edges, g, phi) {
                *found = Some(OddomorphismWitness { phi: phi.clone(), edges });
                return;
            }
        }
        return;
    }
    for v in 0..g.vertex_count() {
        if let Some((sf, sg)) = sides {
            if sf[i] != sg[v] {
                continue;
            }
        }
        if f.neighbours(i).iter().any(|&a| a < i && !g.has_edge(phi[a], v)) {
            continue;
        }
        phi.push(v);
        search(i + 1, f, g, sides, f_edges, phi, found);
        phi.pop();
        if found.is_some() {
            return;
        }
    }
}
