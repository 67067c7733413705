//! Structural parameters of bipartite patterns: vertex cover, matching
//! number, hom-treewidth over quotients and the logical vertex cover number.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BipartitePattern;
use crate::partition::enumerate_partitions;
use crate::treedec::exact_treewidth;

pub const PARAMS_VERTEX_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphParams {
    pub vc: usize,
    pub mn: usize,
    pub hdtw: usize,
    pub cc: Option<usize>,
}

/// A minimum vertex cover (global vertex ids), found by exhaustive search
/// in order of increasing size.
pub fn min_vertex_cover(f: &BipartitePattern) -> Result<Vec<usize>> {
    let v = f.vertex_count();
    if v > PARAMS_VERTEX_CAP {
        return Err(Error::cap("vertex count for cover search", v, PARAMS_VERTEX_CAP));
    }
    let edges: Vec<(usize, usize)> = f.global_edges().into_iter().map(|(a, b, _)| (a, b)).collect();
    for size in 0..=v {
        let mut chosen = Vec::with_capacity(size);
        if let Some(c) = cover_search(&edges, v, size, 0, &mut chosen) {
            return Ok(c);
        }
    }
    unreachable!("the full vertex set is a cover")
}

fn cover_search(edges: &[(usize, usize)], v: usize, size: usize, start: usize, chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
    if chosen.len() == size {
        let covered = edges.iter().all(|(a, b)| chosen.contains(a) || chosen.contains(b));
        return covered.then(|| chosen.clone());
    }
    for x in start..v {
        if v - x < size - chosen.len() {
            break;
        }
        chosen.push(x);
        if let Some(c) = cover_search(edges, v, size, x + 1, chosen) {
            return Some(c);
        }
        chosen.pop();
    }
    None
}

pub fn vertex_cover_number(f: &BipartitePattern) -> Result<usize> {
    Ok(min_vertex_cover(f)?.len())
}

/// Maximum matching size, by exhaustive search over edge subsets.
pub fn matching_number(f: &BipartitePattern) -> usize {
    fn go(edges: &[(usize, usize)], i: usize, used_l: u64, used_r: u64) -> usize {
        if i == edges.len() {
            return 0;
        }
        let skip = go(edges, i + 1, used_l, used_r);
        let (a, b) = edges[i];
        if used_l >> a & 1 == 0 && used_r >> b & 1 == 0 {
            skip.max(1 + go(edges, i + 1, used_l | 1 << a, used_r | 1 << b))
        } else {
            skip
        }
    }
    let edges: Vec<(usize, usize)> = f.edges().keys().copied().collect();
    go(&edges, 0, 0, 0)
}

/// Maximum treewidth of the underlying simple graph over all quotients
/// F/(π, σ) with π a partition of A and σ a partition of B.
pub fn hom_treewidth(f: &BipartitePattern) -> Result<usize> {
    let mut best = 0;
    for pi in enumerate_partitions(f.left_size())? {
        for sigma in enumerate_partitions(f.right_size())? {
            let qf = f.quotient(&pi.block_of(), pi.block_count(), &sigma.block_of(), sigma.block_count());
            best = best.max(exact_treewidth(&qf.underlying_simple())?.0);
        }
    }
    Ok(best)
}

/// The cover chosen for cc_{n,m}: vertex ids refer to F padded to (n, m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalCover {
    pub padded: BipartitePattern,
    pub complement: bool,
    pub cover: Vec<usize>,
}

impl LogicalCover {
    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

/// None when F does not fit into (n, m), where cc_{n,m}(F) is 0 by definition.
/// Multigraphs have no complement, so only the direct cover is considered.
pub fn logical_cover(f: &BipartitePattern, n: usize, m: usize) -> Result<Option<LogicalCover>> {
    if f.left_size() > n || f.right_size() > m {
        return Ok(None);
    }
    let padded = f.padded(n, m)?;
    let direct = min_vertex_cover(&padded)?;
    if padded.is_simple() {
        let comp = min_vertex_cover(&padded.complement()?)?;
        if comp.len() < direct.len() {
            return Ok(Some(LogicalCover { padded, complement: true, cover: comp }));
        }
    }
    Ok(Some(LogicalCover { padded, complement: false, cover: direct }))
}

pub fn logical_cover_number(f: &BipartitePattern, n: usize, m: usize) -> Result<usize> {
    Ok(logical_cover(f, n, m)?.map_or(0, |c| c.size()))
}

pub fn graph_params(f: &BipartitePattern, nm: Option<(usize, usize)>) -> Result<GraphParams> {
    Ok(GraphParams {
        vc: vertex_cover_number(f)?,
        mn: matching_number(f),
        hdtw: hom_treewidth(f)?,
        cc: nm.map(|(n, m)| logical_cover_number(f, n, m)).transpose()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k22_parameters() {
        let p = graph_params(&BipartitePattern::complete(2, 2), Some((2, 2))).unwrap();
        assert_eq!((p.vc, p.mn, p.cc), (2, 2, Some(0)));
    }

    #[test]
    fn complete_pattern_has_zero_cc() {
        for (n, m) in [(1, 1), (2, 3), (3, 3)] {
            assert_eq!(logical_cover_number(&BipartitePattern::complete(n, m), n, m).unwrap(), 0);
        }
    }

    #[test]
    fn oversized_pattern_has_zero_cc() {
        assert_eq!(logical_cover_number(&BipartitePattern::complete(3, 1), 2, 2).unwrap(), 0);
    }

    #[test]
    fn star_prefers_direct_cover() {
        let star = BipartitePattern::complete(1, 3);
        let c = logical_cover(&star, 4, 4).unwrap().unwrap();
        assert!(!c.complement);
        assert_eq!(c.cover, vec![0]);
    }

    #[test]
    fn hdtw_of_c4_quotients() {
        assert_eq!(hom_treewidth(&BipartitePattern::cycle(2)).unwrap(), 2);
        assert_eq!(hom_treewidth(&BipartitePattern::path(3)).unwrap(), 1);
    }
}
