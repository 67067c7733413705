use std::collections::HashMap;

use num::bigint::BigInt;
use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{cfi, ck_equivalent, SimpleGraph};
use crate::error::{Error, Result};
use crate::graph::WeightedHost;
use crate::rational::{fmt_q, Q};

/// Number of matchings with exactly h edges (|V| ≤ 64).
pub fn matching_counts(g: &SimpleGraph, h: usize) -> Result<BigInt> {
    Ok(matching_polynomial(g)?.get(h).cloned().unwrap_or_else(BigInt::zero))
}

pub fn perfect_matching_count(g: &SimpleGraph) -> Result<BigInt> {
    if g.vertex_count() % 2 == 1 {
        return Ok(BigInt::zero());
    }
    matching_counts(g, g.vertex_count() / 2)
}

/// Counts of matchings by size.
fn matching_polynomial(g: &SimpleGraph) -> Result<Vec<BigInt>> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::cap("vertex count for matching enumeration", n, 64));
    }
    fn go(i: usize, used: u64, g: &SimpleGraph, memo: &mut HashMap<(usize, u64), Vec<BigInt>>) -> Vec<BigInt> {
        let n = g.vertex_count();
        let mut i = i;
        while i < n && used >> i & 1 == 1 {
            i += 1;
        }
        if i >= n {
            return vec![BigInt::from(1)];
        }
        if let Some(v) = memo.get(&(i, used)) {
            return v.clone();
        }
        let mut out = go(i + 1, used | 1 << i, g, memo);
        for &j in g.neighbours(i) {
            if j > i && used >> j & 1 == 0 {
                let sub = go(i + 1, used | 1 << i | 1 << j, g, memo);
                if out.len() < sub.len() + 1 {
                    out.resize(sub.len() + 1, BigInt::zero());
                }
                for (e, c) in sub.into_iter().enumerate() {
                    out[e + 1] += c;
                }
            }
        }
        memo.insert((i, used), out.clone());
        out
    }
    Ok(go(0, 0, g, &mut HashMap::new()))
}

/// A pair of bi-adjacency matrices of CFI graphs over one base, each under
/// a random row and column relabelling.
#[derive(Debug, Clone, Serialize)]
pub struct WidthPair {
    pub id: String,
    pub base: String,
    pub k: usize,
    pub parities: (bool, bool),
    #[serde(skip)]
    pub g: WeightedHost,
    #[serde(skip)]
    pub h: WeightedHost,
    pub rows: usize,
    pub cols: usize,
}

/// Bipartite bases of treewidth at least k.
fn bases(k: usize) -> Result<Vec<(String, SimpleGraph)>> {
    let c = |n: usize| -> Result<SimpleGraph> {
        let g = SimpleGraph::cycle(n)?;
        let s = g.two_colouring().expect("even cycle");
        g.with_sides(s)
    };
    Ok(match k {
        0..=2 => vec![
            ("C4".into(), c(4)?),
            ("C6".into(), c(6)?),
            ("K2,3".into(), SimpleGraph::complete_bipartite(2, 3)),
            ("grid2x3".into(), SimpleGraph::grid(2, 3)),
        ],
        3 => vec![
            ("K3,3".into(), SimpleGraph::complete_bipartite(3, 3)),
            ("K3,4".into(), SimpleGraph::complete_bipartite(3, 4)),
            ("grid3x3".into(), SimpleGraph::grid(3, 3)),
        ],
        _ => return Err(Error::InvalidArgument(format!("no base family prepared for k = {k}"))),
    })
}

fn shuffled_host(rng: &mut ChaCha8Rng, g: &SimpleGraph) -> Result<WeightedHost> {
    let (host, _, _) = g.biadjacency()?;
    let mut pr: Vec<usize> = (0..host.rows()).collect();
    let mut pc: Vec<usize> = (0..host.cols()).collect();
    pr.shuffle(rng);
    pc.shuffle(rng);
    Ok(host.permuted(&pr, &pc))
}

/// `count` pairs of C^k-equivalent hosts from CFI graphs with random twists,
/// each pair confirmed by (k−1)-WL on the bipartite structures.
pub fn generate_ck_pairs(k: usize, count: usize, seed: u64) -> Result<Vec<WidthPair>> {
    let bases = bases(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 4 * count + 10 {
            return Err(Error::InvalidArgument(format!("only {} of {count} generated pairs passed the C^{k} check", out.len())));
        }
        let (name, base) = &bases[out.len() % bases.len()];
        let nv = base.vertex_count();
        let tu: Vec<bool> = (0..nv).map(|_| rng.gen_bool(0.5)).collect();
        let tv: Vec<bool> = (0..nv).map(|_| rng.gen_bool(0.5)).collect();
        let (a, b) = (cfi(base, &tu)?, cfi(base, &tv)?);
        let g = shuffled_host(&mut rng, &a.graph)?;
        let h = shuffled_host(&mut rng, &b.graph)?;
        if g.rows() != h.rows() || g.cols() != h.cols() {
            continue;
        }
        if !ck_equivalent(&SimpleGraph::from_biadjacency(&g), &SimpleGraph::from_biadjacency(&h), k).equivalent {
            continue;
        }
        out.push(WidthPair {
            id: format!("k{k}-{}-{name}", out.len()),
            base: name.clone(),
            k,
            parities: (a.parity(), b.parity()),
            rows: g.rows(),
            cols: g.cols(),
            g,
            h,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthGap {
    pub id: String,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WidthReport {
    pub k: usize,
    pub pairs: usize,
    pub agreements: usize,
    pub gaps: Vec<WidthGap>,
}

/// Evaluates `eval` on both sides of every pair; a gap witnesses counting
/// width at least k for the evaluated polynomial.
pub fn counting_width_experiment(eval: &dyn Fn(&WeightedHost) -> Result<Q>, pairs: &[WidthPair], k: usize) -> Result<WidthReport> {
    let mut agreements = 0;
    let mut gaps = Vec::new();
    for p in pairs {
        let (x, y) = (eval(&p.g)?, eval(&p.h)?);
        if x == y {
            agreements += 1;
        } else {
            gaps.push(WidthGap { id: p.id.clone(), left: fmt_q(&x), right: fmt_q(&y) });
        }
    }
    Ok(WidthReport { k, pairs: pairs.len(), agreements, gaps })
}
