use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::SimpleGraph;
use crate::graph::Side;
use crate::rational::Q;

/// Shared labelling of vertices and ordered pairs for two graphs, so that
/// colours are comparable across them.
pub(crate) struct Atoms {
    weights: BTreeMap<Q, u32>,
}

impl Atoms {
    pub(crate) fn new(graphs: &[&SimpleGraph]) -> Self {
        let mut weights = BTreeMap::new();
        for g in graphs {
            for (u, v) in g.edges() {
                let w = g.weight(u, v);
                let next = weights.len() as u32;
                weights.entry(w).or_insert(next);
            }
        }
        Atoms { weights }
    }

    pub(crate) fn vertex(&self, g: &SimpleGraph, v: usize) -> u32 {
        let side = match g.sides() {
            None => 0,
            Some(s) => 1 + (s[v] == Side::Right) as u32,
        };
        let colour = g.colors().map(|c| c[v] + 1).unwrap_or(0);
        side | colour << 2
    }

    /// 0 for no relation, otherwise direction bits and the weight id.
    pub(crate) fn pair(&self, g: &SimpleGraph, u: usize, v: usize) -> u32 {
        let fwd = g.has_edge(u, v);
        let bwd = g.has_edge(v, u);
        if !fwd && !bwd {
            return 0;
        }
        let w = if fwd { g.weight(u, v) } else { g.weight(v, u) };
        (fwd as u32) | (bwd as u32) << 1 | (self.weights[&w] + 1) << 2
    }
}

/// Assigns shared ids to signatures of both sides, in sorted order.
pub(crate) fn relabel<S: Ord + Clone>(sigs: [&[S]; 2]) -> [Vec<u32>; 2] {
    let mut all: Vec<&S> = sigs[0].iter().chain(sigs[1].iter()).collect();
    all.sort();
    all.dedup();
    let id = |s: &S| all.binary_search(&s).expect("present") as u32;
    [sigs[0].iter().map(id).collect(), sigs[1].iter().map(id).collect()]
}

fn class_count(c: &[Vec<u32>; 2]) -> usize {
    let mut all: Vec<u32> = c[0].iter().chain(c[1].iter()).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn histogram(c: &[u32]) -> Vec<(u32, usize)> {
    let mut h: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in c {
        *h.entry(x).or_insert(0) += 1;
    }
    h.into_iter().collect()
}

/// Joint colour refinement from the given vertex colours.
pub(crate) fn refine_vertices(g: [&SimpleGraph; 2], atoms: &Atoms, init: [Vec<u32>; 2]) -> ([Vec<u32>; 2], usize) {
    let mut c = init;
    let mut classes = class_count(&c);
    let mut rounds = 0;
    loop {
        let sigs: Vec<Vec<(u32, Vec<(u32, u32)>)>> = (0..2)
            .map(|s| {
                (0..g[s].vertex_count())
                    .map(|v| {
                        let mut nb: Vec<(u32, u32)> = g[s].neighbours(v).iter().map(|&u| (c[s][u], atoms.pair(g[s], v, u))).collect();
                        nb.sort_unstable();
                        (c[s][v], nb)
                    })
                    .collect()
            })
            .collect();
        let next = relabel([&sigs[0], &sigs[1]]);
        let nc = class_count(&next);
        c = next;
        rounds += 1;
        if nc == classes {
            return (c, rounds);
        }
        classes = nc;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WlVerdict {
    /// WL dimension actually run (0 compares vertex labels only).
    pub dimension: usize,
    pub equivalent: bool,
    pub rounds: usize,
    pub classes: usize,
    /// Stable colour histograms (colour id, count) of both graphs.
    pub fingerprint: [Vec<(u32, usize)>; 2],
}

fn verdict(dimension: usize, c: [Vec<u32>; 2], rounds: usize) -> WlVerdict {
    let fingerprint = [histogram(&c[0]), histogram(&c[1])];
    WlVerdict { dimension, equivalent: fingerprint[0] == fingerprint[1], rounds, classes: class_count(&c), fingerprint }
}

/// k-dimensional Weisfeiler–Leman: colour refinement for k = 1, the
/// folklore tuple refinement for k ≥ 2. Equivalence here is
/// C^{k+1}-equivalence.
pub fn k_wl_equivalent(g: &SimpleGraph, h: &SimpleGraph, k: usize) -> WlVerdict {
    let atoms = Atoms::new(&[g, h]);
    let pair = [g, h];
    let init: [Vec<u32>; 2] = {
        let v: Vec<Vec<u32>> = pair.iter().map(|x| (0..x.vertex_count()).map(|v| atoms.vertex(x, v)).collect()).collect();
        relabel([&v[0], &v[1]])
    };
    if g.vertex_count() != h.vertex_count() {
        return WlVerdict { dimension: k, equivalent: false, rounds: 0, classes: class_count(&init), fingerprint: [histogram(&init[0]), histogram(&init[1])] };
    }
    match k {
        0 => verdict(0, init, 0),
        1 => {
            let (c, r) = refine_vertices(pair, &atoms, init);
            verdict(1, c, r)
        }
        _ => folklore(pair, &atoms, k),
    }
}

/// C^k-equivalence, decided by (k−1)-dimensional WL.
pub fn ck_equivalent(g: &SimpleGraph, h: &SimpleGraph, k: usize) -> WlVerdict {
    k_wl_equivalent(g, h, k.saturating_sub(1))
}

fn decode(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for x in (0..k).rev() {
        t[x] = idx % n;
        idx /= n;
    }
    t
}

fn folklore(g: [&SimpleGraph; 2], atoms: &Atoms, k: usize) -> WlVerdict {
    let n = g[0].vertex_count();
    let total = n.pow(k as u32);
    let sigs: Vec<Vec<Vec<u32>>> = (0..2)
        .map(|s| {
            (0..total)
                .map(|idx| {
                    let t = decode(idx, n, k);
                    let mut sig = Vec::with_capacity(k * k);
                    for i in 0..k {
                        sig.push(atoms.vertex(g[s], t[i]));
                        for j in 0..k {
                            if i != j {
                                sig.push(if t[i] == t[j] { u32::MAX } else { atoms.pair(g[s], t[i], t[j]) });
                            }
                        }
                    }
                    sig
                })
                .collect()
        })
        .collect();
    let mut c = relabel([&sigs[0], &sigs[1]]);
    let mut classes = class_count(&c);
    let mut rounds = 0;
    let pows: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    loop {
        let sigs: Vec<Vec<Vec<u32>>> = (0..2)
            .map(|s| {
                (0..total)
                    .map(|idx| {
                        let t = decode(idx, n, k);
                        let mut ms: Vec<Vec<u32>> = (0..n)
                            .map(|w| (0..k).map(|i| c[s][idx - t[i] * pows[i] + w * pows[i]]).collect())
                            .collect();
                        ms.sort_unstable();
                        let mut sig = Vec::with_capacity(1 + n * k);
                        sig.push(c[s][idx]);
                        sig.extend(ms.into_iter().flatten());
                        sig
                    })
                    .collect()
            })
            .collect();
        let next = relabel([&sigs[0], &sigs[1]]);
        let nc = class_count(&next);
        c = next;
        rounds += 1;
        if nc == classes {
            break;
        }
        classes = nc;
    }
    verdict(k, c, rounds)
}

/// Stable 1-WL colours of a pair from given start colours.
pub(crate) fn stable_pair_colours(g: &SimpleGraph, h: &SimpleGraph, init: [Vec<u32>; 2]) -> [Vec<u32>; 2] {
    let atoms = Atoms::new(&[g, h]);
    refine_vertices([g, h], &atoms, init).0
}

pub(crate) fn initial_colours(g: &SimpleGraph, h: &SimpleGraph) -> [Vec<u32>; 2] {
    let atoms = Atoms::new(&[g, h]);
    let v: Vec<Vec<u32>> = [g, h].iter().map(|x| (0..x.vertex_count()).map(|v| atoms.vertex(x, v)).collect()).collect();
    relabel([&v[0], &v[1]])
}

pub(crate) fn colour_counts(c: &[u32]) -> HashMap<u32, usize> {
    let mut m = HashMap::new();
    for &x in c {
        *m.entry(x).or_insert(0) += 1;
    }
    m
}
