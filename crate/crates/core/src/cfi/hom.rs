use std::collections::HashMap;

use num::bigint::BigInt;
use num::{One, Zero};

use super::{CfiInstance, SimpleGraph};
use crate::error::{Error, Result};
use crate::graph::Side;
use crate::rational::Q;
use crate::treedec::{exact_treewidth_graph, TREEWIDTH_CAP};

pub const BRUTE_HOM_CAP: usize = 8;

fn check_kinds(f: &SimpleGraph, g: &SimpleGraph) -> Result<()> {
    if f.is_directed() != g.is_directed() {
        return Err(Error::InvalidArgument("pattern and target must both be directed or both undirected".into()));
    }
    Ok(())
}

/// Allowed images per pattern vertex: sides must agree when both graphs
/// carry a bipartition.
fn domains(f: &SimpleGraph, g: &SimpleGraph) -> Vec<Vec<usize>> {
    (0..f.vertex_count())
        .map(|a| match (f.sides(), g.sides()) {
            (Some(sf), Some(sg)) => (0..g.vertex_count()).filter(|&v| sg[v] == sf[a]).collect(),
            _ => (0..g.vertex_count()).collect(),
        })
        .collect()
}

/// Σ_h ∏_{ab ∈ E(F)} w_G(h(a), h(b)) by enumeration.
pub fn weighted_hom_count(f: &SimpleGraph, g: &SimpleGraph) -> Result<Q> {
    check_kinds(f, g)?;
    if f.vertex_count() > BRUTE_HOM_CAP {
        return Err(Error::cap("pattern vertices for brute-force hom counting", f.vertex_count(), BRUTE_HOM_CAP));
    }
    let dom = domains(f, g);
    let edges: Vec<(usize, usize)> = f.edges().collect();
    // edges checked once both endpoints are placed
    let mut at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f.vertex_count()];
    for &(a, b) in &edges {
        at[a.max(b)].push((a, b));
    }
    fn go(i: usize, h: &mut Vec<usize>, dom: &[Vec<usize>], at: &[Vec<(usize, usize)>], g: &SimpleGraph, acc: Q, total: &mut Q) {
        if i == dom.len() {
            *total += acc;
            return;
        }
        for &v in &dom[i] {
            h.push(v);
            let mut w = acc.clone();
            for &(a, b) in &at[i] {
                w *= g.weight(h[a], h[b]);
                if w.is_zero() {
                    break;
                }
            }
            if !w.is_zero() {
                go(i + 1, h, dom, at, g, w, total);
            }
            h.pop();
        }
    }
    let mut total = Q::zero();
    go(0, &mut Vec::new(), &dom, &at, g, Q::one(), &mut total);
    Ok(total)
}

/// Number of homomorphisms by enumeration (|V(F)| ≤ 8); weights ignored.
pub fn brute_hom_count(f: &SimpleGraph, g: &SimpleGraph) -> Result<BigInt> {
    let plain = strip_weights(g);
    Ok(weighted_hom_count(f, &plain)?.to_integer())
}

fn strip_weights(g: &SimpleGraph) -> SimpleGraph {
    let mut h = g.clone();
    h.weights.clear();
    h
}

/// Weighted homomorphism sum by dynamic programming over an exact tree
/// decomposition of F.
pub fn dp_hom_count(f: &SimpleGraph, g: &SimpleGraph) -> Result<Q> {
    check_kinds(f, g)?;
    let n = f.vertex_count();
    if n == 0 {
        return Ok(Q::one());
    }
    let (_, td) = exact_treewidth_graph(n, &f.undirected_edges(), TREEWIDTH_CAP)?;
    let dom = domains(f, g);
    let (children, order) = td.rooted();
    let mut depth = vec![usize::MAX; td.bags.len()];
    for &s in &order {
        if s == td.root {
            depth[s] = 0;
        }
        for &c in &children[s] {
            depth[c] = depth[s] + 1;
        }
    }
    // charge each edge to the shallowest bag holding both endpoints
    let mut charged: Vec<Vec<(usize, usize)>> = vec![Vec::new(); td.bags.len()];
    for (a, b) in f.edges() {
        let s = (0..td.bags.len())
            .filter(|&s| td.bags[s].contains(&a) && td.bags[s].contains(&b))
            .min_by_key(|&s| depth[s])
            .ok_or_else(|| Error::InvalidArgument("decomposition misses an edge".into()))?;
        charged[s].push((a, b));
    }
    let mut proj: Vec<Option<(Vec<usize>, HashMap<Vec<usize>, Q>)>> = vec![None; td.bags.len()];
    let mut result = Q::zero();
    for &s in order.iter().rev() {
        let bag = &td.bags[s];
        let shared: Vec<usize> = match (0..td.bags.len()).find(|&p| children[p].contains(&s)) {
            Some(p) => bag.iter().copied().filter(|v| td.bags[p].contains(v)).collect(),
            None => Vec::new(),
        };
        let child_tabs: Vec<(Vec<usize>, HashMap<Vec<usize>, Q>)> = children[s].iter().map(|&c| proj[c].take().expect("child done")).collect();
        let mut out: HashMap<Vec<usize>, Q> = HashMap::new();
        let mut assign: HashMap<usize, usize> = HashMap::new();
        #[allow(clippy::too_many_arguments)]
        fn go(
            i: usize,
            bag: &[usize],
            dom: &[Vec<usize>],
            charged: &[(usize, usize)],
            g: &SimpleGraph,
            assign: &mut HashMap<usize, usize>,
            acc: Q,
            kids: &[(Vec<usize>, HashMap<Vec<usize>, Q>)],
            shared: &[usize],
            out: &mut HashMap<Vec<usize>, Q>,
        ) {
            if i == bag.len() {
                let mut w = acc;
                for (vars, tab) in kids {
                    let key: Vec<usize> = vars.iter().map(|v| assign[v]).collect();
                    match tab.get(&key) {
                        Some(x) => w *= x,
                        None => return,
                    }
                }
                let key: Vec<usize> = shared.iter().map(|v| assign[v]).collect();
                *out.entry(key).or_insert_with(Q::zero) += w;
                return;
            }
            let a = bag[i];
            for &v in &dom[a] {
                assign.insert(a, v);
                let mut w = acc.clone();
                for &(x, y) in charged {
                    if (x == a || y == a) && assign.contains_key(&x) && assign.contains_key(&y) {
                        w *= g.weight(assign[&x], assign[&y]);
                        if w.is_zero() {
                            break;
                        }
                    }
                }
                if !w.is_zero() {
                    go(i + 1, bag, dom, charged, g, assign, w, kids, shared, out);
                }
                assign.remove(&a);
            }
        }
        go(0, bag, &dom, &charged[s], g, &mut assign, Q::one(), &child_tabs, &shared, &mut out);
        out.retain(|_, v| !v.is_zero());
        if s == td.root {
            result = out.values().fold(Q::zero(), |a, b| a + b);
        } else {
            proj[s] = Some((shared, out));
        }
    }
    Ok(result)
}

/// Unweighted homomorphism count: brute force for small patterns, tree
/// decomposition DP otherwise.
pub fn hom_count(f: &SimpleGraph, g: &SimpleGraph) -> Result<BigInt> {
    let plain = strip_weights(g);
    if f.vertex_count() <= 4 {
        return brute_hom_count(f, &plain);
    }
    Ok(dp_hom_count(f, &plain)?.to_integer())
}

/// hom(F, G_U) = Σ_{ψ: F → base} #lifts of ψ, each lift count being the
/// number of solutions of a linear system over GF(2).
pub fn cfi_hom_count(f: &SimpleGraph, inst: &CfiInstance) -> Result<BigInt> {
    if f.is_directed() {
        return Err(Error::InvalidArgument("CFI graphs are undirected".into()));
    }
    let base = &inst.base;
    let n = f.vertex_count();
    let sides = match (f.sides(), base.sides()) {
        (Some(a), Some(b)) => Some((a.to_vec(), b.to_vec())),
        _ => None,
    };
    let f_edges: Vec<(usize, usize)> = f.edges().collect();
    let mut total = BigInt::zero();
    let mut psi = Vec::with_capacity(n);
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        n: usize,
        psi: &mut Vec<usize>,
        f: &SimpleGraph,
        base: &SimpleGraph,
        sides: &Option<(Vec<Side>, Vec<Side>)>,
        inst: &CfiInstance,
        f_edges: &[(usize, usize)],
        total: &mut BigInt,
    ) {
        if i == n {
            *total += lift_count(psi, inst, f_edges);
            return;
        }
        for v in 0..base.vertex_count() {
            if let Some((sf, sb)) = sides {
                if sf[i] != sb[v] {
                    continue;
                }
            }
            if f.neighbours(i).iter().any(|&a| a < i && !base.has_edge(psi[a], v)) {
                continue;
            }
            psi.push(v);
            go(i + 1, n, psi, f, base, sides, inst, f_edges, total);
            psi.pop();
        }
    }
    go(0, n, &mut psi, f, base, &sides, inst, &f_edges, &mut total);
    Ok(total)
}

fn lift_count(psi: &[usize], inst: &CfiInstance, f_edges: &[(usize, usize)]) -> BigInt {
    let base = &inst.base;
    let mut offset = Vec::with_capacity(psi.len());
    let mut vars = 0;
    for &v in psi {
        offset.push(vars);
        vars += base.degree(v);
    }
    let words = vars / 64 + 1;
    let mut rows: Vec<(Vec<u64>, bool)> = Vec::new();
    let set = |row: &mut Vec<u64>, x: usize| row[x / 64] ^= 1 << (x % 64);
    for (a, &v) in psi.iter().enumerate() {
        let mut row = vec![0u64; words];
        for i in 0..base.degree(v) {
            set(&mut row, offset[a] + i);
        }
        rows.push((row, inst.twist[v]));
    }
    let pos = |v: usize, u: usize| base.neighbours(v).binary_search(&u).expect("ψ is a homomorphism");
    for &(a, b) in f_edges {
        let (va, vb) = (psi[a], psi[b]);
        let mut row = vec![0u64; words];
        set(&mut row, offset[a] + pos(va, vb));
        set(&mut row, offset[b] + pos(vb, va));
        rows.push((row, false));
    }
    let mut rank = 0;
    for col in 0..vars {
        let bit = |r: &(Vec<u64>, bool)| r.0[col / 64] >> (col % 64) & 1 == 1;
        let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r])) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row) {
                for w in 0..words {
                    row.0[w] ^= pivot.0[w];
                }
                row.1 ^= pivot.1;
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r.1) {
        return BigInt::zero();
    }
    BigInt::one() << (vars - rank)
}
