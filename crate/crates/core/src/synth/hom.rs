use std::collections::HashMap;

use crate::circuit::{CircuitBuilder, GateId, GateKey, Group, Point};
use crate::error::{Error, Result};
use crate::graph::{BipartitePattern, Side};
use crate::treedec::{exact_treewidth, nice_decomposition, TreeDecomposition};

use super::{hom_size_bound, SynthReport};

/// Homomorphism-polynomial circuit from a decomposition (the exact-treewidth
/// witness when none is given).
pub fn synth_hom(f: &BipartitePattern, td: Option<&TreeDecomposition>, n: usize, m: usize) -> Result<SynthReport> {
    synth_hom_with(f, td, n, m, "hom.")
}

pub fn synth_hom_with(f: &BipartitePattern, td: Option<&TreeDecomposition>, n: usize, m: usize, prefix: &str) -> Result<SynthReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("host sides must be positive".into()));
    }
    let owned;
    let td = match td {
        Some(t) => t,
        None => {
            owned = exact_treewidth(f)?.1;
            &owned
        }
    };
    let nice = nice_decomposition(f, td)?;
    let mut b = CircuitBuilder::new(n, m, Group::SymNM);
    let out = build_hom(&mut b, f, &nice.td, prefix);
    b.key(out, GateKey::new(format!("{prefix}out"), vec![]));
    let c = b.finish(out);
    let norm = f.norm();
    let mut rep = SynthReport::new("hom", c).with_bound(
        hom_size_bound(5, nice.k, n, m, norm),
        Some(hom_size_bound(4, nice.k, n, m, norm)),
    );
    rep.k = Some(nice.k);
    rep.conforming = Some(nice.conforming);
    rep.stats.insert("tree_nodes".into(), nice.td.node_count() as u64);
    rep.stats.insert("pattern_norm".into(), norm as u64);
    Ok(rep)
}

/// Emits Σ_h ∏ x_{h(a)h(b)} into `b` following the rooted decomposition.
/// Each edge is charged to the topmost bag containing both endpoints; a
/// node's gate F^s(u) multiplies its charged edges with the child sums
/// K^t(u|shared), and K^t sums F^t over the vertices t introduces.
pub fn build_hom(b: &mut CircuitBuilder, f: &BipartitePattern, td: &TreeDecomposition, prefix: &str) -> GateId {
    let (n, m) = (b.rows(), b.cols());
    let (children, order) = td.rooted();
    let nodes = td.bags.len();
    let mut depth = vec![0usize; nodes];
    let mut parent = vec![usize::MAX; nodes];
    for &s in &order {
        for &c in &children[s] {
            depth[c] = depth[s] + 1;
            parent[c] = s;
        }
    }
    let dim = |v: usize| if f.side(v) == Side::Left { n } else { m };
    let point = |v: usize, val: usize| if f.side(v) == Side::Left { Point::L(val as u32) } else { Point::R(val as u32) };

    let mut charged: Vec<Vec<(usize, usize, u32)>> = vec![Vec::new(); nodes];
    for (a, bv, mult) in f.global_edges() {
        let s = (0..nodes)
            .filter(|&s| td.bags[s].contains(&a) && td.bags[s].contains(&bv))
            .min_by_key(|&s| depth[s])
            .expect("validated decomposition covers every edge");
        charged[s].push((a, bv, mult));
    }

    // per node: K^t table indexed by the values on the shared vertices
    let mut ktab: Vec<HashMap<Vec<usize>, GateId>> = vec![HashMap::new(); nodes];
    let mut root_gates = Vec::new();
    for &s in order.iter().rev() {
        let bag = &td.bags[s];
        let dims: Vec<usize> = bag.iter().map(|&v| dim(v)).collect();
        let pos: HashMap<usize, usize> = bag.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let child_shared: Vec<Vec<usize>> = children[s]
            .iter()
            .map(|&c| (0..bag.len()).filter(|&i| td.bags[c].contains(&bag[i])).collect())
            .collect();
        let shared_here: Vec<usize> = if s == td.root {
            Vec::new()
        } else {
            let pb = &td.bags[parent[s]];
            (0..bag.len()).filter(|&i| pb.contains(&bag[i])).collect()
        };
        let mut groups: HashMap<Vec<usize>, Vec<GateId>> = HashMap::new();
        let mut u = vec![0usize; bag.len()];
        let total: usize = dims.iter().product();
        for _ in 0..total {
            let mut wires = Vec::new();
            for &(a, bv, mult) in &charged[s] {
                let x = b.input(u[pos[&a]], u[pos[&bv]]);
                wires.push((x, mult));
            }
            for (ci, &c) in children[s].iter().enumerate() {
                let key: Vec<usize> = child_shared[ci].iter().map(|&i| u[i]).collect();
                wires.push((ktab[c][&key], 1));
            }
            let g = b.mul(wires);
            let support: Vec<Point> = bag.iter().zip(&u).map(|(&v, &val)| point(v, val)).collect();
            b.key(g, GateKey::new(format!("{prefix}F{s}"), support));
            if s == td.root {
                root_gates.push(g);
            } else {
                groups.entry(shared_here.iter().map(|&i| u[i]).collect()).or_default().push(g);
            }
            // next tuple
            for i in (0..u.len()).rev() {
                u[i] += 1;
                if u[i] < dims[i] {
                    break;
                }
                u[i] = 0;
            }
        }
        if s != td.root {
            let mut tab = HashMap::with_capacity(groups.len());
            let mut keys: Vec<_> = groups.into_iter().collect();
            keys.sort();
            for (key, gs) in keys {
                let k = b.sum(gs);
                let support: Vec<Point> = shared_here.iter().zip(&key).map(|(&i, &val)| point(bag[i], val)).collect();
                b.key(k, GateKey::new(format!("{prefix}K{s}"), support));
                // the parent looks entries up by its own bag order
                let pb = &td.bags[parent[s]];
                let mut reordered: Vec<(usize, usize)> = shared_here.iter().zip(&key).map(|(&i, &val)| (pb.iter().position(|&v| v == bag[i]).unwrap(), val)).collect();
                reordered.sort();
                tab.insert(reordered.into_iter().map(|(_, v)| v).collect(), k);
            }
            ktab[s] = tab;
        }
    }
    b.sum(root_gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::verify_symmetry;
    use crate::graph::WeightedHost;
    use crate::oracle::brute_hom;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k2_on_all_ones() {
        let r = synth_hom(&BipartitePattern::complete(1, 1), None, 2, 2).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::constant(2, 2, q(1))).unwrap(), q(4));
        verify_symmetry(&r.circuit).unwrap();
        assert_eq!(r.within_bound, Some(true));
    }

    #[test]
    fn p3_on_identity() {
        let r = synth_hom(&BipartitePattern::complete(1, 2), None, 2, 2).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::identity(2)).unwrap(), q(2));
    }

    #[test]
    fn matches_oracle_on_random_patterns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..60 {
            let l = 1 + trial % 3;
            let r = 1 + (trial / 3) % 3;
            let f = BipartitePattern::random(&mut rng, l, r, 1 + trial % 6);
            let rep = synth_hom(&f, None, 3, 2).unwrap();
            rep.circuit.validate().unwrap();
            verify_symmetry(&rep.circuit).unwrap();
            assert!(rep.max_support <= rep.k.unwrap());
            for _ in 0..3 {
                let g = WeightedHost::random(&mut rng, 3, 2, 5, 4);
                assert_eq!(rep.circuit.evaluate(&g).unwrap(), brute_hom(&f, &g).unwrap(), "{f:?}");
            }
        }
    }

    #[test]
    fn c4_random_host() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = BipartitePattern::cycle(2);
        let rep = synth_hom(&f, None, 3, 3).unwrap();
        let g = WeightedHost::random(&mut rng, 3, 3, 9, 7);
        assert_eq!(rep.circuit.evaluate(&g).unwrap(), brute_hom(&f, &g).unwrap());
    }
}
