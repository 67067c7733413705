//! Canonical forms of labelled patterns by colour refinement with
//! individualization, capped by the number of search leaves.

use std::collections::BTreeMap;

use crate::graph::{BipartitePattern, LabelledPattern};

pub const LEAF_CAP: usize = 2000;

/// Canonical encoding together with the vertex relabelling that produces it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonKey {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize, u32)>,
    left_labels: Vec<usize>,
    right_labels: Vec<usize>,
}

struct Search<'a> {
    lp: &'a LabelledPattern,
    adj: Vec<Vec<(usize, u32)>>,
    leaves: usize,
    best: Option<(CanonKey, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn refine(&self, mut colour: Vec<usize>) -> Vec<usize> {
        let mut classes = count_classes(&colour);
        loop {
            let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..colour.len())
                .map(|v| {
                    let mut nb: Vec<(usize, u32)> = self.adj[v].iter().map(|&(u, m)| (colour[u], m)).collect();
                    nb.sort_unstable();
                    (colour[v], nb)
                })
                .collect();
            let mut distinct: Vec<&(usize, Vec<(usize, u32)>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let rank: BTreeMap<&(usize, Vec<(usize, u32)>), usize> = distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
            colour = sigs.iter().map(|s| rank[s]).collect();
            let c = count_classes(&colour);
            if c == classes {
                return colour;
            }
            classes = c;
        }
    }

    fn encode(&self, colour: &[usize]) -> (CanonKey, Vec<usize>) {
        let f = &self.lp.base;
        let a = f.left_size();
        // colours of left vertices precede right ones, so the ranks split by side
        let mut order: Vec<usize> = (0..colour.len()).collect();
        order.sort_by_key(|&v| colour[v]);
        let mut new_id = vec![0; colour.len()];
        let (mut nl, mut nr) = (0, 0);
        for &v in &order {
            if v < a {
                new_id[v] = nl;
                nl += 1;
            } else {
                new_id[v] = nr;
                nr += 1;
            }
        }
        let mut edges: Vec<(usize, usize, u32)> = f.edge_list().into_iter().map(|(x, y, m)| (new_id[x], new_id[f.rv(y)], m)).collect();
        edges.sort_unstable();
        let key = CanonKey {
            left: a,
            right: f.right_size(),
            edges,
            left_labels: self.lp.left_labels.iter().map(|&x| new_id[x]).collect(),
            right_labels: self.lp.right_labels.iter().map(|&y| new_id[f.rv(y)]).collect(),
        };
        (key, new_id)
    }

    fn search(&mut self, colour: Vec<usize>) -> bool {
        let colour = self.refine(colour);
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colour.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let Some((_, cell)) = cells.iter().find(|(_, vs)| vs.len() > 1) else {
            self.leaves += 1;
            if self.leaves > LEAF_CAP {
                return false;
            }
            let cand = self.encode(&colour);
            if self.best.as_ref().is_none_or(|b| cand.0 < b.0) {
                self.best = Some(cand);
            }
            return true;
        };
        for &v in cell.clone().iter() {
            // doubling keeps the order of other cells and puts v first in its cell
            let next: Vec<usize> = colour.iter().enumerate().map(|(u, &c)| 2 * c + usize::from(u != v)).collect();
            if !self.search(next) {
                return false;
            }
        }
        true
    }
}

fn count_classes(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Canonical representative of a labelled pattern under side-preserving
/// isomorphisms that respect the label tuples, plus the map old → new
/// global id. None when the search exceeds the leaf cap.
pub fn canonical_form(lp: &LabelledPattern) -> Option<(LabelledPattern, Vec<usize>)> {
    let f = &lp.base;
    let nv = f.vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for (a, b, m) in f.global_edges() {
        adj[a].push((b, m));
        adj[b].push((a, m));
    }
    let init: Vec<(bool, Vec<usize>, Vec<usize>)> = (0..nv)
        .map(|v| {
            let side = v >= f.left_size();
            let ll: Vec<usize> = lp.left_labels.iter().enumerate().filter(|(_, &x)| !side && x == v).map(|(i, _)| i).collect();
            let rl: Vec<usize> = lp.right_labels.iter().enumerate().filter(|(_, &y)| side && f.rv(y) == v).map(|(i, _)| i).collect();
            (side, ll, rl)
        })
        .collect();
    let mut distinct = init.clone();
    distinct.sort();
    distinct.dedup();
    let colour: Vec<usize> = init.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
    let mut s = Search { lp, adj, leaves: 0, best: None };
    if !s.search(colour) {
        return None;
    }
    let (key, map) = s.best?;
    let base = BipartitePattern::new(key.left, key.right, &key.edges).expect("relabelled pattern is valid");
    let global: Vec<usize> = (0..nv).map(|v| if v < f.left_size() { map[v] } else { key.left + map[v] }).collect();
    Some((LabelledPattern { base, left_labels: key.left_labels, right_labels: key.right_labels }, global))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_copies_agree() {
        let p = BipartitePattern::simple(2, 3, &[(0, 0), (0, 1), (1, 2)]).unwrap();
        let q = p.relabel(&[1, 0], &[2, 0, 1]);
        let a = canonical_form(&LabelledPattern::new(p.clone(), vec![0], vec![]).unwrap()).unwrap().0;
        let b = canonical_form(&LabelledPattern::new(q.clone(), vec![1], vec![]).unwrap()).unwrap().0;
        assert_eq!(a, b);
        // labelling the other left vertex gives a different labelled graph
        let c = canonical_form(&LabelledPattern::new(q, vec![0], vec![]).unwrap()).unwrap().0;
        assert_ne!(a, c);
    }

    #[test]
    fn label_order_matters() {
        let p = BipartitePattern::simple(2, 1, &[(0, 0)]).unwrap();
        let a = canonical_form(&LabelledPattern::new(p.clone(), vec![0, 1], vec![]).unwrap()).unwrap().0;
        let b = canonical_form(&LabelledPattern::new(p, vec![1, 0], vec![]).unwrap()).unwrap().0;
        assert_ne!(a, b);
    }
}
