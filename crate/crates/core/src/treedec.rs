//! Tree decompositions: validation, exact treewidth, the shape transform
//! used by hom-circuit synthesis, and PACE-2017 `.td` I/O.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::BipartitePattern;

/// Default vertex cap for [`exact_treewidth`].
pub const TREEWIDTH_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree(String),
    UnknownVertex { node: usize, vertex: usize },
    VertexNotCovered { vertex: usize },
    EdgeNotCovered { u: usize, v: usize },
    Disconnected { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree(s) => write!(f, "bag graph is not a tree: {s}"),
            Violation::UnknownVertex { node, vertex } => write!(f, "bag {node} mentions unknown vertex {vertex}"),
            Violation::VertexNotCovered { vertex } => write!(f, "vertex coverage: vertex {vertex} is in no bag"),
            Violation::EdgeNotCovered { u, v } => write!(f, "edge coverage: no bag contains edge {u}-{v}"),
            Violation::Disconnected { vertex } => write!(f, "connectivity: bags containing vertex {vertex} are not connected"),
        }
    }
}

impl TreeDecomposition {
    pub fn single_bag(vertices: usize) -> Self {
        TreeDecomposition { bags: vec![(0..vertices).collect()], edges: vec![], root: 0 }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn max_bag(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(s, t) in &self.edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        adj
    }

    /// Children lists of the tree rooted at `root`, plus a BFS order from the root.
    pub fn rooted(&self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let adj = self.neighbours();
        let mut children = vec![Vec::new(); self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut order = Vec::new();
        if self.bags.is_empty() {
            return (children, order);
        }
        let mut q = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(s) = q.pop_front() {
            order.push(s);
            for &t in &adj[s] {
                if !seen[t] {
                    seen[t] = true;
                    children[s].push(t);
                    q.push_back(t);
                }
            }
        }
        (children, order)
    }

    /// Checks the three decomposition conditions against a graph.
    pub fn validate_graph(&self, vertices: usize, edges: &[(usize, usize)]) -> std::result::Result<usize, Violation> {
        let nodes = self.bags.len();
        if nodes == 0 {
            if vertices == 0 {
                return Ok(0);
            }
            return Err(Violation::VertexNotCovered { vertex: 0 });
        }
        if self.root >= nodes {
            return Err(Violation::NotATree(format!("root {} out of range", self.root)));
        }
        if self.edges.len() != nodes - 1 {
            return Err(Violation::NotATree(format!("{} nodes but {} edges", nodes, self.edges.len())));
        }
        if self.edges.iter().any(|&(s, t)| s >= nodes || t >= nodes || s == t) {
            return Err(Violation::NotATree("edge endpoint out of range or loop".into()));
        }
        let (_, order) = self.rooted();
        if order.len() != nodes {
            return Err(Violation::NotATree("disconnected".into()));
        }
        for (s, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= vertices) {
                return Err(Violation::UnknownVertex { node: s, vertex: v });
            }
        }
        let mut holders = vec![Vec::new(); vertices];
        for (s, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !holders[v].contains(&s) {
                    holders[v].push(s);
                }
            }
        }
        if let Some(v) = (0..vertices).find(|&v| holders[v].is_empty()) {
            return Err(Violation::VertexNotCovered { vertex: v });
        }
        for &(u, v) in edges {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                return Err(Violation::EdgeNotCovered { u, v });
            }
        }
        let adj = self.neighbours();
        for v in 0..vertices {
            let set: BTreeSet<usize> = holders[v].iter().copied().collect();
            let mut seen = BTreeSet::from([holders[v][0]]);
            let mut stack = vec![holders[v][0]];
            while let Some(s) = stack.pop() {
                for &t in &adj[s] {
                    if set.contains(&t) && seen.insert(t) {
                        stack.push(t);
                    }
                }
            }
            if seen.len() != set.len() {
                return Err(Violation::Disconnected { vertex: v });
            }
        }
        Ok(self.width())
    }

    pub fn validate(&self, f: &BipartitePattern) -> Result<usize> {
        let edges: Vec<(usize, usize)> = f.global_edges().into_iter().map(|(a, b, _)| (a, b)).collect();
        self.validate_graph(f.vertex_count(), &edges).map_err(Error::InvalidDecomposition)
    }

    /// The three shape conditions required by hom synthesis with bag size `k`.
    pub fn is_conforming(&self, k: usize) -> bool {
        if self.bags.iter().any(|b| b.len() != k) {
            return false;
        }
        for &(s, t) in &self.edges {
            let inter = self.bags[s].iter().filter(|v| self.bags[t].contains(v)).count();
            if inter + 1 != k {
                return false;
            }
        }
        let (children, _) = self.rooted();
        children.iter().all(|c| c.len() <= k)
    }

    pub fn to_pace(&self, vertices: usize) -> String {
        let mut s = format!("s td {} {} {}\n", self.bags.len(), self.max_bag(), vertices);
        for (i, b) in self.bags.iter().enumerate() {
            s.push_str(&format!("b {}", i + 1));
            for v in b {
                s.push_str(&format!(" {}", v + 1));
            }
            s.push('\n');
        }
        for &(a, b) in &self.edges {
            s.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        s
    }

    /// Parses PACE `.td` text; returns the decomposition and the declared vertex count.
    pub fn from_pace(text: &str) -> Result<(Self, usize)> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut bags: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut edges = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            let num = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(line_no, format!("bad number `{t}`")));
            match toks[0] {
                "s" => {
                    if toks.len() != 5 || toks[1] != "td" {
                        return Err(Error::parse(line_no, "expected `s td <bags> <width+1> <n>`"));
                    }
                    header = Some((num(toks[2])?, num(toks[3])?, num(toks[4])?));
                }
                "b" => {
                    let (_, _, n) = header.ok_or_else(|| Error::parse(line_no, "bag before header"))?;
                    if toks.len() < 2 {
                        return Err(Error::parse(line_no, "bag line without id"));
                    }
                    let id = num(toks[1])?;
                    let mut bag = Vec::new();
                    for t in &toks[2..] {
                        let v = num(t)?;
                        if v == 0 || v > n {
                            return Err(Error::parse(line_no, format!("vertex {v} out of range")));
                        }
                        bag.push(v - 1);
                    }
                    bag.sort_unstable();
                    bag.dedup();
                    if id == 0 || bags.insert(id - 1, bag).is_some() {
                        return Err(Error::parse(line_no, format!("bad or duplicate bag id {id}")));
                    }
                }
                _ => {
                    if toks.len() != 2 {
                        return Err(Error::parse(line_no, "expected tree edge `<a> <b>`"));
                    }
                    let (a, b) = (num(toks[0])?, num(toks[1])?);
                    if a == 0 || b == 0 {
                        return Err(Error::parse(line_no, "bag ids are 1-based"));
                    }
                    edges.push((a - 1, b - 1));
                }
            }
        }
        let (nb, _, n) = header.ok_or_else(|| Error::parse(0, "missing `s td` header"))?;
        if bags.len() != nb || bags.keys().enumerate().any(|(i, &k)| i != k) {
            return Err(Error::parse(0, format!("expected bags 1..={nb}")));
        }
        if edges.iter().any(|&(a, b)| a >= nb || b >= nb) {
            return Err(Error::parse(0, "tree edge references a missing bag"));
        }
        Ok((TreeDecomposition { bags: bags.into_values().collect(), edges, root: 0 }, n))
    }
}

fn simple_adjacency(vertices: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); vertices];
    for &(u, v) in edges {
        if u != v {
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    adj
}

/// Builds a decomposition from an elimination order (first entry eliminated first).
pub fn decomposition_from_order(vertices: usize, edges: &[(usize, usize)], order: &[usize]) -> TreeDecomposition {
    if vertices == 0 {
        return TreeDecomposition { bags: vec![vec![]], edges: vec![], root: 0 };
    }
    let mut adj = simple_adjacency(vertices, edges);
    let mut pos = vec![0; vertices];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(vertices);
    let mut parent = vec![None; vertices];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > i).collect();
        for (x, &a) in later.iter().enumerate() {
            for &b in &later[x + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent[i] = later.iter().map(|&u| pos[u]).min();
    }
    let mut tedges = Vec::new();
    let mut roots = Vec::new();
    for i in 0..vertices {
        match parent[i] {
            Some(p) => tedges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tedges.push((w[0], w[1]));
    }
    TreeDecomposition { bags, edges: tedges, root: *roots.last().unwrap() }
}

/// Exact treewidth by the subset dynamic program, with a witness decomposition.
pub fn exact_treewidth_graph(vertices: usize, edges: &[(usize, usize)], cap: usize) -> Result<(usize, TreeDecomposition)> {
    if vertices > cap {
        return Err(Error::CapExceeded {
            what: "vertex count for exact treewidth".into(),
            got: vertices,
            cap,
            hint: "; provide a decomposition".into(),
        });
    }
    if vertices == 0 {
        return Ok((0, decomposition_from_order(0, edges, &[])));
    }
    let adj: Vec<u32> = {
        let a = simple_adjacency(vertices, edges);
        a.iter().map(|s| s.iter().fold(0u32, |m, &v| m | (1 << v))).collect()
    };
    let full: u32 = if vertices == 32 { u32::MAX } else { (1u32 << vertices) - 1 };
    // q(s, v): vertices outside s ∪ {v} reachable from v through s
    let q = |s: u32, v: usize| -> u32 {
        let mut reach = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let mut nxt = 0u32;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                nxt |= adj[u];
            }
            nxt &= !reach;
            reach |= nxt;
            out |= nxt & !s;
            frontier = nxt & s;
        }
        out & !(1 << v)
    };
    let size = 1usize << vertices;
    let mut tw = vec![i32::MAX; size];
    let mut choice = vec![0u8; size];
    tw[0] = -1;
    for s in 1..size as u32 {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let val = tw[rest as usize].max(q(rest, v).count_ones() as i32);
            if val < tw[s as usize] {
                tw[s as usize] = val;
                choice[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(vertices);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = decomposition_from_order(vertices, edges, &order);
    let w = tw[full as usize].max(0) as usize;
    debug_assert_eq!(td.width(), w);
    Ok((w, td))
}

/// Exact treewidth of a pattern (underlying simple graph).
pub fn exact_treewidth(f: &BipartitePattern) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_cap(f, TREEWIDTH_CAP)
}

pub fn exact_treewidth_cap(f: &BipartitePattern, cap: usize) -> Result<(usize, TreeDecomposition)> {
    let edges: Vec<(usize, usize)> = f.global_edges().into_iter().map(|(a, b, _)| (a, b)).collect();
    exact_treewidth_graph(f.vertex_count(), &edges, cap)
}

/// Width of the best elimination order, by enumerating all orders (oracle for small graphs).
pub fn treewidth_by_orders(vertices: usize, edges: &[(usize, usize)]) -> usize {
    crate::graph::permutations(vertices)
        .iter()
        .map(|o| decomposition_from_order(vertices, edges, o).width())
        .min()
        .unwrap_or(0)
}

struct WorkTree {
    bags: Vec<BTreeSet<usize>>,
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl WorkTree {
    fn add_node(&mut self, bag: BTreeSet<usize>) -> usize {
        self.bags.push(bag);
        self.adj.push(BTreeSet::new());
        self.alive.push(true);
        self.bags.len() - 1
    }
    fn link(&mut self, s: usize, t: usize) {
        self.adj[s].insert(t);
        self.adj[t].insert(s);
    }
    fn unlink(&mut self, s: usize, t: usize) {
        self.adj[s].remove(&t);
        self.adj[t].remove(&s);
    }
    /// Merges `s` into its neighbour `t`.
    fn contract(&mut self, s: usize, t: usize) {
        let ns: Vec<usize> = self.adj[s].iter().copied().collect();
        for u in ns {
            self.unlink(s, u);
            if u != t {
                self.link(u, t);
            }
        }
        self.alive[s] = false;
    }
    fn contract_subsets(&mut self) -> bool {
        let mut changed = false;
        loop {
            let mut found = None;
            'outer: for s in 0..self.bags.len() {
                if !self.alive[s] {
                    continue;
                }
                for &t in &self.adj[s] {
                    if self.bags[s].is_subset(&self.bags[t]) {
                        found = Some((s, t));
                        break 'outer;
                    }
                }
            }
            match found {
                Some((s, t)) => {
                    self.contract(s, t);
                    changed = true;
                }
                None => return changed,
            }
        }
    }
}

/// Result of [`nice_decomposition`].
#[derive(Debug, Clone)]
pub struct NiceDecomposition {
    pub td: TreeDecomposition,
    /// Bag size k of the input decomposition.
    pub k: usize,
    /// Whether all three shape conditions hold on the output.
    pub conforming: bool,
}

/// Transforms a valid decomposition into one with uniform bags of size k,
/// adjacent bags sharing k−1 vertices and at most k children per node.
pub fn nice_decomposition_graph(vertices: usize, edges: &[(usize, usize)], t: &TreeDecomposition) -> Result<NiceDecomposition> {
    t.validate_graph(vertices, edges).map_err(Error::InvalidDecomposition)?;
    let k = t.max_bag();
    if vertices <= k {
        let td = TreeDecomposition::single_bag(vertices);
        return Ok(NiceDecomposition { conforming: td.is_conforming(vertices), td, k: vertices });
    }
    let mut w = WorkTree { bags: vec![], adj: vec![], alive: vec![] };
    for b in &t.bags {
        w.add_node(b.iter().copied().collect());
    }
    for &(s, u) in &t.edges {
        w.link(s, u);
    }
    // uniform bag size
    loop {
        w.contract_subsets();
        let small = (0..w.bags.len()).find(|&s| w.alive[s] && w.bags[s].len() < k);
        let Some(s) = small else { break };
        let t2 = *w.adj[s].iter().next().expect("a small bag has a neighbour when |V| > k");
        let u = *w.bags[t2].difference(&w.bags[s]).next().expect("incomparable neighbour bags");
        w.bags[s].insert(u);
    }
    // intersections of size exactly k-1
    let tree_edges: Vec<(usize, usize)> = (0..w.bags.len())
        .filter(|&s| w.alive[s])
        .flat_map(|s| w.adj[s].iter().copied().filter(move |&u| u > s).map(move |u| (s, u)))
        .collect();
    for (s, u) in tree_edges {
        let out: Vec<usize> = w.bags[s].difference(&w.bags[u]).copied().collect();
        let inn: Vec<usize> = w.bags[u].difference(&w.bags[s]).copied().collect();
        if out.len() <= 1 {
            continue;
        }
        w.unlink(s, u);
        let mut prev = s;
        let mut bag = w.bags[s].clone();
        for step in 0..out.len() - 1 {
            bag.remove(&out[step]);
            bag.insert(inn[step]);
            let x = w.add_node(bag.clone());
            w.link(prev, x);
            prev = x;
        }
        w.link(prev, u);
    }
    // root and limit out-degree by chaining children that forget the same vertex
    let root = (0..w.bags.len()).find(|&s| w.alive[s]).unwrap();
    let mut parent = vec![usize::MAX; w.bags.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); w.bags.len()];
    {
        let mut q = VecDeque::from([root]);
        parent[root] = root;
        while let Some(s) = q.pop_front() {
            for &u in &w.adj[s] {
                if parent[u] == usize::MAX {
                    parent[u] = s;
                    children[s].push(u);
                    q.push_back(u);
                }
            }
        }
    }
    let mut queue = VecDeque::from([root]);
    while let Some(s) = queue.pop_front() {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &c in &children[s] {
            let forgotten = *w.bags[s].difference(&w.bags[c]).next().expect("distinct adjacent bags");
            groups.entry(forgotten).or_default().push(c);
        }
        let mut kept = Vec::new();
        for (_, grp) in groups {
            let head = grp[0];
            kept.push(head);
            for &c in &grp[1..] {
                children[head].push(c);
            }
        }
        children[s] = kept;
        queue.extend(children[s].iter().copied());
    }
    // compact
    let mut idx = vec![usize::MAX; w.bags.len()];
    let mut bags = Vec::new();
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        idx[s] = bags.len();
        bags.push(w.bags[s].iter().copied().collect::<Vec<_>>());
        order.extend(children[s].iter().copied());
        i += 1;
    }
    let mut tedges = Vec::new();
    for &s in &order {
        for &c in &children[s] {
            tedges.push((idx[s], idx[c]));
        }
    }
    let td = TreeDecomposition { bags, edges: tedges, root: 0 };
    td.validate_graph(vertices, edges).map_err(Error::InvalidDecomposition)?;
    Ok(NiceDecomposition { conforming: td.is_conforming(k), td, k })
}

pub fn nice_decomposition(f: &BipartitePattern, t: &TreeDecomposition) -> Result<NiceDecomposition> {
    let edges: Vec<(usize, usize)> = f.global_edges().into_iter().map(|(a, b, _)| (a, b)).collect();
    nice_decomposition_graph(f.vertex_count(), &edges, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> BipartitePattern {
        // centre a (left 0), leaves b, c (right 0, 1)
        BipartitePattern::complete(1, 2)
    }

    #[test]
    fn validate_examples() {
        let f = p3();
        let ok = TreeDecomposition { bags: vec![vec![0, 1], vec![0, 2]], edges: vec![(0, 1)], root: 0 };
        assert_eq!(ok.validate(&f).unwrap(), 1);
        assert_eq!(TreeDecomposition::single_bag(3).validate(&f).unwrap(), 2);
        let bad = TreeDecomposition { bags: vec![vec![0, 1], vec![2]], edges: vec![(0, 1)], root: 0 };
        assert_eq!(bad.validate(&f), Err(Error::InvalidDecomposition(Violation::EdgeNotCovered { u: 0, v: 2 })));
        let empty = TreeDecomposition { bags: vec![], edges: vec![], root: 0 };
        assert!(matches!(empty.validate(&f), Err(Error::InvalidDecomposition(Violation::VertexNotCovered { .. }))));
        let split = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2], vec![0, 2]],
            edges: vec![(0, 1), (1, 2)],
            root: 0,
        };
        assert_eq!(split.validate(&f), Err(Error::InvalidDecomposition(Violation::Disconnected { vertex: 0 })));
    }

    #[test]
    fn treewidth_examples() {
        assert_eq!(exact_treewidth(&BipartitePattern::path(5)).unwrap().0, 1);
        assert_eq!(exact_treewidth(&BipartitePattern::cycle(2)).unwrap().0, 2);
        assert_eq!(exact_treewidth(&BipartitePattern::complete(3, 3)).unwrap().0, 3);
        assert_eq!(exact_treewidth(&BipartitePattern::edgeless(2, 1)).unwrap().0, 0);
        let big = BipartitePattern::edgeless(7, 6);
        assert!(matches!(exact_treewidth(&big), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn pace_roundtrip() {
        let f = BipartitePattern::cycle(3);
        let (_, td) = exact_treewidth(&f).unwrap();
        let text = td.to_pace(f.vertex_count());
        let (back, n) = TreeDecomposition::from_pace(&text).unwrap();
        assert_eq!(n, 6);
        assert_eq!(back.bags, td.bags);
        assert!(back.validate(&f).is_ok());
        assert!(TreeDecomposition::from_pace("b 1 1\n").is_err());
        assert!(TreeDecomposition::from_pace("s td 1 1 1\nb 1 2\n").is_err());
    }

    #[test]
    fn nice_examples() {
        let f = p3();
        let single = nice_decomposition(&f, &TreeDecomposition::single_bag(3)).unwrap();
        assert_eq!(single.td.node_count(), 1);
        assert!(single.conforming);

        let path = BipartitePattern::path(6);
        let (_, td) = exact_treewidth(&path).unwrap();
        let nice = nice_decomposition(&path, &td).unwrap();
        assert!(nice.conforming);
        assert_eq!(nice.td.node_count(), 5);
        assert!(nice.td.bags.iter().all(|b| b.len() == 2));

        let again = nice_decomposition(&path, &nice.td).unwrap();
        assert_eq!(again.td.node_count(), nice.td.node_count());
    }

    #[test]
    fn star_out_degree_is_bounded() {
        let star = BipartitePattern::complete(1, 6);
        let bags: Vec<Vec<usize>> = (1..7).map(|b| vec![0, b]).collect();
        let edges = (1..6).map(|i| (0, i)).collect();
        let td = TreeDecomposition { bags, edges, root: 0 };
        let nice = nice_decomposition(&star, &td).unwrap();
        assert!(nice.conforming);
        assert!(nice.td.validate(&star).is_ok());
    }
}
