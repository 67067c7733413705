//! Rational linear combinations of labelled homomorphism polynomial maps
//! and their operation algebra: swap, unlabel, restricted sum, tensor,
//! glue, product and restricted product.

mod canon;
mod eval;

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{permutations, BipartitePattern, LabelledPattern, WeightedHost};
use crate::partition::{enumerate_partitions, moebius};
use crate::rational::{lagrange, Q};
use crate::treedec::{exact_treewidth_graph, TreeDecomposition, TREEWIDTH_CAP};

pub use canon::{canonical_form, LEAF_CAP};
pub use eval::{brute_labelled_hom, LabelTable};

/// One term α·𝐅 with an optional decomposition whose root bag holds every
/// labelled vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomTerm {
    pub coeff: Q,
    pub pattern: LabelledPattern,
    pub cert: Option<TreeDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPolyExpr {
    n: usize,
    m: usize,
    l: usize,
    r: usize,
    /// Claimed bag-size bound; None when some term has no certificate.
    k: Option<usize>,
    terms: Vec<HomTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductCaps {
    pub max_n: usize,
    pub max_terms: usize,
}

impl Default for ProductCaps {
    fn default() -> Self {
        ProductCaps { max_n: 5, max_terms: 3 }
    }
}

/// Decomposition with all labelled vertices in the root bag, found by exact
/// treewidth after making the labelled vertices a clique.
pub fn labelled_certificate(lp: &LabelledPattern) -> Result<TreeDecomposition> {
    let f = &lp.base;
    let labelled = lp.labelled_vertices();
    let mut edges: Vec<(usize, usize)> = f.global_edges().into_iter().map(|(a, b, _)| (a, b)).collect();
    for (x, &u) in labelled.iter().enumerate() {
        for &v in &labelled[x + 1..] {
            edges.push((u, v));
        }
    }
    let (_, mut td) = exact_treewidth_graph(f.vertex_count(), &edges, TREEWIDTH_CAP)?;
    td.root = td.bags.iter().position(|b| labelled.iter().all(|v| b.contains(v))).expect("a clique lies in one bag");
    Ok(td)
}

fn map_bag(bag: &[usize], map: &[usize]) -> Vec<usize> {
    let mut b: Vec<usize> = bag.iter().map(|&v| map[v]).collect();
    b.sort_unstable();
    b.dedup();
    b
}

/// Fresh root bag `root` joined to the (renumbered) roots of `parts`.
fn join_certs(parts: &[(&TreeDecomposition, &[usize])], root: Vec<usize>) -> TreeDecomposition {
    let mut bags = vec![root];
    let mut edges = Vec::new();
    for (td, map) in parts {
        let off = bags.len();
        bags.extend(td.bags.iter().map(|b| map_bag(b, map)));
        edges.extend(td.edges.iter().map(|&(s, t)| (s + off, t + off)));
        edges.push((0, td.root + off));
    }
    TreeDecomposition { bags, edges, root: 0 }
}

fn union_find_root(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut y = x;
    while p[y] != r {
        let nx = p[y];
        p[y] = r;
        y = nx;
    }
    r
}

/// Glues two patterns of equal arity; returns the result and the global id
/// maps of both inputs.
fn glue_patterns(p: &LabelledPattern, q: &LabelledPattern) -> (LabelledPattern, Vec<usize>, Vec<usize>) {
    let (a1, b1) = (p.base.left_size(), p.base.right_size());
    let (a2, b2) = (q.base.left_size(), q.base.right_size());
    let mut left: Vec<usize> = (0..a1 + a2).collect();
    let mut right: Vec<usize> = (0..b1 + b2).collect();
    for (&x, &y) in p.left_labels.iter().zip(&q.left_labels) {
        let (rx, ry) = (union_find_root(&mut left, x), union_find_root(&mut left, a1 + y));
        if rx != ry {
            left[rx.max(ry)] = rx.min(ry);
        }
    }
    for (&x, &y) in p.right_labels.iter().zip(&q.right_labels) {
        let (rx, ry) = (union_find_root(&mut right, x), union_find_root(&mut right, b1 + y));
        if rx != ry {
            right[rx.max(ry)] = rx.min(ry);
        }
    }
    let compress = |uf: &mut Vec<usize>, len: usize| -> (Vec<usize>, usize) {
        let mut id = HashMap::new();
        let mut out = Vec::with_capacity(len);
        for x in 0..len {
            let r = union_find_root(uf, x);
            let next = id.len();
            out.push(*id.entry(r).or_insert(next));
        }
        (out, id.len())
    };
    let (lb, nl) = compress(&mut left, a1 + a2);
    let (rb, nr) = compress(&mut right, b1 + b2);
    let base = p.base.disjoint_union(&q.base).quotient(&lb, nl, &rb, nr);
    let lp = LabelledPattern {
        base,
        left_labels: p.left_labels.iter().map(|&x| lb[x]).collect(),
        right_labels: p.right_labels.iter().map(|&y| rb[y]).collect(),
    };
    let gp: Vec<usize> = (0..a1).map(|x| lb[x]).chain((0..b1).map(|y| nl + rb[y])).collect();
    let gq: Vec<usize> = (0..a2).map(|x| lb[a1 + x]).chain((0..b2).map(|y| nl + rb[b1 + y])).collect();
    (lp, gp, gq)
}

fn glue_terms(s: &HomTerm, t: &HomTerm) -> HomTerm {
    let (pattern, mp, mq) = glue_patterns(&s.pattern, &t.pattern);
    let cert = match (&s.cert, &t.cert) {
        (Some(c1), Some(c2)) => Some(join_certs(&[(c1, &mp), (c2, &mq)], pattern.labelled_vertices())),
        _ => None,
    };
    HomTerm { coeff: &s.coeff * &t.coeff, pattern, cert }
}

fn unlabel_term(t: &HomTerm, i: usize) -> HomTerm {
    let mut pattern = t.pattern.clone();
    pattern.left_labels.remove(i);
    HomTerm { coeff: t.coeff.clone(), pattern, cert: t.cert.clone() }
}

impl HomPolyExpr {
    pub fn zero(n: usize, m: usize, l: usize, r: usize) -> Self {
        HomPolyExpr { n, m, l, r, k: Some(0), terms: Vec::new() }
    }

    /// A single pattern, certified by exact treewidth when small enough.
    pub fn from_pattern(lp: LabelledPattern, n: usize, m: usize) -> Result<Self> {
        let cert = labelled_certificate(&lp).ok();
        let k = cert.as_ref().map(|c| c.max_bag());
        let (l, r) = lp.arity();
        Ok(HomPolyExpr { n, m, l, r, k, terms: vec![HomTerm { coeff: Q::one(), pattern: lp, cert }] })
    }

    pub fn from_certified(lp: LabelledPattern, cert: TreeDecomposition, n: usize, m: usize) -> Result<Self> {
        let e = HomPolyExpr {
            n,
            m,
            l: lp.left_labels.len(),
            r: lp.right_labels.len(),
            k: Some(cert.max_bag()),
            terms: vec![HomTerm { coeff: Q::one(), pattern: lp, cert: Some(cert) }],
        };
        e.check_certificates()?;
        Ok(e)
    }

    /// 𝐉: the constant map 1.
    pub fn ones(l: usize, r: usize, n: usize, m: usize) -> Self {
        let cert = TreeDecomposition::single_bag(l + r);
        HomPolyExpr {
            n,
            m,
            l,
            r,
            k: Some(l + r),
            terms: vec![HomTerm { coeff: Q::one(), pattern: LabelledPattern::all_ones(l, r), cert: Some(cert) }],
        }
    }

    /// D^{i,j}: 1 where v_i = v_j, else 0.
    pub fn diagonal(l: usize, r: usize, i: usize, j: usize, n: usize, m: usize) -> Self {
        let lp = LabelledPattern::diagonal(l, r, i, j);
        let cert = TreeDecomposition::single_bag(l - 1 + r);
        HomPolyExpr {
            n,
            m,
            l,
            r,
            k: Some(l - 1 + r),
            terms: vec![HomTerm { coeff: Q::one(), pattern: lp, cert: Some(cert) }],
        }
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.n, self.m)
    }
    pub fn arity(&self) -> (usize, usize) {
        (self.l, self.r)
    }
    pub fn k(&self) -> Option<usize> {
        self.k
    }
    pub fn terms(&self) -> &[HomTerm] {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if (self.n, self.m) != (o.n, o.m) {
            return Err(Error::DimensionMismatch(format!("targets {}x{} vs {}x{}", self.n, self.m, o.n, o.m)));
        }
        if (self.l, self.r) != (o.l, o.r) {
            return Err(Error::DimensionMismatch(format!("arities ({},{}) vs ({},{})", self.l, self.r, o.l, o.r)));
        }
        Ok(())
    }

    fn max_k(a: Option<usize>, b: Option<usize>) -> Option<usize> {
        Some(a?.max(b?))
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut e = self.clone();
        e.terms.extend(o.terms.iter().cloned());
        e.k = Self::max_k(self.k, o.k);
        Ok(e.normalized())
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut e = self.clone();
        for t in &mut e.terms {
            t.coeff *= c;
        }
        e.normalized()
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Q::one()))
    }

    /// Merges terms with isomorphic labelled patterns and drops zeros.
    pub fn normalized(&self) -> Self {
        let mut merged: BTreeMap<LabelledPattern, HomTerm> = BTreeMap::new();
        let mut order = Vec::new();
        for t in &self.terms {
            let (key, cert) = match canonical_form(&t.pattern) {
                Some((canon, map)) => {
                    let cert = t.cert.as_ref().map(|c| TreeDecomposition {
                        bags: c.bags.iter().map(|b| map_bag(b, &map)).collect(),
                        edges: c.edges.clone(),
                        root: c.root,
                    });
                    (canon, cert)
                }
                None => (t.pattern.clone(), t.cert.clone()),
            };
            match merged.get_mut(&key) {
                Some(existing) => {
                    existing.coeff += &t.coeff;
                    if existing.cert.is_none() {
                        existing.cert = cert;
                    }
                }
                None => {
                    order.push(key.clone());
                    merged.insert(key.clone(), HomTerm { coeff: t.coeff.clone(), pattern: key, cert });
                }
            }
        }
        let terms: Vec<HomTerm> = order.into_iter().filter_map(|k| merged.remove(&k)).filter(|t| !t.coeff.is_zero()).collect();
        let k = if terms.iter().all(|t| t.cert.is_some()) { self.k } else { None };
        HomPolyExpr { terms, k, ..self.clone() }
    }

    /// Every term certified: valid decomposition, labels in the root bag,
    /// bags of size at most k.
    pub fn check_certificates(&self) -> Result<()> {
        let k = self.k.ok_or_else(|| Error::InvalidArgument("expression carries uncertified terms".into()))?;
        for (idx, t) in self.terms.iter().enumerate() {
            let c = t.cert.as_ref().ok_or_else(|| Error::InvalidArgument(format!("term {idx} has no certificate")))?;
            c.validate(&t.pattern.base)?;
            let labelled = t.pattern.labelled_vertices();
            if !labelled.iter().all(|v| c.bags[c.root].contains(v)) {
                return Err(Error::InvalidArgument(format!("term {idx}: root bag misses a labelled vertex")));
            }
            if c.max_bag() > k {
                return Err(Error::InvalidArgument(format!("term {idx}: bag of size {} exceeds k = {k}", c.max_bag())));
            }
        }
        Ok(())
    }

    fn check_tuple(&self, v: &[usize], w: &[usize], g: &WeightedHost) -> Result<()> {
        if (g.rows(), g.cols()) != (self.n, self.m) {
            return Err(Error::DimensionMismatch(format!("host {}x{} for an expression over {}x{}", g.rows(), g.cols(), self.n, self.m)));
        }
        if v.len() != self.l || w.len() != self.r {
            return Err(Error::DimensionMismatch("tuple lengths differ from the arity".into()));
        }
        if v.iter().any(|&x| x >= self.n) || w.iter().any(|&y| y >= self.m) {
            return Err(Error::InvalidArgument("label target out of range".into()));
        }
        Ok(())
    }

    pub fn eval(&self, v: &[usize], w: &[usize], g: &WeightedHost) -> Result<Q> {
        self.check_tuple(v, w, g)?;
        let mut s = Q::zero();
        for t in &self.terms {
            s += &t.coeff * LabelTable::new(&t.pattern, g).value(v, w);
        }
        Ok(s)
    }

    /// Values at every tuple, keyed by (v, w) in lexicographic order.
    pub fn eval_all(&self, g: &WeightedHost) -> Result<BTreeMap<(Vec<usize>, Vec<usize>), Q>> {
        self.check_tuple(&vec![0; self.l], &vec![0; self.r], g)?;
        let tables: Vec<LabelTable> = self.terms.iter().map(|t| LabelTable::new(&t.pattern, g)).collect();
        let mut out = BTreeMap::new();
        for (v, w) in all_tuples(self.n, self.l, self.m, self.r) {
            let mut s = Q::zero();
            for (t, tab) in self.terms.iter().zip(&tables) {
                s += &t.coeff * tab.value(&v, &w);
            }
            out.insert((v, w), s);
        }
        Ok(out)
    }

    /// Exchanges the sides: the result lives over m×n with arity (r, ℓ).
    pub fn swap(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f = &t.pattern.base;
                let (a, b) = (f.left_size(), f.right_size());
                let map: Vec<usize> = (0..a).map(|x| b + x).chain(0..b).collect();
                HomTerm {
                    coeff: t.coeff.clone(),
                    pattern: LabelledPattern {
                        base: f.transpose(),
                        left_labels: t.pattern.right_labels.clone(),
                        right_labels: t.pattern.left_labels.clone(),
                    },
                    cert: t.cert.as_ref().map(|c| TreeDecomposition {
                        bags: c.bags.iter().map(|bg| map_bag(bg, &map)).collect(),
                        edges: c.edges.clone(),
                        root: c.root,
                    }),
                }
            })
            .collect();
        HomPolyExpr { n: self.m, m: self.n, l: self.r, r: self.l, k: self.k, terms }
    }

    /// Σ_i: sums out the i-th left label (0-based).
    pub fn unlabel(&self, i: usize) -> Result<Self> {
        if i >= self.l {
            return Err(Error::InvalidArgument(format!("label index {i} out of range for arity {}", self.l)));
        }
        let terms = self.terms.iter().map(|t| unlabel_term(t, i)).collect();
        Ok(HomPolyExpr { l: self.l - 1, terms, ..self.clone() }.normalized())
    }

    pub fn tensor(&self, o: &Self) -> Result<Self> {
        if (self.n, self.m) != (o.n, o.m) {
            return Err(Error::DimensionMismatch(format!("targets {}x{} vs {}x{}", self.n, self.m, o.n, o.m)));
        }
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &o.terms {
                let (p, q) = (&s.pattern, &t.pattern);
                let (a1, b1) = (p.base.left_size(), p.base.right_size());
                let (a2, b2) = (q.base.left_size(), q.base.right_size());
                let base = p.base.disjoint_union(&q.base);
                let mut left_labels = p.left_labels.clone();
                left_labels.extend(q.left_labels.iter().map(|&x| a1 + x));
                let mut right_labels = p.right_labels.clone();
                right_labels.extend(q.right_labels.iter().map(|&y| b1 + y));
                let pattern = LabelledPattern { base, left_labels, right_labels };
                let na = a1 + a2;
                let mp: Vec<usize> = (0..a1).chain((0..b1).map(|y| na + y)).collect();
                let mq: Vec<usize> = (0..a2).map(|x| a1 + x).chain((0..b2).map(|y| na + b1 + y)).collect();
                let cert = match (&s.cert, &t.cert) {
                    (Some(c1), Some(c2)) => Some(join_certs(&[(c1, &mp), (c2, &mq)], pattern.labelled_vertices())),
                    _ => None,
                };
                terms.push(HomTerm { coeff: &s.coeff * &t.coeff, pattern, cert });
            }
        }
        let arity = self.l + o.l + self.r + o.r;
        let k = Self::max_k(self.k, o.k).map(|k| k.max(arity));
        Ok(HomPolyExpr { n: self.n, m: self.m, l: self.l + o.l, r: self.r + o.r, k, terms }.normalized())
    }

    /// Point-wise product.
    pub fn glue(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        let mut terms = Vec::new();
        for s in &self.terms {
            for t in &o.terms {
                terms.push(glue_terms(s, t));
            }
        }
        Ok(HomPolyExpr { terms, k: Self::max_k(self.k, o.k), ..self.clone() }.normalized())
    }

    fn glue_power(&self, e: usize) -> Result<Self> {
        let mut acc = Self::ones(self.l, self.r, self.n, self.m);
        for _ in 0..e {
            acc = acc.glue(self)?;
        }
        Ok(acc)
    }

    /// p(self) for p given by coefficients, lowest degree first, with the
    /// constant term realised by 𝐉.
    fn apply_polynomial(&self, coeffs: &[Q]) -> Result<Self> {
        let mut acc = Self::zero(self.n, self.m, self.l, self.r);
        acc.k = Some(self.l + self.r);
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.glue_power(e)?.scale(c))?;
            }
        }
        Ok(acc)
    }

    fn check_index(&self, i: usize, j: &[usize]) -> Result<()> {
        if i >= self.l || j.iter().any(|&x| x >= self.l) {
            return Err(Error::InvalidArgument("label index out of range".into()));
        }
        if j.contains(&i) {
            return Err(Error::InvalidArgument(format!("excluded set contains the summed label {i}")));
        }
        Ok(())
    }

    /// Σ_{i,J}: sum over v outside {v_j : j ∈ J}, via the indicator
    /// δ = p(Σ_j D^{i,j}) with p(0) = 1 and p(1..ℓ) = 0.
    pub fn restricted_sum(&self, i: usize, j: &[usize]) -> Result<Self> {
        self.check_index(i, j)?;
        if j.is_empty() {
            return self.unlabel(i);
        }
        let mut s = Self::zero(self.n, self.m, self.l, self.r);
        for &jj in j {
            s = s.add(&Self::diagonal(self.l, self.r, i, jj, self.n, self.m))?;
        }
        let pts: Vec<(Q, Q)> = (0..=self.l).map(|x| (Q::from_integer(BigInt::from(x)), if x == 0 { Q::one() } else { Q::zero() })).collect();
        let delta = s.apply_polynomial(&lagrange(&pts))?;
        let mut out = delta.glue(self)?.unlabel(i)?;
        out.k = out.k.map(|k| k.max(self.l + self.r));
        Ok(out)
    }

    /// Π_i: ∏_{v ∈ [n]} φ(v[i/v], w), expanded over orbits of maps
    /// [n] → terms and partitions of [n].
    pub fn product(&self, i: usize, caps: ProductCaps) -> Result<Self> {
        self.check_index(i, &[])?;
        if self.n > caps.max_n {
            return Err(Error::CapExceeded {
                what: "host side n for the product expansion".into(),
                got: self.n,
                cap: caps.max_n,
                hint: " (the expansion grows like Bell(n) times the orbit count)".into(),
            });
        }
        let phi = self.normalized();
        if phi.terms.len() > caps.max_terms {
            return Err(Error::cap("distinct terms for the product expansion", phi.terms.len(), caps.max_terms));
        }
        if phi.k.is_none() {
            return Err(Error::InvalidArgument("product needs certified terms".into()));
        }
        let n = self.n;
        let t = phi.terms.len();
        if t == 0 {
            return Ok(Self::zero(self.n, self.m, self.l - 1, self.r));
        }
        let partitions = enumerate_partitions(n)?;
        let perms = permutations(n);
        let mut sigs: BTreeMap<Vec<Vec<usize>>, Q> = BTreeMap::new();
        for lambda in compositions(n, t) {
            let alpha = lambda.iter().enumerate().fold(Q::one(), |acc, (x, &c)| acc * num::pow::pow(phi.terms[x].coeff.clone(), c));
            let orbit = maps_with_counts(&lambda);
            let beta = orbit_constant(&orbit[0], &orbit, &perms);
            let w = alpha / Q::from_integer(BigInt::from(beta));
            for g in &orbit {
                for pi in &partitions {
                    let mut sig: Vec<Vec<usize>> = pi.blocks().iter().map(|blk| {
                        let mut b: Vec<usize> = blk.iter().map(|&v| g[v]).collect();
                        b.sort_unstable();
                        b
                    }).collect();
                    sig.sort();
                    *sigs.entry(sig).or_insert_with(Q::zero) += &w * moebius(pi);
                }
            }
        }
        let mut terms = Vec::new();
        for (sig, c) in sigs {
            if c.is_zero() {
                continue;
            }
            let mut acc: Option<HomTerm> = None;
            for block in &sig {
                let mut glued = phi.terms[block[0]].clone();
                for &x in &block[1..] {
                    glued = glue_terms(&glued, &phi.terms[x]);
                }
                let mut part = unlabel_term(&glued, i);
                part.coeff = Q::one();
                acc = Some(match acc {
                    None => part,
                    Some(a) => glue_terms(&a, &part),
                });
            }
            let mut term = acc.expect("partitions have blocks");
            term.coeff = c;
            terms.push(term);
        }
        Ok(HomPolyExpr { l: self.l - 1, terms, k: phi.k, ..self.clone() }.normalized())
    }

    /// Π_{i,J}: product over v outside {v_j : j ∈ J}, by recursion on |J|.
    pub fn restricted_product(&self, i: usize, j: &[usize], caps: ProductCaps) -> Result<Self> {
        self.check_index(i, j)?;
        let Some((&last, rest)) = j.split_last() else {
            return self.product(i, caps);
        };
        let inner = ProductCaps { max_terms: caps.max_terms + 1, ..caps };
        let a = self.restricted_product(i, rest, inner)?;
        let with_d = self.add(&Self::diagonal(self.l, self.r, i, last, self.n, self.m))?;
        let b = with_d.restricted_product(i, rest, inner)?;
        // ψ = p((1/n) Σ_{j'} Σ_i D^{j',j}), p(0) = 0, p(1..ℓ) = 1
        let (l1, r) = (self.l - 1, self.r);
        let mut s = Self::zero(self.n, self.m, l1, r);
        for &jp in rest {
            s = s.add(&Self::diagonal(self.l, self.r, jp, last, self.n, self.m).unlabel(i)?)?;
        }
        let s = s.scale(&Q::new(BigInt::one(), BigInt::from(self.n)));
        let pts: Vec<(Q, Q)> = (0..=self.l).map(|x| (Q::from_integer(BigInt::from(x)), if x == 0 { Q::zero() } else { Q::one() })).collect();
        let psi = s.apply_polynomial(&lagrange(&pts))?;
        let one = Self::ones(l1, r, self.n, self.m);
        let left = psi.glue(&a)?;
        let right = one.sub(&psi)?.glue(&b.sub(&a)?)?;
        let mut out = left.add(&right)?;
        out.k = Self::max_k(out.k, Self::max_k(self.k, Some(self.l + self.r)));
        Ok(out)
    }
}

/// Random labelled pattern with at most `max_vertices` vertices (at least one
/// per side) and total multiplicity at most `max_mult`.
pub fn random_labelled_pattern<R: Rng>(rng: &mut R, l: usize, r: usize, max_vertices: usize, max_mult: usize) -> LabelledPattern {
    let max_vertices = max_vertices.max(2);
    let a = rng.gen_range(1..max_vertices);
    let b = rng.gen_range(1..=max_vertices - a);
    let mult = rng.gen_range(0..=max_mult);
    let base = BipartitePattern::random(rng, a, b, mult);
    let left_labels = (0..l).map(|_| rng.gen_range(0..a)).collect();
    let right_labels = (0..r).map(|_| rng.gen_range(0..b)).collect();
    LabelledPattern { base, left_labels, right_labels }
}

/// Random expression with 1..=max_terms terms and small nonzero coefficients.
pub fn random_expr<R: Rng>(rng: &mut R, n: usize, m: usize, l: usize, r: usize, max_terms: usize) -> Result<HomPolyExpr> {
    let mut e = HomPolyExpr::zero(n, m, l, r);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-3i64..=3);
        }
        let d = rng.gen_range(1i64..=3);
        let t = HomPolyExpr::from_pattern(random_labelled_pattern(rng, l, r, 4, 3), n, m)?;
        e = e.add(&t.scale(&Q::new(BigInt::from(c), BigInt::from(d))))?;
    }
    Ok(e)
}

/// All (v, w) ∈ [n]^l × [m]^r in lexicographic order.
pub fn all_tuples(n: usize, l: usize, m: usize, r: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let dims: Vec<usize> = std::iter::repeat_n(n, l).chain(std::iter::repeat_n(m, r)).collect();
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; l + r];
    for _ in 0..total {
        out.push((cur[..l].to_vec(), cur[l..].to_vec()));
        for x in (0..cur.len()).rev() {
            cur[x] += 1;
            if cur[x] < dims[x] {
                break;
            }
            cur[x] = 0;
        }
    }
    out
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All maps g: [n] → [t] with |g⁻¹(x)| = counts[x].
fn maps_with_counts(counts: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = counts.iter().sum();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut left = counts.to_vec();
    fn go(n: usize, left: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..left.len() {
            if left[x] > 0 {
                left[x] -= 1;
                cur.push(x);
                go(n, left, cur, out);
                cur.pop();
                left[x] += 1;
            }
        }
    }
    go(n, &mut left, &mut cur, &mut out);
    out
}

/// Number of pairs (g, h), g in the orbit and h a permutation, with g∘h = f.
fn orbit_constant(f: &[usize], orbit: &[Vec<usize>], perms: &[Vec<usize>]) -> usize {
    let mut count = 0;
    for g in orbit {
        for h in perms {
            if (0..f.len()).all(|v| g[h[v]] == f[v]) {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_hom;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn edge(l: usize, r: usize) -> LabelledPattern {
        LabelledPattern::new(BipartitePattern::complete(1, 1), vec![0; l], vec![0; r]).unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = WeightedHost::from_fn(2, 3, |i, j| q((i * 3 + j + 1) as i64));
        let e = HomPolyExpr::from_pattern(edge(1, 1), 2, 3).unwrap();
        assert_eq!(e.eval(&[1], &[2], &g).unwrap(), q(6));
        let j = HomPolyExpr::ones(2, 1, 2, 3);
        assert_eq!(j.eval(&[0, 1], &[2], &g).unwrap(), q(1));
        let k2 = HomPolyExpr::from_pattern(LabelledPattern::unlabelled(BipartitePattern::complete(1, 1)), 2, 3).unwrap();
        assert_eq!(k2.eval(&[], &[], &WeightedHost::constant(2, 3, q(1))).unwrap(), q(6));
    }

    #[test]
    fn unlabel_and_sum_examples() {
        let g = WeightedHost::from_fn(3, 2, |i, j| q((i + 2 * j) as i64 + 1));
        assert_eq!(HomPolyExpr::ones(1, 0, 3, 2).unlabel(0).unwrap().eval(&[], &[], &g).unwrap(), q(3));
        let col = HomPolyExpr::from_pattern(edge(1, 1), 3, 2).unwrap().unlabel(0).unwrap();
        assert_eq!(col.eval(&[], &[1], &g).unwrap(), q(3 + 4 + 5));
        let p = BipartitePattern::cycle(2);
        let full = HomPolyExpr::from_pattern(LabelledPattern::new(p.clone(), vec![0, 1], vec![]).unwrap(), 3, 2).unwrap();
        let closed = full.unlabel(1).unwrap().unlabel(0).unwrap();
        assert_eq!(closed.eval(&[], &[], &g).unwrap(), brute_hom(&p, &g).unwrap());
        let restricted = HomPolyExpr::ones(2, 0, 3, 2).restricted_sum(0, &[1]).unwrap();
        assert_eq!(restricted.eval(&[], &[], &g).unwrap_err(), Error::DimensionMismatch("tuple lengths differ from the arity".into()));
        assert_eq!(restricted.eval(&[2], &[], &g).unwrap(), q(2));
    }

    #[test]
    fn product_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = WeightedHost::random(&mut rng, 3, 2, 5, 3);
        let j = HomPolyExpr::ones(1, 1, 3, 2);
        let p = j.product(0, ProductCaps::default()).unwrap();
        for w in 0..2 {
            assert_eq!(p.eval(&[], &[w], &g).unwrap(), q(1));
        }
        let e = HomPolyExpr::from_pattern(edge(1, 1), 3, 2).unwrap();
        let p = e.product(0, ProductCaps::default()).unwrap();
        p.check_certificates().unwrap();
        for w in 0..2 {
            let direct: Q = (0..3).map(|v| g.get(v, w).clone()).product();
            assert_eq!(p.eval(&[], &[w], &g).unwrap(), direct);
        }
    }
}
