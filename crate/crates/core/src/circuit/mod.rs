//! Arithmetic circuits over ℚ: gates, an interning builder, exact
//! evaluation and size accounting.

mod symmetry;
mod text;

use std::collections::HashMap;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::WeightedHost;
use crate::rational::Q;

pub use symmetry::{
    apply_permutation, orbit_sizes_by_enumeration, orbit_stats, verify_symmetry, OrbitMode, OrbitStats, Perm,
    SymmetryChecker,
};
pub use text::{deserialize, serialize};

pub type GateId = usize;

/// A child reference with wire multiplicity.
pub type Wire = (GateId, u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    Input(u32, u32),
    Const(Q),
    /// A formal variable fixed by the symmetry group (interpolation slots).
    Aux(u32),
    Add(Vec<Wire>),
    Mul(Vec<Wire>),
}

impl Gate {
    pub fn children(&self) -> &[Wire] {
        match self {
            Gate::Add(c) | Gate::Mul(c) => c,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Point {
    /// Row index (left side).
    L(u32),
    /// Column index (right side).
    R(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GateKey {
    pub tag: String,
    pub support: Vec<Point>,
}

impl GateKey {
    pub fn new(tag: impl Into<String>, support: Vec<Point>) -> Self {
        GateKey { tag: tag.into(), support }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Group {
    /// Independent row and column permutations.
    SymNM,
    /// One permutation acting on rows and columns simultaneously (n = m).
    SymN,
}

impl Group {
    pub fn tag(&self) -> &'static str {
        match self {
            Group::SymNM => "symnm",
            Group::SymN => "symn",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub(crate) n: usize,
    pub(crate) m: usize,
    pub(crate) group: Group,
    pub(crate) gates: Vec<Gate>,
    pub(crate) keys: Vec<Vec<GateKey>>,
    pub(crate) output: GateId,
}

impl Circuit {
    pub fn rows(&self) -> usize {
        self.n
    }
    pub fn cols(&self) -> usize {
        self.m
    }
    pub fn group(&self) -> Group {
        self.group
    }
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }
    pub fn keys(&self) -> &[Vec<GateKey>] {
        &self.keys
    }
    pub fn output(&self) -> GateId {
        self.output
    }
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gates plus wires counted with multiplicity.
    pub fn size(&self) -> usize {
        self.gates.len() + self.gates.iter().map(|g| g.children().iter().map(|&(_, d)| d as usize).sum::<usize>()).sum::<usize>()
    }

    pub fn aux_count(&self) -> usize {
        self.gates
            .iter()
            .filter_map(|g| if let Gate::Aux(i) = g { Some(*i as usize + 1) } else { None })
            .max()
            .unwrap_or(0)
    }

    /// Formal degree in the input (and aux) variables.
    pub fn degree(&self) -> usize {
        let mut deg = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            deg[i] = match g {
                Gate::Input(..) | Gate::Aux(_) => 1,
                Gate::Const(_) => 0,
                Gate::Add(c) => c.iter().map(|&(x, _)| deg[x]).max().unwrap_or(0),
                Gate::Mul(c) => c.iter().map(|&(x, d)| deg[x] * d as usize).sum(),
            };
        }
        deg[self.output]
    }

    /// Largest key support size per gate (minimum over a gate's keys).
    pub fn key_support_sizes(&self) -> Vec<Option<usize>> {
        self.keys.iter().map(|ks| ks.iter().map(|k| k.support.len()).min()).collect()
    }

    pub fn evaluate(&self, host: &WeightedHost) -> Result<Q> {
        self.evaluate_with_aux(host, &[])
    }

    /// Evaluates with values for the aux variables.
    pub fn evaluate_with_aux(&self, host: &WeightedHost, aux: &[Q]) -> Result<Q> {
        if host.rows() != self.n || host.cols() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "circuit is {}x{}, host is {}x{}",
                self.n,
                self.m,
                host.rows(),
                host.cols()
            )));
        }
        if self.aux_count() > aux.len() {
            return Err(Error::InvalidArgument(format!(
                "circuit has {} aux variables, {} values supplied",
                self.aux_count(),
                aux.len()
            )));
        }
        if let Some(v) = self.evaluate_scaled(host, aux) {
            return Ok(v);
        }
        Ok(self.evaluate_big(host, aux))
    }

    fn evaluate_big(&self, host: &WeightedHost, aux: &[Q]) -> Q {
        let mut val: Vec<Q> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(i, j) => host.get(*i as usize, *j as usize).clone(),
                Gate::Const(c) => c.clone(),
                Gate::Aux(i) => aux[*i as usize].clone(),
                Gate::Add(c) => {
                    let mut s = Q::zero();
                    for &(x, d) in c {
                        if d == 1 {
                            s += &val[x];
                        } else {
                            s += &val[x] * Q::from_integer(BigInt::from(d));
                        }
                    }
                    s
                }
                Gate::Mul(c) => {
                    let mut p = Q::one();
                    for &(x, d) in c {
                        if val[x].is_zero() {
                            p = Q::zero();
                            break;
                        }
                        p *= num::pow::pow(val[x].clone(), d as usize);
                    }
                    p
                }
            };
            val.push(v);
        }
        val.swap_remove(self.output)
    }

    /// Exact evaluation in machine integers: every value is kept as
    /// `num / (D^e · C^f)` with D the host/aux denominator lcm and C the
    /// constant denominator lcm. Returns `None` on overflow.
    fn evaluate_scaled(&self, host: &WeightedHost, aux: &[Q]) -> Option<Q> {
        let lcm_of = |it: &mut dyn Iterator<Item = &Q>| -> Option<i128> {
            let mut l = BigInt::one();
            for q in it {
                l = l.lcm(q.denom());
            }
            l.to_i128()
        };
        let d = lcm_of(&mut host.entries().iter().chain(aux.iter()))?;
        let c = lcm_of(&mut self.gates.iter().filter_map(|g| if let Gate::Const(q) = g { Some(q) } else { None }))?;
        let scale = |q: &Q, by: i128| -> Option<i128> { (q.numer() * BigInt::from(by / q.denom().to_i128()?)).to_i128() };
        let mut dpow = vec![1i128];
        let mut cpow = vec![1i128];
        let pw = |table: &mut Vec<i128>, base: i128, e: usize| -> Option<i128> {
            while table.len() <= e {
                let last = *table.last().unwrap();
                table.push(last.checked_mul(base)?);
            }
            Some(table[e])
        };
        let mut val: Vec<(i128, u32, u32)> = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Input(i, j) => (scale(host.get(*i as usize, *j as usize), d)?, 1, 0),
                Gate::Aux(i) => (scale(&aux[*i as usize], d)?, 1, 0),
                Gate::Const(q) => (scale(q, c)?, 0, 1),
                Gate::Add(ch) => {
                    let e = ch.iter().map(|&(x, _)| val[x].1).max().unwrap_or(0);
                    let f = ch.iter().map(|&(x, _)| val[x].2).max().unwrap_or(0);
                    let mut s: i128 = 0;
                    for &(x, m) in ch {
                        let (nv, ev, fv) = val[x];
                        if nv == 0 {
                            continue;
                        }
                        let t = nv
                            .checked_mul(m as i128)?
                            .checked_mul(pw(&mut dpow, d, (e - ev) as usize)?)?
                            .checked_mul(pw(&mut cpow, c, (f - fv) as usize)?)?;
                        s = s.checked_add(t)?;
                    }
                    (s, e, f)
                }
                Gate::Mul(ch) => {
                    let mut p: i128 = 1;
                    let mut e: u32 = 0;
                    let mut f: u32 = 0;
                    for &(x, m) in ch {
                        let (nv, ev, fv) = val[x];
                        p = p.checked_mul(nv.checked_pow(m)?)?;
                        e = e.checked_add(ev.checked_mul(m)?)?;
                        f = f.checked_add(fv.checked_mul(m)?)?;
                    }
                    (p, e, f)
                }
            };
            val.push(v);
        }
        let (nv, e, f) = val[self.output];
        let den = BigInt::from(d).pow(e) * BigInt::from(c).pow(f);
        Some(Q::new(BigInt::from(nv), den))
    }

    /// Direct children-to-parent counts, used by validation.
    pub(crate) fn out_degrees(&self) -> Vec<usize> {
        let mut out = vec![0; self.gates.len()];
        for g in &self.gates {
            for &(x, _) in g.children() {
                out[x] += 1;
            }
        }
        out
    }

    /// Checks the structural invariants: topological order, single sink,
    /// unique inputs and constants, key uniqueness, in-range inputs.
    pub fn validate(&self) -> Result<()> {
        let mut inputs = HashMap::new();
        for (i, g) in self.gates.iter().enumerate() {
            for &(x, d) in g.children() {
                if x >= i {
                    return Err(Error::InvalidCircuit(format!("gate {i} refers to non-earlier gate {x}")));
                }
                if d == 0 {
                    return Err(Error::InvalidCircuit(format!("gate {i} has a zero-multiplicity wire")));
                }
            }
            match g {
                Gate::Input(r, c) => {
                    if *r as usize >= self.n || *c as usize >= self.m {
                        return Err(Error::InvalidCircuit(format!("input ({r},{c}) outside {}x{}", self.n, self.m)));
                    }
                    if inputs.insert((*r, *c), i).is_some() {
                        return Err(Error::InvalidCircuit(format!("variable x_({r},{c}) appears in two input gates")));
                    }
                }
                _ => {}
            }
        }
        if self.output >= self.gates.len() {
            return Err(Error::InvalidCircuit("output gate out of range".into()));
        }
        let out = self.out_degrees();
        for (i, &d) in out.iter().enumerate() {
            if i == self.output && d != 0 {
                return Err(Error::InvalidCircuit("output gate has outgoing wires".into()));
            }
            if i != self.output && d == 0 {
                return Err(Error::InvalidCircuit(format!("gate {i} is a second sink (multiple outputs)")));
            }
        }
        let mut seen = HashMap::new();
        for (i, ks) in self.keys.iter().enumerate() {
            for k in ks {
                if let Some(j) = seen.insert(k, i) {
                    if j != i {
                        return Err(Error::InvalidCircuit(format!("key {} shared by gates {j} and {i}", k.tag)));
                    }
                }
            }
        }
        if self.group == Group::SymN && self.n != self.m {
            return Err(Error::InvalidCircuit("diagonal group needs a square variable matrix".into()));
        }
        Ok(())
    }
}

/// Builds circuits with structural interning and light constant folding.
/// Children are always created before parents, so gate ids are topological.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    n: usize,
    m: usize,
    group: Group,
    gates: Vec<Gate>,
    keys: Vec<Vec<GateKey>>,
    index: HashMap<Gate, GateId>,
}

impl CircuitBuilder {
    pub fn new(n: usize, m: usize, group: Group) -> Self {
        CircuitBuilder { n, m, group, gates: Vec::new(), keys: Vec::new(), index: HashMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.n
    }
    pub fn cols(&self) -> usize {
        self.m
    }
    pub fn len(&self) -> usize {
        self.gates.len()
    }
    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn intern(&mut self, g: Gate) -> GateId {
        if let Some(&id) = self.index.get(&g) {
            return id;
        }
        let id = self.gates.len();
        self.gates.push(g.clone());
        self.keys.push(Vec::new());
        self.index.insert(g, id);
        id
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn const_value(&self, id: GateId) -> Option<&Q> {
        match &self.gates[id] {
            Gate::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn input(&mut self, i: usize, j: usize) -> GateId {
        assert!(i < self.n && j < self.m, "input ({i},{j}) outside {}x{}", self.n, self.m);
        self.intern(Gate::Input(i as u32, j as u32))
    }

    pub fn constant(&mut self, q: Q) -> GateId {
        self.intern(Gate::Const(q))
    }

    pub fn one(&mut self) -> GateId {
        self.constant(Q::one())
    }

    pub fn zero(&mut self) -> GateId {
        self.constant(Q::zero())
    }

    pub fn aux(&mut self, idx: usize) -> GateId {
        self.intern(Gate::Aux(idx as u32))
    }

    fn normalise(wires: impl IntoIterator<Item = Wire>) -> Vec<Wire> {
        let mut v: Vec<Wire> = wires.into_iter().filter(|&(_, d)| d > 0).collect();
        v.sort_unstable_by_key(|&(x, _)| x);
        let mut out: Vec<Wire> = Vec::with_capacity(v.len());
        for (x, d) in v {
            match out.last_mut() {
                Some((y, e)) if *y == x => *e += d,
                _ => out.push((x, d)),
            }
        }
        out
    }

    pub fn add(&mut self, wires: impl IntoIterator<Item = Wire>) -> GateId {
        let wires = Self::normalise(wires);
        let mut c = Q::zero();
        let mut rest = Vec::with_capacity(wires.len());
        for (x, d) in wires {
            match &self.gates[x] {
                Gate::Const(q) => c += q * Q::from_integer(BigInt::from(d)),
                _ => rest.push((x, d)),
            }
        }
        if rest.is_empty() {
            return self.constant(c);
        }
        if c.is_zero() && rest.len() == 1 && rest[0].1 == 1 {
            return rest[0].0;
        }
        if !c.is_zero() {
            let cid = self.constant(c);
            rest.push((cid, 1));
            rest = Self::normalise(rest);
        }
        self.intern(Gate::Add(rest))
    }

    pub fn mul(&mut self, wires: impl IntoIterator<Item = Wire>) -> GateId {
        let wires = Self::normalise(wires);
        let mut c = Q::one();
        let mut rest = Vec::with_capacity(wires.len());
        for (x, d) in wires {
            match &self.gates[x] {
                Gate::Const(q) => c *= num::pow::pow(q.clone(), d as usize),
                _ => rest.push((x, d)),
            }
        }
        if c.is_zero() || rest.is_empty() {
            return self.constant(c);
        }
        if c.is_one() && rest.len() == 1 && rest[0].1 == 1 {
            return rest[0].0;
        }
        if !c.is_one() {
            let cid = self.constant(c);
            rest.push((cid, 1));
            rest = Self::normalise(rest);
        }
        self.intern(Gate::Mul(rest))
    }

    pub fn sum(&mut self, ids: impl IntoIterator<Item = GateId>) -> GateId {
        self.add(ids.into_iter().map(|x| (x, 1)))
    }

    pub fn product(&mut self, ids: impl IntoIterator<Item = GateId>) -> GateId {
        self.mul(ids.into_iter().map(|x| (x, 1)))
    }

    pub fn scale(&mut self, c: Q, g: GateId) -> GateId {
        let cid = self.constant(c);
        self.mul([(cid, 1), (g, 1)])
    }

    /// Linear combination Σ c_i · g_i.
    pub fn linear(&mut self, terms: impl IntoIterator<Item = (Q, GateId)>) -> GateId {
        let parts: Vec<GateId> = terms.into_iter().map(|(c, g)| self.scale(c, g)).collect();
        self.sum(parts)
    }

    /// Attaches a semantic key. Inputs, constants and aux gates carry
    /// implicit keys and are skipped.
    pub fn key(&mut self, g: GateId, key: GateKey) {
        if matches!(self.gates[g], Gate::Add(_) | Gate::Mul(_)) && !self.keys[g].contains(&key) {
            self.keys[g].push(key);
        }
    }

    /// Copies `c` into this builder, substituting aux variables via `aux`
    /// (None keeps the aux gate) and prefixing key tags. Returns the image
    /// of `c`'s output.
    pub fn import(&mut self, c: &Circuit, aux: &dyn Fn(u32) -> Option<Q>, key_prefix: &str) -> GateId {
        assert_eq!((c.n, c.m), (self.n, self.m), "imported circuit has different dimensions");
        let mut map = Vec::with_capacity(c.gates.len());
        for (i, g) in c.gates.iter().enumerate() {
            let id = match g {
                Gate::Input(r, s) => self.input(*r as usize, *s as usize),
                Gate::Const(q) => self.constant(q.clone()),
                Gate::Aux(a) => match aux(*a) {
                    Some(q) => self.constant(q),
                    None => self.aux(*a as usize),
                },
                Gate::Add(ch) => {
                    let w: Vec<Wire> = ch.iter().map(|&(x, d)| (map[x], d)).collect();
                    self.add(w)
                }
                Gate::Mul(ch) => {
                    let w: Vec<Wire> = ch.iter().map(|&(x, d)| (map[x], d)).collect();
                    self.mul(w)
                }
            };
            for k in &c.keys[i] {
                self.key(id, GateKey::new(format!("{key_prefix}{}", k.tag), k.support.clone()));
            }
            map.push(id);
        }
        map[c.output]
    }

    /// Keeps only gates reachable from `output`, renumbered in order.
    pub fn finish(self, output: GateId) -> Circuit {
        let mut reach = vec![false; self.gates.len()];
        reach[output] = true;
        for i in (0..=output).rev() {
            if reach[i] {
                for &(x, _) in self.gates[i].children() {
                    reach[x] = true;
                }
            }
        }
        let mut map = vec![usize::MAX; self.gates.len()];
        let mut gates = Vec::new();
        let mut keys = Vec::new();
        for (i, (g, k)) in self.gates.into_iter().zip(self.keys).enumerate() {
            if !reach[i] {
                continue;
            }
            map[i] = gates.len();
            let g = match g {
                Gate::Add(ch) => Gate::Add(ch.into_iter().map(|(x, d)| (map[x], d)).collect()),
                Gate::Mul(ch) => Gate::Mul(ch.into_iter().map(|(x, d)| (map[x], d)).collect()),
                other => other,
            };
            let mut k = k;
            k.sort();
            gates.push(g);
            keys.push(k);
        }
        Circuit { n: self.n, m: self.m, group: self.group, gates, keys, output: map[output] }
    }
}

impl Circuit {
    /// Rebuilds through the interning builder (merges structural duplicates).
    pub fn reinterned(&self) -> Circuit {
        let mut b = CircuitBuilder::new(self.n, self.m, self.group);
        let out = b.import(self, &|_| None, "");
        b.finish(out)
    }

    /// Whether a value is a machine-friendly integer (used by reports).
    pub fn is_integer_valued_const(q: &Q) -> bool {
        q.denom().is_one() && q.numer().abs() < BigInt::from(i64::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn size_examples() {
        let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
        let x = b.input(0, 0);
        let c = b.finish(x);
        assert_eq!(c.size(), 1);

        let mut b = CircuitBuilder::new(1, 1, Group::SymNM);
        let x = b.input(0, 0);
        let sq = b.mul([(x, 2)]);
        let c = b.finish(sq);
        assert_eq!(c.size(), 4);
        let host = WeightedHost::constant(1, 1, q(2));
        assert_eq!(c.evaluate(&host).unwrap(), q(4));
    }

    #[test]
    fn evaluation_examples() {
        let mut b = CircuitBuilder::new(2, 3, Group::SymNM);
        let x = b.input(0, 1);
        let c = b.finish(x);
        let host = WeightedHost::from_fn(2, 3, |i, j| q((10 * i + j) as i64));
        assert_eq!(c.evaluate(&host).unwrap(), q(1));
        let mut b = CircuitBuilder::new(2, 3, Group::SymNM);
        let k = b.constant(qf(3, 7));
        let c = b.finish(k);
        assert_eq!(c.evaluate(&host).unwrap(), qf(3, 7));
        assert!(c.evaluate(&WeightedHost::identity(2)).is_err());
    }

    #[test]
    fn folding_and_interning() {
        let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
        let x = b.input(0, 0);
        let y = b.input(1, 1);
        let s1 = b.sum([x, y]);
        let s2 = b.sum([y, x]);
        assert_eq!(s1, s2);
        let z = b.zero();
        assert_eq!(b.product([x, z]), z);
        let one = b.one();
        assert_eq!(b.product([x, one]), x);
        let two = b.constant(q(2));
        let three = b.constant(q(3));
        let six = b.product([two, three]);
        assert_eq!(b.const_value(six), Some(&q(6)));
    }

    #[test]
    fn scaled_and_big_paths_agree() {
        let mut b = CircuitBuilder::new(2, 2, Group::SymNM);
        let xs: Vec<_> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        let ids: Vec<_> = xs.iter().map(|&(i, j)| b.input(i, j)).collect();
        let p = b.mul(ids.iter().map(|&g| (g, 3)));
        let half = b.constant(qf(1, 2));
        let s = b.add([(p, 2), (half, 1), (ids[0], 5)]);
        let c = b.finish(s);
        let host = WeightedHost::from_fn(2, 2, |i, j| qf((i + 2 * j) as i64 - 1, 3));
        assert_eq!(c.evaluate_scaled(&host, &[]).unwrap(), c.evaluate_big(&host, &[]));
        let huge = WeightedHost::constant(2, 2, qf(1 << 40, 3));
        assert_eq!(c.evaluate(&huge).unwrap(), c.evaluate_big(&huge, &[]));
    }
}
