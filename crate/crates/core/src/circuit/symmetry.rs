//! Key-guided symmetry verification, orbits and supports.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{Circuit, Gate, GateId, GateKey, Group, Point, Wire};
use crate::error::{Error, Result};
use crate::graph::permutations;

/// A group element: `rows` acts on [n]; `cols` on [m] (ignored for the diagonal group).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perm {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize, m: usize) -> Self {
        Perm { rows: (0..n).collect(), cols: (0..m).collect() }
    }
}

fn is_perm(p: &[usize], n: usize) -> bool {
    if p.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

fn normalised(kind_add: bool, wires: impl Iterator<Item = Wire>) -> Gate {
    let mut v: Vec<Wire> = wires.collect();
    v.sort_unstable();
    let mut out: Vec<Wire> = Vec::with_capacity(v.len());
    for (x, d) in v {
        match out.last_mut() {
            Some((y, e)) if *y == x => *e += d,
            _ => out.push((x, d)),
        }
    }
    if kind_add {
        Gate::Add(out)
    } else {
        Gate::Mul(out)
    }
}

/// Indexes a circuit once so many permutations can be checked cheaply.
pub struct SymmetryChecker<'a> {
    c: &'a Circuit,
    keys: HashMap<&'a GateKey, GateId>,
    structure: HashMap<Gate, GateId>,
    inputs: HashMap<(u32, u32), GateId>,
}

impl<'a> SymmetryChecker<'a> {
    pub fn new(c: &'a Circuit) -> Self {
        let mut keys = HashMap::new();
        let mut structure = HashMap::new();
        let mut inputs = HashMap::new();
        for (i, g) in c.gates.iter().enumerate() {
            for k in &c.keys[i] {
                keys.insert(k, i);
            }
            match g {
                Gate::Input(r, s) => {
                    inputs.insert((*r, *s), i);
                }
                Gate::Add(w) => {
                    structure.entry(normalised(true, w.iter().copied())).or_insert(i);
                }
                Gate::Mul(w) => {
                    structure.entry(normalised(false, w.iter().copied())).or_insert(i);
                }
                _ => {}
            }
        }
        SymmetryChecker { c, keys, structure, inputs }
    }

    fn map_point(&self, p: &Point, g: &Perm) -> Point {
        match (p, self.c.group) {
            (Point::L(i), _) => Point::L(g.rows[*i as usize] as u32),
            (Point::R(j), Group::SymNM) => Point::R(g.cols[*j as usize] as u32),
            (Point::R(j), Group::SymN) => Point::R(g.rows[*j as usize] as u32),
        }
    }

    /// The gate bijection extending `g`, or a violation report.
    pub fn apply(&self, g: &Perm) -> Result<Vec<GateId>> {
        let c = self.c;
        let cols = match c.group {
            Group::SymNM => &g.cols,
            Group::SymN => &g.rows,
        };
        if !is_perm(&g.rows, c.n) || !is_perm(cols, c.m) {
            return Err(Error::InvalidArgument("permutation has the wrong size or is not bijective".into()));
        }
        let mut img = vec![usize::MAX; c.gates.len()];
        for (i, gate) in c.gates.iter().enumerate() {
            let t = match gate {
                Gate::Input(r, s) => {
                    let (r2, s2) = (g.rows[*r as usize] as u32, cols[*s as usize] as u32);
                    *self.inputs.get(&(r2, s2)).ok_or_else(|| {
                        Error::Symmetry(format!("no input gate for x_({r2},{s2}), image of x_({r},{s})"))
                    })?
                }
                Gate::Const(_) | Gate::Aux(_) => i,
                Gate::Add(w) | Gate::Mul(w) => {
                    let is_add = matches!(gate, Gate::Add(_));
                    let mapped = normalised(is_add, w.iter().map(|&(x, d)| (img[x], d)));
                    let ks = &c.keys[i];
                    if ks.is_empty() {
                        *self
                            .structure
                            .get(&mapped)
                            .ok_or_else(|| Error::Symmetry(format!("no gate matches the image of gate {i}")))?
                    } else {
                        let mut target = None;
                        for k in ks {
                            let k2 = GateKey::new(k.tag.clone(), k.support.iter().map(|p| self.map_point(p, g)).collect());
                            let t = *self
                                .keys
                                .get(&k2)
                                .ok_or_else(|| Error::Symmetry(format!("relabelled key `{}` of gate {i} is absent", k.tag)))?;
                            if *target.get_or_insert(t) != t {
                                return Err(Error::Symmetry(format!("keys of gate {i} map to different gates")));
                            }
                        }
                        let t = target.unwrap();
                        let tg = &c.gates[t];
                        let tnorm = normalised(matches!(tg, Gate::Add(_)), tg.children().iter().copied());
                        if tnorm != mapped {
                            return Err(Error::Symmetry(format!("wires of gate {i} are not preserved")));
                        }
                        t
                    }
                }
            };
            img[i] = t;
        }
        let mut seen = vec![false; img.len()];
        for &t in &img {
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::Symmetry(format!("gate {t} is the image of two gates")));
            }
        }
        Ok(img)
    }

    /// One transposition and one full cycle per side.
    pub fn generators(&self) -> Vec<Perm> {
        let (n, m) = (self.c.n, self.c.m);
        let mut out = Vec::new();
        let mut side = |len: usize, rows: bool| {
            if len < 2 {
                return;
            }
            let mut t: Vec<usize> = (0..len).collect();
            t.swap(0, 1);
            let cyc: Vec<usize> = (0..len).map(|i| (i + 1) % len).collect();
            for p in [t, cyc] {
                let mut g = Perm::identity(n, m);
                if rows {
                    g.rows = p;
                } else {
                    g.cols = p;
                }
                out.push(g);
            }
        };
        side(n, true);
        if self.c.group == Group::SymNM {
            side(m, false);
        }
        out
    }

    /// Generators of the pointwise stabilizer of a point set.
    fn stabilizer_generators(&self, fixed: &BTreeSet<Point>) -> Vec<Perm> {
        let (n, m) = (self.c.n, self.c.m);
        let mut out = Vec::new();
        let mut side = |free: Vec<usize>, rows: bool| {
            if free.len() < 2 {
                return;
            }
            let len = free.len();
            let mut base: Vec<usize> = (0..if rows { n } else { m }).collect();
            base.swap(free[0], free[1]);
            let mut cyc: Vec<usize> = (0..if rows { n } else { m }).collect();
            for i in 0..len {
                cyc[free[i]] = free[(i + 1) % len];
            }
            for p in [base, cyc] {
                let mut g = Perm::identity(n, m);
                if rows {
                    g.rows = p;
                } else {
                    g.cols = p;
                }
                out.push(g);
            }
        };
        match self.c.group {
            Group::SymNM => {
                side((0..n).filter(|&i| !fixed.contains(&Point::L(i as u32))).collect(), true);
                side((0..m).filter(|&j| !fixed.contains(&Point::R(j as u32))).collect(), false);
            }
            Group::SymN => {
                side(
                    (0..n)
                        .filter(|&i| !fixed.contains(&Point::L(i as u32)) && !fixed.contains(&Point::R(i as u32)))
                        .collect(),
                    true,
                );
            }
        }
        out
    }
}

pub fn apply_permutation(c: &Circuit, g: &Perm) -> Result<Vec<GateId>> {
    SymmetryChecker::new(c).apply(g)
}

/// Checks that every generator of the group extends to a circuit automorphism.
pub fn verify_symmetry(c: &Circuit) -> Result<()> {
    let ch = SymmetryChecker::new(c);
    for g in ch.generators() {
        ch.apply(&g)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrbitMode {
    Annotated,
    Exact,
}

pub const EXACT_ORBIT_CAP: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct OrbitStats {
    pub mode: OrbitMode,
    /// Largest support used for the bound (key supports, or minimal supports in exact mode).
    pub max_support: usize,
    /// (n+m)^max_support.
    pub orbit_bound: u128,
    pub max_orbit: Option<usize>,
    #[serde(skip)]
    pub orbit_sizes: Option<Vec<usize>>,
    /// Exact mode: every key tuple was confirmed to be a support.
    pub supports_verified: Option<bool>,
    /// Exact mode: all minimal supports satisfy the size hypothesis that makes them unique.
    pub minimal_support_unique: Option<bool>,
    pub unkeyed_internal_gates: usize,
}

fn natural_support(c: &Circuit, i: GateId) -> Option<BTreeSet<Point>> {
    match &c.gates[i] {
        Gate::Input(r, s) => Some(match c.group {
            Group::SymNM => BTreeSet::from([Point::L(*r), Point::R(*s)]),
            Group::SymN => BTreeSet::from([Point::L(*r), Point::L(*s)]),
        }),
        Gate::Const(_) | Gate::Aux(_) => Some(BTreeSet::new()),
        _ => c.keys[i]
            .iter()
            .map(|k| {
                k.support
                    .iter()
                    .map(|p| match (p, c.group) {
                        (Point::R(j), Group::SymN) => Point::L(*j),
                        _ => *p,
                    })
                    .collect::<BTreeSet<Point>>()
            })
            .min_by_key(|s| s.len()),
    }
}

fn find(uf: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while uf[r] != r {
        r = uf[r];
    }
    let mut y = x;
    while uf[y] != r {
        let nx = uf[y];
        uf[y] = r;
        y = nx;
    }
    r
}

pub fn orbit_stats(c: &Circuit, mode: OrbitMode) -> Result<OrbitStats> {
    let supports: Vec<Option<BTreeSet<Point>>> = (0..c.gates.len()).map(|i| natural_support(c, i)).collect();
    let unkeyed = supports.iter().filter(|s| s.is_none()).count();
    let nm = c.n + if c.group == Group::SymNM { c.m } else { 0 };
    match mode {
        OrbitMode::Annotated => {
            let max_support = supports.iter().flatten().map(|s| s.len()).max().unwrap_or(0);
            Ok(OrbitStats {
                mode,
                max_support,
                orbit_bound: (nm as u128).saturating_pow(max_support as u32),
                max_orbit: None,
                orbit_sizes: None,
                supports_verified: None,
                minimal_support_unique: None,
                unkeyed_internal_gates: unkeyed,
            })
        }
        OrbitMode::Exact => {
            if c.n + c.m > EXACT_ORBIT_CAP {
                return Err(Error::cap("n+m for exact orbit mode", c.n + c.m, EXACT_ORBIT_CAP));
            }
            let ch = SymmetryChecker::new(c);
            let len = c.gates.len();
            let mut uf: Vec<usize> = (0..len).collect();
            for g in ch.generators() {
                let img = ch.apply(&g)?;
                for (i, &t) in img.iter().enumerate() {
                    let (a, b) = (find(&mut uf, i), find(&mut uf, t));
                    if a != b {
                        uf[a] = b;
                    }
                }
            }
            let mut count = vec![0usize; len];
            for i in 0..len {
                let r = find(&mut uf, i);
                count[r] += 1;
            }
            let orbit_sizes: Vec<usize> = (0..len).map(|i| count[find(&mut uf, i)]).collect();

            let mut cache: HashMap<BTreeSet<Point>, Vec<Vec<GateId>>> = HashMap::new();
            let mut fixes = |set: &BTreeSet<Point>, gate: GateId| -> Result<bool> {
                if !cache.contains_key(set) {
                    let imgs = ch.stabilizer_generators(set).iter().map(|g| ch.apply(g)).collect::<Result<Vec<_>>>()?;
                    cache.insert(set.clone(), imgs);
                }
                Ok(cache[set].iter().all(|img| img[gate] == gate))
            };
            let mut verified = true;
            let mut unique = true;
            let mut max_support = 0;
            for i in 0..len {
                let Some(s) = &supports[i] else { continue };
                if !fixes(s, i)? {
                    verified = false;
                    max_support = max_support.max(nm);
                    continue;
                }
                let mut cur = s.clone();
                for p in s {
                    let mut smaller = cur.clone();
                    smaller.remove(p);
                    if fixes(&smaller, i)? {
                        cur = smaller;
                    }
                }
                let l = cur.iter().filter(|p| matches!(p, Point::L(_))).count();
                let r = cur.len() - l;
                if 2 * l >= c.n.max(1) && l > 0 || 2 * r >= c.m.max(1) && r > 0 {
                    unique = false;
                }
                max_support = max_support.max(cur.len());
            }
            Ok(OrbitStats {
                mode,
                max_support,
                orbit_bound: (nm as u128).saturating_pow(max_support as u32),
                max_orbit: orbit_sizes.iter().copied().max(),
                orbit_sizes: Some(orbit_sizes),
                supports_verified: Some(verified),
                minimal_support_unique: Some(unique),
                unkeyed_internal_gates: unkeyed,
            })
        }
    }
}

/// Orbit sizes by applying every group element (small circuits only).
pub fn orbit_sizes_by_enumeration(c: &Circuit) -> Result<Vec<usize>> {
    let ch = SymmetryChecker::new(c);
    let rows = permutations(c.n);
    let cols = match c.group {
        Group::SymNM => permutations(c.m),
        Group::SymN => vec![(0..c.m).collect()],
    };
    let mut images: Vec<BTreeSet<GateId>> = vec![BTreeSet::new(); c.gates.len()];
    for r in &rows {
        for s in &cols {
            let img = ch.apply(&Perm { rows: r.clone(), cols: s.clone() })?;
            for (i, &t) in img.iter().enumerate() {
                images[i].insert(t);
            }
        }
    }
    Ok(images.iter().map(|s| s.len()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitBuilder;

    fn all_inputs_sum(n: usize, m: usize) -> Circuit {
        let mut b = CircuitBuilder::new(n, m, Group::SymNM);
        let ids: Vec<_> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect::<Vec<_>>();
        let g: Vec<_> = ids.into_iter().map(|(i, j)| b.input(i, j)).collect();
        let s = b.sum(g);
        b.finish(s)
    }

    #[test]
    fn identity_is_identity() {
        let c = all_inputs_sum(2, 2);
        let img = apply_permutation(&c, &Perm::identity(2, 2)).unwrap();
        assert_eq!(img, (0..c.gate_count()).collect::<Vec<_>>());
    }

    #[test]
    fn lone_input_is_not_symmetric() {
        let mut b = CircuitBuilder::new(2, 1, Group::SymNM);
        let x = b.input(0, 0);
        let c = b.finish(x);
        let g = Perm { rows: vec![1, 0], cols: vec![0] };
        assert!(matches!(apply_permutation(&c, &g), Err(Error::Symmetry(_))));
        assert!(verify_symmetry(&c).is_err());
    }

    #[test]
    fn input_layer_orbit() {
        let c = all_inputs_sum(2, 2);
        verify_symmetry(&c).unwrap();
        let st = orbit_stats(&c, OrbitMode::Exact).unwrap();
        let sizes = st.orbit_sizes.unwrap();
        for (i, g) in c.gates().iter().enumerate() {
            match g {
                Gate::Input(..) => assert_eq!(sizes[i], 4),
                _ => assert_eq!(sizes[i], 1),
            }
        }
        assert_eq!(sizes, orbit_sizes_by_enumeration(&c).unwrap());
    }
}
