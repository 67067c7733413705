//! Immanants: characters by Murnaghan–Nakayama, brute-force oracles, a
//! Sym_n-symmetric determinant circuit and Hartmann's reduction of imm_λ to
//! sums of determinants.

use std::collections::{BTreeMap, HashMap};

use num::bigint::BigInt;
use num::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, CircuitBuilder, GateId, GateKey, Group, Point};
use crate::error::{Error, Result};
use crate::graph::{permutations, WeightedHost};
use crate::rational::{binomial, factorial, fmt_q, random_q, solve_linear, vandermonde_inverse, Q};
use crate::synth::GRID_CAP;

pub const BRUTE_IMMANANT_CAP: usize = 8;
pub const ENUMERATION_CAP: usize = 200_000;

/// A partition of n: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntegerPartition(Vec<usize>);

impl IntegerPartition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition(parts))
    }

    /// Parses comma-separated parts such as `3,1,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| Error::InvalidArgument(format!("bad part `{p}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// b(λ) = n − #parts.
    pub fn b(&self) -> usize {
        self.size() - self.0.len()
    }

    /// Multiplicity α_ℓ of the part ℓ.
    pub fn multiplicity(&self, l: usize) -> usize {
        self.0.iter().filter(|&&p| p == l).count()
    }

    /// All partitions of n in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
            if rest == 0 {
                out.push(IntegerPartition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                go(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Number of permutations with this cycle type.
    pub fn class_size(&self) -> BigInt {
        let n = self.size();
        let mut denom = BigInt::one();
        for l in 1..=n {
            let a = self.multiplicity(l);
            denom *= BigInt::from(l).pow(a as u32) * factorial(a);
        }
        factorial(n) / denom
    }
}

impl std::fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Cycle lengths of a permutation, sorted decreasingly.
pub fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

pub fn sign(perm: &[usize]) -> i64 {
    if cycle_type(perm).iter().filter(|&&l| l % 2 == 0).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Murnaghan–Nakayama on beta-sets; memoised per (beta-set, remaining parts).
struct MnMemo(HashMap<(Vec<usize>, Vec<usize>), i64>);

impl MnMemo {
    fn chi(&mut self, beta: &[usize], rho: &[usize]) -> i64 {
        let Some((&r, rest)) = rho.split_first() else {
            return 1;
        };
        let key = (beta.to_vec(), rho.to_vec());
        if let Some(&v) = self.0.get(&key) {
            return v;
        }
        let mut total = 0;
        for (idx, &x) in beta.iter().enumerate() {
            if x < r || beta.contains(&(x - r)) {
                continue;
            }
            let between = beta.iter().filter(|&&y| y > x - r && y < x).count();
            let mut next = beta.to_vec();
            next[idx] = x - r;
            let v = self.chi(&next, rest);
            total += if between % 2 == 0 { v } else { -v };
        }
        self.0.insert(key, total);
        total
    }
}

/// χ^λ at the class of the given cycle type.
pub fn character_value(lambda: &IntegerPartition, cycle_type: &[usize]) -> Result<i64> {
    if cycle_type.contains(&0) {
        return Err(Error::InvalidArgument("cycle lengths must be positive".into()));
    }
    if cycle_type.iter().sum::<usize>() != lambda.size() {
        return Err(Error::DimensionMismatch(format!(
            "cycle type sums to {}, partition has size {}",
            cycle_type.iter().sum::<usize>(),
            lambda.size()
        )));
    }
    let s = lambda.0.len();
    let beta: Vec<usize> = lambda.0.iter().enumerate().map(|(i, &p)| p + s - 1 - i).collect();
    let mut rho = cycle_type.to_vec();
    rho.sort_unstable_by(|a, b| b.cmp(a));
    Ok(MnMemo(HashMap::new()).chi(&beta, &rho))
}

/// Rows indexed by irreducibles, columns by classes, both in the order of
/// [`IntegerPartition::all`].
pub fn character_table(n: usize) -> Vec<Vec<i64>> {
    let parts = IntegerPartition::all(n);
    parts.iter().map(|l| parts.iter().map(|c| character_value(l, c.parts()).expect("sizes agree")).collect()).collect()
}

/// Σ_classes |class| χ^λ χ^μ = n!·[λ = μ] for every pair.
pub fn check_orthogonality(n: usize) -> bool {
    let parts = IntegerPartition::all(n);
    let table = character_table(n);
    let sizes: Vec<BigInt> = parts.iter().map(|c| c.class_size()).collect();
    for (a, ra) in table.iter().enumerate() {
        for (b, rb) in table.iter().enumerate() {
            let s: BigInt = ra.iter().zip(rb).zip(&sizes).map(|((x, y), z)| BigInt::from(x * y) * z).sum();
            let want = if a == b { factorial(n) } else { BigInt::zero() };
            if s != want {
                return false;
            }
        }
    }
    true
}

fn check_square(m: &WeightedHost) -> Result<usize> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch(format!("matrix is {}x{}, not square", m.rows(), m.cols())));
    }
    if m.rows() > BRUTE_IMMANANT_CAP {
        return Err(Error::cap("matrix size for brute force over Sym_n", m.rows(), BRUTE_IMMANANT_CAP));
    }
    Ok(m.rows())
}

/// Σ_π f(π) ∏ M[i][π(i)] for a class function f given on permutations.
pub fn brute_class_sum(m: &WeightedHost, mut f: impl FnMut(&[usize]) -> Q) -> Result<Q> {
    let n = check_square(m)?;
    let mut total = Q::zero();
    for p in permutations(n) {
        let mut prod = Q::one();
        for (i, &j) in p.iter().enumerate() {
            prod *= m.get(i, j);
            if prod.is_zero() {
                break;
            }
        }
        if !prod.is_zero() {
            total += f(&p) * prod;
        }
    }
    Ok(total)
}

pub fn brute_force_immanant(lambda: &IntegerPartition, m: &WeightedHost) -> Result<Q> {
    if lambda.size() != m.rows() {
        return Err(Error::DimensionMismatch(format!("partition of {} for a {}x{} matrix", lambda.size(), m.rows(), m.cols())));
    }
    let mut memo: HashMap<Vec<usize>, i64> = HashMap::new();
    brute_class_sum(m, |p| {
        let ct = cycle_type(p);
        let v = *memo.entry(ct.clone()).or_insert_with(|| character_value(lambda, &ct).expect("sizes agree"));
        Q::from_integer(BigInt::from(v))
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_determinant(m: &WeightedHost) -> Result<Q> {
    let n = check_square(m)?;
    fn go(m: &WeightedHost, rows: &[usize], cols: &[usize]) -> Q {
        if rows.is_empty() {
            return Q::one();
        }
        let mut total = Q::zero();
        for (idx, &c) in cols.iter().enumerate() {
            let e = m.get(rows[0], c);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = e * go(m, &rows[1..], &rest);
            if idx % 2 == 0 {
                total += minor;
            } else {
                total -= minor;
            }
        }
        total
    }
    let idx: Vec<usize> = (0..n).collect();
    Ok(go(m, &idx, &idx))
}

/// f_I(π) = sgn(π) ∏_ℓ α_ℓ(π)^{i_ℓ}, with α_ℓ the number of ℓ-cycles.
pub fn f_i_value(index: &[usize], perm: &[usize]) -> Q {
    let ct = cycle_type(perm);
    let mut v = BigInt::from(sign(perm));
    for (l, &e) in index.iter().enumerate() {
        let alpha = ct.iter().filter(|&&c| c == l + 1).count();
        v *= BigInt::from(alpha).pow(e as u32);
    }
    Q::from_integer(v)
}

/// Faddeev–LeVerrier on the matrix with entries `weights(i,j) · x_ij`.
/// Gates are keyed by position when `keyed` is set.
fn determinant_into(b: &mut CircuitBuilder, n: usize, weights: &dyn Fn(usize, usize) -> Q, keyed: bool) -> GateId {
    let pt = |i: usize| Point::L(i as u32);
    let a: Vec<Vec<GateId>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let w = weights(i, j);
                    let x = b.input(i, j);
                    if w.is_one() {
                        x
                    } else {
                        b.scale(w, x)
                    }
                })
                .collect()
        })
        .collect();
    let one = b.one();
    let zero = b.zero();
    // M_1 = I, c_{n} = 1
    let mut mk: Vec<Vec<GateId>> = (0..n).map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect()).collect();
    let mut c_last = one;
    for k in 1..=n {
        if k > 1 {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let prev = mk.clone();
            for i in 0..n {
                for j in 0..n {
                    let am = product_entry(b, &a, &prev, i, j, k - 1, keyed);
                    let g = if i == j { b.sum([am, c_last]) } else { am };
                    if keyed {
                        b.key(g, GateKey::new(format!("det.M{k}"), vec![pt(i), pt(j)]));
                    }
                    mk[i][j] = g;
                }
            }
        }
        // c_{n-k} = -(1/k) tr(A M_k)
        let diag: Vec<GateId> = (0..n).map(|i| product_entry(b, &a, &mk, i, i, k, keyed)).collect();
        let tr = b.sum(diag);
        if keyed {
            b.key(tr, GateKey::new(format!("det.tr{k}"), vec![]));
        }
        c_last = b.scale(-Q::one() / Q::from_integer(BigInt::from(k)), tr);
        if keyed {
            b.key(c_last, GateKey::new(format!("det.c{k}"), vec![]));
        }
    }
    // det A = (-1)^n c_0
    if n % 2 == 0 {
        c_last
    } else {
        let d = b.scale(-Q::one(), c_last);
        if keyed {
            b.key(d, GateKey::new("det.out", vec![]));
        }
        d
    }
}

fn product_entry(b: &mut CircuitBuilder, a: &[Vec<GateId>], m: &[Vec<GateId>], i: usize, j: usize, k: usize, keyed: bool) -> GateId {
    let n = a.len();
    let terms: Vec<GateId> = (0..n)
        .map(|l| {
            let g = b.product([a[i][l], m[l][j]]);
            if keyed {
                b.key(g, GateKey::new(format!("det.P{k}"), vec![Point::L(i as u32), Point::L(l as u32), Point::L(j as u32)]));
            }
            g
        })
        .collect();
    let s = b.sum(terms);
    if keyed {
        b.key(s, GateKey::new(format!("det.AM{k}"), vec![Point::L(i as u32), Point::L(j as u32)]));
    }
    s
}

/// Determinant circuit over the diagonal action of Sym_n.
pub fn synth_symmetric_determinant(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("determinant needs n ≥ 1".into()));
    }
    let mut b = CircuitBuilder::new(n, n, Group::SymN);
    let out = determinant_into(&mut b, n, &|_, _| Q::one(), true);
    Ok(b.finish(out))
}

/// A directed cycle as its vertex sequence, smallest vertex first.
pub type Cycle = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleTupleFamily {
    pub n: usize,
    /// I = (i_1, …, i_m): i_ℓ cycles of length ℓ.
    pub index: Vec<usize>,
    /// Cycle lengths of the slots, in order.
    pub slot_lengths: Vec<usize>,
    pub tuples: Vec<Vec<Cycle>>,
}

impl CycleTupleFamily {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
}

/// ∏_ℓ (n!/(n−ℓ)!)^{i_ℓ}, saturating.
pub fn cycle_family_bound(n: usize, index: &[usize]) -> u128 {
    let mut out: u128 = 1;
    for (l, &e) in index.iter().enumerate() {
        let len = l + 1;
        let falling: u128 = if len > n { 0 } else { ((n - len + 1)..=n).map(|x| x as u128).product() };
        for _ in 0..e {
            out = out.saturating_mul(falling);
        }
    }
    out
}

/// All directed cycles of the given length on [n].
fn directed_cycles(n: usize, len: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    if len == 0 || len > n {
        return out;
    }
    fn go(n: usize, len: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Cycle>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in cur[0] + 1..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, len, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    for start in 0..n {
        let mut used = vec![false; n];
        used[start] = true;
        let mut cur = vec![start];
        go(n, len, &mut cur, &mut used, &mut out);
    }
    if len == 2 {
        out.dedup();
    }
    out
}

/// Tuples of directed cycles (slot ℓ-major) whose edge union is a partial
/// cycle cover; equal cycles may fill several slots.
pub fn enumerate_cycle_covers(n: usize, index: &[usize]) -> Result<CycleTupleFamily> {
    let bound = cycle_family_bound(n, index);
    if bound > ENUMERATION_CAP as u128 {
        return Err(Error::cap("cycle-tuple family bound", bound.min(usize::MAX as u128) as usize, ENUMERATION_CAP));
    }
    let slot_lengths: Vec<usize> = index.iter().enumerate().flat_map(|(l, &e)| std::iter::repeat_n(l + 1, e)).collect();
    let cycles: Vec<Vec<Cycle>> = (0..=index.len()).map(|l| directed_cycles(n, l)).collect();
    let mut tuples = Vec::new();
    fn compatible(c: &Cycle, chosen: &[Cycle]) -> bool {
        chosen.iter().all(|d| d == c || d.iter().all(|v| !c.contains(v)))
    }
    fn go(slots: &[usize], cycles: &[Vec<Cycle>], cur: &mut Vec<Cycle>, out: &mut Vec<Vec<Cycle>>) {
        if cur.len() == slots.len() {
            out.push(cur.clone());
            return;
        }
        for c in &cycles[slots[cur.len()]] {
            if compatible(c, cur) {
                cur.push(c.clone());
                go(slots, cycles, cur, out);
                cur.pop();
            }
        }
    }
    go(&slot_lengths, &cycles, &mut Vec::new(), &mut tuples);
    Ok(CycleTupleFamily { n, index: index.to_vec(), slot_lengths, tuples })
}

fn cycle_edges(c: &Cycle) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..c.len()).map(move |x| (c[x], c[(x + 1) % c.len()]))
}

/// S = Σ_{σ ∈ 𝒞} det A(σ) with the t-variables as aux inputs, slot s being
/// aux variable s.
pub fn synth_sum_of_determinants(n: usize, index: &[usize]) -> Result<Circuit> {
    let fam = enumerate_cycle_covers(n, index)?;
    let mut b = CircuitBuilder::new(n, n, Group::SymN);
    let mut dets = Vec::new();
    for tuple in &fam.tuples {
        let mut entry: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (slot, c) in tuple.iter().enumerate() {
            for e in cycle_edges(c) {
                entry.entry(e).or_default().push(slot);
            }
        }
        let a: Vec<Vec<GateId>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let x = b.input(i, j);
                        let mut f = vec![x];
                        for &s in entry.get(&(i, j)).map(|v| v.as_slice()).unwrap_or(&[]) {
                            f.push(b.aux(s));
                        }
                        b.product(f)
                    })
                    .collect()
            })
            .collect();
        dets.push(determinant_of_gates(&mut b, &a));
    }
    let out = b.sum(dets);
    Ok(b.finish(out))
}

/// Faddeev–LeVerrier on an arbitrary gate matrix, unkeyed.
fn determinant_of_gates(b: &mut CircuitBuilder, a: &[Vec<GateId>]) -> GateId {
    let n = a.len();
    let one = b.one();
    let zero = b.zero();
    let mut mk: Vec<Vec<GateId>> = (0..n).map(|i| (0..n).map(|j| if i == j { one } else { zero }).collect()).collect();
    let mut c_last = one;
    for k in 1..=n {
        if k > 1 {
            let prev = mk.clone();
            for i in 0..n {
                for j in 0..n {
                    let am = product_entry(b, a, &prev, i, j, k - 1, false);
                    mk[i][j] = if i == j { b.sum([am, c_last]) } else { am };
                }
            }
        }
        let diag: Vec<GateId> = (0..n).map(|i| product_entry(b, a, &mk, i, i, k, false)).collect();
        let tr = b.sum(diag);
        c_last = b.scale(-Q::one() / Q::from_integer(BigInt::from(k)), tr);
    }
    if n % 2 == 0 {
        c_last
    } else {
        b.scale(-Q::one(), c_last)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyStats {
    pub index: Vec<usize>,
    pub tuples: usize,
    pub claim_bound: String,
    pub grid: usize,
}

/// Emits imm_{f_I}: the coefficient of ∏ (t_ℓ^{(k)})^ℓ in S, by
/// interpolation on the grid 0..=ℓ per variable. Determinants of equal
/// weighted matrices are shared through `memo`.
fn imm_fi_into(
    b: &mut CircuitBuilder,
    n: usize,
    index: &[usize],
    memo: &mut HashMap<Vec<((usize, usize), Q)>, GateId>,
) -> Result<(GateId, FamilyStats)> {
    let fam = enumerate_cycle_covers(n, index)?;
    let slots = &fam.slot_lengths;
    let grid: usize = slots.iter().map(|l| l + 1).try_fold(1usize, |a, x| a.checked_mul(x)).unwrap_or(usize::MAX);
    if grid > GRID_CAP {
        return Err(Error::cap("interpolation grid size", grid, GRID_CAP));
    }
    let stats = FamilyStats {
        index: index.to_vec(),
        tuples: fam.len(),
        claim_bound: cycle_family_bound(n, index).to_string(),
        grid,
    };
    let inverses: HashMap<usize, Vec<Vec<Q>>> = slots
        .iter()
        .map(|&l| Ok((l, vandermonde_inverse(&(0..=l).map(|p| Q::from_integer(BigInt::from(p))).collect::<Vec<_>>())?)))
        .collect::<Result<_>>()?;
    let edge_slots: Vec<BTreeMap<(usize, usize), Vec<usize>>> = fam
        .tuples
        .iter()
        .map(|tuple| {
            let mut entry: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
            for (slot, c) in tuple.iter().enumerate() {
                for e in cycle_edges(c) {
                    entry.entry(e).or_default().push(slot);
                }
            }
            entry
        })
        .collect();
    let mut terms = Vec::new();
    let mut p = vec![0usize; slots.len()];
    for _ in 0..grid {
        let mut w = Q::one();
        for (s, &l) in slots.iter().enumerate() {
            w *= &inverses[&l][l][p[s]];
        }
        if !w.is_zero() {
            let mut dets = Vec::with_capacity(edge_slots.len());
            for entry in &edge_slots {
                let mut weights: Vec<((usize, usize), Q)> = Vec::new();
                for (&e, ss) in entry {
                    let v: usize = ss.iter().map(|&s| p[s]).product();
                    if v != 1 {
                        weights.push((e, Q::from_integer(BigInt::from(v))));
                    }
                }
                let g = match memo.get(&weights) {
                    Some(&g) => g,
                    None => {
                        let table: HashMap<(usize, usize), Q> = weights.iter().cloned().collect();
                        let g = determinant_into(b, n, &|i, j| table.get(&(i, j)).cloned().unwrap_or_else(Q::one), weights.is_empty());
                        memo.insert(weights, g);
                        g
                    }
                };
                dets.push(g);
            }
            let s = b.sum(dets);
            terms.push(b.scale(w, s));
        }
        for s in (0..p.len()).rev() {
            p[s] += 1;
            if p[s] <= slots[s] {
                break;
            }
            p[s] = 0;
        }
    }
    Ok((b.sum(terms), stats))
}

/// Circuit for imm_{f_I} on n×n matrices.
pub fn synth_imm_fi(index: &[usize], n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut b = CircuitBuilder::new(n, n, Group::SymN);
    let (out, _) = imm_fi_into(&mut b, n, index, &mut HashMap::new())?;
    Ok(b.finish(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ImmanantCaps {
    pub max_b: usize,
    pub max_n: usize,
}

impl Default for ImmanantCaps {
    fn default() -> Self {
        ImmanantCaps { max_b: 3, max_n: 6 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmanantSynthesis {
    #[serde(skip)]
    pub circuit: Circuit,
    pub lambda: IntegerPartition,
    pub n: usize,
    pub b: usize,
    pub size: usize,
    pub gates: usize,
    /// (k_1, …, k_m) ↦ χ(k), only nonzero entries.
    pub chi: Vec<(Vec<usize>, String)>,
    /// I ↦ combined coefficient of imm_{f_I}.
    pub f_i_coefficients: Vec<(Vec<usize>, String)>,
    pub families: Vec<FamilyStats>,
    pub calibration_rows: usize,
    pub hartmann_bound: String,
    pub notes: Vec<String>,
}

/// The set ℐ: tuples (k_1..k_m) with m−r+1 ≤ Σ ℓ k_ℓ ≤ m.
pub fn hartmann_index_set(lambda: &IntegerPartition) -> Vec<Vec<usize>> {
    let m = lambda.b();
    let r = lambda.parts()[0];
    let lo = (m + 1).saturating_sub(r);
    let mut out = Vec::new();
    fn go(l: usize, m: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, lo: usize) {
        if l > m {
            let w: usize = cur.iter().enumerate().map(|(i, &k)| (i + 1) * k).sum();
            if w >= lo {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=budget / l {
            cur.push(k);
            go(l + 1, m, budget - k * l, cur, out, lo);
            cur.pop();
        }
    }
    go(1, m, m, &mut Vec::new(), &mut out, lo);
    out
}

/// Coefficients of binom(α, k) as a polynomial in α, lowest degree first.
fn binomial_poly(k: usize) -> Vec<Q> {
    let mut p = vec![Q::one()];
    for j in 0..k {
        // multiply by (α − j)
        let mut next = vec![Q::zero(); p.len() + 1];
        for (e, c) in p.iter().enumerate() {
            next[e + 1] += c;
            next[e] -= c * Q::from_integer(BigInt::from(j));
        }
        p = next;
    }
    let f = Q::from_integer(factorial(k));
    p.into_iter().map(|c| c / &f).collect()
}

/// η(k): the monomials c·∏ α_ℓ^{i_ℓ} of ∏ binom(α_ℓ, k_ℓ).
pub fn eta(k: &[usize]) -> Vec<(Q, Vec<usize>)> {
    let mut out = vec![(Q::one(), Vec::new())];
    for &kl in k {
        let poly = binomial_poly(kl);
        let mut next = Vec::new();
        for (c, idx) in &out {
            for (e, pc) in poly.iter().enumerate() {
                if !pc.is_zero() {
                    let mut i2 = idx.clone();
                    i2.push(e);
                    next.push((c * pc, i2));
                }
            }
        }
        out = next;
    }
    out
}

fn trim_index(index: &[usize]) -> Vec<usize> {
    let mut v = index.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Estimated construction cost of the f_I circuits behind one k ∈ ℐ.
fn column_cost(n: usize, k: &[usize]) -> f64 {
    k.iter()
        .enumerate()
        .map(|(l, &e)| {
            let len = l + 1;
            let cycles = cycle_family_bound(n, &{
                let mut v = vec![0; len];
                v[len - 1] = 1;
                v
            }) as f64
                / len as f64;
            (cycles * (len + 1) as f64).powi(e as i32)
        })
        .product()
}

/// Hartmann's circuit for imm_λ, with χ(k) calibrated by an exact linear
/// solve against the brute-force immanant on random matrices and then
/// verified on every conjugacy class.
pub fn synth_immanant(lambda: &IntegerPartition, caps: ImmanantCaps, seed: u64) -> Result<ImmanantSynthesis> {
    let n = lambda.size();
    if n == 0 {
        return Err(Error::InvalidArgument("empty partition".into()));
    }
    if n > caps.max_n {
        return Err(Error::cap("immanant size n", n, caps.max_n));
    }
    if lambda.b() > caps.max_b {
        return Err(Error::CapExceeded {
            what: "b(λ) = n − #parts".into(),
            got: lambda.b(),
            cap: caps.max_b,
            hint: " (circuit size grows like n^{6b+4})".into(),
        });
    }
    let m = lambda.b();
    let mut cols = hartmann_index_set(lambda);
    cols.sort_by(|a, b| column_cost(n, a).total_cmp(&column_cost(n, b)).then_with(|| a.cmp(b)));
    let etas: Vec<Vec<(Q, Vec<usize>)>> = cols.iter().map(|k| eta(k)).collect();

    // calibration rows on random rational matrices
    let classes = IntegerPartition::all(n);
    let rows = cols.len().max(classes.len()) + 4;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Vec::with_capacity(rows);
    let mut rhs = Vec::with_capacity(rows);
    for _ in 0..rows {
        let mat = WeightedHost::from_fn(n, n, |_, _| random_q(&mut rng, 5, 4));
        let mut fi_cache: HashMap<Vec<usize>, Q> = HashMap::new();
        let mut row = Vec::with_capacity(cols.len());
        for eta_k in &etas {
            let mut v = Q::zero();
            for (c, idx) in eta_k {
                let idx = trim_index(idx);
                let val = match fi_cache.get(&idx) {
                    Some(x) => x.clone(),
                    None => {
                        let x = brute_class_sum(&mat, |p| f_i_value(&idx, p))?;
                        fi_cache.insert(idx.clone(), x.clone());
                        x
                    }
                };
                v += c * val;
            }
            row.push(v);
        }
        a.push(row);
        rhs.push(brute_force_immanant(lambda, &mat)?);
    }
    let chi = solve_linear(&a, &rhs).ok_or_else(|| Error::Calibration(format!("no χ(k) over ℐ reproduces imm_{lambda} on {rows} random matrices")))?;

    // exact check on every class: sgn(ρ) Σ_k χ(k) ∏ binom(α_ℓ(ρ), k_ℓ) = χ^λ(ρ)
    for rho in &classes {
        let sgn = if rho.parts().iter().filter(|&&l| l % 2 == 0).count() % 2 == 0 { 1 } else { -1 };
        let mut v = Q::zero();
        for (k, c) in cols.iter().zip(&chi) {
            let mut term = c.clone();
            for (l, &kl) in k.iter().enumerate() {
                term *= Q::from_integer(binomial(rho.multiplicity(l + 1), kl));
            }
            v += term;
        }
        let want = Q::from_integer(BigInt::from(character_value(lambda, rho.parts())? * sgn));
        if v != want {
            return Err(Error::Calibration(format!("calibrated χ disagrees with χ^{lambda} on class {rho}")));
        }
    }

    let mut combined: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
    for (eta_k, c) in etas.iter().zip(&chi) {
        if c.is_zero() {
            continue;
        }
        for (e, idx) in eta_k {
            *combined.entry(trim_index(idx)).or_insert_with(Q::zero) += c * e;
        }
    }
    combined.retain(|_, v| !v.is_zero());

    let mut b = CircuitBuilder::new(n, n, Group::SymN);
    let mut memo = HashMap::new();
    let mut parts = Vec::new();
    let mut families = Vec::new();
    for (idx, c) in &combined {
        let (g, stats) = imm_fi_into(&mut b, n, idx, &mut memo)?;
        let tag = idx.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".");
        b.key(g, GateKey::new(format!("imm.f{tag}"), vec![]));
        parts.push((c.clone(), g));
        families.push(stats);
    }
    let out = b.linear(parts);
    b.key(out, GateKey::new("imm.out", vec![]));
    let circuit = b.finish(out);

    let s = lambda.parts().len();
    let hb = BigInt::from(n).pow((6 * m + 4) as u32) * BigInt::from(m).pow(m as u32);
    Ok(ImmanantSynthesis {
        size: circuit.size(),
        gates: circuit.gate_count(),
        lambda: lambda.clone(),
        n,
        b: m,
        chi: cols.iter().zip(&chi).filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), fmt_q(c))).collect(),
        f_i_coefficients: combined.iter().map(|(k, c)| (k.clone(), fmt_q(c))).collect(),
        families,
        calibration_rows: rows,
        hartmann_bound: format!("n^(6(n-s)+4)·(n-s)^(n-s) = {hb} (s = {s})"),
        notes: vec!["length-1 cycles are self-loops on x_ii; α_1 counts fixed points".into()],
        circuit,
    })
}

/// Exact value of a small integer-valued rational as i64.
pub fn to_i64(v: &Q) -> Option<i64> {
    if v.is_integer() {
        v.numer().to_i64()
    } else {
        None
    }
}

/// Largest absolute entry of a character table row.
pub fn max_abs_character(lambda: &IntegerPartition) -> i64 {
    IntegerPartition::all(lambda.size())
        .iter()
        .map(|c| character_value(lambda, c.parts()).expect("sizes agree"))
        .map(|v| BigInt::from(v).abs().to_i64().unwrap_or(i64::MAX))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::verify_symmetry;
    use crate::rational::q;

    fn p(v: &[usize]) -> IntegerPartition {
        IntegerPartition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn character_examples() {
        assert_eq!(character_value(&p(&[4]), &[2, 1, 1]).unwrap(), 1);
        assert_eq!(character_value(&p(&[1, 1, 1, 1]), &[4]).unwrap(), -1);
        assert_eq!(character_value(&p(&[1, 1, 1]), &[3]).unwrap(), 1);
        assert_eq!(character_value(&p(&[2, 1]), &[1, 1, 1]).unwrap(), 2);
        assert_eq!(character_value(&p(&[2, 1]), &[3]).unwrap(), -1);
        assert_eq!(character_value(&p(&[3, 2]), &[1, 1, 1, 1, 1]).unwrap(), 5);
        assert!(character_value(&p(&[2, 1]), &[2]).is_err());
        for n in 1..=6 {
            assert!(check_orthogonality(n));
        }
    }

    #[test]
    fn brute_examples() {
        let ones = WeightedHost::constant(3, 3, q(1));
        assert_eq!(brute_force_immanant(&p(&[3]), &ones).unwrap(), q(6));
        let id = WeightedHost::identity(3);
        assert_eq!(brute_force_immanant(&p(&[1, 1, 1]), &id).unwrap(), q(1));
        assert_eq!(brute_force_immanant(&p(&[2, 1]), &id).unwrap(), q(2));
    }

    #[test]
    fn determinant_circuit() {
        for n in 1..=4 {
            let c = synth_symmetric_determinant(n).unwrap();
            verify_symmetry(&c).unwrap();
            assert_eq!(c.evaluate(&WeightedHost::identity(n)).unwrap(), q(1));
            assert_eq!(c.evaluate(&WeightedHost::constant(n, n, q(1))).unwrap(), if n == 1 { q(1) } else { q(0) });
        }
    }

    #[test]
    fn cycle_families() {
        assert_eq!(enumerate_cycle_covers(3, &[0, 0, 1]).unwrap().len(), 2);
        assert_eq!(enumerate_cycle_covers(2, &[0, 1]).unwrap().len(), 1);
        assert_eq!(enumerate_cycle_covers(3, &[3]).unwrap().len(), 27);
        assert_eq!(enumerate_cycle_covers(4, &[0, 2]).unwrap().len(), 6 + 6);
    }

    #[test]
    fn imm_fi_examples() {
        let swap = WeightedHost::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(synth_imm_fi(&[0, 1], 2).unwrap().evaluate(&swap).unwrap(), q(-1));
        assert_eq!(synth_imm_fi(&[1], 2).unwrap().evaluate(&WeightedHost::identity(2)).unwrap(), q(2));
        let m = WeightedHost::from_rows(vec![vec![q(2), q(3)], vec![q(5), q(7)]]).unwrap();
        assert_eq!(synth_imm_fi(&[], 2).unwrap().evaluate(&m).unwrap(), q(-1));
    }

    #[test]
    fn hartmann_pieces() {
        assert_eq!(hartmann_index_set(&p(&[2, 1])), vec![vec![0], vec![1]]);
        assert_eq!(hartmann_index_set(&p(&[1, 1, 1])), vec![Vec::<usize>::new()]);
        let e = eta(&[2]);
        assert_eq!(e, vec![(Q::new((-1).into(), 2.into()), vec![1]), (Q::new(1.into(), 2.into()), vec![2])]);
    }
}
