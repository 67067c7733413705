//! Sparse multivariate polynomials over ℚ and circuit identity testing.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::graph::{permutations, BipartitePattern, WeightedHost};
use crate::partition::{enumerate_partitions, moebius};
use crate::rational::{fmt_q, Q};

/// Exponent vectors over a fixed variable list; x_{ij} in row-major order,
/// followed by any aux variables. No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u16>, Q>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        SparsePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        SparsePolynomial { nvars, terms: BTreeMap::from([(e, Q::one())]) }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u16>, Q)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u16>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn terms(&self) -> &BTreeMap<Vec<u16>, Q> {
        &self.terms
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coefficient(&self, e: &[u16]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }
    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        SparsePolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc: HashMap<Vec<u16>, Q> = HashMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(Q::zero) += c1 * c2;
            }
        }
        SparsePolynomial { nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::constant(self.nvars, Q::one());
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    /// Evaluates with x_{ij} from the host and the trailing variables from `aux`.
    pub fn evaluate(&self, host: &WeightedHost, aux: &[Q]) -> Q {
        let vals: Vec<&Q> = host.entries().iter().chain(aux.iter()).collect();
        assert!(vals.len() >= self.nvars, "not enough values for all variables");
        self.evaluate_values(&vals)
    }

    pub fn evaluate_values(&self, vals: &[&Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= num::pow::pow(vals[i].clone(), x as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Sorted `exponent-vector : p/q` lines.
    pub fn to_golden(&self) -> String {
        let mut s = String::new();
        for (e, c) in &self.terms {
            let ev: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{} : {}\n", ev.join(" "), fmt_q(c)));
        }
        s
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_golden())
    }
}

/// Sets every nonzero exponent to 1 and merges like monomials.
pub fn multilinearize(p: &SparsePolynomial) -> SparsePolynomial {
    SparsePolynomial::from_terms(
        p.nvars,
        p.terms.iter().map(|(e, c)| (e.iter().map(|&x| x.min(1)).collect(), c.clone())),
    )
}

#[derive(Debug, Clone, Copy)]
pub struct ExpandCaps {
    pub max_terms: usize,
    pub max_degree: usize,
}

impl Default for ExpandCaps {
    fn default() -> Self {
        ExpandCaps { max_terms: 200_000, max_degree: 64 }
    }
}

/// Exact expansion of a circuit into a sparse polynomial.
pub fn expand_circuit(c: &Circuit, caps: ExpandCaps) -> Result<SparsePolynomial> {
    let deg = c.degree();
    if deg > caps.max_degree {
        return Err(Error::cap("circuit degree for expansion", deg, caps.max_degree));
    }
    let nv = c.rows() * c.cols() + c.aux_count();
    let gates = c.gates();
    let mut remaining = c.out_degrees();
    let mut vals: Vec<Option<SparsePolynomial>> = vec![None; gates.len()];
    for (i, g) in gates.iter().enumerate() {
        let p = match g {
            Gate::Input(r, s) => SparsePolynomial::var(nv, *r as usize * c.cols() + *s as usize),
            Gate::Const(q) => SparsePolynomial::constant(nv, q.clone()),
            Gate::Aux(a) => SparsePolynomial::var(nv, c.rows() * c.cols() + *a as usize),
            Gate::Add(w) => {
                let mut s = SparsePolynomial::zero(nv);
                for &(x, d) in w {
                    let child = vals[x].as_ref().expect("child expanded");
                    s = s.add(&child.scale(&Q::from_integer(BigInt::from(d))));
                }
                s
            }
            Gate::Mul(w) => {
                let mut s = SparsePolynomial::constant(nv, Q::one());
                for &(x, d) in w {
                    let child = vals[x].as_ref().expect("child expanded");
                    s = s.mul(&child.pow(d));
                    if s.len() > caps.max_terms {
                        return Err(Error::cap("monomials during expansion", s.len(), caps.max_terms));
                    }
                }
                s
            }
        };
        if p.len() > caps.max_terms {
            return Err(Error::cap("monomials during expansion", p.len(), caps.max_terms));
        }
        for &(x, _) in g.children() {
            remaining[x] -= 1;
            if remaining[x] == 0 {
                vals[x] = None;
            }
        }
        vals[i] = Some(p);
    }
    Ok(vals[c.output()].take().expect("output expanded"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Expansions coincide.
    Equal,
    /// A distinguishing host (or the expansion difference when found symbolically).
    Different { witness: Option<WeightedHost>, note: String },
    /// Agreement on every random trial; never a proof of equality.
    Indistinguishable { trials: usize, degree_bound: usize, note: String },
}

impl Verdict {
    pub fn is_different(&self) -> bool {
        matches!(self, Verdict::Different { .. })
    }
}

/// Compares two circuits exactly when both expand under the caps,
/// otherwise by evaluation at random integer points from [0, 2^61).
pub fn circuits_equal(c1: &Circuit, c2: &Circuit, trials: usize, seed: u64, caps: Option<ExpandCaps>) -> Result<Verdict> {
    if (c1.rows(), c1.cols()) != (c2.rows(), c2.cols()) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            c1.rows(),
            c1.cols(),
            c2.rows(),
            c2.cols()
        )));
    }
    if let Some(caps) = caps {
        if let (Ok(p1), Ok(p2)) = (expand_circuit(c1, caps), expand_circuit(c2, caps)) {
            return Ok(if p1 == p2 {
                Verdict::Equal
            } else {
                Verdict::Different { witness: None, note: format!("expansions differ:\n{}", p1.sub(&p2)) }
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aux = c1.aux_count().max(c2.aux_count());
    let degree = c1.degree().max(c2.degree());
    for _ in 0..trials {
        let host = WeightedHost::from_fn(c1.rows(), c1.cols(), |_, _| {
            Q::from_integer(BigInt::from(rng.gen_range(0u64..(1u64 << 61))))
        });
        let av: Vec<Q> = (0..aux).map(|_| Q::from_integer(BigInt::from(rng.gen_range(0u64..(1u64 << 61))))).collect();
        if c1.evaluate_with_aux(&host, &av)? != c2.evaluate_with_aux(&host, &av)? {
            return Ok(Verdict::Different { witness: Some(host), note: "values differ at a random point".into() });
        }
    }
    Ok(Verdict::Indistinguishable {
        trials,
        degree_bound: degree,
        note: format!(
            "indistinguishable (probabilistic): {trials} trials; a nonzero difference of degree <= {degree} vanishes at a random point with probability <= {degree}/2^61"
        ),
    })
}

/// sub_F with host entries replaced by class variables y_c: classes[i*m+j] is
/// the class of position (i, j). Requires |V(F)| = n + m and n, m ≤ 3.
pub fn symbolic_sub_by_edge_classes(f: &BipartitePattern, n: usize, m: usize, classes: &[usize]) -> Result<SparsePolynomial> {
    if n > 3 || m > 3 {
        return Err(Error::cap("side size for symbolic sub", n.max(m), 3));
    }
    if f.left_size() != n || f.right_size() != m {
        return Err(Error::InvalidArgument("pattern must have exactly n + m vertices".into()));
    }
    if classes.len() != n * m {
        return Err(Error::DimensionMismatch("class map must cover [n]x[m]".into()));
    }
    let r = classes.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut p = SparsePolynomial::zero(r);
    for pa in permutations(n) {
        for pb in permutations(m) {
            let mut e = vec![0u16; r];
            for (a, b, mult) in f.edge_list() {
                e[classes[pa[a] * m + pb[b]]] += mult as u16;
            }
            p.add_term(e, Q::one());
        }
    }
    Ok(p.scale(&(Q::one() / Q::from_integer(BigInt::from(f.automorphism_count())))))
}

/// The monomial symmetric polynomial m_λ(y_1, …, y_n).
pub fn monomial_symmetric(lambda: &[usize], n: usize) -> SparsePolynomial {
    let mut base: Vec<u16> = lambda.iter().map(|&x| x as u16).collect();
    base.resize(n.max(lambda.len()), 0);
    let mut p = SparsePolynomial::zero(n);
    if lambda.len() > n {
        return p;
    }
    let mut seen = std::collections::BTreeSet::new();
    for perm in permutations(n) {
        let e: Vec<u16> = perm.iter().map(|&i| base[i]).collect();
        if seen.insert(e.clone()) {
            p.add_term(e, Q::one());
        }
    }
    p
}

/// m_λ from power sums through the partition-lattice Möbius expansion
/// (oracle-side stress test of the inversion machinery).
pub fn monomial_symmetric_via_power_sums(lambda: &[usize], n: usize) -> Result<SparsePolynomial> {
    let s = lambda.len();
    let mut total = SparsePolynomial::zero(n);
    for pi in enumerate_partitions(s)? {
        let mut term = SparsePolynomial::constant(n, moebius(&pi));
        for blk in pi.blocks() {
            let d: usize = blk.iter().map(|&i| lambda[i]).sum();
            let mut ps = SparsePolynomial::zero(n);
            for v in 0..n {
                let mut e = vec![0u16; n];
                e[v] = d as u16;
                ps.add_term(e, Q::one());
            }
            term = term.mul(&ps);
        }
        total = total.add(&term);
    }
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in lambda {
        *mult.entry(x).or_default() += 1;
    }
    let denom = mult.values().fold(BigInt::one(), |a, &k| a * crate::rational::factorial(k));
    Ok(total.scale(&(Q::one() / Q::from_integer(denom))))
}
