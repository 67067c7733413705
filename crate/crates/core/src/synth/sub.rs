use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitBuilder, GateId, GateKey, Group, Point};
use crate::error::{Error, Result};
use crate::graph::BipartitePattern;
use crate::params::logical_cover;
use crate::partition::{enumerate_partitions, moebius};
use crate::rational::{binomial, factorial, Q};
use crate::treedec::{exact_treewidth, nice_decomposition};

use super::hom::build_hom;
use super::interp::extract_into;
use super::{hom_size_bound, SynthReport};

pub const COVER_CAP: usize = 4;
const AUT_VERTEX_CAP: usize = 10;

fn aut_count(f: &BipartitePattern) -> Result<usize> {
    if f.vertex_count() > AUT_VERTEX_CAP {
        return Err(Error::cap("vertex count for automorphism enumeration", f.vertex_count(), AUT_VERTEX_CAP));
    }
    Ok(f.automorphism_count())
}

fn zero_report(kind: &str, n: usize, m: usize, note: &str) -> SynthReport {
    let mut b = CircuitBuilder::new(n, m, Group::SymNM);
    let z = b.zero();
    let mut r = SynthReport::new(kind, b.finish(z));
    r.notes.push(note.to_string());
    r
}

/// sub_F as (1/|Aut F|) Σ_{π,σ} μ_π μ_σ hom_{F/(π,σ)}.
pub fn synth_sub_moebius(f: &BipartitePattern, n: usize, m: usize) -> Result<SynthReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("host sides must be positive".into()));
    }
    let aut = aut_count(f)?;
    let mut coeffs: BTreeMap<BipartitePattern, Q> = BTreeMap::new();
    for pi in enumerate_partitions(f.left_size())? {
        for sigma in enumerate_partitions(f.right_size())? {
            let qf = f.quotient(&pi.block_of(), pi.block_count(), &sigma.block_of(), sigma.block_count());
            *coeffs.entry(qf).or_insert_with(Q::zero) += moebius(&pi) * moebius(&sigma);
        }
    }
    let inv_aut = Q::new(BigInt::one(), BigInt::from(aut));
    let mut b = CircuitBuilder::new(n, m, Group::SymNM);
    let mut terms = Vec::new();
    let mut bound = BigInt::zero();
    let mut kmax = 0;
    let mut conforming = true;
    for (i, (qf, c)) in coeffs.iter().filter(|(_, c)| !c.is_zero()).enumerate() {
        let td = exact_treewidth(qf)?.1;
        let nice = nice_decomposition(qf, &td)?;
        kmax = kmax.max(nice.k);
        conforming &= nice.conforming;
        bound += hom_size_bound(5, nice.k, n, m, qf.norm()) + 5;
        let h = build_hom(&mut b, qf, &nice.td, &format!("q{i}."));
        b.key(h, GateKey::new(format!("q{i}.out"), vec![]));
        let t = b.scale(c * &inv_aut, h);
        b.key(t, GateKey::new(format!("sub.t{i}"), vec![]));
        terms.push(t);
    }
    let out = b.sum(terms.iter().copied());
    b.key(out, GateKey::new("sub.out", vec![]));
    let mut rep = SynthReport::new("sub-moebius", b.finish(out)).with_bound(bound + 1, None);
    rep.k = Some(kmax);
    rep.conforming = Some(conforming);
    rep.stats.insert("quotient_terms".into(), terms.len() as u64);
    rep.stats.insert("automorphisms".into(), aut as u64);
    Ok(rep)
}

fn injections(len: usize, range: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(len: usize, range: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..range {
            if !cur.contains(&v) {
                cur.push(v);
                go(len, range, cur, out);
                cur.pop();
            }
        }
    }
    go(len, range, &mut cur, &mut out);
    out
}

/// sub_F through a small logical vertex cover K of F padded to (n, m):
/// vertices outside K are grouped into types by their neighbourhood in K, a
/// fresh variable per type is interpolated away, and the injections of K
/// are summed.
pub fn synth_sub_cover(f: &BipartitePattern, n: usize, m: usize, cap: usize) -> Result<SynthReport> {
    if !f.is_simple() {
        return Err(Error::InvalidPattern("cover synthesis needs a simple pattern".into()));
    }
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("host sides must be positive".into()));
    }
    let Some(lc) = logical_cover(f, n, m)? else {
        return Ok(zero_report("sub-cover", n, m, "pattern does not fit into the host sides"));
    };
    if lc.size() > cap {
        return Err(Error::cap("logical vertex cover number", lc.size(), cap));
    }
    let fp = &lc.padded;
    let ka: Vec<usize> = lc.cover.iter().copied().filter(|&v| v < n).collect();
    let kb: Vec<usize> = lc.cover.iter().copied().filter(|&v| v >= n).map(|v| v - n).collect();
    let free_a: Vec<usize> = (0..n).filter(|a| !ka.contains(a)).collect();
    let free_b: Vec<usize> = (0..m).filter(|b| !kb.contains(b)).collect();

    let mut types_a: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &a in &free_a {
        let s: Vec<usize> = (0..kb.len()).filter(|&j| fp.multiplicity(a, kb[j]) > 0).collect();
        *types_a.entry(s).or_default() += 1;
    }
    let mut types_b: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for &bv in &free_b {
        let s: Vec<usize> = (0..ka.len()).filter(|&i| fp.multiplicity(ka[i], bv) > 0).collect();
        *types_b.entry(s).or_default() += 1;
    }
    let la: Vec<(Vec<usize>, usize)> = types_a.into_iter().collect();
    let lb: Vec<(Vec<usize>, usize)> = types_b.into_iter().collect();
    // the first type on each side gets t = 1 (the product is homogeneous per side)
    let na = la.len().saturating_sub(1);
    let nb = lb.len().saturating_sub(1);
    let vars: Vec<u32> = (0..(na + nb) as u32).collect();
    let mut bounds = vec![free_a.len(); na];
    bounds.extend(vec![free_b.len(); nb]);
    let mut target: Vec<usize> = la.iter().skip(1).map(|(_, c)| *c).collect();
    target.extend(lb.iter().skip(1).map(|(_, c)| *c));

    let mut constant = Q::one();
    for (_, c) in la.iter().chain(&lb) {
        constant *= Q::from_integer(factorial(*c));
    }
    let (a0, b0) = (f.left_size(), f.right_size());
    let denom = BigInt::from(aut_count(f)?) * factorial(n - a0) * factorial(m - b0);
    constant /= Q::from_integer(denom);

    let k_edges: Vec<(usize, usize)> = ka
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| kb.iter().enumerate().filter(move |&(_, &bv)| fp.multiplicity(a, bv) > 0).map(move |(j, _)| (i, j)))
        .collect();

    let mut b = CircuitBuilder::new(n, m, Group::SymNM);
    let mut terms = Vec::new();
    let inj_a = injections(ka.len(), n);
    let inj_b = injections(kb.len(), m);
    for ia in &inj_a {
        for ib in &inj_b {
            let support: Vec<Point> =
                ia.iter().map(|&v| Point::L(v as u32)).chain(ib.iter().map(|&v| Point::R(v as u32))).collect();
            let host_a: Vec<usize> = (0..n).filter(|v| !ia.contains(v)).collect();
            let host_b: Vec<usize> = (0..m).filter(|v| !ib.contains(v)).collect();

            let mut qb = CircuitBuilder::new(n, m, Group::SymNM);
            let mut factors = Vec::new();
            for &h in &host_a {
                let mut parts = Vec::new();
                for (t, (s, _)) in la.iter().enumerate() {
                    let mut wires: Vec<(GateId, u32)> = s.iter().map(|&j| (qb.input(h, ib[j]), 1)).collect();
                    if t > 0 {
                        wires.push((qb.aux(t - 1), 1));
                    }
                    parts.push(qb.mul(wires));
                }
                let sh = qb.sum(parts);
                let mut sup = support.clone();
                sup.push(Point::L(h as u32));
                qb.key(sh, GateKey::new("cover.s", sup));
                factors.push(sh);
            }
            for &h in &host_b {
                let mut parts = Vec::new();
                for (t, (s, _)) in lb.iter().enumerate() {
                    let mut wires: Vec<(GateId, u32)> = s.iter().map(|&i| (qb.input(ia[i], h), 1)).collect();
                    if t > 0 {
                        wires.push((qb.aux(na + t - 1), 1));
                    }
                    parts.push(qb.mul(wires));
                }
                let sh = qb.sum(parts);
                let mut sup = support.clone();
                sup.push(Point::R(h as u32));
                qb.key(sh, GateKey::new("cover.s", sup));
                factors.push(sh);
            }
            let qg = qb.product(factors);
            qb.key(qg, GateKey::new("cover.q", support.clone()));
            let qc = qb.finish(qg);
            let coef = extract_into(&mut b, &qc, &vars, &bounds, &target, "cover.", &support)?;

            let mut wires: Vec<(GateId, u32)> = vec![(coef, 1)];
            for &(i, j) in &k_edges {
                wires.push((b.input(ia[i], ib[j]), 1));
            }
            if lc.complement {
                for &x in &host_a {
                    for &y in &host_b {
                        wires.push((b.input(x, y), 1));
                    }
                }
            }
            let t = b.mul(wires);
            b.key(t, GateKey::new("cover.term", support));
            terms.push(t);
        }
    }
    let total = b.sum(terms);
    let out = b.scale(constant, total);
    b.key(total, GateKey::new("cover.sum", vec![]));
    b.key(out, GateKey::new("cover.out", vec![]));
    let mut rep = SynthReport::new("sub-cover", b.finish(out));
    rep.stats.insert("cover_size".into(), lc.size() as u64);
    rep.stats.insert("complement".into(), lc.complement as u64);
    rep.stats.insert("type_variables".into(), vars.len() as u64);
    rep.stats.insert("injections".into(), (inj_a.len() * inj_b.len()) as u64);
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BicliqueKind {
    /// sub of K_{k,k}: sum over k-sets A, B of ∏_{A×B} x.
    K,
    /// sub of K_{n−k,n−k}: sum over excluded k-sets A, B of ∏_{Ā×B̄} x.
    NMinusK,
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Two-level circuit for sub_{K_{k,k},n,n} or sub_{K_{n−k,n−k},n,n}.
pub fn synth_biclique(kind: BicliqueKind, k: usize, n: usize) -> Result<SynthReport> {
    if k > n || n == 0 {
        return Err(Error::InvalidArgument(format!("need 0 ≤ k ≤ n and n ≥ 1, got k={k}, n={n}")));
    }
    let mut b = CircuitBuilder::new(n, n, Group::SymNM);
    let subsets = k_subsets(n, k);
    let mut terms = Vec::new();
    for a in &subsets {
        for bs in &subsets {
            let (rows, cols): (Vec<usize>, Vec<usize>) = match kind {
                BicliqueKind::K => (a.clone(), bs.clone()),
                BicliqueKind::NMinusK => ((0..n).filter(|x| !a.contains(x)).collect(), (0..n).filter(|x| !bs.contains(x)).collect()),
            };
            let wires: Vec<(GateId, u32)> = rows.iter().flat_map(|&i| cols.iter().map(move |&j| (i, j))).map(|(i, j)| (b.input(i, j), 1)).collect();
            let g = b.mul(wires);
            let support = a.iter().map(|&v| Point::L(v as u32)).chain(bs.iter().map(|&v| Point::R(v as u32))).collect();
            b.key(g, GateKey::new("biclique.ab", support));
            terms.push(g);
        }
    }
    let out = b.sum(terms);
    b.key(out, GateKey::new("biclique.out", vec![]));
    let side = match kind {
        BicliqueKind::K => k,
        BicliqueKind::NMinusK => n - k,
    };
    let bound = BigInt::from(3usize) * num::pow::pow(BigInt::from(n), 2 * k) * BigInt::from((side * side).max(1)) + BigInt::from(n * n + 1);
    let mut rep = SynthReport::new("biclique", b.finish(out)).with_bound(bound, None);
    rep.stats.insert("products".into(), (subsets.len() * subsets.len()) as u64);
    rep.stats.insert("choose".into(), u64::try_from(binomial(n, k)).unwrap_or(u64::MAX));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::verify_symmetry;
    use crate::graph::WeightedHost;
    use crate::oracle::{brute_sub, circuits_equal, ExpandCaps, Verdict};
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moebius_examples() {
        let p3 = BipartitePattern::complete(1, 2);
        let r = synth_sub_moebius(&p3, 2, 2).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::constant(2, 2, q(1))).unwrap(), q(2));
        let k2 = BipartitePattern::complete(1, 1);
        let r = synth_sub_moebius(&k2, 2, 2).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::constant(2, 2, q(1))).unwrap(), q(4));
        let two_k2 = BipartitePattern::simple(2, 2, &[(0, 0), (1, 1)]).unwrap();
        let r = synth_sub_moebius(&two_k2, 3, 3).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::identity(3)).unwrap(), q(3));
        verify_symmetry(&r.circuit).unwrap();
    }

    #[test]
    fn cover_examples() {
        let knm = BipartitePattern::complete(2, 3);
        let r = synth_sub_cover(&knm, 2, 3, COVER_CAP).unwrap();
        let mut g = WeightedHost::constant(2, 3, q(2));
        assert_eq!(r.circuit.evaluate(&g).unwrap(), q(64));
        g.set(1, 2, q(0));
        assert_eq!(r.circuit.evaluate(&g).unwrap(), q(0));

        let star = BipartitePattern::complete(1, 3);
        let cover = synth_sub_cover(&star, 4, 4, COVER_CAP).unwrap();
        verify_symmetry(&cover.circuit).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = WeightedHost::random(&mut rng, 4, 4, 1, 1);
            assert_eq!(cover.circuit.evaluate(&g).unwrap(), brute_sub(&star, &g).unwrap());
        }
    }

    #[test]
    fn cover_matches_moebius_exactly() {
        let pats = [
            BipartitePattern::simple(2, 2, &[(0, 0), (1, 1)]).unwrap(),
            BipartitePattern::complete(1, 2),
            BipartitePattern::simple(2, 1, &[(0, 0)]).unwrap(),
            BipartitePattern::path(4),
        ];
        for f in &pats {
            for (n, m) in [(2, 2), (3, 2), (3, 3)] {
                if f.left_size() > n || f.right_size() > m {
                    continue;
                }
                let a = synth_sub_cover(f, n, m, COVER_CAP).unwrap();
                let b = synth_sub_moebius(f, n, m).unwrap();
                let v = circuits_equal(&a.circuit, &b.circuit, 5, 1, Some(ExpandCaps::default())).unwrap();
                assert_eq!(v, Verdict::Equal, "{f:?} {n} {m}");
            }
        }
    }

    #[test]
    fn matching_complement() {
        let pm = BipartitePattern::simple(3, 3, &[(0, 0), (1, 1), (2, 2)]).unwrap();
        let f = pm.complement().unwrap();
        let r = synth_sub_cover(&f, 3, 3, COVER_CAP).unwrap();
        let host = WeightedHost::from_fn(3, 3, |i, j| q((i != j) as i64));
        assert_eq!(r.circuit.evaluate(&host).unwrap(), brute_sub(&f, &host).unwrap());

        let almost = BipartitePattern::simple(3, 3, &[(0, 0)]).unwrap().complement().unwrap();
        let r = synth_sub_cover(&almost, 3, 3, COVER_CAP).unwrap();
        assert_eq!(r.stats["complement"], 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let g = WeightedHost::random(&mut rng, 3, 3, 7, 3);
            assert_eq!(r.circuit.evaluate(&g).unwrap(), brute_sub(&almost, &g).unwrap());
        }
    }

    #[test]
    fn biclique_examples() {
        let r = synth_biclique(BicliqueKind::K, 1, 2).unwrap();
        assert_eq!(r.circuit.evaluate(&WeightedHost::constant(2, 2, q(1))).unwrap(), q(4));
        let r = synth_biclique(BicliqueKind::NMinusK, 0, 3).unwrap();
        assert_eq!(r.circuit.gate_count(), 10);
        let a = synth_biclique(BicliqueKind::K, 2, 3).unwrap();
        let b = synth_sub_moebius(&BipartitePattern::complete(2, 2), 3, 3).unwrap();
        assert_eq!(circuits_equal(&a.circuit, &b.circuit, 5, 2, Some(ExpandCaps::default())).unwrap(), Verdict::Equal);
    }
}
