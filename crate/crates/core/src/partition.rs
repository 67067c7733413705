//! Set partitions, the partition-lattice Möbius function and the two
//! inversion identities relating sums over all maps and injective maps.

use std::collections::HashMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, Q};

pub const PARTITION_CAP: usize = 12;

/// Blocks sorted by minimum element, elements sorted within blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    size: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(size: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; size];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= size || seen[x] {
                    return Err(Error::InvalidArgument(format!("element {x} out of range or repeated")));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("blocks do not cover the ground set".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SetPartition { size, blocks })
    }

    /// From a restricted-growth string (block index of each element).
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let k = rgs.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); k];
        for (x, &b) in rgs.iter().enumerate() {
            blocks[b].push(x);
        }
        SetPartition { size: rgs.len(), blocks }
    }

    pub fn discrete(size: usize) -> Self {
        SetPartition { size, blocks: (0..size).map(|x| vec![x]).collect() }
    }

    pub fn indiscrete(size: usize) -> Self {
        if size == 0 {
            return SetPartition { size, blocks: vec![] };
        }
        SetPartition { size, blocks: vec![(0..size).collect()] }
    }

    pub fn size(&self) -> usize {
        self.size
    }
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of each element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.size];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = i;
            }
        }
        out
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        let o = other.block_of();
        self.blocks.iter().all(|b| b.iter().all(|&x| o[x] == o[b[0]]))
    }
}

/// All partitions of `0..size`, in restricted-growth-string order.
pub fn enumerate_partitions(size: usize) -> Result<Vec<SetPartition>> {
    if size > PARTITION_CAP {
        return Err(Error::cap("partition ground set size", size, PARTITION_CAP));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; size];
    fn rec(pos: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if pos == rgs.len() {
            out.push(SetPartition::from_rgs(rgs));
            return;
        }
        for b in 0..=max {
            rgs[pos] = b;
            rec(pos + 1, if b == max { max + 1 } else { max }, rgs, out);
        }
    }
    if size == 0 {
        return Ok(vec![SetPartition::from_rgs(&[])]);
    }
    rec(1, 1, &mut rgs, &mut out);
    Ok(out)
}

/// μ_π = (−1)^{|A|−|A/π|} ∏_P (|P|−1)!.
pub fn moebius(p: &SetPartition) -> Q {
    let mut v = Q::one();
    for b in p.blocks() {
        v *= Q::from_integer(factorial(b.len() - 1));
    }
    if (p.size() - p.block_count()) % 2 == 1 {
        v = -v;
    }
    v
}

/// μ(⊥, π) computed from the recursive poset definition; oracle for [`moebius`].
pub fn moebius_recursive(p: &SetPartition) -> Q {
    let all = enumerate_partitions(p.size()).expect("size within cap");
    let mut memo: HashMap<SetPartition, Q> = HashMap::new();
    fn mu(u: &SetPartition, all: &[SetPartition], memo: &mut HashMap<SetPartition, Q>) -> Q {
        if let Some(v) = memo.get(u) {
            return v.clone();
        }
        let bottom = SetPartition::discrete(u.size());
        let v = if *u == bottom {
            Q::one()
        } else {
            let mut s = Q::zero();
            for w in all {
                if w != u && w.refines(u) {
                    s -= mu(w, all, memo);
                }
            }
            s
        };
        memo.insert(u.clone(), v.clone());
        v
    }
    mu(p, &all, &mut memo)
}

fn all_maps(a: usize, i: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..a {
        let mut next = Vec::new();
        for m in &out {
            for x in 0..i {
                let mut m2 = m.clone();
                m2.push(x);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn injective(h: &[usize]) -> bool {
    let mut s = h.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

/// Outcome of checking both inversion identities on a value table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionCheck {
    pub all_maps_identity: bool,
    pub injective_identity: bool,
}

impl InversionCheck {
    pub fn holds(&self) -> bool {
        self.all_maps_identity && self.injective_identity
    }
}

/// Verifies Σ_h p_h = Σ_π Σ_{h inj on A/π} p_{h∘π} and
/// Σ_{h inj} p_h = Σ_π μ_π Σ_{h: A/π→I} p_{h∘π} for a table indexed by maps A → I.
pub fn check_moebius_inversion(table: &HashMap<Vec<usize>, Q>, a: usize, i: usize) -> Result<InversionCheck> {
    if a > 5 || i > 5 {
        return Err(Error::cap("|A| or |I| for inversion check", a.max(i), 5));
    }
    let maps = all_maps(a, i);
    let get = |h: &Vec<usize>| -> Result<Q> {
        table
            .get(h)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("value table is missing map {h:?}")))
    };
    let mut lhs_all = Q::zero();
    let mut lhs_inj = Q::zero();
    for h in &maps {
        let v = get(h)?;
        if injective(h) {
            lhs_inj += &v;
        }
        lhs_all += v;
    }
    let mut rhs_all = Q::zero();
    let mut rhs_inj = Q::zero();
    for p in enumerate_partitions(a)? {
        let blk = p.block_of();
        let mu = moebius(&p);
        for g in all_maps(p.block_count(), i) {
            let h: Vec<usize> = (0..a).map(|x| g[blk[x]]).collect();
            let v = get(&h)?;
            if injective(&g) {
                rhs_all += &v;
            }
            rhs_inj += &mu * v;
        }
    }
    Ok(InversionCheck { all_maps_identity: lhs_all == rhs_all, injective_identity: lhs_inj == rhs_inj })
}

/// Bell numbers B(0..=n).
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let l = *next.last().unwrap();
            next.push(l + x);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_partitions(0).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(2).unwrap().len(), 2);
        assert_eq!(enumerate_partitions(3).unwrap().len(), 5);
        for n in 0..8 {
            let ps = enumerate_partitions(n).unwrap();
            assert_eq!(ps.len() as u64, bell(n));
            let mut s = ps.clone();
            s.sort();
            s.dedup();
            assert_eq!(s.len(), ps.len());
        }
        assert!(enumerate_partitions(13).is_err());
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(&SetPartition::discrete(4)), q(1));
        assert_eq!(moebius(&SetPartition::indiscrete(2)), q(-1));
        assert_eq!(moebius(&SetPartition::indiscrete(3)), q(2));
    }

    #[test]
    fn constructor_validates() {
        assert!(SetPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![0, 1]]).is_err());
        let p = SetPartition::new(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn constant_table_counts() {
        let a = 3;
        let i = 4;
        let table: HashMap<Vec<usize>, Q> = all_maps(a, i).into_iter().map(|h| (h, q(1))).collect();
        let c = check_moebius_inversion(&table, a, i).unwrap();
        assert!(c.holds());
        let mut partial = table.clone();
        partial.remove(&vec![0, 0, 0]);
        assert!(check_moebius_inversion(&partial, a, i).is_err());
    }
}
