//! Labelled homomorphism values by variable elimination over the pattern's
//! vertices, with the host scaled to integers.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Zero};

use crate::graph::{LabelledPattern, Side, WeightedHost};
use crate::rational::Q;

struct Factor {
    scope: Vec<usize>,
    dims: Vec<usize>,
    table: Vec<BigInt>,
}

impl Factor {
    fn index(&self, assign: &dyn Fn(usize) -> usize) -> usize {
        let mut idx = 0;
        for (&v, &d) in self.scope.iter().zip(&self.dims) {
            idx = idx * d + assign(v);
        }
        idx
    }
}

/// Values of one labelled pattern at every assignment of its labelled
/// vertices, kept as a product of factors over those vertices.
pub struct LabelTable {
    labelled: Vec<usize>,
    factors: Vec<Factor>,
    scale: BigInt,
    constant: BigInt,
    left: usize,
    left_labels: Vec<usize>,
    right_labels: Vec<usize>,
}

impl LabelTable {
    pub fn new(lp: &LabelledPattern, g: &WeightedHost) -> Self {
        let f = &lp.base;
        let (n, m) = (g.rows(), g.cols());
        let mut d = BigInt::one();
        for q in g.entries() {
            d = d.lcm(q.denom());
        }
        let x: Vec<BigInt> = g.entries().iter().map(|q| q.numer() * (&d / q.denom())).collect();
        let dom = |v: usize| if f.side(v) == Side::Left { n } else { m };
        let labelled = lp.labelled_vertices();
        let mut factors: Vec<Factor> = Vec::new();
        let mut total_mult = 0u32;
        for (a, b, mult) in f.edge_list() {
            total_mult += mult;
            let mut table = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    table.push(num::pow::pow(x[i * m + j].clone(), mult as usize));
                }
            }
            factors.push(Factor { scope: vec![a, f.rv(b)], dims: vec![n, m], table });
        }
        let mut constant = BigInt::one();
        let mut free: Vec<usize> = (0..f.vertex_count()).filter(|v| !labelled.contains(v)).collect();
        while !free.is_empty() {
            // eliminate the free vertex whose merged scope is cheapest
            let (pos, _) = free
                .iter()
                .enumerate()
                .map(|(p, &v)| {
                    let mut scope: Vec<usize> = factors.iter().filter(|fc| fc.scope.contains(&v)).flat_map(|fc| fc.scope.iter().copied()).collect();
                    scope.sort_unstable();
                    scope.dedup();
                    (p, scope.iter().map(|&u| dom(u)).product::<usize>())
                })
                .min_by_key(|&(_, c)| c)
                .unwrap();
            let v = free.swap_remove(pos);
            let (with, without): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|fc| fc.scope.contains(&v));
            factors = without;
            if with.is_empty() {
                constant *= BigInt::from(dom(v));
                continue;
            }
            let mut scope: Vec<usize> = with.iter().flat_map(|fc| fc.scope.iter().copied()).collect();
            scope.sort_unstable();
            scope.dedup();
            let out_scope: Vec<usize> = scope.iter().copied().filter(|&u| u != v).collect();
            let out_dims: Vec<usize> = out_scope.iter().map(|&u| dom(u)).collect();
            let size: usize = out_dims.iter().product();
            let mut table = vec![BigInt::zero(); size];
            let mut assign = vec![0usize; f.vertex_count()];
            for (oi, slot) in table.iter_mut().enumerate() {
                let mut rem = oi;
                for (k, &u) in out_scope.iter().enumerate().rev() {
                    assign[u] = rem % out_dims[k];
                    rem /= out_dims[k];
                }
                let mut acc = BigInt::zero();
                for val in 0..dom(v) {
                    assign[v] = val;
                    let mut p = BigInt::one();
                    for fc in &with {
                        let t = &fc.table[fc.index(&|u| assign[u])];
                        if t.is_zero() {
                            p = BigInt::zero();
                            break;
                        }
                        p *= t;
                    }
                    acc += p;
                }
                *slot = acc;
            }
            factors.push(Factor { scope: out_scope, dims: out_dims, table });
        }
        LabelTable {
            labelled,
            factors,
            scale: num::pow::pow(d, total_mult as usize),
            constant,
            left: f.left_size(),
            left_labels: lp.left_labels.clone(),
            right_labels: lp.right_labels.clone(),
        }
    }

    /// Value at label images `v` (left) and `w` (right); 0 when repeated
    /// labels receive different images.
    pub fn value(&self, v: &[usize], w: &[usize]) -> Q {
        let mut assign: Vec<Option<usize>> = vec![None; self.labelled.iter().max().map_or(0, |&x| x + 1)];
        let pairs = self.left_labels.iter().map(|&a| a).zip(v).chain(self.right_labels.iter().map(|&b| self.left + b).zip(w));
        for (vert, &val) in pairs {
            match assign[vert] {
                Some(x) if x != val => return Q::zero(),
                _ => assign[vert] = Some(val),
            }
        }
        let mut p = self.constant.clone();
        for fc in &self.factors {
            let t = &fc.table[fc.index(&|u| assign[u].expect("factor scope is labelled"))];
            if t.is_zero() {
                return Q::zero();
            }
            p *= t;
        }
        Q::new(p, self.scale.clone())
    }
}

/// Single labelled hom value by direct enumeration of the free vertices.
pub fn brute_labelled_hom(lp: &LabelledPattern, v: &[usize], w: &[usize], g: &WeightedHost) -> Q {
    let f = &lp.base;
    let nv = f.vertex_count();
    let mut fixed: Vec<Option<usize>> = vec![None; nv];
    for (&a, &val) in lp.left_labels.iter().zip(v) {
        if fixed[a].is_some_and(|x| x != val) {
            return Q::zero();
        }
        fixed[a] = Some(val);
    }
    for (&b, &val) in lp.right_labels.iter().zip(w) {
        let g_id = f.rv(b);
        if fixed[g_id].is_some_and(|x| x != val) {
            return Q::zero();
        }
        fixed[g_id] = Some(val);
    }
    let free: Vec<usize> = (0..nv).filter(|&x| fixed[x].is_none()).collect();
    let dom = |x: usize| if f.side(x) == Side::Left { g.rows() } else { g.cols() };
    let mut assign: Vec<usize> = fixed.iter().map(|x| x.unwrap_or(0)).collect();
    let mut total = Q::zero();
    loop {
        let mut p = Q::one();
        for (a, b, mult) in f.edge_list() {
            p *= num::pow::pow(g.get(assign[a], assign[f.rv(b)]).clone(), mult as usize);
        }
        total += p;
        let mut k = free.len();
        loop {
            if k == 0 {
                return total;
            }
            k -= 1;
            assign[free[k]] += 1;
            if assign[free[k]] < dom(free[k]) {
                break;
            }
            assign[free[k]] = 0;
        }
    }
}
