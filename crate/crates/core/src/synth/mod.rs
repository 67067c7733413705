//! Synthesis passes from patterns to symmetric circuits.

mod hom;
mod interp;
mod sub;

use std::collections::BTreeMap;

use num::bigint::BigInt;
use serde::Serialize;

use crate::circuit::Circuit;
use crate::rational::factorial;

pub use hom::{build_hom, synth_hom, synth_hom_with};
pub use interp::{extract_coefficient, extract_into, GRID_CAP};
pub use sub::{synth_biclique, synth_sub_cover, synth_sub_moebius, BicliqueKind, COVER_CAP};

#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    #[serde(skip)]
    pub circuit: Circuit,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub size: usize,
    pub gates: usize,
    /// Bag size of the decomposition driving the construction.
    pub k: Option<usize>,
    pub max_support: usize,
    pub conforming: Option<bool>,
    /// Size bound with constant 5 (decimal string; may exceed 64 bits).
    pub bound: Option<String>,
    /// The same bound with constant 4 and no final summation gate.
    pub bound_inner: Option<String>,
    pub within_bound: Option<bool>,
    pub stats: BTreeMap<String, u64>,
    pub notes: Vec<String>,
}

impl SynthReport {
    pub(crate) fn new(kind: &str, circuit: Circuit) -> Self {
        let max_support = circuit.key_support_sizes().into_iter().flatten().max().unwrap_or(0);
        SynthReport {
            kind: kind.to_string(),
            n: circuit.rows(),
            m: circuit.cols(),
            size: circuit.size(),
            gates: circuit.gate_count(),
            k: None,
            max_support,
            conforming: None,
            bound: None,
            bound_inner: None,
            within_bound: None,
            stats: BTreeMap::new(),
            notes: Vec::new(),
            circuit,
        }
    }

    pub(crate) fn with_bound(mut self, bound: BigInt, inner: Option<BigInt>) -> Self {
        self.within_bound = Some(BigInt::from(self.size) <= bound);
        self.bound = Some(bound.to_string());
        self.bound_inner = inner.map(|b| b.to_string());
        self
    }
}

/// c · k!² · k · (n+m)^{k+1} · ‖F‖².
pub fn hom_size_bound(c: u32, k: usize, n: usize, m: usize, norm: usize) -> BigInt {
    let kf = factorial(k);
    BigInt::from(c) * &kf * &kf * BigInt::from(k) * num::pow::pow(BigInt::from(n + m), k + 1) * BigInt::from(norm.max(1) * norm.max(1))
}
