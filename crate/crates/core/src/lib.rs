//! Symmetric arithmetic circuits for homomorphism, subgraph and immanant
//! polynomials, together with the brute-force oracles and the
//! Weisfeiler–Leman / CFI laboratory used to validate them.

pub mod cfi;
pub mod circuit;
pub mod error;
pub mod graph;
pub mod hompoly;
pub mod immanant;
pub mod oracle;
pub mod params;
pub mod partition;
pub mod rational;
pub mod synth;
pub mod treedec;

pub use circuit::{Circuit, CircuitBuilder, Gate, GateId, GateKey, Group, Point};
pub use error::{Error, Result};
pub use graph::{BipartitePattern, LabelledPattern, Side, WeightedHost};
pub use hompoly::HomPolyExpr;
pub use oracle::SparsePolynomial;
pub use partition::SetPartition;
pub use rational::Q;
pub use treedec::TreeDecomposition;

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
