//! Criterion benchmarks for circuit synthesis and evaluation live in `benches/`.
