//! Criterion benchmarks for `uniaxial-core`; see `benches/`.
