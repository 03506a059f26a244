//! Criterion benchmarks for `selfsim-core`; see `benches/`.
