//! Criterion benchmarks for ztwo-core; see `benches/`.
