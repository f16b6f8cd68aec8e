//! Benchmarks for `mg-core`; see `benches/`.
