//! Criterion benchmarks for `ultrameasure`; see `benches/`.
