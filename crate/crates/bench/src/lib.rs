//! Criterion benchmarks for the degradation kernels live in `benches/`.
