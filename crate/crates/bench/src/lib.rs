//! Criterion benchmarks for the hot kernels of `hypersquare-core` live in `benches/`.
