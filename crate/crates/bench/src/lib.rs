//! Criterion benchmarks for `jacobi-fbl`; see `benches/`.
