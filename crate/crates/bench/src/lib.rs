//! Criterion benchmarks for the `ffp-core` kernels; see `benches/kernels.rs`.
//!
//! Run with `cargo bench -p ffp-bench`.
