//! Criterion benchmarks for `paircorr-core`: lattice enumeration and the
//! naive and windowed pair strategies. Run with `cargo bench -p paircorr-bench`.
