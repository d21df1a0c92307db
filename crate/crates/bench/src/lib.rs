//! Benchmark-only crate: see `benches/toolkit.rs` for the measurements
//! (signal synthesis, wavelet decomposition, feature extraction, and
//! classifier training steps). Run with `cargo bench -p pqd-bench`.
