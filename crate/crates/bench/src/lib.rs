//! Benchmark-only crate; see `benches/directivity.rs`.
