//! Benchmark-only crate; see `benches/forces.rs` for the measured
//! pipelines. The library target is intentionally empty.
