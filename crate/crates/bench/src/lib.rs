//! Benchmark-only crate: fixtures shared by the criterion pipelines live in
//! benches/; nothing is exported for downstream use.
