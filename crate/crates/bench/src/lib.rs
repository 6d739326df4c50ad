//! Benchmarks for `critexp`; see `benches/`.
