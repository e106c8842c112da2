//! Criterion benchmarks for the policies and regret estimators; see `benches/`.
