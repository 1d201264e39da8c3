//! Criterion benchmarks for kernel evaluation, reference solvers and sweeps;
//! see `benches/kernels.rs`.
