//! Benchmarks for the `morse-blocks` constructions live in `benches/`.

/// Orders exercised by the benchmarks.
pub const ORDERS: [u32; 4] = [4, 6, 8, 10];
