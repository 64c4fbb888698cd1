//! Exact arithmetic foundations.

pub mod arith;
pub mod ff;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod series;
