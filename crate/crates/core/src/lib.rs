// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bits;
pub mod dense;
pub mod error;
pub mod graph;
pub mod pauli;
pub mod nsf;
pub mod pattern;
pub mod network;
pub mod scenario;
pub mod output;
pub mod experiments;
pub mod config;
pub mod cli;
