//! Parameter sweeps over pulse sequences, baths and entangled states,
//! written as CSV.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;
