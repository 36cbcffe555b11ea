//! Library side of the `todakit` command-line tool: input parsers, tolerance
//! handling and command runners.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod parse;
pub mod tol;

pub use commands::{run, CliError, Command, Outcome, RunConfig};
