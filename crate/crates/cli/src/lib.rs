//! Library side of the `tumorwave` binary: configuration, artifacts and
//! the subcommand workflows.

// `!(x > y)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
