//! File formats, the `opdiam` command line and the replication table for
//! [`opdiam_core`].

pub mod cli;
pub mod json;
pub mod replicate;
