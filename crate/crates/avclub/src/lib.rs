//! Files, fixtures and exports around [`avclub_core`]: payoff matrix files,
//! TOML scenarios, Graphviz club graphs, scatter CSVs and formation logs.

#![forbid(unsafe_code)]

pub mod config;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod formation_log;
pub mod matrix_file;
pub mod scatter;

pub use error::{Error, Result};
