//! Sweeps, figure data and the verification suite behind the `epa`
//! command-line tool.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod figure;
pub mod report;
pub mod sampling;
