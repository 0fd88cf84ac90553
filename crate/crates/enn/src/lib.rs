//! File formats, synthetic data and the command line for `enn-core`.

pub mod cli;
pub mod io;
pub mod output;
pub mod synth;
