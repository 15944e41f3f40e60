//! File formats, experiment config, parameter sweeps and the command-line
//! front end around [`quantbt_core`].

pub mod cli;
pub mod config;
pub mod csvio;
pub mod error;
pub mod export;
pub mod indspec;
pub mod sweep;

pub use error::{AppError, Result};
