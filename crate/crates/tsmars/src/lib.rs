//! File formats, simulation and the command-line pipeline built on
//! [`tsmars_core`].

pub mod cli;
pub mod config;
pub mod csv_io;
pub mod error;
pub mod model_file;
pub mod report;
pub mod simulate;

pub use error::{Error, ErrorKind, Result};
