//! File formats, bundled data and the command-line front end for
//! [`casecontrol_core`].

pub mod cli;
pub mod data;
pub mod error;
pub mod formats;
pub mod io;
pub mod report;
pub mod reproduce;

pub use error::{CliError, CliResult};
