//! Command-line front end for the lattice verification library.
//!
//! The [`checks`] module turns library verifiers into named, seeded
//! [`report::Report`]s; [`app`] maps subcommands onto them; [`dump`] reads
//! and writes CSV lattice dumps; [`config`] handles key-value configuration.

pub mod app;
pub mod checks;
pub mod config;
pub mod dump;
pub mod error;
pub mod report;

pub use app::{main_with_args, run, Cli};
pub use error::{CliError, Result};
pub use report::Report;
