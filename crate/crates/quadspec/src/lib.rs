//! File formats, configuration and sweeps on top of `quadspec-core`.
//!
//! The `quadspec` binary is a thin clap front end over these modules.

pub mod config;
pub mod emit;
pub mod error;
pub mod field;
pub mod mtx;
pub mod record;
pub mod run;
pub mod sweep;

pub use error::AppError;
