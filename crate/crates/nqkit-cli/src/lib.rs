//! JSON front end shared by the `nqkit` binary and the Python bindings.

pub mod commands;
pub mod doc;

pub use commands::{run, run_text, Options, Outcome, COMMANDS};
pub use doc::{Doc, DocError};
