//! Command-line front end for `formalcalc-core`: an expression grammar,
//! command dispatch, and text / JSON / LaTeX printers.
//!
//! [`run`] does all the work and returns the rendered output and exit code
//! instead of writing to the process streams, so it is directly testable.

mod commands;
pub mod eval;
pub mod latex;
pub mod syntax;

pub use commands::{
    closed_form, color_from_env, run, run_with, series_from_json, umbral_images_from_json, CliError, Format,
    Outcome, OutputDoc, RunOptions, DEFAULT_SEED,
};
