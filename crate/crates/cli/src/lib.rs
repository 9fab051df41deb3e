//! The `quatval` command-line front end.
//!
//! [`execute`] runs a command line in process and returns its exit code and
//! output, so the binary and the tests share one code path.

pub mod args;
pub mod commands;
pub mod descriptor;
pub mod expr;

use std::ffi::OsString;

use clap::Parser;
use quatval_core::conic::ConicError;
use quatval_core::fields::FieldError;
use quatval_core::gauss::GaussError;
use quatval_core::quaternion::QuatError;
use quatval_core::valuation::ValuationError;
use thiserror::Error;

pub use args::Cli;
pub use expr::ParseError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DISAGREEMENT: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_MATH,
        }
    }
}

macro_rules! math_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Math(e.to_string())
            }
        }
    )*};
}

math_errors!(ConicError, QuatError, GaussError, ValuationError, FieldError);

/// Outcome of one command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses and runs `args`, whose first item is the program name.
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Execution { code: e.exit_code(), stdout, stderr };
        }
    };
    match commands::run(&cli) {
        Ok(report) => {
            let code = if report.agreement { EXIT_OK } else { EXIT_DISAGREEMENT };
            let stdout = if cli.json || report.json_only {
                serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n"
            } else {
                report.text
            };
            Execution { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stderr = if cli.json {
                let kind = if e.exit_code() == EXIT_USAGE { "usage" } else { "math" };
                serde_json::json!({ "error": kind, "message": e.to_string() }).to_string() + "\n"
            } else {
                format!("error: {e}\n")
            };
            Execution { code: e.exit_code(), stdout: String::new(), stderr }
        }
    }
}
