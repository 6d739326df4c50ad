//! The `critexp` command line: every command prints a JSON [`Report`] that
//! replays on its own.

pub mod commands;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::Cli;
pub use report::{Certificate, CertificateKind, Report, Status, SCHEMA_VERSION};
pub use verify::{verify_report, CheckOutcome};

/// Exit code for usage and validation errors.
pub const EXIT_USAGE: i32 = 1;

/// What a finished command prints and returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Self { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => Outcome::usage(text),
            };
        }
    };
    let start = Instant::now();
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli)),
            Err(e) => return Outcome::usage(format!("cannot start {n} worker threads: {e}")),
        },
        None => commands::dispatch(&cli),
    };
    match result {
        Ok(commands::Output::Report(mut report)) => {
            if !cli.no_timing {
                report.timing_ms = Some(start.elapsed().as_millis() as u64);
            }
            Outcome { code: report.status.exit_code(), stdout: report.to_json(), stderr: String::new() }
        }
        Ok(commands::Output::Text { code, text }) => Outcome { code, stdout: text, stderr: String::new() },
        Err(message) => Outcome::usage(format!("error: {message}")),
    }
}
