//! Batch runner for anyonic interferometry experiments.
//!
//! [`run::run`] takes a resolved [`experiment::ExperimentConfig`] and returns a
//! [`run::RunResult`]; [`report`] turns results into files. [`main_with`] is the
//! whole command-line program minus process exit.

pub mod args;
pub mod error;
pub mod experiment;
pub mod report;
pub mod run;
pub mod sampling;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use error::CliError;
pub use experiment::{ExperimentConfig, Mode};
pub use run::{run, RunResult};
pub use sampling::{estimate_sample_size, sample_counts};

use args::{Cli, Command};

/// Parses `argv`, runs the requested command and returns the process exit code.
///
/// Output goes to `stdout`; diagnostics go to `stderr`.
pub fn main_with<I, T>(argv: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(if e.use_stderr() { stderr as &mut dyn Write } else { stdout as &mut dyn Write }, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut impl Write) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    match command {
        Command::Run(args) => {
            let config = ExperimentConfig::from_args(&args)?;
            let result = run(&config)?;
            match &args.out {
                Some(dir) => {
                    report::write_outputs(&result, dir)?;
                    writeln!(stdout, "wrote {}", dir.display()).map_err(io)
                }
                None => stdout.write_all(report::result_json(&result).as_bytes()).map_err(io),
            }
        }
        Command::Estimate(args) => {
            let n = estimate_sample_size(args.alpha, args.delta_p, args.q)?;
            writeln!(stdout, "{n}").map_err(io)
        }
        Command::Models => {
            for name in anyonsim::mtc::bundled_names() {
                writeln!(stdout, "{name}").map_err(io)?;
            }
            Ok(())
        }
    }
}

/// The guide's chapters, compiled as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/states.md")]
    pub mod states {}
    #[doc = include_str!("../../../book/src/interferometry.md")]
    pub mod interferometry {}
    #[doc = include_str!("../../../book/src/twisted.md")]
    pub mod twisted {}
    #[doc = include_str!("../../../book/src/ising.md")]
    pub mod ising {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
