//! Output files of a run: an outcome table, a result document and wall-clock timings.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;
use crate::run::RunResult;

pub const OUTCOMES_FILE: &str = "outcomes.csv";
pub const OUTCOMES_SCHEMA: &str = "anyonsim.outcomes.v1";
pub const RESULT_FILE: &str = "result.json";
pub const TIMING_FILE: &str = "timing.json";

#[derive(Serialize)]
struct OutcomeRow<'a> {
    outcome: &'a str,
    count: Option<usize>,
    charges: Option<String>,
    probability: f64,
    sampled: Option<u64>,
}

#[derive(Serialize)]
struct TimingDocument {
    compute_seconds: f64,
    oracle_seconds: f64,
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// The outcome table as CSV: `outcome,count,charges,probability,sampled`.
pub fn outcomes_csv(result: &RunResult) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in &result.outcomes {
        writer
            .serialize(OutcomeRow {
                outcome: &record.outcome,
                count: record.count,
                charges: record.charges.as_ref().map(|c| c.join("+")),
                probability: record.probability,
                sampled: record.sampled,
            })
            .map_err(|e| CliError::Validation(format!("cannot encode outcome table: {e}")))?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Validation(format!("cannot encode outcome table: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// The result document as pretty-printed JSON.
pub fn result_json(result: &RunResult) -> String {
    let mut text = serde_json::to_string_pretty(result).expect("result document serializes");
    text.push('\n');
    text
}

/// Writes the outcome table, result document and timings into `dir`, creating it if needed.
///
/// The first two files depend only on the configuration and seed.
pub fn write_outputs(result: &RunResult, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_error(dir))?;
    let outcomes = dir.join(OUTCOMES_FILE);
    fs::write(&outcomes, outcomes_csv(result)?).map_err(io_error(&outcomes))?;
    let document = dir.join(RESULT_FILE);
    fs::write(&document, result_json(result)).map_err(io_error(&document))?;
    let timing = dir.join(TIMING_FILE);
    let timings = TimingDocument {
        compute_seconds: result.timings.compute_seconds,
        oracle_seconds: result.timings.oracle_seconds,
    };
    let text = serde_json::to_string_pretty(&timings).expect("timings serialize") + "\n";
    fs::write(&timing, text).map_err(io_error(&timing))?;
    Ok(())
}
