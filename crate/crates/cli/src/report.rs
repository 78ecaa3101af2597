use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use biquad_core::Error;
use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = concat!("biquad ", env!("CARGO_PKG_VERSION"));

/// Envelope printed on stdout for every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub outputs: Value,
    /// Wall-clock milliseconds per phase. Not deterministic.
    pub timings: BTreeMap<String, f64>,
    pub tool_version: String,
}

#[derive(Default)]
pub struct Timings {
    phases: BTreeMap<String, f64>,
}

impl Timings {
    pub fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        *self.phases.entry(phase.to_string()).or_insert(0.0) += ms;
        out
    }

    pub fn into_map(self) -> BTreeMap<String, f64> {
        self.phases
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    BadInput = 1,
    Numerical = 2,
    Violation = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            exit: Exit::BadInput,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            exit: if e.is_input_error() {
                Exit::BadInput
            } else {
                Exit::Numerical
            },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}
