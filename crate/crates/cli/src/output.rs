use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Value};

use crate::{Format, Global};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or parameters: exit 2.
    Usage(String),
    /// A computation failed: exit 1.
    Failure(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// What a subcommand produced, before formatting.
pub struct Rendered {
    pub params: Value,
    pub results: Value,
    pub csv: String,
    pub exit: u8,
}

impl Rendered {
    pub fn new<P: Serialize, R: Serialize>(params: P, results: R, csv: String) -> Result<Self, CliError> {
        let to_value = |v: serde_json::Result<Value>| v.map_err(|e| CliError::Failure(e.to_string()));
        Ok(Rendered {
            params: to_value(serde_json::to_value(params))?,
            results: to_value(serde_json::to_value(results))?,
            csv,
            exit: 0,
        })
    }
}

pub fn emit(global: &Global, command: &str, r: &Rendered, elapsed: Duration) -> Result<(), CliError> {
    let body = match global.format {
        Format::Json => {
            let envelope = json!({
                "command": command,
                "params": r.params,
                "results": r.results,
                "timing": { "elapsed_ms": elapsed.as_secs_f64() * 1e3 },
                "version": env!("CARGO_PKG_VERSION"),
            });
            let mut s = serde_json::to_string_pretty(&envelope).map_err(|e| CliError::Failure(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => r.csv.clone(),
    };
    match &global.out {
        Some(path) => fs::write(path, body)?,
        None => io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}
