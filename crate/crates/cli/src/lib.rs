//! Batch front end for `bosecrit`: scenario files in, reports and CSV
//! tables out.

pub mod commands;
pub mod scenario;
pub mod verify;

use std::fmt::Write as _;

use thiserror::Error;

pub use commands::{run, Command, Outcome};
pub use scenario::Scenario;

pub const TOLERANCE_ENV: &str = "BOSECRIT_TOL";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid scenario: {0}")]
    Validation(String),

    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Io(String),

    #[error(transparent)]
    Core(#[from] bosecrit::Error),
}

impl CliError {
    /// 1 for bad input, 2 when a numerical method did not converge.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(bosecrit::Error::Convergence(_)) | CliError::Core(bosecrit::Error::Quadrature(_)) => 2,
            _ => 1,
        }
    }
}

/// Reads the tolerance override; values must lie in (0, 1e-3).
pub fn tolerance_from_env(raw: Option<&str>) -> Result<Option<f64>, CliError> {
    let Some(raw) = raw else { return Ok(None) };
    match raw.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v < 1e-3 => Ok(Some(v)),
        _ => Err(CliError::Usage(format!(
            "{TOLERANCE_ENV} must be a number in (0, 1e-3), got '{raw}'"
        ))),
    }
}

/// Formats a number for CSV output with 17 significant digits.
pub fn csv_number(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_parsing() {
        assert_eq!(tolerance_from_env(None).unwrap(), None);
        assert_eq!(tolerance_from_env(Some("1e-8")).unwrap(), Some(1e-8));
        assert!(tolerance_from_env(Some("0")).is_err());
        assert!(tolerance_from_env(Some("1e-3")).is_err());
        assert!(tolerance_from_env(Some("tight")).is_err());
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(csv_number(0.1), "1.0000000000000001e-1");
        assert_eq!(csv_number(1.0 / 3.0).len(), "3.3333333333333331e-1".len());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(
            CliError::Parse {
                line: 1,
                message: String::new()
            }
            .exit_code(),
            1
        );
        assert_eq!(
            CliError::Core(bosecrit::Error::Convergence(String::new())).exit_code(),
            2
        );
        assert_eq!(CliError::Core(bosecrit::Error::Pole).exit_code(), 1);
    }
}
