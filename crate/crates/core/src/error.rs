use std::path::PathBuf;

use crate::stability::StabilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("explicit step refused: {0}")]
    Stability(StabilityReport),

    #[error("mass drift at step {step} (t = {time}): total mass {mass} deviates from {initial} by more than {tolerance}")]
    NormDrift {
        step: usize,
        time: f64,
        mass: f64,
        initial: f64,
        tolerance: f64,
    },

    #[error("linear solver failure: {0}")]
    Solver(String),

    #[error("{}", render_config_errors(.0))]
    Config(Vec<ConfigError>),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// One problem found while reading a scenario file. `line` is 1-based; 0
/// means the problem is not tied to a line (e.g. a missing section).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

fn render_config_errors(errors: &[ConfigError]) -> String {
    let mut out = format!("{} configuration error(s)", errors.len());
    for e in errors {
        out.push_str("\n  ");
        out.push_str(&e.to_string());
    }
    out
}
