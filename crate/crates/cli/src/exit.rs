//! Errors carrying their process exit code.

use std::fmt;

pub const CHECK_FAILED: u8 = 1;
pub const SCENE_ERROR: u8 = 2;
pub const CHART_ERROR: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub fn scene_error(error: anyhow::Error) -> Failure {
    Failure { code: SCENE_ERROR, error }
}

pub fn chart_error(error: anyhow::Error) -> Failure {
    Failure { code: CHART_ERROR, error }
}

/// Text diagnostics are scene errors; everything else concerns the chart.
pub fn library(e: equiaffine::Error, context: &str) -> Failure {
    let code = if matches!(e, equiaffine::Error::Parse(_)) { SCENE_ERROR } else { CHART_ERROR };
    Failure { code, error: anyhow::anyhow!("{context}: {e}") }
}
