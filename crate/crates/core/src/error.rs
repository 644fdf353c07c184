use std::path::PathBuf;

use thiserror::Error;

use crate::model::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {}", join(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("invalid waveguide coupling: {}", join(.0))]
    InvalidCoupling(Vec<Violation>),

    #[error("invalid probe grid: {0}")]
    InvalidGrid(String),

    #[error("scattering pole at E = {energy} cm-1 (singular linear system)")]
    Pole { energy: f64 },

    #[error("scattering pole at grid index {index} (E = {energy} cm-1)")]
    PoleAtGridPoint { index: usize, energy: f64 },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("fit window {lo}..{hi} holds {points} grid points, need at least {min}")]
    WindowTooSmall { lo: f64, hi: f64, points: usize, min: usize },

    #[error("failed to load preset data file {}: {reason}", .path.display())]
    PresetLoad { path: PathBuf, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed spectrum CSV{}: {reason}", fmt_path(.path))]
    MalformedCsv { path: Option<PathBuf>, reason: String },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

fn fmt_path(p: &Option<PathBuf>) -> String {
    match p {
        Some(p) => format!(" {}", p.display()),
        None => String::new(),
    }
}
