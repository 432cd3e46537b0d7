//! Pattern cuts, analytic element patterns, pattern multiplication and
//! beamwidth metrics.
//!
//! Gains are linear field amplitudes. Squaring a two-tone input multiplies
//! the element's amplitude patterns at the two tones, so the IF pattern of a
//! single element is the point-wise product of its RF patterns; an array then
//! multiplies that by the IF array factor.

mod analytic;
mod grid;
mod io;
mod ops;

use thiserror::Error;

pub use analytic::{sample_pattern, AnalyticPattern, PatternKind};
pub use grid::{theta_grid_deg, PatternBand, PatternGrid};
pub use io::{read_pattern_csv, write_pattern_csv, write_total_pattern_csv, TotalPatternRow};
pub use ops::{beamwidth_3db, find_lobes, self_mix_pattern, total_pattern, Beamwidth, Lobe};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("pattern grids do not match: {0}")]
    GridMismatch(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern has no unique maximum")]
    NoMaximum,
    #[error("CSV error: {0}")]
    Csv(String),
}

impl From<csv::Error> for PatternError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e.to_string())
    }
}
