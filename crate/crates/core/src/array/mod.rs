//! Planar array geometry, plane-wave phases, IF and RF array factors and the
//! N-to-1 combiner.
//!
//! After self-mixing, element k carries an IF tone whose phase is the
//! difference of the path phases of the two RF tones. That difference only
//! depends on `f_I − f_II`, so the IF array factor behaves like an RF array
//! factor evaluated at the difference frequency: its effective element
//! spacing is `d·Δf/c₀` wavelengths, far below the RF spacing.

mod factor;
mod geometry;
mod timedomain;

use thiserror::Error;

use crate::signal::SignalError;

pub use factor::{
    combine_elements, effective_spacing, element_if_signal, if_array_factor, path_phase,
    rf_array_factor, CombinerOutput, EffectiveSpacing, IfSignal, Phasor,
};
pub use geometry::{ArrayGeometry, Direction, TwoToneIllumination};
pub use timedomain::{simulate_array_timedomain, ArraySimResult, ElementGain};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrayError {
    #[error("array has no elements")]
    EmptyGeometry,
    #[error("element {0} has a non-finite position")]
    NonFinitePosition(usize),
    #[error("elements {0} and {1} coincide")]
    CoincidentElements(usize, usize),
    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid direction theta={theta} rad, phi={phi} rad")]
    InvalidDirection { theta: f64, phi: f64 },
    #[error("both tones share the frequency {0} Hz")]
    DegenerateEqualFrequencies(f64),
    #[error("non-positive input: {0}")]
    NonPositiveInput(String),
    #[error("no input signals")]
    EmptyInput,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
}
