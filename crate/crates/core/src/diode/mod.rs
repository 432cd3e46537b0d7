//! Schottky diode model, bias analysis and memoryless mixing simulation.

mod mixing;
mod model;
mod sweep;

use thiserror::Error;

use crate::signal::SignalError;

pub use mixing::{simulate_mixing, ConversionResult, MixingChain, DEFAULT_BIAS_VOLTAGE};
pub use model::{
    iv_derivatives, optimal_bias_static, optimal_bias_static_with_step, BiasPoint, DiodeModel,
    IvDerivatives, DERIVATIVE_STEP, EXPONENT_CLAMP, THERMAL_VOLTAGE_300K,
};
pub use sweep::{bias_frequency_sweep, bias_power_sweep, SweepAxis, SweepResult, TonePair};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiodeError {
    #[error("invalid diode model: {0}")]
    InvalidModel(String),
    #[error("terminal current did not converge at {voltage} V")]
    NoConvergence { voltage: f64 },
    #[error("second derivative has no interior maximum in the given range")]
    NoInteriorMaximum,
    #[error("invalid voltage range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid mixing chain: {0}")]
    InvalidChain(String),
    #[error("{0} Hz is not a difference frequency of the tone set")]
    InvalidIfFrequency(f64),
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
}
