//! Multi-tone signals, square-law mixing, filtering and DFT tone extraction.
//!
//! Amplitude convention: a tone `A·sin(2πft + φ)` shows up in a [`Spectrum`]
//! with `|c| = A` at its bin (one-sided amplitudes). Complex amplitudes use
//! the cosine phase reference, so the same tone reads `A·e^{j(φ − π/2)}`.
//!
//! Tones that do not fall on an exact DFT bin leak into neighbouring bins;
//! no window is applied. Tests and the simulations in this crate place every
//! tone on an exact bin via [`commensurate_sampling`].

mod filter;
mod spectrum;
mod waveform;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use filter::{apply_filter, FilterSpec};
pub use spectrum::{dft_spectrum, spectrum_self_convolution, Spectrum};
pub use waveform::{
    commensurate_sampling, square_law_mix, synthesize_samples, synthesize_waveform,
    SampledWaveform, SamplingPlan,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("tone list is empty")]
    EmptyToneList,
    #[error("sample rate {sample_rate} Hz does not exceed the required {required} Hz")]
    NyquistViolation { sample_rate: f64, required: f64 },
    #[error("{count} samples given, at least 16 required")]
    TooFewSamples { count: usize },
    #[error("cutoff {cutoff} Hz lies above the Nyquist frequency {nyquist} Hz")]
    CutoffAboveNyquist { cutoff: f64, nyquist: f64 },
    #[error("spectrum bins are not uniformly spaced from DC")]
    NonUniformBins,
    #[error("both tones share the frequency {0} Hz")]
    DegenerateEqualFrequencies(f64),
    #[error("frequencies have no common grid finer than 1 Hz within the sample budget")]
    NonCommensurate,
    #[error("invalid tone: {0}")]
    InvalidTone(String),
    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_phase(phase: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let wrapped = phase - two_pi * ((phase + PI) / two_pi).floor();
    // floor() can land exactly on +π after rounding
    if wrapped >= PI {
        wrapped - two_pi
    } else {
        wrapped
    }
}

/// A single sinusoid `amplitude · sin(2π·frequency·t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToneSpec {
    frequency: f64,
    amplitude: f64,
    phase: f64,
}

impl ToneSpec {
    /// Builds a tone; the phase is wrapped into `[-π, π)`.
    pub fn new(frequency: f64, amplitude: f64, phase: f64) -> Result<Self, SignalError> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(SignalError::InvalidTone(format!(
                "frequency must be positive, got {frequency}"
            )));
        }
        if !(amplitude.is_finite() && amplitude >= 0.0) {
            return Err(SignalError::InvalidTone(format!(
                "amplitude must be non-negative, got {amplitude}"
            )));
        }
        if !phase.is_finite() {
            return Err(SignalError::InvalidTone("phase must be finite".into()));
        }
        Ok(Self {
            frequency,
            amplitude,
            phase: wrap_phase(phase),
        })
    }

    /// Tone whose power into `impedance` ohms is `power_dbm`.
    pub fn from_dbm(
        frequency: f64,
        power_dbm: f64,
        impedance: f64,
        phase: f64,
    ) -> Result<Self, SignalError> {
        let amplitude = if power_dbm == f64::NEG_INFINITY {
            0.0
        } else {
            crate::units::dbm_to_peak_volts(power_dbm, impedance)
        };
        Self::new(frequency, amplitude, phase)
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Same tone with the amplitude multiplied by `factor` (must be ≥ 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, SignalError> {
        Self::new(self.frequency, self.amplitude * factor, self.phase)
    }
}

/// Low-frequency products of squaring a two-tone signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoToneProducts {
    /// DC level, `(a₁² + a₂²) / 2`.
    pub dc: f64,
    /// Amplitude of the difference-frequency cosine, `a₁·a₂`.
    pub if_amplitude: f64,
    /// `|f₁ − f₂|`.
    pub if_frequency: f64,
    /// Cosine phase of the IF term at `+if_frequency`: `φ₁ − φ₂` when
    /// `f₁ > f₂`, otherwise `φ₂ − φ₁`. Wrapped into `[-π, π)`.
    pub if_phase: f64,
}

/// Closed-form DC and IF terms of `(a₁ sin(ω₁t + φ₁) + a₂ sin(ω₂t + φ₂))²`.
///
/// Expanding `2·sin a·sin b = cos(a − b) − cos(a + b)` gives an IF cosine of
/// amplitude `a₁·a₂`. That coefficient is what the time-domain squaring
/// produces, so it is the one returned here.
pub fn analytic_two_tone_products(
    first: &ToneSpec,
    second: &ToneSpec,
) -> Result<TwoToneProducts, SignalError> {
    if first.frequency == second.frequency {
        return Err(SignalError::DegenerateEqualFrequencies(first.frequency));
    }
    let (a1, a2) = (first.amplitude, second.amplitude);
    let phase = if first.frequency > second.frequency {
        first.phase - second.phase
    } else {
        second.phase - first.phase
    };
    Ok(TwoToneProducts {
        dc: 0.5 * (a1 * a1 + a2 * a2),
        if_amplitude: a1 * a2,
        if_frequency: (first.frequency - second.frequency).abs(),
        if_phase: wrap_phase(phase),
    })
}
