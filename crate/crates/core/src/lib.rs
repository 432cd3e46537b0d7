//! Simulation models for self-mixing receive antenna arrays.
//!
//! A self-mixing receiver squares its own input instead of multiplying with a
//! local oscillator. For a two-tone input the wanted product appears at the
//! difference frequency, and the phase it carries between array elements is
//! governed by that difference frequency rather than by the RF. The modules
//! here model each stage of that chain:
//!
//! - [`signal`]: tones, sampled waveforms, square-law mixing, brick-wall
//!   filtering, one-sided DFT spectra and spectral self-convolution.
//! - [`diode`]: Shockley diode with series resistance, I-V derivatives, bias
//!   optimisation and memoryless two-tone mixing simulation with sweeps.
//! - [`array`]: planar array geometry, plane-wave path phases, IF and RF array
//!   factors, effective spacing, the N-to-1 combiner and a time-domain array
//!   simulation used as an oracle for the closed forms.
//! - [`pattern`]: pattern cuts, analytic element patterns, pattern
//!   multiplication, total receive patterns and beamwidth metrics.
//! - [`link`]: Friis receive power and receive-chain power accounting.
//! - [`validation`]: the self-check suite exposed by the `validate` command.
//!
//! All quantities are SI (Hz, V, A, s, m, rad). Decibels only appear where a
//! field or function name says so.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod diode;
pub mod format;
pub mod link;
pub mod pattern;
pub mod signal;
pub mod units;
pub mod validation;

pub use array::{
    combine_elements, effective_spacing, if_array_factor, rf_array_factor,
    simulate_array_timedomain, ArrayError, ArrayGeometry, ArraySimResult, CombinerOutput,
    Direction, EffectiveSpacing, IfSignal, Phasor, TwoToneIllumination,
};
pub use diode::{
    bias_frequency_sweep, bias_power_sweep, iv_derivatives, optimal_bias_static,
    simulate_mixing, BiasPoint, ConversionResult, DiodeError, DiodeModel, IvDerivatives,
    MixingChain, SweepAxis, SweepResult, TonePair,
};
pub use link::{
    chain_output_power, friis_rx_power, ChainSpec, ConversionLaw, EfficiencyTable, LinkError,
    LinkBudgetParams,
};
pub use pattern::{
    beamwidth_3db, self_mix_pattern, total_pattern, AnalyticPattern, Beamwidth, PatternError,
    PatternGrid,
};
pub use signal::{
    analytic_two_tone_products, apply_filter, dft_spectrum, square_law_mix,
    spectrum_self_convolution, synthesize_waveform, FilterSpec, SampledWaveform, SignalError,
    Spectrum, ToneSpec, TwoToneProducts,
};

/// Speed of light in vacuum, m/s (exact SI value).
pub const C0: f64 = 299_792_458.0;
