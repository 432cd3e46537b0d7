use serde::Serialize;

use super::{BiasPoint, DiodeError, DiodeModel};
use crate::signal::{commensurate_sampling, dft_spectrum, synthesize_samples, ToneSpec};
use crate::units::{current_amplitude_to_dbm, db_to_amplitude};

/// Bias used by [`MixingChain::default`]: the bias that maximises the
/// small-signal IF output of the default chain (not the static optimum of the
/// bare diode, which sits higher at 0.73 V).
pub const DEFAULT_BIAS_VOLTAGE: f64 = 0.65;

/// Sample rate is at least this many times the highest tone frequency, so
/// that the harmonics a strongly driven diode generates stay below Nyquist.
const OVERSAMPLING: f64 = 16.0;

/// LNA, diode and loads of a single-diode self-mixing receiver.
///
/// The diode is fed from a Thevenin source: the amplified RF and the DC bias
/// both arrive through `source_impedance`. The source EMF is chosen so that
/// without RF the diode sits exactly at `bias`. The IF current is delivered
/// to `if_load`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingChain {
    lna_gain_db: f64,
    diode: DiodeModel,
    bias: BiasPoint,
    if_load: f64,
    source_impedance: f64,
}

impl Default for MixingChain {
    fn default() -> Self {
        let diode = DiodeModel::default();
        let bias = BiasPoint::at(&diode, DEFAULT_BIAS_VOLTAGE).expect("default bias converges");
        Self::new(25.0, diode, bias, 50.0, 50.0).expect("default chain is valid")
    }
}

impl MixingChain {
    pub fn new(
        lna_gain_db: f64,
        diode: DiodeModel,
        bias: BiasPoint,
        if_load: f64,
        source_impedance: f64,
    ) -> Result<Self, DiodeError> {
        if !lna_gain_db.is_finite() {
            return Err(DiodeError::InvalidChain("LNA gain must be finite".into()));
        }
        if !(if_load.is_finite() && if_load > 0.0) {
            return Err(DiodeError::InvalidChain(format!(
                "IF load must be positive, got {if_load}"
            )));
        }
        if !(source_impedance.is_finite() && source_impedance > 0.0) {
            return Err(DiodeError::InvalidChain(format!(
                "source impedance must be positive, got {source_impedance}"
            )));
        }
        Ok(Self {
            lna_gain_db,
            diode,
            bias,
            if_load,
            source_impedance,
        })
    }

    /// Same chain biased at `voltage`.
    pub fn with_bias_voltage(&self, voltage: f64) -> Result<Self, DiodeError> {
        Ok(Self {
            bias: BiasPoint::at(&self.diode, voltage)?,
            ..*self
        })
    }

    pub fn with_lna_gain_db(&self, lna_gain_db: f64) -> Result<Self, DiodeError> {
        Self::new(
            lna_gain_db,
            self.diode,
            self.bias,
            self.if_load,
            self.source_impedance,
        )
    }

    pub fn lna_gain_db(&self) -> f64 {
        self.lna_gain_db
    }

    pub fn diode(&self) -> &DiodeModel {
        &self.diode
    }

    pub fn bias(&self) -> BiasPoint {
        self.bias
    }

    pub fn if_load(&self) -> f64 {
        self.if_load
    }

    pub fn source_impedance(&self) -> f64 {
        self.source_impedance
    }
}

/// IF output of one mixing simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConversionResult {
    pub if_frequency: f64,
    /// dBm into the IF load; −200 when the IF current vanishes.
    pub if_power_dbm: f64,
    /// Mean diode current, amperes.
    pub dc_current: f64,
}

/// Time-domain two-tone (or multi-tone) mixing in a memoryless diode.
///
/// Tone amplitudes are given at the LNA input and scaled by the LNA voltage
/// gain. The diode current is solved sample by sample on a grid where every
/// tone and `if_frequency` fall on exact DFT bins; the IF current is read
/// from its bin and converted to power in the IF load.
pub fn simulate_mixing(
    chain: &MixingChain,
    tones: &[ToneSpec],
    if_frequency: f64,
) -> Result<ConversionResult, DiodeError> {
    if tones.is_empty() {
        return Err(crate::signal::SignalError::EmptyToneList.into());
    }
    let is_difference = tones.iter().enumerate().any(|(i, a)| {
        tones[i + 1..].iter().any(|b| {
            let df = (a.frequency() - b.frequency()).abs();
            df > 0.0 && (df - if_frequency).abs() <= 1e-9 * if_frequency.abs().max(1.0)
        })
    });
    if !is_difference {
        return Err(DiodeError::InvalidIfFrequency(if_frequency));
    }

    let gain = db_to_amplitude(chain.lna_gain_db);
    let amplified = tones
        .iter()
        .map(|t| t.scaled(gain))
        .collect::<Result<Vec<_>, _>>()?;
    let f_max = tones.iter().map(ToneSpec::frequency).fold(0.0, f64::max);
    let mut freqs: Vec<f64> = tones.iter().map(ToneSpec::frequency).collect();
    freqs.push(if_frequency);
    let plan = commensurate_sampling(&freqs, OVERSAMPLING * f_max)?;
    let rf = synthesize_samples(&amplified, plan.sample_rate, plan.sample_count, 0.0)?;

    let zs = chain.source_impedance;
    let bias = chain.bias;
    let emf_dc = bias.terminal_voltage + zs * bias.bias_current;
    let loop_diode = chain
        .diode
        .with_series_resistance(chain.diode.series_resistance() + zs)?;
    let current = rf
        .samples()
        .iter()
        .map(|&e| loop_diode.terminal_current(emf_dc + e))
        .collect::<Result<Vec<_>, _>>()?;

    let wave = crate::signal::SampledWaveform::new(plan.sample_rate, current, 0.0)?;
    let spectrum = dft_spectrum(&wave)?;
    let if_amp = spectrum
        .magnitude_at(if_frequency)
        .ok_or(DiodeError::InvalidIfFrequency(if_frequency))?;
    Ok(ConversionResult {
        if_frequency,
        if_power_dbm: current_amplitude_to_dbm(if_amp, chain.if_load),
        dc_current: spectrum.amplitudes()[0].re,
    })
}
