use serde::Serialize;

use super::{path_phase, ArrayError, ArrayGeometry, TwoToneIllumination};
use crate::signal::{
    apply_filter, commensurate_sampling, dft_spectrum, square_law_mix, synthesize_samples,
    FilterSpec, SampledWaveform, ToneSpec,
};
use crate::units::amplitude_ratio_db;

/// Element pattern amplitude towards the arrival direction, at each tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementGain {
    pub at_f_i: f64,
    pub at_f_ii: f64,
}

impl ElementGain {
    pub const ISOTROPIC: Self = Self {
        at_f_i: 1.0,
        at_f_ii: 1.0,
    };

    pub fn new(at_f_i: f64, at_f_ii: f64) -> Self {
        Self { at_f_i, at_f_ii }
    }
}

/// Combined IF output of a time-domain array simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArraySimResult {
    /// Combined IF power relative to one isotropic element under the same
    /// illumination, dB.
    pub if_power_rel_db: f64,
    /// Cosine phase of the combined IF tone at the first sample.
    pub if_phase: f64,
    /// Combined IF amplitude, volts.
    pub if_amplitude: f64,
}

/// Brute-force self-mixing array: every element receives the delayed,
/// pattern-weighted two-tone wave (plus its RF phase offset), squares it and
/// band-passes it around the IF; the outputs are summed with `1/√N`
/// normalisation and the IF tone is read from the DFT.
pub fn simulate_array_timedomain(
    g: &ArrayGeometry,
    ill: &TwoToneIllumination,
    element_gains: &[ElementGain],
) -> Result<ArraySimResult, ArrayError> {
    if element_gains.len() != g.len() {
        return Err(ArrayError::InvalidParameter(format!(
            "{} element gains for {} elements",
            element_gains.len(),
            g.len()
        )));
    }
    if element_gains
        .iter()
        .any(|e| !(e.at_f_i >= 0.0 && e.at_f_ii >= 0.0 && e.at_f_i.is_finite() && e.at_f_ii.is_finite()))
    {
        return Err(ArrayError::InvalidParameter(
            "element gains must be finite and non-negative".into(),
        ));
    }
    let f_if = ill.if_frequency();
    let f_max = ill.f_i().max(ill.f_ii());
    let plan = commensurate_sampling(&[ill.f_i(), ill.f_ii(), f_if], 4.0 * f_max)?;
    let band = FilterSpec::band_pass(0.5 * f_if, 1.5 * f_if)?;
    let (a1, a2) = ill.amplitudes();

    let element_if = |tones: [ToneSpec; 2]| -> Result<SampledWaveform, ArrayError> {
        let w = synthesize_samples(&tones, plan.sample_rate, plan.sample_count, 0.0)?;
        Ok(apply_filter(&square_law_mix(&w)?, &band)?)
    };

    let d = ill.direction();
    let mut sum: Option<SampledWaveform> = None;
    for (k, gain) in element_gains.iter().enumerate() {
        let offset = g.rf_phase_offsets()[k];
        let tones = [
            ToneSpec::new(
                ill.f_i(),
                a1 * gain.at_f_i,
                path_phase(g, k, d, ill.f_i())? + offset,
            )?,
            ToneSpec::new(
                ill.f_ii(),
                a2 * gain.at_f_ii,
                path_phase(g, k, d, ill.f_ii())? + offset,
            )?,
        ];
        let y = element_if(tones)?;
        sum = Some(match sum {
            None => y,
            Some(acc) => acc.add(&y)?,
        });
    }
    let combined = sum
        .expect("geometry has at least one element")
        .scale(1.0 / (g.len() as f64).sqrt());
    let tone = dft_spectrum(&combined)?
        .amplitude_at(f_if)
        .expect("IF lies on the sampling grid");

    let reference = element_if([
        ToneSpec::new(ill.f_i(), a1, 0.0)?,
        ToneSpec::new(ill.f_ii(), a2, 0.0)?,
    ])?;
    let reference_amp = dft_spectrum(&reference)?
        .magnitude_at(f_if)
        .expect("IF lies on the sampling grid");

    Ok(ArraySimResult {
        if_power_rel_db: amplitude_ratio_db(tone.norm() / reference_amp),
        if_phase: tone.arg(),
        if_amplitude: tone.norm(),
    })
}
