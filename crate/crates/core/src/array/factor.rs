use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::{ArrayError, ArrayGeometry, Direction, TwoToneIllumination};
use crate::signal::wrap_phase;
use crate::units::power_ratio_db;
use crate::C0;

/// Plane-wave phase lead of element `k` over element 0 at frequency `f`:
/// `2π·(r_k − r_0)·û·f/c₀`, with `û` the in-plane part of the arrival
/// direction. Not wrapped.
pub fn path_phase(
    g: &ArrayGeometry,
    k: usize,
    d: Direction,
    f: f64,
) -> Result<f64, ArrayError> {
    let r = g.relative(k)?;
    Ok(phase_of(r, d.in_plane(), f))
}

fn phase_of(r: [f64; 2], u: [f64; 2], f: f64) -> f64 {
    2.0 * PI * (r[0] * u[0] + r[1] * u[1]) * f / C0
}

/// IF tone at one element after self-mixing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IfSignal {
    pub if_frequency: f64,
    /// `x̂_I·x̂_II`, the exact coefficient of the difference-frequency term.
    pub amplitude: f64,
    /// `path_phase(f_I) − path_phase(f_II)`, wrapped into `[-π, π)`. RF phase
    /// offsets of the element cancel here.
    pub phase: f64,
}

pub fn element_if_signal(
    g: &ArrayGeometry,
    k: usize,
    ill: &TwoToneIllumination,
) -> Result<IfSignal, ArrayError> {
    let r = g.relative(k)?;
    let u = ill.direction().in_plane();
    let (a1, a2) = ill.amplitudes();
    Ok(IfSignal {
        if_frequency: ill.if_frequency(),
        amplitude: a1 * a2,
        phase: wrap_phase(phase_of(r, u, ill.f_i() - ill.f_ii())),
    })
}

fn normalized_sum(phases: impl Iterator<Item = f64>, n: usize) -> f64 {
    let sum: Complex64 = phases.map(|p| Complex64::from_polar(1.0, p)).sum();
    sum.norm() / n as f64
}

/// Normalized IF array factor `(1/N)·|Σ exp(j·Δφ_k)|` with `Δφ_k` the IF
/// phase of element k. Depends on the tones only through `f_I − f_II`;
/// equal frequencies give 1.
pub fn if_array_factor(g: &ArrayGeometry, freqs: (f64, f64), d: Direction) -> f64 {
    let u = d.in_plane();
    let df = freqs.0 - freqs.1;
    let o = g.positions()[0];
    normalized_sum(
        g.positions()
            .iter()
            .map(|p| phase_of([p[0] - o[0], p[1] - o[1]], u, df)),
        g.len(),
    )
}

/// Normalized RF array factor at `f_rf`, including each element's RF phase
/// offset.
pub fn rf_array_factor(g: &ArrayGeometry, f_rf: f64, d: Direction) -> f64 {
    let u = d.in_plane();
    let o = g.positions()[0];
    normalized_sum(
        g.positions()
            .iter()
            .zip(g.rf_phase_offsets())
            .map(|(p, off)| phase_of([p[0] - o[0], p[1] - o[1]], u, f_rf) + off),
        g.len(),
    )
}

/// Element spacing in wavelengths as seen by the IF and by the RF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EffectiveSpacing {
    /// `d·Δf/c₀`, the spacing that governs the IF array factor.
    pub if_spacing: f64,
    /// `d·f_ref/c₀`.
    pub rf_spacing: f64,
}

pub fn effective_spacing(
    d_element: f64,
    delta_f: f64,
    f_ref: f64,
) -> Result<EffectiveSpacing, ArrayError> {
    if !(d_element.is_finite() && d_element > 0.0) {
        return Err(ArrayError::NonPositiveInput(format!("spacing {d_element} m")));
    }
    if !(delta_f.is_finite() && delta_f >= 0.0) {
        return Err(ArrayError::NonPositiveInput(format!("frequency offset {delta_f} Hz")));
    }
    if !(f_ref.is_finite() && f_ref > 0.0) {
        return Err(ArrayError::NonPositiveInput(format!("reference frequency {f_ref} Hz")));
    }
    Ok(EffectiveSpacing {
        if_spacing: d_element * delta_f / C0,
        rf_spacing: d_element * f_ref / C0,
    })
}

/// A signal amplitude and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Phasor {
    pub amplitude: f64,
    pub phase: f64,
}

impl Phasor {
    pub fn new(amplitude: f64, phase: f64) -> Self {
        Self { amplitude, phase }
    }

    fn complex(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

impl From<IfSignal> for Phasor {
    fn from(s: IfSignal) -> Self {
        Self::new(s.amplitude, s.phase)
    }
}

/// Output of an ideal matched N-to-1 combiner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CombinerOutput {
    /// `|Σ phasors|/√N` reduced by the combiner loss.
    pub amplitude: f64,
    pub phase: f64,
    /// Output power relative to the first input alone, dB (floored at −200).
    pub power_gain_db: f64,
}

/// Matched N-to-1 combiner: output `Σ a_k/√N`, minus `combiner_loss_db`.
/// Equal co-phased inputs gain `10·log₁₀ N`.
pub fn combine_elements(
    signals: &[Phasor],
    combiner_loss_db: f64,
) -> Result<CombinerOutput, ArrayError> {
    let first = signals.first().ok_or(ArrayError::EmptyInput)?;
    if !(combiner_loss_db.is_finite() && combiner_loss_db >= 0.0) {
        return Err(ArrayError::InvalidParameter(format!(
            "combiner loss must be non-negative, got {combiner_loss_db}"
        )));
    }
    if !(first.amplitude > 0.0) {
        return Err(ArrayError::NonPositiveInput(
            "the reference (first) input has zero amplitude".into(),
        ));
    }
    let n = signals.len() as f64;
    let sum: Complex64 = signals.iter().map(Phasor::complex).sum();
    let ratio = sum.norm_sqr() / (n * first.amplitude * first.amplitude);
    let gain_db = power_ratio_db(ratio);
    let power_gain_db = if gain_db <= crate::units::DB_FLOOR {
        crate::units::DB_FLOOR
    } else {
        (gain_db - combiner_loss_db).max(crate::units::DB_FLOOR)
    };
    Ok(CombinerOutput {
        amplitude: sum.norm() / n.sqrt() * 10f64.powf(-combiner_loss_db / 20.0),
        phase: sum.arg(),
        power_gain_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn side(theta_deg: f64) -> Direction {
        Direction::from_degrees(theta_deg, 0.0).unwrap()
    }

    #[test]
    fn broadside_phase_is_zero() {
        let g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036).unwrap();
        for k in 0..g.len() {
            assert_eq!(path_phase(&g, k, Direction::broadside(), 38.5e9).unwrap(), 0.0);
        }
        assert!(matches!(
            path_phase(&g, 8, Direction::broadside(), 1e9),
            Err(ArrayError::IndexOutOfRange { index: 8, len: 8 })
        ));
    }

    #[test]
    fn endfire_path_phase() {
        let g = ArrayGeometry::linear(2, 0.032).unwrap();
        let p = path_phase(&g, 1, side(90.0), 36e9).unwrap();
        let expected = 2.0 * PI * 0.032 * 36e9 / C0;
        assert!((p - expected).abs() < 1e-12);
        assert!((expected / (2.0 * PI) - 3.842).abs() < 1e-3);
    }

    #[test]
    fn if_phase_of_second_element() {
        let g = ArrayGeometry::linear(2, 0.032).unwrap();
        let ill = TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), side(90.0)).unwrap();
        let s = element_if_signal(&g, 1, &ill).unwrap();
        assert!((s.phase - 2.0 * PI * 0.032 * 1e9 / C0).abs() < 1e-12);
        assert!((s.phase - 0.6707).abs() < 1e-4);
        assert_eq!(s.amplitude, 0.5);
        assert_eq!(s.if_frequency, 1e9);
        let shifted = TwoToneIllumination::new(40.5e9, 39.5e9, (1.0, 0.5), side(90.0)).unwrap();
        let t = element_if_signal(&g, 1, &shifted).unwrap();
        assert!((s.phase - t.phase).abs() < 1e-12);
    }

    #[test]
    fn two_element_if_factor() {
        let g = ArrayGeometry::linear(2, 0.032).unwrap();
        let af = if_array_factor(&g, (38.5e9, 37.5e9), side(90.0));
        let half = PI * 0.032 * 1e9 / C0;
        assert!((af - half.cos()).abs() < 1e-12);
        assert!((af - 0.9444).abs() < 1e-4);
        assert_eq!(if_array_factor(&g, (38.5e9, 37.5e9), Direction::broadside()), 1.0);
    }

    #[test]
    fn rf_grating_lobe_and_null() {
        let lambda = C0 / 38.5e9;
        let g = ArrayGeometry::linear(2, 4.0 * lambda).unwrap();
        let theta = 0.25f64.asin();
        let d = Direction::new(theta, 0.0).unwrap();
        assert!((rf_array_factor(&g, 38.5e9, d) - 1.0).abs() < 1e-12);

        let g4 = ArrayGeometry::linear(4, lambda / 2.0).unwrap();
        let null = Direction::new(0.5f64.asin(), 0.0).unwrap();
        assert!(rf_array_factor(&g4, 38.5e9, null) < 1e-9);
    }

    #[test]
    fn effective_spacing_values() {
        let s = effective_spacing(0.032, 1e9, 38.5e9).unwrap();
        assert!((s.if_spacing - 0.1067).abs() < 1e-4);
        assert!((effective_spacing(0.032, 2.5e9, 38.5e9).unwrap().if_spacing - 0.2668).abs() < 1e-4);
        assert_eq!(effective_spacing(0.032, 0.0, 38.5e9).unwrap().if_spacing, 0.0);
        assert!(effective_spacing(0.0, 1e9, 38.5e9).is_err());
        assert!(effective_spacing(0.032, -1.0, 38.5e9).is_err());
    }

    #[test]
    fn combiner_gains() {
        let eight = vec![Phasor::new(1.0, 0.3); 8];
        assert!((combine_elements(&eight, 0.0).unwrap().power_gain_db - 9.0309).abs() < 1e-4);
        assert!((combine_elements(&eight, 0.5).unwrap().power_gain_db - 8.5309).abs() < 1e-4);
        let anti = [Phasor::new(1.0, 0.0), Phasor::new(1.0, PI)];
        assert_eq!(combine_elements(&anti, 0.0).unwrap().power_gain_db, -200.0);
        assert_eq!(combine_elements(&[], 0.0), Err(ArrayError::EmptyInput));
    }
}
