use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::{PatternBand, PatternError, PatternGrid};
use crate::array::Direction;

/// Point-wise product of two patterns on the same cut: the IF pattern of an
/// element that squares tones received with patterns `c_i` and `c_ii`.
pub fn self_mix_pattern(c_i: &PatternGrid, c_ii: &PatternGrid) -> Result<PatternGrid, PatternError> {
    c_i.same_cut(c_ii)?;
    PatternGrid::with_band(
        c_i.theta().to_vec(),
        c_i.phi_cut(),
        c_i.gains().iter().zip(c_ii.gains()).map(|(a, b)| a * b).collect(),
        (c_i.frequency() - c_ii.frequency()).abs(),
        PatternBand::If,
    )
}

/// Receive pattern of an array: `sm(θ) · array_factor(θ)` along the cut of
/// `sm`.
pub fn total_pattern<F>(sm: &PatternGrid, array_factor: F) -> Result<PatternGrid, PatternError>
where
    F: Fn(Direction) -> f64,
{
    let mut gains = Vec::with_capacity(sm.len());
    for (&t, &g) in sm.theta().iter().zip(sm.gains()) {
        let d = Direction::from_cut(t, sm.phi_cut())
            .map_err(|e| PatternError::InvalidGrid(e.to_string()))?;
        let af = array_factor(d);
        if !(af.is_finite() && af >= 0.0) {
            return Err(PatternError::InvalidPattern(format!(
                "array factor {af} at {t} rad is not a non-negative number"
            )));
        }
        gains.push(g * af);
    }
    PatternGrid::with_band(
        sm.theta().to_vec(),
        sm.phi_cut(),
        gains,
        sm.frequency(),
        sm.band(),
    )
}

/// Half-power width of the main lobe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Beamwidth {
    /// Radians.
    pub width: f64,
    /// Angle of the main-lobe peak, radians.
    pub peak: f64,
    /// Set when the pattern does not fall 3 dB below its peak on at least
    /// one side within the cut; that side's edge is then the cut boundary, so
    /// `width` is a lower bound. For a pattern that never drops 3 dB the
    /// width is the full cut.
    pub no_crossing: bool,
}

/// Width between the first points on either side of the main peak where the
/// amplitude falls below `peak/√2`, linearly interpolated between samples.
/// Among equal maxima the one closest to θ = 0 is the main peak.
pub fn beamwidth_3db(p: &PatternGrid) -> Result<Beamwidth, PatternError> {
    let g = p.gains();
    let t = p.theta();
    let max = p.max_gain();
    if !(max > 0.0) {
        return Err(PatternError::NoMaximum);
    }
    let tie = 1e-12 * max;
    let peak = (0..g.len())
        .filter(|&i| g[i] >= max - tie)
        .min_by(|&a, &b| t[a].abs().total_cmp(&t[b].abs()))
        .ok_or(PatternError::NoMaximum)?;
    let level = max * FRAC_1_SQRT_2;
    let cross = |i: usize, j: usize| t[i] + (level - g[i]) * (t[j] - t[i]) / (g[j] - g[i]);

    let mut no_crossing = false;
    let right = match (peak + 1..g.len()).find(|&i| g[i] < level) {
        Some(i) => cross(i - 1, i),
        None => {
            no_crossing = true;
            t[t.len() - 1]
        }
    };
    let left = match (0..peak).rev().find(|&i| g[i] < level) {
        Some(i) => cross(i + 1, i),
        None => {
            no_crossing = true;
            t[0]
        }
    };
    Ok(Beamwidth {
        width: right - left,
        peak: t[peak],
        no_crossing,
    })
}

/// A local maximum of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lobe {
    pub theta: f64,
    /// Relative to the pattern maximum, dB.
    pub level_db: f64,
}

/// Local maxima within `|θ| ≤ max_abs_theta` whose level is at least
/// `threshold_db` (≤ 0) relative to the global maximum, in angle order.
/// Flat tops count once, at their first sample; samples at the ends of the
/// cut are not peaks.
pub fn find_lobes(p: &PatternGrid, threshold_db: f64, max_abs_theta: f64) -> Vec<Lobe> {
    let g = p.gains();
    let t = p.theta();
    let max = p.max_gain();
    if max == 0.0 {
        return Vec::new();
    }
    let floor = max * 10f64.powf(threshold_db / 20.0);
    let mut lobes = Vec::new();
    let mut i = 1;
    while i + 1 < g.len() {
        if g[i] > g[i - 1] {
            let mut j = i;
            while j + 1 < g.len() && g[j + 1] == g[i] {
                j += 1;
            }
            if j + 1 < g.len() && g[j + 1] < g[i] && g[i] >= floor && t[i].abs() <= max_abs_theta {
                lobes.push(Lobe {
                    theta: t[i],
                    level_db: 20.0 * (g[i] / max).log10(),
                });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    lobes
}
