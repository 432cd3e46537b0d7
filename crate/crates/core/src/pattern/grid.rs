use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::PatternError;

/// Whether a pattern describes an RF element or a self-mixed IF product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PatternBand {
    Rf,
    If,
}

/// Amplitude pattern along one cut.
///
/// `theta` holds signed cut angles in `[-π/2, π/2]`, strictly increasing;
/// negative angles lie in the half-plane `phi_cut + π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternGrid {
    theta: Vec<f64>,
    phi_cut: f64,
    gains: Vec<f64>,
    frequency: f64,
    band: PatternBand,
}

const EDGE_SLACK: f64 = 1e-12;

impl PatternGrid {
    pub fn new(
        theta: Vec<f64>,
        phi_cut: f64,
        gains: Vec<f64>,
        frequency: f64,
    ) -> Result<Self, PatternError> {
        Self::with_band(theta, phi_cut, gains, frequency, PatternBand::Rf)
    }

    pub fn with_band(
        theta: Vec<f64>,
        phi_cut: f64,
        gains: Vec<f64>,
        frequency: f64,
        band: PatternBand,
    ) -> Result<Self, PatternError> {
        validate_theta(&theta)?;
        if gains.len() != theta.len() {
            return Err(PatternError::InvalidGrid(format!(
                "{} gains for {} angles",
                gains.len(),
                theta.len()
            )));
        }
        if gains.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(PatternError::InvalidPattern(
                "gains must be finite and non-negative".into(),
            ));
        }
        if !phi_cut.is_finite() {
            return Err(PatternError::InvalidGrid("cut angle must be finite".into()));
        }
        if !(frequency.is_finite() && frequency >= 0.0) {
            return Err(PatternError::InvalidPattern(format!(
                "frequency must be non-negative, got {frequency}"
            )));
        }
        Ok(Self {
            theta,
            phi_cut,
            gains,
            frequency,
            band,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi_cut(&self) -> f64 {
        self.phi_cut
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn band(&self) -> PatternBand {
        self.band
    }

    pub fn len(&self) -> usize {
        self.gains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains.is_empty()
    }

    pub fn max_gain(&self) -> f64 {
        self.gains.iter().copied().fold(0.0, f64::max)
    }

    /// Gains divided by their maximum. An all-zero pattern is returned
    /// unchanged.
    pub fn normalized(&self) -> Self {
        let m = self.max_gain();
        if m == 0.0 {
            return self.clone();
        }
        self.map_gains(|g| g / m)
    }

    /// Every gain multiplied by `factor` (≥ 0).
    pub fn scaled(&self, factor: f64) -> Result<Self, PatternError> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(PatternError::InvalidPattern(format!(
                "scale factor must be non-negative, got {factor}"
            )));
        }
        Ok(self.map_gains(|g| g * factor))
    }

    /// Gains in dB (20·log₁₀, floored at −200).
    pub fn gains_db(&self) -> Vec<f64> {
        self.gains
            .iter()
            .map(|&g| crate::units::amplitude_ratio_db(g))
            .collect()
    }

    pub(crate) fn map_gains(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            gains: self.gains.iter().map(|&g| f(g)).collect(),
            ..self.clone()
        }
    }

    pub(crate) fn same_cut(&self, other: &Self) -> Result<(), PatternError> {
        if self.theta.len() != other.theta.len()
            || self
                .theta
                .iter()
                .zip(&other.theta)
                .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(PatternError::GridMismatch("theta grids differ".into()));
        }
        if (self.phi_cut - other.phi_cut).abs() > 1e-12 {
            return Err(PatternError::GridMismatch("cut planes differ".into()));
        }
        Ok(())
    }
}

pub(crate) fn validate_theta(theta: &[f64]) -> Result<(), PatternError> {
    if theta.len() < 2 {
        return Err(PatternError::InvalidGrid("need at least two angles".into()));
    }
    if theta
        .iter()
        .any(|t| !t.is_finite() || t.abs() > FRAC_PI_2 + EDGE_SLACK)
    {
        return Err(PatternError::InvalidGrid(
            "angles must lie within ±90°".into(),
        ));
    }
    if theta.windows(2).any(|w| w[1] <= w[0]) {
        return Err(PatternError::InvalidGrid(
            "angles must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Uniform grid from `start_deg` to `stop_deg` inclusive, in radians.
/// The step is adjusted so the grid ends exactly on `stop_deg`.
pub fn theta_grid_deg(start_deg: f64, stop_deg: f64, step_deg: f64) -> Result<Vec<f64>, PatternError> {
    if !(step_deg > 0.0 && stop_deg > start_deg && start_deg.is_finite() && stop_deg.is_finite()) {
        return Err(PatternError::InvalidGrid(format!(
            "need start < stop and positive step, got {start_deg}..{stop_deg} by {step_deg}"
        )));
    }
    let steps = ((stop_deg - start_deg) / step_deg - 1e-9).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| (start_deg + (stop_deg - start_deg) * k as f64 / steps as f64).to_radians())
        .collect();
    validate_theta(&grid)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_cut_grid() {
        let g = theta_grid_deg(-90.0, 90.0, 0.25).unwrap();
        assert_eq!(g.len(), 721);
        assert_eq!(g[360], 0.0);
        assert_eq!(g[720], FRAC_PI_2);
    }

    #[test]
    fn grid_validation() {
        assert!(PatternGrid::new(vec![0.0, 0.0], 0.0, vec![1.0, 1.0], 1e9).is_err());
        assert!(PatternGrid::new(vec![0.0, 2.0], 0.0, vec![1.0, 1.0], 1e9).is_err());
        assert!(PatternGrid::new(vec![0.0, 0.1], 0.0, vec![1.0, -1.0], 1e9).is_err());
        assert!(PatternGrid::new(vec![0.0, 0.1], 0.0, vec![1.0], 1e9).is_err());
        assert!(theta_grid_deg(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn normalization() {
        let p = PatternGrid::new(vec![0.0, 0.1, 0.2], 0.0, vec![2.0, 4.0, 1.0], 1e9).unwrap();
        assert_eq!(p.normalized().gains(), &[0.5, 1.0, 0.25]);
        assert_eq!(p.gains_db()[1], 20.0 * 4f64.log10());
    }
}
