use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::Serialize;

use super::grid::validate_theta;
use super::{PatternError, PatternGrid};

/// Shape of an analytic element pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PatternKind {
    Isotropic,
    /// `max(cos θ, 0)^q`.
    CosQ { q: f64 },
    /// Two Gaussian beams at `±tilt`, each `width` wide at half amplitude.
    /// The sampled sum is normalised to its maximum on the grid.
    TwoBeam { tilt: f64, width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticPattern {
    kind: PatternKind,
    frequency: f64,
}

impl AnalyticPattern {
    pub fn new(kind: PatternKind, frequency: f64) -> Result<Self, PatternError> {
        match kind {
            PatternKind::Isotropic => {}
            PatternKind::CosQ { q } => {
                if !(q.is_finite() && q >= 0.0) {
                    return Err(PatternError::InvalidPattern(format!(
                        "exponent must be non-negative, got {q}"
                    )));
                }
            }
            PatternKind::TwoBeam { tilt, width } => {
                if !(tilt > 0.0 && tilt < FRAC_PI_2) {
                    return Err(PatternError::InvalidPattern(format!(
                        "beam tilt must lie in (0, π/2), got {tilt}"
                    )));
                }
                if !(width.is_finite() && width > 0.0) {
                    return Err(PatternError::InvalidPattern(format!(
                        "beam width must be positive, got {width}"
                    )));
                }
            }
        }
        if !(frequency.is_finite() && frequency >= 0.0) {
            return Err(PatternError::InvalidPattern(format!(
                "frequency must be non-negative, got {frequency}"
            )));
        }
        Ok(Self { kind, frequency })
    }

    pub fn isotropic(frequency: f64) -> Self {
        Self {
            kind: PatternKind::Isotropic,
            frequency,
        }
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    /// Un-normalised amplitude at cut angle `theta`.
    fn raw(&self, theta: f64) -> f64 {
        match self.kind {
            PatternKind::Isotropic => 1.0,
            PatternKind::CosQ { q } => theta.cos().max(0.0).powf(q),
            PatternKind::TwoBeam { tilt, width } => {
                let beam = |c: f64| (-4.0 * LN_2 * ((theta - c) / width).powi(2)).exp();
                beam(tilt) + beam(-tilt)
            }
        }
    }
}

/// Samples `p` on `theta_grid` along the cut `phi_cut`.
pub fn sample_pattern(
    p: &AnalyticPattern,
    theta_grid: &[f64],
    phi_cut: f64,
) -> Result<PatternGrid, PatternError> {
    validate_theta(theta_grid)?;
    let mut gains: Vec<f64> = theta_grid.iter().map(|&t| p.raw(t)).collect();
    if let PatternKind::TwoBeam { .. } = p.kind {
        let m = gains.iter().copied().fold(0.0, f64::max);
        if m > 0.0 {
            gains.iter_mut().for_each(|g| *g /= m);
        }
    }
    PatternGrid::new(theta_grid.to_vec(), phi_cut, gains, p.frequency)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::theta_grid_deg;

    #[test]
    fn isotropic_is_flat() {
        let grid = theta_grid_deg(-90.0, 90.0, 1.0).unwrap();
        let p = sample_pattern(&AnalyticPattern::isotropic(1e9), &grid, 0.0).unwrap();
        assert!(p.gains().iter().all(|&g| g == 1.0));
    }

    #[test]
    fn cos_squared_at_sixty_degrees() {
        let grid = theta_grid_deg(-90.0, 90.0, 1.0).unwrap();
        let p = AnalyticPattern::new(PatternKind::CosQ { q: 2.0 }, 1e9).unwrap();
        let s = sample_pattern(&p, &grid, 0.0).unwrap();
        assert!((s.gains()[150] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn two_beam_dips_at_broadside() {
        let grid = theta_grid_deg(-90.0, 90.0, 0.5).unwrap();
        let p = AnalyticPattern::new(
            PatternKind::TwoBeam {
                tilt: 30f64.to_radians(),
                width: 20f64.to_radians(),
            },
            1e9,
        )
        .unwrap();
        let s = sample_pattern(&p, &grid, 0.0).unwrap();
        let mid = 180;
        assert_eq!(grid[mid], 0.0);
        assert!(s.gains()[mid] < s.gains()[mid - 1] && s.gains()[mid] < s.gains()[mid + 1]);
        assert!((s.max_gain() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kind_validation() {
        assert!(AnalyticPattern::new(PatternKind::CosQ { q: -1.0 }, 1e9).is_err());
        assert!(AnalyticPattern::new(PatternKind::TwoBeam { tilt: 0.0, width: 0.3 }, 1e9).is_err());
        assert!(AnalyticPattern::new(PatternKind::TwoBeam { tilt: 0.5, width: 0.0 }, 1e9).is_err());
    }
}
