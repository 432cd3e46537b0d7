use std::f64::consts::PI;

use serde::Serialize;

use super::ArrayError;
use crate::signal::wrap_phase;

/// Minimum distance below which two elements count as coincident, metres.
const COINCIDENCE_TOLERANCE: f64 = 1e-9;

/// Planar array in the z = 0 plane.
///
/// Element 0 is the phase reference. Each element may carry an RF phase
/// offset (for instance a rotated feed) that applies equally to every tone it
/// receives.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrayGeometry {
    positions: Vec<[f64; 2]>,
    rf_phase_offsets: Vec<f64>,
}

impl ArrayGeometry {
    pub fn new(positions: Vec<[f64; 2]>) -> Result<Self, ArrayError> {
        let n = positions.len();
        Self::with_offsets(positions, vec![0.0; n])
    }

    /// Geometry with per-element RF phase offsets in radians.
    pub fn with_offsets(
        positions: Vec<[f64; 2]>,
        rf_phase_offsets: Vec<f64>,
    ) -> Result<Self, ArrayError> {
        if positions.is_empty() {
            return Err(ArrayError::EmptyGeometry);
        }
        if rf_phase_offsets.len() != positions.len() {
            return Err(ArrayError::InvalidParameter(format!(
                "{} phase offsets for {} elements",
                rf_phase_offsets.len(),
                positions.len()
            )));
        }
        if let Some(k) = positions
            .iter()
            .position(|p| !(p[0].is_finite() && p[1].is_finite()))
        {
            return Err(ArrayError::NonFinitePosition(k));
        }
        if rf_phase_offsets.iter().any(|o| !o.is_finite()) {
            return Err(ArrayError::InvalidParameter("phase offsets must be finite".into()));
        }
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                let d = (positions[i][0] - positions[j][0]).hypot(positions[i][1] - positions[j][1]);
                if d < COINCIDENCE_TOLERANCE {
                    return Err(ArrayError::CoincidentElements(i, j));
                }
            }
        }
        Ok(Self {
            positions,
            rf_phase_offsets: rf_phase_offsets.into_iter().map(wrap_phase).collect(),
        })
    }

    /// `n` elements along x with spacing `d`, starting at the origin.
    pub fn linear(n: usize, d: f64) -> Result<Self, ArrayError> {
        Self::new((0..n).map(|k| [k as f64 * d, 0.0]).collect())
    }

    /// `columns` × `rows` grid with spacings `dx`, `dy`; row-major (x fastest),
    /// element 0 at the origin.
    pub fn rectangular(columns: usize, rows: usize, dx: f64, dy: f64) -> Result<Self, ArrayError> {
        let mut positions = Vec::with_capacity(columns * rows);
        for r in 0..rows {
            for c in 0..columns {
                positions.push([c as f64 * dx, r as f64 * dy]);
            }
        }
        Self::new(positions)
    }

    /// Same positions, new phase offsets.
    pub fn set_rf_phase_offsets(&self, offsets: Vec<f64>) -> Result<Self, ArrayError> {
        Self::with_offsets(self.positions.clone(), offsets)
    }

    /// Every element shifted by `(dx, dy)`.
    pub fn translated(&self, dx: f64, dy: f64) -> Result<Self, ArrayError> {
        Self::with_offsets(
            self.positions.iter().map(|p| [p[0] + dx, p[1] + dy]).collect(),
            self.rf_phase_offsets.clone(),
        )
    }

    /// Parses a text table with one element per line: `x_m, y_m` and an
    /// optional `rf_phase_offset_deg`. Fields may be separated by commas or
    /// whitespace; blank lines, `#` comments and a header line starting with
    /// `x_m` are ignored.
    pub fn parse_table(text: &str) -> Result<Self, ArrayError> {
        let mut positions = Vec::new();
        let mut offsets = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with("x_m") {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(ArrayError::Parse {
                    line: idx + 1,
                    message: format!("expected 2 or 3 fields, found {}", fields.len()),
                });
            }
            let mut nums = [0.0f64; 3];
            for (slot, field) in nums.iter_mut().zip(&fields) {
                *slot = field.parse().map_err(|_| ArrayError::Parse {
                    line: idx + 1,
                    message: format!("not a number: {field:?}"),
                })?;
            }
            positions.push([nums[0], nums[1]]);
            offsets.push(nums[2].to_radians());
        }
        Self::with_offsets(positions, offsets)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// Radians, wrapped into `[-π, π)`.
    pub fn rf_phase_offsets(&self) -> &[f64] {
        &self.rf_phase_offsets
    }

    /// Position of element `k` relative to element 0.
    pub(crate) fn relative(&self, k: usize) -> Result<[f64; 2], ArrayError> {
        let p = self.positions.get(k).ok_or(ArrayError::IndexOutOfRange {
            index: k,
            len: self.len(),
        })?;
        let o = self.positions[0];
        Ok([p[0] - o[0], p[1] - o[1]])
    }
}

/// Arrival direction: `theta` from broadside (+z), `phi` from +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// `theta` must lie in `[0, π]`; `phi` is wrapped into `[-π, π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self, ArrayError> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(ArrayError::InvalidDirection { theta, phi });
        }
        Ok(Self {
            theta,
            phi: wrap_phase(phi),
        })
    }

    pub fn from_degrees(theta_deg: f64, phi_deg: f64) -> Result<Self, ArrayError> {
        Self::new(theta_deg.to_radians(), phi_deg.to_radians())
    }

    /// Direction at signed cut angle `angle` (in `[-π/2, π/2]`) in the plane
    /// `phi_cut`. Negative angles point into the half-plane `phi_cut + π`.
    pub fn from_cut(angle: f64, phi_cut: f64) -> Result<Self, ArrayError> {
        if angle < 0.0 {
            Self::new(-angle, phi_cut + PI)
        } else {
            Self::new(angle, phi_cut)
        }
    }

    pub fn broadside() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Projection of the unit arrival vector onto the array plane.
    pub fn in_plane(&self) -> [f64; 2] {
        let s = self.theta.sin();
        [s * self.phi.cos(), s * self.phi.sin()]
    }
}

/// Two tones arriving as a plane wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoToneIllumination {
    f_i: f64,
    f_ii: f64,
    amplitudes: (f64, f64),
    direction: Direction,
}

impl TwoToneIllumination {
    pub fn new(
        f_i: f64,
        f_ii: f64,
        amplitudes: (f64, f64),
        direction: Direction,
    ) -> Result<Self, ArrayError> {
        if !(f_i.is_finite() && f_ii.is_finite() && f_i > 0.0 && f_ii > 0.0) {
            return Err(ArrayError::InvalidParameter(format!(
                "tone frequencies must be positive, got {f_i}, {f_ii}"
            )));
        }
        if f_i == f_ii {
            return Err(ArrayError::DegenerateEqualFrequencies(f_i));
        }
        let (a1, a2) = amplitudes;
        if !(a1.is_finite() && a2.is_finite() && a1 >= 0.0 && a2 >= 0.0) {
            return Err(ArrayError::InvalidParameter(
                "tone amplitudes must be non-negative".into(),
            ));
        }
        Ok(Self {
            f_i,
            f_ii,
            amplitudes,
            direction,
        })
    }

    pub fn f_i(&self) -> f64 {
        self.f_i
    }

    pub fn f_ii(&self) -> f64 {
        self.f_ii
    }

    pub fn amplitudes(&self) -> (f64, f64) {
        self.amplitudes
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn if_frequency(&self) -> f64 {
        (self.f_i - self.f_ii).abs()
    }

    /// Same tones from another direction.
    pub fn towards(&self, direction: Direction) -> Self {
        Self { direction, ..*self }
    }
}
