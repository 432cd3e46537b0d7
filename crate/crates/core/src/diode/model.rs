use serde::Serialize;

use super::DiodeError;

/// Junction exponent arguments are clamped here to keep `exp` finite.
pub const EXPONENT_CLAMP: f64 = 60.0;
/// Central-difference step for I-V derivatives, volts.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Thermal voltage kT/q at 300 K, volts.
pub const THERMAL_VOLTAGE_300K: f64 = 0.02585;

const MAX_NEWTON_ITERATIONS: usize = 100;
const RESIDUAL_TOLERANCE: f64 = 1e-12;
const GOLDEN_TOLERANCE: f64 = 1e-9;

/// Shockley diode with an ohmic series resistance.
///
/// The default device is fitted so that the peak of d²i/dv² sits at
/// 0.73 V / 2.5 mA with n = 1.2, which gives I_s ≈ 2.48e-13 A and
/// R_s ≈ 6.20 Ω. See [`DiodeModel::fitted_to_static_optimum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiodeModel {
    saturation_current: f64,
    ideality: f64,
    series_resistance: f64,
    thermal_voltage: f64,
}

impl Default for DiodeModel {
    fn default() -> Self {
        Self::fitted_to_static_optimum(0.73, 2.5e-3, 1.2, THERMAL_VOLTAGE_300K)
            .expect("default fit parameters are valid")
    }
}

impl DiodeModel {
    pub fn new(
        saturation_current: f64,
        ideality: f64,
        series_resistance: f64,
        thermal_voltage: f64,
    ) -> Result<Self, DiodeError> {
        if !(saturation_current.is_finite() && saturation_current > 0.0) {
            return Err(DiodeError::InvalidModel(format!(
                "saturation current must be positive, got {saturation_current}"
            )));
        }
        if !(1.0..=3.0).contains(&ideality) {
            return Err(DiodeError::InvalidModel(format!(
                "ideality must lie in [1, 3], got {ideality}"
            )));
        }
        if !(series_resistance.is_finite() && series_resistance >= 0.0) {
            return Err(DiodeError::InvalidModel(format!(
                "series resistance must be non-negative, got {series_resistance}"
            )));
        }
        if !(thermal_voltage.is_finite() && thermal_voltage > 0.0) {
            return Err(DiodeError::InvalidModel(format!(
                "thermal voltage must be positive, got {thermal_voltage}"
            )));
        }
        Ok(Self {
            saturation_current,
            ideality,
            series_resistance,
            thermal_voltage,
        })
    }

    /// Device whose static optimum (peak of d²i/dv²) is at `(voltage, current)`.
    ///
    /// With junction conductance `G = (i + I_s)/(n·V_T)` the curvature of the
    /// terminal characteristic is `G / (n·V_T·(1 + R_s·G)³)`, which peaks at
    /// `G = 1/(2·R_s)`. That fixes `R_s`; `I_s` then follows from the junction
    /// voltage `v − R_s·i`. The two are solved by fixed-point iteration.
    pub fn fitted_to_static_optimum(
        voltage: f64,
        current: f64,
        ideality: f64,
        thermal_voltage: f64,
    ) -> Result<Self, DiodeError> {
        if !(voltage > 0.0 && current > 0.0) {
            return Err(DiodeError::InvalidModel(
                "optimum voltage and current must be positive".into(),
            ));
        }
        let nvt = ideality * thermal_voltage;
        let mut is = 1e-13;
        let mut rs = 0.0;
        for _ in 0..100 {
            rs = nvt / (2.0 * (current + is));
            let vj = voltage - rs * current;
            let next = current / (vj / nvt).exp_m1();
            let done = ((next - is) / next).abs() < 1e-15;
            is = next;
            if done {
                break;
            }
        }
        Self::new(is, ideality, rs, thermal_voltage)
    }

    pub fn saturation_current(&self) -> f64 {
        self.saturation_current
    }

    pub fn ideality(&self) -> f64 {
        self.ideality
    }

    pub fn series_resistance(&self) -> f64 {
        self.series_resistance
    }

    pub fn thermal_voltage(&self) -> f64 {
        self.thermal_voltage
    }

    /// Copy of this device with a different series resistance.
    pub fn with_series_resistance(&self, series_resistance: f64) -> Result<Self, DiodeError> {
        Self::new(
            self.saturation_current,
            self.ideality,
            series_resistance,
            self.thermal_voltage,
        )
    }

    fn nvt(&self) -> f64 {
        self.ideality * self.thermal_voltage
    }

    /// `I_s·(exp(v/(n·V_T)) − 1)` with the exponent clamped at [`EXPONENT_CLAMP`].
    pub fn junction_current(&self, v_junction: f64) -> f64 {
        let x = (v_junction / self.nvt()).min(EXPONENT_CLAMP);
        self.saturation_current * x.exp_m1()
    }

    /// Current through junction plus series resistance at terminal voltage `v`.
    ///
    /// Solves `i = junction_current(v − i·R_s)` by Newton iteration on the
    /// junction voltage. For `R_s = 0` this is `junction_current(v)` exactly.
    pub fn terminal_current(&self, v_terminal: f64) -> Result<f64, DiodeError> {
        self.solve(v_terminal).map(|(i, _)| i)
    }

    /// Terminal current and its small-signal conductance di/dv.
    pub(crate) fn solve(&self, v: f64) -> Result<(f64, f64), DiodeError> {
        if !v.is_finite() {
            return Err(DiodeError::NoConvergence { voltage: v });
        }
        let is = self.saturation_current;
        let nvt = self.nvt();
        let r = self.series_resistance;
        let conductance = |vj: f64| {
            let x = vj / nvt;
            if x < EXPONENT_CLAMP {
                is * x.exp() / nvt
            } else {
                0.0
            }
        };
        if r == 0.0 {
            return Ok((self.junction_current(v), conductance(v)));
        }

        // g(vj) = vj + R·i_j(vj) − v is convex and increasing; starting right
        // of the root, Newton descends monotonically.
        let mut vj = if v > 0.0 {
            v.min(nvt * (v / (r * is)).ln_1p())
        } else {
            0.0
        };
        let mut converged = false;
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let g = vj + r * self.junction_current(vj) - v;
            let step = g / (1.0 + r * conductance(vj));
            vj -= step;
            if step.abs() <= 1e-15 * vj.abs().max(nvt) {
                converged = true;
                break;
            }
        }
        let i = self.junction_current(vj);
        let residual = (i - self.junction_current(v - i * r)).abs();
        // Evaluating v − i·R in f64 already perturbs the junction current by
        // about g·ε·|v|; the relative tolerance sits on top of that floor.
        let floor = 4.0 * f64::EPSILON * v.abs() * conductance(vj);
        if !converged || residual > RESIDUAL_TOLERANCE * i.abs().max(is) + floor {
            return Err(DiodeError::NoConvergence { voltage: v });
        }
        let g = conductance(vj);
        Ok((i, g / (1.0 + r * g)))
    }
}

/// DC operating point of a diode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BiasPoint {
    pub terminal_voltage: f64,
    pub bias_current: f64,
}

impl BiasPoint {
    /// Operating point of `model` at `terminal_voltage`.
    pub fn at(model: &DiodeModel, terminal_voltage: f64) -> Result<Self, DiodeError> {
        Ok(Self {
            terminal_voltage,
            bias_current: model.terminal_current(terminal_voltage)?,
        })
    }
}

/// First and second derivative of the terminal I-V characteristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IvDerivatives {
    /// Siemens.
    pub di_dv: f64,
    /// Siemens per volt.
    pub d2i_dv2: f64,
}

/// Central finite differences of `terminal_current` with step
/// [`DERIVATIVE_STEP`].
pub fn iv_derivatives(model: &DiodeModel, v_terminal: f64) -> Result<IvDerivatives, DiodeError> {
    let h = DERIVATIVE_STEP;
    let lo = model.terminal_current(v_terminal - h)?;
    let mid = model.terminal_current(v_terminal)?;
    let hi = model.terminal_current(v_terminal + h)?;
    Ok(IvDerivatives {
        di_dv: (hi - lo) / (2.0 * h),
        d2i_dv2: (hi - 2.0 * mid + lo) / (h * h),
    })
}

/// Bias with the largest d²i/dv² in `v_range`, scanned on a 1 mV grid and
/// refined by golden-section search.
pub fn optimal_bias_static(
    model: &DiodeModel,
    v_range: (f64, f64),
) -> Result<BiasPoint, DiodeError> {
    optimal_bias_static_with_step(model, v_range, 1e-3)
}

/// [`optimal_bias_static`] with an explicit initial grid step.
pub fn optimal_bias_static_with_step(
    model: &DiodeModel,
    v_range: (f64, f64),
    grid_step: f64,
) -> Result<BiasPoint, DiodeError> {
    let (lo, hi) = v_range;
    if !(lo.is_finite() && hi.is_finite() && hi > lo && grid_step > 0.0) {
        return Err(DiodeError::InvalidRange { lo, hi });
    }
    if model.series_resistance() == 0.0 {
        return Err(DiodeError::NoInteriorMaximum);
    }
    let curvature = |v: f64| iv_derivatives(model, v).map(|d| d.d2i_dv2);

    let steps = ((hi - lo) / grid_step).ceil() as usize;
    if steps < 2 {
        return Err(DiodeError::NoInteriorMaximum);
    }
    let grid = |k: usize| if k == steps { hi } else { lo + k as f64 * grid_step };
    let mut best = (0, f64::NEG_INFINITY);
    for k in 0..=steps {
        let c = curvature(grid(k))?;
        if c > best.1 {
            best = (k, c);
        }
    }
    if best.0 == 0 || best.0 == steps {
        return Err(DiodeError::NoInteriorMaximum);
    }

    let (mut a, mut b) = (grid(best.0 - 1), grid(best.0 + 1));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = curvature(x1)?;
    let mut f2 = curvature(x2)?;
    while b - a > GOLDEN_TOLERANCE {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = curvature(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = curvature(x1)?;
        }
    }
    BiasPoint::at(model, 0.5 * (a + b))
}
