use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{simulate_mixing, ConversionResult, DiodeError, MixingChain};
use crate::format::sig9;
use crate::signal::ToneSpec;

/// Two tones `f_low` and `f_low + spacing`; the second is `second_offset_db`
/// relative to the first in power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TonePair {
    pub f_low: f64,
    pub spacing: f64,
    pub second_offset_db: f64,
}

impl TonePair {
    pub fn new(f_low: f64, spacing: f64, second_offset_db: f64) -> Result<Self, DiodeError> {
        if !(f_low > 0.0 && spacing > 0.0 && f_low.is_finite() && spacing.is_finite()) {
            return Err(DiodeError::InvalidGrid(format!(
                "tone pair needs positive frequency and spacing, got {f_low}, {spacing}"
            )));
        }
        if !second_offset_db.is_finite() {
            return Err(DiodeError::InvalidGrid("power offset must be finite".into()));
        }
        Ok(Self {
            f_low,
            spacing,
            second_offset_db,
        })
    }

    /// Tones at source power `power_dbm` (first) and `power_dbm + offset`.
    pub fn tones(&self, power_dbm: f64, impedance: f64) -> Result<[ToneSpec; 2], DiodeError> {
        Ok([
            ToneSpec::from_dbm(self.f_low, power_dbm, impedance, 0.0)?,
            ToneSpec::from_dbm(
                self.f_low + self.spacing,
                power_dbm + self.second_offset_db,
                impedance,
                0.0,
            )?,
        ])
    }
}

/// What the second sweep dimension varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepAxis {
    InputPowerDbm,
    CenterFrequencyHz,
}

impl SweepAxis {
    pub fn column_name(&self) -> &'static str {
        match self {
            Self::InputPowerDbm => "input_power_dbm",
            Self::CenterFrequencyHz => "center_freq_hz",
        }
    }
}

/// Grid of mixing results, row-major with bias as the outer index.
///
/// A cell whose simulation failed holds its error; the other cells are
/// unaffected.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    axis: SweepAxis,
    bias: Vec<f64>,
    values: Vec<f64>,
    cells: Vec<Result<ConversionResult, DiodeError>>,
}

impl SweepResult {
    pub fn axis(&self) -> SweepAxis {
        self.axis
    }

    pub fn bias_grid(&self) -> &[f64] {
        &self.bias
    }

    pub fn axis_values(&self) -> &[f64] {
        &self.values
    }

    pub fn cells(&self) -> &[Result<ConversionResult, DiodeError>] {
        &self.cells
    }

    pub fn cell(&self, bias_index: usize, value_index: usize) -> &Result<ConversionResult, DiodeError> {
        &self.cells[bias_index * self.values.len() + value_index]
    }

    /// IF powers over the bias grid at one axis value; `None` if any cell in
    /// that column failed.
    pub fn column_if_power(&self, value_index: usize) -> Option<Vec<f64>> {
        (0..self.bias.len())
            .map(|b| self.cell(b, value_index).as_ref().ok().map(|r| r.if_power_dbm))
            .collect()
    }

    /// Max minus min IF power across bias at one axis value, dB.
    pub fn bias_spread_db(&self, value_index: usize) -> Option<f64> {
        let col = self.column_if_power(value_index)?;
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max - min)
    }

    /// Bias voltage with the highest IF power at one axis value (first on ties).
    pub fn best_bias(&self, value_index: usize) -> Option<f64> {
        let col = self.column_if_power(value_index)?;
        let mut best = 0;
        for (i, p) in col.iter().enumerate() {
            if *p > col[best] {
                best = i;
            }
        }
        Some(self.bias[best])
    }

    /// CSV with columns `bias_v`, the axis column, `if_power_dbm`,
    /// `dc_current_a`. Failed cells are written as `NaN`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(["bias_v", self.axis.column_name(), "if_power_dbm", "dc_current_a"])?;
        for (b, &v_bias) in self.bias.iter().enumerate() {
            for (j, &x) in self.values.iter().enumerate() {
                let (p, i) = match self.cell(b, j) {
                    Ok(r) => (r.if_power_dbm, r.dc_current),
                    Err(_) => (f64::NAN, f64::NAN),
                };
                w.write_record([sig9(v_bias), sig9(x), sig9(p), sig9(i)])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<(), DiodeError> {
    if grid.is_empty() {
        return Err(DiodeError::InvalidGrid(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(DiodeError::InvalidGrid(format!("{name} grid has non-finite values")));
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(DiodeError::InvalidGrid(format!("{name} grid is not monotone")));
    }
    Ok(())
}

/// IF output over bias voltage × input power for a fixed tone pair.
///
/// `power_dbm` is the source power of the first tone; the second follows
/// `pair.second_offset_db`. Cells are evaluated in parallel and returned in
/// grid order.
pub fn bias_power_sweep(
    template: &MixingChain,
    bias_grid: &[f64],
    power_grid: &[f64],
    pair: TonePair,
) -> Result<SweepResult, DiodeError> {
    check_grid("bias", bias_grid)?;
    check_grid("power", power_grid)?;
    let cells = evaluate(template, bias_grid, power_grid, |chain, power| {
        let tones = pair.tones(power, chain.source_impedance())?;
        simulate_mixing(chain, &tones, pair.spacing)
    });
    Ok(SweepResult {
        axis: SweepAxis::InputPowerDbm,
        bias: bias_grid.to_vec(),
        values: power_grid.to_vec(),
        cells,
    })
}

/// IF output over bias voltage × centre frequency. Tones sit at
/// `f ∓ spacing/2` with source powers `powers.0` (lower) and `powers.1`.
pub fn bias_frequency_sweep(
    template: &MixingChain,
    bias_grid: &[f64],
    center_frequencies: &[f64],
    spacing: f64,
    powers: (f64, f64),
) -> Result<SweepResult, DiodeError> {
    check_grid("bias", bias_grid)?;
    check_grid("frequency", center_frequencies)?;
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(DiodeError::InvalidGrid(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    let cells = evaluate(template, bias_grid, center_frequencies, |chain, f| {
        let pair = TonePair::new(f - 0.5 * spacing, spacing, powers.1 - powers.0)?;
        let tones = pair.tones(powers.0, chain.source_impedance())?;
        simulate_mixing(chain, &tones, spacing)
    });
    Ok(SweepResult {
        axis: SweepAxis::CenterFrequencyHz,
        bias: bias_grid.to_vec(),
        values: center_frequencies.to_vec(),
        cells,
    })
}

fn evaluate<F>(
    template: &MixingChain,
    bias: &[f64],
    values: &[f64],
    cell: F,
) -> Vec<Result<ConversionResult, DiodeError>>
where
    F: Fn(&MixingChain, f64) -> Result<ConversionResult, DiodeError> + Sync,
{
    let cols = values.len();
    (0..bias.len() * cols)
        .into_par_iter()
        .map(|idx| {
            let chain = template.with_bias_voltage(bias[idx / cols])?;
            cell(&chain, values[idx % cols])
        })
        .collect()
}
