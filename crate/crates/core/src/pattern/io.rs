use std::io::{Read, Write};

use serde::Serialize;

use super::{PatternError, PatternGrid};
use crate::format::sig9;
use crate::units::amplitude_ratio_db;

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Writes `theta_deg,gain_db` with gains as 20·log₁₀ amplitude.
pub fn write_pattern_csv<W: Write>(p: &PatternGrid, out: W) -> Result<(), PatternError> {
    let mut w = writer(out);
    w.write_record(["theta_deg", "gain_db"])?;
    for (t, g) in p.theta().iter().zip(p.gains_db()) {
        w.write_record([sig9(t.to_degrees()), sig9(g)])?;
    }
    w.flush().map_err(|e| PatternError::Csv(e.to_string()))
}

/// Reads a `theta_deg,gain_db` table into linear amplitudes.
pub fn read_pattern_csv<R: Read>(
    input: R,
    phi_cut: f64,
    frequency: f64,
) -> Result<PatternGrid, PatternError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| PatternError::Csv(format!("missing column {name}")))
    };
    let (ti, gi) = (col("theta_deg")?, col("gain_db")?);
    let mut theta = Vec::new();
    let mut gains = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64, PatternError> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| PatternError::Csv(format!("row {}: bad number", row + 2)))
        };
        theta.push(field(ti)?.to_radians());
        gains.push(10f64.powf(field(gi)? / 20.0));
    }
    PatternGrid::new(theta, phi_cut, gains, frequency)
}

/// One line of a pattern comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalPatternRow {
    pub theta_deg: f64,
    /// Self-mix element pattern, dB.
    pub gain_db: f64,
    pub af_if: f64,
    pub af_rf: f64,
    pub total_if_db: f64,
    pub total_rf_db: f64,
}

impl TotalPatternRow {
    /// Row for element gains `sm` (IF) and `rf_element` (RF) and the two
    /// array factors.
    pub fn new(theta: f64, sm: f64, rf_element: f64, af_if: f64, af_rf: f64) -> Self {
        Self {
            theta_deg: theta.to_degrees(),
            gain_db: amplitude_ratio_db(sm),
            af_if,
            af_rf,
            total_if_db: amplitude_ratio_db(sm * af_if),
            total_rf_db: amplitude_ratio_db(rf_element * af_rf),
        }
    }
}

/// Writes `theta_deg,gain_db,af_if,af_rf,total_if_db,total_rf_db`.
pub fn write_total_pattern_csv<W: Write>(
    rows: &[TotalPatternRow],
    out: W,
) -> Result<(), PatternError> {
    let mut w = writer(out);
    w.write_record(["theta_deg", "gain_db", "af_if", "af_rf", "total_if_db", "total_rf_db"])?;
    for r in rows {
        w.write_record([
            sig9(r.theta_deg),
            sig9(r.gain_db),
            sig9(r.af_if),
            sig9(r.af_rf),
            sig9(r.total_if_db),
            sig9(r.total_rf_db),
        ])?;
    }
    w.flush().map_err(|e| PatternError::Csv(e.to_string()))
}
