use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{SampledWaveform, SignalError};

/// Ideal brick-wall filter applied by masking DFT bins.
///
/// Pass bands are closed intervals: a bin exactly on a cutoff is kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FilterSpec {
    LowPass { cutoff_high: f64 },
    BandPass { cutoff_low: f64, cutoff_high: f64 },
}

impl FilterSpec {
    pub fn low_pass(cutoff_high: f64) -> Result<Self, SignalError> {
        if !(cutoff_high.is_finite() && cutoff_high > 0.0) {
            return Err(SignalError::InvalidFilter(format!(
                "cutoff must be positive, got {cutoff_high}"
            )));
        }
        Ok(Self::LowPass { cutoff_high })
    }

    pub fn band_pass(cutoff_low: f64, cutoff_high: f64) -> Result<Self, SignalError> {
        if !(cutoff_low.is_finite() && cutoff_high.is_finite())
            || cutoff_low < 0.0
            || cutoff_high <= cutoff_low
        {
            return Err(SignalError::InvalidFilter(format!(
                "need 0 <= low < high, got [{cutoff_low}, {cutoff_high}]"
            )));
        }
        Ok(Self::BandPass {
            cutoff_low,
            cutoff_high,
        })
    }

    pub fn cutoff_high(&self) -> f64 {
        match *self {
            Self::LowPass { cutoff_high } | Self::BandPass { cutoff_high, .. } => cutoff_high,
        }
    }

    fn cutoff_low(&self) -> f64 {
        match *self {
            Self::LowPass { .. } => 0.0,
            Self::BandPass { cutoff_low, .. } => cutoff_low,
        }
    }

    /// Whether a component at `frequency` ≥ 0 passes.
    pub fn passes(&self, frequency: f64) -> bool {
        // half a ppm of slack so bins computed as k·Δf sit inside closed edges
        let slack = 5e-7 * self.cutoff_high();
        frequency >= self.cutoff_low() - slack && frequency <= self.cutoff_high() + slack
    }
}

/// DFT, zero every bin outside the pass band, inverse DFT.
///
/// Positive and negative frequency bins are masked together, so the output
/// stays real.
pub fn apply_filter(w: &SampledWaveform, f: &FilterSpec) -> Result<SampledWaveform, SignalError> {
    let nyquist = 0.5 * w.sample_rate();
    if f.cutoff_high() > nyquist {
        return Err(SignalError::CutoffAboveNyquist {
            cutoff: f.cutoff_high(),
            nyquist,
        });
    }
    let n = w.len();
    let resolution = w.sample_rate() / n as f64;
    let mut buf: Vec<Complex64> = w.samples().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for (k, c) in buf.iter_mut().enumerate() {
        let freq = k.min(n - k) as f64 * resolution;
        if !f.passes(freq) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let samples = buf.iter().map(|c| c.re * inv_n).collect();
    let limit = w
        .content_limit()
        .map(|l| l.min(f.cutoff_high()))
        .or(Some(f.cutoff_high()));
    Ok(SampledWaveform::new(w.sample_rate(), samples, w.start_time())?.with_content_limit(limit))
}
