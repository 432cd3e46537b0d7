use std::f64::consts::PI;

use serde::Serialize;

use super::{SignalError, ToneSpec};

pub(crate) const MIN_SAMPLES: usize = 16;
const MAX_PLAN_SAMPLES: usize = 1 << 22;

/// Uniformly sampled real voltage waveform.
///
/// `content_limit` is the highest frequency known to be present. Waveforms
/// built from tones track it through squaring and filtering so that
/// [`square_law_mix`] can check aliasing; waveforms built from raw samples
/// leave it unset and are not checked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledWaveform {
    sample_rate: f64,
    samples: Vec<f64>,
    start_time: f64,
    content_limit: Option<f64>,
}

impl SampledWaveform {
    pub fn new(sample_rate: f64, samples: Vec<f64>, start_time: f64) -> Result<Self, SignalError> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(SignalError::InvalidParameter(format!(
                "sample rate must be positive, got {sample_rate}"
            )));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(SignalError::TooFewSamples {
                count: samples.len(),
            });
        }
        Ok(Self {
            sample_rate,
            samples,
            start_time,
            content_limit: None,
        })
    }

    pub(crate) fn with_content_limit(mut self, limit: Option<f64>) -> Self {
        self.content_limit = limit;
        self
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn content_limit(&self) -> Option<f64> {
        self.content_limit
    }

    /// Time of sample `i`.
    pub fn time(&self, i: usize) -> f64 {
        self.start_time + i as f64 / self.sample_rate
    }

    /// Mean of the squared samples.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64
    }

    /// Sample-wise sum of two waveforms on the same grid.
    pub fn add(&self, other: &SampledWaveform) -> Result<SampledWaveform, SignalError> {
        if self.sample_rate != other.sample_rate || self.len() != other.len() {
            return Err(SignalError::InvalidParameter(
                "waveforms differ in sample rate or length".into(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        let limit = match (self.content_limit, other.content_limit) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        Ok(SampledWaveform {
            sample_rate: self.sample_rate,
            samples,
            start_time: self.start_time,
            content_limit: limit,
        })
    }

    /// Every sample multiplied by `factor`.
    pub fn scale(&self, factor: f64) -> SampledWaveform {
        SampledWaveform {
            samples: self.samples.iter().map(|x| x * factor).collect(),
            ..self.clone()
        }
    }
}

/// Samples `Σ aₖ sin(2π fₖ t + φₖ)` for `duration` seconds starting at t = 0.
///
/// The sample count is `round(duration · sample_rate)`. At least four periods
/// of the slowest tone are needed for meaningful tone extraction, but shorter
/// records are accepted.
pub fn synthesize_waveform(
    tones: &[ToneSpec],
    sample_rate: f64,
    duration: f64,
) -> Result<SampledWaveform, SignalError> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(SignalError::InvalidParameter(format!(
            "duration must be positive, got {duration}"
        )));
    }
    let count = (duration * sample_rate).round() as usize;
    synthesize_samples(tones, sample_rate, count, 0.0)
}

/// Samples `count` points of the tone sum starting at `start_time`.
pub fn synthesize_samples(
    tones: &[ToneSpec],
    sample_rate: f64,
    count: usize,
    start_time: f64,
) -> Result<SampledWaveform, SignalError> {
    let f_max = tones
        .iter()
        .map(ToneSpec::frequency)
        .fold(None, |acc: Option<f64>, f| Some(acc.map_or(f, |a| a.max(f))))
        .ok_or(SignalError::EmptyToneList)?;
    if !(sample_rate > 2.0 * f_max) {
        return Err(SignalError::NyquistViolation {
            sample_rate,
            required: 2.0 * f_max,
        });
    }
    if count < MIN_SAMPLES {
        return Err(SignalError::TooFewSamples { count });
    }
    let mut samples = vec![0.0; count];
    for tone in tones {
        if tone.amplitude() == 0.0 {
            continue;
        }
        let offset = 2.0 * PI * tone.frequency() * start_time + tone.phase();
        for (i, s) in samples.iter_mut().enumerate() {
            // fmod keeps the cycle count exact for integer-Hz tones on integer-Hz grids
            let cycles = (tone.frequency() * i as f64) % sample_rate / sample_rate;
            *s += tone.amplitude() * (2.0 * PI * cycles + offset).sin();
        }
    }
    Ok(SampledWaveform {
        sample_rate,
        samples,
        start_time,
        content_limit: Some(f_max),
    })
}

/// Point-wise square `y = x²`.
///
/// The squared waveform holds content up to twice the input limit, so the
/// sample rate must exceed four times the highest input frequency when that
/// limit is known.
pub fn square_law_mix(w: &SampledWaveform) -> Result<SampledWaveform, SignalError> {
    if let Some(limit) = w.content_limit {
        let required = 4.0 * limit;
        if !(w.sample_rate > required) {
            return Err(SignalError::NyquistViolation {
                sample_rate: w.sample_rate,
                required,
            });
        }
    }
    Ok(SampledWaveform {
        sample_rate: w.sample_rate,
        samples: w.samples.iter().map(|x| x * x).collect(),
        start_time: w.start_time,
        content_limit: w.content_limit.map(|f| 2.0 * f),
    })
}

/// Sample grid on which every requested frequency falls on an exact DFT bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingPlan {
    pub sample_rate: f64,
    pub sample_count: usize,
    /// Bin spacing, `sample_rate / sample_count`.
    pub resolution: f64,
}

/// Smallest even-length grid with rate above `min_sample_rate` whose bin
/// spacing divides every frequency in `frequencies`.
///
/// Frequencies are treated as integer hertz; the bin spacing is their
/// greatest common divisor.
pub fn commensurate_sampling(
    frequencies: &[f64],
    min_sample_rate: f64,
) -> Result<SamplingPlan, SignalError> {
    let mut step: u64 = 0;
    for &f in frequencies {
        if !(f.is_finite() && f > 0.0) {
            return Err(SignalError::InvalidParameter(format!(
                "frequency must be positive, got {f}"
            )));
        }
        let hz = f.round();
        if (f - hz).abs() > 1e-3 || hz > 9.0e15 {
            return Err(SignalError::NonCommensurate);
        }
        step = gcd(step, hz as u64);
    }
    if step == 0 {
        return Err(SignalError::EmptyToneList);
    }
    let resolution = step as f64;
    let mut count = (min_sample_rate / resolution).floor() as usize + 1;
    count = count.max(MIN_SAMPLES);
    if count % 2 == 1 {
        count += 1;
    }
    if count > MAX_PLAN_SAMPLES {
        return Err(SignalError::NonCommensurate);
    }
    Ok(SamplingPlan {
        sample_rate: resolution * count as f64,
        sample_count: count,
        resolution,
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
