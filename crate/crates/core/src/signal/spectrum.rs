use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::waveform::MIN_SAMPLES;
use super::{SampledWaveform, SignalError};

/// One-sided amplitude spectrum on a uniform grid starting at DC.
///
/// `amplitudes[k]` is the complex amplitude of the cosine at
/// `bin_frequencies[k]`: DC reads the mean value, every other bin reads the
/// peak amplitude of its tone. When the spectrum comes from an even-length
/// DFT the last bin is the Nyquist bin and is scaled like DC.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    resolution: f64,
    bin_frequencies: Vec<f64>,
    amplitudes: Vec<Complex64>,
    nyquist_bin: bool,
}

impl Spectrum {
    /// Builds a spectrum from explicit bins. The bins must start at DC and be
    /// uniformly spaced; none of them is treated as a Nyquist bin.
    pub fn from_bins(
        bin_frequencies: Vec<f64>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, SignalError> {
        if bin_frequencies.len() != amplitudes.len() || bin_frequencies.len() < 2 {
            return Err(SignalError::NonUniformBins);
        }
        let resolution = bin_frequencies[1] - bin_frequencies[0];
        let spectrum = Self {
            resolution,
            bin_frequencies,
            amplitudes,
            nyquist_bin: false,
        };
        spectrum.check_uniform()?;
        Ok(spectrum)
    }

    fn check_uniform(&self) -> Result<(), SignalError> {
        if !(self.resolution.is_finite() && self.resolution > 0.0) {
            return Err(SignalError::NonUniformBins);
        }
        let tol = 1e-9 * self.resolution;
        let uniform = self
            .bin_frequencies
            .iter()
            .enumerate()
            .all(|(k, &f)| (f - k as f64 * self.resolution).abs() <= tol * (1.0 + k as f64));
        if uniform {
            Ok(())
        } else {
            Err(SignalError::NonUniformBins)
        }
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn bin_frequencies(&self) -> &[f64] {
        &self.bin_frequencies
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn has_nyquist_bin(&self) -> bool {
        self.nyquist_bin
    }

    /// Index of the bin at `frequency`, if it lies within a millionth of a
    /// bin of one.
    pub fn bin_index(&self, frequency: f64) -> Option<usize> {
        let k = frequency / self.resolution;
        let nearest = k.round();
        if nearest < 0.0 || (k - nearest).abs() > 1e-6 {
            return None;
        }
        let idx = nearest as usize;
        (idx < self.len()).then_some(idx)
    }

    /// Complex amplitude at `frequency` (see [`Spectrum::bin_index`]).
    pub fn amplitude_at(&self, frequency: f64) -> Option<Complex64> {
        self.bin_index(frequency).map(|k| self.amplitudes[k])
    }

    pub fn magnitude_at(&self, frequency: f64) -> Option<f64> {
        self.amplitude_at(frequency).map(|c| c.norm())
    }

    pub fn peak_magnitude(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Mean power of the time signal this spectrum describes.
    pub fn mean_power(&self) -> f64 {
        let last = self.len() - 1;
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k == 0 || (self.nyquist_bin && k == last) {
                    c.norm_sqr()
                } else {
                    0.5 * c.norm_sqr()
                }
            })
            .sum()
    }

    /// Two-sided coefficient at bin `m` (negative `m` allowed).
    ///
    /// A Nyquist bin is split evenly between `±m` like any other bin, which
    /// reads it as a continuous-time cosine at half the sample rate.
    fn two_sided(&self, m: isize) -> Complex64 {
        let k = m.unsigned_abs();
        let c = self.amplitudes[k];
        if m == 0 {
            c
        } else if m > 0 {
            0.5 * c
        } else {
            0.5 * c.conj()
        }
    }
}

/// One-sided DFT of `w`. Resolution is `sample_rate / N`; phases refer to
/// the first sample.
pub fn dft_spectrum(w: &SampledWaveform) -> Result<Spectrum, SignalError> {
    let n = w.len();
    if n < MIN_SAMPLES {
        return Err(SignalError::TooFewSamples { count: n });
    }
    let mut buf: Vec<Complex64> = w.samples().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let half = n / 2;
    let even = n % 2 == 0;
    let resolution = w.sample_rate() / n as f64;
    let inv_n = 1.0 / n as f64;
    let amplitudes = (0..=half)
        .map(|k| {
            let scale = if k == 0 || (even && k == half) {
                inv_n
            } else {
                2.0 * inv_n
            };
            buf[k] * scale
        })
        .collect();
    Ok(Spectrum {
        resolution,
        bin_frequencies: (0..=half).map(|k| k as f64 * resolution).collect(),
        amplitudes,
        nyquist_bin: even,
    })
}

/// Spectrum of the squared signal, computed as the linear convolution of the
/// two-sided spectrum with itself.
///
/// Output bins run from DC to twice the input's top bin at the same
/// resolution. When the squared content stays below the Nyquist frequency
/// of the original record this agrees bin-for-bin with
/// `dft_spectrum(square_law_mix(w))`.
pub fn spectrum_self_convolution(s: &Spectrum) -> Result<Spectrum, SignalError> {
    s.check_uniform()?;
    let top = (s.len() - 1) as isize;
    let out_top = 2 * top;
    let amplitudes = (0..=out_top)
        .map(|n| {
            let lo = (n - top).max(-top);
            let hi = top.min(n + top);
            let b: Complex64 = (lo..=hi).map(|m| s.two_sided(m) * s.two_sided(n - m)).sum();
            if n == 0 {
                Complex64::new(b.re, 0.0)
            } else {
                2.0 * b
            }
        })
        .collect();
    Ok(Spectrum {
        resolution: s.resolution,
        bin_frequencies: (0..=out_top).map(|k| k as f64 * s.resolution).collect(),
        amplitudes,
        nyquist_bin: false,
    })
}
