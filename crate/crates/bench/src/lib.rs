//! Fixed workloads shared by the benchmarks.

use selfmix_core::diode::TonePair;
use selfmix_core::signal::synthesize_samples;
use selfmix_core::{ArrayGeometry, Direction, SampledWaveform, ToneSpec, TwoToneIllumination};

/// The 4 × 2 array: 32 mm columns, 36 mm rows.
pub fn four_by_two() -> ArrayGeometry {
    ArrayGeometry::rectangular(4, 2, 0.032, 0.036).expect("valid layout")
}

/// 37.5 / 38.5 GHz tones with amplitudes 1 and 0.5.
pub fn two_tone() -> TwoToneIllumination {
    TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), Direction::broadside()).expect("valid tones")
}

/// Five exact-bin tones on a 4096-sample grid.
pub fn five_tone_waveform() -> SampledWaveform {
    let tones: Vec<ToneSpec> = (0..5)
        .map(|k| ToneSpec::new(37.0 + 91.0 * k as f64, 1.0 / (k + 1) as f64, 0.3 * k as f64).expect("valid tone"))
        .collect();
    synthesize_samples(&tones, 4096.0, 4096, 0.0).expect("valid grid")
}

/// −40 / −45 dBm pair with 1 GHz spacing.
pub fn tone_pair() -> TonePair {
    TonePair::new(37.5e9, 1e9, -5.0).expect("valid pair")
}

/// Cut angles from −90° to 90° in 0.25° steps.
pub fn cut_angles() -> Vec<f64> {
    (0..=720).map(|k| (-90.0 + 0.25 * k as f64).to_radians()).collect()
}
