use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use selfmix_bench::{cut_angles, five_tone_waveform, four_by_two, tone_pair, two_tone};
use selfmix_core::array::ElementGain;
use selfmix_core::{
    bias_power_sweep, dft_spectrum, if_array_factor, optimal_bias_static, rf_array_factor,
    simulate_array_timedomain, simulate_mixing, spectrum_self_convolution, square_law_mix,
    Direction, DiodeModel, MixingChain,
};

fn signal(c: &mut Criterion) {
    let w = five_tone_waveform();
    c.bench_function("dft_spectrum 4096", |b| b.iter(|| dft_spectrum(black_box(&w))));
    let s = dft_spectrum(&w).unwrap();
    c.bench_function("spectrum_self_convolution 4096", |b| {
        b.iter(|| spectrum_self_convolution(black_box(&s)))
    });
    c.bench_function("square_law_mix + dft 4096", |b| {
        b.iter(|| dft_spectrum(&square_law_mix(black_box(&w)).unwrap()))
    });
}

fn diode(c: &mut Criterion) {
    let d = DiodeModel::default();
    c.bench_function("optimal_bias_static", |b| b.iter(|| optimal_bias_static(black_box(&d), (0.3, 1.0))));
    let chain = MixingChain::default();
    let tones = tone_pair().tones(-40.0, 50.0).unwrap();
    c.bench_function("simulate_mixing -40 dBm", |b| b.iter(|| simulate_mixing(&chain, black_box(&tones), 1e9)));
    let bias: Vec<f64> = (0..=16).map(|k| 0.05 * k as f64).collect();
    let powers = [-50.0, -20.0, -10.0, 0.0];
    let mut group = c.benchmark_group("sweeps");
    group.sample_size(10);
    group.bench_function("bias_power_sweep 17x4", |b| {
        b.iter(|| bias_power_sweep(&chain, &bias, black_box(&powers), tone_pair()))
    });
    group.finish();
}

fn array(c: &mut Criterion) {
    let g = four_by_two();
    let angles = cut_angles();
    let phi = std::f64::consts::FRAC_PI_2;
    c.bench_function("if+rf array factor cut 721", |b| {
        b.iter(|| {
            angles
                .iter()
                .map(|&t| {
                    let d = Direction::from_cut(t, phi).unwrap();
                    if_array_factor(&g, (38.5e9, 37.5e9), d) + rf_array_factor(&g, 38.5e9, d)
                })
                .sum::<f64>()
        })
    });
    let ill = two_tone();
    let gains = [ElementGain::ISOTROPIC; 8];
    c.bench_function("simulate_array_timedomain 8 elements", |b| {
        b.iter(|| simulate_array_timedomain(&g, black_box(&ill), &gains))
    });
}

criterion_group!(benches, signal, diode, array);
criterion_main!(benches);
