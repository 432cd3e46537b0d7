//! One test per acceptance criterion. Each prints a single `[PASS]`/`[FAIL]`
//! line (written straight to stdout so it shows up even when output is
//! captured) and then asserts the same condition.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfmix_core::array::{element_if_signal, ElementGain};
use selfmix_core::diode::{optimal_bias_static, DiodeError, TonePair};
use selfmix_core::pattern::{find_lobes, theta_grid_deg};
use selfmix_core::signal::synthesize_samples;
use selfmix_core::validation::{run_check, Status};
use selfmix_core::{
    beamwidth_3db, bias_power_sweep, combine_elements, dft_spectrum, effective_spacing,
    friis_rx_power, if_array_factor, iv_derivatives, rf_array_factor, simulate_array_timedomain,
    simulate_mixing, spectrum_self_convolution, square_law_mix, total_pattern, ArrayGeometry,
    Direction, DiodeModel, LinkBudgetParams, MixingChain, PatternGrid, Phasor, ToneSpec,
    TwoToneIllumination, C0,
};

fn verdict(criterion: u32, title: &str, ok: bool, detail: &str) {
    let line = format!(
        "[{}] criterion {criterion}: {title} -- {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(ok, "criterion {criterion} ({title}) failed: {detail}");
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

#[test]
fn criterion_01_limiting_case_array_gain() {
    let start = Instant::now();
    let f_rf = 38.5e9;
    let lambda = C0 / f_rf;
    let mut worst: f64 = 1.0;
    for spacing in [0.5, 1.0, 2.0, 4.0, 10.0] {
        let g = ArrayGeometry::linear(8, spacing * lambda).unwrap();
        for k in 0..=720 {
            let theta = (-90.0 + 0.25 * k as f64).to_radians();
            let d = Direction::from_cut(theta, 0.0).unwrap();
            worst = worst.min(if_array_factor(&g, (f_rf + 1e3, f_rf), d));
        }
    }
    let gain = combine_elements(&[Phasor::new(1.0, 0.0); 8], 0.0)
        .unwrap()
        .power_gain_db;
    let elapsed = start.elapsed();
    verdict(
        1,
        "limiting-case array gain",
        worst >= 0.999999 && (gain - 9.03).abs() <= 0.01 && within(elapsed, 1.0),
        &format!(
            "min IF factor {worst:.9} (>= 0.999999), combiner {gain:.4} dB (9.03 +/- 0.01), {:.3} s (< 1 s)",
            elapsed.as_secs_f64()
        ),
    );
}

fn cut(phi: f64, af: impl Fn(Direction) -> f64) -> PatternGrid {
    let grid = theta_grid_deg(-90.0, 90.0, 0.25).unwrap();
    let ones = PatternGrid::new(grid.clone(), phi, vec![1.0; grid.len()], 0.0).unwrap();
    total_pattern(&ones, af).unwrap()
}

#[test]
fn criterion_02_if_vs_rf_beamwidth() {
    let start = Instant::now();
    let g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036).unwrap();
    let e_plane = PI / 2.0;
    let af_if = cut(e_plane, |d| if_array_factor(&g, (38.5e9, 37.5e9), d));
    let af_rf = cut(e_plane, |d| rf_array_factor(&g, 38.5e9, d));
    let limit = 60f64.to_radians();
    let side_lobes = |p: &PatternGrid| {
        find_lobes(p, -3.0, limit)
            .into_iter()
            .filter(|l| l.theta.abs() > 1e-9)
            .count()
    };
    let (rf_lobes, if_lobes) = (side_lobes(&af_rf), side_lobes(&af_if));
    let bw_if = beamwidth_3db(&af_if).unwrap();
    let bw_rf = beamwidth_3db(&af_rf).unwrap();
    let ratio = bw_if.width / bw_rf.width;
    let elapsed = start.elapsed();
    verdict(
        2,
        "IF vs RF beamwidth",
        rf_lobes >= 2 && if_lobes == 0 && ratio > 10.0 && within(elapsed, 5.0),
        &format!(
            "RF lobes above -3 dB besides main {rf_lobes} (>= 2), IF {if_lobes} (0); \
             IF width {:.2} deg{}, RF width {:.3} deg, ratio {ratio:.1} (> 10), {:.3} s (< 5 s)",
            bw_if.width.to_degrees(),
            if bw_if.no_crossing { " (never 3 dB down within the cut)" } else { "" },
            bw_rf.width.to_degrees(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_effective_spacing() {
    let s1 = effective_spacing(0.032, 1e9, 38.5e9).unwrap().if_spacing;
    let s25 = effective_spacing(0.032, 2.5e9, 38.5e9).unwrap().if_spacing;
    // The quoted values carry four decimals; 0.26685 is quoted as 0.2668.
    let exact = (s1 - 0.1067).abs() < 1e-4 && (s25 - 0.2668).abs() < 1e-4;
    let rounded = (s1 - 0.1).abs() <= 0.02 && (s25 - 0.25).abs() <= 0.02;
    let report = run_check("effective-spacing").unwrap();
    let flagged = report.status == Status::KnownDeviation && report.detail.contains("36 mm");
    verdict(
        3,
        "effective spacing",
        exact && rounded && flagged,
        &format!(
            "32 mm: {s1:.4} @ 1 GHz, {s25:.4} @ 2.5 GHz; validate reports [{}] {}",
            report.status.label(),
            report.detail
        ),
    );
}

#[test]
fn criterion_04_signal_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = 2 * rng.gen_range(16..=128);
        let fs = n as f64;
        let count = rng.gen_range(1..=5);
        let tones: Vec<ToneSpec> = (0..count)
            .map(|_| {
                ToneSpec::new(
                    rng.gen_range(1..n / 4) as f64,
                    rng.gen_range(0.01..3.0),
                    rng.gen_range(-PI..PI),
                )
                .unwrap()
            })
            .collect();
        let w = synthesize_samples(&tones, fs, n, 0.0).unwrap();
        let conv = spectrum_self_convolution(&dft_spectrum(&w).unwrap()).unwrap();
        let direct = dft_spectrum(&square_law_mix(&w).unwrap()).unwrap();
        let scale = direct.peak_magnitude();
        for (k, a) in direct.amplitudes().iter().enumerate() {
            worst = worst.max((a - conv.amplitudes()[k]).norm() / scale);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        4,
        "oracle equivalence, signals",
        worst <= 1e-9 && within(elapsed, 10.0),
        &format!(
            "50 signals, worst bin error {worst:.2e} relative (<= 1e-9), {:.3} s (< 10 s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_05_array_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    // 19 angles; the element pattern is cos(theta) at both tones.
    let grid: Vec<f64> = (0..19).map(|k| (-81.0 + 9.0 * k as f64).to_radians()).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let n = rng.gen_range(2..=8);
        let positions = (0..n)
            .map(|_| [rng.gen_range(0.0..0.12), rng.gen_range(0.0..0.12)])
            .collect();
        let g = ArrayGeometry::new(positions).unwrap();
        let phi = rng.gen_range(-PI..PI);
        for &theta in &grid {
            let d = Direction::from_cut(theta, phi).unwrap();
            let c = theta.cos();
            let ill = TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), d).unwrap();
            let sim = simulate_array_timedomain(&g, &ill, &vec![ElementGain::new(c, c); n])
                .unwrap()
                .if_power_rel_db;
            let c_array = if_array_factor(&g, (38.5e9, 37.5e9), d);
            let c_sm = c * c;
            let analytic = 10.0 * (n as f64).log10() + 20.0 * (c_array * c_sm).log10();
            worst = worst.max((sim - analytic).abs());
        }
    }
    let elapsed = start.elapsed();
    verdict(
        5,
        "oracle equivalence, arrays",
        worst <= 0.05 && within(elapsed, 30.0),
        &format!(
            "3 geometries x 19 angles, worst {worst:.2e} dB (<= 0.05 dB), {:.3} s (< 30 s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_row_rotation_compensation() {
    let g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036).unwrap();
    let rotated = g
        .set_rf_phase_offsets((0..8).map(|k| if k >= 4 { PI } else { 0.0 }).collect())
        .unwrap();
    let gains = [ElementGain::ISOTROPIC; 8];
    let mut worst_if: f64 = 0.0;
    for (theta, phi) in [(0.0, 0.0), (15.0, 90.0), (40.0, 0.0), (-25.0, 90.0)] {
        let d = Direction::from_cut(f64::to_radians(theta), f64::to_radians(phi)).unwrap();
        let ill = TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), d).unwrap();
        let a = simulate_array_timedomain(&g, &ill, &gains).unwrap();
        let b = simulate_array_timedomain(&rotated, &ill, &gains).unwrap();
        worst_if = worst_if.max((a.if_power_rel_db - b.if_power_rel_db).abs());
        for k in 0..8 {
            let (p, q) = (
                element_if_signal(&g, k, &ill).unwrap(),
                element_if_signal(&rotated, k, &ill).unwrap(),
            );
            assert_eq!(p, q);
        }
    }
    let rf = rf_array_factor(&rotated, 38.5e9, Direction::broadside());
    let rf_db = 20.0 * rf.log10();
    verdict(
        6,
        "row-rotation compensation",
        worst_if < 1e-9 && rf_db < -60.0,
        &format!(
            "IF combined power change {worst_if:.2e} dB (< 1e-9), RF broadside {rf_db:.1} dB (< -60)"
        ),
    );
}

#[test]
fn criterion_07_diode_square_law_regime() {
    let chain = MixingChain::default();
    let pair = TonePair::new(37.5e9, 1e9, -5.0).unwrap();
    let powers = [-60.0, -55.0, -50.0, -45.0];
    let out: Vec<f64> = powers
        .iter()
        .map(|&p| {
            simulate_mixing(&chain, &pair.tones(p, 50.0).unwrap(), 1e9)
                .unwrap()
                .if_power_dbm
        })
        .collect();
    let mx = powers.iter().sum::<f64>() / 4.0;
    let my = out.iter().sum::<f64>() / 4.0;
    let slope = powers
        .iter()
        .zip(&out)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / powers.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    verdict(
        7,
        "diode square-law regime",
        (slope - 2.0).abs() <= 0.05,
        &format!("IF slope {slope:.4} dB/dB over -60..-45 dBm (2.00 +/- 0.05)"),
    );
}

#[test]
fn criterion_08_bias_optimum_existence() {
    let m = DiodeModel::new(1e-13, 1.2, 4.0, 0.02585).unwrap();
    let opt = optimal_bias_static(&m, (0.3, 1.0)).unwrap();
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..=70_000 {
        let v = 0.3 + 1e-5 * k as f64;
        let c = iv_derivatives(&m, v).unwrap().d2i_dv2;
        if c > best.1 {
            best = (v, c);
        }
    }
    let ideal = optimal_bias_static(&m.with_series_resistance(0.0).unwrap(), (0.3, 1.0));
    let fitted = optimal_bias_static(&DiodeModel::default(), (0.3, 1.0)).unwrap();
    let ok = (opt.terminal_voltage - best.0).abs() < 1e-3
        && ideal == Err(DiodeError::NoInteriorMaximum)
        && (fitted.terminal_voltage - 0.73).abs() <= 0.02;
    verdict(
        8,
        "bias optimum existence",
        ok,
        &format!(
            "R_s=4: {:.5} V vs dense grid {:.5} V (within 1 mV); R_s=0: {:?}; \
             fitted default (calibrated to 0.73 V): {:.4} V / {:.3} mA",
            opt.terminal_voltage,
            best.0,
            ideal.map(|b| b.terminal_voltage),
            fitted.terminal_voltage,
            fitted.bias_current * 1e3
        ),
    );
}

#[test]
fn criterion_09_friis_anchors() {
    let params = |f: f64, ptx: f64, eta: f64| LinkBudgetParams {
        tx_power_dbm: ptx,
        tx_gain_db: 25.0,
        distance_m: 1.5,
        frequency_hz: f,
        rx_directivity_db: 0.0,
        total_efficiency_db: eta,
    };
    let p34 = friis_rx_power(&params(34e9, 0.0, -1.8)).unwrap();
    let p385 = friis_rx_power(&params(38.5e9, 5.0, -1.4)).unwrap();
    let p34_lossless = friis_rx_power(&params(34e9, 0.0, 0.0)).unwrap();
    // independent hand calculation: lambda = c0/f, 20 lg(lambda / (4 pi 1.5 m))
    let lambda = 299_792_458.0 / 34e9;
    let hand = 0.0 + 25.0 + 20.0 * (lambda / (4.0 * PI * 1.5)).log10();
    let ok34 = (p34 + 43.4).abs() <= 0.1;
    let ok385 = (p385 + 39.5).abs() <= 0.1;
    let ok0 = (p34_lossless + 41.6).abs() <= 0.05 && (p34_lossless - hand).abs() <= 0.05;
    verdict(
        9,
        "Friis anchors",
        ok34 && ok385 && ok0,
        &format!(
            "34 GHz eta=-1.8: {p34:.3} dBm (-43.4 +/- 0.1) {}; \
             38.5 GHz eta=-1.4: {p385:.3} dBm (-39.5 +/- 0.1) {}; \
             34 GHz eta=0: {p34_lossless:.3} dBm (-41.6 +/- 0.05, hand {hand:.3}) {}",
            if ok34 { "ok" } else { "MISS" },
            if ok385 { "ok" } else { "MISS" },
            if ok0 { "ok" } else { "MISS" },
        ),
    );
}

#[test]
fn criterion_10_high_power_bias_insensitivity() {
    let chain = MixingChain::default();
    let bias: Vec<f64> = (0..=16).map(|k| 0.05 * k as f64).collect();
    let powers = [-50.0, -20.0, -10.0, 0.0];
    let pair = TonePair::new(37.5e9, 1e9, -5.0).unwrap();
    let sweep = bias_power_sweep(&chain, &bias, &powers, pair).unwrap();
    let spread: Vec<f64> = (0..powers.len())
        .map(|j| sweep.bias_spread_db(j).unwrap())
        .collect();
    let low_ok = spread[0] > 10.0;
    let high_ok = spread[1..].iter().all(|&s| s < 3.0);
    verdict(
        10,
        "high-power bias insensitivity",
        low_ok && high_ok,
        &format!(
            "IF spread over bias 0..0.8 V: -50 dBm {:.2} dB (> 10); -20 dBm {:.2} dB, \
             -10 dBm {:.2} dB, 0 dBm {:.2} dB (each < 3)",
            spread[0], spread[1], spread[2], spread[3]
        ),
    );
}
