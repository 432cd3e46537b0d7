//! Self-checks: closed forms against brute-force oracles, plus the places
//! where published numbers cannot be reproduced exactly.
//!
//! Every check is deterministic (fixed RNG seeds). [`run_all`] evaluates them
//! in parallel and returns the reports in a fixed order.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::array::{
    combine_elements, effective_spacing, if_array_factor, rf_array_factor,
    simulate_array_timedomain, ArrayGeometry, Direction, ElementGain, Phasor,
    TwoToneIllumination,
};
use crate::diode::{
    bias_power_sweep, iv_derivatives, optimal_bias_static, simulate_mixing, DiodeError,
    DiodeModel, MixingChain, TonePair,
};
use crate::link::{friis_rx_power, EfficiencyTable, LinkBudgetParams};
use crate::pattern::{
    beamwidth_3db, find_lobes, sample_pattern, self_mix_pattern, theta_grid_deg,
    total_pattern, AnalyticPattern, PatternGrid, PatternKind,
};
use crate::signal::{
    analytic_two_tone_products, apply_filter, dft_spectrum, square_law_mix,
    spectrum_self_convolution, synthesize_samples, FilterSpec, ToneSpec,
};
use crate::units::current_amplitude_to_dbm;
use crate::C0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Pass,
    Fail,
    /// A published figure that the models deliberately do not match.
    KnownDeviation,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::KnownDeviation => "DEVIATION",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

fn report(name: &'static str, ok: bool, detail: String) -> CheckReport {
    CheckReport {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn errored(name: &'static str, e: impl std::fmt::Display) -> CheckReport {
    report(name, false, format!("error: {e}"))
}

type Check = fn() -> CheckReport;

/// Check identifiers, in report order.
const CHECKS: &[(&str, Check)] = &[
    ("signal-self-convolution", signal_self_convolution),
    ("signal-parseval", signal_parseval),
    ("signal-filter-idempotent", signal_filter_idempotent),
    ("signal-two-tone-products", signal_two_tone_products),
    ("diode-monotone-current", diode_monotone_current),
    ("diode-static-optimum", diode_static_optimum),
    ("diode-square-law-slope", diode_square_law_slope),
    ("diode-taylor-coefficient", diode_taylor_coefficient),
    ("array-limiting-case", array_limiting_case),
    ("array-combiner-gain", array_combiner_gain),
    ("array-if-invariances", array_if_invariances),
    ("array-timedomain-oracle", array_timedomain_oracle),
    ("array-row-rotation", array_row_rotation),
    ("pattern-products", pattern_products),
    ("pattern-beamwidth", pattern_beamwidth),
    ("pattern-if-vs-rf", pattern_if_vs_rf),
    ("link-friis", link_friis),
    ("effective-spacing", effective_spacing_printed),
    ("efficiency-anchor", deviation_efficiency_anchor),
    ("high-power-bias", deviation_high_power_bias),
];

pub fn check_ids() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(id, _)| *id)
}

/// Runs one check by identifier.
pub fn run_check(id: &str) -> Option<CheckReport> {
    CHECKS.iter().find(|(i, _)| *i == id).map(|(_, c)| c())
}

/// Runs every check.
pub fn run_all() -> Vec<CheckReport> {
    CHECKS.par_iter().map(|(_, c)| c()).collect()
}

/// True when no check failed (known deviations do not count as failures).
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

fn random_tones(rng: &mut ChaCha8Rng, max_bin: u32) -> Vec<ToneSpec> {
    let count = rng.gen_range(1..=5);
    (0..count)
        .map(|_| {
            ToneSpec::new(
                rng.gen_range(1..=max_bin) as f64,
                rng.gen_range(0.0..2.0),
                rng.gen_range(-PI..PI),
            )
            .expect("valid tone")
        })
        .collect()
}

fn signal_self_convolution() -> CheckReport {
    const NAME: &str = "signal: spectral self-convolution equals time-domain squaring";
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let tones = random_tones(&mut rng, 30);
        let run = || -> Result<f64, crate::signal::SignalError> {
            let w = synthesize_samples(&tones, 128.0, 128, 0.0)?;
            let conv = spectrum_self_convolution(&dft_spectrum(&w)?)?;
            let direct = dft_spectrum(&square_law_mix(&w)?)?;
            let scale = direct.peak_magnitude().max(1e-300);
            Ok(direct
                .amplitudes()
                .iter()
                .zip(conv.amplitudes())
                .map(|(a, b)| (a - b).norm() / scale)
                .fold(0.0, f64::max))
        };
        match run() {
            Ok(e) => worst = worst.max(e),
            Err(e) => return errored(NAME, e),
        }
    }
    report(NAME, worst < 1e-9, format!("50 signals, worst relative error {worst:.2e}"))
}

fn signal_parseval() -> CheckReport {
    const NAME: &str = "signal: Parseval (sample energy equals spectral energy)";
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let tones = random_tones(&mut rng, 63);
        let n = if rng.gen_bool(0.5) { 128 } else { 127 };
        match synthesize_samples(&tones, n as f64, n, 0.0).and_then(|w| {
            let s = dft_spectrum(&w)?;
            Ok((w.mean_square(), s.mean_power()))
        }) {
            Ok((a, b)) => worst = worst.max((a - b).abs() / a.max(1e-300)),
            Err(e) => return errored(NAME, e),
        }
    }
    report(NAME, worst < 1e-9, format!("worst relative error {worst:.2e}"))
}

fn signal_filter_idempotent() -> CheckReport {
    const NAME: &str = "signal: brick-wall filtering is idempotent";
    let run = || -> Result<f64, crate::signal::SignalError> {
        let tones = [
            ToneSpec::new(37.5e9, 1.0, 0.2)?,
            ToneSpec::new(38.5e9, 0.5, -1.0)?,
        ];
        let w = square_law_mix(&synthesize_samples(&tones, 160e9, 320, 0.0)?)?;
        let f = FilterSpec::band_pass(0.5e9, 1.5e9)?;
        let once = apply_filter(&w, &f)?;
        let twice = apply_filter(&once, &f)?;
        let n = once.len() as f64;
        Ok((once
            .samples()
            .iter()
            .zip(twice.samples())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            / n)
            .sqrt())
    };
    match run() {
        Ok(rms) => report(NAME, rms < 1e-12, format!("RMS change {rms:.2e}")),
        Err(e) => errored(NAME, e),
    }
}

fn signal_two_tone_products() -> CheckReport {
    const NAME: &str = "signal: closed-form two-tone products match DFT of squared signal";
    let run = || -> Result<(f64, f64), crate::signal::SignalError> {
        let a = ToneSpec::new(37.5e9, 1.0, 0.0)?;
        let b = ToneSpec::new(38.5e9, 0.5, 0.0)?;
        let p = analytic_two_tone_products(&a, &b)?;
        let s = dft_spectrum(&square_law_mix(&synthesize_samples(&[a, b], 160e9, 320, 0.0)?)?)?;
        Ok((
            (s.magnitude_at(1e9).unwrap_or(f64::NAN) - p.if_amplitude).abs(),
            (s.amplitudes()[0].re - p.dc).abs(),
        ))
    };
    match run() {
        Ok((e_if, e_dc)) => report(
            NAME,
            e_if < 1e-9 && e_dc < 1e-9,
            format!("IF error {e_if:.2e}, DC error {e_dc:.2e}"),
        ),
        Err(e) => errored(NAME, e),
    }
}

fn diode_monotone_current() -> CheckReport {
    const NAME: &str = "diode: terminal current increasing and bounded by junction current";
    let m = DiodeModel::default();
    let mut prev = f64::NEG_INFINITY;
    for k in 0..=1000 {
        let v = k as f64 * 1e-3;
        let i = match m.terminal_current(v) {
            Ok(i) => i,
            Err(e) => return errored(NAME, e),
        };
        if !(i > prev) || (v > 0.0 && i > m.junction_current(v)) {
            return report(NAME, false, format!("violated at {v} V"));
        }
        prev = i;
    }
    report(NAME, true, "0..1 V on a 1 mV grid".into())
}

fn diode_static_optimum() -> CheckReport {
    const NAME: &str = "diode: static bias optimum matches 10 uV dense-grid scan";
    let run = || -> Result<(f64, f64, bool), DiodeError> {
        let m = DiodeModel::new(1e-13, 1.2, 4.0, 0.02585)?;
        let opt = optimal_bias_static(&m, (0.3, 1.0))?;
        let mut best = (0.0, f64::NEG_INFINITY);
        for k in 0..=70_000 {
            let v = 0.3 + k as f64 * 1e-5;
            let c = iv_derivatives(&m, v)?.d2i_dv2;
            if c > best.1 {
                best = (v, c);
            }
        }
        let ideal = m.with_series_resistance(0.0)?;
        let no_max = optimal_bias_static(&ideal, (0.3, 1.0)) == Err(DiodeError::NoInteriorMaximum);
        Ok((opt.terminal_voltage, best.0, no_max))
    };
    match run() {
        Ok((v, grid, no_max)) => report(
            NAME,
            (v - grid).abs() < 1e-3 && no_max,
            format!("optimum {v:.6} V, grid {grid:.5} V, ideal diode rejected: {no_max}"),
        ),
        Err(e) => errored(NAME, e),
    }
}

fn mixing_power(chain: &MixingChain, p_dbm: f64) -> Result<f64, DiodeError> {
    let tones = TonePair::new(37.5e9, 1e9, -5.0)?.tones(p_dbm, chain.source_impedance())?;
    Ok(simulate_mixing(chain, &tones, 1e9)?.if_power_dbm)
}

fn diode_square_law_slope() -> CheckReport {
    const NAME: &str = "diode: IF power slope 2 dB/dB from -60 to -45 dBm";
    let chain = MixingChain::default();
    match mixing_power(&chain, -60.0).and_then(|a| Ok((mixing_power(&chain, -45.0)? - a) / 15.0)) {
        Ok(slope) => report(NAME, (slope - 2.0).abs() <= 0.05, format!("slope {slope:.4} dB/dB")),
        Err(e) => errored(NAME, e),
    }
}

fn diode_taylor_coefficient() -> CheckReport {
    const NAME: &str = "diode: small-signal IF power matches quadratic Taylor term";
    let run = || -> Result<(f64, f64), DiodeError> {
        let chain = MixingChain::default();
        let tones = TonePair::new(37.5e9, 1e9, -5.0)?.tones(-60.0, chain.source_impedance())?;
        let sim = simulate_mixing(&chain, &tones, 1e9)?.if_power_dbm;
        let d = iv_derivatives(chain.diode(), chain.bias().terminal_voltage)?;
        let k = crate::units::db_to_amplitude(chain.lna_gain_db());
        let curvature = d.d2i_dv2 / (1.0 + d.di_dv * chain.source_impedance()).powi(3);
        let amp = 0.5 * curvature * tones[0].amplitude() * tones[1].amplitude() * k * k;
        Ok((sim, current_amplitude_to_dbm(amp, chain.if_load())))
    };
    match run() {
        Ok((sim, taylor)) => report(
            NAME,
            (sim - taylor).abs() < 1.0,
            format!("simulated {sim:.3} dBm, Taylor {taylor:.3} dBm"),
        ),
        Err(e) => errored(NAME, e),
    }
}

fn array_limiting_case() -> CheckReport {
    const NAME: &str = "array: IF array factor is flat for a vanishing tone spacing";
    let f_rf = 38.5e9;
    let d = 10.0 * C0 / f_rf;
    let g = match ArrayGeometry::linear(8, d) {
        Ok(g) => g,
        Err(e) => return errored(NAME, e),
    };
    let mut worst: f64 = 1.0;
    for k in 0..=720 {
        let theta = (-90.0 + 0.25 * k as f64).to_radians();
        let dir = Direction::from_cut(theta, 0.0).expect("in range");
        worst = worst.min(if_array_factor(&g, (f_rf + 1e3, f_rf), dir));
    }
    report(NAME, worst >= 0.999999, format!("N=8, d=10 lambda, min factor {worst:.9}"))
}

fn array_combiner_gain() -> CheckReport {
    const NAME: &str = "array: 8 co-phased inputs combine to +9.03 dB";
    match combine_elements(&[Phasor::new(1.0, 0.0); 8], 0.0) {
        Ok(c) => report(
            NAME,
            (c.power_gain_db - 9.03).abs() <= 0.01,
            format!("{:.4} dB", c.power_gain_db),
        ),
        Err(e) => errored(NAME, e),
    }
}

fn random_geometry(rng: &mut ChaCha8Rng, n: usize, aperture: f64) -> ArrayGeometry {
    loop {
        let pos = (0..n)
            .map(|_| [rng.gen_range(0.0..aperture), rng.gen_range(0.0..aperture)])
            .collect();
        if let Ok(g) = ArrayGeometry::new(pos) {
            return g;
        }
    }
}

fn array_if_invariances() -> CheckReport {
    const NAME: &str = "array: IF factor invariant under translation and common frequency shift";
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.gen_range(1..=8);
        let g = random_geometry(&mut rng, n, 0.15);
        let moved = g.translated(0.3, -0.2).expect("finite shift");
        for k in 0..19 {
            let dir = Direction::from_degrees(5.0 * k as f64, rng.gen_range(-180.0..180.0))
                .expect("in range");
            let a = if_array_factor(&g, (38.5e9, 37.5e9), dir);
            let b = if_array_factor(&moved, (38.5e9, 37.5e9), dir);
            let c = if_array_factor(&g, (40.5e9, 39.5e9), dir);
            worst = worst.max((a - b).abs()).max((a - c).abs());
        }
    }
    report(NAME, worst < 1e-12, format!("worst change {worst:.2e}"))
}

fn array_timedomain_oracle() -> CheckReport {
    const NAME: &str = "array: time-domain array simulation matches C_array x C_sm";
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let grid = theta_grid_deg(-90.0, 90.0, 10.0).expect("valid grid");
    let element = AnalyticPattern::new(PatternKind::CosQ { q: 1.0 }, 0.0).expect("valid");
    let c = match sample_pattern(&element, &grid, 0.0) {
        Ok(c) => c,
        Err(e) => return errored(NAME, e),
    };
    let sm = self_mix_pattern(&c, &c).expect("same grid");
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let n = rng.gen_range(2..=8);
        let g = random_geometry(&mut rng, n, 0.1);
        for (i, &theta) in grid.iter().enumerate() {
            let dir = Direction::from_cut(theta, 0.0).expect("in range");
            let ill = TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), dir).expect("valid");
            let gain = ElementGain::new(c.gains()[i], c.gains()[i]);
            let sim = match simulate_array_timedomain(&g, &ill, &vec![gain; n]) {
                Ok(r) => r.if_power_rel_db,
                Err(e) => return errored(NAME, e),
            };
            let af = if_array_factor(&g, (38.5e9, 37.5e9), dir);
            let analytic = 10.0 * (n as f64).log10() + 20.0 * (af * sm.gains()[i]).log10();
            if sm.gains()[i] > 1e-6 {
                worst = worst.max((sim - analytic).abs());
            }
        }
    }
    report(NAME, worst <= 0.05, format!("3 geometries x 19 angles, worst {worst:.2e} dB"))
}

fn array_row_rotation() -> CheckReport {
    const NAME: &str = "array: 180 deg feed rotation cancels at IF, nulls RF broadside";
    let run = || -> Result<(f64, f64), crate::array::ArrayError> {
        let g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036)?;
        let offsets = (0..8).map(|k| if k >= 4 { PI } else { 0.0 }).collect();
        let rotated = g.set_rf_phase_offsets(offsets)?;
        let dir = Direction::from_degrees(20.0, 90.0)?;
        let ill = TwoToneIllumination::new(38.5e9, 37.5e9, (1.0, 0.5), dir)?;
        let gains = [ElementGain::ISOTROPIC; 8];
        let a = simulate_array_timedomain(&g, &ill, &gains)?.if_power_rel_db;
        let b = simulate_array_timedomain(&rotated, &ill, &gains)?.if_power_rel_db;
        let rf = rf_array_factor(&rotated, 38.5e9, Direction::broadside());
        Ok(((a - b).abs(), crate::units::amplitude_ratio_db(rf)))
    };
    match run() {
        Ok((d_if, rf_db)) => report(
            NAME,
            d_if < 1e-9 && rf_db < -60.0,
            format!("IF change {d_if:.2e} dB, RF broadside {rf_db:.1} dB"),
        ),
        Err(e) => errored(NAME, e),
    }
}

fn pattern_products() -> CheckReport {
    const NAME: &str = "pattern: multiplication commutes and survives normalisation";
    let grid = theta_grid_deg(-90.0, 90.0, 1.0).expect("valid grid");
    let make = |kind| {
        sample_pattern(&AnalyticPattern::new(kind, 38e9).expect("valid"), &grid, 0.0)
            .expect("valid")
    };
    let a = make(PatternKind::CosQ { q: 1.5 });
    let b = make(PatternKind::TwoBeam {
        tilt: 0.5,
        width: 0.4,
    })
    .scaled(3.0)
    .expect("positive");
    let ab = self_mix_pattern(&a, &b).expect("same grid");
    let ba = self_mix_pattern(&b, &a).expect("same grid");
    let nn = self_mix_pattern(&a.normalized(), &b.normalized()).expect("same grid");
    let ratio = |p: &PatternGrid, q: &PatternGrid| {
        let r: Vec<f64> = p
            .gains()
            .iter()
            .zip(q.gains())
            .filter(|(_, y)| **y > 1e-200)
            .map(|(x, y)| x / y)
            .collect();
        r.iter().fold(0.0f64, |m, x| m.max((x / r[0] - 1.0).abs()))
    };
    let commute = ab.gains() == ba.gains();
    let spread = ratio(&ab, &nn);
    let total = total_pattern(&ab, |_| 0.5).expect("valid");
    let bounded = total.gains().iter().zip(ab.gains()).all(|(t, s)| t <= s);
    report(
        NAME,
        commute && spread < 1e-12 && bounded,
        format!("commutative {commute}, ratio spread {spread:.1e}, total bounded {bounded}"),
    )
}

fn pattern_beamwidth() -> CheckReport {
    const NAME: &str = "pattern: cos^2 half-power width is 65.53 deg";
    let grid = theta_grid_deg(-90.0, 90.0, 0.01).expect("valid grid");
    let p = sample_pattern(
        &AnalyticPattern::new(PatternKind::CosQ { q: 2.0 }, 0.0).expect("valid"),
        &grid,
        0.0,
    )
    .expect("valid");
    match beamwidth_3db(&p) {
        Ok(b) => {
            let w = b.width.to_degrees();
            report(NAME, (w - 65.53).abs() < 0.01, format!("{w:.4} deg"))
        }
        Err(e) => errored(NAME, e),
    }
}

/// Array factor cut of the 4 x 2 demonstrator geometry.
fn demonstrator_cut(phi_cut: f64, af: impl Fn(Direction) -> f64) -> PatternGrid {
    let grid = theta_grid_deg(-90.0, 90.0, 0.25).expect("valid grid");
    let iso = PatternGrid::new(grid.clone(), phi_cut, vec![1.0; grid.len()], 0.0).expect("valid");
    total_pattern(&iso, af).expect("valid factor")
}

fn pattern_if_vs_rf() -> CheckReport {
    const NAME: &str = "pattern: 4x2 E-plane IF factor has no grating lobes, RF has >= 2";
    let g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036).expect("valid geometry");
    let e_plane = PI / 2.0;
    let af_if = demonstrator_cut(e_plane, |d| if_array_factor(&g, (38.5e9, 37.5e9), d));
    let af_rf = demonstrator_cut(e_plane, |d| rf_array_factor(&g, 38.5e9, d));
    let limit = 60f64.to_radians();
    let grating = |p: &PatternGrid| {
        find_lobes(p, -3.0, limit)
            .iter()
            .filter(|l| l.theta.abs() > 1e-9)
            .count()
    };
    let (gi, gr) = (grating(&af_if), grating(&af_rf));
    match (beamwidth_3db(&af_if), beamwidth_3db(&af_rf)) {
        (Ok(bi), Ok(br)) => {
            let ratio = bi.width / br.width;
            report(
                NAME,
                gi == 0 && gr >= 2 && ratio > 10.0,
                format!(
                    "RF grating lobes {gr}, IF {gi}; widths IF {:.1} deg{} / RF {:.2} deg = {ratio:.1}",
                    bi.width.to_degrees(),
                    if bi.no_crossing { " (no 3 dB crossing in cut)" } else { "" },
                    br.width.to_degrees()
                ),
            )
        }
        (Err(e), _) | (_, Err(e)) => errored(NAME, e),
    }
}

fn anchor(f: f64, ptx: f64, eta: f64) -> LinkBudgetParams {
    LinkBudgetParams {
        tx_power_dbm: ptx,
        tx_gain_db: 25.0,
        distance_m: 1.5,
        frequency_hz: f,
        rx_directivity_db: 0.0,
        total_efficiency_db: eta,
    }
}

fn link_friis() -> CheckReport {
    const NAME: &str = "link: Friis reproduces printed receive powers with the efficiency table";
    let table = EfficiencyTable::default();
    let mut worst: f64 = 0.0;
    for (f, ptx, printed) in [
        (34e9, 0.0, -43.4),
        (36.5e9, 5.0, -38.5),
        (37.5e9, 0.0, -44.3),
        (38.5e9, 5.0, -39.5),
    ] {
        match friis_rx_power(&anchor(f, ptx, table.at(f))) {
            Ok(p) => worst = worst.max((p - printed).abs()),
            Err(e) => return errored(NAME, e),
        }
    }
    let lossless = friis_rx_power(&anchor(34e9, 0.0, 0.0)).unwrap_or(f64::NAN);
    let hand = 25.0 + 20.0 * (C0 / 34e9 / (6.0 * PI)).log10();
    report(
        NAME,
        worst <= 0.1 && (lossless - hand).abs() < 1e-9 && (lossless + 41.6).abs() <= 0.05,
        format!("worst {worst:.3} dB; lossless 34 GHz {lossless:.3} dBm"),
    )
}

fn effective_spacing_printed() -> CheckReport {
    const NAME: &str = "array: effective spacing d*df/c0 versus printed values";
    let mut lines = Vec::new();
    let mut ok = true;
    let mut deviates = false;
    for (d, df, printed) in [
        (0.032, 1e9, 0.1),
        (0.032, 2.5e9, 0.25),
        (0.036, 1e9, 0.15),
        (0.036, 2.5e9, 0.275),
    ] {
        let s = match effective_spacing(d, df, 38.5e9) {
            Ok(s) => s.if_spacing,
            Err(e) => return errored(NAME, e),
        };
        let close = (s - printed).abs() <= 0.02;
        if d == 0.032 {
            ok &= close;
        } else if !close {
            deviates = true;
        }
        lines.push(format!("{:.0} mm @ {:.1} GHz: {s:.4} (printed {printed})", d * 1e3, df / 1e9));
    }
    let mut r = report(NAME, ok, lines.join("; "));
    if ok && deviates {
        r.status = Status::KnownDeviation;
        r.detail.push_str("; the 36 mm printed values do not follow from d*df/c0");
    }
    r
}

fn deviation_efficiency_anchor() -> CheckReport {
    const NAME: &str = "link: 38.5 GHz receive power with eta = -1.4 dB";
    match friis_rx_power(&anchor(38.5e9, 5.0, -1.4)) {
        Ok(p) => {
            let ok = (p + 39.5).abs() <= 0.1;
            CheckReport {
                name: NAME,
                status: if ok { Status::Pass } else { Status::KnownDeviation },
                detail: format!(
                    "{p:.3} dBm vs printed -39.5 dBm; -39.5 dBm needs eta = {:.3} dB",
                    EfficiencyTable::default().at(38.5e9)
                ),
            }
        }
        Err(e) => errored(NAME, e),
    }
}

fn deviation_high_power_bias() -> CheckReport {
    const NAME: &str = "diode: IF power spread over bias 0..0.8 V versus input power";
    let chain = MixingChain::default();
    let bias: Vec<f64> = (0..=16).map(|k| k as f64 * 0.05).collect();
    let powers = [-50.0, -20.0, -10.0, 0.0];
    let pair = TonePair::new(37.5e9, 1e9, -5.0).expect("valid pair");
    let sweep = match bias_power_sweep(&chain, &bias, &powers, pair) {
        Ok(s) => s,
        Err(e) => return errored(NAME, e),
    };
    let spreads: Vec<f64> = (0..powers.len())
        .map(|j| sweep.bias_spread_db(j).unwrap_or(f64::NAN))
        .collect();
    let detail = powers
        .iter()
        .zip(&spreads)
        .map(|(p, s)| format!("{p} dBm: {s:.2} dB"))
        .collect::<Vec<_>>()
        .join(", ");
    let qualitative = spreads[0] > 10.0 && spreads[3] < 3.0 && spreads.windows(2).all(|w| w[1] < w[0]);
    let at_minus_20 = spreads[1] < 3.0;
    CheckReport {
        name: NAME,
        status: match (qualitative, at_minus_20) {
            (true, true) => Status::Pass,
            (true, false) => Status::KnownDeviation,
            _ => Status::Fail,
        },
        detail: if qualitative && !at_minus_20 {
            format!("{detail}; spread shrinks with drive but only falls below 3 dB above -20 dBm")
        } else {
            detail
        },
    }
}
