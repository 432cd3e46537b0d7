use std::path::Path;

use selfmix_core::diode::TonePair;
use selfmix_core::link::calibrate_conversion_gain;
use selfmix_core::pattern::{read_pattern_csv, sample_pattern, PatternKind, TotalPatternRow};
use selfmix_core::signal::{commensurate_sampling, synthesize_samples};
use selfmix_core::units::amplitude_ratio_db;
use selfmix_core::validation::{self, Status};
use selfmix_core::{
    apply_filter, beamwidth_3db, bias_frequency_sweep, bias_power_sweep, chain_output_power,
    dft_spectrum, friis_rx_power, if_array_factor, iv_derivatives, optimal_bias_static,
    rf_array_factor, self_mix_pattern, square_law_mix, total_pattern, AnalyticPattern,
    ArrayGeometry, BiasPoint, ChainSpec, ConversionLaw, Direction, DiodeModel, EfficiencyTable,
    FilterSpec, LinkBudgetParams, MixingChain, PatternGrid, SweepResult, ToneSpec,
};
use thiserror::Error;

use crate::config::{linear_grid, Config, ConfigError};
use crate::table::{Cell, Table};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("cannot write output: {0}")]
    Output(String),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Computation(_) | Self::Output(_) => 3,
            Self::ChecksFailed(_) => 1,
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Computation(e.to_string())
}

fn bad_value(key: &str, message: impl Into<String>) -> CliError {
    ConfigError::Value {
        key: key.to_string(),
        message: message.into(),
    }
    .into()
}

/// What a command produced: the table plus human-readable notes for stderr.
pub struct Outcome {
    pub table: Table,
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(table: Table) -> Self {
        Self {
            table,
            notes: Vec::new(),
        }
    }
}

fn diode_from(cfg: &Config) -> Result<DiodeModel, CliError> {
    let d = DiodeModel::default();
    let model = DiodeModel::new(
        cfg.f64_or("saturation_current_a", d.saturation_current())?,
        cfg.f64_or("ideality", d.ideality())?,
        cfg.f64_or("series_resistance_ohm", d.series_resistance())?,
        cfg.f64_or("thermal_voltage_v", d.thermal_voltage())?,
    );
    model.map_err(|e| bad_value("diode", e.to_string()))
}

fn chain_from(cfg: &Config, bias_v: f64) -> Result<MixingChain, CliError> {
    let diode = diode_from(cfg)?;
    let bias = BiasPoint::at(&diode, bias_v).map_err(compute)?;
    MixingChain::new(
        cfg.f64_or("lna_gain_db", 25.0)?,
        diode,
        bias,
        cfg.f64_or("if_load_ohm", 50.0)?,
        cfg.f64_or("source_impedance_ohm", 50.0)?,
    )
    .map_err(|e| bad_value("chain", e.to_string()))
}

fn grid(cfg: &Config, prefix: &str, unit: &str, defaults: (f64, f64, f64)) -> Result<Vec<f64>, CliError> {
    let key = |part: &str| format!("{prefix}_{part}_{unit}");
    let start = cfg.f64_or(&key("start"), defaults.0)?;
    let stop = cfg.f64_or(&key("stop"), defaults.1)?;
    let step = cfg.f64_or(&key("step"), defaults.2)?;
    Ok(linear_grid(&key("step"), start, stop, step)?)
}

fn theta_grid_rad(cfg: &Config) -> Result<Vec<f64>, CliError> {
    let deg = grid(cfg, "theta", "deg", (-90.0, 90.0, 0.25))?;
    if deg.iter().any(|t| t.abs() > 90.0 + 1e-9) {
        return Err(bad_value("theta_start_deg", "cut angles must lie within ±90°"));
    }
    Ok(deg.into_iter().map(|t| t.clamp(-90.0, 90.0).to_radians()).collect())
}

fn geometry_from(cfg: &Config) -> Result<ArrayGeometry, CliError> {
    if let Some(path) = cfg.opt_str("geometry_file") {
        let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::Read {
            path: path.clone(),
            source: e,
        })?;
        return ArrayGeometry::parse_table(&text).map_err(|e| bad_value("geometry_file", e.to_string()));
    }
    let columns = cfg.usize_or("columns", 4)?;
    let rows = cfg.usize_or("rows", 2)?;
    let g = ArrayGeometry::rectangular(
        columns,
        rows,
        cfg.f64_or("dx_m", 0.032)?,
        cfg.f64_or("dy_m", 0.036)?,
    )
    .map_err(|e| bad_value("columns", e.to_string()))?;
    // feed rotation applied to every odd row
    let rotation = cfg.f64_or("row_rotation_deg", 0.0)?.to_radians();
    let offsets = (0..g.len())
        .map(|k| if (k / columns) % 2 == 1 { rotation } else { 0.0 })
        .collect();
    g.set_rf_phase_offsets(offsets).map_err(compute)
}

fn positive(cfg: &Config, key: &str, default: f64) -> Result<f64, CliError> {
    let v = cfg.f64_or(key, default)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(bad_value(key, format!("must be positive, got {v}")))
    }
}

pub fn spectrum(cfg: &Config) -> Result<Outcome, CliError> {
    let f1 = positive(cfg, "f1_hz", 37.5e9)?;
    let f2 = positive(cfg, "f2_hz", 38.5e9)?;
    let tones = [
        ToneSpec::new(f1, cfg.f64_or("amp1_v", 1.0)?, cfg.f64_or("phase1_rad", 0.0)?),
        ToneSpec::new(f2, cfg.f64_or("amp2_v", 0.5)?, cfg.f64_or("phase2_rad", 0.0)?),
    ]
    .into_iter()
    .collect::<Result<Vec<_>, _>>()
    .map_err(|e| bad_value("amp1_v", e.to_string()))?;
    let (rate, count) = match (cfg.opt_f64("sample_rate_hz")?, cfg.usize_or("samples", 0)?) {
        (Some(r), n) if n > 0 => (r, n),
        (None, 0) => {
            let plan = commensurate_sampling(&[f1, f2], 4.0 * f1.max(f2)).map_err(compute)?;
            (plan.sample_rate, plan.sample_count)
        }
        _ => {
            return Err(bad_value(
                "sample_rate_hz",
                "give sample_rate_hz and samples together, or neither",
            ))
        }
    };
    let filter = match cfg.str_or("filter", "none").as_str() {
        "none" => None,
        "low_pass" => Some(FilterSpec::low_pass(cfg.f64_or("cutoff_high_hz", 5e9)?)),
        "band_pass" => Some(FilterSpec::band_pass(
            cfg.f64_or("cutoff_low_hz", 0.5e9)?,
            cfg.f64_or("cutoff_high_hz", 1.5e9)?,
        )),
        other => return Err(bad_value("filter", format!("expected none, low_pass or band_pass, got {other:?}"))),
    }
    .transpose()
    .map_err(|e| bad_value("cutoff_high_hz", e.to_string()))?;
    cfg.finish()?;

    let w = synthesize_samples(&tones, rate, count, 0.0).map_err(compute)?;
    let mut y = square_law_mix(&w).map_err(compute)?;
    if let Some(f) = filter {
        y = apply_filter(&y, &f).map_err(compute)?;
    }
    let sx = dft_spectrum(&w).map_err(compute)?;
    let sy = dft_spectrum(&y).map_err(compute)?;
    let mut t = Table::new(
        "spectrum",
        &["frequency_hz", "input_amplitude_v", "mixed_amplitude_v2", "mixed_phase_rad"],
    );
    for (k, f) in sx.bin_frequencies().iter().enumerate() {
        let m = sy.amplitudes()[k];
        t.push(vec![(*f).into(), sx.amplitudes()[k].norm().into(), m.norm().into(), m.arg().into()]);
    }
    let mut out = Outcome::new(t);
    out.notes.push(format!(
        "{count} samples at {rate:.6e} Hz; IF {:.6e} Hz amplitude {:.6e}",
        (f1 - f2).abs(),
        sy.magnitude_at((f1 - f2).abs()).unwrap_or(f64::NAN)
    ));
    Ok(out)
}

pub fn diode_iv(cfg: &Config) -> Result<Outcome, CliError> {
    let d = diode_from(cfg)?;
    let v = grid(cfg, "v", "v", (0.0, 1.0, 0.001))?;
    cfg.finish()?;
    let mut t = Table::new("diode-iv", &["voltage_v", "current_a", "di_dv_s", "d2i_dv2_a_per_v2"]);
    for &x in &v {
        let i = d.terminal_current(x).map_err(compute)?;
        let g = iv_derivatives(&d, x).map_err(compute)?;
        t.push(vec![x.into(), i.into(), g.di_dv.into(), g.d2i_dv2.into()]);
    }
    let mut out = Outcome::new(t);
    let lo = v.first().copied().unwrap_or(0.0);
    let hi = v.last().copied().unwrap_or(0.0);
    out.notes.push(match optimal_bias_static(&d, (lo, hi)) {
        Ok(b) => format!(
            "static optimum {:.6} V, {:.6e} A",
            b.terminal_voltage, b.bias_current
        ),
        Err(e) => format!("static optimum: {e}"),
    });
    Ok(out)
}

fn sweep_table(command: &'static str, s: &SweepResult) -> Outcome {
    let mut t = Table::new(
        command,
        &["bias_v", s.axis().column_name(), "if_power_dbm", "dc_current_a"],
    );
    let mut failed = 0;
    for (b, &bias) in s.bias_grid().iter().enumerate() {
        for (j, &x) in s.axis_values().iter().enumerate() {
            let (p, i) = match s.cell(b, j) {
                Ok(r) => (r.if_power_dbm, r.dc_current),
                Err(_) => {
                    failed += 1;
                    (f64::NAN, f64::NAN)
                }
            };
            t.push(vec![bias.into(), x.into(), p.into(), i.into()]);
        }
    }
    let mut out = Outcome::new(t);
    if failed > 0 {
        out.notes.push(format!("{failed} cell(s) did not converge and are written as NaN"));
    }
    out
}

pub fn bias_sweep(cfg: &Config) -> Result<Outcome, CliError> {
    let chain = chain_from(cfg, 0.65)?;
    let bias = grid(cfg, "bias", "v", (0.0, 0.8, 0.05))?;
    let power = grid(cfg, "power", "dbm", (-60.0, 0.0, 5.0))?;
    let pair = TonePair::new(
        positive(cfg, "f_low_hz", 37.5e9)?,
        positive(cfg, "spacing_hz", 1e9)?,
        cfg.f64_or("second_offset_db", -5.0)?,
    )
    .map_err(|e| bad_value("f_low_hz", e.to_string()))?;
    cfg.finish()?;
    let s = bias_power_sweep(&chain, &bias, &power, pair).map_err(compute)?;
    let mut out = sweep_table("bias-sweep", &s);
    for (j, p) in power.iter().enumerate() {
        if let (Some(spread), Some(best)) = (s.bias_spread_db(j), s.best_bias(j)) {
            out.notes.push(format!("{p} dBm: best bias {best:.3} V, spread {spread:.2} dB"));
        }
    }
    Ok(out)
}

pub fn freq_sweep(cfg: &Config) -> Result<Outcome, CliError> {
    let chain = chain_from(cfg, 0.65)?;
    let bias = grid(cfg, "bias", "v", (0.0, 0.8, 0.05))?;
    let centers = grid(cfg, "center", "hz", (34.5e9, 38.5e9, 0.5e9))?;
    let spacing = positive(cfg, "spacing_hz", 1e9)?;
    let powers = (cfg.f64_or("power1_dbm", -40.0)?, cfg.f64_or("power2_dbm", -45.0)?);
    cfg.finish()?;
    let s = bias_frequency_sweep(&chain, &bias, &centers, spacing, powers).map_err(compute)?;
    Ok(sweep_table("freq-sweep", &s))
}

pub fn array_factor(cfg: &Config) -> Result<Outcome, CliError> {
    let g = geometry_from(cfg)?;
    let f_i = positive(cfg, "f_i_hz", 38.5e9)?;
    let f_ii = positive(cfg, "f_ii_hz", 37.5e9)?;
    let f_rf = positive(cfg, "f_rf_hz", f_i)?;
    let phi_deg = cfg.f64_or("phi_deg", 90.0)?;
    let theta = theta_grid_rad(cfg)?;
    cfg.finish()?;
    let phi = phi_deg.to_radians();
    let mut t = Table::new(
        "array-factor",
        &["theta_deg", "phi_deg", "af_if", "af_rf", "af_if_db", "af_rf_db"],
    );
    let mut if_cut = Vec::with_capacity(theta.len());
    let mut rf_cut = Vec::with_capacity(theta.len());
    for &th in &theta {
        let d = Direction::from_cut(th, phi).map_err(compute)?;
        let a = if_array_factor(&g, (f_i, f_ii), d);
        let r = rf_array_factor(&g, f_rf, d);
        if_cut.push(a);
        rf_cut.push(r);
        t.push(vec![
            th.to_degrees().into(),
            phi_deg.into(),
            a.into(),
            r.into(),
            amplitude_ratio_db(a).into(),
            amplitude_ratio_db(r).into(),
        ]);
    }
    let mut out = Outcome::new(t);
    let width = |gains: Vec<f64>| match PatternGrid::new(theta.clone(), phi, gains, 0.0)
        .and_then(|p| beamwidth_3db(&p))
    {
        Ok(b) if b.no_crossing => format!(">= {:.3} deg (no 3 dB crossing)", b.width.to_degrees()),
        Ok(b) => format!("{:.3} deg", b.width.to_degrees()),
        Err(e) => format!("n/a ({e})"),
    };
    out.notes.push(format!(
        "{} elements; IF 3 dB width {}, RF 3 dB width {}",
        g.len(),
        width(if_cut),
        width(rf_cut)
    ));
    Ok(out)
}

fn element_pattern(
    cfg: &Config,
    file_key: &str,
    frequency: f64,
    theta: &[f64],
    phi: f64,
    kind: PatternKind,
) -> Result<PatternGrid, CliError> {
    if let Some(path) = cfg.opt_str(file_key) {
        let file = std::fs::File::open(Path::new(&path)).map_err(|e| ConfigError::Read {
            path: path.clone(),
            source: e,
        })?;
        return read_pattern_csv(file, phi, frequency).map_err(|e| bad_value(file_key, e.to_string()));
    }
    let p = AnalyticPattern::new(kind, frequency).map_err(|e| bad_value("element", e.to_string()))?;
    sample_pattern(&p, theta, phi).map_err(compute)
}

pub fn pattern(cfg: &Config) -> Result<Outcome, CliError> {
    let g = geometry_from(cfg)?;
    let f_i = positive(cfg, "f_i_hz", 38.5e9)?;
    let f_ii = positive(cfg, "f_ii_hz", 37.5e9)?;
    let f_rf = positive(cfg, "f_rf_hz", f_i)?;
    let phi = cfg.f64_or("phi_deg", 90.0)?.to_radians();
    let theta = theta_grid_rad(cfg)?;
    let kind = match cfg.str_or("element", "cos_q").as_str() {
        "isotropic" => PatternKind::Isotropic,
        "cos_q" => PatternKind::CosQ {
            q: cfg.f64_or("element_q", 1.0)?,
        },
        "two_beam" => PatternKind::TwoBeam {
            tilt: cfg.f64_or("element_tilt_deg", 30.0)?.to_radians(),
            width: cfg.f64_or("element_width_deg", 40.0)?.to_radians(),
        },
        other => {
            return Err(bad_value(
                "element",
                format!("expected isotropic, cos_q or two_beam, got {other:?}"),
            ))
        }
    };
    let c_i = element_pattern(cfg, "pattern_i_file", f_i, &theta, phi, kind)?;
    let c_ii = element_pattern(cfg, "pattern_ii_file", f_ii, &theta, phi, kind)?;
    cfg.finish()?;

    let sm = self_mix_pattern(&c_i, &c_ii).map_err(compute)?;
    let af_if = total_pattern(&unit_gains(&sm)?, |d| if_array_factor(&g, (f_i, f_ii), d)).map_err(compute)?;
    let af_rf = total_pattern(&unit_gains(&sm)?, |d| rf_array_factor(&g, f_rf, d)).map_err(compute)?;
    let mut t = Table::new(
        "pattern",
        &["theta_deg", "gain_db", "af_if", "af_rf", "total_if_db", "total_rf_db"],
    );
    for k in 0..sm.len() {
        let r = TotalPatternRow::new(
            sm.theta()[k],
            sm.gains()[k],
            c_i.gains()[k],
            af_if.gains()[k],
            af_rf.gains()[k],
        );
        t.push(vec![
            r.theta_deg.into(),
            r.gain_db.into(),
            r.af_if.into(),
            r.af_rf.into(),
            r.total_if_db.into(),
            r.total_rf_db.into(),
        ]);
    }
    Ok(Outcome::new(t))
}

/// Unit-gain copy of a grid, used to sample an array factor on its cut.
fn unit_gains(p: &PatternGrid) -> Result<PatternGrid, CliError> {
    PatternGrid::new(p.theta().to_vec(), p.phi_cut(), vec![1.0; p.len()], p.frequency()).map_err(compute)
}

pub fn link_budget(cfg: &Config) -> Result<Outcome, CliError> {
    let table = match (cfg.opt_f64_list("eta_table_freqs_hz")?, cfg.opt_f64_list("eta_tot_db")?) {
        (None, None) => EfficiencyTable::default(),
        (Some(f), Some(e)) if f.len() == e.len() => EfficiencyTable::new(f.into_iter().zip(e).collect())
            .map_err(|e| bad_value("eta_tot_db", e.to_string()))?,
        _ => {
            return Err(bad_value(
                "eta_tot_db",
                "eta_table_freqs_hz and eta_tot_db must be given together with equal lengths",
            ))
        }
    };
    let f1 = positive(cfg, "f1_hz", 34e9)?;
    let f2 = positive(cfg, "f2_hz", 36.5e9)?;
    let base = LinkBudgetParams {
        tx_power_dbm: 0.0,
        tx_gain_db: cfg.f64_or("tx_gain_db", 25.0)?,
        distance_m: cfg.f64_or("distance_m", 1.5)?,
        frequency_hz: f1,
        rx_directivity_db: cfg.f64_or("rx_directivity_db", 0.0)?,
        total_efficiency_db: 0.0,
    };
    let p1 = LinkBudgetParams {
        tx_power_dbm: cfg.f64_or("tx1_power_dbm", 0.0)?,
        total_efficiency_db: cfg.f64_or("eta1_db", table.at(f1))?,
        ..base
    };
    let p2 = LinkBudgetParams {
        tx_power_dbm: cfg.f64_or("tx2_power_dbm", 5.0)?,
        frequency_hz: f2,
        total_efficiency_db: cfg.f64_or("eta2_db", table.at(f2))?,
        ..base
    };
    let law = match cfg.str_or("law", "square_law").as_str() {
        "square_law" => ConversionLaw::SquareLaw,
        "linear" => ConversionLaw::Linear,
        other => return Err(bad_value("law", format!("expected square_law or linear, got {other:?}"))),
    };
    let lna = cfg.f64_or("lna_gain_db", 25.0)?;
    let k = match cfg.opt_f64("conversion_gain_db")? {
        Some(k) => k,
        None => {
            let mixing = MixingChain::default().with_lna_gain_db(lna).map_err(compute)?;
            calibrate_conversion_gain(&mixing, (-40.0, -45.0), (37.5e9, 38.5e9), law).map_err(compute)?
        }
    };
    let chain = ChainSpec {
        lna_gain_db: lna,
        conversion_gain_db: k,
        combiner_gain_db: cfg.f64_or("combiner_gain_db", 0.0)?,
        if_amp_gain_db: cfg.f64_or("if_amp_gain_db", 0.0)?,
        cable_loss_db: cfg.f64_or("cable_loss_db", 0.0)?,
    };
    cfg.finish()?;

    let rx1 = friis_rx_power(&p1).map_err(|e| bad_value("link", e.to_string()))?;
    let rx2 = friis_rx_power(&p2).map_err(|e| bad_value("link", e.to_string()))?;
    let out_if = chain_output_power((rx1, rx2), &chain, law).map_err(|e| bad_value("chain", e.to_string()))?;
    let mut t = Table::new(
        "link-budget",
        &[
            "f1_hz",
            "f2_hz",
            "rx1_power_dbm",
            "rx2_power_dbm",
            "if_frequency_hz",
            "conversion_gain_db",
            "if_power_dbm",
        ],
    );
    t.push(vec![
        f1.into(),
        f2.into(),
        rx1.into(),
        rx2.into(),
        (f1 - f2).abs().into(),
        k.into(),
        out_if.into(),
    ]);
    Ok(Outcome::new(t))
}

pub fn validate(cfg: &Config) -> Result<(Outcome, usize), CliError> {
    cfg.finish()?;
    let reports = validation::run_all();
    let mut t = Table::new("validate", &["check", "status", "detail"]);
    let mut out_lines = Vec::new();
    for r in &reports {
        out_lines.push(format!("[{}] {} -- {}", r.status.label(), r.name, r.detail));
        t.push(vec![
            Cell::from(r.name),
            Cell::from(r.status.label()),
            Cell::from(r.detail.clone()),
        ]);
    }
    let failed = reports.iter().filter(|r| r.status == Status::Fail).count();
    let mut out = Outcome::new(t);
    out.notes = out_lines;
    Ok((out, failed))
}
