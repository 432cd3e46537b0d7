use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use tempfile::TempDir;

fn selfmix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfmix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run_to_file(command: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        command,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--quiet",
    ];
    args.extend_from_slice(extra);
    selfmix(&args)
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'), "CRLF in output");
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

/// Half-power width of the lobe around the maximum, degrees, on an
/// amplitude column (falls back to the cut edge).
fn width_deg(theta: &[f64], af: &[f64]) -> f64 {
    let (peak, max) = af
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let level = max / 2f64.sqrt();
    let mut lo = peak;
    while lo > 0 && af[lo] >= level {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < af.len() && af[hi] >= level {
        hi += 1;
    }
    theta[hi] - theta[lo]
}

#[test]
fn single_element_if_factor_is_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "one.cfg", "columns = 1\nrows = 1\n");
    let out = dir.path().join("af.csv");
    let r = run_to_file("array-factor", &cfg, &out, &[]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["theta_deg", "phi_deg", "af_if", "af_rf", "af_if_db", "af_rf_db"]);
    assert_eq!(rows.len(), 721);
    assert!(column(&header, &rows, "af_if").iter().all(|&a| a == 1.0));
}

#[test]
fn four_by_two_if_width_exceeds_rf_width_tenfold() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "array.cfg",
        "# 4 columns at 32 mm, 2 rows at 36 mm, E-plane\ncolumns = 4\nrows = 2\ndx_m = 0.032\ndy_m = 0.036\n\
         f_i_hz = 38.5e9\nf_ii_hz = 37.5e9\nphi_deg = 90\n",
    );
    let out = dir.path().join("af.csv");
    assert!(run_to_file("array-factor", &cfg, &out, &[]).status.success());
    let (header, rows) = read_csv(&out);
    let theta = column(&header, &rows, "theta_deg");
    let w_if = width_deg(&theta, &column(&header, &rows, "af_if"));
    let w_rf = width_deg(&theta, &column(&header, &rows, "af_rf"));
    assert!(w_if > 10.0 * w_rf, "{w_if} vs {w_rf}");
}

#[test]
fn validate_passes_quickly() {
    let start = Instant::now();
    let r = selfmix(&["validate"]);
    let elapsed = start.elapsed().as_secs_f64();
    let text = String::from_utf8_lossy(&r.stdout);
    assert!(r.status.success(), "{text}");
    assert!(elapsed < 60.0);
    assert!(text.lines().count() >= 20);
    assert!(text.lines().all(|l| l.starts_with("[PASS]") || l.starts_with("[DEVIATION]")));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "sweep.cfg",
        "scenario = repeat\nbias_start_v = 0.5\nbias_stop_v = 0.8\nbias_step_v = 0.1\n\
         power_start_dbm = -50\npower_stop_dbm = -10\npower_step_dbm = 20\n",
    );
    for (cmd, format) in [("bias-sweep", "csv"), ("bias-sweep", "json"), ("pattern", "csv"), ("link-budget", "json")] {
        let a = dir.path().join(format!("{cmd}_a.{format}"));
        let b = dir.path().join(format!("{cmd}_b.{format}"));
        let c = if cmd == "bias-sweep" { cfg.clone() } else { write(&dir, "empty.cfg", "") };
        assert!(run_to_file(cmd, &c, &a, &["--format", format]).status.success());
        assert!(run_to_file(cmd, &c, &b, &["--format", format]).status.success());
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{cmd} {format}");
    }
}

#[test]
fn every_csv_header_names_units() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "empty.cfg", "");
    let unit = |h: &str| {
        ["_hz", "_v", "_v2", "_a", "_s", "_a_per_v2", "_rad", "_deg", "_db", "_dbm", "_m"]
            .iter()
            .any(|u| h.ends_with(u))
            || h == "af_if"
            || h == "af_rf"
    };
    for cmd in ["spectrum", "diode-iv", "bias-sweep", "freq-sweep", "array-factor", "pattern", "link-budget"] {
        let out = dir.path().join(format!("{cmd}.csv"));
        let r = run_to_file(cmd, &cfg, &out, &[]);
        assert!(r.status.success(), "{cmd}: {}", String::from_utf8_lossy(&r.stderr));
        let text = std::fs::read_to_string(&out).unwrap();
        let header = text.lines().next().unwrap();
        for h in header.split(',') {
            assert!(unit(h), "{cmd}: column {h} has no unit");
        }
    }
}

#[test]
fn json_output_is_well_formed() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "lb.cfg", "scenario = anchors\n");
    let out = dir.path().join("lb.json");
    assert!(run_to_file("link-budget", &cfg, &out, &["--format", "json"]).status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"scenario\": \"anchors\""));
    assert!(text.contains("\"rx1_power_dbm\""));
    assert!(text.contains("-43.4001867"));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    for text in ["no_such_key_hz = 1\n", "columns = many\n", "this is not a pair\n", "dx_m = 0\n"] {
        let cfg = write(&dir, "bad.cfg", text);
        let r = run_to_file("array-factor", &cfg, &out, &[]);
        assert_eq!(r.status.code(), Some(2), "{text:?}: {}", String::from_utf8_lossy(&r.stderr));
    }
    let missing = dir.path().join("absent.cfg");
    assert_eq!(run_to_file("diode-iv", &missing, &out, &[]).status.code(), Some(2));
    let r = selfmix(&["validate", "--config", write(&dir, "v.cfg", "extra_v = 1\n").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_three() {
    let dir = TempDir::new().unwrap();
    // squaring at this rate folds the second harmonic
    let cfg = write(&dir, "alias.cfg", "f1_hz = 37.5e9\nf2_hz = 38.5e9\nsample_rate_hz = 100e9\nsamples = 200\n");
    let out = dir.path().join("s.csv");
    assert_eq!(run_to_file("spectrum", &cfg, &out, &[]).status.code(), Some(3));
}

#[test]
fn help_lists_exit_codes() {
    let r = selfmix(&["--help"]);
    let text = String::from_utf8_lossy(&r.stdout);
    assert!(text.contains("configuration error"));
    assert!(text.contains("computation error"));
    for cmd in ["spectrum", "diode-iv", "bias-sweep", "freq-sweep", "array-factor", "pattern", "link-budget", "validate"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
        let sub = selfmix(&[cmd, "--help"]);
        assert!(String::from_utf8_lossy(&sub.stdout).contains("Errors:"), "{cmd}");
    }
}

#[test]
fn geometry_table_and_row_rotation() {
    let dir = TempDir::new().unwrap();
    let geom = write(
        &dir,
        "g.txt",
        "x_m,y_m,rf_phase_offset_deg\n0,0,0\n0.032,0,0\n0,0.036,180\n0.032,0.036,180\n",
    );
    let cfg = write(
        &dir,
        "g.cfg",
        &format!("geometry_file = {}\ntheta_start_deg = 0\ntheta_stop_deg = 0\n", geom.display()),
    );
    let out = dir.path().join("g.csv");
    assert!(run_to_file("array-factor", &cfg, &out, &[]).status.success());
    let (header, rows) = read_csv(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(column(&header, &rows, "af_if")[0], 1.0);
    assert!(column(&header, &rows, "af_rf")[0] < 1e-9);
}
