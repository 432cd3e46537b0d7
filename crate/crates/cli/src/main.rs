//! `selfmix`: batch front end that turns a flat config file into CSV or JSON
//! tables for plotting.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CliError, Outcome};
use config::Config;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  1  validate: at least one check failed
  2  configuration error (unreadable file, syntax, unknown key, bad value)
  3  computation error (solver did not converge, invalid model state) or output not writable";

#[derive(Debug, Parser)]
#[command(name = "selfmix", version, about = "Self-mixing receiver array models", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat `key = value` config file; `#` starts a comment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Suppress summary notes on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum of a two-tone signal before and after squaring.
    ///
    /// Keys: f1_hz, f2_hz, amp1_v, amp2_v, phase1_rad, phase2_rad,
    /// sample_rate_hz + samples, filter (none|low_pass|band_pass),
    /// cutoff_low_hz, cutoff_high_hz.
    #[command(after_help = "Errors: 2 on bad tones, sampling or filter keys; 3 if the sampling grid violates Nyquist.")]
    Spectrum,
    /// Diode current and its first two derivatives over terminal voltage.
    ///
    /// Keys: saturation_current_a, ideality, series_resistance_ohm,
    /// thermal_voltage_v, v_start_v, v_stop_v, v_step_v.
    #[command(name = "diode-iv", after_help = "Errors: 2 on invalid diode parameters or grid; 3 if the series-resistance solve fails.")]
    DiodeIv,
    /// IF power over bias voltage × input power.
    ///
    /// Keys: diode keys, lna_gain_db, if_load_ohm, source_impedance_ohm,
    /// bias_{start,stop,step}_v, power_{start,stop,step}_dbm, f_low_hz,
    /// spacing_hz, second_offset_db.
    #[command(name = "bias-sweep", after_help = "Errors: 2 on invalid chain or grid; 3 if the sweep cannot be set up. Cells that fail individually are written as NaN.")]
    BiasSweep,
    /// IF power over bias voltage × centre frequency.
    ///
    /// Keys: diode and chain keys, bias_{start,stop,step}_v,
    /// center_{start,stop,step}_hz, spacing_hz, power1_dbm, power2_dbm.
    #[command(name = "freq-sweep", after_help = "Errors: 2 on invalid chain or grid; 3 if the sweep cannot be set up. Cells that fail individually are written as NaN.")]
    FreqSweep,
    /// IF and RF array factors along one cut.
    ///
    /// Keys: geometry_file or columns, rows, dx_m, dy_m, row_rotation_deg;
    /// f_i_hz, f_ii_hz, f_rf_hz, phi_deg, theta_{start,stop,step}_deg.
    #[command(name = "array-factor", after_help = "Errors: 2 on bad geometry, frequencies or angle grid; 3 on an invalid direction.")]
    ArrayFactor,
    /// Self-mix element pattern times the IF and RF array factors.
    ///
    /// Keys: array-factor keys plus element (isotropic|cos_q|two_beam),
    /// element_q, element_tilt_deg, element_width_deg, pattern_i_file,
    /// pattern_ii_file (CSV theta_deg,gain_db).
    #[command(after_help = "Errors: 2 on bad geometry, element or pattern files; 3 if the two patterns do not share a cut.")]
    Pattern,
    /// Received tone powers and predicted IF output of the receive chain.
    ///
    /// Keys: tx_gain_db, distance_m, rx_directivity_db, f1_hz, f2_hz,
    /// tx1_power_dbm, tx2_power_dbm, eta1_db, eta2_db, eta_table_freqs_hz +
    /// eta_tot_db, law (square_law|linear), lna_gain_db, conversion_gain_db,
    /// combiner_gain_db, if_amp_gain_db, cable_loss_db.
    #[command(name = "link-budget", after_help = "Errors: 2 on invalid link or chain parameters; 3 if calibrating the conversion gain fails.")]
    LinkBudget,
    /// Runs every oracle and consistency check and prints one line per check.
    #[command(after_help = "Errors: 1 if any check fails (known deviations do not count); 2 on any config key other than scenario.")]
    Validate,
}

fn emit(outcome: &Outcome, scenario: &str, cli: &Cli) -> Result<(), CliError> {
    let output_err = |e: &dyn std::fmt::Display| CliError::Output(e.to_string());
    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path).map_err(|e| {
            CliError::Output(format!("{}: {e}", path.display()))
        })?),
        None => Box::new(std::io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cli.format {
        Format::Csv => outcome.table.write_csv(&mut sink).map_err(|e| output_err(&e))?,
        Format::Json => outcome
            .table
            .write_json(scenario, &mut sink)
            .map_err(|e| output_err(&e))?,
    }
    sink.flush().map_err(|e| output_err(&e))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let default_name = match cli.command {
        Command::Spectrum => "spectrum",
        Command::DiodeIv => "diode-iv",
        Command::BiasSweep => "bias-sweep",
        Command::FreqSweep => "freq-sweep",
        Command::ArrayFactor => "array-factor",
        Command::Pattern => "pattern",
        Command::LinkBudget => "link-budget",
        Command::Validate => "validate",
    };
    let scenario = cfg.str_or("scenario", default_name);

    if let Command::Validate = cli.command {
        let (outcome, failed) = commands::validate(&cfg)?;
        if !cli.quiet {
            let mut stdout = std::io::stdout().lock();
            for line in &outcome.notes {
                writeln!(stdout, "{line}").map_err(|e| CliError::Output(e.to_string()))?;
            }
        }
        if cli.out.is_some() {
            emit(&outcome, &scenario, cli)?;
        }
        return if failed == 0 {
            Ok(())
        } else {
            Err(CliError::ChecksFailed(failed))
        };
    }

    let outcome = match cli.command {
        Command::Spectrum => commands::spectrum(&cfg),
        Command::DiodeIv => commands::diode_iv(&cfg),
        Command::BiasSweep => commands::bias_sweep(&cfg),
        Command::FreqSweep => commands::freq_sweep(&cfg),
        Command::ArrayFactor => commands::array_factor(&cfg),
        Command::Pattern => commands::pattern(&cfg),
        Command::LinkBudget => commands::link_budget(&cfg),
        Command::Validate => unreachable!("handled above"),
    }?;
    emit(&outcome, &scenario, cli)?;
    if !cli.quiet {
        for note in &outcome.notes {
            eprintln!("{note}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
