//! Command-line front end: characterization protocols, netlist
//! simulation, and cell benches, with CSV traces, `key=value` summaries on
//! stdout, and a reproducibility manifest alongside every run.
//!
//! Exit codes: 0 success, 1 usage, 2 parse/config error, 3 solver
//! non-convergence, 4 I/O failure. `FERROSIM_THREADS` caps worker
//! parallelism (0 = automatic).

mod config;
mod manifest;

pub use config::{load_config, ConfigError, ResolvedConfig};
pub use manifest::RunManifest;

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind as ClapErrorKind;
use clap::{ArgAction, Parser, Subcommand};
use serde::Deserialize;
use thiserror::Error;

use crate::cells::{
    run_diff_pair_program, run_diff_pair_read, run_nvsram_restore, run_nvsram_restore_mc,
    run_nvsram_store, VtMismatch,
};
use crate::characterization::{
    extract_pv, frequency_scaling_report, last_cycle_window, run_staircase_read,
    run_triangle_sweep, BaselineMode, ReadState,
};
use crate::engine::{dc_sweep, transient_with_variants, SolverError, Trace};
use crate::ftj::{calibrate_nls, read_time, CalibrationError, CalibrationTarget, VariantName};
use crate::netlist::{fmt_sci, parse_netlist, validate_netlist, AnalysisDirective};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => CliError::Io(e.to_string()),
            ConfigError::Invalid { .. } => CliError::Config(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Compile(_) => CliError::Config(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ferrosim",
    version,
    about = "Compact-model and circuit-simulation toolkit for HZO ferroelectric tunneling junctions"
)]
struct Cli {
    /// Preset/config TOML overlays, applied left to right.
    #[arg(long = "config", global = true, action = ArgAction::Append, value_name = "FILE")]
    config: Vec<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Triangular IV sweep of a device preset, with PV extraction.
    Sweep {
        #[arg(long, default_value = "A")]
        device: String,
        /// Sweep amplitude (V).
        #[arg(long, default_value_t = 5.5)]
        amplitude: f64,
        /// Slew rate (V/s).
        #[arg(long, default_value_t = 1.1e4)]
        slew: f64,
        /// Full cycles; the first is a wake-up cycle.
        #[arg(long, default_value_t = 2)]
        cycles: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Staircase read of the LRS or HRS current.
    Read {
        #[arg(long, default_value = "A")]
        device: String,
        #[arg(long, default_value = "lrs")]
        state: String,
        /// Largest read voltage (V); defaults to the variant's window.
        #[arg(long)]
        vmax: Option<f64>,
        /// Voltage step (V).
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Settle time per step (s).
        #[arg(long, default_value_t = 10e-6)]
        settle: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Calibrate NLS kinetics against (slew, Vc) anchors from a TOML file.
    Calibrate {
        #[arg(long)]
        targets: PathBuf,
        #[arg(long, default_value = "A")]
        device: String,
        /// Write the fitted parameters as a config overlay.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transient (or .dc) simulation of a netlist file.
    Sim {
        file: PathBuf,
        /// Override the netlist's .tran stop time (s).
        #[arg(long)]
        tstop: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prebuilt circuit benches.
    Cell {
        #[command(subcommand)]
        bench: CellBench,
    },
    /// Node charging time dV*C0/J.
    Readtime {
        /// Voltage difference to develop (V).
        #[arg(long)]
        dv: f64,
        /// Self-capacitance per area (F/cm2).
        #[arg(long)]
        c0: f64,
        /// Current density (A/cm2).
        #[arg(long)]
        j: f64,
    },
    /// Displacement-plateau scaling across slew rates.
    Freqscale {
        #[arg(long, default_value = "A")]
        device: String,
        /// Comma-separated slew rates (V/s).
        #[arg(long, value_delimiter = ',', required = true)]
        slews: Vec<f64>,
        #[arg(long, default_value_t = 5.5)]
        amplitude: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CellBench {
    /// Program complementary weights and read the differential pair.
    Diffpair {
        /// Target weight w in [0, 1].
        #[arg(long, default_value_t = 1.0)]
        weight: f64,
        /// Develop time of the read phase (s).
        #[arg(long, default_value_t = 100e-6)]
        develop: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Non-volatile SRAM store -> restore, optionally Monte-Carlo.
    Nvsram {
        /// Stored logic state.
        #[arg(long, default_value_t = 1)]
        stored: u8,
        /// Monte-Carlo trials (0 = single nominal run).
        #[arg(long, default_value_t = 0)]
        mc: usize,
        /// Threshold-mismatch sigma for Monte-Carlo (V).
        #[arg(long, default_value_t = 5e-3)]
        sigma_vt: f64,
        /// Develop time before the supply ramp (s).
        #[arg(long, default_value_t = 200e-6)]
        develop: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type Summary = Vec<(String, String)>;

fn kv(key: impl Into<String>, value: impl Into<String>) -> (String, String) {
    (key.into(), value.into())
}

/// Writes a trace CSV (UTF-8, header `t,<signals>`, 9-significant-digit
/// scientific notation, rows in time order).
pub fn write_trace_csv(trace: &Trace, path: &Path) -> Result<(), CliError> {
    let file = fs::File::create(path)?;
    trace.write_csv(BufWriter::new(file))?;
    Ok(())
}

/// Reads a trace back from the CSV schema `write_trace_csv` emits.
pub fn read_trace_csv(path: &Path) -> Result<Trace, CliError> {
    let file = fs::File::open(path)?;
    Trace::read_csv(std::io::BufReader::new(file))
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn parse_variant(text: &str) -> Result<VariantName, CliError> {
    text.parse()
        .map_err(|e: crate::ftj::PresetError| CliError::Config(e.to_string()))
}

fn init_threads() {
    if let Ok(text) = std::env::var("FERROSIM_THREADS") {
        if let Ok(n) = text.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

/// Runs a command line to completion and prints the summary; returns the
/// process exit code.
pub fn dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    init_threads();
    match execute(&argv) {
        Ok(summary) => {
            for (key, value) in summary {
                println!("{key}={value}");
            }
            EXIT_OK
        }
        Err(DispatchError::Usage(message, code)) => {
            if code == EXIT_OK {
                println!("{message}");
            } else {
                eprintln!("{message}");
            }
            code
        }
        Err(DispatchError::Run(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub enum DispatchError {
    Usage(String, i32),
    Run(CliError),
}

impl From<CliError> for DispatchError {
    fn from(e: CliError) -> Self {
        DispatchError::Run(e)
    }
}

/// Parses and executes a command line, returning the `key=value` summary.
pub fn execute(argv: &[String]) -> Result<Summary, DispatchError> {
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = match e.kind() {
            ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => EXIT_OK,
            _ => EXIT_USAGE,
        };
        DispatchError::Usage(e.render().to_string(), code)
    })?;
    let resolved = load_config(&cli.config).map_err(CliError::from)?;
    run_command(cli, argv, &resolved).map_err(DispatchError::Run)
}

fn finish_manifest(
    subcommand: &str,
    argv: &[String],
    resolved: &ResolvedConfig,
    inputs: &[&Path],
    out: Option<&Path>,
) -> Result<PathBuf, CliError> {
    let mut manifest = RunManifest::new(subcommand, argv);
    manifest.config_files = resolved
        .config_files
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    manifest.inputs = inputs.iter().map(|p| p.display().to_string()).collect();
    if let Some(out) = out {
        manifest.outputs.push(out.display().to_string());
    }
    let path = RunManifest::path_for(out);
    manifest.write(&path)?;
    Ok(path)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetsFile {
    targets: Vec<TargetRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetRow {
    slew: f64,
    vc: f64,
}

fn run_command(cli: Cli, argv: &[String], resolved: &ResolvedConfig) -> Result<Summary, CliError> {
    match cli.command {
        Command::Sweep {
            device,
            amplitude,
            slew,
            cycles,
            out,
        } => {
            let variant = resolved.variant(parse_variant(&device)?);
            let trace = run_triangle_sweep(variant, amplitude, slew, cycles);
            let window = last_cycle_window(amplitude, slew, cycles);
            let pv = extract_pv(
                &trace,
                &variant.stack,
                "v(dev)",
                "i(dev)",
                window,
                BaselineMode::ModelC0,
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            if let Some(out) = &out {
                write_trace_csv(&trace, out)?;
            }
            finish_manifest("sweep", argv, resolved, &[], out.as_deref())?;
            Ok(vec![
                kv("device", device),
                kv("slew", fmt_sci(slew)),
                kv("vc_plus", fmt_sci(pv.vc_plus)),
                kv("vc_minus", fmt_sci(pv.vc_minus)),
                kv("pr_plus", fmt_sci(pv.pr_plus)),
                kv("pr_minus", fmt_sci(pv.pr_minus)),
                kv("loop_closed", pv.closed.to_string()),
            ])
        }
        Command::Read {
            device,
            state,
            vmax,
            step,
            settle,
            out,
        } => {
            let variant = resolved.variant(parse_variant(&device)?);
            let state = match state.to_ascii_lowercase().as_str() {
                "lrs" => ReadState::Lrs,
                "hrs" => ReadState::Hrs,
                other => return Err(CliError::Config(format!("unknown state `{other}`"))),
            };
            let vmax = vmax.unwrap_or(variant.read_vmax);
            let curve = run_staircase_read(variant, vmax, step, settle, state);
            if let Some(out) = &out {
                let mut trace = Trace::new(vec!["v(dev)", "i(dev)"]);
                for (k, (&v, &i)) in curve.v.iter().zip(&curve.i).enumerate() {
                    trace.push_row((k + 1) as f64 * settle, &[v, i]);
                }
                write_trace_csv(&trace, out)?;
            }
            finish_manifest("read", argv, resolved, &[], out.as_deref())?;
            Ok(vec![
                kv("device", device),
                kv("vmax", fmt_sci(vmax)),
                kv("i_read", fmt_sci(curve.current_at(vmax))),
                kv("disturb_frac", fmt_sci(curve.disturb)),
                kv("disturbed", curve.disturbed.to_string()),
            ])
        }
        Command::Calibrate {
            targets,
            device,
            out,
        } => {
            let name = parse_variant(&device)?;
            let variant = resolved.variant(name);
            let text = fs::read_to_string(&targets)?;
            let file: TargetsFile = toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", targets.display())))?;
            let anchors: Vec<CalibrationTarget> = file
                .targets
                .iter()
                .map(|t| CalibrationTarget {
                    slew: t.slew,
                    vc: t.vc,
                })
                .collect();
            let params = calibrate_nls(&anchors, &variant.stack).map_err(|e| match e {
                CalibrationError::NotConverged { .. } => CliError::Solver(e.to_string()),
                other => CliError::Config(other.to_string()),
            })?;
            if let Some(out) = &out {
                let overlay = format!(
                    "[device.{name}]\ntau0 = {}\nea_mean = {}\n",
                    fmt_sci(params.tau0),
                    fmt_sci(params.ea_mean)
                );
                fs::write(out, overlay)?;
            }
            finish_manifest("calibrate", argv, resolved, &[&targets], out.as_deref())?;
            Ok(vec![
                kv("device", device),
                kv("tau0", fmt_sci(params.tau0)),
                kv("ea_mean", fmt_sci(params.ea_mean)),
            ])
        }
        Command::Sim { file, tstop, out } => {
            let text = fs::read_to_string(&file)?;
            let netlist = parse_netlist(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", file.display())))?;
            for diagnostic in validate_netlist(&netlist) {
                eprintln!("warning: {diagnostic}");
            }
            let tran_stop = tstop.or_else(|| {
                netlist.analyses.iter().find_map(|a| match a {
                    AnalysisDirective::Tran { tstop, .. } => Some(*tstop),
                    _ => None,
                })
            });
            let mut summary = vec![kv("netlist", file.display().to_string())];
            let trace = if let Some(tstop) = tran_stop {
                let result =
                    transient_with_variants(&netlist, tstop, &resolved.solver, &resolved.variants)?;
                summary.push(kv("tstop", fmt_sci(tstop)));
                summary.push(kv("steps", result.stats.steps.to_string()));
                summary.push(kv("rejected", result.stats.rejected.to_string()));
                summary.push(kv(
                    "max_kcl_residual",
                    fmt_sci(result.stats.max_kcl_residual),
                ));
                result.trace
            } else if let Some(AnalysisDirective::DcSweep {
                source,
                start,
                stop,
                step,
            }) = netlist
                .analyses
                .iter()
                .find(|a| matches!(a, AnalysisDirective::DcSweep { .. }))
            {
                let trace = dc_sweep(
                    &netlist,
                    source,
                    *start,
                    *stop,
                    *step,
                    &resolved.solver,
                    &resolved.variants,
                )?;
                summary.push(kv("dc_points", trace.len().to_string()));
                trace
            } else {
                return Err(CliError::Config(
                    "netlist has no .tran/.dc directive and no --tstop was given".into(),
                ));
            };
            if let Some(out) = &out {
                write_trace_csv(&trace, out)?;
            }
            finish_manifest("sim", argv, resolved, &[&file], out.as_deref())?;
            Ok(summary)
        }
        Command::Cell { bench } => match bench {
            CellBench::Diffpair {
                weight,
                develop,
                out,
            } => {
                if !(0.0..=1.0).contains(&weight) {
                    return Err(CliError::Config("weight must be in [0, 1]".into()));
                }
                let prog = run_diff_pair_program(&resolved.cell, weight)?;
                let (metrics, trace) =
                    run_diff_pair_read(&resolved.cell, prog.p1, prog.p2, develop)?;
                if let Some(out) = &out {
                    write_trace_csv(&trace, out)?;
                }
                finish_manifest("cell-diffpair", argv, resolved, &[], out.as_deref())?;
                Ok(vec![
                    kv("weight", fmt_sci(weight)),
                    kv("achieved_weight", fmt_sci(prog.achieved_w)),
                    kv("pulses_1", prog.pulses_1.to_string()),
                    kv("pulses_2", prog.pulses_2.to_string()),
                    kv("p1", fmt_sci(prog.p1)),
                    kv("p2", fmt_sci(prog.p2)),
                    kv("dv_n1n2", fmt_sci(metrics.dv_n1n2_at_t)),
                    kv("di_pair", fmt_sci(metrics.di_pair)),
                    kv("i_sum_error", fmt_sci(metrics.i_sum_error)),
                ])
            }
            CellBench::Nvsram {
                stored,
                mc,
                sigma_vt,
                develop,
                out,
            } => {
                let logic = match stored {
                    0 => false,
                    1 => true,
                    other => {
                        return Err(CliError::Config(format!(
                            "stored state must be 0 or 1, got {other}"
                        )));
                    }
                };
                if mc > 0 {
                    let report = run_nvsram_restore_mc(&resolved.cell, mc, sigma_vt, develop)?;
                    finish_manifest("cell-nvsram", argv, resolved, &[], out.as_deref())?;
                    return Ok(vec![
                        kv("mc_trials", report.trials.to_string()),
                        kv("mc_correct", report.correct.to_string()),
                        kv(
                            "mc_failures",
                            format!(
                                "[{}]",
                                report
                                    .failures
                                    .iter()
                                    .map(usize::to_string)
                                    .collect::<Vec<_>>()
                                    .join(",")
                            ),
                        ),
                    ]);
                }
                let store = run_nvsram_store(&resolved.cell, logic)?;
                let (metrics, trace) = run_nvsram_restore(
                    &resolved.cell,
                    (store.p1, store.p2),
                    develop,
                    &VtMismatch::default(),
                )?;
                if let Some(out) = &out {
                    write_trace_csv(&trace, out)?;
                }
                finish_manifest("cell-nvsram", argv, resolved, &[], out.as_deref())?;
                Ok(vec![
                    kv("stored", (logic as u8).to_string()),
                    kv("p1", fmt_sci(store.p1)),
                    kv("p2", fmt_sci(store.p2)),
                    kv("weak_programming", store.weak_programming.to_string()),
                    kv("develop_dv", fmt_sci(metrics.dv_n1n2_at_t)),
                    kv("swing", fmt_sci(metrics.q_qn_swing.unwrap_or(0.0))),
                    kv(
                        "restore_correct",
                        metrics.restore_correct.unwrap_or(false).to_string(),
                    ),
                ])
            }
        },
        Command::Readtime { dv, c0, j } => {
            let t = read_time(dv, c0, j).map_err(|e| CliError::Config(e.to_string()))?;
            finish_manifest("readtime", argv, resolved, &[], None)?;
            Ok(vec![kv("t_read", fmt_sci(t))])
        }
        Command::Freqscale {
            device,
            slews,
            amplitude,
        } => {
            let variant = resolved.variant(parse_variant(&device)?);
            if slews.is_empty() {
                return Err(CliError::Config("at least one slew rate required".into()));
            }
            let report = frequency_scaling_report(variant, amplitude, &slews);
            let mut summary = vec![kv("device", device)];
            for (k, row) in report.rows.iter().enumerate() {
                summary.push(kv(format!("slew_{k}"), fmt_sci(row.slew)));
                summary.push(kv(format!("plateau_{k}"), fmt_sci(row.plateau)));
                if let Some(vc) = row.vc_plus {
                    summary.push(kv(format!("vc_plus_{k}"), fmt_sci(vc)));
                }
            }
            if report.rows.len() >= 2 {
                let first = &report.rows[0];
                let last = &report.rows[report.rows.len() - 1];
                summary.push(kv("plateau_ratio", fmt_sci(last.plateau / first.plateau)));
            }
            summary.push(kv(
                "linear_fit_residual",
                fmt_sci(report.linear_fit_residual),
            ));
            finish_manifest("freqscale", argv, resolved, &[], None)?;
            Ok(summary)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        std::iter::once("ferrosim")
            .chain(list.iter().copied())
            .map(str::to_string)
            .collect()
    }

    fn summary_value(summary: &Summary, key: &str) -> String {
        summary
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| panic!("missing key {key}"))
    }

    // The working directory is process-global; runs that write their
    // manifest relative to it take this lock.
    static CWD_LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());

    fn execute_in(dir: &Path, list: &[&str]) -> Result<Summary, DispatchError> {
        let _guard = CWD_LOCK.lock().unwrap();
        let prev = std::env::current_dir().unwrap();
        std::env::set_current_dir(dir).unwrap();
        let result = execute(&args(list));
        std::env::set_current_dir(prev).unwrap();
        result
    }

    #[test]
    fn readtime_prints_the_formula_value() {
        let dir = tempfile::tempdir().unwrap();
        let summary = execute_in(dir.path(), &["readtime", "--dv", "0.05", "--c0", "1.3e-6", "--j", "1e-4"])
            .map_err(|_| "failed")
            .unwrap();
        assert_eq!(summary_value(&summary, "t_read"), "6.50000000e-4");
        assert!(dir.path().join("ferrosim-run.manifest.toml").exists());
    }

    #[test]
    fn unknown_flag_is_a_usage_error() {
        let code = dispatch(args(&["sweep", "--frobnicate"]));
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(dispatch(args(&["--help"])), EXIT_OK);
    }

    #[test]
    fn missing_netlist_is_an_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("nope.cir");
        match execute(&args(&["sim", missing.to_str().unwrap()])) {
            Err(DispatchError::Run(e)) => assert_eq!(e.exit_code(), EXIT_IO),
            other => panic!("expected I/O error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn bad_config_key_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("bad.toml");
        fs::write(&config, "[device.A]\nprr = 1.0\n").unwrap();
        match execute(&args(&[
            "--config",
            config.to_str().unwrap(),
            "readtime",
            "--dv",
            "0.05",
            "--c0",
            "1.3e-6",
            "--j",
            "1e-4",
        ])) {
            Err(DispatchError::Run(e)) => {
                assert_eq!(e.exit_code(), EXIT_CONFIG);
                assert!(e.to_string().contains("device.A.prr"));
            }
            other => panic!("expected config error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn sim_runs_a_netlist_and_emits_csv_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let cir = dir.path().join("rc.cir");
        fs::write(
            &cir,
            "rc bench\nV1 in 0 PWL(0 0 1n 1)\nR1 in out 1k\nC1 out 0 1u\n.tran 10u 1m\n.end\n",
        )
        .unwrap();
        let out = dir.path().join("rc.csv");
        let summary = execute(&args(&[
            "sim",
            cir.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]))
        .map_err(|_| "failed")
        .unwrap();
        assert!(out.exists());
        assert!(dir.path().join("rc.manifest.toml").exists());
        assert!(summary_value(&summary, "steps").parse::<usize>().unwrap() > 10);

        // Byte-identical rerun (reproducibility contract).
        let bytes1 = fs::read(&out).unwrap();
        execute(&args(&["sim", cir.to_str().unwrap(), "--out", out.to_str().unwrap()]))
            .map_err(|_| "failed")
            .unwrap();
        assert_eq!(bytes1, fs::read(&out).unwrap());

        // The CSV round-trips through the trace reader.
        let trace = read_trace_csv(&out).unwrap();
        assert!(trace.len() > 10);
    }

    #[test]
    fn sweep_override_reflects_in_extraction() {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("override.toml");
        fs::write(&config, "[device.A]\npr = 2.2e-5\n").unwrap();
        let out = dir.path().join("iv.csv");
        let summary = execute(&args(&[
            "--config",
            config.to_str().unwrap(),
            "sweep",
            "--device",
            "A",
            "--slew",
            "5.5e5",
            "--out",
            out.to_str().unwrap(),
        ]))
        .map_err(|_| "failed")
        .unwrap();
        let pr: f64 = summary_value(&summary, "pr_plus").parse().unwrap();
        assert!((pr - 2.2e-5).abs() / 2.2e-5 < 0.1, "pr = {pr}");
        assert!(dir.path().join("iv.manifest.toml").exists());
    }

    #[test]
    fn calibrate_reads_targets_and_writes_overlay() {
        let dir = tempfile::tempdir().unwrap();
        let targets = dir.path().join("targets.toml");
        fs::write(
            &targets,
            "[[targets]]\nslew = 1.1e4\nvc = 2.5\n\n[[targets]]\nslew = 5.5e5\nvc = 4.0\n",
        )
        .unwrap();
        let out = dir.path().join("fit.toml");
        let summary = execute(&args(&[
            "calibrate",
            "--targets",
            targets.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]))
        .map_err(|_| "failed")
        .unwrap();
        let tau0: f64 = summary_value(&summary, "tau0").parse().unwrap();
        assert!(tau0 > 0.0);
        // The overlay is itself a loadable config.
        let resolved = load_config(&[out]).unwrap();
        assert!((resolved.variant(VariantName::A).stack.nls.tau0 - tau0).abs() / tau0 < 1e-6);
    }

    #[test]
    fn read_defaults_to_variant_window() {
        let dir = tempfile::tempdir().unwrap();
        let summary = execute_in(dir.path(), &["read", "--device", "C", "--state", "lrs"])
            .map_err(|_| "failed")
            .unwrap();
        assert_eq!(summary_value(&summary, "vmax"), "2.50000000e0");
        assert_eq!(summary_value(&summary, "disturbed"), "false");
    }
}
