//! Command-line front end: config parsing, presets, scan orchestration with
//! weighted composition of transitions, CSV output and the `verify` check.
//!
//! Signals are in the model's arbitrary absorption units.

pub mod config;
pub mod presets;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::doppler::{scan_b0_averaged, DetuningGrid};
use crate::error::Error;
use crate::liouvillian::SystemParams;
use crate::oracle::{self, LockinSettings};
use crate::parametric::{alpha_beta, evaluate_with, scan_b0, AlphaBetaFn, SignalPoint};
use crate::steady::solve_params;
use config::{Columns, ConfigError, ResolvedScan, ScanConfig};

pub const CSV_HEADER: &str = "b0_larmor,lambda_static,lambda_inphase,lambda_quadrature";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

/// Failure of a CLI command.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Solver(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Solver(e) => write!(f, "solver error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// Command-line overrides for a scan.
#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    pub output: Option<PathBuf>,
    /// `Some(true)` forces detuning averaging (default grid if the config has
    /// none), `Some(false)` disables it.
    pub doppler: Option<bool>,
}

/// Applies `opts` to a resolved config.
pub fn apply_options(mut scan: ResolvedScan, opts: &ScanOptions) -> ResolvedScan {
    match opts.doppler {
        Some(true) => scan.doppler = scan.doppler.or(Some(DetuningGrid::default())),
        Some(false) => scan.doppler = None,
        None => {}
    }
    if opts.output.is_some() {
        scan.output = opts.output.clone();
    }
    scan
}

/// Weighted sum over the components, in grid order.
pub fn compute(scan: &ResolvedScan) -> Result<Vec<SignalPoint>, Error> {
    let mut total: Vec<SignalPoint> = scan
        .grid
        .iter()
        .map(|&b0| SignalPoint {
            b0,
            static_signal: 0.0,
            inphase: 0.0,
            quadrature: 0.0,
        })
        .collect();
    for (p, weight) in &scan.components {
        let points = match &scan.doppler {
            Some(grid) => scan_b0_averaged(p, &scan.grid, grid)?,
            None => scan_b0(p, &scan.grid)?,
        };
        for (acc, pt) in total.iter_mut().zip(points) {
            let pt = pt.scaled(*weight);
            acc.static_signal += pt.static_signal;
            acc.inphase += pt.inphase;
            acc.quadrature += pt.quadrature;
        }
    }
    Ok(total)
}

fn cell(selected: bool, v: f64) -> String {
    if selected {
        format!("{v:.14e}")
    } else {
        String::new()
    }
}

/// CSV text with 15 significant digits; unselected columns are left empty.
pub fn format_csv(points: &[SignalPoint], columns: Columns) -> String {
    let mut out = String::with_capacity(80 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            cell(true, p.b0),
            cell(columns.static_signal, p.static_signal),
            cell(columns.inphase, p.inphase),
            cell(columns.quadrature, p.quadrature),
        ));
    }
    out
}

/// Reads, resolves and runs a config. Returns the CSV text and the path it
/// was written to (`None` means the caller should print it).
pub fn run_scan(config_path: &Path, opts: &ScanOptions) -> Result<(String, Option<PathBuf>), CliError> {
    let scan = ScanConfig::from_file(config_path)?.resolve()?;
    let scan = apply_options(scan, opts);
    let points = compute(&scan).map_err(CliError::Solver)?;
    let csv = format_csv(&points, scan.columns);
    if let Some(path) = &scan.output {
        std::fs::write(path, &csv).map_err(|e| {
            CliError::Config(ConfigError {
                field: "output".into(),
                message: format!("cannot write {}: {e}", path.display()),
            })
        })?;
    }
    Ok((csv, scan.output))
}

/// One row of the `verify` table.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub error: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

/// Relative tolerance between perturbative and time-domain lock-in signals.
pub const ORACLE_TOLERANCE: f64 = 0.01;

/// Parameter points compared against the time-domain oracle.
pub fn verify_points() -> Vec<(&'static str, SystemParams)> {
    let eit_vacuum = presets::find("rb87-d1-Fg2-Fe1-vacuum").unwrap().params().unwrap();
    let eia_vacuum = presets::find("rb87-d1-Fg1-Fe2-vacuum").unwrap().params().unwrap();
    let collisions = SystemParams {
        gamma_coll: 1.0,
        detuning: 0.5,
        ..eia_vacuum
    };
    vec![
        ("Fg=2->Fe=1 vacuum, B0=0.01", SystemParams { b0: 0.01, ..eit_vacuum }),
        ("Fg=1->Fe=2 vacuum, B0=0.003", SystemParams { b0: 0.003, ..eia_vacuum }),
        ("Fg=1->Fe=2 gcoll=1 detuned, B0=0.003", SystemParams { b0: 0.003, ..collisions }),
    ]
}

fn relative(expected: f64, actual: f64) -> f64 {
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}

/// Runs all checks with the given `(α, β)` solver.
pub fn verify_checks(solver: AlphaBetaFn) -> Vec<Result<CheckResult, (String, Error)>> {
    let mut rows: Vec<Result<CheckResult, (String, Error)>> = verify_points()
        .into_par_iter()
        .map(|(name, p)| {
            let pert = evaluate_with(&p, solver).map_err(|e| (name.to_string(), e))?;
            let orc = oracle::lockin_signals(&p, &LockinSettings::default()).map_err(|e| (name.to_string(), e))?;
            Ok(vec![
                CheckResult {
                    name: format!("{name}: in-phase"),
                    expected: orc.inphase,
                    actual: pert.inphase,
                    error: relative(orc.inphase, pert.inphase),
                    tolerance: ORACLE_TOLERANCE,
                },
                CheckResult {
                    name: format!("{name}: quadrature"),
                    expected: orc.quadrature,
                    actual: pert.quadrature,
                    error: relative(orc.quadrature, pert.quadrature),
                    tolerance: ORACLE_TOLERANCE,
                },
            ])
        })
        .collect::<Vec<Result<Vec<CheckResult>, (String, Error)>>>()
        .into_iter()
        .flat_map(|r| match r {
            Ok(v) => v.into_iter().map(Ok).collect(),
            Err(e) => vec![Err(e)],
        })
        .collect();

    let closed = SystemParams {
        branching: 1.0,
        ..presets::find("rb87-d1-Fg1-Fe2-vacuum").unwrap().params().unwrap()
    };
    rows.push(
        solve_params(&closed)
            .map(|(_, sigma)| {
                let tr = sigma.trace().re;
                CheckResult {
                    name: "closed transition: Tr(sigma)".into(),
                    expected: 1.0,
                    actual: tr,
                    error: (tr - 1.0).abs(),
                    tolerance: 1e-10,
                }
            })
            .map_err(|e| ("closed transition".to_string(), e)),
    );
    rows
}

/// Prints the check table and returns the exit code.
pub fn verify_with(out: &mut dyn Write, solver: AlphaBetaFn) -> std::io::Result<i32> {
    let rows = verify_checks(solver);
    writeln!(
        out,
        "{:<50} {:>15} {:>15} {:>10} {:>8}  result",
        "check", "reference", "computed", "error", "tol"
    )?;
    let mut ok = true;
    for row in &rows {
        match row {
            Ok(r) => {
                ok &= r.passed();
                writeln!(
                    out,
                    "{:<50} {:>15.6e} {:>15.6e} {:>10.2e} {:>8.0e}  {}",
                    r.name,
                    r.expected,
                    r.actual,
                    r.error,
                    r.tolerance,
                    if r.passed() { "PASS" } else { "FAIL" }
                )?;
            }
            Err((name, e)) => {
                ok = false;
                writeln!(out, "{name:<50} error: {e}  FAIL")?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// `verify` with the library's solver.
pub fn verify(out: &mut dyn Write) -> std::io::Result<i32> {
    verify_with(out, alpha_beta)
}

/// Preset table as pretty JSON.
pub fn presets_json() -> String {
    serde_json::to_string_pretty(presets::all()).expect("presets serialize")
}
