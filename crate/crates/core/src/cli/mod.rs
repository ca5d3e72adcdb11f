//! Command-line front end.
//!
//! Subcommands: `curve` (Q and gamma along a time grid), `optimum` (peak
//! QSNR for one parameter set), `sweep` (optima along a parameter grid),
//! `enhancement` (high-temperature gain over a coupling grid),
//! `critical-eta` (threshold coupling over an Ohmicity grid), `ramsey`
//! (Monte Carlo bound check), and `figure` (canned panel datasets).
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical failure (including
//! any row-level error in an otherwise completed dataset).

mod figures;
mod output;

pub use figures::{figure_dataset, FigureId, ALL_FIGURES};
pub use output::Dataset;

use crate::environment::{gamma_scaled, EvalMethod, OhmicSpectrum, QuadratureConfig, ScaledPoint};
use crate::error::Error;
use crate::metrology::qsnr;
use crate::optimize::{critical_eta, enhancement_factor, find_optimum};
use crate::ramsey::{crb_report, RamseyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Field, Row};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "ohmic-probe",
    version,
    about = "Qubit-probe estimation of an Ohmic-family environment's cutoff frequency"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// QSNR and decoherence exponent along a time grid
    Curve(CurveArgs),
    /// Optimal measurement time and peak QSNR for one parameter set
    Optimum(OptimumArgs),
    /// Optima along a grid of one varied parameter
    Sweep(SweepArgs),
    /// High-temperature enhancement factor over a coupling grid
    Enhancement(EnhancementArgs),
    /// Critical coupling below which temperature helps, over an Ohmicity grid
    CriticalEta(CriticalEtaArgs),
    /// Monte Carlo Ramsey estimation against the quantum Cramer-Rao bound
    Ramsey(RamseyArgs),
    /// Dataset behind one panel of the reference figures
    Figure(FigureArgs),
}

#[derive(Args)]
struct QuadArgs {
    /// Relative tolerance of the adaptive quadrature
    #[arg(long, default_value_t = 1e-9)]
    quad_rel_tol: f64,
    /// Absolute tolerance of the adaptive quadrature
    #[arg(long, default_value_t = 1e-12)]
    quad_abs_tol: f64,
}

impl QuadArgs {
    fn config(&self) -> Result<QuadratureConfig, Failure> {
        let quad = QuadratureConfig {
            rel_tol: self.quad_rel_tol,
            abs_tol: self.quad_abs_tol,
            ..QuadratureConfig::default()
        };
        quad.validate().map_err(usage)?;
        Ok(quad)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct CurveArgs {
    /// Coupling strength
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Ohmicity exponent
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Scaled temperature T / omega_c
    #[arg(long, default_value_t = 0.0, conflicts_with = "temperature")]
    theta: f64,
    /// Grid start in scaled time omega_c t
    #[arg(long, default_value_t = 0.0)]
    tau_min: f64,
    /// Grid end in scaled time
    #[arg(long, default_value_t = 10.0)]
    tau_max: f64,
    /// Grid size
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Logarithmic grid spacing
    #[arg(long)]
    log: bool,
    /// Cutoff frequency; adds a dimensionful time column t = tau / omega_c
    #[arg(long)]
    omega_c: Option<f64>,
    /// Temperature in the units of omega-c (implies theta = T / omega_c)
    #[arg(long, requires = "omega_c")]
    temperature: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OptimumArgs {
    /// Coupling strength
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Ohmicity exponent
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Scaled temperature T / omega_c
    #[arg(long, default_value_t = 0.0, conflicts_with = "temperature")]
    theta: f64,
    /// Cutoff frequency; adds the dimensionful optimum t_opt = tau_opt / omega_c
    #[arg(long)]
    omega_c: Option<f64>,
    /// Temperature in the units of omega-c (implies theta = T / omega_c)
    #[arg(long, requires = "omega_c")]
    temperature: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    /// Write the JSON record to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter the grid varies
    #[arg(long, value_enum)]
    vary: VaryParam,
    /// Grid start
    #[arg(long)]
    min: f64,
    /// Grid end
    #[arg(long)]
    max: f64,
    /// Grid size
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Logarithmic grid spacing
    #[arg(long)]
    log: bool,
    /// Fixed coupling strength (default 1)
    #[arg(long)]
    eta: Option<f64>,
    /// Fixed Ohmicity exponent (default 1)
    #[arg(long)]
    s: Option<f64>,
    /// Fixed scaled temperature (default 0)
    #[arg(long)]
    theta: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct EnhancementArgs {
    /// Ohmicity exponent
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Coupling grid start
    #[arg(long, default_value_t = 0.01)]
    min: f64,
    /// Coupling grid end
    #[arg(long, default_value_t = 1.0)]
    max: f64,
    /// Grid size
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Logarithmic grid spacing
    #[arg(long)]
    log: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CriticalEtaArgs {
    /// Ohmicity grid start
    #[arg(long, default_value_t = 0.3)]
    min: f64,
    /// Ohmicity grid end
    #[arg(long, default_value_t = 3.0)]
    max: f64,
    /// Grid size
    #[arg(long, default_value_t = 28)]
    points: usize,
    /// Logarithmic grid spacing
    #[arg(long)]
    log: bool,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RamseyArgs {
    /// Coupling strength
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Ohmicity exponent
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// True cutoff frequency being estimated
    #[arg(long, default_value_t = 1.0)]
    omega_c: f64,
    /// Environment temperature in the units of omega-c
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Measurement time; defaults to the optimal time t_opt
    #[arg(long)]
    time: Option<f64>,
    /// Measurements per trial
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    /// Independent estimation trials
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// PRNG seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Write the JSON report to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// Panel id: 1a, 1b, 2a, 2b, 3, 4a, 4b, 5a, 5b, 5c, 5d, 6a, 6b
    id: String,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parameter a sweep grid runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VaryParam {
    Eta,
    S,
    Theta,
    Tau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// One-dimensional evaluation grid. Endpoints are reproduced exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn validate(&self) -> crate::error::Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidParameter {
                name: "min",
                value: self.min,
                reason: "grid needs finite min < max",
            });
        }
        if self.points < 2 {
            return Err(Error::InvalidParameter {
                name: "points",
                value: self.points as f64,
                reason: "grid needs at least two points",
            });
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "min",
                value: self.min,
                reason: "log spacing needs min > 0",
            });
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|k| {
                if k == 0 {
                    return self.min;
                }
                if k == n - 1 {
                    return self.max;
                }
                let f = k as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect()
    }
}

/// Grid request shared by `curve` (vary = tau) and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub vary: VaryParam,
    pub grid: GridSpec,
    pub eta: f64,
    pub s: f64,
    pub theta: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> crate::error::Result<()> {
        self.grid.validate()?;
        let min_ok = match self.vary {
            VaryParam::Eta | VaryParam::S => self.grid.min > 0.0,
            VaryParam::Theta | VaryParam::Tau => self.grid.min >= 0.0,
        };
        if !min_ok {
            return Err(Error::InvalidParameter {
                name: "min",
                value: self.grid.min,
                reason: "grid leaves the varied parameter's domain",
            });
        }
        let fixed: [(&'static str, f64, bool); 3] = [
            ("eta", self.eta, self.eta.is_finite() && self.eta > 0.0),
            ("s", self.s, self.s.is_finite() && self.s > 0.0),
            ("theta", self.theta, self.theta.is_finite() && self.theta >= 0.0),
        ];
        for (name, value, ok) in fixed {
            if !ok {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "fixed parameter outside its domain",
                });
            }
        }
        Ok(())
    }

    /// (eta, s, theta) with the varied slot replaced by x.
    pub fn params_at(&self, x: f64) -> (f64, f64, f64) {
        match self.vary {
            VaryParam::Eta => (x, self.s, self.theta),
            VaryParam::S => (self.eta, x, self.theta),
            VaryParam::Theta => (self.eta, self.s, x),
            VaryParam::Tau => (self.eta, self.s, self.theta),
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(Error),
    Io(io::Error),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Entry point behind `main`; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = init_threads_from_env() {
        eprintln!("error: {msg}");
        return 1;
    }
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            1
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn init_threads_from_env() -> Result<(), String> {
    let Ok(raw) = std::env::var("OHMIC_PROBE_THREADS") else {
        return Ok(());
    };
    match raw.parse::<usize>() {
        Ok(n) if n >= 1 => {
            // a second initialization in the same process is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        _ => Err(format!(
            "OHMIC_PROBE_THREADS must be a positive integer, got {raw:?}"
        )),
    }
}

fn dispatch(command: &Command) -> Result<i32, Failure> {
    match command {
        Command::Curve(a) => {
            let ds = curve_dataset(a)?;
            emit_dataset(&ds, a.out.format, a.out.output.as_deref())?;
            Ok(dataset_code(&ds))
        }
        Command::Optimum(a) => {
            let record = optimum_record(a)?;
            emit_value(&record, a.output.as_deref())?;
            Ok(0)
        }
        Command::Sweep(a) => {
            let ds = sweep_dataset(a)?;
            emit_dataset(&ds, a.out.format, a.out.output.as_deref())?;
            Ok(dataset_code(&ds))
        }
        Command::Enhancement(a) => {
            let ds = enhancement_dataset(a)?;
            emit_dataset(&ds, a.out.format, a.out.output.as_deref())?;
            Ok(dataset_code(&ds))
        }
        Command::CriticalEta(a) => {
            let ds = critical_eta_dataset(a)?;
            emit_dataset(&ds, a.out.format, a.out.output.as_deref())?;
            Ok(dataset_code(&ds))
        }
        Command::Ramsey(a) => {
            let (record, valid) = ramsey_record(a)?;
            emit_value(&record, a.output.as_deref())?;
            Ok(if valid { 0 } else { 2 })
        }
        Command::Figure(a) => {
            let id: FigureId = a.id.parse().map_err(Failure::Usage)?;
            let quad = a.quad.config()?;
            let ds = figure_dataset(id, &quad);
            emit_dataset(&ds, a.out.format, a.out.output.as_deref())?;
            Ok(dataset_code(&ds))
        }
    }
}

fn dataset_code(ds: &Dataset) -> i32 {
    if ds.row_errors() > 0 {
        2
    } else {
        0
    }
}

/// Q and gamma at one scaled point; the shared per-row evaluation.
pub(crate) fn qsnr_gamma(
    eta: f64,
    s: f64,
    tau: f64,
    theta: f64,
    quad: &QuadratureConfig,
) -> crate::error::Result<(f64, f64)> {
    let point = ScaledPoint::new(tau, theta)?;
    let gamma = gamma_scaled(eta, s, point, EvalMethod::Auto, quad)?;
    let q = qsnr(eta, s, point, quad)?;
    Ok((q, gamma))
}

fn resolve_theta(
    theta: f64,
    omega_c: Option<f64>,
    temperature: Option<f64>,
) -> Result<f64, Failure> {
    if let Some(w) = omega_c {
        if !(w.is_finite() && w > 0.0) {
            return Err(Failure::Usage(format!(
                "--omega-c must be finite and positive, got {w}"
            )));
        }
    }
    match (omega_c, temperature) {
        (Some(w), Some(t)) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Failure::Usage(format!(
                    "--temperature must be finite and nonnegative, got {t}"
                )));
            }
            Ok(t / w)
        }
        _ => {
            if !(theta.is_finite() && theta >= 0.0) {
                return Err(Failure::Usage(format!(
                    "--theta must be finite and nonnegative, got {theta}"
                )));
            }
            Ok(theta)
        }
    }
}

fn check_coupling_params(eta: f64, s: f64) -> Result<(), Failure> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Failure::Usage(format!(
            "--eta must be finite and positive, got {eta}"
        )));
    }
    if !(s.is_finite() && s > 0.0) {
        return Err(Failure::Usage(format!(
            "--s must be finite and positive, got {s}"
        )));
    }
    Ok(())
}

fn spacing(log: bool) -> Spacing {
    if log {
        Spacing::Log
    } else {
        Spacing::Linear
    }
}

fn spacing_name(sp: Spacing) -> &'static str {
    match sp {
        Spacing::Linear => "linear",
        Spacing::Log => "log",
    }
}

fn vary_name(v: VaryParam) -> &'static str {
    match v {
        VaryParam::Eta => "eta",
        VaryParam::S => "s",
        VaryParam::Theta => "theta",
        VaryParam::Tau => "tau",
    }
}

fn comment(key: &str, value: impl ToString) -> (String, String) {
    (key.to_string(), value.to_string())
}

fn curve_dataset(a: &CurveArgs) -> Result<Dataset, Failure> {
    let quad = a.quad.config()?;
    let theta = resolve_theta(a.theta, a.omega_c, a.temperature)?;
    let spec = SweepSpec {
        vary: VaryParam::Tau,
        grid: GridSpec {
            min: a.tau_min,
            max: a.tau_max,
            points: a.points,
            spacing: spacing(a.log),
        },
        eta: a.eta,
        s: a.s,
        theta,
    };
    spec.validate().map_err(usage)?;

    let taus = spec.grid.values();
    let rows: Vec<Row> = taus
        .par_iter()
        .map(|&tau| {
            let mut fields = vec![Field::Num(tau)];
            if let Some(w) = a.omega_c {
                fields.push(Field::Num(tau / w));
            }
            match qsnr_gamma(spec.eta, spec.s, tau, spec.theta, &quad) {
                Ok((q, gamma)) => {
                    fields.push(Field::Num(q));
                    fields.push(Field::Num(gamma));
                    Row::ok(fields)
                }
                Err(e) => {
                    fields.push(Field::Empty);
                    fields.push(Field::Empty);
                    Row::failed(fields, e.to_string())
                }
            }
        })
        .collect();

    let columns = if a.omega_c.is_some() {
        vec!["tau", "t", "q", "gamma"]
    } else {
        vec!["tau", "q", "gamma"]
    };
    let mut comments = vec![
        comment("command", "curve"),
        comment("eta", a.eta),
        comment("s", a.s),
        comment("theta", theta),
        comment("spacing", spacing_name(spec.grid.spacing)),
    ];
    if let Some(w) = a.omega_c {
        comments.push(comment("omega_c", w));
    }
    if let Some(t) = a.temperature {
        comments.push(comment("temperature", t));
    }
    Ok(Dataset { comments, columns, rows })
}

fn optimum_record(a: &OptimumArgs) -> Result<Value, Failure> {
    let quad = a.quad.config()?;
    let theta = resolve_theta(a.theta, a.omega_c, a.temperature)?;
    check_coupling_params(a.eta, a.s)?;

    let result = find_optimum(a.eta, a.s, theta, &quad).map_err(Failure::Numeric)?;
    let mut value = serde_json::to_value(&result).expect("plain record serializes");
    let record = value.as_object_mut().expect("optimum serializes to an object");
    record.insert("eta".into(), json!(a.eta));
    record.insert("s".into(), json!(a.s));
    record.insert("theta".into(), json!(theta));
    if let Some(w) = a.omega_c {
        record.insert("omega_c".into(), json!(w));
        record.insert("t_opt".into(), json!(result.tau_opt / w));
    }
    Ok(value)
}

fn sweep_dataset(a: &SweepArgs) -> Result<Dataset, Failure> {
    let quad = a.quad.config()?;
    if a.vary == VaryParam::Tau {
        return Err(Failure::Usage(
            "--vary tau is the `curve` command; use that for time grids".into(),
        ));
    }
    let clash = match a.vary {
        VaryParam::Eta => a.eta.is_some(),
        VaryParam::S => a.s.is_some(),
        VaryParam::Theta => a.theta.is_some(),
        VaryParam::Tau => false,
    };
    if clash {
        return Err(Failure::Usage(format!(
            "--{0} cannot be fixed while --vary {0} runs over it",
            vary_name(a.vary)
        )));
    }
    let spec = SweepSpec {
        vary: a.vary,
        grid: GridSpec {
            min: a.min,
            max: a.max,
            points: a.points,
            spacing: spacing(a.log),
        },
        eta: a.eta.unwrap_or(1.0),
        s: a.s.unwrap_or(1.0),
        theta: a.theta.unwrap_or(0.0),
    };
    spec.validate().map_err(usage)?;

    let xs = spec.grid.values();
    let rows: Vec<Row> = xs
        .par_iter()
        .map(|&x| {
            let (eta, s, theta) = spec.params_at(x);
            match find_optimum(eta, s, theta, &quad) {
                Ok(o) => Row::ok(vec![
                    Field::Num(x),
                    Field::Num(o.tau_opt),
                    Field::Num(o.q_opt),
                    Field::Num(o.gamma_opt),
                    Field::Text(method_name(o.method).into()),
                    Field::Bool(o.short_time_regime),
                ]),
                Err(e) => Row::failed(
                    vec![
                        Field::Num(x),
                        Field::Empty,
                        Field::Empty,
                        Field::Empty,
                        Field::Empty,
                        Field::Empty,
                    ],
                    e.to_string(),
                ),
            }
        })
        .collect();

    let mut comments = vec![
        comment("command", "sweep"),
        comment("vary", vary_name(a.vary)),
        comment("spacing", spacing_name(spec.grid.spacing)),
    ];
    for (name, value) in [("eta", spec.eta), ("s", spec.s), ("theta", spec.theta)] {
        if name != vary_name(a.vary) {
            comments.push(comment(name, value));
        }
    }
    Ok(Dataset {
        comments,
        columns: vec!["x", "tau_opt", "q_opt", "gamma_opt", "method", "short_time_regime"],
        rows,
    })
}

fn enhancement_dataset(a: &EnhancementArgs) -> Result<Dataset, Failure> {
    let quad = a.quad.config()?;
    let spec = SweepSpec {
        vary: VaryParam::Eta,
        grid: GridSpec {
            min: a.min,
            max: a.max,
            points: a.points,
            spacing: spacing(a.log),
        },
        eta: 1.0,
        s: a.s,
        theta: 0.0,
    };
    spec.validate().map_err(usage)?;

    let etas = spec.grid.values();
    let rows: Vec<Row> = etas
        .par_iter()
        .map(|&eta| match enhancement_factor(eta, a.s, &quad) {
            Ok(r) => Row::ok(vec![
                Field::Num(eta),
                Field::Num(r.r),
                Field::Num(r.q_sat),
                Field::Num(r.q_opt_zero_t),
            ]),
            Err(e) => Row::failed(
                vec![Field::Num(eta), Field::Empty, Field::Empty, Field::Empty],
                e.to_string(),
            ),
        })
        .collect();

    Ok(Dataset {
        comments: vec![
            comment("command", "enhancement"),
            comment("s", a.s),
            comment("spacing", spacing_name(spec.grid.spacing)),
        ],
        columns: vec!["eta", "r", "q_sat", "q_opt_zero_t"],
        rows,
    })
}

fn critical_eta_dataset(a: &CriticalEtaArgs) -> Result<Dataset, Failure> {
    let quad = a.quad.config()?;
    let spec = SweepSpec {
        vary: VaryParam::S,
        grid: GridSpec {
            min: a.min,
            max: a.max,
            points: a.points,
            spacing: spacing(a.log),
        },
        eta: 1.0,
        s: 1.0,
        theta: 0.0,
    };
    spec.validate().map_err(usage)?;

    let ss = spec.grid.values();
    let rows: Vec<Row> = ss
        .par_iter()
        .map(|&s| match critical_eta(s, &quad) {
            Ok(eta_c) => Row::ok(vec![Field::Num(s), Field::Num(eta_c)]),
            Err(e) => Row::failed(vec![Field::Num(s), Field::Empty], e.to_string()),
        })
        .collect();

    Ok(Dataset {
        comments: vec![
            comment("command", "critical-eta"),
            comment("spacing", spacing_name(spec.grid.spacing)),
        ],
        columns: vec!["s", "eta_c"],
        rows,
    })
}

fn ramsey_record(a: &RamseyArgs) -> Result<(Value, bool), Failure> {
    if !(a.omega_c.is_finite() && a.omega_c > 0.0) {
        return Err(Failure::Usage(format!(
            "--omega-c must be finite and positive, got {}",
            a.omega_c
        )));
    }
    if !(a.temperature.is_finite() && a.temperature >= 0.0) {
        return Err(Failure::Usage(format!(
            "--temperature must be finite and nonnegative, got {}",
            a.temperature
        )));
    }
    let quad = QuadratureConfig::default();
    let theta = a.temperature / a.omega_c;
    let time = match a.time {
        Some(t) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::Usage(format!(
                    "--time must be finite and positive, got {t}"
                )));
            }
            t
        }
        None => {
            let optimum = find_optimum(a.eta, a.s, theta, &quad).map_err(Failure::Numeric)?;
            optimum.tau_opt / a.omega_c
        }
    };
    let config = RamseyConfig {
        spec: OhmicSpectrum::new(a.eta, a.s, a.omega_c).map_err(usage)?,
        temperature: a.temperature,
        measure_time: time,
        shots: a.shots,
        trials: a.trials,
        seed: a.seed,
    };
    config.validate().map_err(usage)?;
    let report = crb_report(&config).map_err(Failure::Numeric)?;
    let valid = report.valid;
    let mut value = serde_json::to_value(&report).expect("plain record serializes");
    let record = value.as_object_mut().expect("report serializes to an object");
    record.insert("eta".into(), json!(a.eta));
    record.insert("s".into(), json!(a.s));
    record.insert("omega_c".into(), json!(a.omega_c));
    record.insert("temperature".into(), json!(a.temperature));
    record.insert("measure_time".into(), json!(time));
    record.insert("shots".into(), json!(a.shots));
    record.insert("trials".into(), json!(a.trials));
    record.insert("seed".into(), json!(a.seed));
    Ok((value, valid))
}

fn method_name(m: EvalMethod) -> &'static str {
    match m {
        EvalMethod::Auto => "auto",
        EvalMethod::ClosedFormZeroT => "closed_form_zero_t",
        EvalMethod::Quadrature => "quadrature",
        EvalMethod::HighTemperature => "high_temperature",
        EvalMethod::ShortTime => "short_time",
    }
}

fn emit_dataset(ds: &Dataset, format: Format, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(Failure::Io)?;
            let mut w = BufWriter::new(file);
            ds.write(format, &mut w).map_err(Failure::Io)?;
            w.flush().map_err(Failure::Io)
        }
        None => {
            let stdout_handle = io::stdout();
            let mut lock = stdout_handle.lock();
            ds.write(format, &mut lock).map_err(Failure::Io)
        }
    }
}

fn emit_value(value: &Value, path: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json value renders");
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(Failure::Io),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
