//! Command-line front end. Every run writes its outputs plus `manifest.json`
//! and `resolved_config.toml` into the output directory.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::config::{load_config, to_config_string};
use crate::error::{ConfigError, NumericalError};
use crate::fluctuations::sweep_observables;
use crate::meanfield::{adiabatic_regime_holds, adiabatic_step, integrate, resolving_step, Dynamics, TrajectoryConfig};
use crate::model::{Model, ModelError, Verdict};
use crate::output::{write_branches, write_observables, write_trajectory};
use crate::params::SystemParams;
use crate::state::MeanFieldState;
use crate::steadystate::{find_branches, linspace, sweep_detuning, ScanOptions};

#[derive(Debug, Parser)]
#[command(
    name = "optomech",
    version,
    about = "BEC-assisted membrane-in-the-middle cavity simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the mean-field equations and write a trajectory CSV.
    Trajectory(TrajectoryArgs),
    /// Enumerate steady states over a detuning range.
    Branches(BranchArgs),
    /// Squeezing and entanglement along branch 1.
    Sweep(SweepArgs),
    /// Print derived parameters and regime checks.
    Check(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// TOML parameter file; reference parameter set when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Detuning δ_c in units of κ (overrides the config).
    #[arg(long = "delta-c", allow_hyphen_values = true)]
    pub delta_c: Option<f64>,
    /// Pump amplitude η in units of κ (overrides the config).
    #[arg(long)]
    pub eta: Option<f64>,
    /// ξ₂/ξ₁ (overrides the config).
    #[arg(long = "xi2-ratio", allow_hyphen_values = true)]
    pub xi2_ratio: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; defaults to the hardware parallelism.
    #[arg(long, env = "OPTOMECH_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Full,
    Adiabatic,
}

#[derive(Debug, Args, Clone)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value = "adiabatic")]
    pub model: ModelChoice,
    /// Final time in units of 1/γ_m.
    #[arg(long = "t-end-gamma-m-t", default_value_t = 1.0)]
    pub t_end_gamma_m_t: f64,
    /// Step in units of 1/κ. Defaults to 0.25 (adiabatic) or 0.05/(1 + |δ_c|/κ) (full).
    #[arg(long = "dt-kappa-t")]
    pub dt_kappa_t: Option<f64>,
    /// Write every n-th step.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
}

#[derive(Debug, Args, Clone)]
pub struct BranchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long = "delta-min", default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_min: f64,
    #[arg(long = "delta-max", default_value_t = 120.0, allow_hyphen_values = true)]
    pub delta_max: f64,
    /// Number of detuning points.
    #[arg(long, default_value_t = 241)]
    pub n: usize,
    /// Scan points per detuning.
    #[arg(long = "scan-points", default_value_t = 40_000)]
    pub scan_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Injection {
    On,
    Off,
    Both,
}

impl Injection {
    fn settings(self) -> Vec<bool> {
        match self {
            Injection::On => vec![true],
            Injection::Off => vec![false],
            Injection::Both => vec![false, true],
        }
    }
}

#[derive(Debug, Args, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated ξ₂/ξ₁ values.
    #[arg(
        long = "xi2-ratios",
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0"
    )]
    pub xi2_ratios: Vec<f64>,
    #[arg(long, value_enum, default_value = "both")]
    pub injection: Injection,
    #[arg(long = "delta-min", default_value_t = 0.0, allow_hyphen_values = true)]
    pub delta_min: f64,
    #[arg(long = "delta-max", default_value_t = 400.0, allow_hyphen_values = true)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 400)]
    pub n: usize,
    #[arg(long = "scan-points", default_value_t = 40_000)]
    pub scan_points: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] NumericalError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Config(c) => CliError::Config(c),
            ModelError::Numerical(n) => CliError::Numerical(n),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

fn config_error(key: &str, reason: impl Into<String>) -> CliError {
    CliError::Config(ConfigError::InvalidValue {
        key: key.to_owned(),
        reason: reason.into(),
    })
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub wall_time_s: f64,
    /// Fully resolved parameters in rad/s.
    pub config: SystemParams,
    pub d_convention: &'static str,
    pub outputs: Vec<String>,
    pub warnings: Vec<String>,
}

struct Run {
    out: PathBuf,
    outputs: Vec<String>,
    warnings: Vec<String>,
    started: Instant,
}

impl Run {
    fn new(out: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(out).map_err(|source| CliError::Io {
            path: out.display().to_string(),
            source,
        })?;
        Ok(Self {
            out: out.to_path_buf(),
            outputs: Vec::new(),
            warnings: Vec::new(),
            started: Instant::now(),
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>, CliError> {
        let path = self.out.join(name);
        let file = File::create(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.outputs.push(name.to_owned());
        Ok(BufWriter::new(file))
    }

    fn io<T>(&self, name: &str, r: std::io::Result<T>) -> Result<T, CliError> {
        r.map_err(|source| CliError::Io {
            path: self.out.join(name).display().to_string(),
            source,
        })
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.out.join(name);
        fs::write(&path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.outputs.push(name.to_owned());
        Ok(())
    }

    fn finish(mut self, command: &str, params: &SystemParams) -> Result<RunManifest, CliError> {
        self.write_text("resolved_config.toml", &to_config_string(params))?;
        self.outputs.push("manifest.json".into());
        let manifest = RunManifest {
            command: command.to_owned(),
            version: env!("CARGO_PKG_VERSION"),
            wall_time_s: self.started.elapsed().as_secs_f64(),
            config: *params,
            d_convention: params.d_convention.as_str(),
            outputs: self.outputs,
            warnings: self.warnings,
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        let path = self.out.join("manifest.json");
        fs::write(&path, json + "\n").map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(manifest)
    }
}

fn resolve_model(common: &CommonArgs) -> Result<Model, CliError> {
    let mut params = match &common.config {
        Some(path) => load_config(path)?,
        None => SystemParams::reference_defaults(),
    };
    if let Some(d) = common.delta_c {
        params = params.with_delta_c_ratio(d);
    }
    if let Some(e) = common.eta {
        params = params.with_eta_ratio(e);
    }
    if let Some(r) = common.xi2_ratio {
        params = params.with_xi2_ratio(r);
    }
    Ok(Model::new(params)?)
}

fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if threads == Some(0) {
        return Err(config_error("threads", "must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| config_error("threads", e.to_string()))
}

fn regime_warnings(model: &Model, photon_numbers: impl IntoIterator<Item = f64>, warnings: &mut Vec<String>) {
    let max_photons = photon_numbers.into_iter().fold(0.0, f64::max);
    let report = model.validity_check(max_photons);
    if report.verdict == Verdict::Warn {
        warnings.push(format!(
            "weak-interaction condition U0*I <= 10*omega_r violated: U0*I/(10*omega_r) = {:.3} at I = {:.4}",
            report.interaction_ratio, max_photons
        ));
    }
    if !report.unresolved_sideband {
        warnings.push(format!(
            "resolved-sideband regime: kappa/omega_m = {:.3}",
            report.kappa_over_omega_m
        ));
    }
    let diffusion = model.diffusion_matrix();
    if !diffusion.positive_semidefinite {
        warnings.push("diffusion matrix is not positive semidefinite".into());
    } else if !diffusion.is_physical() {
        warnings.push("diffusion matrix violates the quantum noise bound".into());
    }
}

pub fn run(cli: &Cli, command_line: &str) -> Result<RunManifest, CliError> {
    match &cli.command {
        Command::Trajectory(args) => cmd_trajectory(args, command_line),
        Command::Branches(args) => cmd_branches(args, command_line),
        Command::Sweep(args) => cmd_sweep(args, command_line),
        Command::Check(args) => cmd_check(args, command_line),
    }
}

pub fn cmd_trajectory(args: &TrajectoryArgs, command_line: &str) -> Result<RunManifest, CliError> {
    let model = resolve_model(&args.common)?;
    let p = &model.params;
    if !(args.t_end_gamma_m_t > 0.0) {
        return Err(config_error("t-end-gamma-m-t", "must be > 0"));
    }
    let dynamics = match args.model {
        ModelChoice::Full => Dynamics::Full,
        ModelChoice::Adiabatic => Dynamics::Adiabatic,
    };
    let dt = match (args.dt_kappa_t, dynamics) {
        (Some(x), _) if x > 0.0 => x / p.kappa,
        (Some(_), _) => return Err(config_error("dt-kappa-t", "must be > 0")),
        (None, Dynamics::Adiabatic) => adiabatic_step(&model),
        (None, Dynamics::Full) => resolving_step(&model, &MeanFieldState::ZERO),
    };
    let cfg = TrajectoryConfig {
        dynamics,
        t_end: args.t_end_gamma_m_t / p.gamma_m,
        dt,
        sample_stride: args.stride.max(1),
        initial: MeanFieldState::ZERO,
    };
    let traj = integrate(&model, &cfg)?;

    let mut run = Run::new(&args.common.out)?;
    if dynamics == Dynamics::Adiabatic && !adiabatic_regime_holds(&model) {
        run.warnings
            .push("kappa is not >> gamma_m, gamma_c; adiabatic elimination is questionable".into());
    }
    regime_warnings(&model, traj.photon_numbers.iter().copied(), &mut run.warnings);
    let mut w = run.create("trajectory.csv")?;
    let r = write_trajectory(&mut w, &model, &traj);
    run.io("trajectory.csv", r)?;
    run.io("trajectory.csv", std::io::Write::flush(&mut w))?;
    run.finish(command_line, &model.params)
}

#[derive(Debug, Serialize)]
struct FoldSummary {
    xi2_over_xi1: f64,
    max_coexisting: usize,
    first_fold_delta_c_over_kappa: Option<f64>,
    folds: Vec<FoldEntry>,
}

#[derive(Debug, Serialize)]
struct FoldEntry {
    delta_c_over_kappa: f64,
    delta_lo_over_kappa: f64,
    delta_hi_over_kappa: f64,
    count_before: usize,
    count_after: usize,
}

fn detuning_grid(min: f64, max: f64, n: usize, kappa: f64) -> Result<Vec<f64>, CliError> {
    if !(min < max) {
        return Err(config_error("delta-min", "must be smaller than delta-max"));
    }
    if n < 2 {
        return Err(config_error("n", "need at least 2 detuning points"));
    }
    Ok(linspace(min, max, n).into_iter().map(|d| d * kappa).collect())
}

pub fn cmd_branches(args: &BranchArgs, command_line: &str) -> Result<RunManifest, CliError> {
    let model = resolve_model(&args.common)?;
    let kappa = model.params.kappa;
    let deltas = detuning_grid(args.delta_min, args.delta_max, args.n, kappa)?;
    let options = ScanOptions {
        points: args.scan_points.max(4),
    };
    let table = thread_pool(args.common.threads)?.install(|| sweep_detuning(&model, &deltas, options))?;

    let mut run = Run::new(&args.common.out)?;
    regime_warnings(
        &model,
        table.points.iter().flatten().map(|p| p.photon_number),
        &mut run.warnings,
    );
    let mut w = run.create("branches.csv")?;
    let r = write_branches(&mut w, &model, &table);
    run.io("branches.csv", r)?;
    run.io("branches.csv", std::io::Write::flush(&mut w))?;

    let summary = FoldSummary {
        xi2_over_xi1: model.params.xi2 / model.params.xi1,
        max_coexisting: table.max_count(),
        first_fold_delta_c_over_kappa: table.folds.first().map(|f| f.delta_c / kappa),
        folds: table
            .folds
            .iter()
            .map(|f| FoldEntry {
                delta_c_over_kappa: f.delta_c / kappa,
                delta_lo_over_kappa: f.delta_lo / kappa,
                delta_hi_over_kappa: f.delta_hi / kappa,
                count_before: f.count_before,
                count_after: f.count_after,
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&summary).expect("fold summary serializes");
    run.write_text("folds.json", &(json + "\n"))?;
    run.finish(command_line, &model.params)
}

pub fn cmd_sweep(args: &SweepArgs, command_line: &str) -> Result<RunManifest, CliError> {
    let model = resolve_model(&args.common)?;
    let kappa = model.params.kappa;
    if args.xi2_ratios.is_empty() {
        return Err(config_error("xi2-ratios", "need at least one value"));
    }
    let deltas = detuning_grid(args.delta_min, args.delta_max, args.n, kappa)?;
    let options = ScanOptions {
        points: args.scan_points.max(4),
    };
    let injections = args.injection.settings();
    let rows = thread_pool(args.common.threads)?
        .install(|| sweep_observables(&model, &deltas, &args.xi2_ratios, &injections, options))?;

    let mut run = Run::new(&args.common.out)?;
    regime_warnings(&model, rows.iter().filter_map(|r| r.photon_number), &mut run.warnings);
    let mut w = run.create("observables.csv")?;
    let r = write_observables(&mut w, &rows);
    run.io("observables.csv", r)?;
    run.io("observables.csv", std::io::Write::flush(&mut w))?;
    run.finish(command_line, &model.params)
}

#[derive(Debug, Serialize)]
struct CheckReport {
    derived: crate::params::DerivedParams,
    steady_states: Vec<CheckPoint>,
}

#[derive(Debug, Serialize)]
struct CheckPoint {
    photon_number: f64,
    stable: bool,
    validity: crate::model::ValidityReport,
}

pub fn cmd_check(args: &CommonArgs, command_line: &str) -> Result<RunManifest, CliError> {
    let model = resolve_model(args)?;
    let branches = find_branches(&model)?;
    let report = CheckReport {
        derived: model.derived,
        steady_states: branches
            .iter()
            .map(|b| CheckPoint {
                photon_number: b.photon_number,
                stable: b.stable,
                validity: model.validity_check(b.photon_number),
            })
            .collect(),
    };
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));

    let mut run = Run::new(&args.out)?;
    regime_warnings(&model, branches.iter().map(|b| b.photon_number), &mut run.warnings);
    run.finish(command_line, &model.params)
}
