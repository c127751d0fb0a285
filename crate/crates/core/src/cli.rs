//! Command-line front end: run specifications, artifact writing and the batch
//! reproduction of the reference experiments.
//!
//! Every run writes into its own output directory:
//!
//! | file | content |
//! |------|---------|
//! | `config.txt` | the run spec as `key=value` lines, loadable with `--config` |
//! | `sweep_trace.csv` | analytic solver trace (`analytic`, `compare`) |
//! | `behavior_analytic.csv` | analytic `p(a|w)` (`analytic`, `compare`) |
//! | `trace.csv` | exact training snapshots (`gradient`, `compare`) |
//! | `behavior.csv` | trained `p(a|w)` (`gradient`, `compare`) |
//! | `parameters.txt` | trained network and action channel (`gradient`, `compare`) |
//! | `grid.csv` | ranked learning-rate grid (`grid`) |
//! | `summary.txt` | final values as `key=value` lines |

use std::ffi::OsString;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analytic::{solve_serial_restarts, sweep_trace_csv, RestartReport, SolverConfig, TabularSolution};
use crate::channels::write_parameters;
use crate::env::{load_utility_file, mug, mug_task, predator_prey, predator_prey_task, WorldModel};
use crate::infotheory::{InfoUnit, Objective};
use crate::trainer::{behavior_csv, grid_csv, grid_search, log_grid, materialize, trace_csv, train, TrainingConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Independent analytic solves per baseline.
pub const ANALYTIC_RESTARTS: usize = 5;
/// Grid side length and the ratio between neighbouring learning rates.
pub const GRID_SIZE: usize = 5;
pub const GRID_FACTOR: f64 = 2.0;
/// Hidden units used for tasks loaded from a utility file.
pub const FILE_TASK_HIDDEN_UNITS: usize = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("analytic solver did not converge: {0}")]
    NonConvergence(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NonConvergence(_) => EXIT_NON_CONVERGENCE,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::NonFinite { .. } | E::InfiniteDivergence { .. } | E::ZeroProbability { .. } => {
                CliError::Numeric(e.to_string())
            }
            E::Invalid { .. } | E::Dimension { .. } | E::Parse { .. } | E::Io(_) => CliError::Config(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskSpec {
    PredatorPrey,
    Mug,
    /// Utility table (and optional prior) loaded from a text file.
    File(PathBuf),
}

impl fmt::Display for TaskSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaskSpec::PredatorPrey => f.write_str("predator_prey"),
            TaskSpec::Mug => f.write_str("mug"),
            TaskSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for TaskSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "predator_prey" => Ok(TaskSpec::PredatorPrey),
            "mug" => Ok(TaskSpec::Mug),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(TaskSpec::File(PathBuf::from(path))),
                _ => Err(format!("unknown task `{s}` (expected predator_prey, mug or file:<path>)")),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Gradient,
    Compare,
    Grid,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Gradient => "gradient",
            Mode::Compare => "compare",
            Mode::Grid => "grid",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "gradient" => Ok(Mode::Gradient),
            "compare" => Ok(Mode::Compare),
            "grid" => Ok(Mode::Grid),
            _ => Err(format!("unknown mode `{s}` (expected analytic, gradient, compare or grid)")),
        }
    }
}

/// Everything that determines a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    pub task: TaskSpec,
    pub mode: Mode,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha_vw: f64,
    pub alpha_eta: f64,
    pub iterations: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Pixel flip probability of bitmap encoders.
    pub noise: f64,
    pub unit: InfoUnit,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            task: TaskSpec::PredatorPrey,
            mode: Mode::Compare,
            beta1: 8.0,
            beta2: 10.0,
            alpha_vw: 0.006,
            alpha_eta: 0.014,
            iterations: 100_000,
            seed: 0,
            out: PathBuf::from("out"),
            noise: 0.0,
            unit: InfoUnit::Bits,
        }
    }
}

const KEYS: [&str; 11] =
    ["task", "mode", "beta1", "beta2", "alpha_vw", "alpha_eta", "iterations", "seed", "out", "noise", "unit"];

impl RunSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::Config(format!("{name} must be a positive finite number, got {v}")))
            }
        };
        positive("beta1", self.beta1)?;
        positive("beta2", self.beta2)?;
        if matches!(self.mode, Mode::Gradient | Mode::Compare | Mode::Grid) {
            positive("alpha_vw", self.alpha_vw)?;
            positive("alpha_eta", self.alpha_eta)?;
            if self.iterations == 0 {
                return Err(CliError::Config("iterations must be at least 1".into()));
            }
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return Err(CliError::Config(format!("noise must lie in [0, 1], got {}", self.noise)));
        }
        if self.out.as_os_str().is_empty() {
            return Err(CliError::Config("out must not be empty".into()));
        }
        Ok(())
    }

    /// `key=value` lines in a fixed key order. Floats use the shortest
    /// representation that parses back to the same value.
    pub fn to_config(&self) -> String {
        let mut s = String::new();
        writeln!(s, "task={}", self.task).unwrap();
        writeln!(s, "mode={}", self.mode).unwrap();
        writeln!(s, "beta1={}", self.beta1).unwrap();
        writeln!(s, "beta2={}", self.beta2).unwrap();
        writeln!(s, "alpha_vw={}", self.alpha_vw).unwrap();
        writeln!(s, "alpha_eta={}", self.alpha_eta).unwrap();
        writeln!(s, "iterations={}", self.iterations).unwrap();
        writeln!(s, "seed={}", self.seed).unwrap();
        writeln!(s, "out={}", self.out.display()).unwrap();
        writeln!(s, "noise={}", self.noise).unwrap();
        writeln!(s, "unit={}", self.unit).unwrap();
        s
    }

    /// Parses `key=value` lines on top of the defaults. Blank lines and `#`
    /// comments are skipped; unknown or repeated keys are errors.
    pub fn from_config(text: &str) -> Result<Self, CliError> {
        let mut spec = RunSpec::default();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value, got `{line}`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1)));
            }
            if seen.contains(&key) {
                return Err(CliError::Config(format!("line {}: duplicate key `{key}`", n + 1)));
            }
            seen.push(key);
            spec.set(key, value).map_err(|e| CliError::Config(format!("line {}: {key}: {e}", n + 1)))?;
        }
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(v: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            v.parse().map_err(|e: T::Err| format!("`{v}`: {e}"))
        }
        match key {
            "task" => self.task = value.parse()?,
            "mode" => self.mode = value.parse()?,
            "beta1" => self.beta1 = num(value)?,
            "beta2" => self.beta2 = num(value)?,
            "alpha_vw" => self.alpha_vw = num(value)?,
            "alpha_eta" => self.alpha_eta = num(value)?,
            "iterations" => self.iterations = num(value)?,
            "seed" => self.seed = num(value)?,
            "out" => self.out = PathBuf::from(value),
            "noise" => self.noise = num(value)?,
            "unit" => self.unit = value.parse()?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    fn training_config(&self, task: &Task) -> TrainingConfig<f64> {
        TrainingConfig {
            beta1: self.beta1,
            beta2: self.beta2,
            alpha_vw: self.alpha_vw,
            alpha_eta: self.alpha_eta,
            batch_size: 1,
            iterations: self.iterations,
            stride: 500.min(self.iterations),
            seed: self.seed,
            hidden_units: task.hidden_units,
            num_percepts: task.num_percepts,
        }
    }
}

/// A world model together with the network shape used to learn it.
#[derive(Clone, Debug)]
pub struct Task {
    pub model: WorldModel<f64>,
    pub hidden_units: usize,
    pub num_percepts: usize,
}

pub fn resolve_task(task: &TaskSpec, noise: f64) -> Result<Task, CliError> {
    let (model, hidden_units, num_percepts) = match task {
        TaskSpec::PredatorPrey => {
            (predator_prey_task(), predator_prey::HIDDEN_UNITS, predator_prey::NUM_PERCEPTS)
        }
        TaskSpec::Mug => (mug_task(0.0)?, mug::HIDDEN_UNITS, mug::NUM_PERCEPTS),
        TaskSpec::File(path) => {
            let model: WorldModel<f64> = load_utility_file(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
                .into_world_model()?;
            let n = model.num_worlds();
            (model, FILE_TASK_HIDDEN_UNITS, n)
        }
    };
    Ok(Task { model: model.with_noise(noise)?, hidden_units, num_percepts })
}

/// Final numbers of one run. Values are `None` when the mode did not compute them.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub trained: Option<Objective<f64>>,
    pub analytic: Option<Objective<f64>>,
    pub analytic_converged: Option<bool>,
    pub restarts_agree: Option<bool>,
    /// Best grid cell as `(alpha_vw, alpha_eta, J)`.
    pub best_cell: Option<(f64, f64, f64)>,
}

impl RunReport {
    /// `(J_trained - J_analytic) / |J_analytic|` when both are present.
    pub fn relative_gap(&self) -> Option<f64> {
        match (&self.trained, &self.analytic) {
            (Some(t), Some(a)) => Some((t.value - a.value) / a.value.abs()),
            _ => None,
        }
    }

    /// The trained objective when there is one, else the analytic one.
    pub fn headline(&self) -> Option<&Objective<f64>> {
        self.trained.as_ref().or(self.analytic.as_ref())
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io_error(&path, e))
}

fn objective_lines(out: &mut String, prefix: &str, o: &Objective<f64>, unit: InfoUnit) {
    writeln!(out, "{prefix}J={}", o.value).unwrap();
    writeln!(out, "{prefix}EU={}", o.expected_utility).unwrap();
    writeln!(out, "{prefix}I_omega_x={}", o.info_world_percept_in(unit)).unwrap();
    writeln!(out, "{prefix}I_x_a={}", o.info_percept_action_in(unit)).unwrap();
}

fn summary_text(spec: &RunSpec, report: &RunReport, seconds: f64) -> String {
    let mut s = String::new();
    writeln!(s, "task={}", spec.task).unwrap();
    writeln!(s, "mode={}", spec.mode).unwrap();
    writeln!(s, "unit={}", spec.unit).unwrap();
    if let Some(o) = &report.trained {
        objective_lines(&mut s, "", o, spec.unit);
    }
    if let Some(o) = &report.analytic {
        objective_lines(&mut s, "analytic_", o, spec.unit);
    }
    if let Some(c) = report.analytic_converged {
        writeln!(s, "analytic_converged={c}").unwrap();
    }
    if let Some(a) = report.restarts_agree {
        writeln!(s, "analytic_restarts_agree={a}").unwrap();
    }
    if let (Some(t), Some(a)) = (&report.trained, &report.analytic) {
        writeln!(s, "delta_J={}", t.value - a.value).unwrap();
    }
    if let Some(g) = report.relative_gap() {
        writeln!(s, "relative_gap={g}").unwrap();
    }
    if let Some((v, e, j)) = report.best_cell {
        writeln!(s, "best_alpha_vw={v}").unwrap();
        writeln!(s, "best_alpha_eta={e}").unwrap();
        writeln!(s, "best_J={j}").unwrap();
    }
    writeln!(s, "wall_clock_s={seconds:.3}").unwrap();
    s
}

fn analytic_baseline(spec: &RunSpec, task: &Task, dir: &Path) -> Result<RestartReport<f64>, CliError> {
    let cfg = SolverConfig::default().with_seed(spec.seed);
    let rep = solve_serial_restarts(&task.model, spec.beta1, spec.beta2, task.num_percepts, &cfg, ANALYTIC_RESTARTS)?;
    write(dir, "sweep_trace.csv", &sweep_trace_csv(&rep.best.trace, spec.unit))?;
    write(dir, "behavior_analytic.csv", &behavior_csv(&task.model, &rep.best.behavior()))?;
    Ok(rep)
}

fn check_converged(sol: &TabularSolution<f64>) -> Result<(), CliError> {
    if sol.converged {
        Ok(())
    } else {
        Err(CliError::NonConvergence(format!(
            "largest table change {:e} after {} sweeps",
            sol.max_change, sol.iterations
        )))
    }
}

/// Executes one run and writes its artifacts into `spec.out`. A run whose
/// analytic baseline does not converge still writes every artifact before
/// returning [`CliError::NonConvergence`].
pub fn run(spec: &RunSpec) -> Result<RunReport, CliError> {
    let start = Instant::now();
    spec.validate()?;
    let task = resolve_task(&spec.task, spec.noise)?;
    let dir = spec.out.as_path();
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    write(dir, "config.txt", &spec.to_config())?;

    let mut report = RunReport::default();
    let mut baseline = None;
    if matches!(spec.mode, Mode::Analytic | Mode::Compare) {
        let rep = analytic_baseline(spec, &task, dir)?;
        report.analytic = Some(rep.best.objective);
        report.analytic_converged = Some(rep.best.converged);
        report.restarts_agree = Some(rep.agree);
        baseline = Some(rep.best);
    }
    if matches!(spec.mode, Mode::Gradient | Mode::Compare) {
        let trace = train(&task.model, &spec.training_config(&task))?;
        write(dir, "trace.csv", &trace_csv(&trace.snapshots))?;
        let sys = materialize(&task.model, &trace.net, &trace.channel, spec.beta1, spec.beta2)?;
        write(dir, "behavior.csv", &behavior_csv(&task.model, &sys.behavior()))?;
        write(dir, "parameters.txt", &write_parameters(&trace.net, &trace.channel))?;
        report.trained = Some(trace.final_snapshot().objective);
    }
    if spec.mode == Mode::Grid {
        let cfg = TrainingConfig { stride: spec.iterations, ..spec.training_config(&task) };
        let grid = grid_search(
            &task.model,
            &cfg,
            &log_grid(spec.alpha_vw, GRID_FACTOR, GRID_SIZE),
            &log_grid(spec.alpha_eta, GRID_FACTOR, GRID_SIZE),
        )?;
        write(dir, "grid.csv", &grid_csv(&grid))?;
        let best = grid.ranked.first().ok_or_else(|| CliError::Numeric("every grid cell failed".into()))?;
        let j = best.outcome.as_ref().map(|o| o.value).expect("ranked cells are ok");
        report.best_cell = Some((best.alpha_vw, best.alpha_eta, j));
    }

    write(dir, "summary.txt", &summary_text(spec, &report, start.elapsed().as_secs_f64()))?;
    if let Some(sol) = &baseline {
        check_converged(sol)?;
    }
    Ok(report)
}

/// One configuration of the batch reproduction.
#[derive(Clone, Debug, PartialEq)]
pub struct Regime {
    pub name: &'static str,
    pub task: TaskSpec,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha_vw: f64,
    pub alpha_eta: f64,
}

/// The predator-prey comparison followed by the three mug capacity regimes
/// (high, low action capacity, low capacity on both channels).
pub fn reference_regimes() -> Vec<Regime> {
    let r = |name, task, beta1, beta2, alpha_vw, alpha_eta| Regime { name, task, beta1, beta2, alpha_vw, alpha_eta };
    vec![
        r("predator_prey", TaskSpec::PredatorPrey, 8.0, 10.0, 0.006, 0.014),
        r("mug_high", TaskSpec::Mug, 2.0, 3.0, 0.035, 0.7),
        r("mug_low_action", TaskSpec::Mug, 2.0, 0.5, 0.001, 0.34),
        r("mug_low_both", TaskSpec::Mug, 0.5, 0.5, 0.004, 0.028),
    ]
}

#[derive(Debug)]
pub struct BatchReport {
    pub runs: Vec<(Regime, Result<RunReport, CliError>)>,
}

impl BatchReport {
    /// Whether final `I(W;X)` and `I(X;A)` are each non-increasing across the
    /// mug regimes in order. `None` if any mug run failed.
    pub fn mug_information_ordering(&self) -> Option<bool> {
        let infos: Option<Vec<(f64, f64)>> = self
            .runs
            .iter()
            .filter(|(r, _)| r.task == TaskSpec::Mug)
            .map(|(_, res)| {
                let o = res.as_ref().ok()?.headline()?;
                Some((o.info_world_percept, o.info_percept_action))
            })
            .collect();
        let infos = infos?;
        Some(infos.windows(2).all(|w| w[0].0 >= w[1].0 && w[0].1 >= w[1].1))
    }

    /// The most severe failure's exit code, or 0.
    pub fn exit_code(&self) -> i32 {
        self.runs.iter().filter_map(|(_, r)| r.as_ref().err().map(CliError::exit_code)).max().unwrap_or(EXIT_OK)
    }
}

fn report_csv(batch: &BatchReport, unit: InfoUnit) -> String {
    let mut s = String::from("run,beta1,beta2,alpha_vw,alpha_eta,status,J,J_analytic,relative_gap,I_omega_x,I_x_a\n");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (r, res) in &batch.runs {
        let (status, rep) = match res {
            Ok(rep) => ("ok".to_string(), rep.clone()),
            Err(e) => (format!("exit {}", e.exit_code()), RunReport::default()),
        };
        let head = rep.headline();
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.name,
            r.beta1,
            r.beta2,
            r.alpha_vw,
            r.alpha_eta,
            status,
            opt(rep.trained.map(|o| o.value)),
            opt(rep.analytic.map(|o| o.value)),
            opt(rep.relative_gap()),
            opt(head.map(|o| o.info_world_percept_in(unit))),
            opt(head.map(|o| o.info_percept_action_in(unit))),
        )
        .unwrap();
    }
    s
}

/// Runs every reference regime in compare mode, each into `base.out/<name>`,
/// using the iteration budget, seed, noise and unit of `base`. Writes
/// `report.csv` into `base.out`.
pub fn reproduce(base: &RunSpec) -> Result<BatchReport, CliError> {
    let dir = base.out.as_path();
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let runs: Vec<(Regime, Result<RunReport, CliError>)> = reference_regimes()
        .into_par_iter()
        .map(|r| {
            let spec = RunSpec {
                task: r.task.clone(),
                mode: Mode::Compare,
                beta1: r.beta1,
                beta2: r.beta2,
                alpha_vw: r.alpha_vw,
                alpha_eta: r.alpha_eta,
                out: dir.join(r.name),
                ..base.clone()
            };
            let res = run(&spec);
            (r, res)
        })
        .collect();
    let batch = BatchReport { runs };
    write(dir, "report.csv", &report_csv(&batch, base.unit))?;
    Ok(batch)
}

#[derive(Debug, Parser)]
#[command(name = "bounded-percept", version, about = "Serial perception-action channels under information constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one task in analytic, gradient, compare or grid mode.
    Run(SpecArgs),
    /// Run the predator-prey comparison and the three mug regimes.
    Reproduce(SpecArgs),
    /// Rank a 5x5 log grid of learning rates centred on --alpha-vw/--alpha-eta.
    Grid(SpecArgs),
}

#[derive(Debug, Args)]
struct SpecArgs {
    /// Start from a key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// predator_prey, mug or file:<path>
    #[arg(long)]
    task: Option<TaskSpec>,
    /// analytic, gradient, compare or grid
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long, allow_negative_numbers = true)]
    beta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta2: Option<f64>,
    #[arg(long = "alpha-vw", allow_negative_numbers = true)]
    alpha_vw: Option<f64>,
    #[arg(long = "alpha-eta", allow_negative_numbers = true)]
    alpha_eta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    iters: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pixel flip probability for bitmap encoders.
    #[arg(long, allow_negative_numbers = true)]
    noise: Option<f64>,
    /// bits or nats
    #[arg(long)]
    unit: Option<InfoUnit>,
}

impl SpecArgs {
    fn into_spec(self) -> Result<RunSpec, CliError> {
        let mut spec = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
                RunSpec::from_config(&text)?
            }
            None => RunSpec::default(),
        };
        if let Some(v) = self.task {
            spec.task = v;
        }
        if let Some(v) = self.mode {
            spec.mode = v;
        }
        if let Some(v) = self.beta1 {
            spec.beta1 = v;
        }
        if let Some(v) = self.beta2 {
            spec.beta2 = v;
        }
        if let Some(v) = self.alpha_vw {
            spec.alpha_vw = v;
        }
        if let Some(v) = self.alpha_eta {
            spec.alpha_eta = v;
        }
        if let Some(v) = self.iters {
            spec.iterations = v;
        }
        if let Some(v) = self.seed {
            spec.seed = v;
        }
        if let Some(v) = self.out {
            spec.out = v;
        }
        if let Some(v) = self.noise {
            spec.noise = v;
        }
        if let Some(v) = self.unit {
            spec.unit = v;
        }
        Ok(spec)
    }
}

fn print_report(report: &RunReport, spec: &RunSpec) {
    let unit = spec.unit;
    let line = |label: &str, o: &Objective<f64>| {
        println!(
            "{label:<9} J={:.6} EU={:.6} I(W;X)={:.4} {unit} I(X;A)={:.4} {unit}",
            o.value,
            o.expected_utility,
            o.info_world_percept_in(unit),
            o.info_percept_action_in(unit)
        );
    };
    if let Some(o) = &report.analytic {
        line("analytic", o);
    }
    if let Some(o) = &report.trained {
        line("trained", o);
    }
    if let Some(g) = report.relative_gap() {
        println!("relative gap {g:+.4}");
    }
    if let Some((v, e, j)) = report.best_cell {
        println!("best cell alpha_vw={v} alpha_eta={e} J={j:.6}");
    }
    println!("artifacts in {}", spec.out.display());
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run(args) => {
            let spec = args.into_spec()?;
            let report = run(&spec)?;
            print_report(&report, &spec);
            Ok(EXIT_OK)
        }
        Command::Grid(args) => {
            let spec = RunSpec { mode: Mode::Grid, ..args.into_spec()? };
            let report = run(&spec)?;
            print_report(&report, &spec);
            Ok(EXIT_OK)
        }
        Command::Reproduce(args) => {
            let base = args.into_spec()?;
            base.validate()?;
            let batch = reproduce(&base)?;
            for (r, res) in &batch.runs {
                match res {
                    Ok(rep) => {
                        let j = rep.headline().map(|o| o.value).unwrap_or(f64::NAN);
                        let gap = rep.relative_gap().map(|g| format!("{g:+.4}")).unwrap_or_default();
                        println!("{:<15} ok    J={j:.6} gap={gap}", r.name);
                    }
                    Err(e) => println!("{:<15} exit {} {e}", r.name, e.exit_code()),
                }
            }
            match batch.mug_information_ordering() {
                Some(ok) => println!("mug information ordering high >= low_action >= low_both: {ok}"),
                None => println!("mug information ordering: unavailable"),
            }
            println!("report in {}", base.out.join("report.csv").display());
            Ok(batch.exit_code())
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
