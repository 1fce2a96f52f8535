//! Command-line front end: solve a configured scenario, sweep the
//! confidence grid, run the information-acquisition study, or enumerate
//! pure Nash equilibria, writing CSV reports to an output directory.
//!
//! Exit codes: 0 on success, 2 for configuration problems, 3 when the
//! requested instance is infeasible, 1 for anything else.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ccce::analysis::{self, AnalysisError, SensitivityReport};
use ccce::baselines;
use ccce::config::{ConfigError, FormName, RunConfig};
use ccce::gaussian::Confidence;
use ccce::montecarlo::{self, CoordMethod};
use ccce::report;
use ccce::solver::{self, CcceError, UncertaintyModel};
use ccce::vertiport::{self, VertiportScenario};

#[derive(Parser)]
#[command(
    name = "ccce",
    version,
    about = "Noise-robust coordination plans for congestion games"
)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Output directory for reports (overrides the configuration).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the configuration).
    #[arg(long)]
    seed: Option<u64>,
    /// Constraint form (overrides the configuration).
    #[arg(long, value_enum)]
    form: Option<FormArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormArg {
    /// Constant uncertainty buffer on every constraint.
    Constant,
    /// Buffer scaled by the recommendation's probability.
    Conditional,
}

impl FormArg {
    fn to_name(self) -> FormName {
        match self {
            FormArg::Constant => FormName::Constant,
            FormArg::Conditional => FormName::Conditional,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one chance-constrained instance; write the plan, constraint
    /// multipliers, and a sensitivity summary.
    Solve,
    /// Compare coordinators across the confidence grid under noisy
    /// rollouts; write per-trial rows, summaries, the skipped-instance
    /// log, and the effective-cost curve.
    SweepAlpha,
    /// Compare constraint-selection strategies for uncertainty removal.
    Acquire,
    /// Enumerate the pure Nash equilibria of the scenario game.
    Nash,
}

/// Application failure with its process exit code.
enum AppError {
    Config(ConfigError),
    Infeasible(String),
    Other(String),
}

impl AppError {
    fn code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::Infeasible(_) => 3,
            AppError::Other(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            AppError::Config(e) => e.to_string(),
            AppError::Infeasible(m) | AppError::Other(m) => m.clone(),
        }
    }
}

impl From<ConfigError> for AppError {
    fn from(e: ConfigError) -> Self {
        AppError::Config(e)
    }
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Other(format!("i/o error: {e}"))
    }
}

fn from_solver(e: CcceError) -> AppError {
    match e {
        CcceError::Infeasible { alpha } => AppError::Infeasible(format!(
            "no feasible plan at confidence {alpha}; relax the confidence level or the noise"
        )),
        other => AppError::Other(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    let mut config = RunConfig::from_path(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.scenario.seed = seed;
    }
    if let Some(form) = cli.form {
        config.uncertainty.form = form.to_name();
    }
    let out_dir = cli
        .out
        .or_else(|| config.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)?;

    match cli.command {
        Command::Solve => solve(&config, &out_dir),
        Command::SweepAlpha => sweep_alpha(&config, &out_dir),
        Command::Acquire => acquire(&config, &out_dir),
        Command::Nash => nash(&config, &out_dir),
    }
}

/// Noise levels for single-instance commands: the configured values, or a
/// draw from the scenario-level random stream.
fn instance_sigmas(config: &RunConfig, scenario: &VertiportScenario) -> Vec<f64> {
    if let Some(sigmas) = &config.uncertainty.sigmas {
        sigmas.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
        rng.set_stream(0);
        vertiport::sample_sigmas(scenario, &mut rng)
    }
}

fn write_report<F>(dir: &Path, name: &str, write: F) -> Result<(), AppError>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    let path = dir.join(name);
    let mut file = BufWriter::new(File::create(&path)?);
    write(&mut file)?;
    file.flush()?;
    Ok(())
}

fn solve(config: &RunConfig, out_dir: &Path) -> Result<(), AppError> {
    let scenario = config.scenario()?;
    let game = vertiport::build_game(&scenario).map_err(|e| AppError::Other(e.to_string()))?;
    let sigmas = instance_sigmas(config, &scenario);
    let weights =
        vertiport::weights_from_sigmas(&sigmas).map_err(|e| AppError::Other(e.to_string()))?;
    let confidence = Confidence::new(config.single_alpha())
        .map_err(|e| AppError::Config(ConfigError::Invalid(e.to_string())))?;
    let model = UncertaintyModel::new(sigmas, confidence, config.form())
        .map_err(|e| AppError::Config(ConfigError::Invalid(e.to_string())))?;

    let solution = solver::solve_ccce(&game, &model, &weights).map_err(from_solver)?;
    let sensitivity =
        SensitivityReport::new(&solution, &model).map_err(|e| AppError::Other(e.to_string()))?;

    write_report(out_dir, "solution.csv", |w| {
        report::write_solution(w, &game, &solution)
    })?;
    write_report(out_dir, "duals.csv", |w| {
        report::write_duals(w, &solution, &model)
    })?;
    write_report(out_dir, "summary.csv", |w| {
        report::write_summary(w, &scenario, &model, &solution, &sensitivity)
    })?;

    println!(
        "solved: system cost {:.6} at confidence {} ({} form)",
        solution.system_cost,
        confidence.value(),
        model.form().label()
    );
    println!(
        "{} of {} constraints active; degenerate basis: {}",
        solution.num_active(),
        solution.records.len(),
        solution.degenerate
    );
    println!("reports written to {}", out_dir.display());
    Ok(())
}

fn sweep_alpha(config: &RunConfig, out_dir: &Path) -> Result<(), AppError> {
    let scenario = config.scenario()?;
    let trial_config = config.trial_config()?;
    let result = montecarlo::run_alpha_sweep(&scenario, &trial_config)
        .map_err(|e| AppError::Other(e.to_string()))?;

    write_report(out_dir, "sweep.csv", |w| {
        report::write_sweep_rows(w, &result.rows)
    })?;
    write_report(out_dir, "sweep_summary.csv", |w| {
        report::write_sweep_summaries(w, &result.summaries)
    })?;
    write_report(out_dir, "feasibility_log.csv", |w| {
        report::write_skipped(w, &result.skipped)
    })?;

    // Effective-cost curve for a representative instance: the configured
    // noise levels, or the scenario-level draw.
    let game = vertiport::build_game(&scenario).map_err(|e| AppError::Other(e.to_string()))?;
    let sigmas = instance_sigmas(config, &scenario);
    let weights =
        vertiport::weights_from_sigmas(&sigmas).map_err(|e| AppError::Other(e.to_string()))?;
    let confidence = Confidence::new(config.single_alpha())
        .map_err(|e| AppError::Config(ConfigError::Invalid(e.to_string())))?;
    let model = UncertaintyModel::new(sigmas, confidence, config.form())
        .map_err(|e| AppError::Config(ConfigError::Invalid(e.to_string())))?;
    match analysis::optimal_alpha(
        &game,
        &model,
        &weights,
        config.experiment.c_dev,
        &config.alpha_grid(),
    ) {
        Ok((best, curve)) => {
            write_report(out_dir, "effective_cost.csv", |w| {
                report::write_effective_cost(w, &curve)
            })?;
            println!(
                "effective-cost optimum at confidence {} (deviation penalty {})",
                best.value(),
                curve.c_dev
            );
        }
        Err(AnalysisError::AllInfeasible) => {
            println!("effective-cost curve skipped: every grid confidence is infeasible");
        }
        Err(e) => return Err(AppError::Other(e.to_string())),
    }

    let infeasible_alphas: Vec<f64> = result
        .skipped
        .iter()
        .filter(|s| s.method == CoordMethod::Ccce)
        .filter_map(|s| s.alpha)
        .collect();
    match infeasible_alphas
        .iter()
        .copied()
        .fold(None::<f64>, |acc, a| Some(acc.map_or(a, |m| m.min(a))))
    {
        Some(a) => println!("smallest infeasible confidence: {a}"),
        None => println!("all grid confidences feasible in every trial"),
    }
    println!(
        "{} sweep rows over {} trials written to {}",
        result.rows.len(),
        trial_config.trials,
        out_dir.display()
    );
    Ok(())
}

fn acquire(config: &RunConfig, out_dir: &Path) -> Result<(), AppError> {
    let scenario = config.scenario()?;
    let trial_config = config.trial_config()?;
    let result = montecarlo::run_info_acquisition(&scenario, &trial_config)
        .map_err(|e| AppError::Other(e.to_string()))?;

    write_report(out_dir, "acquire.csv", |w| {
        report::write_acquisition_rows(w, &result.rows)
    })?;
    write_report(out_dir, "acquire_summary.csv", |w| {
        report::write_acquisition_summaries(w, &result.summaries)
    })?;
    write_report(out_dir, "feasibility_log.csv", |w| {
        report::write_skipped(w, &result.skipped)
    })?;

    if result.rows.is_empty() {
        return Err(AppError::Infeasible(format!(
            "every trial was infeasible at confidence {}",
            result.alpha
        )));
    }
    for summary in &result.summaries {
        println!(
            "{}: mean normalized cost {:.6} over {} trials",
            summary.strategy.label(),
            summary.mean_normalized,
            summary.count
        );
    }
    println!("reports written to {}", out_dir.display());
    Ok(())
}

fn nash(config: &RunConfig, out_dir: &Path) -> Result<(), AppError> {
    let scenario = config.scenario()?;
    let game = vertiport::build_game(&scenario).map_err(|e| AppError::Other(e.to_string()))?;
    let set = baselines::pure_nash_equilibria(&game);

    write_report(out_dir, "nash.csv", |w| {
        writeln!(w, "profile,actions,total_cost")?;
        for &p in set.profiles() {
            let actions = game
                .profile_actions(p)
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            let total: f64 = (0..game.num_agents()).map(|i| game.cost(i, p)).sum();
            writeln!(w, "{p},{actions},{total:.11e}")?;
        }
        Ok(())
    })?;

    println!(
        "{} pure Nash equilibria of {} profiles written to {}",
        set.len(),
        game.num_profiles(),
        out_dir.join("nash.csv").display()
    );
    Ok(())
}
