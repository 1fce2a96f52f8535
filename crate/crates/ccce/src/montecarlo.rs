//! Seeded rollout experiments: recommendation sampling, noisy agent
//! responses, and the two headline studies — a confidence sweep comparing
//! coordinators and an information-acquisition comparison.
//!
//! Randomness discipline: every run derives all randomness from one master
//! seed. Trial `t` uses stream `t + 1` of a counter-based generator
//! seeded with the master seed (stream 0 is reserved for scenario-level
//! draws outside these experiments), so trials are independent,
//! reproducible, and insensitive to how many draws earlier trials consume.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis::{self, AcquisitionStrategy, AnalysisError};
use crate::baselines;
use crate::game::{DeviationId, Game, GameError, JointDistribution, SystemWeights};
use crate::gaussian::{self, Confidence};
use crate::solver::{self, CcceError, ConstraintForm, UncertaintyModel};
use crate::stats;
use crate::vertiport::{self, VertiportError, VertiportScenario};

#[derive(Debug, Error)]
pub enum MonteCarloError {
    #[error("invalid trial configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Vertiport(#[from] VertiportError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Ccce(#[from] CcceError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Parameters shared by the experiments.
#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub trials: usize,
    /// Response rollouts averaged per solved instance and method.
    pub samples_per_trial: usize,
    /// Confidence levels evaluated, strictly increasing inside (0, 1). The
    /// first entry doubles as the normalization base of the sweep and as
    /// the confidence level of the acquisition study.
    pub alpha_grid: Vec<f64>,
    pub seed: u64,
    pub form: ConstraintForm,
    /// Constraints de-noised per acquisition trial.
    pub k_acquire: usize,
}

impl TrialConfig {
    /// The standard experiment shape: 50 trials, one rollout each, the
    /// six-point confidence grid from 0.75 to 0.99, five constraints
    /// resolved per acquisition trial.
    pub fn standard(seed: u64) -> Self {
        TrialConfig {
            trials: 50,
            samples_per_trial: 1,
            alpha_grid: vec![0.75, 0.80, 0.85, 0.90, 0.95, 0.99],
            seed,
            form: ConstraintForm::ConstantMargin,
            k_acquire: 5,
        }
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.trials == 0 {
            return Err(MonteCarloError::InvalidConfig("trials must be >= 1".into()));
        }
        if self.samples_per_trial == 0 {
            return Err(MonteCarloError::InvalidConfig(
                "samples_per_trial must be >= 1".into(),
            ));
        }
        if self.k_acquire == 0 {
            return Err(MonteCarloError::InvalidConfig(
                "k_acquire must be >= 1".into(),
            ));
        }
        if self.alpha_grid.is_empty()
            || self.alpha_grid.windows(2).any(|w| w[0] >= w[1])
            || self
                .alpha_grid
                .iter()
                .any(|&a| !(a > 0.0 && a < 1.0))
        {
            return Err(MonteCarloError::InvalidConfig(
                "alpha_grid must be nonempty, strictly increasing, and inside (0, 1)".into(),
            ));
        }
        Ok(())
    }

    fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }
}

/// Draw from the open interval (0, 1).
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.gen(); // [0, 1)
        if u > 0.0 {
            return u;
        }
    }
}

/// One Gaussian noise realization per agent.
fn draw_noise<R: Rng + ?Sized>(sigmas: &[f64], rng: &mut R) -> Vec<f64> {
    sigmas
        .iter()
        .map(|s| {
            let q = gaussian::std_normal_quantile(open_unit(rng))
                .expect("draw is strictly inside (0, 1)");
            s * q
        })
        .collect()
}

/// Inverse-CDF draw of a joint profile index from `z` over the
/// lexicographic profile order.
pub fn sample_recommendation<R: Rng + ?Sized>(z: &JointDistribution, rng: &mut R) -> usize {
    let u = open_unit(rng);
    let mut cumulative = 0.0;
    for (p, &prob) in z.probs().iter().enumerate() {
        cumulative += prob;
        if u < cumulative {
            return p;
        }
    }
    // Cumulative roundoff can leave u just above the final sum.
    z.len() - 1
}

/// Simultaneous best-deviation response: each agent sees its conditional
/// deviation margins under `z` at its recommended action, perturbed by its
/// own noise realization, and deviates to the best deviation when that best
/// perturbed margin is strictly positive (ties toward the smaller action).
/// Recommendations with no support under `z` give the agent nothing to
/// evaluate, so it follows. Returns the realized joint action profile.
pub fn agent_response(
    game: &Game,
    z: &JointDistribution,
    recommended: &[usize],
    noise: &[f64],
) -> Result<Vec<usize>, GameError> {
    let mut realized = recommended.to_vec();
    for agent in 0..game.num_agents() {
        let rec = recommended[agent];
        let mut best: Option<(f64, usize)> = None;
        for dev in 0..game.action_count(agent) {
            if dev == rec {
                continue;
            }
            let c = DeviationId::new(agent, rec, dev)?;
            let Some(margin) = game.nominal_margin(z, &c)? else {
                continue;
            };
            let better = match best {
                None => true,
                Some((m, _)) => margin > m,
            };
            if better {
                best = Some((margin, dev));
            }
        }
        if let Some((margin, dev)) = best {
            if margin + noise[agent] > 0.0 {
                realized[agent] = dev;
            }
        }
    }
    Ok(realized)
}

/// Which coordinator produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoordMethod {
    /// A pure Nash equilibrium selected uniformly at random.
    NashBaseline,
    /// The uncertainty-blind optimal correlated equilibrium.
    NaiveCe,
    /// The chance-constrained plan.
    Ccce,
}

impl CoordMethod {
    pub const ALL: [CoordMethod; 3] = [
        CoordMethod::NashBaseline,
        CoordMethod::NaiveCe,
        CoordMethod::Ccce,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CoordMethod::NashBaseline => "ne",
            CoordMethod::NaiveCe => "naive_ce",
            CoordMethod::Ccce => "ccce",
        }
    }
}

/// One (trial, confidence, method) cell of the sweep. Cost fields are
/// `None` when the instance was infeasible (or the equilibrium baseline
/// unavailable); `normalized` is additionally `None` when the trial's
/// base-confidence cell it is normalized by was itself unavailable.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub trial: usize,
    pub alpha: f64,
    pub method: CoordMethod,
    pub feasible: bool,
    /// Expected weighted system cost at the plan.
    pub expected: Option<f64>,
    /// Mean realized weighted system cost over the rollouts.
    pub realized: Option<f64>,
    /// Mean realized unweighted total cost over the rollouts.
    pub realized_unweighted: Option<f64>,
    /// Realized cost divided by this trial and method's realized cost at
    /// the first grid confidence.
    pub normalized: Option<f64>,
}

/// Per (confidence, method) distribution statistics across trials.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub alpha: f64,
    pub method: CoordMethod,
    /// Trials contributing realized costs at this cell.
    pub count: usize,
    pub mean_realized: f64,
    pub median_realized: f64,
    pub q1_realized: f64,
    pub q3_realized: f64,
    /// Over trials with a defined normalized score (NaN when none).
    pub mean_normalized: f64,
    pub median_normalized: f64,
}

/// A solved-instance gap: an infeasible chance-constrained instance or a
/// game without the pure-equilibrium baseline. `alpha` is `None` when the
/// gap applies to every confidence level of the trial.
#[derive(Debug, Clone)]
pub struct SkippedInstance {
    pub trial: usize,
    pub alpha: Option<f64>,
    pub method: CoordMethod,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub summaries: Vec<SweepSummary>,
    pub skipped: Vec<SkippedInstance>,
}

/// The confidence sweep: per trial, draw noise levels, build weights, and
/// compare the three coordinators at every grid confidence under fresh
/// noise realizations.
pub fn run_alpha_sweep(
    scenario: &VertiportScenario,
    config: &TrialConfig,
) -> Result<SweepResult, MonteCarloError> {
    config.validate()?;
    scenario.validate()?;
    let game = vertiport::build_game(scenario)?;
    let nash_set = baselines::pure_nash_equilibria(&game);
    let unit_weights = SystemWeights::new(vec![1.0; scenario.n])?;
    let confidences: Vec<Confidence> = config
        .alpha_grid
        .iter()
        .map(|&a| Confidence::new(a).expect("validated grid"))
        .collect();

    let mut rows = Vec::new();
    let mut skipped = Vec::new();

    for trial in 0..config.trials {
        let mut rng = config.trial_rng(trial);
        let sigmas = vertiport::sample_sigmas(scenario, &mut rng);
        let weights = vertiport::weights_from_sigmas(&sigmas)?;

        let ne_plan = match baselines::select_ne(&nash_set, &mut rng) {
            Ok(profile) => Some(JointDistribution::point_mass(game.num_profiles(), profile)),
            Err(_) => {
                skipped.push(SkippedInstance {
                    trial,
                    alpha: None,
                    method: CoordMethod::NashBaseline,
                    reason: "no pure Nash equilibrium".into(),
                });
                None
            }
        };
        let naive_plan = baselines::naive_ce(&game, &weights)?.z;

        // Realized cost at the first grid confidence, per method, for the
        // per-trial normalization.
        let mut base_realized = [None; 3];

        for (gi, &conf) in confidences.iter().enumerate() {
            let model =
                UncertaintyModel::new(sigmas.clone(), conf, config.form).expect("valid sigmas");
            let ccce_plan = match solver::solve_ccce(&game, &model, &weights) {
                Ok(sol) => Some(sol.z),
                Err(CcceError::Infeasible { .. }) => {
                    skipped.push(SkippedInstance {
                        trial,
                        alpha: Some(conf.value()),
                        method: CoordMethod::Ccce,
                        reason: format!(
                            "infeasible at confidence {} under the {} form",
                            conf.value(),
                            config.form.label()
                        ),
                    });
                    None
                }
                Err(e) => return Err(e.into()),
            };

            for (mi, method) in CoordMethod::ALL.iter().enumerate() {
                let plan = match method {
                    CoordMethod::NashBaseline => ne_plan.as_ref(),
                    CoordMethod::NaiveCe => Some(&naive_plan),
                    CoordMethod::Ccce => ccce_plan.as_ref(),
                };
                let Some(z) = plan else {
                    rows.push(SweepRow {
                        trial,
                        alpha: conf.value(),
                        method: *method,
                        feasible: false,
                        expected: None,
                        realized: None,
                        realized_unweighted: None,
                        normalized: None,
                    });
                    continue;
                };

                let expected = game.expected_system_cost(z, &weights)?;
                let mut realized_sum = 0.0;
                let mut unweighted_sum = 0.0;
                for _ in 0..config.samples_per_trial {
                    let rec = sample_recommendation(z, &mut rng);
                    let noise = draw_noise(&sigmas, &mut rng);
                    let response =
                        agent_response(&game, z, &game.profile_actions(rec), &noise)?;
                    let profile = game.profile_index(&response)?;
                    realized_sum += game.weighted_profile_cost(profile, &weights);
                    unweighted_sum += game.weighted_profile_cost(profile, &unit_weights);
                }
                let realized = realized_sum / config.samples_per_trial as f64;
                let realized_unweighted = unweighted_sum / config.samples_per_trial as f64;
                if gi == 0 {
                    base_realized[mi] = Some(realized);
                }
                let normalized = base_realized[mi].map(|base| {
                    if base.abs() <= 1e-12 {
                        1.0
                    } else {
                        realized / base
                    }
                });

                rows.push(SweepRow {
                    trial,
                    alpha: conf.value(),
                    method: *method,
                    feasible: true,
                    expected: Some(expected),
                    realized: Some(realized),
                    realized_unweighted: Some(realized_unweighted),
                    normalized,
                });
            }
        }
    }

    let summaries = summarize_sweep(&rows, &config.alpha_grid);
    Ok(SweepResult {
        rows,
        summaries,
        skipped,
    })
}

fn summarize_sweep(rows: &[SweepRow], alpha_grid: &[f64]) -> Vec<SweepSummary> {
    let mut summaries = Vec::new();
    for &alpha in alpha_grid {
        for method in CoordMethod::ALL {
            let cell: Vec<&SweepRow> = rows
                .iter()
                .filter(|r| r.alpha == alpha && r.method == method && r.feasible)
                .collect();
            if cell.is_empty() {
                continue;
            }
            let realized: Vec<f64> = cell.iter().filter_map(|r| r.realized).collect();
            let normalized: Vec<f64> = cell.iter().filter_map(|r| r.normalized).collect();
            summaries.push(SweepSummary {
                alpha,
                method,
                count: realized.len(),
                mean_realized: stats::mean(&realized),
                median_realized: stats::median(&realized),
                q1_realized: stats::quantile(&realized, 0.25),
                q3_realized: stats::quantile(&realized, 0.75),
                mean_normalized: stats::mean(&normalized),
                median_normalized: stats::median(&normalized),
            });
        }
    }
    summaries
}

/// One (trial, strategy) cell of the acquisition study.
#[derive(Debug, Clone)]
pub struct AcquisitionRow {
    pub trial: usize,
    pub strategy: AcquisitionStrategy,
    /// Expected system cost of the untouched chance-constrained plan.
    pub baseline_cost: f64,
    /// Expected system cost after de-noising the selected constraints.
    pub resolved_cost: f64,
    /// `resolved / baseline` (1 when the baseline cost is zero).
    pub normalized: f64,
    pub selected: Vec<DeviationId>,
}

#[derive(Debug, Clone)]
pub struct AcquisitionSummary {
    pub strategy: AcquisitionStrategy,
    pub count: usize,
    pub mean_normalized: f64,
    pub median_normalized: f64,
    /// Standard error of the normalized mean across trials.
    pub sem_normalized: f64,
}

#[derive(Debug, Clone)]
pub struct AcquisitionResult {
    /// Confidence level the study ran at (the first grid entry).
    pub alpha: f64,
    pub rows: Vec<AcquisitionRow>,
    pub summaries: Vec<AcquisitionSummary>,
    pub skipped: Vec<SkippedInstance>,
}

/// The information-acquisition study at the first grid confidence: per
/// trial, solve the chance-constrained baseline, let each strategy pick
/// `k_acquire` constraints, zero those constraints' uncertainty margins,
/// re-solve, and compare expected costs normalized by the baseline.
pub fn run_info_acquisition(
    scenario: &VertiportScenario,
    config: &TrialConfig,
) -> Result<AcquisitionResult, MonteCarloError> {
    config.validate()?;
    scenario.validate()?;
    let game = vertiport::build_game(scenario)?;
    let conf = Confidence::new(config.alpha_grid[0]).expect("validated grid");

    let mut rows = Vec::new();
    let mut skipped = Vec::new();

    for trial in 0..config.trials {
        let mut rng = config.trial_rng(trial);
        let sigmas = vertiport::sample_sigmas(scenario, &mut rng);
        let weights = vertiport::weights_from_sigmas(&sigmas)?;
        let model = UncertaintyModel::new(sigmas, conf, config.form).expect("valid sigmas");

        let baseline = match solver::solve_ccce(&game, &model, &weights) {
            Ok(sol) => sol,
            Err(CcceError::Infeasible { .. }) => {
                skipped.push(SkippedInstance {
                    trial,
                    alpha: Some(conf.value()),
                    method: CoordMethod::Ccce,
                    reason: format!(
                        "infeasible at confidence {} under the {} form",
                        conf.value(),
                        config.form.label()
                    ),
                });
                continue;
            }
            Err(e) => return Err(e.into()),
        };

        for strategy in AcquisitionStrategy::ALL {
            let selected = analysis::rank_for_acquisition(
                &baseline,
                &model,
                config.k_acquire,
                strategy,
                &mut rng,
            )?;
            let resolved = analysis::resolve_without_constraint_uncertainty(
                &game, &model, &weights, &selected,
            )?;
            let normalized = if baseline.system_cost.abs() <= 1e-12 {
                1.0
            } else {
                resolved.system_cost / baseline.system_cost
            };
            rows.push(AcquisitionRow {
                trial,
                strategy,
                baseline_cost: baseline.system_cost,
                resolved_cost: resolved.system_cost,
                normalized,
                selected,
            });
        }
    }

    let mut summaries = Vec::new();
    for strategy in AcquisitionStrategy::ALL {
        let scores: Vec<f64> = rows
            .iter()
            .filter(|r| r.strategy == strategy)
            .map(|r| r.normalized)
            .collect();
        if scores.is_empty() {
            continue;
        }
        summaries.push(AcquisitionSummary {
            strategy,
            count: scores.len(),
            mean_normalized: stats::mean(&scores),
            median_normalized: stats::median(&scores),
            sem_normalized: stats::standard_error(&scores),
        });
    }

    Ok(AcquisitionResult {
        alpha: conf.value(),
        rows,
        summaries,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;

    fn two_agents_one_pad(gamma: f64) -> VertiportScenario {
        VertiportScenario::new(2, 1, gamma, 0).unwrap()
    }

    #[test]
    fn point_mass_always_samples_its_profile() {
        let z = JointDistribution::point_mass(6, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            assert_eq!(sample_recommendation(&z, &mut rng), 4);
        }
    }

    #[test]
    fn uniform_sampling_frequencies_match() {
        let z = JointDistribution::uniform(4);
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let draws = 100_000;
        let mut counts = [0u32; 4];
        for _ in 0..draws {
            counts[sample_recommendation(&z, &mut rng)] += 1;
        }
        // Three binomial standard errors around 1/4.
        let se = (0.25 * 0.75 / draws as f64).sqrt();
        for &c in &counts {
            let f = c as f64 / draws as f64;
            assert!((f - 0.25).abs() <= 3.0 * se, "frequency {f}");
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let z = JointDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        let sa: Vec<usize> = (0..200).map(|_| sample_recommendation(&z, &mut a)).collect();
        let sb: Vec<usize> = (0..200).map(|_| sample_recommendation(&z, &mut b)).collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn deeply_negative_noise_means_everyone_follows() {
        let game = vertiport::build_game(&two_agents_one_pad(1.5)).unwrap();
        let z = JointDistribution::uniform(game.num_profiles());
        let rec = vec![1, 0];
        let out = agent_response(&game, &z, &rec, &[-100.0, -100.0]).unwrap();
        assert_eq!(out, rec);
    }

    #[test]
    fn forced_deviation_targets_the_best_margin_with_low_tie() {
        // Single agent, three actions costing 0, 1, 1: from the cost-1
        // actions, both alternatives tie at +... the cheaper action wins;
        // from action 1 the margins to 0 and 2 are +1 and 0, so a large
        // positive noise pushes the agent to action 0.
        let game = Game::new(vec![3], vec![vec![0.0, 1.0, 1.0]]).unwrap();
        let z = JointDistribution::uniform(3);
        let out = agent_response(&game, &z, &[1], &[2.0]).unwrap();
        assert_eq!(out, vec![0]);

        // From action 0 both deviations have margin -1; noise +2 makes the
        // best perturbed margin +1 > 0, and the tie breaks to action 1.
        let out = agent_response(&game, &z, &[0], &[2.0]).unwrap();
        assert_eq!(out, vec![1]);
    }

    #[test]
    fn unsupported_recommendation_is_followed() {
        let game = Game::new(vec![3], vec![vec![0.0, 1.0, 1.0]]).unwrap();
        let z = JointDistribution::point_mass(3, 0);
        // Action 2 has no support under z: no conditionals to evaluate.
        let out = agent_response(&game, &z, &[2], &[50.0]).unwrap();
        assert_eq!(out, vec![2]);
    }

    #[test]
    fn deviation_frequency_at_an_active_row_is_one_minus_alpha() {
        // Temptation game (see solver tests), conditional-scaled form:
        // the binding row's conditional margin is exactly -q(alpha)*sigma,
        // so a deviation is profitable exactly when eta > q*sigma, which
        // happens with probability 1 - alpha.
        let game = Game::new(
            vec![2, 2],
            vec![vec![0.0, 5.0, 0.0, 5.0], vec![1.0, 0.0, 3.0, 10.0]],
        )
        .unwrap();
        let sigma = 0.3;
        let alpha = 0.9;
        let model = UncertaintyModel::new(
            vec![0.0, sigma],
            Confidence::new(alpha).unwrap(),
            ConstraintForm::ConditionalScaled,
        )
        .unwrap();
        let w = SystemWeights::new(vec![1.0, 1.0]).unwrap();
        let sol = solver::solve_ccce(&game, &model, &w).unwrap();
        let c = DeviationId::new(1, 0, 1).unwrap();
        let margin = game.nominal_margin(&sol.z, &c).unwrap().unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let draws = 100_000;
        let mut profitable = 0u32;
        for _ in 0..draws {
            let noise = draw_noise(model.sigmas(), &mut rng);
            if margin + noise[1] > 0.0 {
                profitable += 1;
            }
        }
        let f = profitable as f64 / draws as f64;
        let p = 1.0 - alpha;
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert!(
            (f - p).abs() <= 3.0 * se,
            "deviation frequency {f} vs {p} (3se = {})",
            3.0 * se
        );
    }

    #[test]
    fn noiseless_sweep_realizes_exactly_the_expected_cost() {
        let scenario = two_agents_one_pad(1.0); // gamma 1: all sigmas 0
        let mut config = TrialConfig::standard(7);
        config.trials = 5;
        config.alpha_grid = vec![0.75, 0.9];
        let result = run_alpha_sweep(&scenario, &config).unwrap();
        assert!(result.skipped.is_empty());
        for row in &result.rows {
            assert!(row.feasible);
            let (e, r) = (row.expected.unwrap(), row.realized.unwrap());
            assert!(
                (e - r).abs() < 1e-9,
                "trial {} {} at {}: expected {e}, realized {r}",
                row.trial,
                row.method.label(),
                row.alpha
            );
            assert!((row.normalized.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sweep_rows_are_complete_and_deterministic() {
        let scenario = two_agents_one_pad(1.5);
        let mut config = TrialConfig::standard(42);
        config.trials = 8;
        config.alpha_grid = vec![0.75, 0.9];
        let a = run_alpha_sweep(&scenario, &config).unwrap();
        let b = run_alpha_sweep(&scenario, &config).unwrap();
        assert_eq!(a.rows.len(), 8 * 2 * 3);
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.trial, rb.trial);
            assert_eq!(ra.method, rb.method);
            assert_eq!(ra.expected, rb.expected);
            assert_eq!(ra.realized, rb.realized);
            assert_eq!(ra.normalized, rb.normalized);
        }
        // Summaries exist for every (alpha, method) cell here.
        assert_eq!(a.summaries.len(), 2 * 3);
    }

    #[test]
    fn blind_plans_pay_for_ignoring_noise_on_average() {
        // With noise on and nominal margins binding, deviations can only
        // raise the realized cost above the expected cost.
        let scenario = two_agents_one_pad(1.5);
        let mut config = TrialConfig::standard(3);
        config.trials = 30;
        config.samples_per_trial = 20;
        config.alpha_grid = vec![0.9];
        let result = run_alpha_sweep(&scenario, &config).unwrap();
        let gaps: Vec<f64> = result
            .rows
            .iter()
            .filter(|r| r.method == CoordMethod::NaiveCe && r.feasible)
            .map(|r| r.realized.unwrap() - r.expected.unwrap())
            .collect();
        assert!(!gaps.is_empty());
        assert!(
            stats::mean(&gaps) >= -1e-9,
            "naive plan realized below expected on average: {}",
            stats::mean(&gaps)
        );
    }

    #[test]
    fn noiseless_acquisition_changes_nothing() {
        let scenario = two_agents_one_pad(1.0);
        let mut config = TrialConfig::standard(5);
        config.trials = 4;
        config.k_acquire = 2;
        let result = run_info_acquisition(&scenario, &config).unwrap();
        assert_eq!(result.rows.len(), 4 * 3);
        for row in &result.rows {
            assert!((row.normalized - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn acquiring_every_constraint_equalizes_strategies() {
        let scenario = two_agents_one_pad(1.5);
        let game = vertiport::build_game(&scenario).unwrap();
        let total = game.deviation_ids().len();
        let mut config = TrialConfig::standard(11);
        config.trials = 6;
        config.k_acquire = total;
        let result = run_info_acquisition(&scenario, &config).unwrap();
        for trial in 0..6 {
            let cells: Vec<&AcquisitionRow> =
                result.rows.iter().filter(|r| r.trial == trial).collect();
            if cells.is_empty() {
                continue; // infeasible trial
            }
            assert_eq!(cells.len(), 3);
            for c in &cells {
                assert_eq!(c.selected.len(), total);
                assert!((c.resolved_cost - cells[0].resolved_cost).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn acquisition_is_deterministic_and_summarized() {
        let scenario = two_agents_one_pad(1.5);
        let mut config = TrialConfig::standard(13);
        config.trials = 6;
        config.k_acquire = 2;
        let a = run_info_acquisition(&scenario, &config).unwrap();
        let b = run_info_acquisition(&scenario, &config).unwrap();
        assert_eq!(a.rows.len(), b.rows.len());
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.normalized, rb.normalized);
            assert_eq!(ra.selected, rb.selected);
        }
        assert_eq!(a.summaries.len(), 3);
        for s in &a.summaries {
            assert!(s.mean_normalized <= 1.0 + 1e-9, "de-noising never hurts");
            assert!(s.count > 0);
        }
    }

    #[test]
    fn config_validation_rejects_bad_shapes() {
        let mut c = TrialConfig::standard(0);
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = TrialConfig::standard(0);
        c.alpha_grid = vec![0.9, 0.75];
        assert!(c.validate().is_err());
        let mut c = TrialConfig::standard(0);
        c.alpha_grid = vec![0.5, 1.0];
        assert!(c.validate().is_err());
        let mut c = TrialConfig::standard(0);
        c.samples_per_trial = 0;
        assert!(c.validate().is_err());
    }
}
