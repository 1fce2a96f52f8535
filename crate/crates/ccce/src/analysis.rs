//! Sensitivity analysis on top of an optimal coordination plan.
//!
//! The optimum of the coordination program is a linear program, so its
//! duals price every binding incentive constraint. This module turns those
//! prices into decision-relevant quantities:
//!
//! - how the optimal system cost responds to each agent's noise level
//!   (`q(alpha)` times the agent's aggregated dual),
//! - how it responds to the confidence level itself,
//! - the first-order value of eliminating one constraint's uncertainty
//!   ("information gain"), and a ranking of constraints worth resolving,
//! - the risk-adjusted effective cost `J_sys(alpha) + (1 - alpha) * C_dev`
//!   and a grid search for the confidence level minimizing it.
//!
//! All derivative formulas are exact between active-set changes under the
//! constant-margin constraint form, where the uncertainty enters the
//! program only through right-hand sides; at degenerate optima they are
//! one-sided, and reports carry the solution's degeneracy flag.

use rand::Rng;
use thiserror::Error;

use crate::game::{DeviationId, Game, SystemWeights};
use crate::gaussian::Confidence;
use crate::solver::{
    self, CcceError, CcceSolution, ConstraintRecord, UncertaintyModel,
};

/// Tolerance on the regrouping identity
/// `sum_i Lambda_i sigma_i = sum_c sigma_{i(c)} lambda_c`
/// (the two sides differ only by float summation order).
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("deviation penalty must be finite and nonnegative, got {0}")]
    InvalidDeviationPenalty(f64),
    #[error("confidence grid must be nonempty, strictly increasing, and inside (0, 1)")]
    InvalidGrid,
    #[error("the coordination program is infeasible at every confidence level in the grid")]
    AllInfeasible,
    #[error("cannot select {k} constraints; the game has only {available}")]
    AcquisitionCount { k: usize, available: usize },
    #[error(
        "sensitivity identity violated beyond tolerance: per-agent total {lhs} \
         vs per-constraint total {rhs}"
    )]
    IdentityViolated { lhs: f64, rhs: f64 },
    #[error(transparent)]
    Ccce(#[from] CcceError),
}

/// Every dual-derived sensitivity of one solution, aligned with
/// `solution.records` where per-constraint.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    /// Per agent: `q(alpha) * Lambda_i`, the response of the optimal system
    /// cost to that agent's noise level.
    pub per_agent: Vec<f64>,
    /// Per constraint: `q(alpha) * lambda_c`, the response to that row's
    /// uncertainty displacement.
    pub per_constraint: Vec<f64>,
    /// Per constraint: `sigma_{i(c)} * lambda_c`, the first-order value of
    /// resolving that row's uncertainty.
    pub info_gains: Vec<f64>,
    /// Response of the optimal cost to the confidence level,
    /// `(1 / pdf(q(alpha))) * sum_i Lambda_i sigma_i`.
    pub alpha_sensitivity: f64,
    /// Propagated from the solution: when set, all sensitivities are
    /// one-sided (valid in the direction that keeps the basis optimal).
    pub degenerate: bool,
}

impl SensitivityReport {
    pub fn new(
        solution: &CcceSolution,
        model: &UncertaintyModel,
    ) -> Result<Self, AnalysisError> {
        let q = model.confidence().quantile();
        let per_agent: Vec<f64> = solution.lambda_agent.iter().map(|l| q * l).collect();
        let per_constraint: Vec<f64> = solution.records.iter().map(|r| q * r.dual).collect();
        let info_gains: Vec<f64> = solution
            .records
            .iter()
            .map(|r| model.sigma(r.id.agent) * r.dual)
            .collect();

        // The two ways of totalling sigma-weighted duals must agree.
        let lhs: f64 = solution
            .lambda_agent
            .iter()
            .zip(model.sigmas())
            .map(|(l, s)| l * s)
            .sum();
        let rhs: f64 = info_gains.iter().sum();
        if (lhs - rhs).abs() > IDENTITY_TOL * (1.0 + lhs.abs()) {
            return Err(AnalysisError::IdentityViolated { lhs, rhs });
        }

        let alpha_sensitivity = lhs / model.confidence().density_at_quantile();
        let finite = per_agent
            .iter()
            .chain(&per_constraint)
            .chain(&info_gains)
            .all(|v| v.is_finite())
            && alpha_sensitivity.is_finite();
        debug_assert!(finite, "non-finite sensitivity entry");

        Ok(SensitivityReport {
            per_agent,
            per_constraint,
            info_gains,
            alpha_sensitivity,
            degenerate: solution.degenerate,
        })
    }
}

/// `q(alpha) * Lambda_i`: response of the optimal system cost to agent
/// `i`'s noise level (one-sided at degenerate optima).
pub fn sigma_sensitivity(solution: &CcceSolution, model: &UncertaintyModel, agent: usize) -> f64 {
    model.confidence().quantile() * solution.lambda_agent[agent]
}

/// `q(alpha) * lambda_c`: response of the optimal system cost to the
/// uncertainty displacement of one constraint.
pub fn constraint_sensitivity(
    solution: &CcceSolution,
    model: &UncertaintyModel,
    record: &ConstraintRecord,
) -> f64 {
    let _ = solution;
    model.confidence().quantile() * record.dual
}

/// `sigma_{i(c)} * lambda_c`: the first-order reduction in optimal system
/// cost per unit of `q(alpha)` from resolving this row's uncertainty.
pub fn info_gain(model: &UncertaintyModel, record: &ConstraintRecord) -> f64 {
    model.sigma(record.id.agent) * record.dual
}

/// `(1 / pdf(q(alpha))) * sum_i Lambda_i sigma_i`: response of the optimal
/// system cost to the confidence level.
pub fn alpha_sensitivity(solution: &CcceSolution, model: &UncertaintyModel) -> f64 {
    let weighted: f64 = solution
        .lambda_agent
        .iter()
        .zip(model.sigmas())
        .map(|(l, s)| l * s)
        .sum();
    weighted / model.confidence().density_at_quantile()
}

/// Risk-adjusted system cost `j_sys + (1 - alpha) * c_dev`: with
/// probability `1 - alpha` some agent's realized incentives favor
/// deviating, which the penalty `c_dev` prices.
pub fn effective_cost(j_sys: f64, alpha: Confidence, c_dev: f64) -> Result<f64, AnalysisError> {
    if !c_dev.is_finite() || c_dev < 0.0 {
        return Err(AnalysisError::InvalidDeviationPenalty(c_dev));
    }
    Ok(j_sys + (1.0 - alpha.value()) * c_dev)
}

/// The effective-cost landscape over a confidence grid. Infeasible grid
/// points are marked and excluded from the minimum, never interpolated.
#[derive(Debug, Clone)]
pub struct EffectiveCostCurve {
    pub alphas: Vec<f64>,
    pub feasible: Vec<bool>,
    /// Optimal system cost per grid point (NaN where infeasible).
    pub j_sys: Vec<f64>,
    /// Effective cost per grid point (NaN where infeasible).
    pub j_eff: Vec<f64>,
    /// Grid-point value of `alpha_sensitivity - c_dev`, the derivative of
    /// the effective cost in `alpha`; a sign change brackets a stationary
    /// confidence level (NaN where infeasible).
    pub stationarity_residual: Vec<f64>,
    pub c_dev: f64,
    /// Index of the feasible grid point minimizing the effective cost
    /// (ties resolved toward smaller alpha).
    pub optimal_index: usize,
}

/// Evaluate the effective cost across a confidence grid and return the
/// minimizing grid point with the full curve. The grid must be strictly
/// increasing inside (0, 1); infeasible points are skipped, and only if
/// every point is infeasible does the search fail.
pub fn optimal_alpha(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
    c_dev: f64,
    alpha_grid: &[f64],
) -> Result<(Confidence, EffectiveCostCurve), AnalysisError> {
    if !c_dev.is_finite() || c_dev < 0.0 {
        return Err(AnalysisError::InvalidDeviationPenalty(c_dev));
    }
    if alpha_grid.is_empty() || alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalysisError::InvalidGrid);
    }
    let confidences: Vec<Confidence> = alpha_grid
        .iter()
        .map(|&a| Confidence::new(a).map_err(|_| AnalysisError::InvalidGrid))
        .collect::<Result<_, _>>()?;

    let len = alpha_grid.len();
    let mut curve = EffectiveCostCurve {
        alphas: alpha_grid.to_vec(),
        feasible: vec![false; len],
        j_sys: vec![f64::NAN; len],
        j_eff: vec![f64::NAN; len],
        stationarity_residual: vec![f64::NAN; len],
        c_dev,
        optimal_index: 0,
    };

    let mut best: Option<(usize, f64)> = None;
    for (k, &conf) in confidences.iter().enumerate() {
        let point_model = model.with_confidence(conf);
        match solver::solve_ccce(game, &point_model, weights) {
            Ok(sol) => {
                let j_eff = effective_cost(sol.system_cost, conf, c_dev)?;
                curve.feasible[k] = true;
                curve.j_sys[k] = sol.system_cost;
                curve.j_eff[k] = j_eff;
                curve.stationarity_residual[k] =
                    alpha_sensitivity(&sol, &point_model) - c_dev;
                if best.map_or(true, |(_, v)| j_eff < v) {
                    best = Some((k, j_eff));
                }
            }
            Err(CcceError::Infeasible { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }

    match best {
        Some((k, _)) => {
            curve.optimal_index = k;
            Ok((confidences[k], curve))
        }
        None => Err(AnalysisError::AllInfeasible),
    }
}

/// How to choose which constraints' uncertainty to pay down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcquisitionStrategy {
    /// Uniformly random distinct constraints (the control arm).
    Random,
    /// Highest shadow price first, ignoring noise levels.
    ShadowPrice,
    /// Highest `sigma * lambda` first: price times how much uncertainty
    /// there is to remove.
    InfoGain,
}

impl AcquisitionStrategy {
    pub const ALL: [AcquisitionStrategy; 3] = [
        AcquisitionStrategy::Random,
        AcquisitionStrategy::ShadowPrice,
        AcquisitionStrategy::InfoGain,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AcquisitionStrategy::Random => "random",
            AcquisitionStrategy::ShadowPrice => "shadow_price",
            AcquisitionStrategy::InfoGain => "infogain",
        }
    }
}

/// Select `k` constraints to resolve. Scored strategies break ties by
/// constraint id; the random strategy returns ids in id order too, so the
/// output is canonical for a given selection.
pub fn rank_for_acquisition<R: Rng + ?Sized>(
    solution: &CcceSolution,
    model: &UncertaintyModel,
    k: usize,
    strategy: AcquisitionStrategy,
    rng: &mut R,
) -> Result<Vec<DeviationId>, AnalysisError> {
    let available = solution.records.len();
    if k > available {
        return Err(AnalysisError::AcquisitionCount { k, available });
    }
    let ids = match strategy {
        AcquisitionStrategy::Random => {
            let mut picks = rand::seq::index::sample(rng, available, k).into_vec();
            picks.sort_unstable();
            picks
                .into_iter()
                .map(|i| solution.records[i].id)
                .collect()
        }
        AcquisitionStrategy::ShadowPrice => top_k(solution, k, |r| r.dual),
        AcquisitionStrategy::InfoGain => top_k(solution, k, |r| info_gain(model, r)),
    };
    Ok(ids)
}

fn top_k(solution: &CcceSolution, k: usize, score: impl Fn(&ConstraintRecord) -> f64) -> Vec<DeviationId> {
    let mut order: Vec<usize> = (0..solution.records.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (&solution.records[a], &solution.records[b]);
        score(rb)
            .partial_cmp(&score(ra))
            .expect("constraint scores are finite")
            .then_with(|| ra.id.cmp(&rb.id))
    });
    order.truncate(k);
    order.sort_unstable(); // records are id-ordered, so this is id order
    order
        .into_iter()
        .map(|i| solution.records[i].id)
        .collect()
}

/// Re-solve with the uncertainty displacement of the given constraints set
/// to zero, leaving every other row untouched: the what-if plan after
/// resolving those constraints' uncertainty.
pub fn resolve_without_constraint_uncertainty(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
    ids: &[DeviationId],
) -> Result<CcceSolution, CcceError> {
    let overrides = ids.iter().map(|id| (*id, 0.0)).collect();
    solver::solve_ccce_with_margin_overrides(game, model, weights, &overrides)
}

/// Re-solve with one agent's noise level set to zero wholesale.
pub fn resolve_without_agent_uncertainty(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
    agent: usize,
) -> Result<CcceSolution, CcceError> {
    solver::solve_ccce(game, &model.with_sigma(agent, 0.0)?, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Game;
    use crate::solver::{solve_ccce, ConstraintForm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// See the solver tests: agent 1 is tempted away from the cheap
    /// profile, and under the constant-margin form with noise t = q*sigma
    /// on agent 1 only, the optimum is 5/4 + 4t with duals 1/4 and 15/4 on
    /// agent 1's two rows. Everything below leans on that closed form.
    fn temptation_game() -> Game {
        Game::new(
            vec![2, 2],
            vec![vec![0.0, 5.0, 0.0, 5.0], vec![1.0, 0.0, 3.0, 10.0]],
        )
        .unwrap()
    }

    fn setup(sigma1: f64, alpha: f64) -> (Game, UncertaintyModel, SystemWeights) {
        let game = temptation_game();
        let model = UncertaintyModel::new(
            vec![0.0, sigma1],
            Confidence::new(alpha).unwrap(),
            ConstraintForm::ConstantMargin,
        )
        .unwrap();
        let weights = SystemWeights::new(vec![1.0, 1.0]).unwrap();
        (game, model, weights)
    }

    fn id(agent: usize, rec: usize, dev: usize) -> DeviationId {
        DeviationId::new(agent, rec, dev).unwrap()
    }

    #[test]
    fn sigma_sensitivity_matches_the_closed_form_and_finite_differences() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();
        let q = model.confidence().quantile();

        // Agent 0 has no dual mass; agent 1 carries Lambda = 4.
        assert!(sigma_sensitivity(&sol, &model, 0).abs() < 1e-9);
        let analytic = sigma_sensitivity(&sol, &model, 1);
        assert!((analytic - 4.0 * q).abs() < 1e-9);

        let delta = 1e-6;
        let up = solve_ccce(&game, &model.with_sigma(1, 0.3 + delta).unwrap(), &w).unwrap();
        let dn = solve_ccce(&game, &model.with_sigma(1, 0.3 - delta).unwrap(), &w).unwrap();
        let fd = (up.system_cost - dn.system_cost) / (2.0 * delta);
        assert!(
            (fd - analytic).abs() <= 1e-3 * (1.0 + analytic.abs()),
            "finite difference {fd} vs analytic {analytic}"
        );
    }

    #[test]
    fn sensitivities_vanish_at_even_odds() {
        let (game, model, w) = setup(0.3, 0.9);
        let even = model.with_confidence(Confidence::new(0.5).unwrap());
        let sol = solve_ccce(&game, &even, &w).unwrap();
        assert_eq!(sigma_sensitivity(&sol, &even, 1), 0.0);
        for r in &sol.records {
            assert_eq!(constraint_sensitivity(&sol, &even, r), 0.0);
        }
    }

    #[test]
    fn constraint_sensitivity_matches_margin_perturbation() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();
        let delta = 1e-6;
        for target in [id(1, 0, 1), id(1, 1, 0)] {
            let record = sol.record(&target).unwrap();
            let analytic = record.dual;
            let base = model.margin_term(target.agent);
            let solve_at = |margin: f64| {
                let overrides = [(target, margin)].into_iter().collect();
                solver::solve_ccce_with_margin_overrides(&game, &model, &w, &overrides)
                    .unwrap()
                    .system_cost
            };
            let fd = (solve_at(base + delta) - solve_at(base - delta)) / (2.0 * delta);
            assert!(
                (fd - analytic).abs() <= 1e-4 * (1.0 + analytic.abs()),
                "row {target}: fd {fd} vs dual {analytic}"
            );
        }
        // Inactive rows price at zero.
        let inactive = sol.record(&id(0, 0, 1)).unwrap();
        assert!(constraint_sensitivity(&sol, &model, inactive).abs() <= 1e-7);
    }

    #[test]
    fn info_gain_predicts_the_value_of_resolving_one_row() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();
        let q = model.confidence().quantile();
        let target = id(1, 1, 0);
        let gain = info_gain(&model, sol.record(&target).unwrap());
        assert!((gain - 0.3 * 3.75).abs() < 1e-9);

        let resolved =
            resolve_without_constraint_uncertainty(&game, &model, &w, &[target]).unwrap();
        let actual = resolved.system_cost - sol.system_cost;
        let predicted = -q * gain;
        assert!(
            (actual - predicted).abs() <= 0.10 * predicted.abs(),
            "re-solve moved cost by {actual}, first-order prediction {predicted}"
        );

        // Rows of a noise-free agent and inactive rows carry no gain.
        assert_eq!(info_gain(&model, sol.record(&id(0, 0, 1)).unwrap()), 0.0);
    }

    #[test]
    fn zeroing_an_agent_recovers_the_classical_optimum() {
        let (game, model, w) = setup(0.3, 0.9);
        let resolved = resolve_without_agent_uncertainty(&game, &model, &w, 1).unwrap();
        assert!((resolved.system_cost - 1.25).abs() < 1e-9);
    }

    #[test]
    fn alpha_sensitivity_matches_finite_differences_and_the_identity() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();
        let report = SensitivityReport::new(&sol, &model).unwrap();
        let analytic = alpha_sensitivity(&sol, &model);
        assert!((report.alpha_sensitivity - analytic).abs() < 1e-12);

        // Closed form: J*(alpha) = 5/4 + 4 * 0.3 * q(alpha), so
        // dJ*/dalpha = 1.2 / pdf(q).
        let expected = 1.2 / model.confidence().density_at_quantile();
        assert!((analytic - expected).abs() < 1e-9);

        let delta = 1e-5;
        let j = |a: f64| {
            solve_ccce(&game, &model.with_confidence(Confidence::new(a).unwrap()), &w)
                .unwrap()
                .system_cost
        };
        let fd = (j(0.9 + delta) - j(0.9 - delta)) / (2.0 * delta);
        assert!(
            (fd - analytic).abs() <= 1e-3 * (1.0 + analytic.abs()),
            "finite difference {fd} vs analytic {analytic}"
        );
    }

    #[test]
    fn report_zeroes_out_without_noise() {
        let (game, _, w) = setup(0.3, 0.9);
        let noise_free = UncertaintyModel::noise_free(2);
        let sol = solve_ccce(&game, &noise_free, &w).unwrap();
        let report = SensitivityReport::new(&sol, &noise_free).unwrap();
        assert!(report.per_agent.iter().all(|v| *v == 0.0));
        assert_eq!(report.alpha_sensitivity, 0.0);
        assert!(report.info_gains.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn effective_cost_arithmetic() {
        let a9 = Confidence::new(0.9).unwrap();
        assert_eq!(effective_cost(10.0, a9, 50.0).unwrap(), 15.0);
        assert_eq!(effective_cost(7.5, a9, 0.0).unwrap(), 7.5);
        let near_one = Confidence::new(0.999_999).unwrap();
        assert!((effective_cost(7.5, near_one, 50.0).unwrap() - 7.5).abs() < 1e-4);
        assert!(matches!(
            effective_cost(1.0, a9, -2.0),
            Err(AnalysisError::InvalidDeviationPenalty(_))
        ));

        // Affine in both arguments.
        let f = |a: f64, c: f64| effective_cost(2.0, Confidence::new(a).unwrap(), c).unwrap();
        let mid = f(0.7, 8.0);
        assert!((0.5 * (f(0.6, 8.0) + f(0.8, 8.0)) - mid).abs() < 1e-12);
        assert!((0.5 * (f(0.7, 4.0) + f(0.7, 12.0)) - mid).abs() < 1e-12);
    }

    #[test]
    fn zero_deviation_penalty_prefers_the_smallest_confidence() {
        let (game, model, w) = setup(0.3, 0.9);
        let grid = [0.75, 0.8, 0.85, 0.9, 0.95, 0.99];
        let (best, curve) = optimal_alpha(&game, &model, &w, 0.0, &grid).unwrap();
        assert_eq!(curve.optimal_index, 0);
        assert!((best.value() - 0.75).abs() < 1e-12);
        assert!(curve.feasible.iter().all(|&f| f));
        // The system cost rises with confidence, so with no deviation
        // penalty the effective cost does too.
        for w2 in curve.j_eff.windows(2) {
            assert!(w2[0] <= w2[1] + 1e-9);
        }
    }

    #[test]
    fn huge_deviation_penalty_prefers_the_largest_confidence() {
        let (game, model, w) = setup(0.3, 0.9);
        let grid = [0.75, 0.8, 0.85, 0.9, 0.95, 0.99];
        let (best, curve) = optimal_alpha(&game, &model, &w, 1e6, &grid).unwrap();
        assert_eq!(curve.optimal_index, grid.len() - 1);
        assert!((best.value() - 0.99).abs() < 1e-12);
    }

    #[test]
    fn intermediate_penalty_puts_the_optimum_inside_the_grid() {
        // dJ_eff/dalpha = 1.2 / pdf(q(alpha)) - c_dev crosses zero near
        // alpha = 0.9 when c_dev is 6.8 (1.2 / pdf(1.2816) ≈ 6.84).
        let (game, model, w) = setup(0.3, 0.9);
        let grid = [0.75, 0.8, 0.85, 0.9, 0.95, 0.99];
        let (best, curve) = optimal_alpha(&game, &model, &w, 6.8, &grid).unwrap();
        assert!((best.value() - 0.9).abs() < 1e-12);
        // The stationarity residual changes sign across the optimum.
        assert!(curve.stationarity_residual[2] < 0.0);
        assert!(curve.stationarity_residual[3] > 0.0);
    }

    #[test]
    fn infeasible_points_are_marked_and_skipped() {
        // A single agent with distinct costs: the constant-margin form is
        // feasible only at even odds, where the margin vanishes.
        let game = Game::new(vec![2], vec![vec![0.0, 1.0]]).unwrap();
        let w = SystemWeights::new(vec![1.0]).unwrap();
        let model = UncertaintyModel::new(
            vec![0.2],
            Confidence::new(0.9).unwrap(),
            ConstraintForm::ConstantMargin,
        )
        .unwrap();
        let (best, curve) = optimal_alpha(&game, &model, &w, 1e6, &[0.5, 0.75]).unwrap();
        assert!((best.value() - 0.5).abs() < 1e-12);
        assert_eq!(curve.feasible, vec![true, false]);
        assert!(curve.j_sys[1].is_nan());

        assert!(matches!(
            optimal_alpha(&game, &model, &w, 1.0, &[0.75, 0.9]),
            Err(AnalysisError::AllInfeasible)
        ));
    }

    #[test]
    fn grid_validation() {
        let (game, model, w) = setup(0.3, 0.9);
        for bad in [vec![], vec![0.9, 0.8], vec![0.5, 0.5], vec![0.9, 1.0]] {
            assert!(matches!(
                optimal_alpha(&game, &model, &w, 1.0, &bad),
                Err(AnalysisError::InvalidGrid)
            ));
        }
        assert!(matches!(
            optimal_alpha(&game, &model, &w, f64::NAN, &[0.9]),
            Err(AnalysisError::InvalidDeviationPenalty(_))
        ));
    }

    #[test]
    fn scored_rankings_follow_duals_and_gains() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);

        // Duals: 15/4 on (1,1->0), 1/4 on (1,0->1), zero elsewhere.
        let top = rank_for_acquisition(&sol, &model, 2, AcquisitionStrategy::ShadowPrice, &mut rng)
            .unwrap();
        assert_eq!(top, vec![id(1, 0, 1), id(1, 1, 0)]);
        let top1 =
            rank_for_acquisition(&sol, &model, 1, AcquisitionStrategy::ShadowPrice, &mut rng)
                .unwrap();
        assert_eq!(top1, vec![id(1, 1, 0)]);

        // Same sigma on every scored row: the two scored strategies agree.
        let by_gain =
            rank_for_acquisition(&sol, &model, 2, AcquisitionStrategy::InfoGain, &mut rng)
                .unwrap();
        assert_eq!(by_gain, top);
    }

    #[test]
    fn gain_ranking_discounts_high_priced_but_certain_rows() {
        // Synthetic records: a high dual on a near-noiseless agent loses to
        // a moderate dual on a noisy one under the gain score.
        let (game, model, w) = setup(0.3, 0.9);
        let mut sol = solve_ccce(&game, &model, &w).unwrap();
        for r in &mut sol.records {
            r.dual = 0.0;
        }
        sol.records[0].dual = 5.0; // agent 0, sigma 0
        sol.records[2].dual = 1.0; // agent 1, sigma 0.3
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let by_price =
            rank_for_acquisition(&sol, &model, 1, AcquisitionStrategy::ShadowPrice, &mut rng)
                .unwrap();
        let by_gain =
            rank_for_acquisition(&sol, &model, 1, AcquisitionStrategy::InfoGain, &mut rng)
                .unwrap();
        assert_eq!(by_price, vec![sol.records[0].id]);
        assert_eq!(by_gain, vec![sol.records[2].id]);
    }

    #[test]
    fn total_ties_fall_back_to_id_order() {
        let game = Game::new(vec![2], vec![vec![1.0, 1.0]]).unwrap();
        let w = SystemWeights::new(vec![1.0]).unwrap();
        let sol = solve_ccce(&game, &UncertaintyModel::noise_free(1), &w).unwrap();
        assert!(sol.records.iter().all(|r| r.dual == 0.0));
        let nf = UncertaintyModel::noise_free(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let picks =
            rank_for_acquisition(&sol, &nf, 2, AcquisitionStrategy::ShadowPrice, &mut rng)
                .unwrap();
        assert_eq!(picks, vec![id(0, 0, 1), id(0, 1, 0)]);
    }

    #[test]
    fn random_selection_is_distinct_seeded_and_bounded() {
        let (game, model, w) = setup(0.3, 0.9);
        let sol = solve_ccce(&game, &model, &w).unwrap();

        let mut a = ChaCha8Rng::seed_from_u64(21);
        let mut b = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let pa =
                rank_for_acquisition(&sol, &model, 3, AcquisitionStrategy::Random, &mut a).unwrap();
            let pb =
                rank_for_acquisition(&sol, &model, 3, AcquisitionStrategy::Random, &mut b).unwrap();
            assert_eq!(pa, pb);
            assert_eq!(pa.len(), 3);
            let mut sorted = pa.clone();
            sorted.dedup();
            assert_eq!(sorted.len(), 3, "picks must be distinct");
        }

        assert!(matches!(
            rank_for_acquisition(&sol, &model, 5, AcquisitionStrategy::Random, &mut a),
            Err(AnalysisError::AcquisitionCount {
                k: 5,
                available: 4
            })
        ));
    }
}
