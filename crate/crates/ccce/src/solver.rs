//! The chance-constrained coordination program.
//!
//! A coordinator draws a joint action profile from a distribution `z` and
//! privately recommends each agent its component. Classical correlated
//! equilibrium requires every deviation's expected gain to be nonpositive;
//! here each agent `i` observes its deviation gains through zero-mean
//! Gaussian noise with standard deviation `sigma_i`, and the coordinator
//! must make deviations unattractive with probability at least `alpha`.
//! With `q = quantile(alpha)`, each chance constraint has an exact linear
//! deterministic equivalent, in one of two forms:
//!
//! - **Constant margin** (default): the unconditional deviation gain is
//!   pushed below a fixed buffer, `sum_p z_p * gain_c(p) <= -q * sigma_i`.
//!   Right-hand sides carry the uncertainty, so shadow prices translate
//!   directly into sensitivities with respect to the noise levels.
//! - **Conditional scaled**: the buffer is scaled by the recommendation
//!   probability, `sum_p z_p * (gain_c(p) + q * sigma_i) <= 0`, which
//!   constrains the *conditional* gain given the recommendation to sit at
//!   or below `-q * sigma_i` wherever the recommendation has support, and
//!   is vacuous elsewhere.
//!
//! The constant-margin form demands a safety buffer even for
//! recommendations the coordinator never issues, so it forces broad support
//! and can be infeasible when noise is large relative to the cost gaps; the
//! conditional form is always feasible whenever a classical equilibrium
//! exists. Both are ordinary linear programs over the probability simplex
//! and are solved by [`crate::lp`] with dual certificates.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::game::{DeviationId, Game, GameError, JointDistribution, SystemWeights};
use crate::gaussian::Confidence;
use crate::lp::{self, LinearProgram, LpError, LpStatus};

/// A constraint whose recomputed slack is at or below this is active.
pub const ACTIVE_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum CcceError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("linear program solver failed: {0}")]
    Lp(#[from] LpError),
    #[error(
        "no joint distribution satisfies every incentive constraint at confidence {alpha}; \
         the uncertainty margins exceed what the game's cost gaps can absorb"
    )]
    Infeasible { alpha: f64 },
    #[error("expected {expected} noise levels, one per agent, got {got}")]
    SigmaCount { expected: usize, got: usize },
    #[error("noise level for agent {agent} is {value}; it must be finite and nonnegative")]
    InvalidSigma { agent: usize, value: f64 },
    #[error("margin override for constraint {id} must be finite and nonnegative")]
    InvalidOverride { id: DeviationId },
    #[error("constraint {id} is not active at the optimum; only binding constraints are classified")]
    ConstraintNotActive { id: DeviationId },
    #[error("the coordination program reported an unbounded objective over the probability simplex; this indicates a numerical failure")]
    Numerical,
}

/// Which deterministic equivalent of the chance constraints to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintForm {
    ConstantMargin,
    ConditionalScaled,
}

impl ConstraintForm {
    pub fn label(self) -> &'static str {
        match self {
            ConstraintForm::ConstantMargin => "constant-margin",
            ConstraintForm::ConditionalScaled => "conditional-scaled",
        }
    }
}

/// Per-agent Gaussian noise levels, the confidence level, and the
/// constraint form they are enforced under.
#[derive(Debug, Clone)]
pub struct UncertaintyModel {
    sigmas: Vec<f64>,
    confidence: Confidence,
    form: ConstraintForm,
}

impl UncertaintyModel {
    pub fn new(
        sigmas: Vec<f64>,
        confidence: Confidence,
        form: ConstraintForm,
    ) -> Result<Self, CcceError> {
        for (agent, &s) in sigmas.iter().enumerate() {
            if !s.is_finite() || s < 0.0 {
                return Err(CcceError::InvalidSigma { agent, value: s });
            }
        }
        Ok(UncertaintyModel {
            sigmas,
            confidence,
            form,
        })
    }

    /// No noise at even odds: the chance constraints collapse to the
    /// classical equilibrium inequalities under either form.
    pub fn noise_free(num_agents: usize) -> Self {
        UncertaintyModel {
            sigmas: vec![0.0; num_agents],
            confidence: Confidence::new(0.5).expect("0.5 is a valid confidence"),
            form: ConstraintForm::ConstantMargin,
        }
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn sigma(&self, agent: usize) -> f64 {
        self.sigmas[agent]
    }

    pub fn confidence(&self) -> Confidence {
        self.confidence
    }

    pub fn form(&self) -> ConstraintForm {
        self.form
    }

    /// The uncertainty displacement `q(alpha) * sigma_agent` entering every
    /// constraint of this agent.
    pub fn margin_term(&self, agent: usize) -> f64 {
        self.confidence.quantile() * self.sigmas[agent]
    }

    pub fn with_confidence(&self, confidence: Confidence) -> Self {
        UncertaintyModel {
            sigmas: self.sigmas.clone(),
            confidence,
            form: self.form,
        }
    }

    pub fn with_sigma(&self, agent: usize, sigma: f64) -> Result<Self, CcceError> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(CcceError::InvalidSigma {
                agent,
                value: sigma,
            });
        }
        let mut sigmas = self.sigmas.clone();
        sigmas[agent] = sigma;
        Ok(UncertaintyModel {
            sigmas,
            confidence: self.confidence,
            form: self.form,
        })
    }

    pub fn with_form(&self, form: ConstraintForm) -> Self {
        UncertaintyModel {
            sigmas: self.sigmas.clone(),
            confidence: self.confidence,
            form,
        }
    }
}

/// One incentive constraint at the optimum.
#[derive(Debug, Clone)]
pub struct ConstraintRecord {
    pub id: DeviationId,
    /// Shadow price, `>= 0`: marginal system cost per unit of additional
    /// uncertainty displacement on this row.
    pub dual: f64,
    /// Recomputed slack of the row at the optimal distribution.
    pub slack: f64,
    pub active: bool,
    /// Nominal (noise-free) deviation margin at the optimum, read in the
    /// form's own normalization: unconditional under the constant-margin
    /// form, conditional (zero off support) under the conditional form.
    pub margin: f64,
}

/// Optimal coordination plan plus everything duality provides.
#[derive(Debug, Clone)]
pub struct CcceSolution {
    pub z: JointDistribution,
    /// Weighted expected system cost at the optimum.
    pub system_cost: f64,
    /// One record per deviation constraint, ordered by constraint id.
    pub records: Vec<ConstraintRecord>,
    /// Per-agent sum of that agent's constraint duals.
    pub lambda_agent: Vec<f64>,
    /// True when the optimal basis is degenerate; shadow prices may then be
    /// one-sided and sensitivity formulas only directionally valid.
    pub degenerate: bool,
    /// Dual of the normalization row `sum z = 1`.
    pub equality_dual: f64,
    pub iterations: u64,
}

impl CcceSolution {
    pub fn record(&self, id: &DeviationId) -> Option<&ConstraintRecord> {
        self.records
            .binary_search_by(|r| r.id.cmp(id))
            .ok()
            .map(|k| &self.records[k])
    }

    pub fn active_ids(&self) -> Vec<DeviationId> {
        self.records
            .iter()
            .filter(|r| r.active)
            .map(|r| r.id)
            .collect()
    }

    pub fn num_active(&self) -> usize {
        self.records.iter().filter(|r| r.active).count()
    }

    /// Total shadow price mass; equals the sum of `lambda_agent`.
    pub fn total_dual(&self) -> f64 {
        self.records.iter().map(|r| r.dual).sum()
    }
}

/// Assemble the coordination LP: minimize the weighted expected system cost
/// over the probability simplex subject to one row per deviation constraint.
/// `margin_overrides` replaces the uncertainty displacement `q * sigma` on
/// selected rows (used for what-if re-solves such as information
/// acquisition); every other row keeps the model's own displacement.
/// Returns the program together with the row-order constraint ids.
pub fn build_lp(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
    margin_overrides: &BTreeMap<DeviationId, f64>,
) -> Result<(LinearProgram, Vec<DeviationId>), CcceError> {
    let n = game.num_agents();
    if model.sigmas.len() != n {
        return Err(CcceError::SigmaCount {
            expected: n,
            got: model.sigmas.len(),
        });
    }
    if weights.len() != n {
        return Err(CcceError::Game(GameError::WeightsLength {
            expected: n,
            got: weights.len(),
        }));
    }
    for (id, &m) in margin_overrides {
        if id.agent >= n
            || id.recommended >= game.action_count(id.agent)
            || id.deviation >= game.action_count(id.agent)
        {
            return Err(CcceError::Game(GameError::AgentOutOfRange {
                agent: id.agent,
                n,
            }));
        }
        if !m.is_finite() || m < 0.0 {
            return Err(CcceError::InvalidOverride { id: *id });
        }
    }

    let num_profiles = game.num_profiles();
    let objective: Vec<f64> = game
        .profiles()
        .map(|p| game.weighted_profile_cost(p, weights))
        .collect();

    let ids = game.deviation_ids();
    let mut ineq_matrix = Vec::with_capacity(ids.len());
    let mut ineq_rhs = Vec::with_capacity(ids.len());
    for id in &ids {
        let displacement = margin_overrides
            .get(id)
            .copied()
            .unwrap_or_else(|| model.margin_term(id.agent));
        let mut row = vec![0.0; num_profiles];
        match model.form {
            ConstraintForm::ConstantMargin => {
                for p in game.profiles_with(id.agent, id.recommended) {
                    row[p] = game.deviation_cost_at(id.agent, id.recommended, id.deviation, p);
                }
                ineq_rhs.push(-displacement);
            }
            ConstraintForm::ConditionalScaled => {
                for p in game.profiles_with(id.agent, id.recommended) {
                    row[p] = game.deviation_cost_at(id.agent, id.recommended, id.deviation, p)
                        + displacement;
                }
                ineq_rhs.push(0.0);
            }
        }
        ineq_matrix.push(row);
    }

    let lp = LinearProgram {
        objective,
        ineq_matrix,
        ineq_rhs,
        eq_matrix: vec![vec![1.0; num_profiles]],
        eq_rhs: vec![1.0],
        nonneg: true,
    };
    Ok((lp, ids))
}

/// Solve the coordination program for the given game, uncertainty model,
/// and system weights.
pub fn solve_ccce(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
) -> Result<CcceSolution, CcceError> {
    solve_ccce_with_margin_overrides(game, model, weights, &BTreeMap::new())
}

/// As [`solve_ccce`], with selected rows' uncertainty displacement replaced
/// (see [`build_lp`]).
pub fn solve_ccce_with_margin_overrides(
    game: &Game,
    model: &UncertaintyModel,
    weights: &SystemWeights,
    margin_overrides: &BTreeMap<DeviationId, f64>,
) -> Result<CcceSolution, CcceError> {
    let (program, ids) = build_lp(game, model, weights, margin_overrides)?;
    let sol = lp::solve(&program)?;
    match sol.status {
        LpStatus::Infeasible => Err(CcceError::Infeasible {
            alpha: model.confidence.value(),
        }),
        LpStatus::Unbounded => Err(CcceError::Numerical),
        LpStatus::Optimal => {
            // The equality row holds to solver tolerance; rescale so the
            // distribution invariant (sum exactly one) holds for consumers.
            let mut probs = sol.primal;
            for v in &mut probs {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
            let total: f64 = probs.iter().sum();
            for v in &mut probs {
                *v /= total;
            }
            let z = JointDistribution::new(probs)?;
            let system_cost = game.expected_system_cost(&z, weights)?;

            let mut records = Vec::with_capacity(ids.len());
            let mut lambda_agent = vec![0.0; game.num_agents()];
            for (k, id) in ids.iter().enumerate() {
                let dual = sol.ineq_duals[k];
                lambda_agent[id.agent] += dual;
                let displacement = margin_overrides
                    .get(id)
                    .copied()
                    .unwrap_or_else(|| model.margin_term(id.agent));
                let unconditional = game.unconditional_margin(&z, id)?;
                let (slack, margin) = match model.form {
                    ConstraintForm::ConstantMargin => {
                        (-displacement - unconditional, unconditional)
                    }
                    ConstraintForm::ConditionalScaled => {
                        let marg = game.marginal(&z, id.agent, id.recommended)?;
                        let nominal = game.nominal_margin(&z, id)?.unwrap_or(0.0);
                        (-(unconditional + displacement * marg), nominal)
                    }
                };
                records.push(ConstraintRecord {
                    id: *id,
                    dual,
                    slack,
                    active: slack <= ACTIVE_TOL,
                    margin,
                });
            }

            Ok(CcceSolution {
                z,
                system_cost,
                records,
                lambda_agent,
                degenerate: sol.degenerate,
                equality_dual: sol.eq_duals[0],
                iterations: sol.iterations,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BottleneckKind {
    /// The binding is driven by the game's nominal cost gaps.
    Structural,
    /// The binding is driven by the uncertainty displacement `q * sigma`.
    Informational,
}

impl BottleneckKind {
    pub fn label(self) -> &'static str {
        match self {
            BottleneckKind::Structural => "structural",
            BottleneckKind::Informational => "informational",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Bottleneck {
    /// Share of the binding attributable to uncertainty:
    /// `q*sigma / (|nominal margin| + q*sigma)`, zero when `sigma` is zero.
    pub rho: f64,
    pub kind: BottleneckKind,
}

/// Attribute an active constraint's binding to game structure or to
/// uncertainty. Errors on constraints that are not active.
pub fn classify_bottleneck(
    record: &ConstraintRecord,
    model: &UncertaintyModel,
) -> Result<Bottleneck, CcceError> {
    if !record.active {
        return Err(CcceError::ConstraintNotActive { id: record.id });
    }
    let displacement = model.margin_term(record.id.agent);
    let rho = if displacement <= 0.0 {
        0.0
    } else {
        displacement / (record.margin.abs() + displacement)
    };
    let kind = if rho >= 0.5 {
        BottleneckKind::Informational
    } else {
        BottleneckKind::Structural
    };
    Ok(Bottleneck { rho, kind })
}
