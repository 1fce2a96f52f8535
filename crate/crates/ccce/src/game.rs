//! Finite games in cost form and distributions over joint action profiles.
//!
//! A game holds one dense cost table per agent, indexed by joint action
//! profile. Profiles are numbered lexicographically with agent 0 as the
//! outermost digit: profile index `p` encodes actions `a_i` via
//! `p = sum_i a_i * stride_i`, `stride_i = prod_{j > i} |X_j|`. Every vector
//! keyed by profiles in this crate — cost tables, distributions, LP columns,
//! CSV rows — uses this order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distribution entries may dip this far below zero before being rejected;
/// anything in `[-EPS_DISTRIBUTION, 0)` is clamped to zero on construction.
pub const EPS_DISTRIBUTION: f64 = 1e-9;

/// Marginal probabilities at or below this threshold are treated as zero:
/// conditional distributions and conditional margins are undefined there.
pub const EPS_MARGINAL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("a game needs at least one agent")]
    NoAgents,
    #[error("agent {agent} has an empty action set")]
    EmptyActionSet { agent: usize },
    #[error("cost tables must have one row per agent: expected {expected}, got {got}")]
    CostTableCount { expected: usize, got: usize },
    #[error("agent {agent}: cost table length {got} does not match {expected} profiles")]
    CostTableLength {
        agent: usize,
        expected: usize,
        got: usize,
    },
    #[error("agent {agent}: cost table contains a non-finite entry")]
    NonFiniteCost { agent: usize },
    #[error("agent index {agent} out of range for {n} agents")]
    AgentOutOfRange { agent: usize, n: usize },
    #[error("action {action} out of range for agent {agent} with {count} actions")]
    ActionOutOfRange {
        agent: usize,
        action: usize,
        count: usize,
    },
    #[error("profile has {got} entries but the game has {expected} agents")]
    ProfileLength { expected: usize, got: usize },
    #[error("a deviation must differ from the recommendation (agent {agent}, action {action})")]
    SelfDeviation { agent: usize, action: usize },
    #[error("distribution length {got} does not match {expected} profiles")]
    DistributionLength { expected: usize, got: usize },
    #[error("distribution entry {index} is {value}, below -{}", EPS_DISTRIBUTION)]
    NegativeProbability { index: usize, value: f64 },
    #[error("distribution entries sum to {sum}, not 1")]
    ProbabilitySum { sum: f64 },
    #[error("weights must be finite, non-negative, with at least one positive entry")]
    InvalidWeights,
    #[error("weights length {got} does not match {expected} agents")]
    WeightsLength { expected: usize, got: usize },
}

/// Identifier of one deviation incentive constraint: agent `agent`, when
/// recommended `recommended`, considering a switch to `deviation`.
///
/// The derived ordering (agent, recommended, deviation) is the row order of
/// the coordination LP and the tie-break order everywhere ranked lists of
/// constraints appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeviationId {
    pub agent: usize,
    pub recommended: usize,
    pub deviation: usize,
}

impl DeviationId {
    pub fn new(agent: usize, recommended: usize, deviation: usize) -> Result<Self, GameError> {
        if recommended == deviation {
            return Err(GameError::SelfDeviation {
                agent,
                action: recommended,
            });
        }
        Ok(DeviationId {
            agent,
            recommended,
            deviation,
        })
    }
}

impl std::fmt::Display for DeviationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "a{}:{}->{}", self.agent, self.recommended, self.deviation)
    }
}

/// A finite game in cost form: each agent wants to minimize its own expected
/// cost. Cost tables are dense, one entry per joint profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    action_counts: Vec<usize>,
    /// `costs[agent][profile]`, profiles in lexicographic order.
    costs: Vec<Vec<f64>>,
    strides: Vec<usize>,
    num_profiles: usize,
}

impl Game {
    pub fn new(action_counts: Vec<usize>, costs: Vec<Vec<f64>>) -> Result<Self, GameError> {
        if action_counts.is_empty() {
            return Err(GameError::NoAgents);
        }
        for (agent, &count) in action_counts.iter().enumerate() {
            if count == 0 {
                return Err(GameError::EmptyActionSet { agent });
            }
        }
        let num_profiles: usize = action_counts.iter().product();
        if costs.len() != action_counts.len() {
            return Err(GameError::CostTableCount {
                expected: action_counts.len(),
                got: costs.len(),
            });
        }
        for (agent, table) in costs.iter().enumerate() {
            if table.len() != num_profiles {
                return Err(GameError::CostTableLength {
                    agent,
                    expected: num_profiles,
                    got: table.len(),
                });
            }
            if table.iter().any(|c| !c.is_finite()) {
                return Err(GameError::NonFiniteCost { agent });
            }
        }
        let n = action_counts.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * action_counts[i + 1];
        }
        Ok(Game {
            action_counts,
            costs,
            strides,
            num_profiles,
        })
    }

    pub fn num_agents(&self) -> usize {
        self.action_counts.len()
    }

    pub fn action_counts(&self) -> &[usize] {
        &self.action_counts
    }

    pub fn action_count(&self, agent: usize) -> usize {
        self.action_counts[agent]
    }

    pub fn num_profiles(&self) -> usize {
        self.num_profiles
    }

    pub fn stride(&self, agent: usize) -> usize {
        self.strides[agent]
    }

    /// Cost to `agent` at the profile with index `profile`.
    pub fn cost(&self, agent: usize, profile: usize) -> f64 {
        self.costs[agent][profile]
    }

    /// Index of a full joint profile given one action per agent.
    pub fn profile_index(&self, actions: &[usize]) -> Result<usize, GameError> {
        if actions.len() != self.num_agents() {
            return Err(GameError::ProfileLength {
                expected: self.num_agents(),
                got: actions.len(),
            });
        }
        let mut idx = 0;
        for (agent, (&a, &count)) in actions.iter().zip(&self.action_counts).enumerate() {
            if a >= count {
                return Err(GameError::ActionOutOfRange {
                    agent,
                    action: a,
                    count,
                });
            }
            idx += a * self.strides[agent];
        }
        Ok(idx)
    }

    /// Decode a profile index into one action per agent.
    pub fn profile_actions(&self, profile: usize) -> Vec<usize> {
        self.action_counts
            .iter()
            .zip(&self.strides)
            .map(|(&count, &stride)| (profile / stride) % count)
            .collect()
    }

    /// All profile indices in lexicographic order.
    pub fn profiles(&self) -> std::ops::Range<usize> {
        0..self.num_profiles
    }

    /// Profile indices where `agent` plays `action`, in lexicographic order
    /// of the remaining agents' actions.
    pub fn profiles_with(&self, agent: usize, action: usize) -> impl Iterator<Item = usize> + '_ {
        let stride = self.strides[agent];
        let count = self.action_counts[agent];
        let block = stride * count; // one full cycle of this agent's digit
        let others = self.num_profiles / count;
        (0..others).map(move |o| (o / stride) * block + action * stride + (o % stride))
    }

    fn check_agent(&self, agent: usize) -> Result<(), GameError> {
        if agent >= self.num_agents() {
            return Err(GameError::AgentOutOfRange {
                agent,
                n: self.num_agents(),
            });
        }
        Ok(())
    }

    fn check_action(&self, agent: usize, action: usize) -> Result<(), GameError> {
        self.check_agent(agent)?;
        if action >= self.action_counts[agent] {
            return Err(GameError::ActionOutOfRange {
                agent,
                action,
                count: self.action_counts[agent],
            });
        }
        Ok(())
    }

    fn check_deviation(&self, c: &DeviationId) -> Result<(), GameError> {
        self.check_action(c.agent, c.recommended)?;
        self.check_action(c.agent, c.deviation)?;
        if c.recommended == c.deviation {
            return Err(GameError::SelfDeviation {
                agent: c.agent,
                action: c.recommended,
            });
        }
        Ok(())
    }

    /// Cost change `J_i(recommended, x_others) - J_i(deviation, x_others)` for
    /// the deviation `c` against a fixed profile of the other agents.
    ///
    /// `others` is a full-length profile; its entry at `c.agent` is ignored.
    /// Positive values mean the deviation would lower the agent's cost.
    pub fn deviation_cost(&self, c: &DeviationId, others: &[usize]) -> Result<f64, GameError> {
        self.check_deviation(c)?;
        let mut actions = others.to_vec();
        if actions.len() != self.num_agents() {
            return Err(GameError::ProfileLength {
                expected: self.num_agents(),
                got: actions.len(),
            });
        }
        actions[c.agent] = c.recommended;
        let p_rec = self.profile_index(&actions)?;
        Ok(self.deviation_cost_at(c.agent, c.recommended, c.deviation, p_rec))
    }

    /// Same cost change, taking the profile index at which the agent already
    /// plays `recommended`. Equal recommendation and deviation give zero.
    #[inline]
    pub fn deviation_cost_at(
        &self,
        agent: usize,
        recommended: usize,
        deviation: usize,
        profile_at_recommended: usize,
    ) -> f64 {
        let stride = self.strides[agent] as isize;
        let shift = (deviation as isize - recommended as isize) * stride;
        let p_dev = (profile_at_recommended as isize + shift) as usize;
        self.costs[agent][profile_at_recommended] - self.costs[agent][p_dev]
    }

    /// Marginal probability that `agent` is recommended `action` under `z`.
    pub fn marginal(
        &self,
        z: &JointDistribution,
        agent: usize,
        action: usize,
    ) -> Result<f64, GameError> {
        self.check_action(agent, action)?;
        self.check_distribution(z)?;
        Ok(self.profiles_with(agent, action).map(|p| z.prob(p)).sum())
    }

    /// Conditional distribution over the other agents' actions given that
    /// `agent` is recommended `action`, in lexicographic order of the others.
    /// `None` when the marginal is at or below [`EPS_MARGINAL`].
    pub fn conditional_distribution(
        &self,
        z: &JointDistribution,
        agent: usize,
        action: usize,
    ) -> Result<Option<Vec<f64>>, GameError> {
        let marg = self.marginal(z, agent, action)?;
        if marg <= EPS_MARGINAL {
            return Ok(None);
        }
        Ok(Some(
            self.profiles_with(agent, action)
                .map(|p| z.prob(p) / marg)
                .collect(),
        ))
    }

    /// Expected deviation gain for `c` conditioned on the recommendation:
    /// `E_z[ J_i(rec, X_others) - J_i(dev, X_others) | X_i = rec ]`.
    /// `None` when the recommendation has no support under `z`.
    pub fn nominal_margin(
        &self,
        z: &JointDistribution,
        c: &DeviationId,
    ) -> Result<Option<f64>, GameError> {
        let marg = self.marginal(z, c.agent, c.recommended)?;
        self.check_deviation(c)?;
        if marg <= EPS_MARGINAL {
            return Ok(None);
        }
        Ok(Some(self.unconditional_margin(z, c)? / marg))
    }

    /// The unscaled sum `sum_{x_others} z(rec, x_others) * deviation gain`,
    /// i.e. the conditional margin multiplied by the recommendation marginal.
    /// This is the linear-in-`z` quantity the coordination LP constrains.
    pub fn unconditional_margin(
        &self,
        z: &JointDistribution,
        c: &DeviationId,
    ) -> Result<f64, GameError> {
        self.check_deviation(c)?;
        self.check_distribution(z)?;
        Ok(self
            .profiles_with(c.agent, c.recommended)
            .map(|p| z.prob(p) * self.deviation_cost_at(c.agent, c.recommended, c.deviation, p))
            .sum())
    }

    /// System cost `E_z[ sum_i w_i * J_i(X) ]`.
    pub fn expected_system_cost(
        &self,
        z: &JointDistribution,
        weights: &SystemWeights,
    ) -> Result<f64, GameError> {
        self.check_distribution(z)?;
        if weights.len() != self.num_agents() {
            return Err(GameError::WeightsLength {
                expected: self.num_agents(),
                got: weights.len(),
            });
        }
        Ok(self
            .profiles()
            .map(|p| z.prob(p) * self.weighted_profile_cost(p, weights))
            .sum())
    }

    /// `sum_i w_i * J_i(x)` at a single profile.
    pub fn weighted_profile_cost(&self, profile: usize, weights: &SystemWeights) -> f64 {
        weights
            .as_slice()
            .iter()
            .enumerate()
            .map(|(i, w)| w * self.costs[i][profile])
            .sum()
    }

    /// All deviation constraint identifiers in row order
    /// (agent, recommended, deviation ascending).
    pub fn deviation_ids(&self) -> Vec<DeviationId> {
        let mut ids = Vec::new();
        for (agent, &count) in self.action_counts.iter().enumerate() {
            for recommended in 0..count {
                for deviation in 0..count {
                    if deviation != recommended {
                        ids.push(DeviationId {
                            agent,
                            recommended,
                            deviation,
                        });
                    }
                }
            }
        }
        ids
    }

    fn check_distribution(&self, z: &JointDistribution) -> Result<(), GameError> {
        if z.len() != self.num_profiles {
            return Err(GameError::DistributionLength {
                expected: self.num_profiles,
                got: z.len(),
            });
        }
        Ok(())
    }
}

/// Serialization schema for a [`Game`]: agent count, action counts, and one
/// flat cost array per agent in profile order. Parsed from and rendered to
/// structured text (TOML) by the CLI layer.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub n: usize,
    pub action_counts: Vec<usize>,
    pub costs: Vec<Vec<f64>>,
}

impl GameFile {
    pub fn into_game(self) -> Result<Game, GameError> {
        if self.n != self.action_counts.len() {
            return Err(GameError::CostTableCount {
                expected: self.n,
                got: self.action_counts.len(),
            });
        }
        Game::new(self.action_counts, self.costs)
    }

    pub fn from_game(game: &Game) -> Self {
        GameFile {
            n: game.num_agents(),
            action_counts: game.action_counts().to_vec(),
            costs: (0..game.num_agents())
                .map(|i| game.profiles().map(|p| game.cost(i, p)).collect())
                .collect(),
        }
    }
}

/// A probability distribution over joint action profiles, stored densely in
/// profile order.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validates and stores a distribution. Entries in
    /// `[-EPS_DISTRIBUTION, 0)` — LP roundoff — are clamped to zero; anything
    /// more negative is rejected. The sum must be within `EPS_DISTRIBUTION`
    /// of one.
    pub fn new(mut probs: Vec<f64>) -> Result<Self, GameError> {
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -EPS_DISTRIBUTION {
                return Err(GameError::NegativeProbability { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > EPS_DISTRIBUTION {
            return Err(GameError::ProbabilitySum { sum });
        }
        Ok(JointDistribution { probs })
    }

    /// All mass on a single profile.
    pub fn point_mass(num_profiles: usize, profile: usize) -> Self {
        let mut probs = vec![0.0; num_profiles];
        probs[profile] = 1.0;
        JointDistribution { probs }
    }

    pub fn uniform(num_profiles: usize) -> Self {
        JointDistribution {
            probs: vec![1.0 / num_profiles as f64; num_profiles],
        }
    }

    pub fn prob(&self, profile: usize) -> f64 {
        self.probs[profile]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Non-negative per-agent weights for the system objective. At least one
/// entry must be positive; normalization is up to the producer (the vertiport
/// weighting normalizes to sum one).
#[derive(Debug, Clone, PartialEq)]
pub struct SystemWeights {
    weights: Vec<f64>,
}

impl SystemWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self, GameError> {
        if weights.is_empty()
            || weights.iter().any(|w| !w.is_finite() || *w < 0.0)
            || weights.iter().all(|w| *w == 0.0)
        {
            return Err(GameError::InvalidWeights);
        }
        Ok(SystemWeights { weights })
    }

    pub fn uniform(n: usize) -> Self {
        SystemWeights {
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
