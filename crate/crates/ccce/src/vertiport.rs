//! An aerial-taxi occupancy game. Each of `n` agents decides, for each of
//! `m` vertiports, whether to occupy it or yield it this round. Occupying a
//! contested vertiport costs `congestion_penalty * gamma` minutes per other
//! occupant; each yielded vertiport costs a flat waiting penalty. The
//! severity parameter `gamma >= 1` scales congestion relative to waiting.

use rand::Rng;
use thiserror::Error;

use crate::game::{Game, GameError, SystemWeights};

/// Floor applied to noise levels when converting them to weights, so that
/// noise-free agents get a large but finite weight.
pub const WEIGHT_SIGMA_FLOOR: f64 = 1e-6;

/// Upper bound of the uniform noise-level distribution, as a multiple of
/// `gamma - 1`: more severe congestion comes with noisier cost estimates.
pub const SIGMA_SPREAD: f64 = 0.3;

#[derive(Debug, Error)]
pub enum VertiportError {
    #[error("need at least one agent and one vertiport, got n={n}, m={m}")]
    EmptyScenario { n: usize, m: usize },
    #[error("congestion severity gamma must be finite and >= 1, got {gamma}")]
    InvalidGamma { gamma: f64 },
    #[error("penalties must be finite and nonnegative, got congestion {congestion}, waiting {waiting}")]
    InvalidPenalty { congestion: f64, waiting: f64 },
    #[error(
        "scenario spans {profiles} joint profiles, above the cap of {cap}; \
         reduce agents or vertiports"
    )]
    TooLarge { profiles: u128, cap: u64 },
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Scenario parameters. Actions are bitmasks over vertiports: action index
/// `a` has bit `v` set (vertiport 0 as the least significant bit) when the
/// agent occupies vertiport `v`, so each agent has `2^m` actions.
#[derive(Debug, Clone)]
pub struct VertiportScenario {
    pub n: usize,
    pub m: usize,
    pub gamma: f64,
    pub seed: u64,
    /// Minutes charged per other occupant of a contested vertiport, before
    /// the `gamma` amplification.
    pub congestion_penalty: f64,
    /// Minutes charged per yielded vertiport.
    pub waiting_penalty: f64,
}

impl VertiportScenario {
    /// Scenario with the standard five-minute penalties.
    pub fn new(n: usize, m: usize, gamma: f64, seed: u64) -> Result<Self, VertiportError> {
        let scenario = VertiportScenario {
            n,
            m,
            gamma,
            seed,
            congestion_penalty: 5.0,
            waiting_penalty: 5.0,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn validate(&self) -> Result<(), VertiportError> {
        if self.n == 0 || self.m == 0 {
            return Err(VertiportError::EmptyScenario {
                n: self.n,
                m: self.m,
            });
        }
        if !self.gamma.is_finite() || self.gamma < 1.0 {
            return Err(VertiportError::InvalidGamma { gamma: self.gamma });
        }
        if !self.congestion_penalty.is_finite()
            || self.congestion_penalty < 0.0
            || !self.waiting_penalty.is_finite()
            || self.waiting_penalty < 0.0
        {
            return Err(VertiportError::InvalidPenalty {
                congestion: self.congestion_penalty,
                waiting: self.waiting_penalty,
            });
        }
        Ok(())
    }

    pub fn actions_per_agent(&self) -> usize {
        1usize << self.m
    }

    /// Upper bound of the noise-level distribution, `SIGMA_SPREAD * (gamma - 1)`.
    pub fn sigma_bound(&self) -> f64 {
        SIGMA_SPREAD * (self.gamma - 1.0)
    }
}

/// Number of occupants of vertiport `v` under the given joint action
/// profile (one bitmask per agent).
fn occupancy_count(actions: &[usize], v: usize) -> usize {
    actions.iter().filter(|&&a| a >> v & 1 == 1).count()
}

/// Cost in minutes for one agent at a joint profile:
/// `congestion * gamma * sum_v x_iv (N_v - 1) + waiting * sum_v (1 - x_iv)`
/// where `N_v` counts the occupants of vertiport `v`.
pub fn occupancy_cost(scenario: &VertiportScenario, agent: usize, actions: &[usize]) -> f64 {
    let own = actions[agent];
    let mut congestion = 0.0;
    let mut yielded = 0.0;
    for v in 0..scenario.m {
        if own >> v & 1 == 1 {
            congestion += (occupancy_count(actions, v) - 1) as f64;
        } else {
            yielded += 1.0;
        }
    }
    scenario.congestion_penalty * scenario.gamma * congestion + scenario.waiting_penalty * yielded
}

/// Profile cap for [`build_game`]: scenarios beyond a million joint
/// profiles are refused rather than silently ground through.
pub const PROFILE_CAP: u64 = 1_000_000;

/// Materialize the scenario as a normal-form game with `2^m` actions per
/// agent and one cost table entry per joint profile.
pub fn build_game(scenario: &VertiportScenario) -> Result<Game, VertiportError> {
    scenario.validate()?;
    let profiles = (1u128 << scenario.m).checked_pow(scenario.n as u32);
    match profiles {
        Some(p) if p <= PROFILE_CAP as u128 => {}
        other => {
            return Err(VertiportError::TooLarge {
                profiles: other.unwrap_or(u128::MAX),
                cap: PROFILE_CAP,
            })
        }
    }

    let num_actions = scenario.actions_per_agent();
    let action_counts = vec![num_actions; scenario.n];
    let num_profiles = num_actions.pow(scenario.n as u32);
    let mut costs = vec![vec![0.0; num_profiles]; scenario.n];
    let mut actions = vec![0usize; scenario.n];
    for p in 0..num_profiles {
        // Lexicographic decoding, agent 0 most significant.
        let mut rest = p;
        for agent in (0..scenario.n).rev() {
            actions[agent] = rest % num_actions;
            rest /= num_actions;
        }
        for (agent, table) in costs.iter_mut().enumerate() {
            table[p] = occupancy_cost(scenario, agent, &actions);
        }
    }
    Ok(Game::new(action_counts, costs)?)
}

/// Per-agent noise levels drawn independently from `U(0, sigma_bound)`;
/// identically zero when `gamma = 1`.
pub fn sample_sigmas<R: Rng + ?Sized>(scenario: &VertiportScenario, rng: &mut R) -> Vec<f64> {
    let bound = scenario.sigma_bound();
    (0..scenario.n)
        .map(|_| if bound > 0.0 { rng.gen_range(0.0..bound) } else { 0.0 })
        .collect()
}

/// Inverse-noise weighting: agents whose cost estimates are noisier count
/// less toward the system objective. `w_i` is proportional to
/// `1 / max(sigma_i, WEIGHT_SIGMA_FLOOR)` and the weights sum to one.
pub fn weights_from_sigmas(sigmas: &[f64]) -> Result<SystemWeights, GameError> {
    let inv: Vec<f64> = sigmas
        .iter()
        .map(|s| 1.0 / s.max(WEIGHT_SIGMA_FLOOR))
        .collect();
    let total: f64 = inv.iter().sum();
    SystemWeights::new(inv.into_iter().map(|v| v / total).collect())
}
