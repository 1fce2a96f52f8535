//! Baseline coordinators the equilibrium plans are compared against:
//! uncoordinated play (a pure Nash equilibrium picked at random) and an
//! uncertainty-blind correlated equilibrium.

use rand::Rng;
use thiserror::Error;

use crate::game::{Game, SystemWeights};
use crate::solver::{self, CcceError, CcceSolution, UncertaintyModel};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("the game has no pure Nash equilibrium")]
    NoPureNash,
}

/// Every pure-strategy Nash equilibrium of a game, as profile indices in
/// lexicographic order (no duplicates by construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureNashSet {
    profiles: Vec<usize>,
}

impl PureNashSet {
    pub fn profiles(&self) -> &[usize] {
        &self.profiles
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, profile: usize) -> bool {
        self.profiles.binary_search(&profile).is_ok()
    }
}

/// Brute-force enumeration: a profile is kept when no agent can strictly
/// lower its own cost by a unilateral action change.
pub fn pure_nash_equilibria(game: &Game) -> PureNashSet {
    let mut profiles = Vec::new();
    'profiles: for p in game.profiles() {
        let actions = game.profile_actions(p);
        for agent in 0..game.num_agents() {
            let current = game.cost(agent, p);
            let stride = game.stride(agent) as isize;
            for alt in 0..game.action_count(agent) {
                if alt == actions[agent] {
                    continue;
                }
                let shift = (alt as isize - actions[agent] as isize) * stride;
                let alt_cost = game.cost(agent, (p as isize + shift) as usize);
                if alt_cost < current {
                    continue 'profiles;
                }
            }
        }
        profiles.push(p);
    }
    PureNashSet { profiles }
}

/// Uniform pick of one equilibrium; reproducible from the caller's rng.
pub fn select_ne<R: Rng + ?Sized>(set: &PureNashSet, rng: &mut R) -> Result<usize, BaselineError> {
    if set.is_empty() {
        return Err(BaselineError::NoPureNash);
    }
    Ok(set.profiles[rng.gen_range(0..set.len())])
}

/// The uncertainty-blind plan: the coordination program with all noise
/// levels at zero, i.e. the classical optimal correlated equilibrium.
pub fn naive_ce(game: &Game, weights: &SystemWeights) -> Result<CcceSolution, CcceError> {
    solver::solve_ccce(game, &UncertaintyModel::noise_free(game.num_agents()), weights)
}
