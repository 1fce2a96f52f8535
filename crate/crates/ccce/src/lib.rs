//! Chance-constrained correlated equilibria for multi-agent coordination.
//!
//! A mediator recommends a joint action drawn from a distribution over
//! action profiles. Classical correlated equilibria require that no agent
//! expects to gain by deviating from its recommendation; here each agent's
//! deviation incentive is additionally perturbed by zero-mean Gaussian
//! noise, and the incentive constraints are required to hold with a
//! configurable confidence level. Because the Gaussian chance constraints
//! admit exact deterministic equivalents, the whole problem stays a linear
//! program, and LP duality turns the binding incentive constraints into
//! interpretable sensitivities: which agent's uncertainty is costing the
//! system, and how much paying down that uncertainty would be worth.
//!
//! Module map:
//! - [`game`]: finite games in normal form, joint distributions, weights.
//! - [`gaussian`]: standard normal CDF/quantile machinery.
//! - [`lp`]: dense two-phase simplex with primal/dual certificates.
//! - [`solver`]: the chance-constrained equilibrium LP itself.
//! - [`analysis`]: shadow prices, confidence sweeps, information value.
//! - [`baselines`]: pure Nash enumeration and the noise-blind equilibrium.
//! - [`vertiport`]: the aerial-taxi congestion game used in experiments.
//! - [`montecarlo`]: seeded rollout experiments comparing coordinators.
//! - [`stats`]: small summary-statistics helpers for experiment tables.
//! - [`config`]: run configuration parsed from TOML.
//! - [`report`]: CSV writers with a fixed float format for reproducibility.

pub mod analysis;
pub mod baselines;
pub mod config;
pub mod game;
pub mod gaussian;
pub mod lp;
pub mod montecarlo;
pub mod report;
pub mod solver;
pub mod stats;
pub mod vertiport;

pub use game::{DeviationId, Game, GameError, JointDistribution, SystemWeights};
pub use gaussian::Confidence;
pub use solver::{CcceError, CcceSolution, ConstraintForm, UncertaintyModel};
