//! Run configuration: a TOML file describing the scenario, the uncertainty
//! model, and the experiment shape, shared by every CLI subcommand.
//!
//! Unknown keys are rejected by name so that a typo fails loudly instead of
//! silently falling back to a default.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::montecarlo::TrialConfig;
use crate::solver::ConstraintForm;
use crate::vertiport::VertiportScenario;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read configuration: {0}")]
    Io(#[from] std::io::Error),
    /// Parse errors name the offending key and location.
    #[error("cannot parse configuration: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Constraint-form names accepted in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormName {
    Constant,
    Conditional,
}

impl FormName {
    pub fn to_form(self) -> ConstraintForm {
        match self {
            FormName::Constant => ConstraintForm::ConstantMargin,
            FormName::Conditional => ConstraintForm::ConditionalScaled,
        }
    }
}

/// The landing-slot scenario block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Number of agents.
    pub n: usize,
    /// Number of vertiports.
    pub m: usize,
    /// Congestion amplification factor (>= 1).
    pub gamma: f64,
    /// Master seed for every random draw of the run.
    pub seed: u64,
    pub congestion_penalty: Option<f64>,
    pub waiting_penalty: Option<f64>,
}

/// The uncertainty block. `alpha` selects a single confidence level,
/// `alpha_grid` a sweep; explicit `sigmas` replace the seeded draw.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UncertaintyConfig {
    pub alpha: Option<f64>,
    pub alpha_grid: Option<Vec<f64>>,
    pub form: FormName,
    pub sigmas: Option<Vec<f64>>,
}

impl Default for UncertaintyConfig {
    fn default() -> Self {
        UncertaintyConfig {
            alpha: None,
            alpha_grid: None,
            form: FormName::Constant,
            sigmas: None,
        }
    }
}

/// The experiment block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub samples_per_trial: usize,
    pub k_acquire: usize,
    /// Per-deviation penalty used by the effective-cost curve.
    pub c_dev: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            trials: 50,
            samples_per_trial: 1,
            k_acquire: 5,
            c_dev: 10.0,
        }
    }
}

/// A full run configuration.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Output directory for report files; CLI `--out` overrides it.
    pub out_dir: Option<PathBuf>,
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub uncertainty: UncertaintyConfig,
    #[serde(default)]
    pub experiment: ExperimentConfig,
}

/// The default confidence level used when neither `alpha` nor
/// `alpha_grid` is configured.
pub const DEFAULT_ALPHA: f64 = 0.9;

/// The default sweep grid used when `alpha_grid` is not configured.
pub const DEFAULT_ALPHA_GRID: [f64; 6] = [0.75, 0.80, 0.85, 0.90, 0.95, 0.99];

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: RunConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.scenario()?.validate().map_err(to_invalid)?;
        if let Some(a) = self.uncertainty.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(ConfigError::Invalid(format!(
                    "alpha must lie strictly inside (0, 1), got {a}"
                )));
            }
        }
        if let Some(grid) = &self.uncertainty.alpha_grid {
            if grid.is_empty()
                || grid.windows(2).any(|w| w[0] >= w[1])
                || grid.iter().any(|&a| !(a > 0.0 && a < 1.0))
            {
                return Err(ConfigError::Invalid(
                    "alpha_grid must be nonempty, strictly increasing, and inside (0, 1)".into(),
                ));
            }
        }
        if let Some(sigmas) = &self.uncertainty.sigmas {
            if sigmas.len() != self.scenario.n {
                return Err(ConfigError::Invalid(format!(
                    "sigmas has {} entries but the scenario has {} agents",
                    sigmas.len(),
                    self.scenario.n
                )));
            }
            if let Some(bad) = sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
                return Err(ConfigError::Invalid(format!(
                    "sigmas entries must be finite and nonnegative, got {bad}"
                )));
            }
        }
        if !(self.experiment.c_dev.is_finite() && self.experiment.c_dev >= 0.0) {
            return Err(ConfigError::Invalid(format!(
                "c_dev must be finite and nonnegative, got {}",
                self.experiment.c_dev
            )));
        }
        self.trial_config().map(|_| ())
    }

    pub fn scenario(&self) -> Result<VertiportScenario, ConfigError> {
        let mut scenario = VertiportScenario::new(
            self.scenario.n,
            self.scenario.m,
            self.scenario.gamma,
            self.scenario.seed,
        )
        .map_err(to_invalid)?;
        if let Some(c) = self.scenario.congestion_penalty {
            scenario.congestion_penalty = c;
        }
        if let Some(w) = self.scenario.waiting_penalty {
            scenario.waiting_penalty = w;
        }
        scenario.validate().map_err(to_invalid)?;
        Ok(scenario)
    }

    /// Single confidence level: `alpha`, else the first grid entry, else
    /// the default.
    pub fn single_alpha(&self) -> f64 {
        self.uncertainty
            .alpha
            .or_else(|| self.uncertainty.alpha_grid.as_ref().map(|g| g[0]))
            .unwrap_or(DEFAULT_ALPHA)
    }

    /// Sweep grid: `alpha_grid`, else the singleton `alpha`, else the
    /// default grid.
    pub fn alpha_grid(&self) -> Vec<f64> {
        if let Some(grid) = &self.uncertainty.alpha_grid {
            grid.clone()
        } else if let Some(a) = self.uncertainty.alpha {
            vec![a]
        } else {
            DEFAULT_ALPHA_GRID.to_vec()
        }
    }

    pub fn form(&self) -> ConstraintForm {
        self.uncertainty.form.to_form()
    }

    pub fn trial_config(&self) -> Result<TrialConfig, ConfigError> {
        let config = TrialConfig {
            trials: self.experiment.trials,
            samples_per_trial: self.experiment.samples_per_trial,
            alpha_grid: self.alpha_grid(),
            seed: self.scenario.seed,
            form: self.form(),
            k_acquire: self.experiment.k_acquire,
        };
        config.validate().map_err(to_invalid)?;
        Ok(config)
    }
}

fn to_invalid<E: std::fmt::Display>(e: E) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}
