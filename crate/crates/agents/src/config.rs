//! Tunables for the search-based agents.

use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::heuristic::WeightsError;
use crate::tiers::TierError;
use crate::WeightSet;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// States kept per depth by beam search.
    pub beam_width: usize,
    /// Depth at which unfinished beam lines are scored as they stand.
    pub beam_max_depth: usize,
    /// Probability of keeping a lower-ranked state at depth 0.
    pub annealing_start: f64,
    /// Per-depth multiplier applied to `annealing_start`.
    pub annealing_decay: f64,
    /// UCT exploration constant.
    pub exploration: f64,
    pub mcts_iterations: usize,
    pub flat_mc_playouts: usize,
    /// Chance a playout ends the turn while other moves exist.
    pub end_turn_probability: f64,
    /// Hard cap on one decision, applied on top of the turn budget.
    pub time_cap_ms: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            beam_width: 40,
            beam_max_depth: 60,
            annealing_start: 0.05,
            annealing_decay: 0.9,
            exploration: std::f64::consts::SQRT_2,
            mcts_iterations: 300,
            flat_mc_playouts: 200,
            end_turn_probability: 0.001,
            time_cap_ms: 5_000,
        }
    }
}

impl SearchConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Time allowed for one decision given what is left of the turn.
    pub fn decision_limit(&self, remaining: Duration) -> Duration {
        Duration::from_millis(self.time_cap_ms).min(remaining / 2)
    }

    pub fn annealing(&self, depth: usize) -> f64 {
        self.annealing_start * self.annealing_decay.powi(depth as i32)
    }
}

/// Shared configuration handed to every agent built by the registry.
#[derive(Debug, Clone, Default)]
pub struct AgentSettings {
    pub weights: WeightSet,
    pub search: SearchConfig,
    /// `card_id = tier` overrides applied over the card set's own tiers.
    pub tier_overrides: Option<String>,
}

#[derive(Debug, Error)]
pub enum SettingsError {
    #[error(transparent)]
    Weights(#[from] WeightsError),
    #[error("invalid search config: {0}")]
    Search(#[from] toml::de::Error),
    #[error(transparent)]
    Tiers(#[from] TierError),
}
