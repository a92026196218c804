//! Agents for the tribute rules engine: the [`Agent`] contract, a
//! weighted heuristic, and the baseline policies.
//!
//! Scoring is generic over the float type; the crate-level aliases fix it
//! to `f64`.

pub mod config;
pub mod heuristic;
pub mod policies;
pub mod registry;
pub mod sdk;
pub mod tiers;

pub use config::{AgentSettings, SearchConfig, SettingsError};
pub use heuristic::{evaluate, features, Features, Weights, WeightsError, EARLY_GAME_PRESTIGE};
pub use registry::{create_agent, is_known, UnknownAgent, AGENT_NAMES};
pub use sdk::{draft_patrons, simulate, Agent, AgentLog, Deadline, DraftError, EndGameState, TimeBudget};
pub use tiers::{TierList, TIER_VALUES};

pub type WeightSet = Weights<f64>;
pub type FeatureSet = Features<f64>;

/// The weight file shipped with the crate.
pub const DEFAULT_WEIGHTS_TOML: &str = include_str!("../data/weights.toml");
