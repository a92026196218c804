//! Agents by name.

use std::sync::Arc;

use thiserror::Error;

use crate::config::AgentSettings;
use crate::policies::beam::BeamSearchAgent;
use crate::policies::decision_tree::DecisionTreeAgent;
use crate::policies::flat_mc::FlatMcAgent;
use crate::policies::max_agent::MaxAgentAgent;
use crate::policies::max_prestige::MaxPrestigeAgent;
use crate::policies::mcts::MctsAgent;
use crate::policies::patron_favors::PatronFavorsAgent;
use crate::policies::random::{FullyRandomAgent, RandomAgent};
use crate::sdk::Agent;

pub const AGENT_NAMES: [&str; 9] = [
    "random",
    "fully-random",
    "max-prestige",
    "patron-favors",
    "max-agent",
    "decision-tree",
    "flat-mc",
    "mcts",
    "beam-search",
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown agent `{0}` (known: {known})", known = AGENT_NAMES.join(", "))]
pub struct UnknownAgent(pub String);

pub fn is_known(name: &str) -> bool {
    AGENT_NAMES.contains(&name)
}

/// Builds a fresh agent for one match.
pub fn create_agent(name: &str, seed: u64, settings: &Arc<AgentSettings>) -> Result<Box<dyn Agent>, UnknownAgent> {
    let s = Arc::clone(settings);
    Ok(match name {
        "random" => Box::new(RandomAgent::new(seed)),
        "fully-random" => Box::new(FullyRandomAgent::new(seed)),
        "max-prestige" => Box::new(MaxPrestigeAgent::new(seed, s)),
        "patron-favors" => Box::new(PatronFavorsAgent::new(seed)),
        "max-agent" => Box::new(MaxAgentAgent::new(seed)),
        "decision-tree" => Box::new(DecisionTreeAgent::new()),
        "flat-mc" => Box::new(FlatMcAgent::new(seed, s)),
        "mcts" => Box::new(MctsAgent::new(seed, s)),
        "beam-search" => Box::new(BeamSearchAgent::new(seed, s)),
        other => return Err(UnknownAgent(other.to_string())),
    })
}
