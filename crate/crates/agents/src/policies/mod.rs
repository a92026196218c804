pub mod beam;
pub mod common;
pub mod decision_tree;
pub mod flat_mc;
pub mod max_agent;
pub mod max_prestige;
pub mod mcts;
pub mod patron_favors;
pub mod random;
