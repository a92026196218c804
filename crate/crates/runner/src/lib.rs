//! Match, tournament and benchmark running for tribute agents.

pub mod bench;
pub mod play;
pub mod seeds;
pub mod stats;
pub mod tournament;

pub use bench::{throughput_bench, BenchReport};
pub use play::{log_stem, AgentTiming, MatchConfig, MatchResult, RunError, Runner};
pub use stats::{confidence_interval, Crosstable, PairRecord, SeatReport};
pub use tournament::{run_mirrored_pair, run_round_robin, MirroredReport, TournamentConfig, TournamentResult};
