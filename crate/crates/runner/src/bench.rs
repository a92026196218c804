//! Single-thread throughput measurement.

use std::time::{Duration, Instant};

use crate::play::{MatchConfig, RunError, Runner};
use crate::seeds::derive;

#[derive(Debug, Clone, Copy)]
pub struct BenchReport {
    pub games: u32,
    pub elapsed: Duration,
    pub turns: u64,
}

impl BenchReport {
    pub fn games_per_second(&self) -> f64 {
        self.games as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

/// Plays `games` Random-vs-Random matches back to back on this thread.
pub fn throughput_bench(runner: &Runner, games: u32, seed: u64) -> Result<BenchReport, RunError> {
    let start = Instant::now();
    let mut turns = 0u64;
    for g in 0..games {
        let r = runner.run_match(&MatchConfig::new("random", "random", derive(seed, &[g as u64])))?;
        turns += r.turns as u64;
    }
    Ok(BenchReport { games, elapsed: start.elapsed(), turns })
}
