//! Round robins and mirrored pairs.

use std::path::PathBuf;
use std::time::Duration;

use rayon::prelude::*;

use crate::play::{MatchConfig, MatchResult, RunError, Runner};
use crate::seeds::derive;
use crate::stats::{Crosstable, PairRecord, SeatReport};

#[derive(Debug, Clone)]
pub struct TournamentConfig {
    pub agents: Vec<String>,
    /// Games per pair.
    pub iterations: u32,
    pub seed: u64,
    pub turn_budget: Duration,
    /// Worker threads; 0 uses rayon's default.
    pub threads: usize,
    pub log_dir: Option<PathBuf>,
    pub watchdog: bool,
}

impl TournamentConfig {
    pub fn new(agents: &[&str], iterations: u32, seed: u64) -> Self {
        TournamentConfig {
            agents: agents.iter().map(|s| s.to_string()).collect(),
            iterations,
            seed,
            turn_budget: tribute_agents::sdk::DEFAULT_TURN_BUDGET,
            threads: 0,
            log_dir: None,
            watchdog: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TournamentResult {
    pub matches: Vec<MatchResult>,
    pub crosstable: Crosstable,
    pub seats: SeatReport,
}

/// Seed for game `iteration` of pair number `pair`. Consecutive iterations
/// share a seed and swap seats.
pub fn game_seed(base: u64, pair: usize, iteration: u32) -> u64 {
    derive(base, &[iteration as u64 / 2, pair as u64])
}

/// The game list of a round robin, in a fixed order.
pub fn schedule(config: &TournamentConfig) -> Vec<MatchConfig> {
    let mut out = Vec::new();
    let n = config.agents.len();
    let mut pair = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..config.iterations {
                let (a, b) = if k % 2 == 0 { (i, j) } else { (j, i) };
                let mut mc = MatchConfig::new(&config.agents[a], &config.agents[b], game_seed(config.seed, pair, k));
                mc.turn_budget = config.turn_budget;
                mc.log_dir = config.log_dir.clone();
                mc.watchdog = config.watchdog;
                out.push(mc);
            }
            pair += 1;
        }
    }
    out
}

pub fn run_round_robin(runner: &Runner, config: &TournamentConfig) -> Result<TournamentResult, RunError> {
    if config.agents.len() < 2 {
        return Err(RunError::TooFewAgents(config.agents.len()));
    }
    for name in &config.agents {
        if !tribute_agents::is_known(name) {
            return Err(tribute_agents::UnknownAgent(name.clone()).into());
        }
    }
    let games = schedule(config);
    let run = || games.par_iter().map(|g| runner.run_match(g)).collect::<Result<Vec<_>, _>>();
    let matches = if config.threads == 0 {
        run()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool");
        pool.install(run)?
    };
    let mut crosstable = Crosstable::new(&config.agents);
    let mut seats = SeatReport::default();
    for m in &matches {
        crosstable.add(m);
        seats.add(m);
    }
    Ok(TournamentResult { matches, crosstable, seats })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MirroredReport {
    /// Results from the first agent's point of view.
    pub record: PairRecord,
    pub seats: SeatReport,
    /// The first agent's win rate when it moved first, then second.
    pub a_as_first: f64,
    pub a_as_second: f64,
}

/// Plays `games` games between `a` and `b`: `games / 2` deals, each played
/// once from each seat. Runs on the calling thread.
pub fn run_mirrored_pair(
    runner: &Runner,
    a: &str,
    b: &str,
    games: u32,
    seed: u64,
    turn_budget: Duration,
) -> Result<MirroredReport, RunError> {
    let mut report = MirroredReport::default();
    let (mut first_wins, mut second_wins) = (0u32, 0u32);
    let deals = games / 2;
    for deal in 0..deals {
        let s = derive(seed, &[deal as u64]);
        for a_first in [true, false] {
            let mut mc = if a_first { MatchConfig::new(a, b, s) } else { MatchConfig::new(b, a, s) };
            mc.turn_budget = turn_budget;
            let r = runner.run_match(&mc)?;
            report.seats.add(&r);
            report.record.games += 1;
            let a_seat = if a_first { tribute_core::Seat::First } else { tribute_core::Seat::Second };
            match r.outcome.winner {
                Some(w) if w == a_seat => {
                    report.record.wins += 1;
                    if a_first {
                        first_wins += 1;
                    } else {
                        second_wins += 1;
                    }
                }
                Some(_) => report.record.losses += 1,
                None => report.record.draws += 1,
            }
        }
    }
    if deals > 0 {
        report.a_as_first = first_wins as f64 / deals as f64;
        report.a_as_second = second_wins as f64 / deals as f64;
    }
    Ok(report)
}
