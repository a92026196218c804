use std::fs;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tribute_agents::{AgentSettings, SearchConfig, WeightSet};
use tribute_core::CardSet;
use tribute_runner::{
    run_round_robin, throughput_bench, Crosstable, MatchConfig, Runner, SeatReport, TournamentConfig,
};

#[derive(Parser)]
#[command(name = "tribute", about = "Run matches and tournaments between tribute agents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play a series of games between two agents.
    Run {
        #[arg(long)]
        a1: String,
        #[arg(long)]
        a2: String,
        #[arg(long, default_value_t = 1)]
        games: u32,
        /// Also play every deal with the seats swapped.
        #[arg(long)]
        mirror: bool,
        /// Replay one match with exactly this match seed, as printed by an
        /// earlier run.
        #[arg(long, conflicts_with = "games")]
        match_seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Round robin between several agents.
    Tournament {
        #[arg(long, value_delimiter = ',', required = true)]
        agents: Vec<String>,
        /// Games per pair.
        #[arg(long, default_value_t = 10)]
        iterations: u32,
        /// Write the crosstable as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Time Random-vs-Random games on one thread.
    Bench {
        #[arg(long, default_value_t = 1000)]
        games: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// List registered agents.
    Agents,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-turn time budget for each agent.
    #[arg(long, default_value_t = 30_000)]
    turn_limit_ms: u64,
    #[arg(long)]
    log_dir: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[arg(long)]
    card_set: Option<PathBuf>,
    /// TOML file of heuristic weights.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// TOML file of search settings.
    #[arg(long)]
    search_config: Option<PathBuf>,
    /// Abandon agents that overrun their turn budget.
    #[arg(long)]
    watchdog: bool,
}

impl Common {
    fn runner(&self) -> Result<Runner> {
        let cards = match &self.card_set {
            Some(p) => CardSet::from_path(p).with_context(|| format!("loading {}", p.display()))?,
            None => CardSet::bundled(),
        };
        let mut settings = AgentSettings::default();
        if let Some(p) = &self.weights {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            settings.weights = WeightSet::from_toml(&text).with_context(|| format!("parsing {}", p.display()))?;
        }
        if let Some(p) = &self.search_config {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            settings.search = SearchConfig::from_toml(&text).with_context(|| format!("parsing {}", p.display()))?;
        }
        Ok(Runner::new(Arc::new(cards), Arc::new(settings)))
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { a1, a2, games, mirror, match_seed, common } => {
            for name in [&a1, &a2] {
                if !tribute_agents::is_known(name) {
                    bail!("unknown agent {name:?}; known: {}", tribute_agents::AGENT_NAMES.join(", "));
                }
            }
            let runner = common.runner()?;
            let mut table = Crosstable::new(&[a1.clone(), a2.clone()]);
            let mut seats = SeatReport::default();
            let seeds: Vec<u64> = match match_seed {
                Some(s) => vec![s],
                None => (0..games).map(|g| tribute_runner::seeds::derive(common.seed, &[g as u64])).collect(),
            };
            for seed in seeds {
                let orders: &[(&str, &str)] = if mirror { &[(&a1, &a2), (&a2, &a1)] } else { &[(&a1, &a2)] };
                for &(x, y) in orders {
                    let mut mc = MatchConfig::new(x, y, seed);
                    mc.turn_budget = Duration::from_millis(common.turn_limit_ms);
                    mc.log_dir = common.log_dir.clone();
                    mc.watchdog = common.watchdog;
                    let r = runner.run_match(&mc)?;
                    let winner = r.winner_name().unwrap_or("draw");
                    println!(
                        "seed={seed} p1={x} p2={y} winner={winner} reason={} turns={} time={:.3}s",
                        r.outcome.reason,
                        r.turns,
                        r.wall_time.as_secs_f64()
                    );
                    table.add(&r);
                    seats.add(&r);
                }
            }
            print!("\n{}", table.to_text());
            println!(
                "seat wins: p1 {:.1}%  p2 {:.1}%  draws {}",
                100.0 * seats.first_rate(),
                100.0 * seats.second_rate(),
                seats.draws
            );
        }
        Command::Tournament { agents, iterations, csv, common } => {
            let runner = common.runner()?;
            let config = TournamentConfig {
                agents,
                iterations,
                seed: common.seed,
                turn_budget: Duration::from_millis(common.turn_limit_ms),
                threads: common.threads,
                log_dir: common.log_dir.clone(),
                watchdog: common.watchdog,
            };
            let result = run_round_robin(&runner, &config)?;
            print!("{}", result.crosstable.to_text());
            println!();
            for (name, score) in result.crosstable.ranking() {
                println!("{name:<16} {:.1}%", 100.0 * score);
            }
            match csv {
                Some(path) => fs::write(&path, result.crosstable.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("\n{}", result.crosstable.to_csv()),
            }
        }
        Command::Bench { games, seed } => {
            let report = throughput_bench(&Runner::default(), games, seed)?;
            println!(
                "{} games in {:.2}s ({:.1} games/s, {:.1} turns/game)",
                report.games,
                report.elapsed.as_secs_f64(),
                report.games_per_second(),
                report.turns as f64 / report.games.max(1) as f64
            );
        }
        Command::Agents => {
            for name in tribute_agents::AGENT_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(())
}
