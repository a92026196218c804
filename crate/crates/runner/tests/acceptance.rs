//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! non-zero if any fails.

mod support;

use std::fs;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_agents::policies::beam::beam_search;
use tribute_agents::policies::common::Scorer;
use tribute_agents::policies::flat_mc::sample_playout_move;
use tribute_agents::policies::mcts::mcts_search;
use tribute_agents::policies::random::random_policy;
use tribute_agents::{AgentSettings, Deadline, SearchConfig, TierList, WeightSet};
use tribute_core::{invariants, CardSet, InstanceId, MatchState, Move, NoEvents, PatronId, SeededGameState};
use tribute_runner::{confidence_interval, run_mirrored_pair, throughput_bench, Runner};

const BUDGET: Duration = Duration::from_secs(30);

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures += 1;
        }
    }
}

fn fuzz(cards: &Arc<CardSet>, matches: u64) -> (u64, u64, Option<String>) {
    let mut moves = 0;
    for seed in 0..matches {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut decks = PatronId::DRAFTABLE.to_vec();
        decks.shuffle(&mut rng);
        let picks = [decks[0], decks[1], decks[2], decks[3]];
        let mut state = MatchState::new(cards.clone(), picks, seed).expect("valid draft");
        if let Err(v) = invariants::check(&state) {
            return (seed, moves, Some(format!("seed {seed} at setup: {v}")));
        }
        while !state.is_finished() {
            let legal = state.legal_moves();
            if legal.is_empty() {
                return (seed, moves, Some(format!("seed {seed}: no legal moves in a live match")));
            }
            let mv = &legal[random_policy(&legal, &mut rng)];
            if let Err(e) = state.apply_move(mv, &mut NoEvents) {
                return (seed, moves, Some(format!("seed {seed}: legal move {mv} rejected: {e}")));
            }
            moves += 1;
            if let Err(v) = invariants::check(&state) {
                return (seed, moves, Some(format!("seed {seed} after {mv}: {v}")));
            }
        }
    }
    (matches, moves, None)
}

fn replay_logs(dir: &Path) -> std::io::Result<()> {
    let status = Command::new(env!("CARGO_BIN_EXE_tribute"))
        .args(["run", "--a1", "random", "--a2", "random", "--games", "100", "--seed", "20240611", "--log-dir"])
        .arg(dir)
        .stdout(std::process::Stdio::null())
        .status()?;
    if !status.success() {
        return Err(std::io::Error::other(format!("runner exited with {status}")));
    }
    Ok(())
}

fn determinism() -> Result<(usize, usize), String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    replay_logs(a.path()).map_err(|e| e.to_string())?;
    replay_logs(b.path()).map_err(|e| e.to_string())?;
    let mut names: Vec<_> = fs::read_dir(a.path())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.file_name()))
        .filter(|n| n.to_string_lossy().ends_with(".events"))
        .collect();
    names.sort();
    let mut bytes = 0;
    for name in &names {
        let x = fs::read(a.path().join(name)).map_err(|e| e.to_string())?;
        let y = fs::read(b.path().join(name)).map_err(|e| format!("{name:?} missing in second run: {e}"))?;
        if x != y {
            return Err(format!("{name:?} differs between runs"));
        }
        bytes += x.len();
    }
    Ok((names.len(), bytes))
}

fn strength(report: &mut Report, runner: &Runner) {
    let score = |a: &str, b: &str, seed: u64| {
        run_mirrored_pair(runner, a, b, 200, seed, BUDGET).expect("known agents").record.score()
    };
    let s = score("fully-random", "random", 11);
    report.line("strength: fully-random vs random < 5%", s < 0.05, format!("{:.1}% over 200 mirrored games", 100.0 * s));
    for agent in ["mcts", "beam-search", "decision-tree", "flat-mc", "max-prestige"] {
        let s = score(agent, "random", 12);
        report.line(
            &format!("strength: {agent} vs random >= 95%"),
            s >= 0.95,
            format!("{:.1}% over 200 mirrored games", 100.0 * s),
        );
    }
    for agent in ["mcts", "beam-search", "decision-tree"] {
        for opponent in ["patron-favors", "max-agent"] {
            let s = score(agent, opponent, 13);
            report.line(
                &format!("strength: {agent} vs {opponent} >= 60%"),
                s >= 0.60,
                format!("{:.1}% over 200 mirrored games", 100.0 * s),
            );
        }
    }
}

fn search_oracle(report: &mut Report, cards: &Arc<CardSet>) {
    let positions = support::oracle_positions(cards, 60, 300_000);
    let scorer = Scorer { weights: WeightSet::default(), tiers: TierList::from_card_set(cards) };
    let cfg = SearchConfig {
        mcts_iterations: 2_000_000,
        beam_width: 100_000,
        annealing_start: 0.0,
        ..SearchConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut mcts_ok, mut beam_ok) = (0, 0);
    let mut misses = Vec::new();
    for (n, (state, want, _)) in positions.iter().enumerate() {
        let legal = state.legal_moves();
        let root = SeededGameState::from_full_state(state.clone());
        let m = mcts_search(&root, &legal, &scorer, &cfg, Deadline::never());
        let b = beam_search(&root, &legal, &scorer, &cfg, &mut rng, Deadline::never());
        if m.root_move == *want {
            mcts_ok += 1;
        } else {
            misses.push(format!("mcts#{n}"));
        }
        if b.root_move == *want {
            beam_ok += 1;
        } else {
            misses.push(format!("beam#{n}"));
        }
    }
    let n = positions.len();
    report.line(
        "search oracle: mcts agrees with exhaustive own-turn search",
        mcts_ok == n && n >= 50,
        format!("{mcts_ok}/{n} positions {}", misses.iter().filter(|m| m.starts_with("mcts")).cloned().collect::<Vec<_>>().join(" ")),
    );
    report.line(
        "search oracle: beam agrees with exhaustive own-turn search",
        beam_ok == n && n >= 50,
        format!("{beam_ok}/{n} positions {}", misses.iter().filter(|m| m.starts_with("beam")).cloned().collect::<Vec<_>>().join(" ")),
    );
}

fn damping(samples: u32) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut ends = 0u32;
    let mut legal = Vec::new();
    for _ in 0..samples {
        let alternatives = rng.gen_range(2..=10);
        legal.clear();
        legal.extend((0..alternatives).map(|i| Move::PlayCard(InstanceId(i))));
        let at = rng.gen_range(0..=alternatives as usize);
        legal.insert(at, Move::EndTurn);
        if legal[sample_playout_move(&legal, SearchConfig::default().end_turn_probability, &mut rng)].is_end_turn() {
            ends += 1;
        }
    }
    ends as f64 / samples as f64
}

fn main() {
    let cards = Arc::new(CardSet::bundled());
    let runner = Runner::new(cards.clone(), Arc::new(AgentSettings::default()));
    let mut report = Report { failures: 0 };

    let t = Instant::now();
    let (done, moves, violation) = fuzz(&cards, 100_000);
    report.line(
        "fuzz: 100000 random-agent matches without invariant violations",
        violation.is_none(),
        violation.unwrap_or_else(|| format!("{done} matches, {moves} moves checked in {:.1}s", t.elapsed().as_secs_f64())),
    );

    match determinism() {
        Ok((files, bytes)) => report.line(
            "determinism: 100 seeded random matches replay byte-identically in a second process",
            files == 100,
            format!("{files} event logs, {bytes} bytes, identical"),
        ),
        Err(e) => report.line("determinism: 100 seeded random matches replay byte-identically in a second process", false, e),
    }

    let bench = throughput_bench(&Runner::default(), 1000, 3).expect("random agents exist");
    report.line(
        "throughput: 1000 random matches on one thread within 60s",
        bench.elapsed <= Duration::from_secs(60),
        format!("{:.2}s ({:.0} matches/s)", bench.elapsed.as_secs_f64(), bench.games_per_second()),
    );

    for (p, n, want) in [(0.627, 400, 4.7), (0.152, 400, 3.5), (0.565, 400, 4.9)] {
        let got: f64 = confidence_interval(p, n);
        report.line(
            &format!("confidence interval ({p}, {n}) = {want} +- 0.05"),
            (got - want).abs() <= 0.05,
            format!("{got:.3}"),
        );
    }

    strength(&mut report, &runner);
    search_oracle(&mut report, &cards);

    let seats = run_mirrored_pair(&runner, "beam-search", "mcts", 400, 21, BUDGET).expect("known agents");
    report.line(
        "seat advantage: 400 beam-search vs mcts games reported per seat",
        seats.seats.games == 400 && seats.seats.first_wins + seats.seats.second_wins + seats.seats.draws == 400,
        format!(
            "first seat {:.1}%, second seat {:.1}%, draws {}; beam-search {:.1}% moving first, {:.1}% moving second",
            100.0 * seats.seats.first_rate(),
            100.0 * seats.seats.second_rate(),
            seats.seats.draws,
            100.0 * seats.a_as_first,
            100.0 * seats.a_as_second
        ),
    );

    let f = damping(1_000_000);
    report.line(
        "flat-mc damping: END_TURN playout frequency 0.1% +- 0.03%",
        (f - 0.001).abs() <= 0.0003,
        format!("{:.4}% over 1000000 decisions", 100.0 * f),
    );

    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
}
