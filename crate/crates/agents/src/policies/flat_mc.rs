//! Flat Monte Carlo over short random playouts.

use std::sync::Arc;
use std::time::Duration;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_core::{Move, PatronId, PlayerView};

use super::common::{random_patron, turn_over, CachedLine, Scorer, Surprise};
use crate::config::AgentSettings;
use crate::sdk::{Agent, AgentLog, Deadline};

/// Picks a playout move: END_TURN with probability `end_turn_probability`
/// when anything else is legal, otherwise uniform over the other moves.
pub fn sample_playout_move(legal: &[Move], end_turn_probability: f64, rng: &mut impl Rng) -> usize {
    let end = legal.iter().position(Move::is_end_turn);
    match end {
        Some(e) if legal.len() > 1 => {
            if rng.gen_bool(end_turn_probability) {
                e
            } else {
                let k = rng.gen_range(0..legal.len() - 1);
                if k >= e {
                    k + 1
                } else {
                    k
                }
            }
        }
        _ => rng.gen_range(0..legal.len()),
    }
}

pub struct FlatMcAgent {
    rng: ChaCha8Rng,
    settings: Arc<AgentSettings>,
    scorer: Option<Scorer>,
    line: CachedLine,
    log: Option<AgentLog>,
}

impl FlatMcAgent {
    pub fn new(seed: u64, settings: Arc<AgentSettings>) -> Self {
        FlatMcAgent { rng: ChaCha8Rng::seed_from_u64(seed), settings, scorer: None, line: CachedLine::default(), log: None }
    }

    fn search(&mut self, view: &PlayerView, legal: &[Move], remaining: Duration) -> Move {
        let scorer = self.scorer.get_or_insert_with(|| Scorer::new(&self.settings, view));
        let cfg = &self.settings.search;
        let deadline = Deadline::after(cfg.decision_limit(remaining));
        let root = view.seeded(self.rng.next_u64());
        let seat = view.seat();
        let turn = root.turn();
        let mut best: Option<(f64, Vec<(Move, bool)>)> = None;
        let mut done = 0;
        for _ in 0..cfg.flat_mc_playouts.max(1) {
            if done > 0 && deadline.passed() {
                break;
            }
            done += 1;
            let mut state = root.clone();
            let mut line = Vec::new();
            loop {
                let moves = if line.is_empty() { legal.to_vec() } else { state.legal_moves() };
                let mv = moves[sample_playout_move(&moves, cfg.end_turn_probability, &mut self.rng)].clone();
                let mut probe = Surprise::default();
                state.apply_in_place(&mv, &mut probe).expect("playout move is legal");
                let stop = probe.0 || mv.is_end_turn() || turn_over(&state, seat, turn);
                line.push((mv, probe.0));
                if stop {
                    break;
                }
            }
            let value = scorer.score(&state, seat);
            if best.as_ref().is_none_or(|(b, _)| value > *b) {
                best = Some((value, line));
            }
        }
        let (value, line) = best.expect("at least one playout");
        if let Some(log) = &self.log {
            log.log(format!("flat-mc: {done} playouts, best {} value {value:.2}", line[0].0));
        }
        self.line.store(turn, &line);
        line[0].0.clone()
    }
}

impl Agent for FlatMcAgent {
    fn name(&self) -> &str {
        "flat-mc"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], remaining: Duration) -> Move {
        if legal.len() == 1 {
            self.line.clear();
            return legal[0].clone();
        }
        if let Some(mv) = self.line.next(view.state().turn(), legal) {
            return mv;
        }
        self.search(view, legal, remaining)
    }

    fn attach_logger(&mut self, log: AgentLog) {
        self.log = Some(log);
    }
}
