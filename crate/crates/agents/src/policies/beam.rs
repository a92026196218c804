//! Layered beam search over the agent's own turn.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::Duration;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_core::{Move, PatronId, PlayerView, SeededGameState};

use super::common::{random_patron, step, turn_over, CachedLine, Scorer};
use crate::config::{AgentSettings, SearchConfig};
use crate::sdk::{Agent, AgentLog, Deadline};

/// Result of one beam search.
#[derive(Debug, Clone)]
pub struct BeamResult {
    /// Index into the root's legal moves.
    pub root_move: usize,
    pub value: f64,
    /// Best complete line, with a flag per move for hidden information
    /// revealed or a choice opened.
    pub line: Vec<(Move, bool)>,
    pub expanded: usize,
}

struct Entry {
    state: SeededGameState,
    root: usize,
    line: Vec<(Move, bool)>,
}

/// Searches the rest of the current turn from `root`. Lines end when the
/// turn does; unfinished lines at `beam_max_depth` are scored as they
/// stand. Equal values go to the lowest root move index.
pub fn beam_search(
    root: &SeededGameState,
    legal: &[Move],
    scorer: &Scorer,
    cfg: &SearchConfig,
    rng: &mut impl Rng,
    deadline: Deadline,
) -> BeamResult {
    let seat = root.current_seat();
    let turn = root.turn();
    let mut best: Option<BeamResult> = None;
    let mut expanded = 0;
    let offer = |best: &mut Option<BeamResult>, value: f64, root: usize, line: &[(Move, bool)]| {
        let better = match best {
            None => true,
            Some(b) => value > b.value || (value == b.value && root < b.root_move),
        };
        if better {
            *best = Some(BeamResult { root_move: root, value, line: line.to_vec(), expanded: 0 });
        }
    };
    let mut frontier = vec![Entry { state: root.clone(), root: 0, line: Vec::new() }];
    for depth in 0..cfg.beam_max_depth.max(1) {
        let mut candidates: Vec<(f64, Entry)> = Vec::new();
        for entry in &frontier {
            let moves = if depth == 0 { legal.to_vec() } else { entry.state.legal_moves() };
            for (i, mv) in moves.into_iter().enumerate() {
                let (next, surprise) = step(&entry.state, &mv);
                expanded += 1;
                let root_idx = if depth == 0 { i } else { entry.root };
                let mut line = entry.line.clone();
                line.push((mv, surprise));
                let value = scorer.score(&next, seat);
                if turn_over(&next, seat, turn) {
                    offer(&mut best, value, root_idx, &line);
                } else {
                    candidates.push((value, Entry { state: next, root: root_idx, line }));
                }
            }
        }
        if candidates.is_empty() {
            frontier.clear();
            break;
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.root.cmp(&b.1.root)));
        dedup_transpositions(&mut candidates);
        let width = cfg.beam_width.max(1);
        if candidates.len() > width {
            let p = cfg.annealing(depth);
            if p > 0.0 {
                for i in 0..width {
                    if rng.gen_bool(p.min(1.0)) {
                        let j = rng.gen_range(width..candidates.len());
                        candidates.swap(i, j);
                    }
                }
            }
            candidates.truncate(width);
        }
        if deadline.passed() && best.is_some() {
            frontier.clear();
            break;
        }
        frontier = candidates.into_iter().map(|(_, e)| e).collect();
    }
    for entry in frontier {
        let value = scorer.score(&entry.state, seat);
        offer(&mut best, value, entry.root, &entry.line);
    }
    let mut result = best.expect("root has at least one legal move");
    result.expanded = expanded;
    result
}

/// Drops candidates whose position matches an earlier (better or equal)
/// one, so move orders reaching the same position take one beam slot.
fn dedup_transpositions(candidates: &mut Vec<(f64, Entry)>) {
    let mut seen = HashSet::with_capacity(candidates.len());
    candidates.retain(|(_, e)| seen.insert(e.state.position_key()));
}

pub struct BeamSearchAgent {
    rng: ChaCha8Rng,
    settings: Arc<AgentSettings>,
    scorer: Option<Scorer>,
    line: CachedLine,
    log: Option<AgentLog>,
}

impl BeamSearchAgent {
    pub fn new(seed: u64, settings: Arc<AgentSettings>) -> Self {
        BeamSearchAgent {
            rng: ChaCha8Rng::seed_from_u64(seed),
            settings,
            scorer: None,
            line: CachedLine::default(),
            log: None,
        }
    }
}

impl Agent for BeamSearchAgent {
    fn name(&self) -> &str {
        "beam-search"
    }

    fn select_patron(&mut self, available: &[PatronId], _round: u8) -> PatronId {
        random_patron(available, &mut self.rng)
    }

    fn play(&mut self, view: &PlayerView, legal: &[Move], remaining: Duration) -> Move {
        if legal.len() == 1 {
            self.line.clear();
            return legal[0].clone();
        }
        let turn = view.state().turn();
        if let Some(mv) = self.line.next(turn, legal) {
            return mv;
        }
        let scorer = self.scorer.get_or_insert_with(|| Scorer::new(&self.settings, view));
        let cfg = &self.settings.search;
        let root = view.seeded(self.rng.next_u64());
        let deadline = Deadline::after(cfg.decision_limit(remaining));
        let result = beam_search(&root, legal, scorer, cfg, &mut self.rng, deadline);
        if let Some(log) = &self.log {
            log.log(format!(
                "beam-search: {} states, best {} value {:.2}",
                result.expanded, legal[result.root_move], result.value
            ));
        }
        self.line.store(turn, &result.line);
        legal[result.root_move].clone()
    }

    fn attach_logger(&mut self, log: AgentLog) {
        self.log = Some(log);
    }
}
