//! Monte Carlo tree search over the agent's own turn.
//!
//! Nodes keep the best value seen below them rather than the mean, and
//! selection runs UCT on those maxima, normalized to the range of values
//! seen so far. Playouts are greedy on the heuristic. A subtree whose
//! moves are all expanded and scored exactly is marked solved and never
//! selected again; once the root is solved the search stops.

use std::sync::Arc;
use std::time::Duration;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_core::{Move, PatronId, PlayerView, SeededGameState, Seat};

use super::common::{random_patron, step, turn_over, CachedLine, Scorer};
use crate::config::{AgentSettings, SearchConfig};
use crate::sdk::{Agent, AgentLog, Deadline};

struct Node {
    state: SeededGameState,
    /// Move from the parent, and whether it was surprising.
    edge: Option<(Move, bool)>,
    parent: Option<usize>,
    children: Vec<usize>,
    /// Moves not yet expanded, in reverse legal order, with their index in
    /// the legal list.
    untried: Vec<(usize, Move)>,
    /// Index of the move from the parent in the parent's legal list.
    move_index: usize,
    key: u64,
    visits: u32,
    value: f64,
    solved: bool,
}

/// Result of one search.
#[derive(Debug, Clone)]
pub struct MctsResult {
    /// Index into the root's legal moves.
    pub root_move: usize,
    pub value: f64,
    pub line: Vec<(Move, bool)>,
    pub iterations: usize,
    pub solved: bool,
}

/// Parent exploitation term under max backup: the best child value.
pub fn max_backup(children: &[f64]) -> f64 {
    children.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub struct Tree<'a> {
    nodes: Vec<Node>,
    scorer: &'a Scorer,
    seat: Seat,
    turn: u32,
    lo: f64,
    hi: f64,
    /// Best full line found through each root move.
    best_lines: Vec<Option<(f64, Vec<(Move, bool)>)>>,
}

impl<'a> Tree<'a> {
    pub fn new(root: &SeededGameState, legal: &[Move], scorer: &'a Scorer) -> Self {
        let mut untried: Vec<_> = legal.iter().cloned().enumerate().collect();
        untried.reverse();
        let node = Node {
            key: root.position_key(),
            move_index: 0,
            state: root.clone(),
            edge: None,
            parent: None,
            children: Vec::new(),
            untried,
            visits: 0,
            value: f64::NEG_INFINITY,
            solved: false,
        };
        Tree {
            nodes: vec![node],
            scorer,
            seat: root.current_seat(),
            turn: root.turn(),
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
            best_lines: vec![None; legal.len()],
        }
    }

    pub fn root_solved(&self) -> bool {
        self.nodes[0].solved
    }

    fn normalized(&self, v: f64) -> f64 {
        if v == f64::INFINITY {
            1.0
        } else if v == f64::NEG_INFINITY {
            0.0
        } else if self.hi > self.lo {
            (v - self.lo) / (self.hi - self.lo)
        } else {
            0.5
        }
    }

    fn note(&mut self, v: f64) {
        if v.is_finite() {
            self.lo = self.lo.min(v);
            self.hi = self.hi.max(v);
        }
    }

    fn select_child(&self, node: usize, c: f64) -> Option<usize> {
        let parent = &self.nodes[node];
        let ln = (parent.visits.max(1) as f64).ln();
        let mut best = None;
        let mut best_score = f64::NEG_INFINITY;
        for &child in &parent.children {
            let n = &self.nodes[child];
            if n.solved {
                continue;
            }
            let score = self.normalized(n.value) + c * (ln / n.visits.max(1) as f64).sqrt();
            if best.is_none() || score > best_score {
                best = Some(child);
                best_score = score;
            }
        }
        best
    }

    /// Greedy completion of the turn from `state`.
    fn playout(&self, state: &SeededGameState, line: &mut Vec<(Move, bool)>) -> f64 {
        let mut state = state.clone();
        loop {
            if turn_over(&state, self.seat, self.turn) {
                return self.scorer.score(&state, self.seat);
            }
            let mut best: Option<(f64, SeededGameState, Move, bool)> = None;
            for mv in state.legal_moves() {
                let (next, surprise) = step(&state, &mv);
                let v = self.scorer.score(&next, self.seat);
                if best.as_ref().is_none_or(|b| v > b.0) {
                    best = Some((v, next, mv, surprise));
                }
            }
            let (_, next, mv, surprise) = best.expect("live state has a legal move");
            line.push((mv, surprise));
            state = next;
        }
    }

    /// One select / expand / playout / backup cycle.
    pub fn iterate(&mut self, c: f64) {
        let mut node = 0;
        loop {
            if self.nodes[node].solved || !self.nodes[node].untried.is_empty() {
                break;
            }
            match self.select_child(node, c) {
                Some(child) => node = child,
                None => {
                    self.refresh_solved(node);
                    break;
                }
            }
        }
        let mut path = self.path_to(node);
        let (leaf, value) = if let Some((move_index, mv, state, surprise)) = self.expand_next(node) {
            path.push((mv.clone(), surprise));
            let over = turn_over(&state, self.seat, self.turn);
            let value = if over {
                self.scorer.score(&state, self.seat)
            } else {
                self.playout(&state, &mut path)
            };
            let untried = if over {
                Vec::new()
            } else {
                let mut m: Vec<_> = state.legal_moves().into_iter().enumerate().collect();
                m.reverse();
                m
            };
            let child = self.nodes.len();
            self.nodes.push(Node {
                key: state.position_key(),
                move_index,
                state,
                edge: Some((mv, surprise)),
                parent: Some(node),
                children: Vec::new(),
                untried,
                visits: 0,
                value: f64::NEG_INFINITY,
                solved: over,
            });
            self.nodes[node].children.push(child);
            (child, value)
        } else {
            // Solved or exhausted: nothing new to learn here.
            self.refresh_solved(node);
            (node, self.nodes[node].value)
        };
        self.note(value);
        if !path.is_empty() {
            let root_idx = self.root_index(leaf);
            let slot = &mut self.best_lines[root_idx];
            if slot.as_ref().is_none_or(|(v, _)| value > *v) {
                *slot = Some((value, path));
            }
        }
        let mut cur = Some(leaf);
        while let Some(i) = cur {
            let n = &mut self.nodes[i];
            n.visits += 1;
            n.value = n.value.max(value);
            if !n.solved {
                self.refresh_solved(i);
            }
            cur = self.nodes[i].parent;
        }
    }

    /// Pops untried moves of `node` until one reaches a position none of
    /// its expanded siblings has.
    fn expand_next(&mut self, node: usize) -> Option<(usize, Move, SeededGameState, bool)> {
        while let Some((index, mv)) = self.nodes[node].untried.pop() {
            let (state, surprise) = step(&self.nodes[node].state, &mv);
            let key = state.position_key();
            if !self.nodes[node].children.iter().any(|&c| self.nodes[c].key == key) {
                return Some((index, mv, state, surprise));
            }
        }
        None
    }

    fn refresh_solved(&mut self, i: usize) {
        let n = &self.nodes[i];
        if n.untried.is_empty() && n.children.iter().all(|&c| self.nodes[c].solved) {
            let exact = max_backup(&n.children.iter().map(|&c| self.nodes[c].value).collect::<Vec<_>>());
            let n = &mut self.nodes[i];
            n.solved = true;
            if !n.children.is_empty() {
                n.value = exact;
            }
        }
    }

    fn path_to(&self, mut node: usize) -> Vec<(Move, bool)> {
        let mut path = Vec::new();
        while let Some(edge) = &self.nodes[node].edge {
            path.push(edge.clone());
            node = self.nodes[node].parent.expect("non-root has a parent");
        }
        path.reverse();
        path
    }

    fn root_index(&self, mut node: usize) -> usize {
        while let Some(p) = self.nodes[node].parent {
            if p == 0 {
                return self.nodes[node].move_index;
            }
            node = p;
        }
        0
    }

    /// The root move with the highest value, as an index into the root's
    /// legal moves; ties go to the earliest.
    pub fn best(&self) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for &child in &self.nodes[0].children {
            let n = &self.nodes[child];
            if n.value > best.1 || (n.value == best.1 && n.move_index < best.0) {
                best = (n.move_index, n.value);
            }
        }
        best
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

pub fn mcts_search(
    root: &SeededGameState,
    legal: &[Move],
    scorer: &Scorer,
    cfg: &SearchConfig,
    deadline: Deadline,
) -> MctsResult {
    let mut tree = Tree::new(root, legal, scorer);
    let mut iterations = 0;
    while iterations < cfg.mcts_iterations.max(1) && !tree.root_solved() {
        if iterations > 0 && deadline.passed() {
            break;
        }
        tree.iterate(cfg.exploration);
        iterations += 1;
        // A decided win needs no more thought.
        if tree.best().1 == f64::INFINITY {
            break;
        }
    }
    let (root_move, value) = tree.best();
    let line = tree.best_lines[root_move]
        .as_ref()
        .map(|(_, l)| l.clone())
        .unwrap_or_else(|| vec![(legal[root_move].clone(), true)]);
    MctsResult { root_move, value, line, iterations, solved: tree.root_solved() }
}

pub struct MctsAgent {
    rng: ChaCha8Rng,
    settings: Arc<AgentSettings>,
    scorer: Option<Scorer>,
    line: CachedLine,
    log: Option<AgentLog>,
}

impl MctsAgent {
    pub fn new(seed: u64, settings: Arc<AgentSettings>) -> Self {
        MctsAgent { rng: ChaCha8Rng::seed_from_u64(seed), settings, scorer: None, line: CachedLine::default(), log: None }
    }
}

impl Agent for MctsAgent {
    fn name(&self) -> &str {
        "mcts"
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
        let result = mcts_search(&root, legal, scorer, cfg, Deadline::after(cfg.decision_limit(remaining)));
        if let Some(log) = &self.log {
            log.log(format!(
                "mcts: {} iterations{}, best {} value {:.2}",
                result.iterations,
                if result.solved { " (solved)" } else { "" },
                legal[result.root_move],
                result.value
            ));
        }
        self.line.store(turn, &result.line);
        legal[result.root_move].clone()
    }

    fn attach_logger(&mut self, log: AgentLog) {
        self.log = Some(log);
    }
}
