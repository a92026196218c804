//! The contract between agents and whatever drives a match.

use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use thiserror::Error;
use tribute_core::{Event, MatchState, Move, Outcome, PatronId, PlayerView, RulesError, SeededGameState, Seat};

/// Default per-turn thinking allowance.
pub const DEFAULT_TURN_BUDGET: Duration = Duration::from_secs(30);

/// A game-playing agent. One instance plays one match.
pub trait Agent: Send {
    fn name(&self) -> &str;

    /// Picks a patron deck from `available`. Called twice per match;
    /// `round` is 1 or 2.
    fn select_patron(&mut self, available: &[PatronId], round: u8) -> PatronId;

    /// Chooses one of `legal`. `remaining` is what is left of this turn's
    /// time budget.
    fn play(&mut self, view: &PlayerView, legal: &[Move], remaining: Duration) -> Move;

    fn game_end(&mut self, _result: &EndGameState) {}

    /// Hands the agent a sink for free-form debug text.
    fn attach_logger(&mut self, _log: AgentLog) {}
}

/// Shared, append-only text buffer an agent may write to at any time.
#[derive(Debug, Clone, Default)]
pub struct AgentLog(Arc<Mutex<Vec<String>>>);

impl AgentLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn log(&self, text: impl Into<String>) {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).push(text.into());
    }

    pub fn lines(&self) -> Vec<String> {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn len(&self) -> usize {
        self.0.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Removes and returns everything logged so far.
    pub fn drain(&self) -> Vec<String> {
        std::mem::take(&mut *self.0.lock().unwrap_or_else(|e| e.into_inner()))
    }
}

/// Everything an agent is told once the match is over.
#[derive(Debug, Clone)]
pub struct EndGameState {
    pub outcome: Outcome,
    pub final_views: [PlayerView; 2],
    pub events: Vec<Event>,
    pub turns: u32,
    pub match_seed: u64,
    pub agent_seeds: [u64; 2],
}

impl EndGameState {
    pub fn new(state: &MatchState, events: Vec<Event>, match_seed: u64, agent_seeds: [u64; 2]) -> Self {
        let outcome = state.outcome().unwrap_or_else(Outcome::draw);
        EndGameState {
            outcome,
            final_views: [state.view(Seat::First), state.view(Seat::Second)],
            events,
            turns: state.turn(),
            match_seed,
            agent_seeds,
        }
    }
}

/// Per-turn time accounting for one agent.
#[derive(Debug, Clone, Copy)]
pub struct TimeBudget {
    allowance: Duration,
    consumed: Duration,
}

impl TimeBudget {
    pub fn new(allowance: Duration) -> Self {
        TimeBudget { allowance, consumed: Duration::ZERO }
    }

    pub fn allowance(&self) -> Duration {
        self.allowance
    }

    pub fn consumed(&self) -> Duration {
        self.consumed
    }

    pub fn remaining(&self) -> Duration {
        self.allowance.saturating_sub(self.consumed)
    }

    pub fn is_overdrawn(&self) -> bool {
        self.consumed > self.allowance
    }

    pub fn charge(&mut self, spent: Duration) {
        self.consumed += spent;
    }

    /// Called at each of the agent's turn starts.
    pub fn reset(&mut self) {
        self.consumed = Duration::ZERO;
    }
}

impl Default for TimeBudget {
    fn default() -> Self {
        TimeBudget::new(DEFAULT_TURN_BUDGET)
    }
}

/// A wall-clock cut-off for anytime searches.
#[derive(Debug, Clone, Copy)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn after(limit: Duration) -> Self {
        Deadline(Instant::now().checked_add(limit))
    }

    pub fn never() -> Self {
        Deadline(None)
    }

    pub fn passed(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{seat} picked {picked}, which is not available")]
pub struct DraftError {
    pub seat: Seat,
    pub picked: PatronId,
}

/// Runs the patron draft. Picks go first, second, second, first; the
/// result is in pick order.
pub fn draft_patrons(first: &mut dyn Agent, second: &mut dyn Agent) -> Result<[PatronId; 4], DraftError> {
    let mut pool = PatronId::DRAFTABLE.to_vec();
    let order = [(Seat::First, 1), (Seat::Second, 1), (Seat::Second, 2), (Seat::First, 2)];
    let mut picks = [PatronId::Treasury; 4];
    for (slot, (seat, round)) in order.into_iter().enumerate() {
        let agent: &mut dyn Agent = if seat == Seat::First { &mut *first } else { &mut *second };
        let picked = agent.select_patron(&pool, round);
        let Some(pos) = pool.iter().position(|&p| p == picked) else {
            return Err(DraftError { seat, picked });
        };
        picks[slot] = pool.remove(pos);
    }
    Ok(picks)
}

/// Applies `mv` to a copy of `state`.
pub fn simulate(state: &SeededGameState, mv: &Move) -> Result<(SeededGameState, Vec<Event>), RulesError> {
    state.simulate(mv)
}
