//! One human-vs-agent match, independent of any transport.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;
use tribute_agents::{create_agent, Agent, AgentLog, AgentSettings, EndGameState, TimeBudget, UnknownAgent};
use tribute_core::{CardSet, EndReason, Event, MatchState, Move, Outcome, PatronId, Seat};
use tribute_runner::seeds::agent_seed;

/// Who picks each draft slot.
pub const DRAFT_ORDER: [Seat; 4] = [Seat::First, Seat::Second, Seat::Second, Seat::First];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error(transparent)]
    UnknownAgent(#[from] UnknownAgent),
    #[error("the patron draft is still running")]
    Drafting,
    #[error("the patron draft is over")]
    NotDrafting,
    #[error("{0} is not available in the draft")]
    Unavailable(PatronId),
    #[error("it is not the human player's turn")]
    NotHumanTurn,
    #[error("it is not the agent's turn")]
    NotAgentTurn,
    #[error("illegal move {0}")]
    IllegalMove(Move),
    #[error("move index {0} is out of range")]
    BadIndex(usize),
    #[error("the match is over")]
    Finished,
}

/// One line of the match history.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HistoryEntry {
    pub seq: usize,
    pub line: String,
}

pub enum Phase {
    Draft { pool: Vec<PatronId>, picks: Vec<PatronId> },
    Playing(Box<MatchState>),
    /// Ended before a match existed (a bad pick by the agent).
    Aborted(Outcome),
}

pub struct Session {
    pub id: String,
    pub seed: u64,
    pub human: Seat,
    pub agent_name: String,
    cards: Arc<CardSet>,
    agent: Box<dyn Agent>,
    budget: TimeBudget,
    budget_turn: Option<u32>,
    phase: Phase,
    picks: Vec<PatronId>,
    moves: Vec<Move>,
    history: Vec<HistoryEntry>,
    log: AgentLog,
    ended_notified: bool,
}

impl Session {
    /// Creates the session and lets the agent make any draft picks that
    /// come before the human's first one.
    pub fn new(
        id: String,
        cards: Arc<CardSet>,
        settings: &Arc<AgentSettings>,
        agent_name: &str,
        human: Seat,
        seed: u64,
        budget: Duration,
    ) -> Result<Session, SessionError> {
        let mut agent = create_agent(agent_name, agent_seed(seed, human.other().index()), settings)?;
        let log = AgentLog::new();
        agent.attach_logger(log.clone());
        let mut s = Session {
            id,
            seed,
            human,
            agent_name: agent_name.to_string(),
            cards,
            agent,
            budget: TimeBudget::new(budget),
            budget_turn: None,
            phase: Phase::Draft { pool: PatronId::DRAFTABLE.to_vec(), picks: Vec::new() },
            picks: Vec::new(),
            moves: Vec::new(),
            history: Vec::new(),
            log,
            ended_notified: false,
        };
        s.advance_draft();
        Ok(s)
    }

    pub fn cards(&self) -> &Arc<CardSet> {
        &self.cards
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    pub fn state(&self) -> Option<&MatchState> {
        match &self.phase {
            Phase::Playing(s) => Some(s),
            _ => None,
        }
    }

    pub fn picks(&self) -> &[PatronId] {
        &self.picks
    }

    /// Moves applied so far, in order.
    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn agent_log(&self) -> Vec<String> {
        self.log.lines()
    }

    pub fn budget(&self) -> Duration {
        self.budget.allowance()
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match &self.phase {
            Phase::Draft { .. } => None,
            Phase::Playing(s) => s.outcome(),
            Phase::Aborted(o) => Some(*o),
        }
    }

    /// The seat whose draft pick is next, if the draft is running.
    pub fn next_picker(&self) -> Option<Seat> {
        match &self.phase {
            Phase::Draft { picks, .. } => DRAFT_ORDER.get(picks.len()).copied(),
            _ => None,
        }
    }

    /// The seat expected to act next, if any.
    pub fn to_act(&self) -> Option<Seat> {
        match &self.phase {
            Phase::Draft { .. } => self.next_picker(),
            Phase::Playing(s) if !s.is_finished() => Some(s.current_seat()),
            _ => None,
        }
    }

    pub fn pick_patron(&mut self, patron: PatronId) -> Result<Vec<HistoryEntry>, SessionError> {
        let start = self.history.len();
        let Phase::Draft { pool, picks } = &mut self.phase else {
            return Err(SessionError::NotDrafting);
        };
        if DRAFT_ORDER[picks.len()] != self.human {
            return Err(SessionError::NotHumanTurn);
        }
        let pos = pool.iter().position(|&p| p == patron).ok_or(SessionError::Unavailable(patron))?;
        pool.remove(pos);
        picks.push(patron);
        let line = format!("DRAFT seat={} patron={patron}", self.human);
        self.push(line);
        self.advance_draft();
        Ok(self.history[start..].to_vec())
    }

    fn advance_draft(&mut self) {
        loop {
            let Phase::Draft { pool, picks } = &mut self.phase else {
                return;
            };
            if picks.len() == DRAFT_ORDER.len() {
                let picks = [picks[0], picks[1], picks[2], picks[3]];
                let state = MatchState::new(self.cards.clone(), picks, self.seed).expect("draft yields four patrons");
                self.picks = picks.to_vec();
                self.phase = Phase::Playing(Box::new(state));
                return;
            }
            let seat = DRAFT_ORDER[picks.len()];
            if seat == self.human {
                return;
            }
            let round = if picks.len() < 2 { 1 } else { 2 };
            let available = pool.clone();
            let agent = &mut self.agent;
            let picked = catch_unwind(AssertUnwindSafe(|| agent.select_patron(&available, round)));
            let line = match picked {
                Ok(p) if available.contains(&p) => {
                    pool.retain(|&x| x != p);
                    picks.push(p);
                    format!("DRAFT seat={seat} patron={p}")
                }
                Ok(p) => {
                    self.phase = Phase::Aborted(Outcome::win(self.human, EndReason::IllegalMove));
                    format!("DRAFT seat={seat} patron={p} rejected")
                }
                Err(_) => {
                    self.phase = Phase::Aborted(Outcome::win(self.human, EndReason::AgentCrash));
                    format!("DRAFT seat={seat} crashed")
                }
            };
            self.push(line);
            if let Phase::Aborted(outcome) = self.phase {
                self.push(Event::GameEnd { outcome }.line(&self.cards));
                return;
            }
        }
    }

    fn push(&mut self, line: String) {
        let seq = self.history.len();
        self.history.push(HistoryEntry { seq, line });
    }

    fn playing(&mut self) -> Result<&mut MatchState, SessionError> {
        match &mut self.phase {
            Phase::Draft { .. } => Err(SessionError::Drafting),
            Phase::Aborted(_) => Err(SessionError::Finished),
            Phase::Playing(s) if s.is_finished() => Err(SessionError::Finished),
            Phase::Playing(s) => Ok(s),
        }
    }

    /// The human's `index`-th legal move.
    pub fn legal_move(&self, index: usize) -> Result<Move, SessionError> {
        let state = self.state().ok_or(SessionError::Drafting)?;
        state.legal_moves().get(index).cloned().ok_or(SessionError::BadIndex(index))
    }

    pub fn submit_move(&mut self, mv: &Move) -> Result<Vec<HistoryEntry>, SessionError> {
        let human = self.human;
        let state = self.playing()?;
        if state.current_seat() != human {
            return Err(SessionError::NotHumanTurn);
        }
        if !state.legal_moves().contains(mv) {
            return Err(SessionError::IllegalMove(mv.clone()));
        }
        Ok(self.apply(mv))
    }

    fn apply(&mut self, mv: &Move) -> Vec<HistoryEntry> {
        let start = self.history.len();
        let mut events = Vec::new();
        let Phase::Playing(state) = &mut self.phase else {
            unreachable!("apply is only called while playing");
        };
        state.apply_move(mv, &mut events).expect("move was checked");
        self.moves.push(mv.clone());
        for e in &events {
            let line = e.line(&self.cards);
            self.push(line);
        }
        self.notify_end();
        self.history[start..].to_vec()
    }

    fn forfeit(&mut self, seat: Seat, reason: EndReason) -> Vec<HistoryEntry> {
        let start = self.history.len();
        if let Phase::Playing(state) = &mut self.phase {
            state.forfeit(seat, reason);
            let outcome = state.outcome().expect("forfeit ends the match");
            let line = Event::GameEnd { outcome }.line(&self.cards);
            self.push(line);
        }
        self.notify_end();
        self.history[start..].to_vec()
    }

    fn notify_end(&mut self) {
        if self.ended_notified {
            return;
        }
        if let Phase::Playing(state) = &self.phase {
            if state.is_finished() {
                self.ended_notified = true;
                let events = Vec::new();
                let seeds = [agent_seed(self.seed, 0), agent_seed(self.seed, 1)];
                let end = EndGameState::new(state, events, self.seed, seeds);
                let agent = &mut self.agent;
                let _ = catch_unwind(AssertUnwindSafe(|| agent.game_end(&end)));
            }
        }
    }

    /// Asks the agent for exactly one move and applies it. A crash, an
    /// overdrawn budget or an illegal move forfeits the match.
    pub fn ai_step(&mut self) -> Result<Vec<HistoryEntry>, SessionError> {
        let ai = self.human.other();
        let state = self.playing()?;
        if state.current_seat() != ai {
            return Err(SessionError::NotAgentTurn);
        }
        let turn = state.turn();
        let view = state.view(ai);
        let legal = state.legal_moves();
        if self.budget_turn != Some(turn) {
            self.budget_turn = Some(turn);
            self.budget.reset();
        }
        let remaining = self.budget.remaining();
        let agent = &mut self.agent;
        let t0 = Instant::now();
        let picked = catch_unwind(AssertUnwindSafe(|| agent.play(&view, &legal, remaining)));
        self.budget.charge(t0.elapsed());
        Ok(match picked {
            Err(_) => self.forfeit(ai, EndReason::AgentCrash),
            Ok(_) if self.budget.is_overdrawn() => self.forfeit(ai, EndReason::Timeout),
            Ok(mv) if !legal.contains(&mv) => {
                self.log.log(format!("illegal move {mv}"));
                self.forfeit(ai, EndReason::IllegalMove)
            }
            Ok(mv) => self.apply(&mv),
        })
    }

    /// Steps the agent until its turn ends or the match does.
    pub fn ai_turn(&mut self) -> Result<Vec<HistoryEntry>, SessionError> {
        let ai = self.human.other();
        let turn = {
            let state = self.playing()?;
            if state.current_seat() != ai {
                return Err(SessionError::NotAgentTurn);
            }
            state.turn()
        };
        let mut out = Vec::new();
        loop {
            out.extend(self.ai_step()?);
            match &self.phase {
                Phase::Playing(s) if !s.is_finished() && s.current_seat() == ai && s.turn() == turn => {}
                _ => return Ok(out),
            }
        }
    }
}
