//! Running single matches.

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use thiserror::Error;
use tribute_agents::{
    create_agent, draft_patrons, Agent, AgentLog, AgentSettings, EndGameState, TimeBudget, UnknownAgent,
};
use tribute_core::{CardSet, EndReason, Event, MatchState, Move, Outcome, PatronId, PlayerView, Seat};

use crate::seeds::agent_seed;

#[derive(Debug, Clone)]
pub struct MatchConfig {
    /// Registry names, first seat first.
    pub agents: [String; 2],
    pub seed: u64,
    pub turn_budget: Duration,
    /// Directory for the event log and agent logs; nothing is written when unset.
    pub log_dir: Option<PathBuf>,
    /// Keep rendered event lines in the result.
    pub record_events: bool,
    /// Run each agent on its own thread and abandon it once its turn
    /// budget is gone, instead of waiting for it to return.
    pub watchdog: bool,
}

impl MatchConfig {
    pub fn new(first: &str, second: &str, seed: u64) -> Self {
        MatchConfig {
            agents: [first.to_string(), second.to_string()],
            seed,
            turn_budget: tribute_agents::sdk::DEFAULT_TURN_BUDGET,
            log_dir: None,
            record_events: false,
            watchdog: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AgentTiming {
    pub decisions: u32,
    pub total: Duration,
    pub longest: Duration,
}

#[derive(Debug, Clone)]
pub struct MatchResult {
    pub outcome: Outcome,
    pub agents: [String; 2],
    pub seed: u64,
    pub picks: Option<[PatronId; 4]>,
    pub turns: u32,
    pub wall_time: Duration,
    pub timing: [AgentTiming; 2],
    pub events: Option<Vec<String>>,
}

impl MatchResult {
    /// Registry name of the winner, if any.
    pub fn winner_name(&self) -> Option<&str> {
        self.outcome.winner.map(|s| self.agents[s.index()].as_str())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    UnknownAgent(#[from] UnknownAgent),
    #[error("a round robin needs at least two agents, got {0}")]
    TooFewAgents(usize),
    #[error("cannot write logs: {0}")]
    Io(#[from] std::io::Error),
}

/// Shared context for many matches.
#[derive(Debug, Clone)]
pub struct Runner {
    pub cards: Arc<CardSet>,
    pub settings: Arc<AgentSettings>,
}

impl Default for Runner {
    fn default() -> Self {
        Runner { cards: Arc::new(CardSet::bundled()), settings: Arc::new(AgentSettings::default()) }
    }
}

/// How the runner talks to an agent.
enum Seat2 {
    Direct(Box<dyn Agent>),
    Hosted(Host),
}

enum Request {
    Play(Box<PlayerView>, Vec<Move>, Duration),
    End(Box<EndGameState>),
}

struct Host {
    tx: mpsc::Sender<Request>,
    rx: mpsc::Receiver<Result<Move, ()>>,
}

impl Host {
    fn spawn(mut agent: Box<dyn Agent>) -> Host {
        let (req_tx, req_rx) = mpsc::channel::<Request>();
        let (res_tx, res_rx) = mpsc::channel();
        thread::spawn(move || {
            while let Ok(req) = req_rx.recv() {
                match req {
                    Request::Play(view, legal, remaining) => {
                        let res = catch_unwind(AssertUnwindSafe(|| agent.play(&view, &legal, remaining)));
                        if res_tx.send(res.map_err(|_| ())).is_err() {
                            return;
                        }
                    }
                    Request::End(result) => {
                        let _ = catch_unwind(AssertUnwindSafe(|| agent.game_end(&result)));
                        return;
                    }
                }
            }
        });
        Host { tx: req_tx, rx: res_rx }
    }
}

enum Decision {
    Move(Move),
    Crash,
    Timeout,
}

impl Seat2 {
    fn decide(&mut self, view: &PlayerView, legal: &[Move], budget: &TimeBudget) -> Decision {
        let remaining = budget.remaining();
        match self {
            Seat2::Direct(agent) => match catch_unwind(AssertUnwindSafe(|| agent.play(view, legal, remaining))) {
                Ok(mv) => Decision::Move(mv),
                Err(_) => Decision::Crash,
            },
            Seat2::Hosted(host) => {
                if host.tx.send(Request::Play(Box::new(view.clone()), legal.to_vec(), remaining)).is_err() {
                    return Decision::Crash;
                }
                match host.rx.recv_timeout(remaining + Duration::from_millis(1)) {
                    Ok(Ok(mv)) => Decision::Move(mv),
                    Ok(Err(())) => Decision::Crash,
                    Err(mpsc::RecvTimeoutError::Timeout) => Decision::Timeout,
                    Err(mpsc::RecvTimeoutError::Disconnected) => Decision::Crash,
                }
            }
        }
    }

    fn game_end(&mut self, result: EndGameState) {
        match self {
            Seat2::Direct(agent) => {
                let _ = catch_unwind(AssertUnwindSafe(|| agent.game_end(&result)));
            }
            Seat2::Hosted(host) => {
                let _ = host.tx.send(Request::End(Box::new(result)));
            }
        }
    }
}

/// Collects events and, when asked, their rendered lines.
struct Recorder {
    events: Vec<Event>,
}

impl tribute_core::EventSink for Recorder {
    fn emit(&mut self, event: Event) {
        self.events.push(event);
    }
}

impl Runner {
    pub fn new(cards: Arc<CardSet>, settings: Arc<AgentSettings>) -> Self {
        Runner { cards, settings }
    }

    /// Plays one match to the end.
    pub fn run_match(&self, config: &MatchConfig) -> Result<MatchResult, RunError> {
        let started = Instant::now();
        let seeds = [agent_seed(config.seed, 0), agent_seed(config.seed, 1)];
        let first = create_agent(&config.agents[0], seeds[0], &self.settings)?;
        let second = create_agent(&config.agents[1], seeds[1], &self.settings)?;
        self.run_with_agents(config, [first, second], started)
    }

    /// Plays one match between agents built by the caller. The names in
    /// `config.agents` are used for the result and log files only.
    pub fn run_match_with(&self, config: &MatchConfig, agents: [Box<dyn Agent>; 2]) -> Result<MatchResult, RunError> {
        self.run_with_agents(config, agents, Instant::now())
    }

    fn run_with_agents(
        &self,
        config: &MatchConfig,
        agents: [Box<dyn Agent>; 2],
        started: Instant,
    ) -> Result<MatchResult, RunError> {
        let seeds = [agent_seed(config.seed, 0), agent_seed(config.seed, 1)];
        let logs = [AgentLog::new(), AgentLog::new()];
        let mut agents = Vec::from(agents);
        for (agent, log) in agents.iter_mut().zip(&logs) {
            agent.attach_logger(log.clone());
        }
        let (a, b) = agents.split_at_mut(1);
        let draft = catch_unwind(AssertUnwindSafe(|| draft_patrons(a[0].as_mut(), b[0].as_mut())));
        let mut timing = [AgentTiming::default(); 2];
        let picks = match draft {
            Ok(Ok(picks)) => picks,
            Ok(Err(e)) => {
                let outcome = Outcome::win(e.seat.other(), EndReason::IllegalMove);
                return self.finish_without_match(config, outcome, started, &logs);
            }
            Err(_) => {
                // Without knowing who panicked, blame the first seat to pick.
                let outcome = Outcome::win(Seat::Second, EndReason::AgentCrash);
                return self.finish_without_match(config, outcome, started, &logs);
            }
        };
        let mut state = MatchState::new(self.cards.clone(), picks, config.seed).expect("draft yields a valid pick list");
        let mut seats: Vec<Seat2> = agents
            .into_iter()
            .map(|a| if config.watchdog { Seat2::Hosted(Host::spawn(a)) } else { Seat2::Direct(a) })
            .collect();
        let mut budgets = [TimeBudget::new(config.turn_budget), TimeBudget::new(config.turn_budget)];
        let mut recorder = Recorder { events: Vec::new() };
        let mut last_turn = [0u32; 2];
        while !state.is_finished() {
            let seat = state.current_seat();
            let i = seat.index();
            if last_turn[i] != state.turn() {
                last_turn[i] = state.turn();
                budgets[i].reset();
            }
            let view = state.view(seat);
            let legal = state.legal_moves();
            let t0 = Instant::now();
            let decision = seats[i].decide(&view, &legal, &budgets[i]);
            let spent = t0.elapsed();
            budgets[i].charge(spent);
            let t = &mut timing[i];
            t.decisions += 1;
            t.total += spent;
            t.longest = t.longest.max(spent);
            let mv = match decision {
                Decision::Crash => {
                    state.forfeit(seat, EndReason::AgentCrash);
                    break;
                }
                Decision::Timeout => {
                    state.forfeit(seat, EndReason::Timeout);
                    break;
                }
                Decision::Move(_) if budgets[i].is_overdrawn() => {
                    state.forfeit(seat, EndReason::Timeout);
                    break;
                }
                Decision::Move(mv) => mv,
            };
            if !legal.contains(&mv) {
                logs[i].log(format!("illegal move {mv}"));
                state.forfeit(seat, EndReason::IllegalMove);
                break;
            }
            state.apply_move(&mv, &mut recorder).expect("legal move applies");
        }
        if !matches!(recorder.events.last(), Some(Event::GameEnd { .. })) {
            recorder.events.push(Event::GameEnd { outcome: state.outcome().expect("match is over") });
        }
        let lines: Vec<String> = recorder.events.iter().map(|e| e.line(&self.cards)).collect();
        for seat in seats.iter_mut() {
            seat.game_end(EndGameState::new(&state, recorder.events.clone(), config.seed, seeds));
        }
        if let Some(dir) = &config.log_dir {
            write_logs(dir, config, &lines, &logs)?;
        }
        Ok(MatchResult {
            outcome: state.outcome().expect("match is over"),
            agents: config.agents.clone(),
            seed: config.seed,
            picks: Some(picks),
            turns: state.turn(),
            wall_time: started.elapsed(),
            timing,
            events: config.record_events.then_some(lines),
        })
    }

    fn finish_without_match(
        &self,
        config: &MatchConfig,
        outcome: Outcome,
        started: Instant,
        logs: &[AgentLog; 2],
    ) -> Result<MatchResult, RunError> {
        let lines = vec![Event::GameEnd { outcome }.line(&self.cards)];
        if let Some(dir) = &config.log_dir {
            write_logs(dir, config, &lines, logs)?;
        }
        Ok(MatchResult {
            outcome,
            agents: config.agents.clone(),
            seed: config.seed,
            picks: None,
            turns: 0,
            wall_time: started.elapsed(),
            timing: [AgentTiming::default(); 2],
            events: config.record_events.then_some(lines),
        })
    }
}

/// File stem used for a match's logs.
pub fn log_stem(config: &MatchConfig) -> String {
    format!("{}-vs-{}-seed{}", config.agents[0], config.agents[1], config.seed)
}

fn write_logs(dir: &PathBuf, config: &MatchConfig, lines: &[String], logs: &[AgentLog; 2]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let stem = log_stem(config);
    let mut out = fs::File::create(dir.join(format!("{stem}.events")))?;
    for line in lines {
        writeln!(out, "{line}")?;
    }
    for (i, log) in logs.iter().enumerate() {
        let text = log.lines();
        if !text.is_empty() {
            let mut f = fs::File::create(dir.join(format!("{stem}.p{}.log", i + 1)))?;
            for line in text {
                writeln!(f, "{line}")?;
            }
        }
    }
    Ok(())
}
