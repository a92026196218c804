//! JSON payloads. Every top-level body carries `version`.

use serde::{Deserialize, Serialize};
use tribute_core::{CardInstance, CardKind, Endgame, Favor, MatchState, Move, Outcome, PatronId, PendingChoice, Seat};

use crate::session::{HistoryEntry, Phase, Session};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeatName {
    #[serde(alias = "p1")]
    First,
    #[serde(alias = "p2")]
    Second,
}

impl From<SeatName> for Seat {
    fn from(s: SeatName) -> Seat {
        match s {
            SeatName::First => Seat::First,
            SeatName::Second => Seat::Second,
        }
    }
}

impl From<Seat> for SeatName {
    fn from(s: Seat) -> SeatName {
        match s {
            Seat::First => SeatName::First,
            Seat::Second => SeatName::Second,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    pub agent: String,
    pub human_seat: SeatName,
    /// Random when omitted; the response reports the one used.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Agent time per turn in milliseconds.
    #[serde(default)]
    pub budget_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DraftPick {
    pub patron: PatronId,
}

/// Either an index into the snapshot's `legal_moves`, or the move itself.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubmitMove {
    #[serde(default)]
    pub index: Option<usize>,
    #[serde(default, rename = "move")]
    pub mv: Option<Move>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CardView {
    pub instance: u32,
    pub id: String,
    pub name: String,
    pub deck: PatronId,
    pub kind: CardKind,
    pub cost: u8,
    pub tier: u8,
    pub taunt: bool,
    /// Only for agents on a board.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub health: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activated: Option<bool>,
}

impl CardView {
    fn of(state: &MatchState, c: &CardInstance, on_board: bool) -> Self {
        let spec = state.spec(c.card);
        CardView {
            instance: c.id.0,
            id: spec.id.clone(),
            name: spec.name.clone(),
            deck: spec.deck,
            kind: spec.kind,
            cost: spec.cost,
            tier: spec.tier,
            taunt: spec.taunt,
            health: on_board.then_some(c.health),
            activated: on_board.then_some(c.activated),
        }
    }

    fn list(state: &MatchState, cards: &[CardInstance]) -> Vec<CardView> {
        cards.iter().map(|c| CardView::of(state, c, false)).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlayerSnapshot {
    pub seat: SeatName,
    pub coins: u32,
    pub power: u32,
    pub prestige: u32,
    pub patron_calls: u32,
    pub hand: Vec<CardView>,
    /// Top card last.
    pub draw_pile: Vec<CardView>,
    pub cooldown: Vec<CardView>,
    pub played: Vec<CardView>,
    pub board: Vec<CardView>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PatronView {
    pub patron: PatronId,
    /// `"neutral"`, `"first"`, `"second"`, or `"none"` for the Treasury.
    pub favor: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegalMove {
    pub index: usize,
    pub text: String,
    #[serde(rename = "move")]
    pub mv: Move,
}

impl LegalMove {
    pub fn list(moves: &[Move]) -> Vec<LegalMove> {
        moves.iter().enumerate().map(|(index, mv)| LegalMove { index, text: mv.to_string(), mv: mv.clone() }).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DraftView {
    pub picks: Vec<PatronId>,
    pub available: Vec<PatronId>,
    pub next_picker: Option<SeatName>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeView {
    pub winner: Option<SeatName>,
    pub reason: String,
}

impl From<Outcome> for OutcomeView {
    fn from(o: Outcome) -> Self {
        OutcomeView { winner: o.winner.map(Into::into), reason: o.reason.to_string() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchView {
    pub turn: u32,
    pub current_seat: SeatName,
    pub sudden_death: bool,
    pub players: Vec<PlayerSnapshot>,
    pub tavern: Vec<CardView>,
    pub tavern_pile: usize,
    pub patrons: Vec<PatronView>,
    pub pending_choice: Option<PendingChoice>,
    pub legal_moves: Vec<LegalMove>,
}

/// Everything a client needs to draw the table. Hidden zones are included.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    pub version: u32,
    pub session_id: String,
    pub seed: u64,
    pub agent: String,
    pub human_seat: SeatName,
    pub budget_ms: u64,
    /// `"draft"`, `"playing"` or `"finished"`.
    pub phase: String,
    /// `"human"`, `"agent"`, or absent when the match is over.
    pub awaiting: Option<String>,
    pub draft: Option<DraftView>,
    #[serde(rename = "match")]
    pub game: Option<MatchView>,
    pub outcome: Option<OutcomeView>,
    pub history_len: usize,
}

fn favor_name(f: Favor) -> String {
    match f {
        Favor::Neutral => "neutral".into(),
        Favor::Favors(Seat::First) => "first".into(),
        Favor::Favors(Seat::Second) => "second".into(),
        Favor::None => "none".into(),
    }
}

fn match_view(state: &MatchState) -> MatchView {
    let players = Seat::BOTH
        .iter()
        .map(|&seat| {
            let p = state.player(seat);
            PlayerSnapshot {
                seat: seat.into(),
                coins: p.coins,
                power: p.power,
                prestige: p.prestige,
                patron_calls: p.patron_calls,
                hand: CardView::list(state, &p.hand),
                draw_pile: CardView::list(state, &p.draw_pile),
                cooldown: CardView::list(state, &p.cooldown),
                played: CardView::list(state, &p.played),
                board: p.board.iter().map(|c| CardView::of(state, c, true)).collect(),
            }
        })
        .collect();
    let legal = if state.is_finished() { Vec::new() } else { state.legal_moves() };
    MatchView {
        turn: state.turn(),
        current_seat: state.current_seat().into(),
        sudden_death: matches!(state.endgame(), Endgame::SuddenDeath(_)),
        players,
        tavern: CardView::list(state, state.tavern()),
        tavern_pile: state.tavern_pile().len(),
        patrons: state.patrons().iter().map(|p| PatronView { patron: p.patron, favor: favor_name(p.favor) }).collect(),
        pending_choice: state.pending_choice().cloned(),
        legal_moves: LegalMove::list(&legal),
    }
}

impl Snapshot {
    pub fn of(session: &Session) -> Self {
        let outcome = session.outcome();
        let awaiting = session.to_act().map(|s| if s == session.human { "human" } else { "agent" }.to_string());
        let draft = match session.phase() {
            Phase::Draft { pool, picks } => Some(DraftView {
                picks: picks.clone(),
                available: pool.clone(),
                next_picker: session.next_picker().map(Into::into),
            }),
            _ => None,
        };
        let phase = match (session.phase(), outcome) {
            (Phase::Draft { .. }, _) => "draft",
            (_, Some(_)) => "finished",
            _ => "playing",
        };
        Snapshot {
            version: PROTOCOL_VERSION,
            session_id: session.id.clone(),
            seed: session.seed,
            agent: session.agent_name.clone(),
            human_seat: session.human.into(),
            budget_ms: session.budget().as_millis() as u64,
            phase: phase.to_string(),
            awaiting,
            draft,
            game: session.state().map(match_view),
            outcome: outcome.map(Into::into),
            history_len: session.history().len(),
        }
    }
}

/// Reply to every command: the new snapshot and the history lines it added.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Update {
    pub version: u32,
    pub snapshot: Snapshot,
    pub events: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Created {
    pub version: u32,
    pub session_id: String,
    pub seed: u64,
    pub snapshot: Snapshot,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct History {
    pub version: u32,
    pub seed: u64,
    pub picks: Vec<PatronId>,
    /// Every applied move, enough to replay the match from seed and picks.
    pub moves: Vec<Move>,
    pub events: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Logs {
    pub version: u32,
    pub lines: Vec<String>,
    /// The lines joined with newlines, ready to copy.
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgentList {
    pub version: u32,
    pub agents: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub version: u32,
    pub error: ErrorDetail,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorDetail {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub legal_moves: Option<Vec<LegalMove>>,
}

/// Websocket message.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Push {
    Snapshot { version: u32, snapshot: Snapshot },
    Update { version: u32, snapshot: Snapshot, events: Vec<HistoryEntry> },
    Closed { version: u32, reason: String },
}
