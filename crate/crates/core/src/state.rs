//! Match state: zones, resources, patrons and turn bookkeeping.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cards::{CardIdx, CardSet, CardSpec, PatronId};
use crate::moves::{PendingChoice, QueuedEffect};

/// Turn cap; the match is drawn once turn 501 would begin.
pub const TURN_LIMIT: u32 = 500;
pub const PRESTIGE_WIN: u32 = 80;
pub const SUDDEN_DEATH_PRESTIGE: u32 = 40;
pub const MAX_BOARD: usize = 7;
pub const TAVERN_SIZE: usize = 5;
pub const HAND_SIZE: usize = 5;
pub const MAX_COMBO_SLOTS: usize = crate::cards::MAX_COMBO;

/// Deterministic generator used for every shuffle in a match. ChaCha with
/// 8 rounds has a published reference stream, so replays are identical on
/// every platform.
pub type MatchRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Seat {
    First,
    Second,
}

impl Seat {
    pub const BOTH: [Seat; 2] = [Seat::First, Seat::Second];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Seat {
        match self {
            Seat::First => Seat::Second,
            Seat::Second => Seat::First,
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seat::First => "p1",
            Seat::Second => "p2",
        })
    }
}

/// Identifies one physical copy of a card within a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InstanceId(pub u32);

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CardInstance {
    pub id: InstanceId,
    pub card: CardIdx,
    /// Remaining hit points; meaningful only while on a board.
    pub health: u8,
    /// Whether an agent on a board has been used this turn.
    pub activated: bool,
}

impl CardInstance {
    pub fn new(id: InstanceId, card: CardIdx) -> Self {
        CardInstance { id, card, health: 0, activated: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Favor {
    Neutral,
    Favors(Seat),
    /// The Treasury has no status.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatronState {
    pub patron: PatronId,
    pub favor: Favor,
}

impl PatronState {
    pub fn favors(&self, seat: Seat) -> bool {
        self.favor == Favor::Favors(seat)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PlayerBoard {
    pub coins: u32,
    pub power: u32,
    pub prestige: u32,
    pub patron_calls: u32,
    pub hand: Vec<CardInstance>,
    /// Top of the pile is the last element.
    pub draw_pile: Vec<CardInstance>,
    pub cooldown: Vec<CardInstance>,
    pub played: Vec<CardInstance>,
    pub board: Vec<CardInstance>,
    /// Cards the opponent made this player discard at their next turn start.
    pub owed_discard: u32,
    /// The second player's one-off extra coin.
    pub first_turn_coin: bool,
    /// Prestige held when this player's latest turn began.
    pub prestige_at_turn_start: u32,
}

impl PlayerBoard {
    /// Every card this player owns, in zone order.
    pub fn owned(&self) -> impl Iterator<Item = &CardInstance> {
        self.hand
            .iter()
            .chain(&self.draw_pile)
            .chain(&self.cooldown)
            .chain(&self.played)
            .chain(&self.board)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    PatronFavor,
    Prestige80,
    SuddenDeath,
    TurnLimitDraw,
    Timeout,
    IllegalMove,
    AgentCrash,
}

impl EndReason {
    pub fn name(self) -> &'static str {
        match self {
            EndReason::PatronFavor => "patron_favor",
            EndReason::Prestige80 => "prestige_80",
            EndReason::SuddenDeath => "sudden_death",
            EndReason::TurnLimitDraw => "turn_limit_draw",
            EndReason::Timeout => "timeout",
            EndReason::IllegalMove => "illegal_move",
            EndReason::AgentCrash => "agent_crash",
        }
    }
}

impl fmt::Display for EndReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    /// `None` for a draw.
    pub winner: Option<Seat>,
    pub reason: EndReason,
}

impl Outcome {
    pub fn win(seat: Seat, reason: EndReason) -> Self {
        Outcome { winner: Some(seat), reason }
    }

    pub fn draw() -> Self {
        Outcome { winner: None, reason: EndReason::TurnLimitDraw }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endgame {
    Normal,
    /// The named seat leads; the other must strictly exceed it this turn.
    SuddenDeath(Seat),
    Finished(Outcome),
}

/// A card used this turn, remembered for combo triggers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsedCard {
    pub instance: InstanceId,
    pub card: CardIdx,
}

/// The complete state of a match, including every hidden zone and the RNG.
///
/// Cloning is cheap enough for search: the card set is shared and the rest
/// is a handful of small vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchState {
    pub(crate) cards: Arc<CardSet>,
    pub(crate) players: [PlayerBoard; 2],
    pub(crate) current: Seat,
    pub(crate) patrons: Vec<PatronState>,
    pub(crate) turn: u32,
    pub(crate) combo: [u8; 7],
    pub(crate) used: Vec<UsedCard>,
    pub(crate) tavern: Vec<CardInstance>,
    /// Top of the pile is the last element.
    pub(crate) tavern_pile: Vec<CardInstance>,
    pub(crate) removed: Vec<CardInstance>,
    pub(crate) effects: VecDeque<QueuedEffect>,
    pub(crate) pending: Option<PendingChoice>,
    pub(crate) rng: MatchRng,
    pub(crate) next_instance: u32,
    pub(crate) endgame: Endgame,
}

impl MatchState {
    pub fn cards(&self) -> &CardSet {
        &self.cards
    }

    pub fn card_set(&self) -> &Arc<CardSet> {
        &self.cards
    }

    pub fn spec(&self, card: CardIdx) -> &CardSpec {
        self.cards.get(card)
    }

    pub fn player(&self, seat: Seat) -> &PlayerBoard {
        &self.players[seat.index()]
    }

    pub fn current_seat(&self) -> Seat {
        self.current
    }

    pub fn current_player(&self) -> &PlayerBoard {
        &self.players[self.current.index()]
    }

    pub fn opponent_player(&self) -> &PlayerBoard {
        &self.players[self.current.other().index()]
    }

    /// The four drafted patrons followed by the Treasury.
    pub fn patrons(&self) -> &[PatronState] {
        &self.patrons
    }

    pub fn patron(&self, patron: PatronId) -> Option<&PatronState> {
        self.patrons.iter().find(|p| p.patron == patron)
    }

    pub fn turn(&self) -> u32 {
        self.turn
    }

    /// Cards of `deck` used by the current player this turn.
    pub fn combo_count(&self, deck: PatronId) -> u8 {
        self.combo[deck.index()]
    }

    pub fn used_this_turn(&self) -> &[UsedCard] {
        &self.used
    }

    pub fn tavern(&self) -> &[CardInstance] {
        &self.tavern
    }

    pub fn tavern_pile(&self) -> &[CardInstance] {
        &self.tavern_pile
    }

    pub fn removed(&self) -> &[CardInstance] {
        &self.removed
    }

    pub fn pending_choice(&self) -> Option<&PendingChoice> {
        self.pending.as_ref()
    }

    /// Effects still waiting behind the pending choice.
    pub fn queued_effects(&self) -> &VecDeque<QueuedEffect> {
        &self.effects
    }

    pub fn endgame(&self) -> Endgame {
        self.endgame
    }

    pub fn outcome(&self) -> Option<Outcome> {
        match self.endgame {
            Endgame::Finished(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.endgame, Endgame::Finished(_))
    }

    /// Number of card instances created so far, including removed ones.
    pub fn instances_created(&self) -> u32 {
        self.next_instance
    }

    /// Number of patrons currently favoring `seat`.
    pub fn favor_count(&self, seat: Seat) -> usize {
        self.patrons.iter().filter(|p| p.favors(seat)).count()
    }

    /// Ends the match by forfeit (timeouts, illegal moves, crashes).
    pub fn forfeit(&mut self, loser: Seat, reason: EndReason) {
        if !self.is_finished() {
            self.endgame = Endgame::Finished(Outcome::win(loser.other(), reason));
            self.pending = None;
            self.effects.clear();
        }
    }

    /// Hash of the position with instance identities and play order
    /// erased: two states reached by playing interchangeable cards in a
    /// different order get the same key. Pile order is kept where it
    /// decides future draws.
    pub fn position_key(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        fn cards<H: Hasher>(h: &mut H, zone: &[CardInstance], ordered: bool) {
            let mut v: Vec<(CardIdx, u8, bool)> = zone.iter().map(|c| (c.card, c.health, c.activated)).collect();
            if !ordered {
                v.sort_unstable();
            }
            v.hash(h);
        }
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for p in &self.players {
            (p.coins, p.power, p.prestige, p.patron_calls, p.owed_discard, p.first_turn_coin).hash(&mut h);
            cards(&mut h, &p.hand, false);
            cards(&mut h, &p.draw_pile, true);
            cards(&mut h, &p.cooldown, false);
            cards(&mut h, &p.played, false);
            cards(&mut h, &p.board, false);
        }
        (self.current, self.turn, self.combo, self.endgame).hash(&mut h);
        self.patrons.hash(&mut h);
        cards(&mut h, &self.tavern, true);
        cards(&mut h, &self.tavern_pile, true);
        self.removed.len().hash(&mut h);
        if let Some(p) = &self.pending {
            (p.kind, p.options.len(), p.min_picks, p.max_picks).hash(&mut h);
        }
        self.effects.len().hash(&mut h);
        rand_core_pos(&self.rng).hash(&mut h);
        h.finish()
    }

    pub(crate) fn fresh_instance(&mut self, card: CardIdx) -> CardInstance {
        let id = InstanceId(self.next_instance);
        self.next_instance += 1;
        CardInstance::new(id, card)
    }

    /// Locates an instance anywhere in the match.
    pub fn locate(&self, id: InstanceId) -> Option<(ZoneRef, &CardInstance)> {
        for seat in Seat::BOTH {
            let p = self.player(seat);
            for (zone, cards) in [
                (Zone::Hand, &p.hand),
                (Zone::DrawPile, &p.draw_pile),
                (Zone::Cooldown, &p.cooldown),
                (Zone::Played, &p.played),
                (Zone::Board, &p.board),
            ] {
                if let Some(c) = cards.iter().find(|c| c.id == id) {
                    return Some((ZoneRef::Player(seat, zone), c));
                }
            }
        }
        for (zone, cards) in [
            (SharedZone::Tavern, &self.tavern),
            (SharedZone::TavernPile, &self.tavern_pile),
            (SharedZone::Removed, &self.removed),
        ] {
            if let Some(c) = cards.iter().find(|c| c.id == id) {
                return Some((ZoneRef::Shared(zone), c));
            }
        }
        None
    }
}

fn rand_core_pos(rng: &MatchRng) -> u128 {
    rng.get_word_pos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Hand,
    DrawPile,
    Cooldown,
    Played,
    Board,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharedZone {
    Tavern,
    TavernPile,
    Removed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZoneRef {
    Player(Seat, Zone),
    Shared(SharedZone),
}
