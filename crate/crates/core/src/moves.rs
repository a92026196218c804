//! Moves, pending choices and the internal effect queue.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::cards::{Leaf, PatronId};
use crate::state::InstanceId;

/// Indices into a [`PendingChoice`]'s options. For ordered choices the
/// first index ends up on top.
pub type Selection = SmallVec<[u16; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", content = "arg", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Move {
    PlayCard(InstanceId),
    ActivateAgent(InstanceId),
    AttackAgent(InstanceId),
    /// Tavern slot index.
    BuyCard(u8),
    ActivatePatron(PatronId),
    EndTurn,
    MakeChoice(Selection),
}

impl Move {
    pub fn is_end_turn(&self) -> bool {
        matches!(self, Move::EndTurn)
    }

    pub fn choice<I: IntoIterator<Item = u16>>(picks: I) -> Move {
        Move::MakeChoice(picks.into_iter().collect())
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Move::PlayCard(_) => "PLAY_CARD",
            Move::ActivateAgent(_) => "ACTIVATE_AGENT",
            Move::AttackAgent(_) => "ATTACK_AGENT",
            Move::BuyCard(_) => "BUY_CARD",
            Move::ActivatePatron(_) => "ACTIVATE_PATRON",
            Move::EndTurn => "END_TURN",
            Move::MakeChoice(_) => "MAKE_CHOICE",
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::PlayCard(i) | Move::ActivateAgent(i) | Move::AttackAgent(i) => {
                write!(f, "{} {}", self.kind_name(), i)
            }
            Move::BuyCard(slot) => write!(f, "BUY_CARD slot {slot}"),
            Move::ActivatePatron(p) => write!(f, "ACTIVATE_PATRON {p}"),
            Move::EndTurn => f.write_str("END_TURN"),
            Move::MakeChoice(picks) => {
                f.write_str("MAKE_CHOICE [")?;
                for (i, p) in picks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// What a pending choice is deciding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChoiceKind {
    /// Take one tavern card with cost up to `max_cost` for free.
    Acquire { max_cost: u8 },
    /// Remove own played cards or board agents from the match.
    Destroy,
    /// Move cards from hand to cooldown at turn start.
    Discard,
    /// Defeat opponent agents.
    Knockout,
    /// Cycle tavern cards to the bottom of the tavern pile.
    Replace,
    /// Put cooldown cards on top of the draw pile.
    Return,
    /// Pick one side of an OR effect.
    EffectBranch,
    /// Remove a card from hand or played pile for a patron.
    Sacrifice { patron: PatronId },
    /// Put an agent from cooldown on top of the draw pile.
    PatronReturnAgent,
}

impl ChoiceKind {
    pub fn name(self) -> &'static str {
        match self {
            ChoiceKind::Acquire { .. } => "acquire",
            ChoiceKind::Destroy => "destroy",
            ChoiceKind::Discard => "discard",
            ChoiceKind::Knockout => "knockout",
            ChoiceKind::Replace => "replace",
            ChoiceKind::Return => "return",
            ChoiceKind::EffectBranch => "effect_branch",
            ChoiceKind::Sacrifice { .. } => "sacrifice",
            ChoiceKind::PatronReturnAgent => "patron_return_agent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum ChoiceOption {
    Card(InstanceId),
    Effect(Leaf),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingChoice {
    pub kind: ChoiceKind,
    pub options: Vec<ChoiceOption>,
    pub min_picks: u16,
    pub max_picks: u16,
    /// Whether the order of picks matters.
    pub ordered: bool,
    /// The card whose effect raised the choice, if any.
    pub source: Option<InstanceId>,
}

impl PendingChoice {
    /// Checks a selection against the pick bounds and option range.
    pub fn accepts(&self, picks: &[u16]) -> bool {
        let n = picks.len() as u16;
        if n < self.min_picks || n > self.max_picks {
            return false;
        }
        for (i, &p) in picks.iter().enumerate() {
            if p as usize >= self.options.len() || picks[..i].contains(&p) {
                return false;
            }
        }
        true
    }
}

/// One step of effect resolution waiting in the queue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueuedEffect {
    pub action: EffectAction,
    pub source: Option<InstanceId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EffectAction {
    Keyword { leaf: Leaf },
    Branch { left: Leaf, right: Leaf },
    DiscardFromHand { count: u32 },
    Sacrifice { patron: PatronId },
    ReturnAgent,
    CreateWrit,
}
