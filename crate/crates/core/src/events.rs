//! Engine events and their one-line text form.
//!
//! Every line starts with a stable upper-case tag followed by
//! space-separated `key=value` fields.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::cards::{CardIdx, CardSet, Leaf, PatronId};
use crate::moves::ChoiceKind;
use crate::state::{Favor, InstanceId, Outcome, Seat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaySource {
    Hand,
    Agent,
    Contract,
}

/// Why a card changed zone outside the normal play flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transfer {
    Destroy,
    Discard,
    Knockout,
    Return,
    Sacrifice,
    Replace,
    Expire,
    Cleanup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Event {
    TurnStart { seat: Seat, turn: u32 },
    Play { seat: Seat, instance: InstanceId, card: CardIdx, source: PlaySource },
    Buy { seat: Seat, instance: InstanceId, card: CardIdx, slot: u8, paid: u32 },
    Refill { slot: u8, instance: InstanceId, card: CardIdx },
    Combo { seat: Seat, deck: PatronId, level: u8, instance: InstanceId, card: CardIdx },
    Effect { seat: Seat, source: Option<InstanceId>, effect: Leaf },
    Draw { seat: Seat, instance: InstanceId, card: CardIdx },
    Shuffle { seat: Seat, count: u32 },
    Patron { seat: Seat, patron: PatronId, favor: Favor },
    Attack { seat: Seat, target: InstanceId, card: CardIdx, damage: u32, health: u8, automatic: bool },
    ChoiceOpen { seat: Seat, kind: ChoiceKind, options: u32 },
    Choice { seat: Seat, kind: ChoiceKind, picks: Vec<u16> },
    Zone { seat: Seat, instance: InstanceId, card: CardIdx, transfer: Transfer },
    Create { seat: Seat, instance: InstanceId, card: CardIdx },
    SuddenDeath { leader: Seat },
    TurnEnd { seat: Seat, turn: u32, prestige: u32, converted: u32 },
    GameEnd { outcome: Outcome },
}

impl Event {
    pub fn tag(&self) -> &'static str {
        match self {
            Event::TurnStart { .. } => "TURN_START",
            Event::Play { .. } => "PLAY",
            Event::Buy { .. } => "BUY",
            Event::Refill { .. } => "REFILL",
            Event::Combo { .. } => "COMBO",
            Event::Effect { .. } => "EFFECT",
            Event::Draw { .. } => "DRAW",
            Event::Shuffle { .. } => "SHUFFLE",
            Event::Patron { .. } => "PATRON",
            Event::Attack { .. } => "ATTACK",
            Event::ChoiceOpen { .. } | Event::Choice { .. } => "CHOICE",
            Event::Zone { .. } => "ZONE",
            Event::Create { .. } => "CREATE",
            Event::SuddenDeath { .. } => "SUDDEN_DEATH",
            Event::TurnEnd { .. } => "TURN_END",
            Event::GameEnd { .. } => "GAME_END",
        }
    }

    /// Whether the event exposes information the acting player could not
    /// have predicted: a card drawn, a pile shuffled or a new tavern card.
    pub fn is_random(&self) -> bool {
        matches!(self, Event::Draw { .. } | Event::Shuffle { .. } | Event::Refill { .. })
    }

    /// Renders the event as one log line.
    pub fn line(&self, cards: &CardSet) -> String {
        let name = |c: &CardIdx| cards.get(*c).id.as_str();
        let mut s = String::from(self.tag());
        let _ = (|| -> std::fmt::Result { match self {
            Event::TurnStart { seat, turn } => write!(s, " seat={seat} turn={turn}"),
            Event::Play { seat, instance, card, source } => {
                write!(s, " seat={seat} card={} inst={instance} via={}", name(card), enum_name(source))
            }
            Event::Buy { seat, instance, card, slot, paid } => {
                write!(s, " seat={seat} card={} inst={instance} slot={slot} paid={paid}", name(card))
            }
            Event::Refill { slot, instance, card } => {
                write!(s, " slot={slot} card={} inst={instance}", name(card))
            }
            Event::Combo { seat, deck, level, instance, card } => {
                write!(s, " seat={seat} deck={deck} level={level} card={} inst={instance}", name(card))
            }
            Event::Effect { seat, source, effect } => {
                write!(s, " seat={seat} keyword={} amount={}", effect.keyword, effect.amount)?;
                match source {
                    Some(i) => write!(s, " inst={i}"),
                    None => Ok(()),
                }
            }
            Event::Draw { seat, instance, card } => {
                write!(s, " seat={seat} card={} inst={instance}", name(card))
            }
            Event::Shuffle { seat, count } => write!(s, " seat={seat} count={count}"),
            Event::Patron { seat, patron, favor } => {
                write!(s, " seat={seat} patron={patron} favor={}", favor_name(favor))
            }
            Event::Attack { seat, target, card, damage, health, automatic } => write!(
                s,
                " seat={seat} target={target} card={} damage={damage} health={health} auto={automatic}",
                name(card)
            ),
            Event::ChoiceOpen { seat, kind, options } => {
                write!(s, " seat={seat} phase=open kind={} options={options}", kind.name())
            }
            Event::Choice { seat, kind, picks } => {
                write!(s, " seat={seat} phase=made kind={} picks=", kind.name())?;
                for (i, p) in picks.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    write!(s, "{p}")?;
                }
                Ok(())
            }
            Event::Zone { seat, instance, card, transfer } => write!(
                s,
                " seat={seat} card={} inst={instance} transfer={}",
                name(card),
                enum_name(transfer)
            ),
            Event::Create { seat, instance, card } => {
                write!(s, " seat={seat} card={} inst={instance}", name(card))
            }
            Event::SuddenDeath { leader } => write!(s, " leader={leader}"),
            Event::TurnEnd { seat, turn, prestige, converted } => {
                write!(s, " seat={seat} turn={turn} prestige={prestige} converted={converted}")
            }
            Event::GameEnd { outcome } => match outcome.winner {
                Some(w) => write!(s, " winner={w} reason={}", outcome.reason),
                None => write!(s, " winner=draw reason={}", outcome.reason),
            },
        } })();
        s
    }
}

fn enum_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn favor_name(f: &Favor) -> String {
    match f {
        Favor::Neutral => "neutral".into(),
        Favor::None => "none".into(),
        Favor::Favors(s) => s.to_string(),
    }
}

/// Receives events as the engine produces them.
pub trait EventSink {
    fn emit(&mut self, event: Event);
}

impl EventSink for Vec<Event> {
    fn emit(&mut self, event: Event) {
        self.push(event);
    }
}

/// Discards all events.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoEvents;

impl EventSink for NoEvents {
    fn emit(&mut self, _: Event) {}
}

/// Records only whether any unpredictable event happened.
#[derive(Debug, Default, Clone, Copy)]
pub struct RandomEventProbe {
    pub triggered: bool,
}

impl EventSink for RandomEventProbe {
    fn emit(&mut self, event: Event) {
        self.triggered |= event.is_random();
    }
}
