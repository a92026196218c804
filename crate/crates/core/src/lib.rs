//! Rules engine for a two-player deck-building card game built around
//! patrons, combos and a shared tavern.
//!
//! The engine is data-driven: cards come from a JSON card set (a default one
//! is bundled), and all randomness flows from a per-match seed so that a
//! match is fully determined by its card set, draft, seed and move list.
//!
//! ```
//! use std::sync::Arc;
//! use tribute_core::{CardSet, MatchState, Move, NoEvents, PatronId};
//!
//! let cards = Arc::new(CardSet::bundled());
//! let picks = [PatronId::Crows, PatronId::Hlaalu, PatronId::Pelin, PatronId::RedEagle];
//! let mut state = MatchState::new(cards, picks, 7).unwrap();
//! assert_eq!(state.legal_moves().len(), 6);
//! state.apply_move(&Move::EndTurn, &mut NoEvents).unwrap();
//! assert_eq!(state.turn(), 2);
//! ```

pub mod cards;
pub mod events;
pub mod invariants;
pub mod moves;
pub mod rules;
pub mod scenario;
pub mod state;
pub mod view;

pub use cards::{CardIdx, CardKind, CardSet, CardSetError, CardSpec, EffectExpr, Keyword, Leaf, PatronId};
pub use events::{Event, EventSink, NoEvents, RandomEventProbe};
pub use moves::{ChoiceKind, ChoiceOption, Move, PendingChoice, Selection};
pub use rules::RulesError;
pub use scenario::Scenario;
pub use state::{
    CardInstance, EndReason, Endgame, Favor, InstanceId, MatchState, Outcome, PatronState, PlayerBoard, Seat,
};
pub use view::{PlayerView, SeededGameState};
