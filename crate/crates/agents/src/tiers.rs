//! Subjective card strength tiers.

use std::collections::BTreeMap;

use thiserror::Error;
use tribute_core::{CardIdx, CardSet};

/// Value of a card by tier, 1 (best) to 5 (filler).
pub const TIER_VALUES: [u32; 5] = [10, 6, 3, 1, 0];

#[derive(Debug, Error)]
pub enum TierError {
    #[error("tier list is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unknown card `{0}` in tier list")]
    UnknownCard(String),
    #[error("card `{0}` has tier {1}, expected 1..=5")]
    OutOfRange(String, i64),
}

/// Tier per card of one card set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierList {
    tiers: Vec<u8>,
}

impl TierList {
    /// Takes the tiers recorded in the card set itself.
    pub fn from_card_set(cards: &CardSet) -> Self {
        TierList { tiers: cards.iter().map(|(_, c)| c.tier).collect() }
    }

    /// Starts from the card set's tiers and applies `card_id = tier`
    /// overrides from a TOML document.
    pub fn with_overrides(cards: &CardSet, text: &str) -> Result<Self, TierError> {
        let mut list = TierList::from_card_set(cards);
        let table: BTreeMap<String, i64> = toml::from_str(text)?;
        for (id, tier) in table {
            let idx = cards.lookup(&id).ok_or_else(|| TierError::UnknownCard(id.clone()))?;
            if !(1..=5).contains(&tier) {
                return Err(TierError::OutOfRange(id, tier));
            }
            list.tiers[idx.0 as usize] = tier as u8;
        }
        Ok(list)
    }

    pub fn tier(&self, card: CardIdx) -> u8 {
        self.tiers.get(card.0 as usize).copied().unwrap_or(5)
    }

    pub fn value(&self, card: CardIdx) -> u32 {
        TIER_VALUES[(self.tier(card).clamp(1, 5) - 1) as usize]
    }
}
