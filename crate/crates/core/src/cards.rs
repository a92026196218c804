//! Declarative card definitions and the card-set loader.
//!
//! A card set is a single JSON document of the form
//! `{"version": 1, "cards": [...]}`. Each card lists its deck, kind, cost,
//! tier and up to four effect slots keyed `"1"`..`"4"`, where slot `n` fires
//! when `n` cards of the card's deck have been used in the same turn.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The bundled default card set.
pub const BUNDLED_CARDS_JSON: &str = include_str!("../data/cards.json");

/// Ids the engine depends on: the basic starter and the two created cards.
pub const GOLD_ID: &str = "gold";
pub const WRIT_OF_COIN_ID: &str = "writ_of_coin";
pub const BEWILDERMENT_ID: &str = "bewilderment";

/// Highest combo slot a card may define.
pub const MAX_COMBO: usize = 4;

/// A patron, which is also the name of the deck it represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatronId {
    Ansei,
    Crows,
    Hlaalu,
    Pelin,
    Rajhin,
    RedEagle,
    Treasury,
}

impl PatronId {
    pub const ALL: [PatronId; 7] = [
        PatronId::Ansei,
        PatronId::Crows,
        PatronId::Hlaalu,
        PatronId::Pelin,
        PatronId::Rajhin,
        PatronId::RedEagle,
        PatronId::Treasury,
    ];

    /// The six patrons that can be drafted.
    pub const DRAFTABLE: [PatronId; 6] = [
        PatronId::Ansei,
        PatronId::Crows,
        PatronId::Hlaalu,
        PatronId::Pelin,
        PatronId::Rajhin,
        PatronId::RedEagle,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PatronId::Ansei => "Ansei",
            PatronId::Crows => "Crows",
            PatronId::Hlaalu => "Hlaalu",
            PatronId::Pelin => "Pelin",
            PatronId::Rajhin => "Rajhin",
            PatronId::RedEagle => "RedEagle",
            PatronId::Treasury => "Treasury",
        }
    }
}

impl fmt::Display for PatronId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatronId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatronId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown patron `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CardKind {
    Starter,
    Action,
    ContractAction,
    Agent,
    ContractAgent,
}

impl CardKind {
    pub fn is_agent(self) -> bool {
        matches!(self, CardKind::Agent | CardKind::ContractAgent)
    }

    pub fn is_contract(self) -> bool {
        matches!(self, CardKind::ContractAction | CardKind::ContractAgent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Keyword {
    Acquire,
    Coin,
    Destroy,
    Discard,
    Draw,
    Heal,
    Knockout,
    #[serde(rename = "OPPLOSEPR")]
    OppLosePrestige,
    Patron,
    Power,
    Replace,
    Return,
}

impl Keyword {
    pub const ALL: [Keyword; 12] = [
        Keyword::Acquire,
        Keyword::Coin,
        Keyword::Destroy,
        Keyword::Discard,
        Keyword::Draw,
        Keyword::Heal,
        Keyword::Knockout,
        Keyword::OppLosePrestige,
        Keyword::Patron,
        Keyword::Power,
        Keyword::Replace,
        Keyword::Return,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Keyword::Acquire => "ACQUIRE",
            Keyword::Coin => "COIN",
            Keyword::Destroy => "DESTROY",
            Keyword::Discard => "DISCARD",
            Keyword::Draw => "DRAW",
            Keyword::Heal => "HEAL",
            Keyword::Knockout => "KNOCKOUT",
            Keyword::OppLosePrestige => "OPPLOSEPR",
            Keyword::Patron => "PATRON",
            Keyword::Power => "POWER",
            Keyword::Replace => "REPLACE",
            Keyword::Return => "RETURN",
        }
    }

    /// Keywords whose resolution asks the acting player to pick cards.
    pub fn needs_choice(self) -> bool {
        matches!(
            self,
            Keyword::Acquire | Keyword::Destroy | Keyword::Knockout | Keyword::Replace | Keyword::Return
        )
    }
}

impl fmt::Display for Keyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single keyword with its amount, e.g. `COIN 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Leaf {
    pub keyword: Keyword,
    pub amount: u8,
}

impl Leaf {
    pub fn new(keyword: Keyword, amount: u8) -> Self {
        Leaf { keyword, amount }
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.keyword, self.amount)
    }
}

/// One effect slot. At most two keywords, joined by AND or OR; the type
/// makes deeper nesting unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EffectExpr {
    Leaf(Leaf),
    And(Leaf, Leaf),
    Or(Leaf, Leaf),
}

impl EffectExpr {
    pub fn leaves(&self) -> impl Iterator<Item = Leaf> {
        let (a, b) = match *self {
            EffectExpr::Leaf(l) => (l, None),
            EffectExpr::And(l, r) | EffectExpr::Or(l, r) => (l, Some(r)),
        };
        std::iter::once(a).chain(b)
    }
}

impl fmt::Display for EffectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectExpr::Leaf(l) => write!(f, "{l}"),
            EffectExpr::And(l, r) => write!(f, "{l} AND {r}"),
            EffectExpr::Or(l, r) => write!(f, "{l} OR {r}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawEffect {
    Leaf {
        keyword: String,
        amount: i64,
    },
    Composite {
        op: String,
        left: Box<RawEffect>,
        right: Box<RawEffect>,
    },
}

impl Serialize for EffectExpr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let leaf = |l: &Leaf| RawEffect::Leaf {
            keyword: l.keyword.name().to_string(),
            amount: l.amount as i64,
        };
        let raw = match self {
            EffectExpr::Leaf(l) => leaf(l),
            EffectExpr::And(l, r) | EffectExpr::Or(l, r) => RawEffect::Composite {
                op: if matches!(self, EffectExpr::And(..)) { "AND" } else { "OR" }.to_string(),
                left: Box::new(leaf(l)),
                right: Box::new(leaf(r)),
            },
        };
        raw.serialize(serializer)
    }
}

/// Static definition of a card.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardSpec {
    pub id: String,
    pub name: String,
    pub deck: PatronId,
    pub kind: CardKind,
    pub cost: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub health: Option<u8>,
    pub taunt: bool,
    /// 1 is the strongest tier, 5 the weakest.
    pub tier: u8,
    /// Copies shuffled into the tavern pile when the deck is in play.
    pub copies: u8,
    #[serde(serialize_with = "serialize_effects")]
    pub effects: [Option<EffectExpr>; MAX_COMBO],
}

fn serialize_effects<S: serde::Serializer>(
    effects: &[Option<EffectExpr>; MAX_COMBO],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = serializer.serialize_map(None)?;
    for (i, e) in effects.iter().enumerate() {
        if let Some(e) = e {
            map.serialize_entry(&(i + 1).to_string(), e)?;
        }
    }
    map.end()
}

impl CardSpec {
    /// The effect fired at combo level `level` (1-based).
    pub fn effect(&self, level: usize) -> Option<&EffectExpr> {
        self.effects.get(level.checked_sub(1)?)?.as_ref()
    }
}

/// Index of a card definition inside its [`CardSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CardIdx(pub u16);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CardSetError {
    #[error("card set is not valid JSON: {0}")]
    Json(String),
    #[error("card `{card}`: field `{field}`: {message}")]
    Schema {
        card: String,
        field: String,
        message: String,
    },
    #[error("duplicate card id `{0}`")]
    DuplicateId(String),
    #[error("card `{card}`: unknown keyword `{keyword}`")]
    UnknownKeyword { card: String, keyword: String },
    #[error("card `{card}`: combo level {level} is outside 1..=4")]
    ComboLevel { card: String, level: String },
    #[error("deck {deck}: {message}")]
    Deck { deck: PatronId, message: String },
    #[error("cannot read card set: {0}")]
    Io(String),
}

/// A validated collection of cards.
#[derive(Debug, Clone, PartialEq)]
pub struct CardSet {
    pub version: u32,
    cards: Vec<CardSpec>,
    by_id: BTreeMap<String, CardIdx>,
    starters: [Option<CardIdx>; 7],
    gold: CardIdx,
    writ_of_coin: CardIdx,
    bewilderment: CardIdx,
}

impl CardSet {
    pub fn bundled() -> CardSet {
        CardSet::from_json(BUNDLED_CARDS_JSON).expect("bundled card set is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<CardSet, CardSetError> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| CardSetError::Io(format!("{}: {e}", path.as_ref().display())))?;
        CardSet::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<CardSet, CardSetError> {
        let doc: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CardSetError::Json(e.to_string()))?;
        let version = doc
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| schema("<document>", "version", "missing or not a non-negative integer"))?
            as u32;
        let raw_cards = doc
            .get("cards")
            .and_then(|v| v.as_array())
            .ok_or_else(|| schema("<document>", "cards", "missing or not an array"))?;
        let cards = raw_cards
            .iter()
            .enumerate()
            .map(|(i, c)| parse_card(i, c))
            .collect::<Result<Vec<_>, _>>()?;
        CardSet::new(version, cards)
    }

    /// Validates a list of card definitions into a card set.
    pub fn new(version: u32, cards: Vec<CardSpec>) -> Result<CardSet, CardSetError> {
        if cards.len() > u16::MAX as usize {
            return Err(schema("<document>", "cards", "too many cards"));
        }
        let mut by_id = BTreeMap::new();
        let mut starters = [None; 7];
        for (i, card) in cards.iter().enumerate() {
            validate_card(card)?;
            if by_id.insert(card.id.clone(), CardIdx(i as u16)).is_some() {
                return Err(CardSetError::DuplicateId(card.id.clone()));
            }
            if card.kind == CardKind::Starter {
                let slot = &mut starters[card.deck.index()];
                if slot.is_some() {
                    return Err(CardSetError::Deck {
                        deck: card.deck,
                        message: "more than one starter card".into(),
                    });
                }
                *slot = Some(CardIdx(i as u16));
            }
        }
        let required = |id: &str| {
            by_id.get(id).copied().ok_or_else(|| CardSetError::Deck {
                deck: PatronId::Treasury,
                message: format!("missing required card `{id}`"),
            })
        };
        let gold = required(GOLD_ID)?;
        let writ_of_coin = required(WRIT_OF_COIN_ID)?;
        let bewilderment = required(BEWILDERMENT_ID)?;
        for (idx, what) in [(gold, "gold"), (writ_of_coin, "writ_of_coin"), (bewilderment, "bewilderment")] {
            if cards[idx.0 as usize].deck != PatronId::Treasury {
                return Err(CardSetError::Deck {
                    deck: cards[idx.0 as usize].deck,
                    message: format!("`{what}` must belong to the Treasury deck"),
                });
            }
        }
        if cards[gold.0 as usize].kind != CardKind::Starter {
            return Err(schema(GOLD_ID, "kind", "Gold must be a starter card"));
        }
        for p in PatronId::DRAFTABLE {
            if starters[p.index()].is_none() {
                return Err(CardSetError::Deck { deck: p, message: "no starter card".into() });
            }
        }
        Ok(CardSet { version, cards, by_id, starters, gold, writ_of_coin, bewilderment })
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn get(&self, idx: CardIdx) -> &CardSpec {
        &self.cards[idx.0 as usize]
    }

    pub fn lookup(&self, id: &str) -> Option<CardIdx> {
        self.by_id.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CardIdx, &CardSpec)> {
        self.cards.iter().enumerate().map(|(i, c)| (CardIdx(i as u16), c))
    }

    pub fn starter(&self, deck: PatronId) -> Option<CardIdx> {
        self.starters[deck.index()]
    }

    pub fn gold(&self) -> CardIdx {
        self.gold
    }

    pub fn writ_of_coin(&self) -> CardIdx {
        self.writ_of_coin
    }

    pub fn bewilderment(&self) -> CardIdx {
        self.bewilderment
    }

    /// Cards of `deck` that go into the tavern pile, with multiplicity.
    pub fn tavern_cards(&self, deck: PatronId) -> impl Iterator<Item = CardIdx> + '_ {
        self.iter()
            .filter(move |(_, c)| c.deck == deck && c.kind != CardKind::Starter)
            .flat_map(|(i, c)| std::iter::repeat_n(i, c.copies as usize))
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            version: u32,
            cards: &'a [CardSpec],
        }
        serde_json::to_string_pretty(&Doc { version: self.version, cards: &self.cards })
            .expect("card set serializes")
    }
}

fn schema(card: &str, field: &str, message: &str) -> CardSetError {
    CardSetError::Schema { card: card.into(), field: field.into(), message: message.into() }
}

fn validate_card(card: &CardSpec) -> Result<(), CardSetError> {
    let id = card.id.as_str();
    if id.is_empty() {
        return Err(schema("<unnamed>", "id", "must not be empty"));
    }
    if !(1..=5).contains(&card.tier) {
        return Err(schema(id, "tier", "must be in 1..=5"));
    }
    match (card.kind.is_agent(), card.health) {
        (true, None) => return Err(schema(id, "health", "agents must declare health")),
        (true, Some(0)) => return Err(schema(id, "health", "must be at least 1")),
        (false, Some(_)) => return Err(schema(id, "health", "only agents have health")),
        _ => {}
    }
    if card.taunt && !card.kind.is_agent() {
        return Err(schema(id, "taunt", "only agents can have taunt"));
    }
    for effect in card.effects.iter().flatten() {
        for leaf in effect.leaves() {
            if leaf.amount == 0 {
                return Err(schema(id, "effects", "keyword amount must be at least 1"));
            }
            if leaf.keyword == Keyword::Heal && !card.kind.is_agent() {
                return Err(schema(id, "effects", "HEAL is only meaningful on agents"));
            }
        }
    }
    Ok(())
}

fn parse_card(index: usize, value: &serde_json::Value) -> Result<CardSpec, CardSetError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(&format!("#{index}"), "<card>", "not an object"))?;
    let id = obj
        .get("id")
        .and_then(|v| v.as_str())
        .ok_or_else(|| schema(&format!("#{index}"), "id", "missing or not a string"))?
        .to_string();
    const KNOWN: [&str; 10] =
        ["id", "name", "deck", "kind", "cost", "health", "taunt", "tier", "copies", "effects"];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(schema(&id, k, "unknown field"));
    }
    let str_field = |f: &str| -> Result<&str, CardSetError> {
        obj.get(f).and_then(|v| v.as_str()).ok_or_else(|| schema(&id, f, "missing or not a string"))
    };
    let int_field = |f: &str, max: u64| -> Result<Option<u8>, CardSetError> {
        match obj.get(f) {
            None => Ok(None),
            Some(v) => match v.as_u64() {
                Some(n) if n <= max => Ok(Some(n as u8)),
                _ => Err(schema(&id, f, &format!("must be an integer in 0..={max}"))),
            },
        }
    };
    let name = str_field("name")?.to_string();
    let deck = str_field("deck")?
        .parse::<PatronId>()
        .map_err(|e| schema(&id, "deck", &e))?;
    let kind: CardKind = serde_json::from_value(obj["kind"].clone())
        .map_err(|_| schema(&id, "kind", "expected one of starter, action, contract_action, agent, contract_agent"))?;
    let cost = int_field("cost", 255)?.ok_or_else(|| schema(&id, "cost", "missing"))?;
    let health = int_field("health", 255)?;
    let tier = int_field("tier", 255)?.ok_or_else(|| schema(&id, "tier", "missing"))?;
    let copies = int_field("copies", 255)?.unwrap_or(1);
    let taunt = match obj.get("taunt") {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| schema(&id, "taunt", "must be a boolean"))?,
    };
    let mut effects = [None; MAX_COMBO];
    if let Some(raw) = obj.get("effects") {
        let map = raw
            .as_object()
            .ok_or_else(|| schema(&id, "effects", "must be an object keyed by combo level"))?;
        for (level, expr) in map {
            let lvl = match level.parse::<usize>() {
                Ok(l) if (1..=MAX_COMBO).contains(&l) => l,
                _ => return Err(CardSetError::ComboLevel { card: id.clone(), level: level.clone() }),
            };
            effects[lvl - 1] = Some(parse_effect(&id, expr)?);
        }
    }
    Ok(CardSpec { id, name, deck, kind, cost, health, taunt, tier, copies, effects })
}

fn parse_leaf(card: &str, value: &serde_json::Value) -> Result<Leaf, CardSetError> {
    let obj = value
        .as_object()
        .ok_or_else(|| schema(card, "effects", "effect must be an object"))?;
    if obj.contains_key("op") {
        return Err(schema(card, "effects", "at most two keywords per effect"));
    }
    let name = obj
        .get("keyword")
        .and_then(|v| v.as_str())
        .ok_or_else(|| schema(card, "effects", "leaf effect needs a `keyword` string"))?;
    let keyword = Keyword::ALL
        .into_iter()
        .find(|k| k.name() == name)
        .ok_or_else(|| CardSetError::UnknownKeyword { card: card.into(), keyword: name.into() })?;
    let amount = obj
        .get("amount")
        .and_then(|v| v.as_u64())
        .filter(|&a| (1..=255).contains(&a))
        .ok_or_else(|| schema(card, "effects", "`amount` must be an integer in 1..=255"))?;
    Ok(Leaf { keyword, amount: amount as u8 })
}

fn parse_effect(card: &str, value: &serde_json::Value) -> Result<EffectExpr, CardSetError> {
    let Some(op) = value.get("op") else {
        return parse_leaf(card, value).map(EffectExpr::Leaf);
    };
    let left = parse_leaf(card, value.get("left").unwrap_or(&serde_json::Value::Null))?;
    let right = parse_leaf(card, value.get("right").unwrap_or(&serde_json::Value::Null))?;
    match op.as_str() {
        Some("AND") => Ok(EffectExpr::And(left, right)),
        Some("OR") => Ok(EffectExpr::Or(left, right)),
        _ => Err(schema(card, "effects", "`op` must be \"AND\" or \"OR\"")),
    }
}
