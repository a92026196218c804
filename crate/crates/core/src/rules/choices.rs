//! Enumeration of the selections that resolve a pending choice.
//!
//! Options that are interchangeable (same card definition and health, or
//! the same effect) are grouped, so the move list holds one selection per
//! distinct outcome rather than one per physical copy.

use crate::moves::{ChoiceOption, PendingChoice, Selection};
use crate::state::MatchState;

#[derive(PartialEq, Eq, Clone, Copy)]
enum OptionKey {
    Card(u16, u8),
    Effect(crate::cards::Leaf),
}

fn option_key(state: &MatchState, option: &ChoiceOption) -> OptionKey {
    match option {
        ChoiceOption::Card(id) => match state.locate(*id) {
            Some((_, c)) => OptionKey::Card(c.card.0, c.health),
            None => OptionKey::Card(u16::MAX, id.0 as u8),
        },
        ChoiceOption::Effect(leaf) => OptionKey::Effect(*leaf),
    }
}

/// Distinct legal selections for `choice`, in a stable order.
pub fn choice_selections(state: &MatchState, choice: &PendingChoice) -> Vec<Selection> {
    let mut groups: Vec<(OptionKey, Vec<u16>)> = Vec::new();
    for (i, option) in choice.options.iter().enumerate() {
        let key = option_key(state, option);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i as u16),
            None => groups.push((key, vec![i as u16])),
        }
    }
    let min = choice.min_picks as usize;
    let max = (choice.max_picks as usize).min(choice.options.len());
    let mut out = Vec::new();
    if choice.ordered {
        let mut used = vec![0usize; groups.len()];
        let mut current = Selection::new();
        for k in min..=max {
            permutations(&groups, &mut used, &mut current, k, &mut out);
        }
    } else {
        let mut current = Selection::new();
        combinations(&groups, 0, &mut current, min, max, &mut out);
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }
    out
}

fn combinations(
    groups: &[(OptionKey, Vec<u16>)],
    g: usize,
    current: &mut Selection,
    min: usize,
    max: usize,
    out: &mut Vec<Selection>,
) {
    if g == groups.len() {
        if current.len() >= min {
            out.push(current.clone());
        }
        return;
    }
    let members = &groups[g].1;
    let room = max - current.len();
    for take in 0..=members.len().min(room) {
        current.extend_from_slice(&members[..take]);
        combinations(groups, g + 1, current, min, max, out);
        current.truncate(current.len() - take);
    }
}

fn permutations(
    groups: &[(OptionKey, Vec<u16>)],
    used: &mut [usize],
    current: &mut Selection,
    k: usize,
    out: &mut Vec<Selection>,
) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for g in 0..groups.len() {
        if used[g] < groups[g].1.len() {
            current.push(groups[g].1[used[g]]);
            used[g] += 1;
            permutations(groups, used, current, k, out);
            used[g] -= 1;
            current.pop();
        }
    }
}
