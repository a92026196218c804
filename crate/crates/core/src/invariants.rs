//! Structural checks over a match state, used by fuzzing and debugging.

use crate::cards::{CardKind, PatronId};
use crate::moves::Move;
use crate::state::{Favor, MatchState, Seat, MAX_BOARD, TAVERN_SIZE, TURN_LIMIT};

/// Returns a description of the first violated invariant, if any.
pub fn check(state: &MatchState) -> Result<(), String> {
    let mut seen = vec![false; state.next_instance as usize];
    let mut total = 0usize;
    let mut visit = |zone: &str, cards: &[crate::state::CardInstance]| -> Result<(), String> {
        for c in cards {
            total += 1;
            match seen.get_mut(c.id.0 as usize) {
                None => return Err(format!("instance {} was never created", c.id)),
                Some(true) => return Err(format!("instance {} appears twice (again in {zone})", c.id)),
                Some(slot) => *slot = true,
            }
        }
        Ok(())
    };
    for seat in Seat::BOTH {
        let p = state.player(seat);
        visit("hand", &p.hand)?;
        visit("draw pile", &p.draw_pile)?;
        visit("cooldown", &p.cooldown)?;
        visit("played", &p.played)?;
        visit("board", &p.board)?;
    }
    visit("tavern", &state.tavern)?;
    visit("tavern pile", &state.tavern_pile)?;
    visit("removed", &state.removed)?;
    if total != state.next_instance as usize {
        return Err(format!("{total} instances in zones but {} created", state.next_instance));
    }
    if state.tavern.len() > TAVERN_SIZE {
        return Err(format!("tavern holds {} cards", state.tavern.len()));
    }
    if !state.tavern_pile.is_empty() && state.tavern.len() != TAVERN_SIZE {
        return Err(format!("tavern holds {} cards while the pile is not empty", state.tavern.len()));
    }
    for seat in Seat::BOTH {
        let p = state.player(seat);
        if p.board.len() > MAX_BOARD {
            return Err(format!("{seat} has {} agents on board", p.board.len()));
        }
        for agent in &p.board {
            let spec = state.spec(agent.card);
            let max = spec.health.ok_or_else(|| format!("non-agent {} on board", spec.id))?;
            if agent.health == 0 || agent.health > max {
                return Err(format!("agent {} has health {} of {max}", spec.id, agent.health));
            }
        }
        for c in p.hand.iter().chain(&p.draw_pile).chain(&p.cooldown) {
            if state.spec(c.card).kind.is_contract() {
                return Err(format!("contract card {} outside play", state.spec(c.card).id));
            }
        }
        for c in &p.played {
            if state.spec(c.card).kind == CardKind::ContractAgent && p.board.len() < MAX_BOARD && seat != state.current {
                return Err(format!("contract agent {} lingering in played pile", state.spec(c.card).id));
            }
        }
        if seat != state.current && !p.played.is_empty() && !state.is_finished() {
            return Err(format!("{seat} has cards in the played pile outside their turn"));
        }
    }
    for p in &state.patrons {
        let treasury = p.patron == PatronId::Treasury;
        if treasury != (p.favor == Favor::None) {
            return Err(format!("{} has favor {:?}", p.patron, p.favor));
        }
    }
    if state.pending.is_none() && !state.effects.is_empty() && !state.is_finished() {
        return Err("effects queued without a pending choice".into());
    }
    if state.turn > TURN_LIMIT + 1 || (!state.is_finished() && state.turn > TURN_LIMIT) {
        return Err(format!("turn counter at {}", state.turn));
    }
    if !state.is_finished() && state.favor_count(state.current) == 4 {
        return Err("current player holds every favor but the match continues".into());
    }
    if state.pending.is_some() {
        let moves = state.legal_moves();
        if moves.is_empty() || moves.iter().any(|m| !matches!(m, Move::MakeChoice(_))) {
            return Err("pending choice allows non-choice moves".into());
        }
    }
    Ok(())
}
