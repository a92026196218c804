use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tribute_core::{CardInstance, CardSet, MatchState, Move, NoEvents, PatronId, Scenario, SeededGameState, Seat};

use Seat::{First, Second};

const PICKS: [PatronId; 4] = [PatronId::Ansei, PatronId::Crows, PatronId::Hlaalu, PatronId::Pelin];

fn names(state: &MatchState, cards: &[CardInstance]) -> Vec<String> {
    cards.iter().map(|c| state.spec(c.card).name.clone()).collect()
}

fn multiset(cards: &[CardInstance]) -> BTreeMap<u32, u16> {
    cards.iter().map(|c| (c.id.0, c.card.0)).collect()
}

/// A handful of positions reached by random play.
fn sample_states() -> Vec<MatchState> {
    let cards = Arc::new(CardSet::bundled());
    let mut out = Vec::new();
    for seed in 0..30u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = MatchState::new(cards.clone(), PICKS, seed).unwrap();
        let steps = rng.gen_range(0..120);
        for _ in 0..steps {
            if s.is_finished() {
                break;
            }
            let moves = s.legal_moves();
            let mv = moves[rng.gen_range(0..moves.len())].clone();
            s.apply_move(&mv, &mut NoEvents).unwrap();
        }
        if !s.is_finished() {
            out.push(s);
        }
    }
    out
}

#[test]
fn own_draw_pile_is_sorted_by_name() {
    let s = Scenario::new(Arc::new(CardSet::bundled()), PICKS, 1)
        .unwrap()
        .draw_pile(First, &["gold", "writ_of_coin", "dune_scout"])
        .build();
    let view = s.view(First);
    assert_eq!(names(view.state(), &view.me().draw_pile), ["Dune Scout", "Gold", "Writ of Coin"]);
}

#[test]
fn opponent_hand_and_draw_merge_into_one_pool() {
    let s = Scenario::new(Arc::new(CardSet::bundled()), PICKS, 1)
        .unwrap()
        .hand(Second, &["gold", "gold", "fence", "heist", "cutpurse"])
        .draw_pile(Second, &["smuggler", "gold", "blackmail"])
        .build();
    let view = s.view(First);
    assert_eq!(view.opponent_pool().len(), 8);
    assert_eq!(view.opponent_hand_size(), 5);
    assert!(view.opponent().hand.is_empty() && view.opponent().draw_pile.is_empty());
    let pool = names(view.state(), view.opponent_pool());
    let mut sorted = pool.clone();
    sorted.sort();
    assert_eq!(pool, sorted);
}

#[test]
fn public_zones_look_the_same_from_both_seats() {
    for s in sample_states() {
        let (a, b) = (s.view(First), s.view(Second));
        assert_eq!(a.state().tavern(), b.state().tavern());
        assert_eq!(a.state().tavern(), s.tavern());
        assert_eq!(a.state().patrons(), b.state().patrons());
        for seat in Seat::BOTH {
            assert_eq!(a.state().player(seat).board, s.player(seat).board);
            assert_eq!(a.state().player(seat).cooldown, s.player(seat).cooldown);
            assert_eq!(a.state().player(seat).prestige, s.player(seat).prestige);
        }
    }
}

#[test]
fn views_of_states_with_the_same_knowledge_agree() {
    for s in sample_states() {
        let seat = s.current_seat();
        let view = s.view(seat);
        // Reshuffling hidden zones must not change the view.
        let reseeded = view.seeded(1234).into_inner();
        assert_eq!(reseeded.view(seat), view);
    }
}

#[test]
fn seeding_is_deterministic() {
    for s in sample_states() {
        let view = s.view(s.current_seat());
        assert_eq!(view.seeded(5), view.seeded(5));
    }
}

#[test]
fn seeded_opponent_cards_match_the_pool() {
    for s in sample_states() {
        let seat = s.current_seat();
        let view = s.view(seat);
        for seed in 0..4 {
            let seeded = view.seeded(seed);
            let opp = seeded.player(seat.other());
            assert_eq!(opp.hand.len(), view.opponent_hand_size());
            let mut all = opp.hand.clone();
            all.extend(opp.draw_pile.iter().copied());
            assert_eq!(multiset(&all), multiset(view.opponent_pool()));
            assert_eq!(
                multiset(&seeded.player(seat).draw_pile),
                multiset(&s.player(seat).draw_pile)
            );
            assert_eq!(seeded.tavern_pile().len(), s.tavern_pile().len());
        }
    }
}

#[test]
fn seeded_states_play_to_the_end() {
    for s in sample_states() {
        let view = s.view(s.current_seat());
        let mut seeded = view.seeded(77);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        while !seeded.is_finished() {
            let moves = seeded.legal_moves();
            let mv = moves[rng.gen_range(0..moves.len())].clone();
            seeded.apply_in_place(&mv, &mut NoEvents).unwrap();
        }
    }
}

#[test]
fn simulate_leaves_the_original_untouched() {
    for s in sample_states() {
        let seeded = s.view(s.current_seat()).seeded(9);
        let before = seeded.clone();
        for mv in seeded.legal_moves() {
            let _ = seeded.simulate(&mv).unwrap();
        }
        assert_eq!(seeded, before);
    }
}

#[test]
fn simulate_matches_apply_on_full_states() {
    for s in sample_states() {
        let full = SeededGameState::from_full_state(s.clone());
        for mv in s.legal_moves() {
            let (a, ea) = full.simulate(&mv).unwrap();
            let (b, eb) = s.apply(&mv).unwrap();
            assert_eq!(a.into_inner(), b);
            assert_eq!(ea, eb);
        }
    }
}

#[test]
fn off_turn_view_hides_pending_choice() {
    let cards = Arc::new(CardSet::bundled());
    let s = Scenario::new(cards, PICKS, 1).unwrap().hand(First, &["mirage_hawker"]).build();
    let id = s.player(First).hand[0].id;
    let (s, _) = s.apply(&Move::PlayCard(id)).unwrap();
    assert!(s.view(First).state().pending_choice().is_some());
    assert!(s.view(Second).state().pending_choice().is_none());
    assert!(s.view(Second).legal_moves().is_empty());
    assert_eq!(s.view(First).legal_moves(), s.legal_moves());
}
