use std::sync::Arc;

use tribute_core::{
    CardInstance, CardSet, ChoiceKind, EndReason, Endgame, Event, Favor, InstanceId, MatchState, Move, NoEvents,
    PatronId, RulesError, Scenario, Seat,
};

use PatronId::*;
use Seat::{First, Second};

const PICKS: [PatronId; 4] = [Ansei, Crows, Hlaalu, Pelin];

fn cards() -> Arc<CardSet> {
    Arc::new(CardSet::bundled())
}

fn scenario(picks: [PatronId; 4]) -> Scenario {
    Scenario::new(cards(), picks, 11).unwrap()
}

fn find(state: &MatchState, zone: &[CardInstance], id: &str) -> InstanceId {
    zone.iter()
        .find(|c| state.spec(c.card).id == id)
        .unwrap_or_else(|| panic!("{id} not in zone"))
        .id
}

fn in_hand(state: &MatchState, seat: Seat, id: &str) -> InstanceId {
    find(state, &state.player(seat).hand, id)
}

fn play(state: &mut MatchState, mv: Move) -> Vec<Event> {
    assert!(state.legal_moves().contains(&mv), "{mv} not legal; legal: {:?}", state.legal_moves());
    let mut events = Vec::new();
    state.apply_move(&mv, &mut events).unwrap();
    events
}

fn play_card(state: &mut MatchState, id: &str) -> Vec<Event> {
    let seat = state.current_seat();
    let inst = in_hand(state, seat, id);
    play(state, Move::PlayCard(inst))
}

// ---- new_match ----

#[test]
fn new_match_deals_five_and_five() {
    let s = MatchState::new(cards(), PICKS, 1).unwrap();
    for seat in Seat::BOTH {
        assert_eq!(s.player(seat).hand.len(), 5);
        assert_eq!(s.player(seat).draw_pile.len(), 5);
        let gold = s.player(seat).owned().filter(|c| s.spec(c.card).id == "gold").count();
        assert_eq!(gold, 6);
    }
    assert_eq!(s.tavern().len(), 5);
    assert!(s.patrons().iter().all(|p| p.favor == if p.patron == Treasury { Favor::None } else { Favor::Neutral }));
    assert_eq!(s.current_player().patron_calls, 1);
}

#[test]
fn new_match_is_deterministic() {
    let a = MatchState::new(cards(), PICKS, 99).unwrap();
    let b = MatchState::new(cards(), PICKS, 99).unwrap();
    assert_eq!(a, b);
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}

#[test]
fn second_player_gets_extra_coin_on_first_turn() {
    let mut s = MatchState::new(cards(), PICKS, 3).unwrap();
    assert_eq!(s.player(First).coins, 0);
    play(&mut s, Move::EndTurn);
    assert_eq!(s.current_seat(), Second);
    assert_eq!(s.player(Second).coins, 1);
    play(&mut s, Move::EndTurn);
    assert_eq!(s.player(First).coins, 0);
}

#[test]
fn new_match_rejects_bad_drafts() {
    assert!(matches!(
        MatchState::new(cards(), [Ansei, Ansei, Crows, Pelin], 1),
        Err(RulesError::InvalidDraft(_))
    ));
    assert!(matches!(
        MatchState::new(cards(), [Ansei, Treasury, Crows, Pelin], 1),
        Err(RulesError::InvalidDraft(_))
    ));
}

// ---- legal_moves ----

#[test]
fn first_turn_has_five_plays_and_end_turn() {
    for seed in 0..20 {
        let s = MatchState::new(cards(), PICKS, seed).unwrap();
        let moves = s.legal_moves();
        assert_eq!(moves.len(), 6);
        assert_eq!(moves.iter().filter(|m| matches!(m, Move::PlayCard(_))).count(), 5);
        assert_eq!(moves.last(), Some(&Move::EndTurn));
    }
}

#[test]
fn acquire_offers_exactly_the_eligible_cards() {
    let mut s = scenario(PICKS)
        .tavern(&["royal_decree", "dune_scout", "fence", "strongbox", "spirit_of_sands"])
        .tavern_pile(&["carrion_feast", "gold"])
        .resources(First, 6, 0, 0)
        .build();
    play(&mut s, Move::BuyCard(0));
    let choice = s.pending_choice().expect("acquire pending");
    assert_eq!(choice.kind, ChoiceKind::Acquire { max_cost: 5 });
    let moves = s.legal_moves();
    assert_eq!(moves.len(), 3);
    assert!(moves.iter().all(|m| matches!(m, Move::MakeChoice(p) if p.len() == 1)));
    // Acquired card follows buy routing without cost.
    play(&mut s, moves[0].clone());
    assert!(s.pending_choice().is_none());
    assert_eq!(s.player(First).coins, 0);
    assert_eq!(s.player(First).cooldown.len(), 1);
    assert_eq!(s.tavern().len(), 5);
}

#[test]
fn finished_match_has_no_moves_and_rejects_moves() {
    let mut s = scenario(PICKS).resources(First, 0, 0, 79).build();
    play(&mut s, Move::EndTurn);
    play(&mut s, Move::EndTurn);
    let mut s = scenario(PICKS).resources(First, 0, 1, 79).build();
    play(&mut s, Move::EndTurn);
    assert!(s.is_finished());
    assert!(s.legal_moves().is_empty());
    assert!(matches!(s.apply_move(&Move::EndTurn, &mut NoEvents), Err(RulesError::MatchFinished)));
}

#[test]
fn illegal_moves_are_rejected_without_change() {
    let s = MatchState::new(cards(), PICKS, 5).unwrap();
    let mut t = s.clone();
    assert!(matches!(t.apply_move(&Move::BuyCard(0), &mut NoEvents), Err(RulesError::IllegalMove { .. })));
    assert!(matches!(t.apply_move(&Move::choice([0]), &mut NoEvents), Err(RulesError::IllegalMove { .. })));
    assert!(matches!(t.apply_move(&Move::PlayCard(InstanceId(9999)), &mut NoEvents), Err(RulesError::IllegalMove { .. })));
    assert_eq!(s, t);
}

// ---- apply_move: buy and attack ----

#[test]
fn buying_pays_cost_and_refills_tavern() {
    let mut s = scenario(PICKS)
        .tavern(&["grave_robber", "dune_scout", "fence", "strongbox", "gold"])
        .tavern_pile(&["heist"])
        .resources(First, 6, 0, 0)
        .build();
    play(&mut s, Move::BuyCard(0));
    assert_eq!(s.player(First).coins, 2);
    assert_eq!(s.spec(s.player(First).cooldown[0].card).id, "grave_robber");
    assert_eq!(s.tavern().len(), 5);
    assert_eq!(s.spec(s.tavern()[0].card).id, "heist");
}

#[test]
fn partial_attack_leaves_agent_on_board() {
    let mut s = scenario(PICKS).board(Second, &["dune_warden"]).resources(First, 0, 3, 0).build();
    let target = s.player(Second).board[0].id;
    play(&mut s, Move::AttackAgent(target));
    assert_eq!(s.player(First).power, 0);
    assert_eq!(s.player(Second).board[0].health, 2);
}

#[test]
fn lethal_attack_sends_agent_to_owner_cooldown() {
    let mut s = scenario(PICKS).board(Second, &["dune_warden"]).resources(First, 0, 6, 0).build();
    let target = s.player(Second).board[0].id;
    play(&mut s, Move::AttackAgent(target));
    assert_eq!(s.player(First).power, 1);
    assert!(s.player(Second).board.is_empty());
    assert_eq!(s.player(Second).cooldown[0].id, target);
}

#[test]
fn defeated_contract_agent_leaves_the_match() {
    let mut s = scenario(PICKS).board(Second, &["mercenary_captain"]).resources(First, 0, 4, 0).build();
    let target = s.player(Second).board[0].id;
    play(&mut s, Move::AttackAgent(target));
    assert!(s.player(Second).cooldown.is_empty());
    assert_eq!(s.removed()[0].id, target);
}

#[test]
fn attack_needs_power() {
    let s = scenario(PICKS).board(Second, &["dune_warden"]).build();
    assert!(!s.legal_moves().iter().any(|m| matches!(m, Move::AttackAgent(_))));
}

#[test]
fn contract_action_plays_on_purchase_and_expires() {
    let mut s = scenario(PICKS)
        .tavern(&["tribute_levy", "gold", "gold", "gold", "gold"])
        .resources(First, 3, 0, 0)
        .build();
    play(&mut s, Move::BuyCard(0));
    assert_eq!(s.player(First).power, 2);
    assert_eq!(s.spec(s.player(First).played[0].card).id, "tribute_levy");
    let id = s.player(First).played[0].id;
    play(&mut s, Move::EndTurn);
    assert!(s.removed().iter().any(|c| c.id == id));
    assert!(!s.player(First).owned().any(|c| c.id == id));
}

#[test]
fn contract_agent_is_summoned_on_purchase() {
    let mut s = scenario(PICKS)
        .tavern(&["hired_blade", "gold", "gold", "gold", "gold"])
        .resources(First, 4, 0, 0)
        .build();
    play(&mut s, Move::BuyCard(0));
    assert_eq!(s.player(First).power, 2);
    assert_eq!(s.spec(s.player(First).board[0].card).id, "hired_blade");
}

// ---- agents ----

#[test]
fn summoned_agent_waits_a_turn_then_activates_once() {
    let mut s = scenario(PICKS).hand(First, &["blade_dancer"]).build();
    play_card(&mut s, "blade_dancer");
    assert_eq!(s.player(First).power, 2);
    let agent = s.player(First).board[0].id;
    assert!(!s.legal_moves().contains(&Move::ActivateAgent(agent)));
    play(&mut s, Move::EndTurn);
    play(&mut s, Move::EndTurn);
    play(&mut s, Move::ActivateAgent(agent));
    assert!(!s.legal_moves().contains(&Move::ActivateAgent(agent)));
}

#[test]
fn summon_onto_full_board_goes_to_played() {
    let seven = ["shieldbearer"; 7];
    let mut s = scenario(PICKS).board(First, &seven).hand(First, &["guild_enforcer"]).build();
    play_card(&mut s, "guild_enforcer");
    assert_eq!(s.player(First).board.len(), 7);
    assert_eq!(s.spec(s.player(First).played[0].card).id, "guild_enforcer");
    assert_eq!((s.player(First).coins, s.player(First).power), (1, 1));
}

#[test]
fn heal_caps_at_printed_health() {
    let mut s = scenario(PICKS)
        .board(First, &["blade_dancer"])
        .damage(First, 0, 1)
        .hand(First, &["sand_courier"])
        .build();
    play_card(&mut s, "sand_courier");
    let agent = s.player(First).board[0].id;
    // Second Ansei card this turn: combo 2 heals by 2, capped at 3.
    play(&mut s, Move::ActivateAgent(agent));
    assert_eq!(s.player(First).board[0].health, 3);
}

// ---- combos ----

#[test]
fn first_card_fires_only_its_play_effect() {
    let mut s = scenario(PICKS).hand(First, &["trade_apprentice"]).build();
    play_card(&mut s, "trade_apprentice");
    assert_eq!(s.player(First).coins, 1);
    assert_eq!(s.combo_count(Hlaalu), 1);
}

#[test]
fn second_card_triggers_earlier_combo_slot() {
    let mut s = scenario(PICKS).hand(First, &["trade_apprentice", "guild_ledger"]).build();
    play_card(&mut s, "trade_apprentice");
    let events = play_card(&mut s, "guild_ledger");
    // guild_ledger play (+1) and trade_apprentice combo 2 (+1).
    assert_eq!(s.player(First).coins, 3);
    let combos: Vec<_> = events.iter().filter(|e| matches!(e, Event::Combo { level: 2, .. })).collect();
    assert_eq!(combos.len(), 1);
}

#[test]
fn third_card_fires_both_earlier_combo_three_slots() {
    let mut s = scenario(PICKS)
        .hand(First, &["sunforged_blade", "mirage_hawker", "dune_scout", "carrion_pick"])
        .build();
    play_card(&mut s, "sunforged_blade");
    play_card(&mut s, "carrion_pick");
    play_card(&mut s, "mirage_hawker");
    // The OR on mirage_hawker: take the coin side.
    let left = s.legal_moves()[0].clone();
    play(&mut s, left);
    let events = play_card(&mut s, "dune_scout");
    let p = s.player(First);
    assert_eq!(p.power, 4 + 1 + 1 + 2);
    assert_eq!(p.coins, 2 + 1 + 1 + 2);
    assert_eq!(s.combo_count(Ansei), 3);
    let level3 = events.iter().filter(|e| matches!(e, Event::Combo { level: 3, .. })).count();
    assert_eq!(level3, 2);
}

#[test]
fn combo_is_independent_of_interleaving() {
    let order_a = ["trade_apprentice", "carrion_pick", "silk_merchant", "ravenous_urchin"];
    let order_b = ["carrion_pick", "ravenous_urchin", "trade_apprentice", "silk_merchant"];
    let run = |order: &[&str]| {
        let mut s = scenario(PICKS).hand(First, order).build();
        for id in order {
            play_card(&mut s, id);
        }
        (s.player(First).coins, s.player(First).power)
    };
    assert_eq!(run(&order_a), run(&order_b));
    assert_eq!(run(&order_a), (1 + 2 + 1, 1 + 1 + 1));
}

#[test]
fn combo_counters_reset_at_turn_end() {
    let mut s = scenario(PICKS).hand(First, &["trade_apprentice"]).build();
    play_card(&mut s, "trade_apprentice");
    play(&mut s, Move::EndTurn);
    assert_eq!(s.combo_count(Hlaalu), 0);
    assert!(s.used_this_turn().is_empty());
}

// ---- patrons ----

#[test]
fn crows_converts_coins_to_power() {
    let mut s = scenario(PICKS).resources(First, 5, 0, 0).build();
    play(&mut s, Move::ActivatePatron(Crows));
    assert_eq!((s.player(First).coins, s.player(First).power), (0, 4));
    assert_eq!(s.patron(Crows).unwrap().favor, Favor::Favors(First));
    assert_eq!(s.player(First).patron_calls, 0);
}

#[test]
fn hlaalu_sacrifice_grants_cost_minus_one() {
    let mut s = scenario(PICKS).hand(First, &["broker_of_favors", "gold"]).build();
    play(&mut s, Move::ActivatePatron(Hlaalu));
    let choice = s.pending_choice().unwrap();
    assert_eq!(choice.kind, ChoiceKind::Sacrifice { patron: Hlaalu });
    play(&mut s, Move::choice([0]));
    assert_eq!(s.player(First).prestige, 5);
    assert_eq!(s.spec(s.removed()[0].card).id, "broker_of_favors");
}

#[test]
fn hlaalu_needs_a_card_worth_sacrificing() {
    let s = scenario(PICKS).hand(First, &["gold", "guild_ledger"]).build();
    assert!(!s.can_activate_patron(Hlaalu));
}

#[test]
fn treasury_needs_two_coins() {
    let mut s = scenario(PICKS).hand(First, &["gold"]).resources(First, 1, 0, 0).build();
    assert!(!s.legal_moves().contains(&Move::ActivatePatron(Treasury)));
    assert!(matches!(
        s.apply_move(&Move::ActivatePatron(Treasury), &mut NoEvents),
        Err(RulesError::IllegalMove { .. })
    ));
}

#[test]
fn treasury_sacrifices_and_creates_writ() {
    let mut s = scenario(PICKS).hand(First, &["gold"]).resources(First, 2, 0, 0).build();
    play(&mut s, Move::ActivatePatron(Treasury));
    play(&mut s, Move::choice([0]));
    assert_eq!(s.player(First).coins, 0);
    assert_eq!(s.spec(s.player(First).cooldown[0].card).id, "writ_of_coin");
    assert_eq!(s.patron(Treasury).unwrap().favor, Favor::None);
}

#[test]
fn favored_ansei_and_crows_cannot_be_reactivated() {
    let s = scenario(PICKS)
        .favor(Ansei, Favor::Favors(First))
        .favor(Crows, Favor::Favors(First))
        .favor(Pelin, Favor::Favors(First))
        .resources(First, 5, 5, 0)
        .build();
    let moves = s.legal_moves();
    assert!(!moves.contains(&Move::ActivatePatron(Ansei)));
    assert!(!moves.contains(&Move::ActivatePatron(Crows)));
    assert!(moves.contains(&Move::ActivatePatron(Pelin)));
}

#[test]
fn favor_shifts_one_step() {
    let mut s = scenario(PICKS).favor(Pelin, Favor::Favors(Second)).resources(First, 0, 2, 0).build();
    play(&mut s, Move::ActivatePatron(Pelin));
    assert_eq!(s.patron(Pelin).unwrap().favor, Favor::Neutral);
}

#[test]
fn ansei_favor_pays_a_coin_at_turn_start() {
    let mut s = scenario(PICKS).favor(Ansei, Favor::Favors(Second)).build();
    play(&mut s, Move::EndTurn);
    assert_eq!(s.player(Second).coins, 1);
}

#[test]
fn pelin_returns_agent_to_top_of_draw() {
    let mut s = scenario(PICKS)
        .cooldown(First, &["gold", "siege_archer"])
        .draw_pile(First, &["gold"])
        .resources(First, 0, 2, 0)
        .build();
    play(&mut s, Move::ActivatePatron(Pelin));
    assert_eq!(s.pending_choice().unwrap().kind, ChoiceKind::PatronReturnAgent);
    assert_eq!(s.legal_moves(), vec![Move::choice([0])]);
    play(&mut s, Move::choice([0]));
    let top = s.player(First).draw_pile.last().unwrap();
    assert_eq!(s.spec(top.card).id, "siege_archer");
}

#[test]
fn rajhin_creates_bewilderment_for_opponent() {
    let mut s = scenario([Rajhin, Crows, Hlaalu, Pelin]).resources(First, 3, 0, 0).build();
    play(&mut s, Move::ActivatePatron(Rajhin));
    assert_eq!(s.spec(s.player(Second).cooldown[0].card).id, "bewilderment");
}

#[test]
fn red_eagle_draws_a_card() {
    let mut s = scenario([RedEagle, Crows, Hlaalu, Pelin])
        .draw_pile(First, &["gold"])
        .resources(First, 0, 2, 0)
        .build();
    play(&mut s, Move::ActivatePatron(RedEagle));
    assert_eq!(s.player(First).hand.len(), 1);
    assert_eq!(s.player(First).power, 0);
}

// ---- end_turn ----

#[test]
fn unspent_power_becomes_prestige() {
    let mut s = scenario(PICKS).resources(First, 2, 3, 0).build();
    play(&mut s, Move::EndTurn);
    assert_eq!((s.player(First).prestige, s.player(First).power, s.player(First).coins), (3, 0, 0));
}

#[test]
fn taunt_absorbs_power_before_conversion() {
    let mut s = scenario(PICKS)
        .board(Second, &["shieldbearer"])
        .damage(Second, 0, 1)
        .resources(First, 0, 3, 0)
        .build();
    let events = play(&mut s, Move::EndTurn);
    assert!(s.player(Second).board.is_empty());
    assert_eq!(s.spec(s.player(Second).cooldown[0].card).id, "shieldbearer");
    assert_eq!(s.player(First).prestige, 1);
    assert!(events.iter().any(|e| matches!(e, Event::Attack { automatic: true, damage: 2, .. })));
}

#[test]
fn taunts_are_hit_in_board_order() {
    let mut s = scenario(PICKS)
        .board(Second, &["guild_enforcer", "shieldbearer", "dune_warden"])
        .resources(First, 0, 5, 0)
        .build();
    play(&mut s, Move::EndTurn);
    let board = &s.player(Second).board;
    assert_eq!(board.len(), 2);
    assert_eq!(s.spec(board[1].card).id, "dune_warden");
    assert_eq!(board[1].health, 3);
    assert_eq!(s.player(First).prestige, 0);
}

#[test]
fn owed_discard_opens_choice_for_incoming_player() {
    let mut s = scenario([Crows, Ansei, Hlaalu, Pelin])
        .hand(First, &["carrion_pick", "shadow_whisper"])
        .hand(Second, &["gold", "gold", "gold", "gold", "gold"])
        .build();
    play_card(&mut s, "carrion_pick");
    play_card(&mut s, "shadow_whisper");
    play(&mut s, Move::EndTurn);
    let choice = s.pending_choice().expect("discard pending");
    assert_eq!(choice.kind, ChoiceKind::Discard);
    let moves = s.legal_moves();
    assert!(!moves.is_empty() && moves.iter().all(|m| matches!(m, Move::MakeChoice(_))));
    // Five identical golds collapse into one distinct selection.
    assert_eq!(moves.len(), 1);
    play(&mut s, moves[0].clone());
    assert_eq!(s.player(Second).hand.len(), 4);
    assert_eq!(s.player(Second).cooldown.len(), 1);
}

#[test]
fn played_and_hand_move_to_cooldown_and_five_are_drawn() {
    let mut s = MatchState::new(cards(), PICKS, 8).unwrap();
    let first = s.player(First).hand[0].id;
    play(&mut s, Move::PlayCard(first));
    play(&mut s, Move::EndTurn);
    let p = s.player(First);
    assert!(p.played.is_empty());
    assert_eq!(p.hand.len(), 5);
    assert_eq!(p.cooldown.len(), 5);
    assert!(p.cooldown.iter().any(|c| c.id == first));
}

// ---- terminal conditions ----

#[test]
fn fourth_favor_wins_immediately_with_effects_pending() {
    let mut s = scenario(PICKS)
        .favor(Ansei, Favor::Favors(First))
        .favor(Crows, Favor::Favors(First))
        .favor(Pelin, Favor::Favors(First))
        .hand(First, &["broker_of_favors"])
        .build();
    let events = play(&mut s, Move::ActivatePatron(Hlaalu));
    let outcome = s.outcome().unwrap();
    assert_eq!(outcome.winner, Some(First));
    assert_eq!(outcome.reason, EndReason::PatronFavor);
    assert!(matches!(events.last(), Some(Event::GameEnd { .. })));
}

#[test]
fn reaching_eighty_wins_at_turn_end() {
    let mut s = scenario(PICKS).resources(First, 0, 5, 76).build();
    play(&mut s, Move::EndTurn);
    let o = s.outcome().unwrap();
    assert_eq!((o.winner, o.reason), (Some(First), EndReason::Prestige80));
}

#[test]
fn sudden_death_leader_wins_if_not_beaten() {
    let mut s = scenario(PICKS)
        .hand(Second, &["veteran_charge"])
        .resources(First, 0, 5, 40)
        .resources(Second, 0, 3, 40)
        .build();
    play(&mut s, Move::EndTurn);
    assert_eq!(s.endgame(), Endgame::SuddenDeath(First));
    assert_eq!(s.player(First).prestige, 45);
    play_card(&mut s, "veteran_charge");
    play(&mut s, Move::EndTurn);
    assert_eq!(s.player(Second).prestige, 44);
    let o = s.outcome().unwrap();
    assert_eq!((o.winner, o.reason), (Some(First), EndReason::SuddenDeath));
}

#[test]
fn matching_the_leader_is_not_enough() {
    let mut s = scenario(PICKS)
        .to_move(Second)
        .resources(First, 0, 0, 45)
        .resources(Second, 0, 5, 40)
        .endgame(Endgame::SuddenDeath(First))
        .build();
    play(&mut s, Move::EndTurn);
    assert_eq!(s.outcome().unwrap().winner, Some(First));
}

#[test]
fn sudden_death_passes_to_a_player_who_beats_the_leader() {
    let mut s = scenario(PICKS)
        .to_move(Second)
        .resources(First, 0, 0, 45)
        .resources(Second, 0, 6, 40)
        .endgame(Endgame::SuddenDeath(First))
        .build();
    play(&mut s, Move::EndTurn);
    assert!(!s.is_finished());
    assert_eq!(s.endgame(), Endgame::SuddenDeath(Second));
}

#[test]
fn sudden_death_ends_if_leader_falls_below_threshold() {
    let mut s = scenario([Rajhin, Crows, Hlaalu, Pelin])
        .to_move(Second)
        .hand(Second, &["blackmail"])
        .resources(First, 0, 0, 41)
        .resources(Second, 0, 0, 20)
        .endgame(Endgame::SuddenDeath(First))
        .build();
    play_card(&mut s, "blackmail");
    assert_eq!(s.player(First).prestige, 38);
    play(&mut s, Move::EndTurn);
    assert!(!s.is_finished());
    assert_eq!(s.endgame(), Endgame::Normal);
}

#[test]
fn turn_limit_is_a_draw() {
    let mut s = scenario(PICKS).turn(500).build();
    play(&mut s, Move::EndTurn);
    let o = s.outcome().unwrap();
    assert_eq!((o.winner, o.reason), (None, EndReason::TurnLimitDraw));
    assert_eq!(s.turn(), 501);
}

// ---- keyword effects ----

#[test]
fn draw_reshuffles_cooldown_when_pile_runs_out() {
    let mut s = scenario([RedEagle, Crows, Hlaalu, Pelin])
        .hand(First, &["skyborne_scout", "skyborne_scout"])
        .draw_pile(First, &["gold"])
        .cooldown(First, &["gold", "gold", "gold", "eagle_squire"])
        .build();
    let first = play_card(&mut s, "skyborne_scout");
    assert!(!first.iter().any(|e| matches!(e, Event::Shuffle { .. })));
    let second = play_card(&mut s, "skyborne_scout");
    let tags: Vec<_> = second.iter().filter(|e| e.is_random()).map(|e| e.tag()).collect();
    assert_eq!(tags, ["SHUFFLE", "DRAW"]);
    let p = s.player(First);
    assert_eq!((p.hand.len(), p.draw_pile.len(), p.cooldown.len()), (2, 3, 0));
}

#[test]
fn opponent_prestige_floors_at_zero() {
    let mut s = scenario([Rajhin, Crows, Hlaalu, Pelin])
        .hand(First, &["blackmail"])
        .resources(Second, 0, 0, 2)
        .build();
    play_card(&mut s, "blackmail");
    assert_eq!(s.player(Second).prestige, 0);
    assert_eq!(s.player(First).power, 2);
}

#[test]
fn knockout_without_targets_is_a_no_op() {
    let mut s = scenario([Crows, Ansei, Hlaalu, Pelin])
        .hand(First, &["carrion_pick", "feathered_assassin"])
        .build();
    play_card(&mut s, "carrion_pick");
    play_card(&mut s, "feathered_assassin");
    assert!(s.pending_choice().is_none());
    assert_eq!(s.legal_moves().last(), Some(&Move::EndTurn));
}

#[test]
fn knockout_picks_exactly_one_agent() {
    let mut s = scenario([Crows, Ansei, Hlaalu, Pelin])
        .hand(First, &["carrion_pick", "feathered_assassin"])
        .board(Second, &["shieldbearer", "dune_warden"])
        .build();
    play_card(&mut s, "carrion_pick");
    play_card(&mut s, "feathered_assassin");
    assert_eq!(s.pending_choice().unwrap().kind, ChoiceKind::Knockout);
    assert_eq!(s.legal_moves().len(), 2);
    play(&mut s, Move::choice([1]));
    assert_eq!(s.player(Second).board.len(), 1);
    assert_eq!(s.spec(s.player(Second).cooldown[0].card).id, "dune_warden");
}

#[test]
fn or_branch_offers_both_sides() {
    let mut s = scenario(PICKS).hand(First, &["mirage_hawker"]).build();
    play_card(&mut s, "mirage_hawker");
    assert_eq!(s.pending_choice().unwrap().kind, ChoiceKind::EffectBranch);
    assert_eq!(s.legal_moves(), vec![Move::choice([0]), Move::choice([1])]);
    play(&mut s, Move::choice([1]));
    assert_eq!((s.player(First).coins, s.player(First).power), (0, 2));
}

#[test]
fn destroy_allows_zero_up_to_n() {
    let mut s = scenario(PICKS).hand(First, &["silk_merchant", "ledger_keeper"]).build();
    play_card(&mut s, "silk_merchant");
    play_card(&mut s, "ledger_keeper");
    assert_eq!(s.pending_choice().unwrap().kind, ChoiceKind::Destroy);
    let moves = s.legal_moves();
    // Pick none, or one of the two played cards.
    assert_eq!(moves.len(), 3);
    assert!(moves.contains(&Move::choice([])));
    play(&mut s, Move::choice([0]));
    assert_eq!(s.player(First).played.len(), 1);
    assert_eq!(s.spec(s.removed()[0].card).id, "silk_merchant");
}

#[test]
fn replace_cycles_tavern_cards_to_the_bottom() {
    let mut s = scenario([Rajhin, Crows, Hlaalu, Pelin])
        .hand(First, &["pickpocket", "smuggler"])
        .tavern(&["heist", "fence", "cutpurse", "gold", "strongbox"])
        .tavern_pile(&["blackmail", "night_burglar"])
        .build();
    play_card(&mut s, "pickpocket");
    play_card(&mut s, "smuggler");
    play(&mut s, Move::choice([0]));
    assert_eq!(s.pending_choice().unwrap().kind, ChoiceKind::Replace);
    play(&mut s, Move::choice([0]));
    assert_eq!(s.spec(s.tavern()[0].card).id, "blackmail");
    assert_eq!(s.spec(s.tavern_pile()[0].card).id, "heist");
    assert_eq!(s.tavern().len(), 5);
}

#[test]
fn return_puts_cards_on_top_in_chosen_order() {
    let mut s = scenario(PICKS)
        .hand(First, &["sand_courier", "wandering_sage"])
        .cooldown(First, &["gold", "dune_scout"])
        .build();
    play_card(&mut s, "sand_courier");
    play_card(&mut s, "wandering_sage");
    let choice = s.pending_choice().unwrap();
    assert_eq!(choice.kind, ChoiceKind::Return);
    assert_eq!(s.legal_moves().len(), 2);
    play(&mut s, Move::choice([1]));
    assert_eq!(s.spec(s.player(First).draw_pile.last().unwrap().card).id, "dune_scout");
}

#[test]
fn patron_keyword_grants_extra_call() {
    let mut s = scenario(PICKS)
        .hand(First, &["guild_ledger", "broker_of_favors"])
        .build();
    play_card(&mut s, "guild_ledger");
    play_card(&mut s, "broker_of_favors");
    assert_eq!(s.player(First).patron_calls, 2);
}

// ---- event log ----

#[test]
fn event_lines_start_with_stable_tags() {
    let mut s = MatchState::new(cards(), PICKS, 21).unwrap();
    let mut events = Vec::new();
    for _ in 0..40 {
        let mv = s.legal_moves()[0].clone();
        s.apply_move(&mv, &mut events).unwrap();
    }
    let tags = [
        "TURN_START", "PLAY", "BUY", "REFILL", "COMBO", "EFFECT", "DRAW", "SHUFFLE", "PATRON", "ATTACK", "CHOICE",
        "ZONE", "CREATE", "SUDDEN_DEATH", "TURN_END", "GAME_END",
    ];
    for e in &events {
        let line = e.line(s.cards());
        let tag = line.split(' ').next().unwrap();
        assert!(tags.contains(&tag), "{line}");
        assert!(!line.contains('\n'));
    }
    assert!(events.iter().any(|e| e.tag() == "TURN_END"));
}
