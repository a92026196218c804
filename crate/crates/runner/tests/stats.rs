use std::time::Duration;

use tribute_core::{EndReason, Outcome, Seat};
use tribute_runner::seeds::{derive, mix};
use tribute_runner::{confidence_interval, AgentTiming, Crosstable, MatchResult, PairRecord};

fn result(first: &str, second: &str, winner: Option<Seat>) -> MatchResult {
    MatchResult {
        outcome: match winner {
            Some(w) => Outcome::win(w, EndReason::Prestige80),
            None => Outcome::draw(),
        },
        agents: [first.to_string(), second.to_string()],
        seed: 0,
        picks: None,
        turns: 10,
        wall_time: Duration::ZERO,
        timing: [AgentTiming::default(); 2],
        events: None,
    }
}

/// The interval formula written out independently, in single precision.
fn half_width(wins: u32, games: u32) -> f32 {
    let p = wins as f32 / games as f32;
    196.0 * (p * (1.0 - p) / games as f32).sqrt()
}

#[test]
fn interval_examples() {
    for (p, n, want) in [(0.627, 400, 4.7), (0.152, 400, 3.5), (0.565, 400, 4.9)] {
        let got: f64 = confidence_interval(p, n);
        assert!((got - want).abs() <= 0.05, "{p}: {got}");
    }
    assert_eq!(confidence_interval(0.0f64, 50), 0.0);
    assert_eq!(confidence_interval(1.0f64, 50), 0.0);
    for (wins, games) in [(0, 1), (3, 7), (200, 400), (399, 400)] {
        let r = PairRecord { games, wins, losses: games - wins, draws: 0 };
        assert!((r.ci() as f32 - half_width(wins, games)).abs() < 1e-3);
    }
}

#[test]
fn crosstable_counts_both_sides() {
    let mut t = Crosstable::new(&["alpha".into(), "beta".into()]);
    t.add(&result("alpha", "beta", Some(Seat::First)));
    t.add(&result("beta", "alpha", Some(Seat::First)));
    t.add(&result("alpha", "beta", Some(Seat::Second)));
    t.add(&result("beta", "alpha", None));
    let ab = t.record("alpha", "beta");
    let ba = t.record("beta", "alpha");
    assert_eq!(ab, PairRecord { games: 4, wins: 1, losses: 2, draws: 1 });
    assert_eq!((ba.wins, ba.losses, ba.draws), (2, 1, 1));
    assert_eq!(ab.games, ab.wins + ab.losses + ab.draws);
    assert!((ab.rate() + ba.rate() - (1.0 - 0.25)).abs() < 1e-12);
    assert_eq!(t.average("alpha"), 1.5 / 4.0);
    assert_eq!(t.ranking()[0].0, "beta");
}

#[test]
fn csv_has_one_row_per_ordered_pair() {
    let mut t = Crosstable::new(&["alpha".into(), "beta".into()]);
    for _ in 0..3 {
        t.add(&result("alpha", "beta", Some(Seat::First)));
    }
    t.add(&result("beta", "alpha", Some(Seat::First)));
    let csv = t.to_csv();
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["pair", "games", "wins", "rate", "ci"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][0], "alpha vs beta");
    assert_eq!(&rows[0][1], "4");
    assert_eq!(&rows[0][2], "3");
    assert_eq!(&rows[0][3], "0.7500");
    assert_eq!(&rows[0][4], format!("{:.2}", half_width(3, 4)));
}

#[test]
fn text_table_is_aligned() {
    let mut t = Crosstable::new(&["alpha".into(), "beta-long-name".into()]);
    t.add(&result("alpha", "beta-long-name", Some(Seat::First)));
    let text = t.to_text();
    let widths: Vec<usize> = text.lines().map(|l| l.chars().count()).collect();
    assert_eq!(widths.len(), 3);
    assert!(widths.iter().all(|&w| w == widths[0]), "{text}");
    assert!(text.contains("100.0±0.0"));
}

#[test]
fn seed_mixer_is_splitmix64() {
    // The first two outputs of SplitMix64 started from state 0.
    assert_eq!(mix(0), 0xe220_a839_7b1d_cdaf);
    assert_eq!(mix(0x9e37_79b9_7f4a_7c15), 0x6e78_9e6a_a1b9_65f4);
}

#[test]
fn derived_seeds_are_stable_and_distinct() {
    assert_eq!(derive(7, &[1, 2]), derive(7, &[1, 2]));
    let mut seen = std::collections::HashSet::new();
    for base in 0..20 {
        for a in 0..20 {
            for b in 0..5 {
                assert!(seen.insert(derive(base, &[a, b])));
            }
        }
    }
    assert_ne!(derive(1, &[2, 3]), derive(1, &[3, 2]));
}
