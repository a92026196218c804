//! Win-rate statistics and crosstables.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Float;
use tribute_core::Seat;

use crate::play::MatchResult;

/// Half-width of the 95% normal-approximation interval, in percentage
/// points: `100 * 1.96 * sqrt(p * (1 - p) / n)`.
pub fn confidence_interval<F: Float>(p: F, n: u32) -> F {
    if n == 0 {
        return F::zero();
    }
    let hundred = F::from(100.0).unwrap();
    let z = F::from(1.96).unwrap();
    let n = F::from(n).unwrap();
    hundred * z * (p * (F::one() - p) / n).sqrt()
}

/// Result tally of one agent against one opponent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairRecord {
    pub games: u32,
    pub wins: u32,
    pub losses: u32,
    pub draws: u32,
}

impl PairRecord {
    /// Plain wins over games.
    pub fn rate(&self) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            self.wins as f64 / self.games as f64
        }
    }

    /// Wins plus half the draws, over games.
    pub fn score(&self) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            (self.wins as f64 + 0.5 * self.draws as f64) / self.games as f64
        }
    }

    pub fn ci(&self) -> f64 {
        confidence_interval(self.rate(), self.games)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Crosstable {
    agents: Vec<String>,
    /// Keyed by (agent, opponent).
    records: BTreeMap<(String, String), PairRecord>,
}

impl Crosstable {
    pub fn new(agents: &[String]) -> Self {
        Crosstable { agents: agents.to_vec(), records: BTreeMap::new() }
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn add(&mut self, result: &MatchResult) {
        for seat in Seat::BOTH {
            let me = &result.agents[seat.index()];
            let other = &result.agents[seat.other().index()];
            if !self.agents.contains(me) {
                self.agents.push(me.clone());
            }
            let r = self.records.entry((me.clone(), other.clone())).or_default();
            r.games += 1;
            match result.outcome.winner {
                Some(w) if w == seat => r.wins += 1,
                Some(_) => r.losses += 1,
                None => r.draws += 1,
            }
        }
    }

    pub fn record(&self, agent: &str, opponent: &str) -> PairRecord {
        self.records.get(&(agent.to_string(), opponent.to_string())).copied().unwrap_or_default()
    }

    /// Average score of `agent` over all its games, draws counting half.
    pub fn average(&self, agent: &str) -> f64 {
        let (mut points, mut games) = (0.0, 0u32);
        for ((a, _), r) in &self.records {
            if a == agent {
                points += r.wins as f64 + 0.5 * r.draws as f64;
                games += r.games;
            }
        }
        if games == 0 {
            0.0
        } else {
            points / games as f64
        }
    }

    /// Agents ordered by average score, best first.
    pub fn ranking(&self) -> Vec<(String, f64)> {
        let mut out: Vec<_> = self.agents.iter().map(|a| (a.clone(), self.average(a))).collect();
        out.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
        out
    }

    /// Aligned matrix of row-agent win rates, with averages on the right.
    pub fn to_text(&self) -> String {
        let width = self.agents.iter().map(String::len).max().unwrap_or(5).max(7);
        let mut s = String::new();
        let _ = write!(s, "{:width$}", "");
        for a in &self.agents {
            let _ = write!(s, "  {a:>width$}");
        }
        let _ = writeln!(s, "  {:>width$}", "average");
        for a in &self.agents {
            let _ = write!(s, "{a:width$}");
            for b in &self.agents {
                let r = self.record(a, b);
                if a == b || r.games == 0 {
                    let _ = write!(s, "  {:>width$}", "-");
                } else {
                    let _ = write!(s, "  {:>width$}", format!("{:.1}±{:.1}", 100.0 * r.rate(), r.ci()));
                }
            }
            let _ = writeln!(s, "  {:>width$.1}", 100.0 * self.average(a));
        }
        s
    }

    /// CSV with one row per ordered pair: `pair,games,wins,rate,ci`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["pair", "games", "wins", "rate", "ci"]).expect("in-memory write");
        for ((a, b), r) in &self.records {
            w.write_record([
                format!("{a} vs {b}"),
                r.games.to_string(),
                r.wins.to_string(),
                format!("{:.4}", r.rate()),
                format!("{:.2}", r.ci()),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

/// Wins split by the seat the winner occupied.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SeatReport {
    pub games: u32,
    pub first_wins: u32,
    pub second_wins: u32,
    pub draws: u32,
}

impl SeatReport {
    pub fn add(&mut self, result: &MatchResult) {
        self.games += 1;
        match result.outcome.winner {
            Some(Seat::First) => self.first_wins += 1,
            Some(Seat::Second) => self.second_wins += 1,
            None => self.draws += 1,
        }
    }

    pub fn first_rate(&self) -> f64 {
        ratio(self.first_wins, self.games)
    }

    pub fn second_rate(&self) -> f64 {
        ratio(self.second_wins, self.games)
    }
}

fn ratio(a: u32, b: u32) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}
