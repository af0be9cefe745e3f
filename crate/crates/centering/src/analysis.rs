//! Distribution tables, the 2×2 χ² statistic and gold evaluation.

use std::collections::BTreeMap;
use std::fmt;

use centering_core::{Cue, Discourse, DiscourseReport, Transition};

use crate::report::column;

pub const COLUMNS: [&str; 4] = ["CONTINUE", "RETAIN", "SMOOTH-SHIFT", "ROUGH-SHIFT"];

/// Transition counts of preferred readings; row 0 holds utterances with at
/// least one zero, row 1 the others. Discourse-initial utterances are skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransitionTable {
    pub counts: [[usize; 4]; 2],
}

impl TransitionTable {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn column_total(&self, c: usize) -> usize {
        self.counts[0][c] + self.counts[1][c]
    }

    /// CONTINUE against everything else, crossed with zero/no zero:
    /// (continue & zero, continue & no zero, other & zero, other & no zero).
    pub fn continue_split(&self) -> (usize, usize, usize, usize) {
        let rest = |r: usize| self.counts[r][1..].iter().sum::<usize>();
        (self.counts[0][0], self.counts[1][0], rest(0), rest(1))
    }
}

impl fmt::Display for TransitionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14}{:>10}{:>10}{:>14}{:>13}",
            "", COLUMNS[0], COLUMNS[1], COLUMNS[2], COLUMNS[3]
        )?;
        for (name, row) in ["with zero", "without zero"].iter().zip(&self.counts) {
            writeln!(
                f,
                "{:<14}{:>10}{:>10}{:>14}{:>13}",
                name, row[0], row[1], row[2], row[3]
            )?;
        }
        write!(
            f,
            "{:<14}{:>10}{:>10}{:>14}{:>13}",
            "total",
            self.column_total(0),
            self.column_total(1),
            self.column_total(2),
            self.column_total(3)
        )
    }
}

pub fn tabulate_transitions(reports: &[DiscourseReport]) -> TransitionTable {
    let mut t = TransitionTable::default();
    for u in reports
        .iter()
        .flat_map(|r| &r.utterances)
        .filter(|u| !u.seed)
    {
        let row = if u.has_zero { 0 } else { 1 };
        t.counts[row][column(u.transition())] += 1;
    }
    t
}

/// Pearson χ² of a 2×2 table without continuity correction; `None` when a
/// row or column margin is zero.
pub fn chi_square_2x2(a: u64, b: u64, c: u64, d: u64) -> Option<f64> {
    let margins = [a + b, c + d, a + c, b + d];
    if margins.contains(&0) {
        return None;
    }
    let n = (a + b + c + d) as f64;
    let diff = a as f64 * d as f64 - b as f64 * c as f64;
    let denom: f64 = margins.iter().map(|&m| m as f64).product();
    Some(n * diff * diff / denom)
}

/// Cues credited among ROUGH-SHIFT utterances with a zero. One utterance
/// can credit several cues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CueCounts {
    pub lexical: usize,
    pub tense: usize,
    pub agreement: usize,
    /// ROUGH-SHIFT utterances with a zero.
    pub cases: usize,
    /// Of those, the ones resolved from the Cb history.
    pub retrieved: usize,
}

impl CueCounts {
    pub fn total(&self) -> usize {
        self.lexical + self.tense + self.agreement
    }
}

impl fmt::Display for CueCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<14}{:>10}{:>10}{:>10}",
            "", "LEXICAL", "TENSE", "AGREEMENT"
        )?;
        write!(
            f,
            "{:<14}{:>10}{:>10}{:>10}",
            "rough-shift", self.lexical, self.tense, self.agreement
        )
    }
}

pub fn tabulate_disambiguation(reports: &[DiscourseReport]) -> CueCounts {
    let mut c = CueCounts::default();
    for u in reports.iter().flat_map(|r| &r.utterances) {
        if u.seed || !u.has_zero || u.transition() != Transition::RoughShift {
            continue;
        }
        c.cases += 1;
        let best = u.best();
        if matches!(best.origin, centering_core::Origin::Global { .. }) {
            c.retrieved += 1;
        }
        c.lexical += usize::from(best.cues.contains(Cue::Lexical));
        c.tense += usize::from(best.cues.contains(Cue::Tense));
        c.agreement += usize::from(best.cues.contains(Cue::Agreement));
    }
    c
}

/// Outcome of one gold-annotated zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Correct,
    Incorrect,
    Unresolved,
}

impl Outcome {
    pub fn tag(self) -> &'static str {
        match self {
            Outcome::Correct => "CORRECT",
            Outcome::Incorrect => "INCORRECT",
            Outcome::Unresolved => "UNRESOLVED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroOutcome {
    pub discourse: String,
    pub utterance: usize,
    pub expression: usize,
    pub transition: Transition,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GoldSummary {
    pub zeros: Vec<ZeroOutcome>,
}

impl GoldSummary {
    pub fn count(&self, o: Outcome) -> usize {
        self.zeros.iter().filter(|z| z.outcome == o).count()
    }

    pub fn accuracy(&self) -> Option<f64> {
        (!self.zeros.is_empty())
            .then(|| self.count(Outcome::Correct) as f64 / self.zeros.len() as f64)
    }

    /// (correct, total) per transition label of the preferred reading.
    pub fn by_transition(&self) -> BTreeMap<&'static str, (usize, usize)> {
        let mut m = BTreeMap::new();
        for z in &self.zeros {
            let e = m.entry(z.transition.tag()).or_insert((0, 0));
            e.0 += usize::from(z.outcome == Outcome::Correct);
            e.1 += 1;
        }
        m
    }
}

impl fmt::Display for GoldSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(acc) = self.accuracy() else {
            return write!(f, "no gold annotations");
        };
        writeln!(
            f,
            "zeros {}  correct {}  incorrect {}  unresolved {}  accuracy {:.1}%",
            self.zeros.len(),
            self.count(Outcome::Correct),
            self.count(Outcome::Incorrect),
            self.count(Outcome::Unresolved),
            acc * 100.0
        )?;
        let rows: Vec<String> = self
            .by_transition()
            .into_iter()
            .map(|(t, (ok, n))| format!("  {t:<14}{ok}/{n}"))
            .collect();
        write!(f, "{}", rows.join("\n"))
    }
}

/// Compare the preferred reading's antecedents with the gold annotations.
pub fn evaluate_gold(reports: &[DiscourseReport], corpus: &[Discourse]) -> GoldSummary {
    let mut zeros = Vec::new();
    for (r, d) in reports.iter().zip(corpus) {
        for (u, utt) in r.utterances.iter().zip(&d.utterances) {
            let best = u.best();
            for i in utt.zero_order() {
                let Some(gold) = utt.expressions[i]
                    .constraints
                    .as_ref()
                    .and_then(|c| c.gold.as_ref())
                else {
                    continue;
                };
                let outcome = match best.resolution.get(i) {
                    None => Outcome::Unresolved,
                    Some(a) if a.same_referent(gold) => Outcome::Correct,
                    Some(_) => Outcome::Incorrect,
                };
                zeros.push(ZeroOutcome {
                    discourse: d.id.clone(),
                    utterance: utt.index,
                    expression: i,
                    transition: best.transition,
                    outcome,
                });
            }
        }
    }
    GoldSummary { zeros }
}
