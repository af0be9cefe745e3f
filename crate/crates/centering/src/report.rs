//! Trace output for analysed discourses.
//!
//! Two layouts share one record model: `text` is a tab-separated table with a
//! header line, `machine` is one JSON object per line. Both start with a
//! header, so an empty run still produces output, and both read back into
//! the same records.

use centering_core::{
    Antecedent, Discourse, DiscourseReport, EntityId, Hypothesis, Transition, Utterance,
    UtteranceReport,
};
use serde::{Deserialize, Serialize};

pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

/// Antecedent of one zero; `None` is UNRESOLVED.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroCell {
    pub expression: usize,
    pub role: String,
    pub antecedent: Option<Vec<String>>,
}

/// One reading of one utterance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadingRow {
    pub discourse: String,
    pub index: usize,
    /// 0 for the preferred reading, then expansion order.
    pub reading: usize,
    pub kept: bool,
    pub origin: String,
    pub transition: String,
    pub cb: Option<String>,
    pub prior_cp: Option<String>,
    pub cf: Vec<String>,
    pub zeros: Vec<ZeroCell>,
    pub cues: Vec<String>,
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub discourse: String,
    pub utterances: usize,
    /// CONTINUE (with ZTA-CONTINUE), RETAIN, SMOOTH-SHIFT, ROUGH-SHIFT of preferred readings.
    pub transitions: [usize; 4],
    pub unresolved_zeros: usize,
    pub unresolved_ambiguity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header { version: u32 },
    Reading(ReadingRow),
    Summary(SummaryRow),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("trace line {line}: {message}")]
pub struct TraceError {
    pub line: usize,
    pub message: String,
}

/// Column of a transition in the distribution tables.
pub fn column(t: Transition) -> usize {
    match t {
        Transition::Continue | Transition::ZtaContinue => 0,
        Transition::Retain => 1,
        Transition::SmoothShift => 2,
        Transition::RoughShift => 3,
    }
}

fn names(d: &Discourse, ids: &[EntityId]) -> Vec<String> {
    ids.iter().map(|&i| d.name(i).to_string()).collect()
}

fn reading_row(
    d: &Discourse,
    utt: &Utterance,
    u: &UtteranceReport,
    h: &Hypothesis,
    reading: usize,
    kept: bool,
) -> ReadingRow {
    let zeros = utt
        .zero_order()
        .into_iter()
        .map(|i| ZeroCell {
            expression: i,
            role: utt.expressions[i].role.tag().to_string(),
            antecedent: h
                .resolution
                .get(i)
                .map(|a: &Antecedent| names(d, a.members())),
        })
        .collect();
    let mut flags = Vec::new();
    let mut flag = |on: bool, name: &str| {
        if on {
            flags.push(name.to_string());
        }
    };
    flag(u.seed, "seed");
    flag(h.zta_applied, "zta");
    flag(h.dampened, "dampened");
    flag(h.anomalous, "anomalous");
    flag(reading == 0 && u.ambiguous, "ambiguous");
    flag(reading == 0 && u.global_check, "global");
    flag(reading == 0 && u.fallback, "fallback");
    ReadingRow {
        discourse: d.id.clone(),
        index: u.index,
        reading,
        kept,
        origin: h.origin.tag().to_string(),
        transition: h.transition.tag().to_string(),
        cb: h.cb.map(|c| d.name(c).to_string()),
        prior_cp: h.prior_cp.map(|c| d.name(c).to_string()),
        cf: names(d, &h.cf_entities()),
        zeros,
        cues: h.cues.iter().map(|c| c.tag().to_string()).collect(),
        flags,
    }
}

/// Records for one analysed discourse. With `all` every expanded reading is
/// listed, otherwise only the preferred one.
pub fn records(d: &Discourse, report: &DiscourseReport, all: bool) -> Vec<Record> {
    let mut out = Vec::new();
    let mut transitions = [0usize; 4];
    let mut unresolved_zeros = 0;
    for (u, utt) in report.utterances.iter().zip(&d.utterances) {
        let best = u.best();
        out.push(Record::Reading(reading_row(d, utt, u, best, 0, true)));
        if all {
            let others = u
                .hypotheses
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != u.best);
            for (n, (_, h)) in others.enumerate() {
                out.push(Record::Reading(reading_row(
                    d,
                    utt,
                    u,
                    &h.hypothesis,
                    n + 1,
                    h.kept,
                )));
            }
        }
        if !u.seed {
            transitions[column(best.transition)] += 1;
        }
        unresolved_zeros += u.unresolved(utt).len();
    }
    out.push(Record::Summary(SummaryRow {
        discourse: d.id.clone(),
        utterances: report.utterances.len(),
        transitions,
        unresolved_zeros,
        unresolved_ambiguity: report.unresolved_ambiguity(),
    }));
    out
}

const TEXT_HEADER: &str = "kind\tdiscourse\tindex\treading\tkept\torigin\ttransition\tcb\tprior_cp\tcf\tzeros\tcues\tflags";

fn list(items: &[String]) -> String {
    if items.is_empty() {
        "-".to_string()
    } else {
        items.join(",")
    }
}

fn opt(s: &Option<String>) -> &str {
    s.as_deref().unwrap_or("-")
}

fn zero_text(z: &ZeroCell) -> String {
    let a = match &z.antecedent {
        None => "UNRESOLVED".to_string(),
        Some(m) if m.len() == 1 => m[0].clone(),
        Some(m) => format!("{{{}}}", m.join("+")),
    };
    format!("{}@{}={}", z.role, z.expression, a)
}

/// Render records; the header is emitted even when `records` is empty.
pub fn serialize_records(records: &[Record], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Machine => {
            let header = Record::Header {
                version: TRACE_VERSION,
            };
            for r in std::iter::once(&header).chain(
                records
                    .iter()
                    .filter(|r| !matches!(r, Record::Header { .. })),
            ) {
                out.push_str(&serde_json::to_string(r).expect("records serialize"));
                out.push('\n');
            }
        }
        Format::Text => {
            out.push_str(TEXT_HEADER);
            out.push('\n');
            for r in records {
                let line = match r {
                    Record::Header { .. } => continue,
                    Record::Reading(r) => [
                        "reading".to_string(),
                        r.discourse.clone(),
                        r.index.to_string(),
                        r.reading.to_string(),
                        r.kept.to_string(),
                        r.origin.clone(),
                        r.transition.clone(),
                        opt(&r.cb).to_string(),
                        opt(&r.prior_cp).to_string(),
                        format!("[{}]", r.cf.join(",")),
                        list(&r.zeros.iter().map(zero_text).collect::<Vec<_>>()),
                        list(&r.cues),
                        list(&r.flags),
                    ]
                    .join("\t"),
                    Record::Summary(s) => [
                        "summary".to_string(),
                        s.discourse.clone(),
                        s.utterances.to_string(),
                        s.transitions
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(","),
                        s.unresolved_zeros.to_string(),
                        s.unresolved_ambiguity.to_string(),
                    ]
                    .join("\t"),
                };
                out.push_str(&line);
                out.push('\n');
            }
        }
    }
    out
}

/// Analyse-and-render convenience over several discourses.
pub fn serialize_reports(
    pairs: &[(&Discourse, &DiscourseReport)],
    format: Format,
    all: bool,
) -> String {
    let recs: Vec<Record> = pairs.iter().flat_map(|(d, r)| records(d, r, all)).collect();
    serialize_records(&recs, format)
}

fn err(line: usize, message: impl Into<String>) -> TraceError {
    TraceError {
        line,
        message: message.into(),
    }
}

fn parse_list(s: &str) -> Vec<String> {
    if s == "-" {
        Vec::new()
    } else {
        s.split(',').map(str::to_string).collect()
    }
}

fn parse_opt(s: &str) -> Option<String> {
    (s != "-").then(|| s.to_string())
}

fn parse_zero(line: usize, s: &str) -> Result<ZeroCell, TraceError> {
    let (role, rest) = s
        .split_once('@')
        .ok_or_else(|| err(line, format!("bad zero cell `{s}`")))?;
    let (expr, ante) = rest
        .split_once('=')
        .ok_or_else(|| err(line, format!("bad zero cell `{s}`")))?;
    let expression = expr
        .parse()
        .map_err(|_| err(line, format!("bad expression index `{expr}`")))?;
    let antecedent = match ante {
        "UNRESOLVED" => None,
        set if set.starts_with('{') && set.ends_with('}') => Some(
            set[1..set.len() - 1]
                .split('+')
                .map(str::to_string)
                .collect(),
        ),
        one => Some(vec![one.to_string()]),
    };
    Ok(ZeroCell {
        expression,
        role: role.to_string(),
        antecedent,
    })
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, TraceError> {
    s.parse()
        .map_err(|_| err(line, format!("expected a number, found `{s}`")))
}

fn flag(line: usize, s: &str) -> Result<bool, TraceError> {
    s.parse()
        .map_err(|_| err(line, format!("expected true or false, found `{s}`")))
}

/// Read a trace in either layout back into records.
pub fn read_records(text: &str) -> Result<Vec<Record>, TraceError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, first)) = lines.next() else {
        return Err(err(1, "missing header"));
    };
    if first.starts_with('{') {
        let mut out = Vec::new();
        let header: Record = serde_json::from_str(first).map_err(|e| err(1, e.to_string()))?;
        if !matches!(header, Record::Header { .. }) {
            return Err(err(1, "missing header"));
        }
        for (n, l) in lines {
            let r: Record = serde_json::from_str(l).map_err(|e| err(n, e.to_string()))?;
            out.push(r);
        }
        return Ok(out);
    }
    if first != TEXT_HEADER {
        return Err(err(1, "missing header"));
    }
    let mut out = Vec::new();
    for (n, l) in lines {
        let cols: Vec<&str> = l.split('\t').collect();
        match cols.first().copied() {
            Some("reading") if cols.len() == 13 => {
                let zeros = parse_list(cols[10])
                    .iter()
                    .map(|z| parse_zero(n, z))
                    .collect::<Result<_, _>>()?;
                let cf = cols[9]
                    .strip_prefix('[')
                    .and_then(|c| c.strip_suffix(']'))
                    .ok_or_else(|| err(n, "bad cf cell"))?;
                out.push(Record::Reading(ReadingRow {
                    discourse: cols[1].to_string(),
                    index: num(n, cols[2])?,
                    reading: num(n, cols[3])?,
                    kept: flag(n, cols[4])?,
                    origin: cols[5].to_string(),
                    transition: cols[6].to_string(),
                    cb: parse_opt(cols[7]),
                    prior_cp: parse_opt(cols[8]),
                    cf: if cf.is_empty() {
                        Vec::new()
                    } else {
                        cf.split(',').map(str::to_string).collect()
                    },
                    zeros,
                    cues: parse_list(cols[11]),
                    flags: parse_list(cols[12]),
                }));
            }
            Some("summary") if cols.len() == 6 => {
                let t: Vec<usize> = cols[3]
                    .split(',')
                    .map(|c| num(n, c))
                    .collect::<Result<_, _>>()?;
                let transitions: [usize; 4] = t
                    .try_into()
                    .map_err(|_| err(n, "expected four transition counts"))?;
                out.push(Record::Summary(SummaryRow {
                    discourse: cols[1].to_string(),
                    utterances: num(n, cols[2])?,
                    transitions,
                    unresolved_zeros: num(n, cols[4])?,
                    unresolved_ambiguity: flag(n, cols[5])?,
                }));
            }
            _ => return Err(err(n, "unrecognised row")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_is_header_only() {
        assert_eq!(
            serialize_records(&[], Format::Text),
            format!("{TEXT_HEADER}\n")
        );
        let machine = serialize_records(&[], Format::Machine);
        assert_eq!(machine.lines().count(), 1);
        assert_eq!(read_records(&machine).unwrap(), Vec::new());
        assert_eq!(
            read_records(&serialize_records(&[], Format::Text)).unwrap(),
            Vec::new()
        );
    }
}
