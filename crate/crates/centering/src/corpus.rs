//! The `.centering.json` corpus format.
//!
//! A file is a JSON array of discourses. Semantic errors (an undeclared
//! entity id, an unknown role tag, a repeated utterance index) are reported
//! with the line and column of the offending value.

use std::collections::{BTreeMap, BTreeSet};

use centering_core::{
    Antecedent, Constraints, Discourse, Entity, EntityId, Form, ReferringExpression, Role, Tense,
    Utterance,
};
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::value::RawValue;

/// Placeholder entity id of a zero.
pub const ZERO_MARK: &str = "?";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("{line}:{column}: malformed structure: {message}")]
    Malformed {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown entity id `{id}`")]
    UnknownEntity {
        id: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: unknown role tag `{tag}`")]
    UnknownRole {
        tag: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: duplicate utterance index {index}")]
    DuplicateIndex {
        index: usize,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: entity id `{id}` declared twice")]
    DuplicateEntity {
        id: String,
        line: usize,
        column: usize,
    },
}

impl CorpusError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            CorpusError::Malformed { line, column, .. }
            | CorpusError::UnknownEntity { line, column, .. }
            | CorpusError::UnknownRole { line, column, .. }
            | CorpusError::DuplicateIndex { line, column, .. }
            | CorpusError::DuplicateEntity { line, column, .. } => (*line, *column),
        }
    }
}

/// A value together with the slice of input it was read from.
struct Located<'a, T> {
    value: T,
    raw: &'a str,
}

impl<'de: 'a, 'a, T: DeserializeOwned> Deserialize<'de> for Located<'a, T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: &'de RawValue = Deserialize::deserialize(deserializer)?;
        let value = serde_json::from_str(raw.get()).map_err(D::Error::custom)?;
        Ok(Located {
            value,
            raw: raw.get(),
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiscourseIn<'a> {
    id: String,
    #[serde(borrow)]
    entities: Vec<EntityIn<'a>>,
    #[serde(borrow)]
    utterances: Vec<UtteranceIn<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityIn<'a> {
    #[serde(borrow)]
    id: Located<'a, String>,
    types: Vec<String>,
    #[serde(default = "one")]
    cardinality: u32,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UtteranceIn<'a> {
    #[serde(borrow)]
    index: Located<'a, usize>,
    tense: TenseTag,
    #[serde(default)]
    text: Option<String>,
    #[serde(borrow)]
    expressions: Vec<ExpressionIn<'a>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpressionIn<'a> {
    #[serde(borrow)]
    entity: Located<'a, String>,
    form: FormTag,
    #[serde(borrow)]
    role: Located<'a, String>,
    #[serde(default)]
    wa: bool,
    #[serde(default)]
    ga: bool,
    pos: u32,
    #[serde(default)]
    constraints: Option<ConstraintsIn>,
    #[serde(default, borrow)]
    gold: Option<Located<'a, GoldIn>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConstraintsIn {
    #[serde(default)]
    types: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cardinality: Option<u32>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum GoldIn {
    One(String),
    Set(Vec<String>),
}

#[derive(Deserialize, Serialize, Clone, Copy)]
enum TenseTag {
    #[serde(rename = "PAST")]
    Past,
    #[serde(rename = "NONPAST")]
    NonPast,
}

#[derive(Deserialize, Serialize, Clone, Copy, PartialEq)]
enum FormTag {
    #[serde(rename = "OVERT")]
    Overt,
    #[serde(rename = "ZERO")]
    Zero,
}

fn line_col(text: &str, raw: &str) -> (usize, usize) {
    let offset = (raw.as_ptr() as usize)
        .saturating_sub(text.as_ptr() as usize)
        .min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse a corpus file. Whitespace-only input is an empty corpus.
pub fn parse_corpus(text: &str) -> Result<Vec<Discourse>, CorpusError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let raw: Vec<DiscourseIn<'_>> =
        serde_json::from_str(text).map_err(|e| CorpusError::Malformed {
            line: e.line(),
            column: e.column(),
            message: strip_location(&e.to_string()),
        })?;
    raw.into_iter().map(|d| convert(text, d)).collect()
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

fn convert(text: &str, d: DiscourseIn<'_>) -> Result<Discourse, CorpusError> {
    let mut ids: BTreeMap<String, EntityId> = BTreeMap::new();
    let mut entities = Vec::with_capacity(d.entities.len());
    for e in d.entities {
        let id = EntityId(entities.len() as u32);
        if ids.insert(e.id.value.clone(), id).is_some() {
            let (line, column) = line_col(text, e.id.raw);
            return Err(CorpusError::DuplicateEntity {
                id: e.id.value,
                line,
                column,
            });
        }
        entities.push(Entity {
            name: e.id.value,
            types: e.types.into_iter().collect(),
            cardinality: e.cardinality,
        });
    }
    let resolve = |l: &Located<'_, String>| -> Result<EntityId, CorpusError> {
        ids.get(&l.value).copied().ok_or_else(|| {
            let (line, column) = line_col(text, l.raw);
            CorpusError::UnknownEntity {
                id: l.value.clone(),
                line,
                column,
            }
        })
    };

    let mut seen = BTreeSet::new();
    let mut utterances = Vec::with_capacity(d.utterances.len());
    for u in d.utterances {
        if !seen.insert(u.index.value) {
            let (line, column) = line_col(text, u.index.raw);
            return Err(CorpusError::DuplicateIndex {
                index: u.index.value,
                line,
                column,
            });
        }
        let mut expressions = Vec::with_capacity(u.expressions.len());
        for x in u.expressions {
            let role = Role::from_tag(&x.role.value).ok_or_else(|| {
                let (line, column) = line_col(text, x.role.raw);
                CorpusError::UnknownRole {
                    tag: x.role.value.clone(),
                    line,
                    column,
                }
            })?;
            let form = match x.form {
                FormTag::Overt => Form::Overt,
                FormTag::Zero => Form::Zero,
            };
            let entity = if x.entity.value == ZERO_MARK {
                None
            } else if form == Form::Zero {
                let (line, column) = line_col(text, x.entity.raw);
                return Err(CorpusError::Malformed {
                    line,
                    column,
                    message: format!("a zero names its entity as `{ZERO_MARK}`"),
                });
            } else {
                Some(resolve(&x.entity)?)
            };
            let gold = match &x.gold {
                None => None,
                Some(g) => Some(match &g.value {
                    GoldIn::One(name) => Antecedent::Entity(resolve(&Located {
                        value: name.clone(),
                        raw: g.raw,
                    })?),
                    GoldIn::Set(names) => Antecedent::Group(
                        names
                            .iter()
                            .map(|n| {
                                resolve(&Located {
                                    value: n.clone(),
                                    raw: g.raw,
                                })
                            })
                            .collect::<Result<_, _>>()?,
                    ),
                }),
            };
            let constraints = if x.constraints.is_some() || gold.is_some() {
                let c = x.constraints.unwrap_or(ConstraintsIn {
                    types: Vec::new(),
                    cardinality: None,
                });
                Some(Constraints {
                    compatible_types: c.types.into_iter().collect(),
                    required_cardinality: c.cardinality,
                    gold,
                })
            } else {
                None
            };
            expressions.push(ReferringExpression {
                entity,
                form,
                role,
                wa: x.wa,
                ga: x.ga,
                position: x.pos,
                constraints,
            });
        }
        utterances.push(Utterance {
            index: u.index.value,
            expressions,
            tense: match u.tense {
                TenseTag::Past => Tense::Past,
                TenseTag::NonPast => Tense::NonPast,
            },
            text: u.text,
        });
    }
    Ok(Discourse {
        id: d.id,
        entities,
        utterances,
    })
}

#[derive(Serialize)]
struct DiscourseOut<'a> {
    id: &'a str,
    entities: Vec<EntityOut<'a>>,
    utterances: Vec<UtteranceOut<'a>>,
}

#[derive(Serialize)]
struct EntityOut<'a> {
    id: &'a str,
    types: Vec<&'a str>,
    cardinality: u32,
}

#[derive(Serialize)]
struct UtteranceOut<'a> {
    index: usize,
    tense: TenseTag,
    #[serde(skip_serializing_if = "Option::is_none")]
    text: Option<&'a str>,
    expressions: Vec<ExpressionOut<'a>>,
}

#[derive(Serialize)]
struct ExpressionOut<'a> {
    entity: &'a str,
    form: FormTag,
    role: &'static str,
    wa: bool,
    ga: bool,
    pos: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraints: Option<ConstraintsIn>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gold: Option<GoldIn>,
}

/// Serialize discourses back into the corpus format.
pub fn write_corpus(discourses: &[Discourse]) -> String {
    let out: Vec<DiscourseOut<'_>> = discourses
        .iter()
        .map(|d| DiscourseOut {
            id: &d.id,
            entities: d
                .entities
                .iter()
                .map(|e| EntityOut {
                    id: &e.name,
                    types: e.types.iter().map(String::as_str).collect(),
                    cardinality: e.cardinality,
                })
                .collect(),
            utterances: d.utterances.iter().map(|u| utterance_out(d, u)).collect(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&out).expect("corpus values serialize");
    text.push('\n');
    text
}

fn utterance_out<'a>(d: &'a Discourse, u: &'a Utterance) -> UtteranceOut<'a> {
    UtteranceOut {
        index: u.index,
        tense: match u.tense {
            Tense::Past => TenseTag::Past,
            Tense::NonPast => TenseTag::NonPast,
        },
        text: u.text.as_deref(),
        expressions: u
            .expressions
            .iter()
            .map(|x| {
                let c = x.constraints.as_ref();
                let gold = c.and_then(|c| c.gold.as_ref()).map(|g| match g {
                    Antecedent::Entity(id) => GoldIn::One(d.name(*id).to_string()),
                    Antecedent::Group(ids) => {
                        GoldIn::Set(ids.iter().map(|&i| d.name(i).to_string()).collect())
                    }
                });
                ExpressionOut {
                    entity: x.entity.map_or(ZERO_MARK, |id| d.name(id)),
                    form: match x.form {
                        Form::Overt => FormTag::Overt,
                        Form::Zero => FormTag::Zero,
                    },
                    role: x.role.tag(),
                    wa: x.wa,
                    ga: x.ga,
                    pos: x.position,
                    constraints: c
                        .filter(|c| {
                            !c.compatible_types.is_empty()
                                || c.required_cardinality.is_some()
                                || c.gold.is_none()
                        })
                        .map(|c| ConstraintsIn {
                            types: c.compatible_types.iter().cloned().collect(),
                            cardinality: c.required_cardinality,
                        }),
                    gold,
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"[
  {
    "id": "t",
    "entities": [{"id": "HANAKO", "types": ["person"]}],
    "utterances": [
      {"index": 0, "tense": "PAST", "expressions": [
        {"entity": "HANAKO", "form": "OVERT", "role": "TOPIC", "wa": true, "pos": 0}
      ]}
    ]
  }
]"#;

    #[test]
    fn parses_minimal_file() {
        let d = parse_corpus(SMALL).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].entities[0].cardinality, 1);
        assert_eq!(d[0].utterances[0].expressions[0].role, Role::Topic);
    }

    #[test]
    fn empty_input_is_empty_corpus() {
        assert_eq!(parse_corpus("").unwrap(), Vec::new());
        assert_eq!(parse_corpus("  \n").unwrap(), Vec::new());
        assert_eq!(parse_corpus("[]").unwrap(), Vec::new());
    }

    #[test]
    fn unknown_role_is_located() {
        let bad = SMALL.replace("\"TOPIC\"", "\"TOPICAL\"");
        let err = parse_corpus(&bad).unwrap_err();
        assert_eq!(
            err,
            CorpusError::UnknownRole {
                tag: "TOPICAL".into(),
                line: 7,
                column: 55
            }
        );
    }

    #[test]
    fn round_trip() {
        let d = parse_corpus(SMALL).unwrap();
        assert_eq!(parse_corpus(&write_corpus(&d)).unwrap(), d);
    }
}
