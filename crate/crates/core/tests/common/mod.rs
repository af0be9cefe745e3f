#![allow(dead_code)]

use centering_core::{
    Constraints, Discourse, Entity, EntityId, ReferringExpression, Role, Tense, Utterance,
};
use proptest::prelude::*;

pub const TYPES: [&str; 3] = ["organization", "device", "person"];

fn types_from(mask: u8) -> std::collections::BTreeSet<String> {
    TYPES
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, t)| t.to_string())
        .collect()
}

#[derive(Debug, Clone)]
enum Slot {
    Overt(usize, usize, bool),
    Zero(usize, u8, bool),
}

fn slot(n_entities: usize) -> impl Strategy<Value = Slot> {
    prop_oneof![
        (
            0..n_entities,
            0..Role::ALL.len(),
            proptest::bool::weighted(0.2)
        )
            .prop_map(|(e, r, wa)| Slot::Overt(e, r, wa)),
        (0..Role::ALL.len(), 0u8..8, proptest::bool::weighted(0.1))
            .prop_map(|(r, m, s)| Slot::Zero(r, m, s)),
    ]
}

/// Well-formed random discourses over a small type inventory.
pub fn discourse() -> impl Strategy<Value = Discourse> {
    (2usize..7).prop_flat_map(|n| {
        let entities = proptest::collection::vec((1u8..8, 1u32..3), n);
        let utterances = proptest::collection::vec(
            (proptest::collection::vec(slot(n), 1..5), any::<bool>()),
            1..9,
        );
        (entities, utterances).prop_map(|(ents, utts)| build(ents, utts))
    })
}

fn build(ents: Vec<(u8, u32)>, utts: Vec<(Vec<Slot>, bool)>) -> Discourse {
    let entities = ents
        .iter()
        .enumerate()
        .map(|(i, &(mask, card))| Entity {
            name: format!("E{i}"),
            types: types_from(mask),
            cardinality: card,
        })
        .collect();
    let utterances = utts
        .into_iter()
        .enumerate()
        .map(|(index, (slots, past))| {
            let mut topic = false;
            let expressions = slots
                .into_iter()
                .enumerate()
                .map(|(p, s)| {
                    let mut wa = false;
                    let (role_i, x) = match s {
                        Slot::Overt(e, r, extra) => {
                            wa = extra;
                            (
                                r,
                                ReferringExpression::overt(
                                    EntityId(e as u32),
                                    Role::ALL[r],
                                    p as u32,
                                ),
                            )
                        }
                        Slot::Zero(r, mask, set) => (
                            r,
                            ReferringExpression::zero(
                                Role::ALL[r],
                                p as u32,
                                Constraints {
                                    compatible_types: types_from(mask),
                                    required_cardinality: set.then_some(2),
                                    gold: None,
                                },
                            ),
                        ),
                    };
                    let mut x = x;
                    if Role::ALL[role_i] == Role::Topic {
                        if topic {
                            x.role = Role::Subject;
                        }
                        topic = true;
                    }
                    x.wa = x.role == Role::Topic || (wa && x.role != Role::Subject);
                    x.ga = false;
                    x
                })
                .collect();
            Utterance {
                index,
                expressions,
                tense: if past { Tense::Past } else { Tense::NonPast },
                text: None,
            }
        })
        .collect();
    Discourse {
        id: "random".into(),
        entities,
        utterances,
    }
}
