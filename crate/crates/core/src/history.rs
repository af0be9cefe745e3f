//! Recency-ordered list of former Cbs and retrieval over it.
//!
//! The list is deliberately flat: a zero whose antecedent is not in the
//! preceding utterance is matched against former Cbs, most recent first, and
//! the first candidate that passes the agreement and lexical filters wins.
//! A past-tense utterance following a non-past one moves Cbs introduced in
//! past-tense utterances ahead of the others.

use alloc::vec::Vec;

use crate::model::{
    Antecedent, Cue, CueSet, Discourse, EntityId, ReferringExpression, Tense, Utterance,
};
use crate::resolution::{agreement_verdict, form_set_candidates, lexical_verdict, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HistoryEntry {
    pub entity: EntityId,
    /// Most recent utterance at which the entity was Cb.
    pub index: usize,
    /// Tense of the utterance where the entity first became Cb.
    pub first_tense: Tense,
}

/// Former Cbs, most recent first, one entry per entity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CbHistory {
    entries: Vec<HistoryEntry>,
}

impl CbHistory {
    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, entity: EntityId) -> bool {
        self.entries.iter().any(|e| e.entity == entity)
    }

    pub fn ids(&self) -> Vec<EntityId> {
        self.entries.iter().map(|e| e.entity).collect()
    }
}

/// New history with `cb` at the front; an older entry for the same entity is dropped.
pub fn push_cb(history: &CbHistory, cb: EntityId, index: usize, tense: Tense) -> CbHistory {
    debug_assert!(history.entries.iter().all(|e| e.index <= index));
    let previous = history.entries.iter().find(|e| e.entity == cb);
    let first_tense = previous.map_or(tense, |e| e.first_tense);
    let mut entries = Vec::with_capacity(history.entries.len() + 1);
    entries.push(HistoryEntry {
        entity: cb,
        index,
        first_tense,
    });
    entries.extend(history.entries.iter().copied().filter(|e| e.entity != cb));
    CbHistory { entries }
}

/// Ordered compatible candidates from a global search and the cues that
/// selected the first one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Retrieval {
    pub candidates: Vec<Antecedent>,
    pub cues: CueSet,
}

impl Retrieval {
    pub fn first(&self) -> Option<&Antecedent> {
        self.candidates.first()
    }
}

/// Context of the utterance whose zero is being retrieved.
#[derive(Debug, Clone, Copy)]
pub struct RetrievalContext<'a> {
    pub utterance: &'a Utterance,
    pub previous: Option<&'a Utterance>,
    pub cf_prev: &'a [EntityId],
    pub discourse: &'a Discourse,
}

struct Scored {
    antecedent: Antecedent,
    past: bool,
    agreement_ok: bool,
    lexical_ok: bool,
}

/// Search the former Cbs for the zero at `zero`; never returns a non-former-Cb.
pub fn global_retrieve(
    history: &CbHistory,
    zero: &ReferringExpression,
    ctx: RetrievalContext<'_>,
) -> Retrieval {
    let d = ctx.discourse;
    let u = ctx.utterance;
    let overt = u.overt_entities();
    let required = zero
        .constraints
        .as_ref()
        .and_then(|c| c.required_cardinality);
    let set_search = required.is_some_and(|r| r >= 2);

    let first_tense = |id: EntityId| {
        history
            .entries
            .iter()
            .find(|e| e.entity == id)
            .map(|e| e.first_tense)
    };

    let raw: Vec<Antecedent> = if set_search {
        let prev_index = u.index.saturating_sub(1);
        form_set_candidates(
            history,
            ctx.cf_prev,
            prev_index,
            required.unwrap_or(2) as usize,
            d,
        )
        .into_iter()
        .filter(|m| {
            m.iter()
                .all(|&e| history.contains(e) && !overt.contains(&e))
        })
        .map(Antecedent::Group)
        .collect()
    } else {
        history
            .entries
            .iter()
            .filter(|e| !overt.contains(&e.entity))
            .map(|e| Antecedent::Entity(e.entity))
            .collect()
    };

    let scored: Vec<Scored> = raw
        .into_iter()
        .map(|a| {
            let past = a
                .members()
                .iter()
                .all(|&m| first_tense(m) == Some(Tense::Past));
            let agreement_ok = agreement_verdict(zero, &a, d) == Verdict::Compatible;
            let lexical_ok = lexical_verdict(zero, &a, d) == Verdict::Compatible;
            Scored {
                antecedent: a,
                past,
                agreement_ok,
                lexical_ok,
            }
        })
        .collect();

    // agreement first, then lexical types
    let compatible: Vec<usize> = (0..scored.len())
        .filter(|&i| scored[i].agreement_ok && scored[i].lexical_ok)
        .collect();
    let mut ordered = compatible.clone();
    let tense_shift =
        u.tense == Tense::Past && ctx.previous.is_some_and(|p| p.tense == Tense::NonPast);
    if tense_shift {
        ordered.sort_by_key(|&i| !scored[i].past);
    }

    let mut cues = CueSet::default();
    if let Some(&winner) = ordered.first() {
        if set_search {
            cues.insert(Cue::Agreement);
        }
        let ahead = &scored[..winner];
        if !set_search && ahead.iter().any(|s| !s.agreement_ok) {
            cues.insert(Cue::Agreement);
        }
        if ahead.iter().any(|s| s.agreement_ok && !s.lexical_ok) {
            cues.insert(Cue::Lexical);
        }
        if compatible.first() != ordered.first() {
            cues.insert(Cue::Tense);
        }
    }

    Retrieval {
        candidates: ordered
            .into_iter()
            .map(|i| scored[i].antecedent.clone())
            .collect(),
        cues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraints, Entity, Role};
    use alloc::string::ToString;
    use alloc::vec;

    const HANAKO: EntityId = EntityId(0);
    const MITIKO: EntityId = EntityId(1);

    #[test]
    fn push_orders_by_recency() {
        let h = push_cb(&CbHistory::default(), HANAKO, 0, Tense::Past);
        assert_eq!(h.ids(), vec![HANAKO]);
        let h = push_cb(&h, MITIKO, 2, Tense::NonPast);
        assert_eq!(h.ids(), vec![MITIKO, HANAKO]);
        let h = push_cb(&h, HANAKO, 3, Tense::NonPast);
        assert_eq!(h.ids(), vec![HANAKO, MITIKO]);
        assert_eq!(h.entries()[0].index, 3);
        // first-introduction tense survives the collapse
        assert_eq!(h.entries()[0].first_tense, Tense::Past);
    }

    fn entity(name: &str, ty: &str) -> Entity {
        Entity {
            name: name.to_string(),
            types: [ty.to_string()].into_iter().collect(),
            cardinality: 1,
        }
    }

    #[test]
    fn empty_history_retrieves_nothing() {
        let d = Discourse {
            id: "t".into(),
            entities: vec![entity("A", "person")],
            utterances: vec![],
        };
        let u = Utterance {
            index: 1,
            expressions: vec![ReferringExpression::zero(
                Role::Subject,
                0,
                Constraints::default(),
            )],
            tense: Tense::Past,
            text: None,
        };
        let ctx = RetrievalContext {
            utterance: &u,
            previous: None,
            cf_prev: &[],
            discourse: &d,
        };
        let r = global_retrieve(&CbHistory::default(), &u.expressions[0], ctx);
        assert!(r.first().is_none());
        assert!(r.cues.is_empty());
    }
}
