//! Zero resolution against the predecessor Cf under cue constraints.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::history::CbHistory;
use crate::model::{Antecedent, Discourse, EntityId, ReferringExpression, Utterance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Compatible,
    Anomalous,
}

/// Antecedents chosen for the zeros of one utterance, indexed by expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Resolution {
    slots: Vec<Option<Antecedent>>,
}

impl Resolution {
    pub fn empty(u: &Utterance) -> Self {
        Resolution {
            slots: alloc::vec![None; u.expressions.len()],
        }
    }

    pub fn get(&self, expression: usize) -> Option<&Antecedent> {
        self.slots.get(expression).and_then(Option::as_ref)
    }

    pub fn set(&mut self, expression: usize, antecedent: Option<Antecedent>) {
        self.slots[expression] = antecedent;
    }

    /// True when every zero of `u` has an antecedent.
    pub fn is_complete(&self, u: &Utterance) -> bool {
        u.expressions
            .iter()
            .enumerate()
            .all(|(i, x)| !x.is_zero() || self.get(i).is_some())
    }

    pub fn unresolved<'a>(&'a self, u: &'a Utterance) -> impl Iterator<Item = usize> + 'a {
        u.zero_order()
            .into_iter()
            .filter(move |&i| self.get(i).is_none())
    }

    /// Every entity some zero resolves to.
    pub fn zero_entities(&self) -> BTreeSet<EntityId> {
        self.slots
            .iter()
            .flatten()
            .flat_map(|a| a.members().iter().copied())
            .collect()
    }
}

/// Whether the local search honors the cue constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionMode {
    /// Only compatible candidates.
    Checked,
    /// Pure centering preference; used to detect when a reading's prediction is vetoed.
    Unchecked,
}

fn candidate_types<'d>(candidate: &Antecedent, d: &'d Discourse) -> BTreeSet<&'d String> {
    let mut members = candidate.members().iter().map(|&m| &d.entity(m).types);
    let Some(first) = members.next() else {
        return BTreeSet::new();
    };
    let mut common: BTreeSet<&String> = first.iter().collect();
    for types in members {
        common.retain(|t| types.contains(*t));
    }
    common
}

/// Selectional restriction only: the candidate's (common) types meet the slot's types.
pub fn lexical_verdict(
    zero: &ReferringExpression,
    candidate: &Antecedent,
    d: &Discourse,
) -> Verdict {
    let ok = match zero.constraints.as_ref().map(|c| &c.compatible_types) {
        Some(w) if !w.is_empty() => candidate_types(candidate, d).iter().any(|t| w.contains(*t)),
        _ => true,
    };
    if ok {
        Verdict::Compatible
    } else {
        Verdict::Anomalous
    }
}

/// Number agreement only. Sets need an explicit cardinality requirement.
pub fn agreement_verdict(
    zero: &ReferringExpression,
    candidate: &Antecedent,
    d: &Discourse,
) -> Verdict {
    let total: u32 = candidate
        .members()
        .iter()
        .map(|&m| d.entity(m).cardinality)
        .sum();
    let required = zero
        .constraints
        .as_ref()
        .and_then(|c| c.required_cardinality);
    let ok = match (required, candidate) {
        (Some(r), _) => total == r,
        (None, Antecedent::Group(_)) => false,
        (None, Antecedent::Entity(_)) => true,
    };
    if ok {
        Verdict::Compatible
    } else {
        Verdict::Anomalous
    }
}

/// Selectional and agreement check of `candidate` against a zero's slot.
pub fn check_compatibility(
    zero: &ReferringExpression,
    candidate: &Antecedent,
    d: &Discourse,
) -> Verdict {
    if lexical_verdict(zero, candidate, d) == Verdict::Compatible
        && agreement_verdict(zero, candidate, d) == Verdict::Compatible
    {
        Verdict::Compatible
    } else {
        Verdict::Anomalous
    }
}

fn wants_set(zero: &ReferringExpression) -> bool {
    zero.constraints
        .as_ref()
        .and_then(|c| c.required_cardinality)
        .is_some_and(|r| r >= 2)
}

fn pick(
    zero: &ReferringExpression,
    cf_prev: &[EntityId],
    taken: &BTreeSet<EntityId>,
    d: &Discourse,
    mode: ResolutionMode,
) -> Option<EntityId> {
    if wants_set(zero) {
        return None;
    }
    cf_prev
        .iter()
        .copied()
        .filter(|e| !taken.contains(e))
        .find(|&e| {
            mode == ResolutionMode::Unchecked
                || check_compatibility(zero, &Antecedent::Entity(e), d) == Verdict::Compatible
        })
}

/// Highest-ranked compatible member of `cf_prev` that is not an overt co-argument in `u`.
pub fn resolve_zero_local(
    zero: &ReferringExpression,
    cf_prev: &[EntityId],
    u: &Utterance,
    d: &Discourse,
) -> Option<EntityId> {
    pick(
        zero,
        cf_prev,
        &u.overt_entities(),
        d,
        ResolutionMode::Checked,
    )
}

/// Resolve every zero of `u` locally, most salient zero first. Co-arguments of
/// one clause never share a referent.
pub fn resolve_zeros(
    u: &Utterance,
    cf_prev: &[EntityId],
    d: &Discourse,
    mode: ResolutionMode,
) -> Resolution {
    let mut res = Resolution::empty(u);
    let mut taken = u.overt_entities();
    for i in u.zero_order() {
        if let Some(e) = pick(&u.expressions[i], cf_prev, &taken, d, mode) {
            taken.insert(e);
            res.set(i, Some(Antecedent::Entity(e)));
        }
    }
    res
}

/// Sets of `required` same-typed entities drawn from `cf_prev` and the history.
///
/// Recency of an entity is its history index, or `prev_index` for members of
/// `cf_prev`. Sets are ordered by the recency of their least recent member,
/// most recent first; members within a set are ordered most recent first.
pub fn form_set_candidates(
    history: &CbHistory,
    cf_prev: &[EntityId],
    prev_index: usize,
    required: usize,
    d: &Discourse,
) -> Vec<Vec<EntityId>> {
    if required < 2 {
        return Vec::new();
    }
    let mut recency: BTreeMap<EntityId, usize> = BTreeMap::new();
    for e in history.entries() {
        recency.insert(e.entity, e.index);
    }
    for &e in cf_prev {
        let r = recency.entry(e).or_insert(prev_index);
        *r = (*r).max(prev_index);
    }
    let mut pool: Vec<(EntityId, usize)> = recency.into_iter().collect();
    pool.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    if pool.len() < required {
        return Vec::new();
    }

    let mut out: Vec<(usize, Vec<EntityId>)> = Vec::new();
    let mut idx: Vec<usize> = (0..required).collect();
    loop {
        let members: Vec<EntityId> = idx.iter().map(|&i| pool[i].0).collect();
        if !candidate_types(&Antecedent::Group(members.clone()), d).is_empty() {
            let least = idx.iter().map(|&i| pool[i].1).min().unwrap_or(0);
            out.push((least, members));
        }
        // next combination in lexicographic order
        let n = pool.len();
        let mut k = required;
        while k > 0 && idx[k - 1] == n - required + (k - 1) {
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
        for j in k..required {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out.sort_by_key(|o| core::cmp::Reverse(o.0));
    out.into_iter().map(|(_, m)| m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Constraints, Entity, Role, Tense};
    use alloc::string::ToString;
    use alloc::vec;

    fn entity(name: &str, types: &[&str], cardinality: u32) -> Entity {
        Entity {
            name: name.to_string(),
            types: types.iter().map(|t| t.to_string()).collect(),
            cardinality,
        }
    }

    fn zero(types: &[&str], card: Option<u32>) -> ReferringExpression {
        ReferringExpression::zero(
            Role::Subject,
            0,
            Constraints {
                compatible_types: types.iter().map(|t| t.to_string()).collect(),
                required_cardinality: card,
                gold: None,
            },
        )
    }

    fn discourse() -> Discourse {
        Discourse {
            id: "t".into(),
            entities: vec![
                entity("T-ELECTRON", &["organization"], 1),
                entity("S-METAL", &["organization"], 1),
                entity("RIE-DEVICES", &["device"], 1),
                entity("DEMAND", &["abstract"], 1),
            ],
            utterances: vec![],
        }
    }

    #[test]
    fn selectional_restriction() {
        let d = discourse();
        let decide = zero(&["organization", "person"], None);
        assert_eq!(
            check_compatibility(&decide, &Antecedent::Entity(EntityId(0)), &d),
            Verdict::Compatible
        );
        assert_eq!(
            check_compatibility(&decide, &Antecedent::Entity(EntityId(2)), &d),
            Verdict::Anomalous
        );
    }

    #[test]
    fn cardinality_agreement() {
        let d = discourse();
        let both = zero(&[], Some(2));
        assert_eq!(
            check_compatibility(&both, &Antecedent::Entity(EntityId(1)), &d),
            Verdict::Anomalous
        );
        let pair = Antecedent::Group(vec![EntityId(0), EntityId(1)]);
        assert_eq!(check_compatibility(&both, &pair, &d), Verdict::Compatible);
        // sets need an explicit cardinality requirement
        assert_eq!(
            check_compatibility(&zero(&[], None), &pair, &d),
            Verdict::Anomalous
        );
    }

    #[test]
    fn unconstrained_slot_accepts_individuals() {
        let d = discourse();
        for i in 0..4 {
            assert_eq!(
                check_compatibility(&zero(&[], None), &Antecedent::Entity(EntityId(i)), &d),
                Verdict::Compatible
            );
        }
    }

    #[test]
    fn local_resolution_skips_incompatible() {
        let d = discourse();
        let u = Utterance {
            index: 1,
            expressions: vec![zero(&["device"], None)],
            tense: Tense::NonPast,
            text: None,
        };
        let z = &u.expressions[0];
        assert_eq!(
            resolve_zero_local(z, &[EntityId(0), EntityId(2)], &u, &d),
            Some(EntityId(2))
        );
        assert_eq!(resolve_zero_local(z, &[EntityId(3)], &u, &d), None);
        assert_eq!(resolve_zero_local(z, &[], &u, &d), None);
    }

    #[test]
    fn zeros_take_distinct_referents() {
        let d = discourse();
        let mut obj = zero(&[], None);
        obj.role = Role::Object2;
        obj.position = 1;
        let u = Utterance {
            index: 1,
            expressions: vec![zero(&[], None), obj],
            tense: Tense::NonPast,
            text: None,
        };
        let res = resolve_zeros(&u, &[EntityId(0), EntityId(1)], &d, ResolutionMode::Checked);
        assert_eq!(res.get(0), Some(&Antecedent::Entity(EntityId(0))));
        assert_eq!(res.get(1), Some(&Antecedent::Entity(EntityId(1))));
    }

    #[test]
    fn no_shared_type_no_sets() {
        let d = discourse();
        let h = CbHistory::default();
        assert!(form_set_candidates(&h, &[EntityId(2), EntityId(3)], 0, 2, &d).is_empty());
    }
}
