//! Utterance-by-utterance driver.
//!
//! Every step expands the live readings locally (plain and ZTA), then runs
//! the Local Coherence Check: when the best local label is ROUGH-SHIFT, or
//! RETAIN with no ZTA-CONTINUE available, the unresolved zeros are searched
//! for in the Cb history. The expanded set is finally pruned to the beam.

use alloc::string::String;
use alloc::vec::Vec;

use crate::centering::rank_cf_with_head;
use crate::error::CenteringError;
use crate::history::{global_retrieve, push_cb, CbHistory, RetrievalContext};
use crate::hypotheses::{
    argmax_set, build_child, expand_hypotheses, key_entry, prune_hypotheses, seed_hypothesis,
    ExpandOptions, Hypothesis, Origin,
};
use crate::model::{Antecedent, CueSet, Discourse, EntityId, Transition, Utterance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Maximum number of live readings.
    pub beam: usize,
    /// Apply the ZTA rule.
    pub zta: bool,
    /// Search the Cb history when local coherence fails.
    pub global: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            beam: 4,
            zta: true,
            global: true,
        }
    }
}

/// Live readings after the last processed utterance, best first.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EngineState {
    pub hypotheses: Vec<Hypothesis>,
    next_id: usize,
}

impl EngineState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Cb history of the best live reading.
    pub fn history(&self) -> CbHistory {
        self.hypotheses
            .first()
            .map(|h| h.history.clone())
            .unwrap_or_default()
    }

    fn assign(&mut self, h: &mut Hypothesis) {
        h.id = self.next_id;
        self.next_id += 1;
    }
}

/// One expanded reading and whether it survived pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisReport {
    pub hypothesis: Hypothesis,
    pub kept: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceReport {
    pub index: usize,
    pub seed: bool,
    pub has_zero: bool,
    /// Every expanded reading, best first.
    pub hypotheses: Vec<HypothesisReport>,
    /// Position in `hypotheses` of the preferred reading.
    pub best: usize,
    /// Ids of the kept readings no comparable reading beats.
    pub argmax: Vec<usize>,
    pub ambiguous: bool,
    /// The Cb history was searched.
    pub global_check: bool,
    /// Every reading was anomalous.
    pub fallback: bool,
}

impl UtteranceReport {
    pub fn best(&self) -> &Hypothesis {
        &self.hypotheses[self.best].hypothesis
    }

    pub fn transition(&self) -> Transition {
        self.best().transition
    }

    pub fn cb(&self) -> Option<EntityId> {
        self.best().cb
    }

    pub fn cues(&self) -> CueSet {
        self.best().cues
    }

    pub fn kept(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses
            .iter()
            .filter(|h| h.kept)
            .map(|h| &h.hypothesis)
    }

    /// Expressions of the best reading whose zero stayed unresolved.
    pub fn unresolved(&self, u: &Utterance) -> Vec<usize> {
        self.best().resolution.unresolved(u).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscourseReport {
    pub id: String,
    pub utterances: Vec<UtteranceReport>,
}

impl DiscourseReport {
    /// The last utterance ended with more than one incomparable reading.
    pub fn unresolved_ambiguity(&self) -> bool {
        self.utterances.last().is_some_and(|u| u.ambiguous)
    }
}

/// Process utterance `index` of `d` on top of `state`.
pub fn coherence_step(
    mut state: EngineState,
    d: &Discourse,
    index: usize,
    cfg: &EngineConfig,
) -> Result<(EngineState, UtteranceReport), CenteringError> {
    if cfg.beam == 0 {
        return Err(CenteringError::EmptyBeam);
    }
    let u = &d.utterances[index];
    let previous = index.checked_sub(1).map(|i| &d.utterances[i]);

    if state.hypotheses.is_empty() {
        let mut seed = seed_hypothesis(u);
        state.assign(&mut seed);
        let report = UtteranceReport {
            index: u.index,
            seed: true,
            has_zero: u.has_zero(),
            hypotheses: alloc::vec![HypothesisReport {
                hypothesis: seed.clone(),
                kept: true
            }],
            best: 0,
            argmax: alloc::vec![seed.id],
            ambiguous: false,
            global_check: false,
            fallback: false,
        };
        state.hypotheses = alloc::vec![seed];
        return Ok((state, report));
    }

    let parents = core::mem::take(&mut state.hypotheses);
    let mut children = expand_hypotheses(&parents, u, d, ExpandOptions { zta: cfg.zta });
    let parent_of = |h: &Hypothesis| parents.iter().find(|p| Some(p.id) == h.parent);

    let best_local = children.iter().find(|h| !h.anomalous).map(|h| h.transition);
    let zta_available = children
        .iter()
        .any(|h| !h.anomalous && h.transition == Transition::ZtaContinue);
    let trigger = cfg.global
        && match best_local {
            Some(Transition::RoughShift) => true,
            Some(Transition::Retain) => !zta_available,
            _ => false,
        };

    let zta_parents: Vec<Option<usize>> = children
        .iter()
        .filter(|h| h.origin == Origin::ZeroTopic)
        .map(|h| h.parent)
        .collect();
    let mut global_check = false;
    let mut expanded: Vec<Hypothesis> = Vec::with_capacity(children.len());
    for child in children.drain(..) {
        let Some(parent) = parent_of(&child) else {
            expanded.push(child);
            continue;
        };
        let eligible = !child.anomalous && child.origin == Origin::Local;
        if trigger
            && eligible
            && matches!(
                child.transition,
                Transition::RoughShift | Transition::Retain
            )
            && !child.resolution.is_complete(u)
        {
            global_check = true;
            let globals = global_children(&child, parent, u, previous, d);
            if globals.is_empty() {
                expanded.push(child);
            } else {
                expanded.extend(globals);
            }
        } else if !trigger && cfg.global && eligible {
            let shadow = if zta_parents.contains(&child.parent) {
                None
            } else {
                shadow_child(&child, parent, u, previous, d)
            };
            expanded.push(child);
            expanded.extend(shadow);
        } else {
            expanded.push(child);
        }
    }
    expanded.sort_by(Hypothesis::rank_cmp);
    for h in expanded.iter_mut() {
        state.assign(h);
    }

    let pruned = prune_hypotheses(expanded.clone(), cfg.beam, &[])?;
    let argmax: Vec<usize> = argmax_set(&pruned.kept)
        .into_iter()
        .map(|i| pruned.kept[i].id)
        .collect();
    let best_id = pruned.kept.first().map(|h| h.id);
    let hypotheses: Vec<HypothesisReport> = expanded
        .into_iter()
        .map(|h| {
            let kept = pruned.kept.iter().find(|k| k.id == h.id);
            HypothesisReport {
                hypothesis: kept.cloned().unwrap_or(h),
                kept: kept.is_some(),
            }
        })
        .collect();
    let best = hypotheses
        .iter()
        .position(|h| Some(h.hypothesis.id) == best_id)
        .unwrap_or(0);

    let report = UtteranceReport {
        index: u.index,
        seed: false,
        has_zero: u.has_zero(),
        hypotheses,
        best,
        ambiguous: argmax.len() > 1,
        argmax,
        global_check,
        fallback: pruned.fallback,
    };
    state.hypotheses = pruned.kept;
    Ok((state, report))
}

fn global_children(
    child: &Hypothesis,
    parent: &Hypothesis,
    u: &Utterance,
    previous: Option<&Utterance>,
    d: &Discourse,
) -> Vec<Hypothesis> {
    let cf_prev = parent.cf_entities();
    let ctx = RetrievalContext {
        utterance: u,
        previous,
        cf_prev: &cf_prev,
        discourse: d,
    };
    let mut zeros = child.resolution.unresolved(u);
    let Some(first) = zeros.next() else {
        return Vec::new();
    };
    let rest: Vec<usize> = zeros.collect();
    let retrieval = global_retrieve(&parent.history, &u.expressions[first], ctx);

    let mut out = Vec::new();
    for (rank, a) in retrieval.candidates.iter().enumerate() {
        let mut res = child.resolution.clone();
        res.set(first, Some(a.clone()));
        let mut used: Vec<EntityId> = res.zero_entities().into_iter().collect();
        for &z in &rest {
            let more = global_retrieve(&parent.history, &u.expressions[z], ctx);
            if let Some(b) = more
                .candidates
                .into_iter()
                .find(|b| b.members().iter().all(|m| !used.contains(m)))
            {
                used.extend(b.members().iter().copied());
                res.set(z, Some(b));
            }
        }
        let mut h = child.clone();
        h.cf = rank_cf_with_head(u, &res, a.members());
        h.origin = Origin::Global { rank };
        h.key[0] = key_entry(h.preference(), rank);
        h.cues = if rank == 0 {
            retrieval.cues
        } else {
            CueSet::default()
        };
        if let Antecedent::Entity(e) = a {
            h.history = push_cb(&h.history, *e, u.index, u.tense);
        }
        h.resolution = res;
        out.push(h);
    }
    out
}

fn shadow_child(
    child: &Hypothesis,
    parent: &Hypothesis,
    u: &Utterance,
    previous: Option<&Utterance>,
    d: &Discourse,
) -> Option<Hypothesis> {
    if matches!(
        child.transition,
        Transition::Continue | Transition::ZtaContinue
    ) {
        return None;
    }
    let top = u.zero_order().into_iter().next()?;
    child.resolution.get(top)?;
    let cf_prev = parent.cf_entities();
    let overt = u.overt_entities();
    let taken = child.resolution.zero_entities();
    let ctx = RetrievalContext {
        utterance: u,
        previous,
        cf_prev: &cf_prev,
        discourse: d,
    };
    let retrieval = global_retrieve(&parent.history, &u.expressions[top], ctx);
    let e = retrieval.candidates.iter().find_map(|a| match a {
        Antecedent::Entity(e)
            if !cf_prev.contains(e) && !overt.contains(e) && !taken.contains(e) =>
        {
            Some(*e)
        }
        _ => None,
    })?;
    let mut res = child.resolution.clone();
    res.set(top, Some(Antecedent::Entity(e)));
    let mut h = build_child(parent, u, res, None, Origin::Shadow).ok()?;
    h.history = push_cb(&h.history, e, u.index, u.tense);
    h.sides = child.sides.clone();
    Some(h)
}

/// Run the engine over a whole discourse.
pub fn analyze(d: &Discourse, cfg: &EngineConfig) -> Result<DiscourseReport, CenteringError> {
    let mut state = EngineState::new();
    let mut utterances = Vec::with_capacity(d.utterances.len());
    for i in 0..d.utterances.len() {
        let (next, report) = coherence_step(state, d, i, cfg)?;
        state = next;
        utterances.push(report);
    }
    Ok(DiscourseReport {
        id: d.id.clone(),
        utterances,
    })
}
