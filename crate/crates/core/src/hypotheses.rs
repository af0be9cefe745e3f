//! Zero Topic Assignment and parallel centering hypotheses.
//!
//! Each utterance extends every live hypothesis of its predecessor. A parent
//! yields its plain reading and, when the ZTA rule fires, a second reading
//! with the zero topic at the head of the Cf. If the utterance also carries
//! an overt wa-marked NP the two readings are *dampened*: they get the same
//! preference and sit on opposite sides of a branch point. Readings on
//! opposite sides of an open branch are never compared, so both stay in the
//! argmax set until later evidence eliminates one side.
//!
//! Evidence is the compatibility oracle applied to a parent's own prediction:
//! when the zeros of the new utterance cannot take the referents pure
//! centering assigns them under that parent, while a compatible local reading
//! exists, the parent is contradicted and its line is marked anomalous.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::centering::{self, classify_transition, compute_cb, rank_cf};
use crate::error::CenteringError;
use crate::history::{push_cb, CbHistory};
use crate::model::{CfEntry, CueSet, Discourse, EntityId, Form, Transition, Utterance};
use crate::resolution::{resolve_zeros, Resolution, ResolutionMode, Verdict};

/// How a hypothesis came about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// First utterance of the discourse.
    Seed,
    /// Plain local centering.
    Local,
    /// Local centering with the ZTA head.
    ZeroTopic,
    /// Antecedent found in the Cb history after local coherence failed;
    /// `rank` 0 is the accepted interpretation.
    Global { rank: usize },
    /// Dispreferred reading resolving the top zero to a non-local former Cb.
    Shadow,
}

impl Origin {
    pub fn tag(&self) -> &'static str {
        match self {
            Origin::Seed => "SEED",
            Origin::Local => "LOCAL",
            Origin::ZeroTopic => "ZTA",
            Origin::Global { .. } => "GLOBAL",
            Origin::Shadow => "SHADOW",
        }
    }
}

/// One (Cb, Cf, transition) reading of an utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub id: usize,
    pub parent: Option<usize>,
    pub utterance: usize,
    pub cb: Option<EntityId>,
    pub cf: Vec<CfEntry>,
    pub transition: Transition,
    pub origin: Origin,
    pub zta_applied: bool,
    pub dampened: bool,
    pub anomalous: bool,
    pub resolution: Resolution,
    pub cues: CueSet,
    pub history: CbHistory,
    /// Cp of the parent reading.
    pub prior_cp: Option<EntityId>,
    /// Effective preference of this reading, then of its ancestors; see [`key_entry`].
    pub key: Vec<u8>,
    /// Open dampened branch points this reading descends from: (branch, side).
    pub sides: Vec<(usize, u8)>,
}

impl Hypothesis {
    pub fn cp(&self) -> Option<EntityId> {
        self.cf.first().map(|c| c.entity)
    }

    pub fn cf_entities(&self) -> Vec<EntityId> {
        centering::entities(&self.cf)
    }

    pub fn is_seed(&self) -> bool {
        self.origin == Origin::Seed
    }

    pub fn preference(&self) -> u8 {
        self.key[0] >> 4
    }

    /// Ordering used everywhere: compatible before anomalous, then preference
    /// of this reading, then of its ancestors.
    pub fn rank_cmp(&self, other: &Hypothesis) -> Ordering {
        (self.anomalous, &self.key).cmp(&(other.anomalous, &other.key))
    }

    /// Same reading regardless of lineage.
    pub fn same_reading(&self, other: &Hypothesis) -> bool {
        self.cf == other.cf
            && self.cb == other.cb
            && self.transition == other.transition
            && self.resolution == other.resolution
    }

    /// Readings on opposite sides of an open branch are incomparable.
    pub fn comparable(&self, other: &Hypothesis) -> bool {
        self.sides
            .iter()
            .all(|(b, s)| other.sides.iter().all(|(b2, s2)| b != b2 || s == s2))
    }
}

/// Ordering key entry: transition preference, then the rank of a globally
/// retrieved alternative among its siblings.
pub fn key_entry(preference: u8, alternative: usize) -> u8 {
    (preference << 4) | alternative.min(15) as u8
}

/// Seed reading for the discourse-initial utterance: Cb is the Cp.
pub fn seed_hypothesis(u: &Utterance) -> Hypothesis {
    let resolution = Resolution::empty(u);
    let cf = rank_cf(u, &resolution, None).unwrap_or_default();
    let cb = cf.first().map(|c| c.entity);
    let history = match cb {
        Some(e) => push_cb(&CbHistory::default(), e, u.index, u.tense),
        None => CbHistory::default(),
    };
    Hypothesis {
        id: 0,
        parent: None,
        utterance: u.index,
        cb,
        cf,
        transition: Transition::Continue,
        origin: Origin::Seed,
        zta_applied: false,
        dampened: false,
        anomalous: false,
        resolution,
        cues: CueSet::default(),
        history,
        prior_cp: None,
        key: alloc::vec![key_entry(Transition::Continue.preference(), 0)],
        sides: Vec::new(),
    }
}

/// Extend `parent` with `u` under `resolution`, optionally with a zero topic.
pub fn build_child(
    parent: &Hypothesis,
    u: &Utterance,
    resolution: Resolution,
    zta_topic: Option<EntityId>,
    origin: Origin,
) -> Result<Hypothesis, CenteringError> {
    let cf = rank_cf(u, &resolution, zta_topic)?;
    let realized = centering::realized(u, &resolution);
    let cb = compute_cb(&parent.cf_entities(), &realized);
    let cp = cf.first().map(|c| c.entity);
    let transition = classify_transition(parent.cb, cb, cp, zta_topic.is_some());
    let history = match cb {
        Some(e) => push_cb(&parent.history, e, u.index, u.tense),
        None => parent.history.clone(),
    };
    let mut key = Vec::with_capacity(parent.key.len() + 1);
    key.push(key_entry(transition.preference(), 0));
    key.extend_from_slice(&parent.key);
    Ok(Hypothesis {
        id: 0,
        parent: Some(parent.id),
        utterance: u.index,
        cb,
        cf,
        transition,
        origin,
        zta_applied: zta_topic.is_some(),
        dampened: false,
        anomalous: false,
        resolution,
        cues: CueSet::default(),
        history,
        prior_cp: parent.cp(),
        key,
        sides: parent.sides.clone(),
    })
}

/// The parent's Cb when a zero of `u` realizes it and the plain ranking
/// would not already give CONTINUE.
pub fn zta_candidate(
    prev: &Hypothesis,
    u: &Utterance,
    resolution: &Resolution,
) -> Option<EntityId> {
    let cb = prev.cb?;
    if !resolution.zero_entities().contains(&cb) {
        return None;
    }
    let plain = build_child(prev, u, resolution.clone(), None, Origin::Local).ok()?;
    (plain.transition != Transition::Continue).then_some(cb)
}

/// Options for [`expand_hypotheses`].
#[derive(Debug, Clone, Copy)]
pub struct ExpandOptions {
    pub zta: bool,
}

/// Local and ZTA children of every parent, best first.
pub fn expand_hypotheses(
    prev: &[Hypothesis],
    u: &Utterance,
    d: &Discourse,
    opts: ExpandOptions,
) -> Vec<Hypothesis> {
    struct Plan {
        checked: Resolution,
        unchecked: Resolution,
        vetoed: bool,
    }
    let contested = prev.len() > 1;
    let mut plans: Vec<Plan> = prev
        .iter()
        .map(|p| {
            let cf_prev = p.cf_entities();
            let checked = resolve_zeros(u, &cf_prev, d, ResolutionMode::Checked);
            let unchecked = resolve_zeros(u, &cf_prev, d, ResolutionMode::Unchecked);
            let vetoed = contested && checked.is_complete(u) && checked != unchecked;
            Plan {
                checked,
                unchecked,
                vetoed,
            }
        })
        .collect();
    // evidence that hits every reading discriminates nothing
    if plans.iter().all(|p| p.vetoed) {
        plans.iter_mut().for_each(|p| p.vetoed = false);
    }

    let mut out = Vec::new();
    for (parent, plan) in prev.iter().zip(plans) {
        if plan.vetoed {
            if let Ok(mut child) = build_child(parent, u, plan.unchecked, None, Origin::Local) {
                child.anomalous = true;
                out.push(child);
            }
            continue;
        }
        let Ok(mut plain) = build_child(parent, u, plan.checked.clone(), None, Origin::Local)
        else {
            continue;
        };
        let topic = if opts.zta {
            zta_candidate(parent, u, &plan.checked)
        } else {
            None
        };
        let zta = topic
            .and_then(|t| build_child(parent, u, plan.checked, Some(t), Origin::ZeroTopic).ok());
        match zta {
            Some(mut z) => {
                let topic = topic.unwrap_or(EntityId(u32::MAX));
                let competing_wa = u
                    .expressions
                    .iter()
                    .any(|x| x.form == Form::Overt && x.wa && x.entity != Some(topic));
                if competing_wa {
                    plain.dampened = true;
                    z.dampened = true;
                    z.key[0] = plain.key[0];
                    plain.sides.push((parent.id, 0));
                    z.sides.push((parent.id, 1));
                }
                out.push(plain);
                out.push(z);
            }
            None => out.push(plain),
        }
    }
    out.sort_by(Hypothesis::rank_cmp);
    out
}

/// Indices of readings no comparable reading strictly beats.
pub fn argmax_set(set: &[Hypothesis]) -> Vec<usize> {
    (0..set.len())
        .filter(|&i| {
            !set.iter()
                .any(|o| o.comparable(&set[i]) && o.rank_cmp(&set[i]) == Ordering::Less)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub kept: Vec<Hypothesis>,
    /// Every reading was anomalous; the least bad one was kept.
    pub fallback: bool,
}

/// Drop anomalous readings, collapse duplicates and cut to `beam`.
///
/// `evidence` marks further readings (by index into `set`) anomalous. The best
/// reading of every incomparable line survives the beam cut whenever the beam
/// allows it. Branch points with a single surviving side are closed.
pub fn prune_hypotheses(
    mut set: Vec<Hypothesis>,
    beam: usize,
    evidence: &[(usize, Verdict)],
) -> Result<Pruned, CenteringError> {
    if beam == 0 {
        return Err(CenteringError::EmptyBeam);
    }
    for &(i, v) in evidence {
        if let Some(h) = set.get_mut(i) {
            h.anomalous |= v == Verdict::Anomalous;
        }
    }
    set.sort_by(Hypothesis::rank_cmp);

    let fallback = !set.is_empty() && set.iter().all(|h| h.anomalous);
    if fallback {
        set.truncate(1);
    } else {
        set.retain(|h| !h.anomalous);
    }

    let mut unique: Vec<Hypothesis> = Vec::with_capacity(set.len());
    for h in set {
        if !unique.iter().any(|k| k.same_reading(&h)) {
            unique.push(h);
        }
    }

    let mut chosen: Vec<usize> = argmax_set(&unique).into_iter().take(beam).collect();
    for i in 0..unique.len() {
        if chosen.len() >= beam {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    let mut kept: Vec<Hypothesis> = unique
        .into_iter()
        .enumerate()
        .filter(|(i, _)| chosen.contains(i))
        .map(|(_, h)| h)
        .collect();

    close_branches(&mut kept);
    Ok(Pruned { kept, fallback })
}

fn close_branches(set: &mut [Hypothesis]) {
    let mut branches: Vec<usize> = set
        .iter()
        .flat_map(|h| h.sides.iter().map(|s| s.0))
        .collect();
    branches.sort_unstable();
    branches.dedup();
    for b in branches {
        let mut sides = set
            .iter()
            .flat_map(|h| h.sides.iter().filter(|s| s.0 == b).map(|s| s.1));
        let first = sides.next();
        if sides.all(|s| Some(s) == first) {
            for h in set.iter_mut() {
                h.sides.retain(|s| s.0 != b);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn hyp(id: usize, key: Vec<u8>, sides: Vec<(usize, u8)>) -> Hypothesis {
        Hypothesis {
            id,
            parent: None,
            utterance: 1,
            cb: Some(EntityId(id as u32)),
            cf: vec![CfEntry {
                entity: EntityId(id as u32),
                role: crate::model::Role::Subject,
                zero_topic: false,
            }],
            transition: Transition::Continue,
            origin: Origin::Local,
            zta_applied: false,
            dampened: false,
            anomalous: false,
            resolution: Resolution::default(),
            cues: CueSet::default(),
            history: CbHistory::default(),
            prior_cp: None,
            key,
            sides,
        }
    }

    #[test]
    fn beam_one_keeps_best() {
        let set = vec![
            hyp(1, vec![3, 1], vec![]),
            hyp(2, vec![1, 1], vec![]),
            hyp(3, vec![2, 1], vec![]),
        ];
        let p = prune_hypotheses(set, 1, &[]).unwrap();
        assert_eq!(p.kept.len(), 1);
        assert_eq!(p.kept[0].id, 2);
    }

    #[test]
    fn zero_beam_is_rejected() {
        assert_eq!(
            prune_hypotheses(vec![], 0, &[]),
            Err(CenteringError::EmptyBeam)
        );
    }

    #[test]
    fn anomalous_never_outranks_compatible() {
        let set = vec![hyp(1, vec![1, 1], vec![]), hyp(2, vec![4, 4], vec![])];
        let p = prune_hypotheses(set, 4, &[(0, Verdict::Anomalous)]).unwrap();
        assert_eq!(p.kept.iter().map(|h| h.id).collect::<Vec<_>>(), vec![2]);
        assert!(!p.fallback);
    }

    #[test]
    fn all_anomalous_keeps_least_bad() {
        let set = vec![hyp(1, vec![3, 1], vec![]), hyp(2, vec![1, 1], vec![])];
        let p =
            prune_hypotheses(set, 4, &[(0, Verdict::Anomalous), (1, Verdict::Anomalous)]).unwrap();
        assert!(p.fallback);
        assert_eq!(p.kept.len(), 1);
        assert_eq!(p.kept[0].id, 2);
        assert!(p.kept[0].anomalous);
    }

    #[test]
    fn open_branch_sides_are_incomparable() {
        let set = vec![
            hyp(1, vec![1, 2], vec![(9, 1)]),
            hyp(2, vec![3, 2], vec![(9, 0)]),
        ];
        assert_eq!(argmax_set(&set), vec![0, 1]);
        let p = prune_hypotheses(set, 4, &[]).unwrap();
        assert_eq!(p.kept.len(), 2);
        assert!(p
            .kept
            .iter()
            .all(|h| h.sides == vec![(9, 1)] || h.sides == vec![(9, 0)]));
    }

    #[test]
    fn branch_closes_when_one_side_remains() {
        let set = vec![
            hyp(1, vec![1, 2], vec![(9, 1)]),
            hyp(2, vec![3, 2], vec![(9, 0)]),
        ];
        let p = prune_hypotheses(set, 4, &[(1, Verdict::Anomalous)]).unwrap();
        assert_eq!(p.kept.len(), 1);
        assert!(p.kept[0].sides.is_empty());
    }

    #[test]
    fn unbounded_beam_without_evidence_loses_nothing() {
        let set: Vec<_> = (0..6)
            .map(|i| hyp(i, vec![(i % 4 + 1) as u8], vec![]))
            .collect();
        let p = prune_hypotheses(set, usize::MAX, &[]).unwrap();
        assert_eq!(p.kept.len(), 6);
    }
}
