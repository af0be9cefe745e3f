//! Local centering: Cf ranking, Cb computation and transition labels.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::CenteringError;
use crate::model::{CfEntry, EntityId, Role, Transition, Utterance};
use crate::resolution::Resolution;

/// Every (entity, role, position, via-zero) mention realized in `u` under `res`.
fn mentions(u: &Utterance, res: &Resolution) -> Vec<(EntityId, Role, u32, bool)> {
    let mut out = Vec::new();
    for (i, x) in u.expressions.iter().enumerate() {
        if x.is_zero() {
            if let Some(a) = res.get(i) {
                for &m in a.members() {
                    out.push((m, x.role, x.position, true));
                }
            }
        } else if let Some(id) = x.entity {
            out.push((id, x.role, x.position, false));
        }
    }
    out
}

/// Entities realized in `u`, zero-realized ones included.
pub fn realized(u: &Utterance, res: &Resolution) -> BTreeSet<EntityId> {
    mentions(u, res).into_iter().map(|m| m.0).collect()
}

/// Rank the entities of `u` by effective role, ties broken by surface order.
///
/// An entity mentioned more than once takes its most salient mention. With
/// `zta_topic` the zero-realized entity is moved to the head as zero topic.
pub fn rank_cf(
    u: &Utterance,
    res: &Resolution,
    zta_topic: Option<EntityId>,
) -> Result<Vec<CfEntry>, CenteringError> {
    let all = mentions(u, res);
    if let Some(t) = zta_topic {
        if !all.iter().any(|m| m.0 == t && m.3) {
            return Err(CenteringError::ZtaTopicNotZero { entity: t });
        }
    }
    let head: &[EntityId] = match &zta_topic {
        Some(t) => core::slice::from_ref(t),
        None => &[],
    };
    Ok(rank_with_head(&all, head, zta_topic.is_some()))
}

/// Rank with `head` entities forced to the front in the given order. Used for
/// globally retrieved antecedents, which become the new Cp.
pub fn rank_cf_with_head(u: &Utterance, res: &Resolution, head: &[EntityId]) -> Vec<CfEntry> {
    rank_with_head(&mentions(u, res), head, false)
}

fn rank_with_head(
    all: &[(EntityId, Role, u32, bool)],
    head: &[EntityId],
    zero_topic: bool,
) -> Vec<CfEntry> {
    let mut best: BTreeMap<EntityId, (Role, u32)> = BTreeMap::new();
    for &(id, role, pos, _) in all {
        let slot = best.entry(id).or_insert((role, pos));
        if (role, pos) < *slot {
            *slot = (role, pos);
        }
    }
    let mut ranked: Vec<(EntityId, Role, u32)> =
        best.into_iter().map(|(id, (r, p))| (id, r, p)).collect();
    ranked.sort_by_key(|&(id, r, p)| (r, p, id));

    let mut out: Vec<CfEntry> = Vec::with_capacity(ranked.len());
    for &h in head {
        if let Some(&(id, role, _)) = ranked.iter().find(|m| m.0 == h) {
            out.push(CfEntry {
                entity: id,
                role,
                zero_topic,
            });
        }
    }
    for (id, role, _) in ranked {
        if !head.contains(&id) {
            out.push(CfEntry {
                entity: id,
                role,
                zero_topic: false,
            });
        }
    }
    out
}

/// Highest-ranked member of `cf_prev` realized in the current utterance.
pub fn compute_cb(cf_prev: &[EntityId], realized: &BTreeSet<EntityId>) -> Option<EntityId> {
    cf_prev.iter().copied().find(|e| realized.contains(e))
}

/// Four-way transition matrix; no Cb always yields ROUGH-SHIFT.
pub fn classify_transition(
    cb_prev: Option<EntityId>,
    cb_cur: Option<EntityId>,
    cp_cur: Option<EntityId>,
    zta_applied: bool,
) -> Transition {
    let Some(cb) = cb_cur else {
        return Transition::RoughShift;
    };
    let kept = cb_prev == Some(cb);
    let is_cp = cp_cur == Some(cb);
    match (kept, is_cp) {
        (true, true) if zta_applied => Transition::ZtaContinue,
        (true, true) => Transition::Continue,
        (true, false) => Transition::Retain,
        (false, true) => Transition::SmoothShift,
        (false, false) => Transition::RoughShift,
    }
}

pub fn transition_preference(t: Transition) -> u8 {
    t.preference()
}

pub fn entities(cf: &[CfEntry]) -> Vec<EntityId> {
    cf.iter().map(|c| c.entity).collect()
}
