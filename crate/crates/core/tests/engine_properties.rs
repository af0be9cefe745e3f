mod common;

use std::cmp::Ordering;

use centering_core::centering::realized;
use centering_core::{
    analyze, build_child, classify_transition, compute_cb, expand_hypotheses, resolve_zeros,
    seed_hypothesis, validate_discourse, EngineConfig, ExpandOptions, Origin, ResolutionMode,
    Transition,
};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

proptest! {
    #[test]
    fn generated_discourses_are_well_formed(d in common::discourse()) {
        prop_assert_eq!(validate_discourse(&d), vec![]);
    }

    #[test]
    fn zta_fires_iff_zero_realizes_cb_and_plain_is_not_continue(d in common::discourse()) {
        let mut parent = seed_hypothesis(&d.utterances[0]);
        for u in &d.utterances[1..] {
            let children = expand_hypotheses(std::slice::from_ref(&parent), u, &d, ExpandOptions { zta: true });
            let res = resolve_zeros(u, &parent.cf_entities(), &d, ResolutionMode::Checked);
            let cb = compute_cb(&parent.cf_entities(), &realized(u, &res));
            let plain_cp = centering_core::rank_cf(u, &res, None).unwrap().first().map(|c| c.entity);
            let plain = classify_transition(parent.cb, cb, plain_cp, false);
            let zero_realizes_cb = parent.cb.is_some_and(|c| res.zero_entities().contains(&c));
            let fires = zero_realizes_cb && plain != Transition::Continue;
            let zta: Vec<_> = children.iter().filter(|h| h.origin == Origin::ZeroTopic).collect();
            prop_assert_eq!(zta.len(), usize::from(fires));
            if let Some(z) = zta.first() {
                prop_assert_eq!(z.cp(), parent.cb);
                prop_assert!(z.cf[0].zero_topic);
                let sibling = children.iter().find(|h| h.origin == Origin::Local).unwrap();
                prop_assert_eq!(z.dampened, sibling.dampened);
                if z.transition == Transition::ZtaContinue && sibling.transition == Transition::Retain {
                    let order = z.rank_cmp(sibling);
                    if z.dampened {
                        prop_assert_eq!(order, Ordering::Equal);
                        prop_assert!(!z.comparable(sibling));
                    } else {
                        prop_assert_eq!(order, Ordering::Less);
                    }
                }
            }
            parent = children
                .into_iter()
                .find(|h| h.origin == Origin::Local)
                .unwrap_or_else(|| build_child(&parent, u, res, None, Origin::Local).unwrap());
        }
    }

    #[test]
    fn steps_respect_beam_and_report_consistently(d in common::discourse(), beam in 1usize..5) {
        let cfg = EngineConfig { beam, ..EngineConfig::default() };
        let report = analyze(&d, &cfg).unwrap();
        prop_assert_eq!(report.utterances.len(), d.utterances.len());
        for step in &report.utterances {
            let kept: Vec<_> = step.kept().collect();
            prop_assert!(!kept.is_empty() && kept.len() <= beam);
            prop_assert!(step.hypotheses[step.best].kept);
            prop_assert!(step.argmax.contains(&step.best().id));
            prop_assert_eq!(step.ambiguous, step.argmax.len() > 1);
            if !step.fallback {
                prop_assert!(kept.iter().all(|h| !h.anomalous));
            }
            if step.global_check {
                prop_assert!(matches!(step.transition(), Transition::Retain | Transition::RoughShift));
            }
            let sorted = step.hypotheses.windows(2).all(|w| {
                w[0].hypothesis.rank_cmp(&w[1].hypothesis) != Ordering::Greater
            });
            prop_assert!(sorted);
        }
    }

    #[test]
    fn disabling_global_never_consults_history(d in common::discourse()) {
        let cfg = EngineConfig { global: false, ..EngineConfig::default() };
        let report = analyze(&d, &cfg).unwrap();
        for step in &report.utterances {
            prop_assert!(!step.global_check);
            let local_only = step
                .hypotheses
                .iter()
                .all(|h| !matches!(h.hypothesis.origin, Origin::Global { .. } | Origin::Shadow));
            prop_assert!(local_only);
        }
    }

    #[test]
    fn disabling_zta_never_labels_zta_continue(d in common::discourse()) {
        let cfg = EngineConfig { zta: false, ..EngineConfig::default() };
        let report = analyze(&d, &cfg).unwrap();
        for step in &report.utterances {
            prop_assert!(step.hypotheses.iter().all(|h| h.hypothesis.transition != Transition::ZtaContinue));
        }
    }

    #[test]
    fn analysis_is_deterministic(d in common::discourse()) {
        let cfg = EngineConfig::default();
        prop_assert_eq!(analyze(&d, &cfg).unwrap(), analyze(&d, &cfg).unwrap());
    }
}

#[test]
fn zero_beam_is_an_error() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let d = common::discourse().new_tree(&mut runner).unwrap().current();
    let cfg = EngineConfig {
        beam: 0,
        ..EngineConfig::default()
    };
    assert_eq!(
        analyze(&d, &cfg),
        Err(centering_core::CenteringError::EmptyBeam)
    );
}
