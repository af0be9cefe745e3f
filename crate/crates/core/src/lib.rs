//! Centering engine for zero-pronoun resolution.
//!
//! The crate tracks the backward-looking center (Cb), the ranked
//! forward-looking centers (Cf) and the transition between adjacent
//! utterances of a pre-annotated discourse. On top of plain local centering
//! it implements Zero Topic Assignment, parallel centering hypotheses with
//! wa-marking dampening, cue-driven compatibility checks (lexical types,
//! tense, agreement) and a recency-ordered list of former Cbs used to
//! resolve zeros whose antecedent is not local.
//!
//! Everything here is pure computation over in-memory values. Parsing of
//! corpora, report formats and the command line live in the `centering`
//! crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod centering;
pub mod engine;
pub mod error;
pub mod history;
pub mod hypotheses;
pub mod model;
pub mod resolution;

pub use crate::centering::{classify_transition, compute_cb, rank_cf, transition_preference};
pub use crate::engine::{
    analyze, coherence_step, DiscourseReport, EngineConfig, EngineState, HypothesisReport,
    UtteranceReport,
};
pub use crate::error::CenteringError;
pub use crate::history::{
    global_retrieve, push_cb, CbHistory, HistoryEntry, Retrieval, RetrievalContext,
};
pub use crate::hypotheses::{
    argmax_set, build_child, expand_hypotheses, prune_hypotheses, seed_hypothesis, zta_candidate,
    ExpandOptions, Hypothesis, Origin, Pruned,
};
pub use crate::model::{
    validate_discourse, Antecedent, CfEntry, Constraints, Cue, CueSet, Discourse, Entity, EntityId,
    Form, ReferringExpression, Role, Tense, Transition, Utterance, Violation,
};
pub use crate::resolution::{
    agreement_verdict, check_compatibility, form_set_candidates, lexical_verdict,
    resolve_zero_local, resolve_zeros, Resolution, ResolutionMode, Verdict,
};
