//! Reductions for the minimum directed feedback vertex set problem, viewed
//! as a rewriting system on labeled digraphs.
//!
//! * [`digraph`]: immutable digraphs and the primitive operations `G − u`,
//!   `G − (u,v)`, `G ∘ u`, `G→`.
//! * [`reductions`]: the ten reductions as checked rewriting steps.
//! * [`engine`]: normalization under a pick strategy, traces and replay.
//! * [`confluence`]: normal-form enumeration and joinability checks.
//! * [`mfvs`]: the brute-force oracle and the kernelize-then-solve pipeline.
//! * [`format`], [`generate`]: text formats and seeded random digraphs.

mod bits;
pub mod confluence;
pub mod digraph;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod mfvs;
pub mod reductions;

pub use confluence::{
    all_normal_forms, commutation_square_check, dome_counterexample, local_joinability, one_step_reducts,
    sampled_normal_forms, DivergencePair, NormalFormReport,
};
pub use digraph::{Arc, Digraph, VertexId};
pub use engine::{lift_mfvs, normalize, replay, KernelResult, ReductionTrace, Strategy, TraceStep};
pub use error::{Error, Result};
pub use mfvs::{brute_force_mfvs, is_fvs, solve, verify_soundness, MfvsResult, SoundnessReport};
pub use reductions::{
    apply_redex, check_precondition, find_redexes, ApplyResult, KindSet, Redex, ReductionKind,
    Target,
};
