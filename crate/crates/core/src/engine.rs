//! Reduce-until-irreducible driver with recorded, replayable traces.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::{Digraph, VertexId};
use crate::error::{Error, Result};
use crate::mfvs;
use crate::reductions::{self, KindSet, Redex};

/// How `normalize` picks among applicable redexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Always the first redex in enumeration order.
    Priority,
    /// Uniformly at random, from a ChaCha8 stream seeded with `seed`.
    Random { seed: u64 },
}

impl Strategy {
    pub fn mode(&self) -> &'static str {
        match self {
            Strategy::Priority => "priority",
            Strategy::Random { .. } => "random",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Strategy::Priority => 0,
            Strategy::Random { seed } => *seed,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strategy={} seed={}", self.mode(), self.seed())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub redex: Redex,
    pub forced: BTreeSet<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// `None` for traces not produced by `normalize` (e.g. search witnesses).
    pub strategy: Option<Strategy>,
    pub initial: Digraph,
    pub steps: Vec<TraceStep>,
    pub final_graph: Digraph,
}

impl ReductionTrace {
    pub fn forced(&self) -> BTreeSet<VertexId> {
        self.steps
            .iter()
            .flat_map(|s| s.forced.iter().cloned())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelResult {
    pub kernel: Digraph,
    pub forced: BTreeSet<VertexId>,
    pub trace: ReductionTrace,
}

/// Applies redexes of `kinds` until none is left. Redexes are re-enumerated
/// after every step; preconditions are not stable under rewriting.
pub fn normalize(g: &Digraph, kinds: KindSet, strategy: Strategy) -> KernelResult {
    let budget = g.vertex_count() + g.arc_count();
    let mut rng = match strategy {
        Strategy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Priority => None,
    };
    let mut current = g.clone();
    let mut steps = Vec::new();
    let mut forced = BTreeSet::new();
    loop {
        let pick = match rng.as_mut() {
            None => reductions::first_at(&current, kinds),
            Some(rng) => {
                let all = reductions::enumerate_at(&current, kinds);
                if all.is_empty() {
                    None
                } else {
                    Some(all[rng.random_range(0..all.len())])
                }
            }
        };
        let Some(slot) = pick else { break };
        let redex = slot.to_redex(&current);
        let (next, forced_slots) = reductions::apply_at(&current, slot);
        let delta: BTreeSet<VertexId> = forced_slots
            .into_iter()
            .map(|i| current.label(i).clone())
            .collect();
        forced.extend(delta.iter().cloned());
        steps.push(TraceStep { redex, forced: delta });
        current = next;
        debug_assert!(steps.len() <= budget);
    }
    KernelResult {
        kernel: current.clone(),
        forced,
        trace: ReductionTrace {
            strategy: Some(strategy),
            initial: g.clone(),
            steps,
            final_graph: current,
        },
    }
}

/// Re-executes a trace with precondition checks at every step.
pub fn replay(trace: &ReductionTrace) -> Result<KernelResult> {
    let mut current = trace.initial.clone();
    let mut forced = BTreeSet::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let n = i + 1;
        let applicable = reductions::check_precondition(&current, &step.redex).map_err(|e| {
            Error::ReplayDivergence {
                step: n,
                reason: e.to_string(),
            }
        })?;
        if !applicable {
            return Err(Error::ReplayDivergence {
                step: n,
                reason: format!("precondition of {} does not hold", step.redex),
            });
        }
        let out = reductions::apply_redex(&current, &step.redex)?;
        if out.forced != step.forced {
            return Err(Error::ReplayDivergence {
                step: n,
                reason: format!("{} forced {:?}, trace records {:?}", step.redex, out.forced, step.forced),
            });
        }
        forced.extend(out.forced);
        current = out.reduced;
    }
    if current != trace.final_graph {
        return Err(Error::ReplayDivergence {
            step: trace.steps.len(),
            reason: "result differs from the recorded final digraph".to_string(),
        });
    }
    Ok(KernelResult {
        kernel: current,
        forced,
        trace: trace.clone(),
    })
}

/// `forced ∪ kernel_mfvs`, after checking `kernel_mfvs` is an FVS of the kernel.
pub fn lift_mfvs(
    result: &KernelResult,
    kernel_mfvs: &BTreeSet<VertexId>,
) -> Result<BTreeSet<VertexId>> {
    if !mfvs::is_fvs(&result.kernel, kernel_mfvs)? {
        return Err(Error::NotAnFvs);
    }
    Ok(result.forced.union(kernel_mfvs).cloned().collect())
}
