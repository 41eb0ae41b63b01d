//! Brute-force feedback vertex set oracle and the kernelize-then-solve
//! pipeline built on it.

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::digraph::{Digraph, VertexId};
use crate::engine::{self, KernelResult, ReductionTrace, Strategy};
use crate::error::{Error, Result};
use crate::generate::derive_seed;
use crate::reductions::{self, KindSet, ReductionKind};

pub const DEFAULT_VERTEX_CAP: usize = 20;

// Subsets are u64 masks over the sorted vertex list.
const MASK_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfvsResult {
    pub size: usize,
    /// Every minimum feedback vertex set.
    pub minimum_sets: BTreeSet<BTreeSet<VertexId>>,
    pub explored_subsets: u64,
}

/// True iff deleting `set` leaves `g` acyclic.
pub fn is_fvs(g: &Digraph, set: &BTreeSet<VertexId>) -> Result<bool> {
    Ok(g.delete_vertices(set)?.is_acyclic())
}

/// Compact successor masks over the sorted vertex list.
struct Local {
    vertices: Vec<VertexId>,
    succ: Vec<u64>,
}

impl Local {
    fn new(g: &Digraph, cap: usize) -> Result<Local> {
        let n = g.vertex_count();
        if n > cap {
            return Err(Error::CapExceeded { vertices: n, cap });
        }
        if n > MASK_LIMIT {
            return Err(Error::Unsupported(format!(
                "brute force supports at most {MASK_LIMIT} vertices"
            )));
        }
        let vertices: Vec<VertexId> = g.vertices().cloned().collect();
        let mut succ = vec![0u64; n];
        for a in g.arcs() {
            let t = vertices.binary_search(&a.tail).expect("arc endpoint");
            let h = vertices.binary_search(&a.head).expect("arc endpoint");
            succ[t] |= 1 << h;
        }
        Ok(Local { vertices, succ })
    }

    fn full(&self) -> u64 {
        match self.vertices.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    /// Whether the subgraph induced by `keep` is acyclic: peel sinks.
    fn acyclic(&self, mut keep: u64) -> bool {
        loop {
            let before = keep;
            let mut rest = keep;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if self.succ[x] & keep == 0 {
                    keep &= !(1 << x);
                }
            }
            if keep == 0 {
                return true;
            }
            if keep == before {
                return false;
            }
        }
    }

    fn labels(&self, mask: u64) -> BTreeSet<VertexId> {
        (0..self.vertices.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.vertices[i].clone())
            .collect()
    }
}

/// All minimum feedback vertex sets, found by testing subsets in order of
/// increasing size (lexicographic within a size).
pub fn brute_force_mfvs(g: &Digraph, vertex_cap: usize) -> Result<MfvsResult> {
    let local = Local::new(g, vertex_cap)?;
    let n = local.vertices.len();
    let full = local.full();
    let mut explored = 0u64;
    for k in 0..=n {
        let mut found = BTreeSet::new();
        for combo in (0..n).combinations(k) {
            explored += 1;
            let mask = combo.iter().fold(0u64, |m, &i| m | 1 << i);
            if local.acyclic(full & !mask) {
                found.insert(local.labels(mask));
            }
        }
        if !found.is_empty() {
            return Ok(MfvsResult {
                size: k,
                minimum_sets: found,
                explored_subsets: explored,
            });
        }
    }
    unreachable!("the full vertex set is always a feedback vertex set")
}

/// The whole family `FVS(g)`.
pub fn all_fvs(g: &Digraph, vertex_cap: usize) -> Result<BTreeSet<BTreeSet<VertexId>>> {
    let local = Local::new(g, vertex_cap)?;
    let full = local.full();
    let mut family = BTreeSet::new();
    let mut mask = 0u64;
    // Walks every submask of `full`.
    loop {
        if local.acyclic(full & !mask) {
            family.insert(local.labels(mask));
        }
        if mask == full {
            break;
        }
        mask = (mask.wrapping_sub(full)) & full;
    }
    Ok(family)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub mfvs: BTreeSet<VertexId>,
    pub kernel: KernelResult,
}

/// Normalizes, brute-forces the kernel, and lifts the kernel solution.
pub fn solve(
    g: &Digraph,
    kinds: KindSet,
    strategy: Strategy,
    vertex_cap: usize,
) -> Result<Solution> {
    let kernel = engine::normalize(g, kinds, strategy);
    let oracle = brute_force_mfvs(&kernel.kernel, vertex_cap)?;
    let best = oracle
        .minimum_sets
        .into_iter()
        .next()
        .expect("at least one minimum set");
    let mfvs = engine::lift_mfvs(&kernel, &best)?;
    Ok(Solution { mfvs, kernel })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub graph: Digraph,
    pub trace: Option<ReductionTrace>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessReport {
    pub input: Digraph,
    pub kinds: KindSet,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

pub const CHECK_SIZE_IDENTITY: &str = "size-identity";
pub const CHECK_LIFT_VALIDITY: &str = "lift-validity";
pub const CHECK_FAMILY_PRESERVATION: &str = "family-preservation";

/// Runs `trials` random normalizations of `g` and certifies each against the
/// brute-force oracle: minimum sizes add up, lifted kernel optima are optima
/// of `g`, and every PIE or DOME step leaves the FVS family unchanged.
pub fn verify_soundness(
    g: &Digraph,
    kinds: KindSet,
    trials: usize,
    seed: u64,
    vertex_cap: usize,
) -> Result<SoundnessReport> {
    let whole = brute_force_mfvs(g, vertex_cap)?;
    let mut size = CheckOutcome {
        name: CHECK_SIZE_IDENTITY,
        checked: 0,
        counterexample: None,
    };
    let mut lift = CheckOutcome {
        name: CHECK_LIFT_VALIDITY,
        ..size.clone()
    };
    let mut family = CheckOutcome {
        name: CHECK_FAMILY_PRESERVATION,
        ..size.clone()
    };

    for trial in 0..trials {
        let strategy = Strategy::Random {
            seed: derive_seed(seed, trial as u64),
        };
        let run = engine::normalize(g, kinds, strategy);
        let kernel = brute_force_mfvs(&run.kernel, vertex_cap)?;

        size.checked += 1;
        if size.counterexample.is_none() && whole.size != run.forced.len() + kernel.size {
            size.counterexample = Some(Counterexample {
                graph: g.clone(),
                trace: Some(run.trace.clone()),
                detail: format!(
                    "mfvs size {} but |forced| = {} and kernel mfvs size {}",
                    whole.size,
                    run.forced.len(),
                    kernel.size
                ),
            });
        }

        for set in &kernel.minimum_sets {
            lift.checked += 1;
            let lifted = engine::lift_mfvs(&run, set)?;
            if lift.counterexample.is_none() && !whole.minimum_sets.contains(&lifted) {
                lift.counterexample = Some(Counterexample {
                    graph: g.clone(),
                    trace: Some(run.trace.clone()),
                    detail: format!(
                        "kernel optimum {} lifts to {}, not a minimum FVS of the input",
                        join(set),
                        join(&lifted)
                    ),
                });
            }
        }

        let mut current = g.clone();
        for (i, step) in run.trace.steps.iter().enumerate() {
            let next = reductions::apply_redex(&current, &step.redex)?.reduced;
            if matches!(step.redex.kind, ReductionKind::Pie | ReductionKind::Dome) {
                family.checked += 1;
                if family.counterexample.is_none()
                    && all_fvs(&current, vertex_cap)? != all_fvs(&next, vertex_cap)?
                {
                    family.counterexample = Some(Counterexample {
                        graph: current.clone(),
                        trace: Some(run.trace.clone()),
                        detail: format!("step {} ({}) changes the FVS family", i + 1, step.redex),
                    });
                }
            }
            current = next;
        }
    }

    Ok(SoundnessReport {
        input: g.clone(),
        kinds,
        trials,
        seed,
        checks: vec![size, lift, family],
    })
}

pub(crate) fn join(set: &BTreeSet<VertexId>) -> String {
    set.iter().map(VertexId::as_str).collect::<Vec<_>>().join(",")
}
