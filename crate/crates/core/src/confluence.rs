//! Normal-form enumeration and joinability checks over the reduction
//! relation.
//!
//! States are digraphs compared by labeled equality; forced vertices ride
//! along on witness traces but never distinguish states. Every state reached
//! from an input shares the input's label universe, so the memo keys are the
//! raw bit rows of each state.

use std::collections::{BTreeSet, HashMap};
use std::hash::BuildHasher;

use hashbrown::{DefaultHashBuilder, HashTable};
use rayon::prelude::*;

use crate::bits;
use crate::digraph::{Arc, Digraph, VertexId};
use crate::engine::{self, ReductionTrace, Strategy, TraceStep};
use crate::error::{Error, Result};
use crate::generate::derive_seed;
use crate::reductions::{self, KindSet, Redex, ReductionKind, SlotRedex, Target};

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormReport {
    pub input: Digraph,
    pub kinds: KindSet,
    /// Distinct irreducible digraphs, in canonical-encoding order.
    pub normal_forms: Vec<Digraph>,
    /// One trace from `input` per normal form, same order.
    pub witnesses: Vec<ReductionTrace>,
    /// Distinct forced sets observed per normal form. Exhaustive search only
    /// records the witness's forced set.
    pub forced_variants: Vec<BTreeSet<BTreeSet<VertexId>>>,
    /// Distinct digraphs visited, the input and normal forms included.
    pub explored: usize,
    pub truncated: bool,
}

impl NormalFormReport {
    /// `Some(true)` for a unique normal form found by complete search,
    /// `Some(false)` once two normal forms are known, `None` otherwise.
    pub fn verdict(&self) -> Option<bool> {
        match (self.normal_forms.len(), self.truncated) {
            (n, _) if n >= 2 => Some(false),
            (1, false) => Some(true),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergencePair {
    pub base: Digraph,
    pub left: Redex,
    pub right: Redex,
    pub joined: bool,
    /// Traces from the left and right reducts to a common normal form.
    pub join_witnesses: Option<(ReductionTrace, ReductionTrace)>,
    /// Set when the state cap cut the search; `joined = false` is then
    /// inconclusive.
    pub truncated: bool,
}

/// Every redex of `kinds` applied to `g`, in enumeration order.
pub fn one_step_reducts(g: &Digraph, kinds: KindSet) -> Vec<(Redex, Digraph)> {
    reductions::enumerate_at(g, kinds)
        .into_iter()
        .map(|r| (r.to_redex(g), reductions::apply_at(g, r).0))
        .collect()
}

const ROOT: u32 = u32::MAX;

/// A slot redex packed for the parent table.
#[derive(Clone, Copy)]
struct Step {
    kind: u8,
    a: u32,
    b: u32,
}

impl Step {
    fn pack(r: SlotRedex) -> Step {
        Step {
            kind: r.kind as u8,
            a: r.a as u32,
            b: r.b as u32,
        }
    }

    fn unpack(self) -> SlotRedex {
        SlotRedex {
            kind: ReductionKind::ALL[self.kind as usize],
            a: self.a as usize,
            b: self.b as usize,
        }
    }
}

/// Presence and adjacency bits of a digraph over an `n`-slot universe,
/// packed into `n + n²` bits.
struct Packer {
    n: usize,
    words: usize,
    stride: usize,
    full: Vec<u64>,
}

impl Packer {
    fn new(g: &Digraph) -> Packer {
        let n = g.universe_len();
        Packer {
            n,
            words: g.state_bits().len() / (1 + n),
            stride: (n + n * n).div_ceil(64).max(1),
            full: g.state_bits().to_vec(),
        }
    }

    fn pack(&self, g: &Digraph, out: &mut [u64]) {
        out.fill(0);
        let rows = std::iter::once(g.present_row()).chain((0..self.n).map(|v| g.succ_row(v)));
        for (r, row) in rows.enumerate() {
            for i in bits::ones(row) {
                let p = r * self.n + i;
                out[p / 64] |= 1 << (p % 64);
            }
        }
    }

    fn unpack(&mut self, packed: &[u64], g: &mut Digraph) {
        self.full.fill(0);
        for p in bits::ones(packed) {
            let (r, i) = (p / self.n, p % self.n);
            self.full[r * self.words + i / 64] |= 1 << (i % 64);
        }
        g.load_state(&self.full);
    }
}

/// Reachable states with their parents and, optionally, their successors.
/// Packed states live back to back in `rows`, `stride` words each.
struct StateSpace {
    input: Digraph,
    stride: usize,
    rows: Vec<u64>,
    // Parent and incoming redex of the first discovery of each state.
    parent: Vec<(u32, Step)>,
    // Outgoing (redex, state) pairs, kept only when requested.
    children: Vec<Vec<(SlotRedex, u32)>>,
    normal: Vec<u32>,
    truncated: bool,
}

impl StateSpace {
    fn explore(g: &Digraph, kinds: KindSet, cap: usize, keep_edges: bool) -> StateSpace {
        let hasher = DefaultHashBuilder::default();
        let mut table: HashTable<u32> = HashTable::new();
        let mut packer = Packer::new(g);
        let stride = packer.stride;
        let mut key = vec![0u64; stride];
        packer.pack(g, &mut key);
        let mut space = StateSpace {
            input: g.clone(),
            stride,
            rows: key.clone(),
            parent: vec![(ROOT, Step { kind: 0, a: 0, b: 0 })],
            children: Vec::new(),
            normal: Vec::new(),
            truncated: false,
        };
        if keep_edges {
            space.children.push(Vec::new());
        }
        table.insert_unique(hasher.hash_one(&key), 0, |_| unreachable!());

        let mut cur = g.clone();
        let mut next = g.clone();
        let mut stack = vec![0u32];
        while let Some(id) = stack.pop() {
            packer.unpack(&space.rows[id as usize * stride..][..stride], &mut cur);
            let redexes = reductions::enumerate_at(&cur, kinds);
            if redexes.is_empty() {
                space.normal.push(id);
                continue;
            }
            for r in redexes {
                next.copy_from(&cur);
                reductions::apply_in_place(&mut next, r);
                packer.pack(&next, &mut key);
                let hash = hasher.hash_one(&key);
                let rows = &space.rows;
                let child = match table.find(hash, |&i| rows[i as usize * stride..][..stride] == key[..]) {
                    Some(&c) => c,
                    None => {
                        if space.parent.len() >= cap.max(1) {
                            space.truncated = true;
                            continue;
                        }
                        let c = space.parent.len() as u32;
                        space.rows.extend_from_slice(&key);
                        let rows = &space.rows;
                        table.insert_unique(hash, c, |&i| {
                            hasher.hash_one(&rows[i as usize * stride..][..stride])
                        });
                        space.parent.push((id, Step::pack(r)));
                        if keep_edges {
                            space.children.push(Vec::new());
                        }
                        stack.push(c);
                        c
                    }
                };
                if keep_edges {
                    space.children[id as usize].push((r, child));
                }
            }
        }
        space
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn row(&self, id: u32) -> &[u64] {
        &self.rows[id as usize * self.stride..][..self.stride]
    }

    /// `(|V|, |E|)` of a state.
    fn measure(&self, id: u32) -> (u32, u32) {
        let n = self.input.universe_len();
        let v = bits::ones(self.row(id)).take_while(|&p| p < n).count();
        (v as u32, bits::count(self.row(id)) as u32 - v as u32)
    }

    /// Slot redexes along the discovery path from the input to `id`.
    fn path_to(&self, mut id: u32) -> Vec<SlotRedex> {
        let mut path = Vec::new();
        while id != 0 {
            let (p, r) = self.parent[id as usize];
            path.push(r.unpack());
            id = p;
        }
        path.reverse();
        path
    }

    /// Normal-form ids reachable from each state. Children have a strictly
    /// smaller `(|V|, |E|)`, so ascending measure order is a valid schedule.
    fn normal_form_sets(&self) -> Vec<BTreeSet<u32>> {
        let mut order: Vec<u32> = (0..self.len() as u32).collect();
        order.sort_by_cached_key(|&i| self.measure(i));
        let normal: BTreeSet<u32> = self.normal.iter().copied().collect();
        let mut sets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); self.len()];
        for id in order {
            let i = id as usize;
            let mut acc = BTreeSet::new();
            if normal.contains(&id) {
                acc.insert(id);
            }
            for &(_, c) in &self.children[i] {
                acc.extend(sets[c as usize].iter().copied());
            }
            sets[i] = acc;
        }
        sets
    }

    /// Path from `from` to the normal form `target`, following children
    /// whose normal-form set contains it.
    fn path_between(&self, sets: &[BTreeSet<u32>], mut from: u32, target: u32) -> Vec<SlotRedex> {
        let mut path = Vec::new();
        while from != target {
            let &(r, c) = self.children[from as usize]
                .iter()
                .find(|(_, c)| sets[*c as usize].contains(&target))
                .expect("target reachable");
            path.push(r);
            from = c;
        }
        path
    }
}

/// Builds a labeled trace by applying slot redexes from `start`.
fn trace_from(start: &Digraph, path: &[SlotRedex]) -> ReductionTrace {
    let mut cur = start.clone();
    let mut steps = Vec::with_capacity(path.len());
    for &r in path {
        let redex = r.to_redex(&cur);
        let (next, forced) = reductions::apply_at(&cur, r);
        steps.push(TraceStep {
            redex,
            forced: forced.into_iter().map(|i| cur.label(i).clone()).collect(),
        });
        cur = next;
    }
    ReductionTrace {
        strategy: None,
        initial: start.clone(),
        steps,
        final_graph: cur,
    }
}

fn sorted_report(
    input: &Digraph,
    kinds: KindSet,
    mut found: Vec<(Digraph, ReductionTrace, BTreeSet<BTreeSet<VertexId>>)>,
    explored: usize,
    truncated: bool,
) -> NormalFormReport {
    found.sort_by_cached_key(|(g, _, _)| g.canonical_encoding());
    let mut report = NormalFormReport {
        input: input.clone(),
        kinds,
        normal_forms: Vec::new(),
        witnesses: Vec::new(),
        forced_variants: Vec::new(),
        explored,
        truncated,
    };
    for (g, t, f) in found {
        report.normal_forms.push(g);
        report.witnesses.push(t);
        report.forced_variants.push(f);
    }
    report
}

/// Exhaustive search of every digraph reachable from `g`, memoized on the
/// digraph. Stops creating new states once `state_cap` are known and then
/// reports `truncated`.
pub fn all_normal_forms(g: &Digraph, kinds: KindSet, state_cap: usize) -> NormalFormReport {
    let space = StateSpace::explore(g, kinds, state_cap, false);
    let found = space
        .normal
        .iter()
        .map(|&id| {
            let trace = trace_from(&space.input, &space.path_to(id));
            let forced = BTreeSet::from([trace.forced()]);
            (trace.final_graph.clone(), trace, forced)
        })
        .collect();
    sorted_report(g, kinds, found, space.len(), space.truncated)
}

/// Random-strategy normalizations under seeds `derive_seed(seed, i)` for
/// `i < trials`. Never complete: `truncated` is always set.
pub fn sampled_normal_forms(g: &Digraph, kinds: KindSet, trials: usize, seed: u64) -> NormalFormReport {
    let runs: Vec<_> = (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|i| {
            let run = engine::normalize(g, kinds, Strategy::Random { seed: derive_seed(seed, i) });
            let mut states = Vec::with_capacity(run.trace.steps.len() + 1);
            let mut cur = g.clone();
            states.push(cur.state_bits().to_vec());
            for step in &run.trace.steps {
                cur = reductions::apply_redex(&cur, &step.redex)
                    .expect("normalize produced a valid trace")
                    .reduced;
                states.push(cur.state_bits().to_vec());
            }
            (run, states)
        })
        .collect();

    let mut visited: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut by_kernel: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut found: Vec<(Digraph, ReductionTrace, BTreeSet<BTreeSet<VertexId>>)> = Vec::new();
    for (run, states) in runs {
        visited.extend(states);
        let key = run.kernel.state_bits().to_vec();
        match by_kernel.get(&key) {
            Some(&i) => {
                found[i].2.insert(run.forced);
            }
            None => {
                by_kernel.insert(key, found.len());
                found.push((run.kernel, run.trace, BTreeSet::from([run.forced])));
            }
        }
    }
    sorted_report(g, kinds, found, visited.len(), true)
}

/// For each unordered pair of redexes applicable in `g`, whether the two
/// reducts reach a common normal form.
pub fn local_joinability(g: &Digraph, kinds: KindSet, state_cap: usize) -> Vec<DivergencePair> {
    let space = StateSpace::explore(g, kinds, state_cap, true);
    let sets = space.normal_form_sets();
    let roots = &space.children[0];
    let mut pairs = Vec::new();
    for (i, &(left, l)) in roots.iter().enumerate() {
        for &(right, r) in &roots[i + 1..] {
            let common = sets[l as usize].intersection(&sets[r as usize]).next().copied();
            let join_witnesses = common.map(|w| {
                let lg = reductions::apply_at(g, left).0;
                let rg = reductions::apply_at(g, right).0;
                (
                    trace_from(&lg, &space.path_between(&sets, l, w)),
                    trace_from(&rg, &space.path_between(&sets, r, w)),
                )
            });
            pairs.push(DivergencePair {
                base: g.clone(),
                left: left.to_redex(g),
                right: right.to_redex(g),
                joined: common.is_some(),
                join_witnesses,
                truncated: space.truncated,
            });
        }
    }
    pairs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConfluence {
    /// Every reachable state was checked and all its redex pairs join.
    pub locally_confluent: bool,
    /// First unjoinable pair found, if any.
    pub witness: Option<DivergencePair>,
    pub normal_forms: usize,
    pub explored: usize,
    pub truncated: bool,
}

/// Local joinability at every state reachable from `g`, not just `g`
/// itself. With termination, local confluence everywhere is equivalent to a
/// unique normal form from every reachable state.
pub fn local_confluence_everywhere(g: &Digraph, kinds: KindSet, state_cap: usize) -> LocalConfluence {
    let space = StateSpace::explore(g, kinds, state_cap, true);
    let sets = space.normal_form_sets();
    let mut witness = None;
    'states: for id in 0..space.len() {
        let kids = &space.children[id];
        for (i, &(left, l)) in kids.iter().enumerate() {
            for &(right, r) in &kids[i + 1..] {
                if sets[l as usize].is_disjoint(&sets[r as usize]) {
                    let base = trace_from(&space.input, &space.path_to(id as u32)).final_graph;
                    witness = Some(DivergencePair {
                        left: left.to_redex(&base),
                        right: right.to_redex(&base),
                        base,
                        joined: false,
                        join_witnesses: None,
                        truncated: space.truncated,
                    });
                    break 'states;
                }
            }
        }
    }
    LocalConfluence {
        locally_confluent: witness.is_none() && !space.truncated,
        witness,
        normal_forms: sets[0].len(),
        explored: space.len(),
        truncated: space.truncated,
    }
}

fn apply_all(g: &Digraph, redexes: &[Redex]) -> Option<Digraph> {
    let mut cur = g.clone();
    for r in redexes {
        cur = reductions::apply_redex(&cur, r).ok()?.reduced;
    }
    Some(cur)
}

/// Mechanizes the case analysis pairing `PIE(u,v)` with another redex of
/// the confluent set: both orders are completed with the follow-up steps of
/// that analysis and compared. A follow-up whose precondition fails makes
/// the square fail.
///
/// * `LOOP(x)`: follow with the other redex; when `x ∈ {u, v}` the PIE side
///   just follows with `LOOP(x)`.
/// * `PIE(x,y)`: follow each with the other.
/// * `INDICLIQUE(x)` / `OUTDICLIQUE(x)`, `x ∉ {u,v}`: follow each with the
///   other.
/// * same with `x = u`: after `G ∘ u`, remove every `(p,v)`, `p ∈ N⁻(u)`, by
///   PIE; after `(G − (u,v)) ∘ u`, remove by PIE those `(p,v)` still present.
///   `x = v` is symmetric with `(u,s)`, `s ∈ N⁺(v)`.
pub fn commutation_square_check(g: &Digraph, pie_target: &Arc, other: &Redex) -> Result<bool> {
    let pie = Redex {
        kind: ReductionKind::Pie,
        target: Target::Arc(pie_target.clone()),
    };
    if !matches!(
        other.kind,
        ReductionKind::Loop | ReductionKind::InDiclique | ReductionKind::OutDiclique | ReductionKind::Pie
    ) {
        return Err(Error::Unsupported(format!(
            "{} is outside the confluent rule set",
            other.kind
        )));
    }
    for r in [&pie, other] {
        if !reductions::check_precondition(g, r)? {
            return Err(Error::PreconditionViolated(r.clone()));
        }
    }
    let (u, v) = (&pie_target.tail, &pie_target.head);

    let (left, right) = match &other.target {
        Target::Arc(a) if a == pie_target => return Ok(true),
        Target::Vertex(x) if other.kind == ReductionKind::Loop && (x == u || x == v) => {
            (apply_all(g, std::slice::from_ref(other)), apply_all(g, &[pie.clone(), other.clone()]))
        }
        Target::Vertex(x) if x == u || x == v => {
            // Arcs (p,v) for x = u, or (u,s) for x = v, routed through x.
            let rerouted: Vec<Arc> = if x == u {
                g.in_neighbors(u)?
                    .into_iter()
                    .map(|p| Arc::new(p, v.clone()))
                    .collect()
            } else {
                g.out_neighbors(v)?
                    .into_iter()
                    .map(|s| Arc::new(u.clone(), s))
                    .collect()
            };
            let pies = |h: &Digraph| -> Vec<Redex> {
                rerouted
                    .iter()
                    .filter(|a| h.contains_arc(a))
                    .map(|a| Redex {
                        kind: ReductionKind::Pie,
                        target: Target::Arc(a.clone()),
                    })
                    .collect()
            };
            let left = apply_all(g, std::slice::from_ref(other)).and_then(|h| {
                let follow = pies(&h);
                apply_all(&h, &follow)
            });
            let right = apply_all(g, &[pie.clone(), other.clone()]).and_then(|h| {
                let follow = pies(&h);
                apply_all(&h, &follow)
            });
            (left, right)
        }
        _ => (
            apply_all(g, &[other.clone(), pie.clone()]),
            apply_all(g, &[pie.clone(), other.clone()]),
        ),
    };
    Ok(matches!((left, right), (Some(l), Some(r)) if l == r))
}

/// The DOME counterexample: `DOME(c,e)` and `DOME(d,e)` both apply, the
/// order `d` then `c` succeeds, and removing `(c,e)` first leaves an
/// irreducible digraph.
///
/// The arc set is pinned by the conditions checked in
/// [`dome_counterexample_checks`]: with five vertices every out-arc of `e` is
/// 2-way, so the second DOME case would keep `DOME(d,e)` applicable; a sixth
/// vertex `f` is the smallest completion.
pub fn dome_counterexample() -> Digraph {
    let g = Digraph::from_arcs([
        ("a", "c"),
        ("a", "d"),
        ("a", "e"),
        ("b", "c"),
        ("b", "e"),
        ("c", "d"),
        ("c", "e"),
        ("c", "f"),
        ("d", "b"),
        ("d", "e"),
        ("e", "a"),
        ("e", "f"),
        ("f", "a"),
        ("f", "b"),
    ]);
    for (what, ok) in dome_counterexample_checks(&g) {
        assert!(ok, "DOME counterexample violates: {what}");
    }
    g
}

/// Each neighbourhood equality and order behaviour, with whether it holds in `g`.
pub fn dome_counterexample_checks(g: &Digraph) -> Vec<(String, bool)> {
    let v = |s: &str| VertexId::from(s);
    let set = |labels: &[&str]| labels.iter().map(|s| v(s)).collect::<Vec<_>>();
    let one_way = g.one_way_subgraph();
    let in_of = |h: &Digraph, x: &str| h.in_neighbors(&v(x)).unwrap_or_default();
    let ce = Redex::arc(ReductionKind::Dome, "c", "e");
    let de = Redex::arc(ReductionKind::Dome, "d", "e");
    let holds = |h: &Digraph, r: &Redex| reductions::check_precondition(h, r).unwrap_or(false);
    let without_ce = g.delete_arc(&Arc::new("c", "e")).ok();

    let mut checks = vec![
        ("N-_{G->}(c) = {a,b}".to_string(), in_of(&one_way, "c") == set(&["a", "b"])),
        ("N-_{G->}(d) = {a,c}".to_string(), in_of(&one_way, "d") == set(&["a", "c"])),
        ("N-_G(e) = {a,b,c,d}".to_string(), in_of(g, "e") == set(&["a", "b", "c", "d"])),
        (
            "N-_{G-(c,e)}(e) = {a,b,d}".to_string(),
            without_ce.as_ref().is_some_and(|h| in_of(h, "e") == set(&["a", "b", "d"])),
        ),
        ("DOME(c,e) applicable".to_string(), holds(g, &ce)),
        ("DOME(d,e) applicable".to_string(), holds(g, &de)),
        (
            "DOME(d,e) then DOME(c,e) applies".to_string(),
            apply_all(g, &[de.clone(), ce.clone()]).is_some(),
        ),
    ];
    let blocked = without_ce.as_ref().is_some_and(|h| !holds(h, &de));
    checks.push(("DOME(d,e) blocked after DOME(c,e)".to_string(), blocked));
    let stuck = without_ce
        .as_ref()
        .is_some_and(|h| reductions::find_redexes(h, KindSet::all()).is_empty());
    checks.push(("G - (c,e) irreducible under all ten kinds".to_string(), stuck));
    checks
}

/// Violations of the subsumption claims on `g`: every IN0/IN1 redex must
/// also be an INDICLIQUE redex (OUT0/OUT1 and OUTDICLIQUE likewise) with an
/// identical effect.
pub fn subsumption_violations(g: &Digraph) -> Vec<String> {
    use ReductionKind::*;
    let mut out = Vec::new();
    for x in g.vertices() {
        for (small, big) in [(In0, InDiclique), (In1, InDiclique), (Out0, OutDiclique), (Out1, OutDiclique)] {
            let r_small = Redex::vertex(small, x.clone());
            if !reductions::check_precondition(g, &r_small).unwrap_or(false) {
                continue;
            }
            let r_big = Redex::vertex(big, x.clone());
            match (
                reductions::apply_redex(g, &r_small),
                reductions::apply_redex(g, &r_big),
            ) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => out.push(format!("{r_small} and {r_big} differ in effect")),
                (_, Err(_)) => out.push(format!("{r_small} applicable but {r_big} is not")),
                (Err(e), _) => out.push(format!("{r_small}: {e}")),
            }
        }
    }
    out
}

/// Violations of CORE replay equivalence on `g`: `CORE(u)` followed by
/// removing the isolated `u` must equal `INDICLIQUE(u)` followed by `LOOP`
/// on every former neighbor, in digraph and forced set.
pub fn core_replay_violations(g: &Digraph) -> Vec<String> {
    let mut out = Vec::new();
    for u in g.vertices() {
        let core = Redex::vertex(ReductionKind::Core, u.clone());
        if !reductions::check_precondition(g, &core).unwrap_or(false) {
            continue;
        }
        let via_core = reductions::apply_redex(g, &core).and_then(|a| {
            let b = reductions::apply_redex(&a.reduced, &Redex::vertex(ReductionKind::In0, u.clone()))?;
            Ok((b.reduced, a.forced))
        });
        let via_diclique = (|| -> Result<(Digraph, BTreeSet<VertexId>)> {
            let mut neighbors: BTreeSet<VertexId> = g.in_neighbors(u)?.into_iter().collect();
            neighbors.extend(g.out_neighbors(u)?);
            let mut cur =
                reductions::apply_redex(g, &Redex::vertex(ReductionKind::InDiclique, u.clone()))?.reduced;
            let mut forced = BTreeSet::new();
            for x in neighbors {
                let step = reductions::apply_redex(&cur, &Redex::vertex(ReductionKind::Loop, x))?;
                forced.extend(step.forced);
                cur = step.reduced;
            }
            Ok((cur, forced))
        })();
        match (via_core, via_diclique) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => out.push(format!("CORE({u}) replay mismatch: {a:?} vs {b:?}")),
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReroutedArcViolations {
    /// `(u,v)` on no circuit of `G`, yet `(u,s)` or `(p,v)` is.
    pub in_graph: Vec<String>,
    /// `PIE(u,v)` with `INDICLIQUE(v)` (resp. `OUTDICLIQUE(u)`) applicable,
    /// yet a one-way `(u,s)` in `G ∘ v` (resp. `(p,v)` in `G ∘ u`) lies on a
    /// circuit of the contracted graph's one-way part.
    pub contracted: Vec<String>,
    /// Pairs `(u,v)`, `(u,s)` / `(p,v)` examined in `G`.
    pub checked_in_graph: usize,
    /// Rerouted one-way arcs examined in a contracted graph.
    pub checked_contracted: usize,
}

/// Checks acyclic-arc propagation on every arc of `g`.
pub fn rerouted_arc_violations(g: &Digraph) -> ReroutedArcViolations {
    let mut out = ReroutedArcViolations::default();
    for a in g.arcs() {
        let (u, v) = (&a.tail, &a.head);
        if !g.arc_lies_on_circuit(&a).expect("arc of g") {
            for s in g.out_neighbors(v).expect("vertex of g") {
                let us = Arc::new(u.clone(), s);
                if !g.contains_arc(&us) {
                    continue;
                }
                out.checked_in_graph += 1;
                if g.arc_lies_on_circuit(&us).expect("arc of g") {
                    out.in_graph.push(format!("{a} acyclic but {us} is not"));
                }
            }
            for p in g.in_neighbors(u).expect("vertex of g") {
                let pv = Arc::new(p, v.clone());
                if !g.contains_arc(&pv) {
                    continue;
                }
                out.checked_in_graph += 1;
                if g.arc_lies_on_circuit(&pv).expect("arc of g") {
                    out.in_graph.push(format!("{a} acyclic but {pv} is not"));
                }
            }
        }

        let pie = Redex::arc(ReductionKind::Pie, u.clone(), v.clone());
        if !reductions::check_precondition(g, &pie).expect("arc of g") {
            continue;
        }
        let cases = [
            (ReductionKind::InDiclique, v, true),
            (ReductionKind::OutDiclique, u, false),
        ];
        for (kind, x, through_head) in cases {
            let r = Redex::vertex(kind, x.clone());
            if !reductions::check_precondition(g, &r).expect("vertex of g") {
                continue;
            }
            let h = g.contract(x).expect("no loop on a diclique target");
            let rerouted: Vec<Arc> = if through_head {
                g.out_neighbors(v)
                    .expect("vertex of g")
                    .into_iter()
                    .map(|s| Arc::new(u.clone(), s))
                    .collect()
            } else {
                g.in_neighbors(u)
                    .expect("vertex of g")
                    .into_iter()
                    .map(|p| Arc::new(p, v.clone()))
                    .collect()
            };
            let one_way = h.one_way_subgraph();
            for b in rerouted {
                if b.is_loop() || !h.contains_arc(&b) || h.contains_arc(&b.reversed()) {
                    continue;
                }
                out.checked_contracted += 1;
                if one_way.arc_lies_on_circuit(&b).expect("one-way arc of h") {
                    out.contracted
                        .push(format!("PIE{a} with {r}: {b} lies on a one-way circuit"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dome_counterexample_checks_hold() {
        let g = dome_counterexample();
        assert!(dome_counterexample_checks(&g).iter().all(|(_, ok)| *ok));
        assert_eq!(g.vertex_count(), 6);
    }

    #[test]
    fn counterexample_checks_reject_other_graphs() {
        assert!(!dome_counterexample_checks(&fixtures::diclique_predecessors())
            .iter()
            .all(|(_, ok)| *ok));
    }

    #[test]
    fn one_step_cases() {
        let dome = KindSet::empty().with(ReductionKind::Dome);
        let stuck = dome_counterexample().delete_arc(&Arc::new("c", "e")).unwrap();
        assert!(one_step_reducts(&stuck, KindSet::all()).is_empty());

        let lp = Digraph::from_arcs([("a", "a")]);
        let steps = one_step_reducts(&lp, KindSet::empty().with(ReductionKind::Loop));
        assert_eq!(steps.len(), 1);
        assert!(steps[0].1.is_empty());

        let g = dome_counterexample();
        let reducts: Vec<Digraph> = one_step_reducts(&g, dome).into_iter().map(|(_, h)| h).collect();
        assert!(reducts.contains(&g.delete_arc(&Arc::new("c", "e")).unwrap()));
        assert!(reducts.contains(&g.delete_arc(&Arc::new("d", "e")).unwrap()));
    }

    #[test]
    fn dome_counterexample_is_not_confluent() {
        let g = dome_counterexample();
        let report = all_normal_forms(&g, KindSet::all(), DEFAULT_STATE_CAP);
        assert!(!report.truncated);
        assert!(report.normal_forms.len() >= 2);
        assert_eq!(report.verdict(), Some(false));
        for (nf, w) in report.normal_forms.iter().zip(&report.witnesses) {
            assert!(reductions::find_redexes(nf, KindSet::all()).is_empty());
            assert_eq!(&engine::replay(w).unwrap().kernel, nf);
        }

        let pairs = local_joinability(&g, KindSet::all(), DEFAULT_STATE_CAP);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].left.to_string(), "DOME(c,e)");
        assert_eq!(pairs[0].right.to_string(), "DOME(d,e)");
        assert!(!pairs[0].joined);
    }

    #[test]
    fn empty_graph_has_itself_as_normal_form() {
        let r = all_normal_forms(&Digraph::empty(), KindSet::all(), 10);
        assert_eq!(r.normal_forms, vec![Digraph::empty()]);
        assert_eq!(r.explored, 1);
        assert!(local_joinability(&Digraph::empty(), KindSet::all(), 10).is_empty());
    }

    #[test]
    fn diclique_example_confluent_pairs_join() {
        let g = fixtures::diclique_predecessors();
        let pairs = local_joinability(&g, KindSet::confluent(), DEFAULT_STATE_CAP);
        assert!(!pairs.is_empty());
        for p in &pairs {
            assert!(p.joined, "{} / {}", p.left, p.right);
            let (l, r) = p.join_witnesses.as_ref().unwrap();
            assert_eq!(l.final_graph, r.final_graph);
            engine::replay(l).unwrap();
            engine::replay(r).unwrap();
        }
        let nf = all_normal_forms(&g, KindSet::confluent(), DEFAULT_STATE_CAP);
        assert_eq!(nf.normal_forms.len(), 1);
    }

    #[test]
    fn truncation_is_reported() {
        let g = fixtures::diclique_predecessors();
        let r = all_normal_forms(&g, KindSet::all(), 3);
        assert!(r.truncated);
        assert_eq!(r.explored, 3);
    }

    #[test]
    fn sampled_cases() {
        let g = dome_counterexample();
        let r = sampled_normal_forms(&g, KindSet::all(), 64, 1);
        assert!(r.truncated);
        assert!(r.normal_forms.len() >= 2);
        let r = sampled_normal_forms(&g, KindSet::all(), 1, 1);
        assert_eq!(r.normal_forms.len(), 1);
        let r = sampled_normal_forms(&fixtures::diclique_predecessors(), KindSet::confluent(), 32, 9);
        assert_eq!(r.normal_forms.len(), 1);
        assert_eq!(r.verdict(), None);
    }

    #[test]
    fn commutation_squares_from_the_case_analysis() {
        // PIE(a,b) with a diclique-contractible x away from the arc.
        let g = Digraph::from_arcs([("a", "b"), ("x", "y"), ("y", "x"), ("z", "x"), ("x", "z")]);
        let pie = Arc::new("a", "b");
        let x_in = Redex::vertex(ReductionKind::InDiclique, "x");
        // N⁻(x) = {y, z} is not a diclique; use y instead (N⁻(y) = {x}).
        assert!(!reductions::check_precondition(&g, &x_in).unwrap());
        let y_in = Redex::vertex(ReductionKind::InDiclique, "y");
        assert!(commutation_square_check(&g, &pie, &y_in).unwrap());

        let g = Digraph::from_arcs([("a", "b"), ("b", "b"), ("c", "c")]);
        for x in ["b", "c"] {
            let lp = Redex::vertex(ReductionKind::Loop, x);
            assert!(commutation_square_check(&g, &pie, &lp).unwrap());
        }

        let g = Digraph::from_arcs([("a", "b"), ("c", "d")]);
        let other = Redex::arc(ReductionKind::Pie, "c", "d");
        assert!(commutation_square_check(&g, &pie, &other).unwrap());

        assert!(matches!(
            commutation_square_check(&g, &pie, &Redex::arc(ReductionKind::Dome, "c", "d")),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            commutation_square_check(&g, &pie, &Redex::vertex(ReductionKind::Loop, "a")),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn commutation_square_at_arc_endpoint() {
        // p -> u -> v, u's in-neighborhood {p} is a diclique.
        let g = Digraph::from_arcs([("p", "u"), ("u", "v")]);
        let pie = Arc::new("u", "v");
        let r = Redex::vertex(ReductionKind::InDiclique, "u");
        assert!(commutation_square_check(&g, &pie, &r).unwrap());
        let r = Redex::vertex(ReductionKind::OutDiclique, "v");
        assert!(commutation_square_check(&g, &pie, &r).unwrap());
    }

    #[test]
    fn rerouted_arcs_on_fixtures() {
        for g in [dome_counterexample(), fixtures::diclique_predecessors(), fixtures::diclique(&["a", "b", "c"])] {
            let v = rerouted_arc_violations(&g);
            assert!(v.in_graph.is_empty() && v.contracted.is_empty(), "{v:?}");
        }
    }

    #[test]
    fn subsumption_on_fixtures() {
        let g = Digraph::from_arcs([("p", "p"), ("p", "u"), ("u", "s")]);
        assert!(subsumption_violations(&g).is_empty());
        assert!(subsumption_violations(&fixtures::diclique_predecessors()).is_empty());
        let k4 = fixtures::diclique(&["u", "u1", "u2", "u3"]);
        assert!(core_replay_violations(&k4).is_empty());
    }
}
