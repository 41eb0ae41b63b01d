//! The ten MFVS-preserving reductions as checked rewriting steps.
//!
//! | kind          | target | precondition                                          | effect             |
//! |---------------|--------|-------------------------------------------------------|--------------------|
//! | `LOOP`        | u      | `(u,u) ∈ E`                                           | `G − u`, force `u` |
//! | `IN0`         | u      | `N⁻(u) = ∅`                                           | `G − u`            |
//! | `OUT0`        | u      | `N⁺(u) = ∅`                                           | `G − u`            |
//! | `IN1`         | u      | no loop, `|N⁻(u)| = 1`                                | `G ∘ u`            |
//! | `OUT1`        | u      | no loop, `|N⁺(u)| = 1`                                | `G ∘ u`            |
//! | `INDICLIQUE`  | u      | no loop, `N⁻(u)` diclique                             | `G ∘ u`            |
//! | `OUTDICLIQUE` | u      | no loop, `N⁺(u)` diclique                             | `G ∘ u`            |
//! | `PIE`         | (u,v)  | one-way, on no circuit of `G→`                        | `G − (u,v)`        |
//! | `CORE`        | u      | no loop, has neighbors, `{u} ∪ N⁻(u) ∪ N⁺(u)` diclique | drop and force neighbors |
//! | `DOME`        | (u,v)  | one-way, `N⁻_{G→}(u) ⊆ N⁻(v)` or `N⁺_{G→}(v) ⊆ N⁺(u)`  | `G − (u,v)`        |
//!
//! Every step strictly decreases `(|V|, |E|)` lexicographically.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::bits;
use crate::digraph::{Arc, Digraph, VertexId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReductionKind {
    Loop,
    In0,
    Out0,
    Core,
    InDiclique,
    OutDiclique,
    In1,
    Out1,
    Pie,
    Dome,
}

impl ReductionKind {
    /// All kinds in enumeration priority order.
    pub const ALL: [ReductionKind; 10] = [
        ReductionKind::Loop,
        ReductionKind::In0,
        ReductionKind::Out0,
        ReductionKind::Core,
        ReductionKind::InDiclique,
        ReductionKind::OutDiclique,
        ReductionKind::In1,
        ReductionKind::Out1,
        ReductionKind::Pie,
        ReductionKind::Dome,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Loop => "LOOP",
            ReductionKind::In0 => "IN0",
            ReductionKind::Out0 => "OUT0",
            ReductionKind::Core => "CORE",
            ReductionKind::InDiclique => "INDICLIQUE",
            ReductionKind::OutDiclique => "OUTDICLIQUE",
            ReductionKind::In1 => "IN1",
            ReductionKind::Out1 => "OUT1",
            ReductionKind::Pie => "PIE",
            ReductionKind::Dome => "DOME",
        }
    }

    pub fn targets_arc(self) -> bool {
        matches!(self, ReductionKind::Pie | ReductionKind::Dome)
    }

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// A set of reduction kinds; iterates in priority order.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct KindSet(u16);

impl KindSet {
    pub fn empty() -> Self {
        KindSet(0)
    }

    pub fn all() -> Self {
        ReductionKind::ALL.into_iter().collect()
    }

    /// `{LOOP, INDICLIQUE, OUTDICLIQUE, PIE}`.
    pub fn confluent() -> Self {
        [
            ReductionKind::Loop,
            ReductionKind::InDiclique,
            ReductionKind::OutDiclique,
            ReductionKind::Pie,
        ]
        .into_iter()
        .collect()
    }

    pub fn contains(self, k: ReductionKind) -> bool {
        self.0 & k.bit() != 0
    }

    pub fn with(self, k: ReductionKind) -> Self {
        KindSet(self.0 | k.bit())
    }

    pub fn without(self, k: ReductionKind) -> Self {
        KindSet(self.0 & !k.bit())
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = ReductionKind> {
        ReductionKind::ALL
            .into_iter()
            .filter(move |k| self.contains(*k))
    }
}

impl FromIterator<ReductionKind> for KindSet {
    fn from_iter<I: IntoIterator<Item = ReductionKind>>(iter: I) -> Self {
        iter.into_iter().fold(KindSet::empty(), KindSet::with)
    }
}

impl fmt::Display for KindSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.iter().map(ReductionKind::name).collect();
        f.write_str(&names.join(","))
    }
}

impl fmt::Debug for KindSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Accepts `all`, `confluent`, or a comma list of kind names.
impl FromStr for KindSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(KindSet::all()),
            "confluent" => Ok(KindSet::confluent()),
            list => list
                .split(',')
                .map(|t| t.trim())
                .filter(|t| !t.is_empty())
                .map(ReductionKind::from_str)
                .collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Target {
    Vertex(VertexId),
    Arc(Arc),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Redex {
    pub kind: ReductionKind,
    pub target: Target,
}

impl Redex {
    pub fn vertex(kind: ReductionKind, v: impl Into<VertexId>) -> Self {
        Redex {
            kind,
            target: Target::Vertex(v.into()),
        }
    }

    pub fn arc(kind: ReductionKind, tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Redex {
            kind,
            target: Target::Arc(Arc::new(tail, head)),
        }
    }
}

/// `KIND(v)` or `KIND(u,v)`.
impl fmt::Display for Redex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.target {
            Target::Vertex(v) => write!(f, "{}({})", self.kind, v),
            Target::Arc(a) => write!(f, "{}({},{})", self.kind, a.tail, a.head),
        }
    }
}

impl FromStr for Redex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::RedexSyntax(s.to_string());
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let inner = rest.strip_suffix(')').ok_or_else(bad)?;
        let kind: ReductionKind = name.parse()?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.iter().any(|p| p.is_empty() || p.chars().any(char::is_whitespace)) {
            return Err(bad());
        }
        match (kind.targets_arc(), parts.as_slice()) {
            (false, [v]) => Ok(Redex::vertex(kind, *v)),
            (true, [t, h]) => Ok(Redex::arc(kind, *t, *h)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ApplyResult {
    pub reduced: Digraph,
    /// Vertices committed to the feedback vertex set by this step.
    pub forced: BTreeSet<VertexId>,
}

/// True iff `r`'s precondition holds in `g`.
pub fn check_precondition(g: &Digraph, r: &Redex) -> Result<bool> {
    let slot = resolve(g, r)?;
    Ok(holds_at(g, slot))
}

/// Applies `r`, failing if its precondition does not hold.
pub fn apply_redex(g: &Digraph, r: &Redex) -> Result<ApplyResult> {
    let slot = resolve(g, r)?;
    if !holds_at(g, slot) {
        return Err(Error::PreconditionViolated(r.clone()));
    }
    let (reduced, forced) = apply_at(g, slot);
    Ok(ApplyResult {
        reduced,
        forced: forced.into_iter().map(|i| g.label(i).clone()).collect(),
    })
}

/// Every applicable redex of the selected kinds, ordered by kind priority
/// and then by target label.
pub fn find_redexes(g: &Digraph, kinds: KindSet) -> Vec<Redex> {
    enumerate_at(g, kinds)
        .into_iter()
        .map(|s| s.to_redex(g))
        .collect()
}

/// A redex addressed by universe slots; `b == a` for vertex targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub(crate) struct SlotRedex {
    pub kind: ReductionKind,
    pub a: usize,
    pub b: usize,
}

impl SlotRedex {
    pub(crate) fn to_redex(self, g: &Digraph) -> Redex {
        if self.kind.targets_arc() {
            Redex {
                kind: self.kind,
                target: Target::Arc(g.arc_at(self.a, self.b)),
            }
        } else {
            Redex {
                kind: self.kind,
                target: Target::Vertex(g.label(self.a).clone()),
            }
        }
    }
}

pub(crate) fn resolve(g: &Digraph, r: &Redex) -> Result<SlotRedex> {
    match (&r.target, r.kind.targets_arc()) {
        (Target::Vertex(v), false) => {
            let a = g.require(v)?;
            Ok(SlotRedex { kind: r.kind, a, b: a })
        }
        (Target::Arc(arc), true) => {
            let (a, b) = g.require_arc(arc)?;
            Ok(SlotRedex { kind: r.kind, a, b })
        }
        (Target::Vertex(_), true) => Err(Error::TargetArity(r.to_string(), "vertex", "arc")),
        (Target::Arc(_), false) => Err(Error::TargetArity(r.to_string(), "arc", "vertex")),
    }
}

fn has_loop(g: &Digraph, u: usize) -> bool {
    g.has_arc_at(u, u)
}

fn neighbors_row(g: &Digraph, u: usize) -> Vec<u64> {
    g.pred_row(u)
        .iter()
        .zip(g.succ_row(u))
        .map(|(p, s)| p | s)
        .collect()
}

fn core_holds(g: &Digraph, u: usize) -> bool {
    if has_loop(g, u) {
        return false;
    }
    let mut row = neighbors_row(g, u);
    if bits::is_empty(&row) {
        return false;
    }
    bits::set(&mut row, u);
    g.is_diclique_row(&row)
}

fn dome_holds(g: &Digraph, u: usize, v: usize) -> bool {
    if u == v || g.has_arc_at(v, u) {
        return false;
    }
    bits::is_subset(&g.one_way_pred_row(u), g.pred_row(v))
        || bits::is_subset(&g.one_way_succ_row(v), g.succ_row(u))
}

fn vertex_holds(g: &Digraph, kind: ReductionKind, u: usize) -> bool {
    match kind {
        ReductionKind::Loop => has_loop(g, u),
        ReductionKind::In0 => bits::is_empty(g.pred_row(u)),
        ReductionKind::Out0 => bits::is_empty(g.succ_row(u)),
        ReductionKind::In1 => !has_loop(g, u) && bits::count(g.pred_row(u)) == 1,
        ReductionKind::Out1 => !has_loop(g, u) && bits::count(g.succ_row(u)) == 1,
        ReductionKind::InDiclique => !has_loop(g, u) && g.is_diclique_row(g.pred_row(u)),
        ReductionKind::OutDiclique => !has_loop(g, u) && g.is_diclique_row(g.succ_row(u)),
        ReductionKind::Core => core_holds(g, u),
        ReductionKind::Pie | ReductionKind::Dome => false,
    }
}

/// Precondition check for a slot redex known to address live targets.
pub(crate) fn holds_at(g: &Digraph, r: SlotRedex) -> bool {
    match r.kind {
        ReductionKind::Pie => {
            g.has_arc_at(r.a, r.b)
                && r.a != r.b
                && !g.has_arc_at(r.b, r.a)
                && !g.reaches_at(r.b, r.a, true)
        }
        ReductionKind::Dome => g.has_arc_at(r.a, r.b) && dome_holds(g, r.a, r.b),
        k => g.is_present(r.a) && vertex_holds(g, k, r.a),
    }
}

pub(crate) fn enumerate_at(g: &Digraph, kinds: KindSet) -> Vec<SlotRedex> {
    let mut out = Vec::new();
    for kind in kinds.iter() {
        match kind {
            ReductionKind::Pie => {
                // One-way arcs joining distinct strong components of G→.
                let comp = g.component_ids(true);
                for u in g.slots() {
                    for v in bits::ones(g.succ_row(u)) {
                        if u != v && !g.has_arc_at(v, u) && comp[u] != comp[v] {
                            out.push(SlotRedex { kind, a: u, b: v });
                        }
                    }
                }
            }
            ReductionKind::Dome => {
                for u in g.slots() {
                    for v in bits::ones(g.succ_row(u)) {
                        if dome_holds(g, u, v) {
                            out.push(SlotRedex { kind, a: u, b: v });
                        }
                    }
                }
            }
            _ => {
                for u in g.slots() {
                    if vertex_holds(g, kind, u) {
                        out.push(SlotRedex { kind, a: u, b: u });
                    }
                }
            }
        }
    }
    out
}

/// The first redex in enumeration order, without building the full list.
pub(crate) fn first_at(g: &Digraph, kinds: KindSet) -> Option<SlotRedex> {
    for kind in kinds.iter() {
        let found = match kind {
            ReductionKind::Pie => {
                let comp = g.component_ids(true);
                g.slots().find_map(|u| {
                    bits::ones(g.succ_row(u))
                        .find(|&v| u != v && !g.has_arc_at(v, u) && comp[u] != comp[v])
                        .map(|v| SlotRedex { kind, a: u, b: v })
                })
            }
            ReductionKind::Dome => g.slots().find_map(|u| {
                bits::ones(g.succ_row(u))
                    .find(|&v| dome_holds(g, u, v))
                    .map(|v| SlotRedex { kind, a: u, b: v })
            }),
            _ => g
                .slots()
                .find(|&u| vertex_holds(g, kind, u))
                .map(|u| SlotRedex { kind, a: u, b: u }),
        };
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Applies a redex whose precondition is known to hold. Returns the reduct
/// and the forced slots.
pub(crate) fn apply_at(g: &Digraph, r: SlotRedex) -> (Digraph, Vec<usize>) {
    let mut h = g.clone();
    let forced = apply_in_place(&mut h, r);
    (h, forced)
}

/// [`apply_at`] on an owned copy; returns the forced slots.
pub(crate) fn apply_in_place(h: &mut Digraph, r: SlotRedex) -> Vec<usize> {
    match r.kind {
        ReductionKind::Loop => {
            h.remove_vertex_at(r.a);
            vec![r.a]
        }
        ReductionKind::In0 | ReductionKind::Out0 => {
            h.remove_vertex_at(r.a);
            Vec::new()
        }
        ReductionKind::In1
        | ReductionKind::Out1
        | ReductionKind::InDiclique
        | ReductionKind::OutDiclique => {
            h.contract_at(r.a);
            Vec::new()
        }
        ReductionKind::Pie | ReductionKind::Dome => {
            h.remove_arc_at(r.a, r.b);
            Vec::new()
        }
        ReductionKind::Core => {
            let forced: Vec<usize> = bits::ones(&neighbors_row(h, r.a)).collect();
            for &x in &forced {
                h.remove_vertex_at(x);
            }
            forced
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn redex_text_round_trip() {
        for s in ["DOME(c,e)", "LOOP(a)", "INDICLIQUE(v10)", "PIE(x,y)"] {
            assert_eq!(s.parse::<Redex>().unwrap().to_string(), s);
        }
        for s in ["dome(c,e)", "LOOP(a,b)", "PIE(a)", "LOOP()", "LOOP(a", "PIE(a,b,c)"] {
            assert!(s.parse::<Redex>().is_err(), "{s}");
        }
    }

    #[test]
    fn kind_sets_parse() {
        assert_eq!("all".parse::<KindSet>().unwrap(), KindSet::all());
        assert_eq!(
            "PIE,LOOP,OUTDICLIQUE,INDICLIQUE".parse::<KindSet>().unwrap(),
            KindSet::confluent()
        );
        assert_eq!(KindSet::confluent().to_string(), "LOOP,INDICLIQUE,OUTDICLIQUE,PIE");
        assert!("LOOP,FOO".parse::<KindSet>().is_err());
    }

    #[test]
    fn diclique_predecessors_example() {
        let g = fixtures::diclique_predecessors();
        let r = Redex::vertex(ReductionKind::InDiclique, "u");
        assert!(check_precondition(&g, &r).unwrap());
        let out = apply_redex(&g, &r).unwrap();
        assert!(out.forced.is_empty());
        assert_eq!(out.reduced, g.contract(&v("u")).unwrap());
        for p in ["p1", "p2", "p3"] {
            for s in ["s1", "s2"] {
                assert!(out.reduced.contains_arc(&Arc::new(p, s)));
            }
        }
    }

    #[test]
    fn pie_skips_two_way_arcs() {
        let g = Digraph::from_arcs([("a", "b"), ("b", "a")]);
        assert!(!check_precondition(&g, &Redex::arc(ReductionKind::Pie, "a", "b")).unwrap());
        assert!(!check_precondition(&g, &Redex::arc(ReductionKind::Dome, "a", "b")).unwrap());
    }

    #[test]
    fn pie_looks_at_one_way_circuits_only() {
        // a -> b -> c -> a where c -> a is 2-way: no circuit in G→ through (a,b).
        let g = Digraph::from_arcs([("a", "b"), ("b", "c"), ("c", "a"), ("a", "c")]);
        let r = Redex::arc(ReductionKind::Pie, "a", "b");
        assert!(check_precondition(&g, &r).unwrap());
        assert!(g.arc_lies_on_circuit(&Arc::new("a", "b")).unwrap());
    }

    #[test]
    fn loop_forces_its_vertex() {
        let g = Digraph::from_arcs([("a", "a")]);
        let out = apply_redex(&g, &Redex::vertex(ReductionKind::Loop, "a")).unwrap();
        assert!(out.reduced.is_empty());
        assert_eq!(out.forced, BTreeSet::from([v("a")]));
    }

    #[test]
    fn core_isolates_centre_and_forces_neighbors() {
        let g = fixtures::diclique(&["u", "u1", "u2", "u3"]);
        let out = apply_redex(&g, &Redex::vertex(ReductionKind::Core, "u")).unwrap();
        assert_eq!(out.reduced, Digraph::new([v("u")], []));
        assert_eq!(out.forced, BTreeSet::from([v("u1"), v("u2"), v("u3")]));
    }

    #[test]
    fn core_needs_neighbors() {
        let g = Digraph::new([v("u")], []);
        assert!(!check_precondition(&g, &Redex::vertex(ReductionKind::Core, "u")).unwrap());
    }

    #[test]
    fn stale_redex_is_an_error() {
        let g = Digraph::from_arcs([("a", "b")]);
        let r = Redex::vertex(ReductionKind::Loop, "a");
        assert!(matches!(
            apply_redex(&g, &r),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            apply_redex(&g, &Redex::vertex(ReductionKind::Loop, "z")),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            check_precondition(&g, &Redex::arc(ReductionKind::Pie, "b", "a")),
            Err(Error::UnknownArc(_))
        ));
        let wrong = Redex {
            kind: ReductionKind::Pie,
            target: Target::Vertex(v("a")),
        };
        assert!(matches!(
            check_precondition(&g, &wrong),
            Err(Error::TargetArity(..))
        ));
    }

    #[test]
    fn dome_counterexample_preconditions() {
        let g = crate::confluence::dome_counterexample();
        let ce = Redex::arc(ReductionKind::Dome, "c", "e");
        let de = Redex::arc(ReductionKind::Dome, "d", "e");
        assert!(check_precondition(&g, &ce).unwrap());
        assert!(check_precondition(&g, &de).unwrap());
        let after = g.delete_arc(&Arc::new("c", "e")).unwrap();
        assert!(!check_precondition(&after, &de).unwrap());
        let found = find_redexes(&g, KindSet::empty().with(ReductionKind::Dome));
        assert!(found.contains(&ce) && found.contains(&de));
    }

    #[test]
    fn find_redexes_orders_by_priority_then_label() {
        assert!(find_redexes(&Digraph::empty(), KindSet::all()).is_empty());
        let g = Digraph::from_arcs([("a", "b"), ("b", "a")]);
        let got: Vec<String> = find_redexes(&g, KindSet::confluent())
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            got,
            ["INDICLIQUE(a)", "INDICLIQUE(b)", "OUTDICLIQUE(a)", "OUTDICLIQUE(b)"]
        );
    }

    #[test]
    fn enumeration_matches_single_checks() {
        let g = crate::confluence::dome_counterexample();
        let listed: BTreeSet<Redex> = find_redexes(&g, KindSet::all()).into_iter().collect();
        for kind in ReductionKind::ALL {
            if kind.targets_arc() {
                for a in g.arcs() {
                    let r = Redex { kind, target: Target::Arc(a) };
                    assert_eq!(check_precondition(&g, &r).unwrap(), listed.contains(&r), "{r}");
                }
            } else {
                for x in g.vertices() {
                    let r = Redex::vertex(kind, x.clone());
                    assert_eq!(check_precondition(&g, &r).unwrap(), listed.contains(&r), "{r}");
                }
            }
        }
        let first = first_at(&g, KindSet::all()).map(|s| s.to_redex(&g));
        assert_eq!(first.as_ref(), find_redexes(&g, KindSet::all()).first());
    }
}
