//! Immutable directed graphs with labeled vertices.
//!
//! A [`Digraph`] is stored as a sorted label universe shared between a graph
//! and everything derived from it, plus one flat buffer of bit rows: the
//! present-vertex row, then one successor row and one predecessor row per
//! universe slot. Deleting vertices never shrinks the universe, so every
//! graph reachable by rewriting from an input shares its universe and can be
//! compared or hashed by its raw bit rows.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc as Shared;

use crate::bits;
use crate::error::{Error, Result};

/// Vertex label. Ordering is the byte order of the label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(Shared<str>);

impl VertexId {
    pub fn new(label: impl AsRef<str>) -> Self {
        VertexId(Shared::from(label.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(Shared::from(s))
    }
}

/// Directed arc `(tail, head)`. `tail == head` is a loop.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn new(tail: impl Into<VertexId>, head: impl Into<VertexId>) -> Self {
        Arc {
            tail: tail.into(),
            head: head.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn reversed(&self) -> Arc {
        Arc {
            tail: self.head.clone(),
            head: self.tail.clone(),
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

impl fmt::Debug for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone)]
pub struct Digraph {
    labels: Shared<[VertexId]>,
    words: usize,
    // [present | succ rows | pred rows]; rows of absent vertices are all zero.
    data: Vec<u64>,
}

impl Digraph {
    pub fn empty() -> Self {
        Digraph::new(std::iter::empty(), std::iter::empty())
    }

    /// Builds a digraph from a vertex set and an arc set. Arc endpoints are
    /// added to the vertex set; duplicates collapse.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = Arc>,
    ) -> Self {
        let arcs: Vec<Arc> = arcs.into_iter().collect();
        let mut labels: BTreeSet<VertexId> = vertices.into_iter().collect();
        for a in &arcs {
            labels.insert(a.tail.clone());
            labels.insert(a.head.clone());
        }
        let labels: Shared<[VertexId]> = labels.into_iter().collect();
        let n = labels.len();
        let words = bits::words_for(n);
        let mut g = Digraph {
            labels,
            words,
            data: vec![0; words * (1 + 2 * n)],
        };
        for i in 0..n {
            bits::set(&mut g.data[..words], i);
        }
        for a in &arcs {
            let t = g.slot(&a.tail).expect("endpoint inserted above");
            let h = g.slot(&a.head).expect("endpoint inserted above");
            g.add_arc_at(t, h);
        }
        g
    }

    /// Convenience constructor from label pairs.
    pub fn from_arcs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, S)>) -> Self {
        Digraph::new(
            std::iter::empty(),
            pairs
                .into_iter()
                .map(|(t, h)| Arc::new(t.as_ref(), h.as_ref())),
        )
    }

    pub fn vertex_count(&self) -> usize {
        bits::count(self.present_row())
    }

    pub fn arc_count(&self) -> usize {
        self.slots().map(|i| bits::count(self.succ_row(i))).sum()
    }

    pub fn is_empty(&self) -> bool {
        bits::is_empty(self.present_row())
    }

    /// Vertices in ascending label order.
    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> + '_ {
        self.slots().map(move |i| &self.labels[i])
    }

    /// Arcs in ascending `(tail, head)` order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.slots().flat_map(move |t| {
            bits::ones(self.succ_row(t)).map(move |h| self.arc_at(t, h))
        })
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.index_of(v).is_some()
    }

    pub fn contains_arc(&self, a: &Arc) -> bool {
        match (self.index_of(&a.tail), self.index_of(&a.head)) {
            (Some(t), Some(h)) => self.has_arc_at(t, h),
            _ => false,
        }
    }

    pub fn has_loop(&self, v: &VertexId) -> bool {
        self.index_of(v).is_some_and(|i| self.has_arc_at(i, i))
    }

    /// Successors `N⁺(v)` in ascending order.
    pub fn out_neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let i = self.require(v)?;
        Ok(self.labels_of(self.succ_row(i)))
    }

    /// Predecessors `N⁻(v)` in ascending order.
    pub fn in_neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let i = self.require(v)?;
        Ok(self.labels_of(self.pred_row(i)))
    }

    /// `G − u`.
    pub fn delete_vertex(&self, u: &VertexId) -> Result<Digraph> {
        let i = self.require(u)?;
        let mut g = self.clone();
        g.remove_vertex_at(i);
        Ok(g)
    }

    /// Removes every vertex of `set` at once.
    pub fn delete_vertices<'a>(
        &self,
        set: impl IntoIterator<Item = &'a VertexId>,
    ) -> Result<Digraph> {
        let idx = set
            .into_iter()
            .map(|v| self.require(v))
            .collect::<Result<Vec<_>>>()?;
        let mut g = self.clone();
        for i in idx {
            g.remove_vertex_at(i);
        }
        Ok(g)
    }

    /// `G − (u, v)`.
    pub fn delete_arc(&self, a: &Arc) -> Result<Digraph> {
        let (t, h) = self.require_arc(a)?;
        let mut g = self.clone();
        g.remove_arc_at(t, h);
        Ok(g)
    }

    /// `G ∘ u`: removes `u` and adds every arc of `N⁻(u) × N⁺(u)`.
    ///
    /// Rejected when `u` carries a loop, since the product would then
    /// reintroduce arcs incident to `u`.
    pub fn contract(&self, u: &VertexId) -> Result<Digraph> {
        let i = self.require(u)?;
        if self.has_arc_at(i, i) {
            return Err(Error::LoopOnContractTarget(u.clone()));
        }
        let mut g = self.clone();
        g.contract_at(i);
        Ok(g)
    }

    /// `G→`: keeps exactly the arcs whose reverse is absent.
    pub fn one_way_subgraph(&self) -> Digraph {
        let mut g = self.clone();
        for t in self.slots() {
            for h in bits::ones(self.succ_row(t)) {
                if self.has_arc_at(h, t) {
                    g.remove_arc_at(t, h);
                }
            }
        }
        g
    }

    /// `E↔`: arcs whose reverse is also present. Loops are 2-way.
    pub fn two_way_arcs(&self) -> Vec<Arc> {
        self.arcs()
            .filter(|a| self.contains_arc(&a.reversed()))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let n = self.universe_len();
        let mut indeg = vec![0usize; n];
        let mut ready = Vec::new();
        for i in self.slots() {
            indeg[i] = bits::count(self.pred_row(i));
            if indeg[i] == 0 {
                ready.push(i);
            }
        }
        let mut removed = 0;
        while let Some(i) = ready.pop() {
            removed += 1;
            for s in bits::ones(self.succ_row(i)) {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    ready.push(s);
                }
            }
        }
        removed == self.vertex_count()
    }

    /// True iff some circuit traverses `a`: `a` is a loop, or its head
    /// reaches its tail.
    pub fn arc_lies_on_circuit(&self, a: &Arc) -> Result<bool> {
        let (t, h) = self.require_arc(a)?;
        Ok(t == h || self.reaches_at(h, t, false))
    }

    /// Pairwise arcs in both directions between distinct members. Members of
    /// a set with two or more elements may not carry loops; the empty set
    /// and every singleton are dicliques.
    pub fn is_diclique<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Result<bool> {
        let mut row = vec![0u64; self.words];
        for v in set {
            bits::set(&mut row, self.require(v)?);
        }
        Ok(self.is_diclique_row(&row))
    }

    /// Whether some bijection between the vertex sets maps the arcs of
    /// `self` exactly onto the arcs of `other`. Plain backtracking over
    /// degree-compatible candidates, meant for small digraphs.
    pub fn is_isomorphic(&self, other: &Digraph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.arc_count() != other.arc_count() {
            return false;
        }
        let sig = |g: &Digraph, v: usize| {
            (bits::count(g.pred_row(v)), bits::count(g.succ_row(v)), g.has_arc_at(v, v))
        };
        let left: Vec<usize> = self.slots().collect();
        let right: Vec<usize> = other.slots().collect();
        let mut ls: Vec<_> = left.iter().map(|&v| sig(self, v)).collect();
        let mut rs: Vec<_> = right.iter().map(|&v| sig(other, v)).collect();
        ls.sort_unstable();
        rs.sort_unstable();
        if ls != rs {
            return false;
        }

        fn extend(a: &Digraph, b: &Digraph, left: &[usize], right: &[usize], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
            let i = map.len();
            if i == left.len() {
                return true;
            }
            let x = left[i];
            for (k, &y) in right.iter().enumerate() {
                if used[k]
                    || bits::count(a.pred_row(x)) != bits::count(b.pred_row(y))
                    || bits::count(a.succ_row(x)) != bits::count(b.succ_row(y))
                    || a.has_arc_at(x, x) != b.has_arc_at(y, y)
                {
                    continue;
                }
                let fits = left[..i].iter().zip(map.iter()).all(|(&px, &py)| {
                    a.has_arc_at(x, px) == b.has_arc_at(y, py) && a.has_arc_at(px, x) == b.has_arc_at(py, y)
                });
                if fits {
                    used[k] = true;
                    map.push(y);
                    if extend(a, b, left, right, map, used) {
                        return true;
                    }
                    map.pop();
                    used[k] = false;
                }
            }
            false
        }
        extend(self, other, &left, &right, &mut Vec::new(), &mut vec![false; right.len()])
    }

    /// Canonical byte encoding: one `v <label>` line per vertex in label
    /// order, then one `<tail> <head>` line per arc in `(tail, head)` order.
    /// Two digraphs are equal iff their encodings are equal.
    pub fn canonical_encoding(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for v in self.vertices() {
            out.extend_from_slice(b"v ");
            out.extend_from_slice(v.as_str().as_bytes());
            out.push(b'\n');
        }
        for a in self.arcs() {
            out.extend_from_slice(a.tail.as_str().as_bytes());
            out.push(b' ');
            out.extend_from_slice(a.head.as_str().as_bytes());
            out.push(b'\n');
        }
        out
    }

    // ---- slot-level access, shared with the rewriting modules ----

    pub(crate) fn universe_len(&self) -> usize {
        self.labels.len()
    }

    pub(crate) fn label(&self, i: usize) -> &VertexId {
        &self.labels[i]
    }

    pub(crate) fn same_universe(&self, other: &Digraph) -> bool {
        Shared::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }

    /// Raw bit rows. Equal to another graph's iff the graphs are equal,
    /// provided both share a universe.
    pub(crate) fn state_bits(&self) -> &[u64] {
        &self.data[..self.words * (1 + self.labels.len())]
    }

    /// Overwrites this digraph with a state produced by [`Self::state_bits`]
    /// on a digraph over the same universe, rebuilding predecessor rows.
    pub(crate) fn load_state(&mut self, bits: &[u64]) {
        let n = self.labels.len();
        let words = self.words;
        let (state, pred) = self.data.split_at_mut(words * (1 + n));
        state.copy_from_slice(bits);
        pred.fill(0);
        for t in bits::ones(&state[..words]) {
            let row = &state[words * (1 + t)..words * (2 + t)];
            for h in bits::ones(row) {
                bits::set(&mut pred[words * h..words * (h + 1)], t);
            }
        }
    }

    /// Copies another digraph over the same universe into this one without
    /// reallocating.
    pub(crate) fn copy_from(&mut self, other: &Digraph) {
        self.data.copy_from_slice(&other.data);
    }

    /// Universe slot of a label, whether or not the vertex is still present.
    pub(crate) fn slot(&self, v: &VertexId) -> Option<usize> {
        self.labels.binary_search(v).ok()
    }

    pub(crate) fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.slot(v).filter(|&i| self.is_present(i))
    }

    pub(crate) fn require(&self, v: &VertexId) -> Result<usize> {
        self.index_of(v)
            .ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    pub(crate) fn require_arc(&self, a: &Arc) -> Result<(usize, usize)> {
        match (self.index_of(&a.tail), self.index_of(&a.head)) {
            (Some(t), Some(h)) if self.has_arc_at(t, h) => Ok((t, h)),
            _ => Err(Error::UnknownArc(a.clone())),
        }
    }

    pub(crate) fn is_present(&self, i: usize) -> bool {
        bits::test(self.present_row(), i)
    }

    pub(crate) fn present_row(&self) -> &[u64] {
        &self.data[..self.words]
    }

    pub(crate) fn slots(&self) -> bits::Ones<'_> {
        bits::ones(self.present_row())
    }

    pub(crate) fn succ_row(&self, i: usize) -> &[u64] {
        let start = self.words * (1 + i);
        &self.data[start..start + self.words]
    }

    pub(crate) fn pred_row(&self, i: usize) -> &[u64] {
        let start = self.words * (1 + self.labels.len() + i);
        &self.data[start..start + self.words]
    }

    fn succ_row_mut(&mut self, i: usize) -> &mut [u64] {
        let start = self.words * (1 + i);
        &mut self.data[start..start + self.words]
    }

    fn pred_row_mut(&mut self, i: usize) -> &mut [u64] {
        let start = self.words * (1 + self.labels.len() + i);
        &mut self.data[start..start + self.words]
    }

    pub(crate) fn has_arc_at(&self, t: usize, h: usize) -> bool {
        bits::test(self.succ_row(t), h)
    }

    pub(crate) fn arc_at(&self, t: usize, h: usize) -> Arc {
        Arc {
            tail: self.labels[t].clone(),
            head: self.labels[h].clone(),
        }
    }

    pub(crate) fn labels_of(&self, row: &[u64]) -> Vec<VertexId> {
        bits::ones(row).map(|i| self.labels[i].clone()).collect()
    }

    /// Word `w` of the successor row of `v`, optionally restricted to `G→`.
    #[inline]
    pub(crate) fn succ_word(&self, v: usize, w: usize, one_way: bool) -> u64 {
        let s = self.succ_row(v)[w];
        if one_way {
            s & !self.pred_row(v)[w]
        } else {
            s
        }
    }

    /// `N⁻_{G→}(v)`.
    pub(crate) fn one_way_pred_row(&self, v: usize) -> Vec<u64> {
        self.pred_row(v)
            .iter()
            .zip(self.succ_row(v))
            .map(|(p, s)| p & !s)
            .collect()
    }

    /// `N⁺_{G→}(v)`.
    pub(crate) fn one_way_succ_row(&self, v: usize) -> Vec<u64> {
        (0..self.words).map(|w| self.succ_word(v, w, true)).collect()
    }

    pub(crate) fn is_diclique_row(&self, row: &[u64]) -> bool {
        if bits::count(row) <= 1 {
            return true;
        }
        bits::ones(row).all(|x| {
            !self.has_arc_at(x, x)
                && self
                    .succ_row(x)
                    .iter()
                    .zip(row)
                    .enumerate()
                    .all(|(w, (s, m))| {
                        let own = if w == x / 64 { 1u64 << (x % 64) } else { 0 };
                        (m & !own) & !s == 0
                    })
        })
    }

    /// Directed reachability from `from` to `to` (paths of length ≥ 0).
    pub(crate) fn reaches_at(&self, from: usize, to: usize, one_way: bool) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![0u64; self.words];
        bits::set(&mut seen, from);
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            for (w, seen_w) in seen.iter_mut().enumerate() {
                let mut fresh = self.succ_word(x, w, one_way) & !*seen_w;
                *seen_w |= fresh;
                while fresh != 0 {
                    let y = w * 64 + fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    if y == to {
                        return true;
                    }
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Strongly connected component id per universe slot (`usize::MAX` for
    /// absent vertices), optionally computed in `G→`. Iterative Tarjan.
    pub(crate) fn component_ids(&self, one_way: bool) -> Vec<usize> {
        const UNSET: usize = usize::MAX;
        let n = self.labels.len();
        let words = self.words;
        let mut index = vec![UNSET; n];
        let mut low = vec![0usize; n];
        let mut comp = vec![UNSET; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        // (vertex, current word, unvisited bits of that word)
        let mut calls: Vec<(usize, usize, u64)> = Vec::new();
        let mut next_index = 0;
        let mut next_comp = 0;

        for root in self.slots() {
            if index[root] != UNSET {
                continue;
            }
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;
            calls.push((root, 0, self.succ_word(root, 0, one_way)));

            while let Some(top) = calls.len().checked_sub(1) {
                let (v, mut w, mut rest) = calls[top];
                let mut next = None;
                loop {
                    if rest != 0 {
                        next = Some(w * 64 + rest.trailing_zeros() as usize);
                        rest &= rest - 1;
                        break;
                    }
                    w += 1;
                    if w >= words {
                        break;
                    }
                    rest = self.succ_word(v, w, one_way);
                }
                calls[top] = (v, w, rest);
                match next {
                    Some(y) if index[y] == UNSET => {
                        index[y] = next_index;
                        low[y] = next_index;
                        next_index += 1;
                        stack.push(y);
                        on_stack[y] = true;
                        calls.push((y, 0, self.succ_word(y, 0, one_way)));
                    }
                    Some(y) => {
                        if on_stack[y] {
                            low[v] = low[v].min(index[y]);
                        }
                    }
                    None => {
                        calls.pop();
                        if let Some(&(parent, _, _)) = calls.last() {
                            low[parent] = low[parent].min(low[v]);
                        }
                        if low[v] == index[v] {
                            while let Some(x) = stack.pop() {
                                on_stack[x] = false;
                                comp[x] = next_comp;
                                if x == v {
                                    break;
                                }
                            }
                            next_comp += 1;
                        }
                    }
                }
            }
        }
        comp
    }

    // ---- in-place edits on owned copies ----

    pub(crate) fn add_arc_at(&mut self, t: usize, h: usize) {
        bits::set(self.succ_row_mut(t), h);
        bits::set(self.pred_row_mut(h), t);
    }

    pub(crate) fn remove_arc_at(&mut self, t: usize, h: usize) {
        bits::clear(self.succ_row_mut(t), h);
        bits::clear(self.pred_row_mut(h), t);
    }

    pub(crate) fn remove_vertex_at(&mut self, i: usize) {
        let succ = self.succ_row(i).to_vec();
        let pred = self.pred_row(i).to_vec();
        for s in bits::ones(&succ) {
            bits::clear(self.pred_row_mut(s), i);
        }
        for p in bits::ones(&pred) {
            bits::clear(self.succ_row_mut(p), i);
        }
        self.succ_row_mut(i).fill(0);
        self.pred_row_mut(i).fill(0);
        let words = self.words;
        bits::clear(&mut self.data[..words], i);
    }

    /// Requires `(i, i)` absent.
    pub(crate) fn contract_at(&mut self, i: usize) {
        debug_assert!(!self.has_arc_at(i, i));
        let succ = self.succ_row(i).to_vec();
        let pred = self.pred_row(i).to_vec();
        self.remove_vertex_at(i);
        for p in bits::ones(&pred) {
            for (w, s) in succ.iter().enumerate() {
                self.succ_row_mut(p)[w] |= s;
            }
        }
        for s in bits::ones(&succ) {
            for (w, p) in pred.iter().enumerate() {
                self.pred_row_mut(s)[w] |= p;
            }
        }
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        if self.same_universe(other) {
            return self.state_bits() == other.state_bits();
        }
        self.vertices().eq(other.vertices()) && self.arcs().eq(other.arcs())
    }
}

impl Eq for Digraph {}

impl Hash for Digraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_encoding().hash(state);
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("vertices", &self.vertices().collect::<Vec<_>>())
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Default for Digraph {
    fn default() -> Self {
        Digraph::empty()
    }
}
