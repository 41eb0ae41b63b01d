//! Small named digraphs used by tests, docs and the bindings.

use crate::digraph::Digraph;

/// Three mutually adjacent predecessors `p1, p2, p3` of `u`, which has
/// successors `s1, s2`. `INDICLIQUE(u)` applies.
pub fn diclique_predecessors() -> Digraph {
    let mut arcs = vec![("u", "s1"), ("u", "s2")];
    for p in ["p1", "p2", "p3"] {
        arcs.push((p, "u"));
        for q in ["p1", "p2", "p3"] {
            if p != q {
                arcs.push((p, q));
            }
        }
    }
    Digraph::from_arcs(arcs)
}

/// Complete digraph without loops on `labels`.
pub fn diclique(labels: &[&str]) -> Digraph {
    let mut arcs = Vec::new();
    for a in labels {
        for b in labels {
            if a != b {
                arcs.push((*a, *b));
            }
        }
    }
    Digraph::from_arcs(arcs)
}
