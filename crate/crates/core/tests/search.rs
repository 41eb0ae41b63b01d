//! Exhaustive normal-form search against plain recursion, and the
//! confluence properties that hold regardless of label bookkeeping.

mod common;

use std::collections::BTreeSet;

use common::{all_digraphs, corpus, naive_normal_forms, LABELS};
use dfvs_reduce::confluence::{local_confluence_everywhere, rerouted_arc_violations};
use dfvs_reduce::fixtures::diclique_predecessors;
use dfvs_reduce::{all_normal_forms, local_joinability, Arc, Digraph, KindSet, VertexId};

const CAP: usize = 1_000_000;

#[test]
fn memoized_search_matches_plain_recursion() {
    let exhaustive = (1..=2).flat_map(|n| all_digraphs(n, true));
    let triples = all_digraphs(3, true).map(|g| (g, false));
    let sampled = corpus(120, 4, 6, 21);
    let (mut checked, mut skipped) = (0, 0);
    for (g, must) in exhaustive.map(|g| (g, true)).chain(triples).chain(sampled.into_iter().map(|g| (g, false))) {
        for kinds in [KindSet::all(), KindSet::confluent()] {
            let r = all_normal_forms(&g, kinds, CAP);
            assert!(!r.truncated);
            for (nf, w) in r.normal_forms.iter().zip(&r.witnesses) {
                assert_eq!(&w.initial, &g);
                assert_eq!(&w.final_graph, nf);
            }
            let Some(naive) = naive_normal_forms(&g, kinds, 100_000) else {
                assert!(!must, "{g:?}");
                skipped += 1;
                continue;
            };
            checked += 1;
            let found: BTreeSet<Vec<u8>> = r.normal_forms.iter().map(Digraph::canonical_encoding).collect();
            assert_eq!(found, naive, "{kinds} on {g:?}");
        }
    }
    // The recursion tree grows with the number of orders, not states.
    eprintln!("checked {checked}, skipped {skipped}");
    assert!(skipped * 4 < checked, "checked {checked}, skipped {skipped}");
}

#[test]
fn acyclic_digraphs_reduce_to_nothing() {
    // Arcs only from lower to higher labels: every DAG up to relabelling.
    for n in 0..=5 {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << pairs.len() {
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &(i, j))| Arc::new(LABELS[i], LABELS[j]));
            let g = Digraph::new(LABELS[..n].iter().map(|&l| VertexId::from(l)), arcs);
            for kinds in [KindSet::all(), KindSet::confluent()] {
                let r = all_normal_forms(&g, kinds, CAP);
                assert_eq!(r.normal_forms, vec![Digraph::empty()], "{kinds} on {g:?}");
            }
        }
    }
}

#[test]
fn local_confluence_agrees_with_unique_normal_forms() {
    for g in (1..=3).flat_map(|n| all_digraphs(n, true)).chain(corpus(200, 4, 6, 23)) {
        for kinds in [KindSet::all(), KindSet::confluent()] {
            let local = local_confluence_everywhere(&g, kinds, CAP);
            let global = all_normal_forms(&g, kinds, CAP);
            assert!(!local.truncated);
            assert_eq!(local.normal_forms, global.normal_forms.len());
            // With termination, local confluence at every reachable state
            // is equivalent to a unique normal form from every such state.
            if local.locally_confluent {
                assert_eq!(global.normal_forms.len(), 1, "{kinds} on {g:?}");
            }
            if global.normal_forms.len() > 1 {
                assert!(!local.locally_confluent);
            }
            let root_split = local_joinability(&g, kinds, CAP).iter().any(|p| !p.joined);
            if root_split {
                assert!(global.normal_forms.len() > 1);
            }
        }
    }
}

#[test]
fn diclique_example_pairs_join_under_the_confluent_set() {
    let pairs = local_joinability(&diclique_predecessors(), KindSet::confluent(), CAP);
    assert!(!pairs.is_empty());
    assert!(pairs.iter().all(|p| p.joined && !p.truncated));
}

/// The contraction rules alone can end in differently labelled copies of
/// one digraph: with `N⁺(e) = {a}` and `N⁻(a) = {e}`, contracting `e` keeps
/// `a` and contracting `a` keeps `e`.
#[test]
fn singleton_contractions_keep_different_labels() {
    let g = Digraph::from_arcs([
        ("a", "c"),
        ("a", "d"),
        ("b", "d"),
        ("b", "e"),
        ("c", "b"),
        ("c", "e"),
        ("d", "b"),
        ("d", "c"),
        ("e", "a"),
    ]);
    let r = all_normal_forms(&g, KindSet::confluent(), CAP);
    assert_eq!(r.normal_forms.len(), 2);
    assert!(r.normal_forms[0].is_isomorphic(&r.normal_forms[1]));
    let kept: Vec<bool> = r.normal_forms.iter().map(|h| h.contains_vertex(&"a".into())).collect();
    assert_eq!(kept, [true, false]);
}

#[test]
fn rerouted_arcs_stay_acyclic_on_small_graphs() {
    for g in (1..=3).flat_map(|n| all_digraphs(n, true)).chain(all_digraphs(4, false)).chain(corpus(300, 4, 8, 24)) {
        let v = rerouted_arc_violations(&g);
        assert!(v.in_graph.is_empty() && v.contracted.is_empty(), "{g:?}: {v:?}");
    }
}
