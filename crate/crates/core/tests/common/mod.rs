#![allow(dead_code)]

use std::collections::BTreeSet;

use dfvs_reduce::generate::{derive_seed, random_digraph};
use dfvs_reduce::{one_step_reducts, Arc, Digraph, KindSet, VertexId};

pub const LABELS: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

/// Every digraph on the first `n` labels, loops included when asked.
pub fn all_digraphs(n: usize, loops: bool) -> impl Iterator<Item = Digraph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| loops || i != j)
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let arcs = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &(i, j))| Arc::new(LABELS[i], LABELS[j]));
        Digraph::new(LABELS[..n].iter().map(|&l| VertexId::from(l)), arcs)
    })
}

/// `count` seeded random digraphs with `n` cycling through `lo..=hi`, `p`
/// through a few densities and loops alternating.
pub fn corpus(count: usize, lo: usize, hi: usize, seed: u64) -> Vec<Digraph> {
    const P: [f64; 4] = [0.15, 0.25, 0.35, 0.5];
    (0..count)
        .map(|i| {
            let n = lo + i % (hi - lo + 1);
            let p = P[(i / (hi - lo + 1)) % P.len()];
            random_digraph(n, p, i % 2 == 1, derive_seed(seed, i as u64)).unwrap()
        })
        .collect()
}

/// Simple circuits as vertex sequences, each listed once from its least
/// vertex. Loops are circuits of length one.
pub fn circuits(g: &Digraph) -> Vec<Vec<VertexId>> {
    fn walk(g: &Digraph, start: &VertexId, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
        let last = path.last().unwrap().clone();
        for next in g.out_neighbors(&last).unwrap() {
            if &next == start {
                out.push(path.clone());
            } else if next > *start && !path.contains(&next) {
                path.push(next);
                walk(g, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in g.vertices() {
        walk(g, v, &mut vec![v.clone()], &mut out);
    }
    out
}

pub fn circuit_arcs(c: &[VertexId]) -> impl Iterator<Item = Arc> + '_ {
    (0..c.len()).map(move |i| Arc::new(c[i].clone(), c[(i + 1) % c.len()].clone()))
}

/// Acyclicity by circuit enumeration.
pub fn acyclic(g: &Digraph) -> bool {
    circuits(g).is_empty()
}

/// Minimum FVS size by trying subsets in order of size.
pub fn mfvs_size(g: &Digraph) -> usize {
    let vs: Vec<VertexId> = g.vertices().cloned().collect();
    (0..=vs.len())
        .find(|&k| {
            combinations(vs.len(), k)
                .any(|pick| acyclic(&g.delete_vertices(pick.iter().map(|&i| &vs[i])).unwrap()))
        })
        .unwrap()
}

fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |m| m.count_ones() as usize == k)
        .map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// Normal forms by plain recursion over one-step reducts, no memo. `None`
/// once more than `budget` states have been expanded.
pub fn naive_normal_forms(g: &Digraph, kinds: KindSet, budget: usize) -> Option<BTreeSet<Vec<u8>>> {
    fn go(g: &Digraph, kinds: KindSet, left: &mut usize, out: &mut BTreeSet<Vec<u8>>) -> bool {
        if *left == 0 {
            return false;
        }
        *left -= 1;
        let next = one_step_reducts(g, kinds);
        if next.is_empty() {
            out.insert(g.canonical_encoding());
        }
        next.iter().all(|(_, h)| go(h, kinds, left, out))
    }
    let mut out = BTreeSet::new();
    go(g, kinds, &mut budget.clone(), &mut out).then_some(out)
}
