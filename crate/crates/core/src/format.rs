//! Text formats: digraph documents, traces and reports.
//!
//! A digraph document is line based:
//!
//! ```text
//! # comment
//! v c        isolated-vertex declaration
//! a b        arc a -> b
//! ```
//!
//! Labels are non-whitespace tokens. Canonical emission lists isolated
//! vertices as `v` lines first, then arcs, each group sorted.
//!
//! A trace is a header line `trace strategy=<mode> seed=<n>` followed by one
//! `KIND(targets) forced=[l1,l2]` line per step.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::confluence::NormalFormReport;
use crate::digraph::{Arc, Digraph, VertexId};
use crate::engine::{ReductionTrace, Strategy, TraceStep};
use crate::error::{Error, Result};
use crate::mfvs::{self, SoundnessReport};

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut vertices = BTreeSet::new();
    let mut arcs = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["v", label] => {
                vertices.insert(VertexId::from(*label));
            }
            [tail, head] => {
                arcs.insert(Arc::new(*tail, *head));
            }
            [lone] => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("lone token `{lone}`; declare isolated vertices as `v {lone}`"),
                })
            }
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected `<tail> <head>` or `v <label>`, found {} tokens", tokens.len()),
                })
            }
        }
    }
    Ok(Digraph::new(vertices, arcs))
}

pub fn emit_digraph(g: &Digraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let isolated = g.in_neighbors(v).map_or(true, |p| p.is_empty())
            && g.out_neighbors(v).map_or(true, |s| s.is_empty());
        if isolated {
            let _ = writeln!(out, "v {v}");
        }
    }
    for a in g.arcs() {
        let _ = writeln!(out, "{} {}", a.tail, a.head);
    }
    out
}

fn label_list(set: &BTreeSet<VertexId>) -> String {
    mfvs::join(set)
}

pub fn format_trace(trace: &ReductionTrace) -> String {
    let mut out = String::new();
    match &trace.strategy {
        Some(s) => {
            let _ = writeln!(out, "trace {s}");
        }
        None => {
            let _ = writeln!(out, "trace strategy=search seed=0");
        }
    }
    for step in &trace.steps {
        let _ = writeln!(out, "{} forced=[{}]", step.redex, label_list(&step.forced));
    }
    out
}

/// Parses the output of [`format_trace`]: the strategy (`None` for search
/// witnesses) and the steps.
pub fn parse_trace(text: &str) -> Result<(Option<Strategy>, Vec<TraceStep>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing trace header".to_string(),
    })?;
    let bad_header = || Error::Parse {
        line: hline + 1,
        message: format!("malformed trace header `{header}`"),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (mode, seed) = match fields.as_slice() {
        ["trace", m, s] => (
            m.strip_prefix("strategy=").ok_or_else(bad_header)?,
            s.strip_prefix("seed=")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(bad_header)?,
        ),
        _ => return Err(bad_header()),
    };
    let strategy = match mode {
        "priority" => Some(Strategy::Priority),
        "random" => Some(Strategy::Random { seed }),
        "search" => None,
        _ => return Err(bad_header()),
    };
    let mut steps = Vec::new();
    for (i, line) in lines {
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let (redex, forced) = line
            .trim()
            .split_once(' ')
            .ok_or_else(|| bad(format!("malformed step `{line}`")))?;
        let redex = redex.parse().map_err(|e: Error| bad(e.to_string()))?;
        let inner = forced
            .strip_prefix("forced=[")
            .and_then(|f| f.strip_suffix(']'))
            .ok_or_else(|| bad(format!("malformed forced list `{forced}`")))?;
        let forced = inner
            .split(',')
            .filter(|s| !s.is_empty())
            .map(VertexId::from)
            .collect();
        steps.push(TraceStep { redex, forced });
    }
    Ok((strategy, steps))
}

/// SHA-256 of the canonical encoding, hex.
pub fn digraph_hash(g: &Digraph) -> String {
    let digest = Sha256::digest(g.canonical_encoding());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn format_normal_form_report(r: &NormalFormReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", digraph_hash(&r.input));
    let _ = writeln!(out, "kinds: {}", r.kinds);
    let _ = writeln!(out, "explored: {}", r.explored);
    let _ = writeln!(out, "truncated: {}", r.truncated);
    let _ = writeln!(out, "normal_forms: {}", r.normal_forms.len());
    for (i, (nf, w)) in r.normal_forms.iter().zip(&r.witnesses).enumerate() {
        let _ = writeln!(out, "# normal form {}", i + 1);
        out.push_str(&emit_digraph(nf));
        let _ = writeln!(out, "# witness {}", i + 1);
        out.push_str(&format_trace(w));
        for forced in &r.forced_variants[i] {
            let _ = writeln!(out, "# forced [{}]", label_list(forced));
        }
    }
    out
}

pub fn format_soundness_report(r: &SoundnessReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "input: {}", digraph_hash(&r.input));
    let _ = writeln!(out, "kinds: {}", r.kinds);
    let _ = writeln!(out, "trials: {} seed: {}", r.trials, r.seed);
    for c in &r.checks {
        let verdict = if c.passed() { "pass" } else { "fail" };
        let _ = writeln!(out, "{}: {} ({} checked)", c.name, verdict, c.checked);
        if let Some(cx) = &c.counterexample {
            let _ = writeln!(out, "# {}", cx.detail);
            let _ = writeln!(out, "# counterexample");
            out.push_str(&emit_digraph(&cx.graph));
            if let Some(t) = &cx.trace {
                let _ = writeln!(out, "# trace");
                out.push_str(&format_trace(t));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::confluence::dome_counterexample;
    use crate::engine::normalize;
    use crate::generate::random_digraph;
    use crate::reductions::KindSet;
    use proptest::{prop_assert_eq, proptest};

    #[test]
    fn parse_cases() {
        assert_eq!(
            parse_digraph("a b\nb a\n").unwrap(),
            Digraph::from_arcs([("a", "b"), ("b", "a")])
        );
        let g = parse_digraph("v c\na b\n").unwrap();
        assert_eq!(g, Digraph::new([VertexId::from("c")], [Arc::new("a", "b")]));
        assert_eq!(parse_digraph("a a\n").unwrap(), Digraph::from_arcs([("a", "a")]));
        assert_eq!(
            parse_digraph("# hi\n\n  a b \na b\nv a\nv a\n").unwrap(),
            Digraph::from_arcs([("a", "b")])
        );
    }

    #[test]
    fn parse_errors_name_the_line() {
        match parse_digraph("a b\nx\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_digraph("a b c\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn emit_cases() {
        assert_eq!(emit_digraph(&Digraph::empty()), "");
        assert_eq!(
            emit_digraph(&Digraph::from_arcs([("b", "a"), ("a", "b")])),
            "a b\nb a\n"
        );
        let g = Digraph::new(["a", "b", "z"].map(VertexId::from), [Arc::new("b", "a")]);
        assert_eq!(emit_digraph(&g), "v z\nb a\n");
    }

    #[test]
    fn trace_round_trip() {
        let g = dome_counterexample();
        let run = normalize(&g, KindSet::all(), Strategy::Random { seed: 3 });
        let text = format_trace(&run.trace);
        assert!(text.starts_with("trace strategy=random seed=3\n"));
        let (strategy, steps) = parse_trace(&text).unwrap();
        assert_eq!(strategy, Some(Strategy::Random { seed: 3 }));
        assert_eq!(steps, run.trace.steps);

        let lp = normalize(&Digraph::from_arcs([("a", "a")]), KindSet::all(), Strategy::Priority);
        assert_eq!(format_trace(&lp.trace), "trace strategy=priority seed=0\nLOOP(a) forced=[a]\n");
        assert!(parse_trace("nope\n").is_err());
        assert!(parse_trace("trace strategy=priority seed=0\nLOOP(a)\n").is_err());
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            digraph_hash(&Digraph::empty()),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    proptest! {
        #[test]
        fn emit_parse_round_trip(n in 0usize..9, p in 0.0f64..1.0, loops: bool, seed: u64, isolated in 0usize..3) {
            let g = random_digraph(n, p, loops, seed).unwrap();
            let extra = (0..isolated).map(|i| VertexId::from(format!("iso{i}")));
            let g = Digraph::new(g.vertices().cloned().chain(extra), g.arcs());
            let text = emit_digraph(&g);
            prop_assert_eq!(parse_digraph(&text).unwrap(), g.clone());
            prop_assert_eq!(emit_digraph(&parse_digraph(&text).unwrap()), text);
        }
    }
}
