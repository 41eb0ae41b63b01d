//! Python bindings: digraphs, reductions, normalization, normal-form search
//! and the brute-force MFVS oracle.

use std::collections::BTreeSet;

use dfvs_reduce::confluence::{self, DEFAULT_STATE_CAP};
use dfvs_reduce::format;
use dfvs_reduce::generate;
use dfvs_reduce::mfvs::DEFAULT_VERTEX_CAP;
use dfvs_reduce::{self as dfvs, Arc, Error, KindSet, Redex, Strategy, VertexId};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::CapExceeded { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn kinds(rules: &str) -> PyResult<KindSet> {
    rules.parse().map_err(py_err)
}

fn strings(set: &BTreeSet<VertexId>) -> Vec<String> {
    set.iter().map(|v| v.as_str().to_owned()).collect()
}

/// An immutable labeled digraph.
#[pyclass(frozen, eq, hash, skip_from_py_object, module = "pydfvs")]
#[derive(Clone, PartialEq, Eq, Hash)]
struct Digraph {
    inner: dfvs::Digraph,
}

impl From<dfvs::Digraph> for Digraph {
    fn from(inner: dfvs::Digraph) -> Self {
        Digraph { inner }
    }
}

#[pymethods]
impl Digraph {
    #[new]
    #[pyo3(signature = (arcs = Vec::new(), vertices = Vec::new()))]
    fn new(arcs: Vec<(String, String)>, vertices: Vec<String>) -> Self {
        dfvs::Digraph::new(
            vertices.into_iter().map(VertexId::from),
            arcs.into_iter().map(|(t, h)| Arc::new(t, h)),
        )
        .into()
    }

    /// Parses the line-based document format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        format::parse_digraph(text).map(Into::into).map_err(py_err)
    }

    fn to_text(&self) -> String {
        format::emit_digraph(&self.inner)
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.vertices().map(|v| v.as_str().to_owned()).collect()
    }

    fn arcs(&self) -> Vec<(String, String)> {
        self.inner
            .arcs()
            .map(|a| (a.tail.as_str().to_owned(), a.head.as_str().to_owned()))
            .collect()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    fn is_acyclic(&self) -> bool {
        self.inner.is_acyclic()
    }

    fn is_isomorphic(&self, other: &Digraph) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn delete_vertex(&self, v: &str) -> PyResult<Self> {
        self.inner.delete_vertex(&v.into()).map(Into::into).map_err(py_err)
    }

    fn delete_arc(&self, tail: &str, head: &str) -> PyResult<Self> {
        self.inner.delete_arc(&Arc::new(tail, head)).map(Into::into).map_err(py_err)
    }

    fn contract(&self, v: &str) -> PyResult<Self> {
        self.inner.contract(&v.into()).map(Into::into).map_err(py_err)
    }

    fn one_way_subgraph(&self) -> Self {
        self.inner.one_way_subgraph().into()
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Digraph({} vertices, {} arcs)",
            self.inner.vertex_count(),
            self.inner.arc_count()
        )
    }
}

/// Applicable redexes in enumeration order, as `KIND(v)` / `KIND(u,v)`.
#[pyfunction]
#[pyo3(signature = (g, rules = "all"))]
fn find_redexes(g: &Digraph, rules: &str) -> PyResult<Vec<String>> {
    Ok(dfvs::find_redexes(&g.inner, kinds(rules)?)
        .iter()
        .map(Redex::to_string)
        .collect())
}

/// Applies one redex; returns the reduct and the forced labels.
#[pyfunction]
fn apply_redex(g: &Digraph, redex: &str) -> PyResult<(Digraph, Vec<String>)> {
    let redex: Redex = redex.parse().map_err(py_err)?;
    let r = dfvs::apply_redex(&g.inner, &redex).map_err(py_err)?;
    Ok((r.reduced.into(), strings(&r.forced)))
}

/// Normalizes `g`; returns the kernel, the forced labels and the trace text.
#[pyfunction]
#[pyo3(signature = (g, rules = "all", strategy = "priority", seed = 0))]
fn normalize(g: &Digraph, rules: &str, strategy: &str, seed: u64) -> PyResult<(Digraph, Vec<String>, String)> {
    let strategy = match strategy {
        "priority" => Strategy::Priority,
        "random" => Strategy::Random { seed },
        other => return Err(PyValueError::new_err(format!("unknown strategy `{other}`"))),
    };
    let run = dfvs::normalize(&g.inner, kinds(rules)?, strategy);
    Ok((run.kernel.into(), strings(&run.forced), format::format_trace(&run.trace)))
}

/// Replays a trace text from `g`; returns the final digraph.
#[pyfunction]
fn replay(g: &Digraph, trace: &str) -> PyResult<Digraph> {
    let (strategy, steps) = format::parse_trace(trace).map_err(py_err)?;
    let mut cur = g.inner.clone();
    for step in &steps {
        cur = dfvs::apply_redex(&cur, &step.redex).map_err(py_err)?.reduced;
    }
    let trace = dfvs::ReductionTrace {
        strategy,
        initial: g.inner.clone(),
        steps,
        final_graph: cur,
    };
    dfvs::replay(&trace).map(|k| k.kernel.into()).map_err(py_err)
}

/// Exhaustive normal-form search. Returns `(normal_forms, explored,
/// truncated)`.
#[pyfunction]
#[pyo3(signature = (g, rules = "all", cap = DEFAULT_STATE_CAP))]
fn all_normal_forms(g: &Digraph, rules: &str, cap: usize) -> PyResult<(Vec<Digraph>, usize, bool)> {
    let r = confluence::all_normal_forms(&g.inner, kinds(rules)?, cap);
    Ok((
        r.normal_forms.into_iter().map(Into::into).collect(),
        r.explored,
        r.truncated,
    ))
}

/// Minimum FVS size and every minimum set of `g`.
#[pyfunction]
#[pyo3(signature = (g, cap = DEFAULT_VERTEX_CAP))]
fn brute_force_mfvs(g: &Digraph, cap: usize) -> PyResult<(usize, Vec<Vec<String>>)> {
    let r = dfvs::brute_force_mfvs(&g.inner, cap).map_err(py_err)?;
    Ok((r.size, r.minimum_sets.iter().map(strings).collect()))
}

/// Kernelizes, solves the kernel exactly and lifts: one minimum FVS.
#[pyfunction]
#[pyo3(signature = (g, rules = "all", cap = DEFAULT_VERTEX_CAP))]
fn solve(g: &Digraph, rules: &str, cap: usize) -> PyResult<Vec<String>> {
    let s = dfvs::solve(&g.inner, kinds(rules)?, Strategy::Priority, cap).map_err(py_err)?;
    Ok(strings(&s.mfvs))
}

#[pyfunction]
fn is_fvs(g: &Digraph, vertices: Vec<String>) -> PyResult<bool> {
    let set = vertices.into_iter().map(VertexId::from).collect();
    dfvs::is_fvs(&g.inner, &set).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, p, loops = false, seed = 0))]
fn random_digraph(n: usize, p: f64, loops: bool, seed: u64) -> PyResult<Digraph> {
    generate::random_digraph(n, p, loops, seed).map(Into::into).map_err(py_err)
}

/// The six-vertex digraph on which the two DOME orders disagree.
#[pyfunction]
fn dome_counterexample() -> Digraph {
    confluence::dome_counterexample().into()
}

#[pymodule]
fn pydfvs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Digraph>()?;
    m.add_function(wrap_pyfunction!(find_redexes, m)?)?;
    m.add_function(wrap_pyfunction!(apply_redex, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(all_normal_forms, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_mfvs, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(is_fvs, m)?)?;
    m.add_function(wrap_pyfunction!(random_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(dome_counterexample, m)?)?;
    Ok(())
}
