use thiserror::Error;

use crate::digraph::{Arc, VertexId};
use crate::reductions::Redex;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("unknown arc {0}")]
    UnknownArc(Arc),
    #[error("cannot contract `{0}`: it carries a loop")]
    LoopOnContractTarget(VertexId),
    #[error("precondition of {0} does not hold")]
    PreconditionViolated(Redex),
    #[error("{0} targets a {1}, expected a {2}")]
    TargetArity(String, &'static str, &'static str),
    #[error("replay diverged at step {step}: {reason}")]
    ReplayDivergence { step: usize, reason: String },
    #[error("vertex set is not a feedback vertex set of the kernel")]
    NotAnFvs,
    #[error("graph has {vertices} vertices, exceeding the cap of {cap}")]
    CapExceeded { vertices: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid redex `{0}`")]
    RedexSyntax(String),
    #[error("unknown reduction kind `{0}`")]
    UnknownKind(String),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
