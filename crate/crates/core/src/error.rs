use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

/// Errors shared by every solver, reduction and oracle in the crate.
///
/// "No solution exists" outcomes (`Infeasible`, `NoPerfectMatching`,
/// `InfeasibleOddJoin`) are ordinary answers to a decision question and are
/// distinguished from contract violations by [`Error::is_no_instance`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: VertexId },
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} has odd degree in a subgraph required to be even")]
    OddDegreeVertex(VertexId),
    #[error("terminal set has odd size {0}")]
    OddTerminalCount(usize),
    #[error("edge {0} has negative weight where non-negative weights are required")]
    NegativeWeight(EdgeId),
    #[error("endpoints must be distinct")]
    IdenticalEndpoints,
    #[error("no perfect matching exists")]
    NoPerfectMatching,
    #[error("no solution exists")]
    Infeasible,
    #[error("no odd T-join exists")]
    InfeasibleOddJoin,
    #[error("edge weights are not conservative")]
    NotConservative,
    #[error("edge set is not a T-join for the given terminals")]
    NotATJoin,
    #[error("edge set has even cardinality where odd is required")]
    EvenParity,
    #[error("no -1 split edge incident to the prescribed vertex")]
    MissingSplitEdge,
    #[error("witness rejected: {0}")]
    InvalidWitness(String),
    #[error("search budget of {0} steps exceeded")]
    BudgetExceeded(u64),
    #[error("instance too large for exhaustive search ({0} edges)")]
    TooLarge(usize),
}

impl Error {
    /// True for outcomes that mean "the answer is no / nothing exists",
    /// as opposed to a malformed input or an exhausted budget.
    pub fn is_no_instance(&self) -> bool {
        matches!(
            self,
            Error::Infeasible | Error::NoPerfectMatching | Error::InfeasibleOddJoin
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
