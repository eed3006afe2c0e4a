//! Problem instances, witnesses, and the bookkeeping a reduction emits so
//! that target solutions translate back to source solutions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{
    is_cycle, is_tjoin, ArcId, Digraph, EdgeId, EdgeSet, TerminalSet, UndirectedGraph, VertexId,
    Weight,
};

/// The problem families the toolkit speaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// Shortest path, conservative weights.
    Sp,
    /// Shortest odd path.
    Sop,
    /// Shortest odd cycle.
    Soc,
    /// Shortest odd cycle through a prescribed vertex.
    Socp,
    /// Two vertex-disjoint terminal paths of minimum total weight.
    Disp,
    /// Minimum-weight odd T-join.
    Motj,
    /// Back-and-forth openly disjoint directed paths.
    Bfp,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Sp => "sp",
            ProblemKind::Sop => "sop",
            ProblemKind::Soc => "soc",
            ProblemKind::Socp => "socp",
            ProblemKind::Disp => "disp",
            ProblemKind::Motj => "motj",
            ProblemKind::Bfp => "bfp",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "sp" => Ok(ProblemKind::Sp),
            "sop" => Ok(ProblemKind::Sop),
            "soc" => Ok(ProblemKind::Soc),
            "socp" => Ok(ProblemKind::Socp),
            "disp" => Ok(ProblemKind::Disp),
            "motj" => Ok(ProblemKind::Motj),
            "bfp" => Ok(ProblemKind::Bfp),
            other => Err(format!("unknown problem kind `{other}`")),
        }
    }
}

/// A fully specified instance of one of the seven problems. The optional
/// bound `k` turns an optimization query into a decision query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemInstance {
    Sp { graph: UndirectedGraph, s: VertexId, t: VertexId },
    /// `s == t` is permitted: a cycle through `s` counts as an
    /// `(s, t)`-path with `s = t`.
    Sop { graph: UndirectedGraph, s: VertexId, t: VertexId, k: Option<Weight> },
    Soc { graph: UndirectedGraph, k: Option<Weight> },
    Socp { graph: UndirectedGraph, p: VertexId, k: Option<Weight> },
    Disp {
        graph: UndirectedGraph,
        s1: VertexId,
        s2: VertexId,
        t1: VertexId,
        t2: VertexId,
        k: Option<Weight>,
    },
    Motj { graph: UndirectedGraph, terminals: TerminalSet, k: Option<Weight> },
    Bfp { digraph: Digraph, s: VertexId, t: VertexId },
}

impl ProblemInstance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::Sp { .. } => ProblemKind::Sp,
            ProblemInstance::Sop { .. } => ProblemKind::Sop,
            ProblemInstance::Soc { .. } => ProblemKind::Soc,
            ProblemInstance::Socp { .. } => ProblemKind::Socp,
            ProblemInstance::Disp { .. } => ProblemKind::Disp,
            ProblemInstance::Motj { .. } => ProblemKind::Motj,
            ProblemInstance::Bfp { .. } => ProblemKind::Bfp,
        }
    }

    pub fn bound(&self) -> Option<Weight> {
        match self {
            ProblemInstance::Sop { k, .. }
            | ProblemInstance::Soc { k, .. }
            | ProblemInstance::Socp { k, .. }
            | ProblemInstance::Disp { k, .. }
            | ProblemInstance::Motj { k, .. } => *k,
            _ => None,
        }
    }

    pub fn undirected_graph(&self) -> Option<&UndirectedGraph> {
        match self {
            ProblemInstance::Sp { graph, .. }
            | ProblemInstance::Sop { graph, .. }
            | ProblemInstance::Soc { graph, .. }
            | ProblemInstance::Socp { graph, .. }
            | ProblemInstance::Disp { graph, .. }
            | ProblemInstance::Motj { graph, .. } => Some(graph),
            ProblemInstance::Bfp { .. } => None,
        }
    }

    /// Terminal arity and range checks.
    pub fn validate(&self) -> Result<()> {
        fn check(g: &UndirectedGraph, vs: &[VertexId]) -> Result<()> {
            for &v in vs {
                if !g.contains_vertex(v) {
                    return Err(Error::VertexOutOfRange(v));
                }
            }
            Ok(())
        }
        match self {
            ProblemInstance::Sp { graph, s, t } => {
                check(graph, &[*s, *t])?;
                if s == t {
                    return Err(Error::IdenticalEndpoints);
                }
            }
            ProblemInstance::Sop { graph, s, t, .. } => check(graph, &[*s, *t])?,
            ProblemInstance::Soc { .. } => {}
            ProblemInstance::Socp { graph, p, .. } => check(graph, &[*p])?,
            ProblemInstance::Disp { graph, s1, s2, t1, t2, .. } => {
                check(graph, &[*s1, *s2, *t1, *t2])?;
                let set: std::collections::BTreeSet<_> = [s1, s2, t1, t2].into_iter().collect();
                if set.len() != 4 {
                    return Err(Error::IdenticalEndpoints);
                }
            }
            ProblemInstance::Motj { graph, terminals, .. } => terminals.check_in_range(graph)?,
            ProblemInstance::Bfp { digraph, s, t } => {
                for v in [*s, *t] {
                    if !digraph.contains_vertex(v) {
                        return Err(Error::VertexOutOfRange(v));
                    }
                }
                if s == t {
                    return Err(Error::IdenticalEndpoints);
                }
            }
        }
        Ok(())
    }
}

/// A proposed solution: one list of edge (or arc) ids, plus a second list
/// for the two-path problems.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Witness {
    pub first: Vec<usize>,
    pub second: Option<Vec<usize>>,
}

impl Witness {
    pub fn single(ids: impl IntoIterator<Item = usize>) -> Self {
        Witness { first: ids.into_iter().collect(), second: None }
    }

    pub fn pair(
        first: impl IntoIterator<Item = usize>,
        second: impl IntoIterator<Item = usize>,
    ) -> Self {
        Witness { first: first.into_iter().collect(), second: Some(second.into_iter().collect()) }
    }
}

fn reject(reason: impl Into<String>) -> Error {
    Error::InvalidWitness(reason.into())
}

fn edge_set(g: &UndirectedGraph, ids: &[usize]) -> Result<EdgeSet> {
    let mut set = EdgeSet::new();
    for &id in ids {
        g.edge(id)?;
        if !set.insert(id) {
            return Err(reject(format!("duplicate edge id {id}")));
        }
    }
    Ok(set)
}

/// Endpoints of an edge set that forms a simple path, or `None` if it is
/// not a path.
fn path_endpoints(g: &UndirectedGraph, set: &EdgeSet) -> Result<Option<(VertexId, VertexId)>> {
    if set.is_empty() {
        return Ok(None);
    }
    let odd = set.odd_degree_vertices(g)?;
    if odd.len() != 2 {
        return Ok(None);
    }
    let mut it = odd.iter();
    let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
    if crate::graph::is_simple_path(g, set, a, b)? {
        Ok(Some((a, b)))
    } else {
        Ok(None)
    }
}

/// Validates a directed arc sequence as a simple path `from -> to`;
/// returns the set of visited vertices.
fn check_arc_path(
    d: &Digraph,
    arcs: &[ArcId],
    from: VertexId,
    to: VertexId,
) -> Result<Vec<VertexId>> {
    if arcs.is_empty() {
        return Err(reject("empty arc sequence"));
    }
    let mut visited = vec![from];
    let mut at = from;
    for &aid in arcs {
        let arc = d.arc(aid)?;
        if arc.tail != at {
            return Err(reject(format!("arc {aid} does not continue the path at {at}")));
        }
        at = arc.head;
        if visited.contains(&at) && !(at == to && aid == *arcs.last().unwrap()) {
            return Err(reject(format!("path revisits vertex {at}")));
        }
        visited.push(at);
    }
    if at != to {
        return Err(reject(format!("path ends at {at}, expected {to}")));
    }
    Ok(visited)
}

/// Checks a witness against the instance's defining predicate and returns
/// its measured weight (0 for the unweighted BFP).
pub fn verify_witness(instance: &ProblemInstance, witness: &Witness) -> Result<Weight> {
    match instance {
        ProblemInstance::Sp { graph, s, t } => {
            let set = edge_set(graph, &witness.first)?;
            if !crate::graph::is_simple_path(graph, &set, *s, *t)? {
                return Err(reject("edge set is not a simple path between the endpoints"));
            }
            set.weight(graph)
        }
        ProblemInstance::Sop { graph, s, t, .. } => {
            let set = edge_set(graph, &witness.first)?;
            if !set.is_odd() {
                return Err(reject("path has even parity"));
            }
            if s == t {
                if !is_cycle(graph, &set)? || !set.vertices(graph)?.contains(s) {
                    return Err(reject("with s = t the witness must be a cycle through s"));
                }
            } else if !crate::graph::is_simple_path(graph, &set, *s, *t)? {
                return Err(reject("edge set is not a simple path between the endpoints"));
            }
            set.weight(graph)
        }
        ProblemInstance::Soc { graph, .. } => {
            let set = edge_set(graph, &witness.first)?;
            if !set.is_odd() {
                return Err(reject("cycle has even parity"));
            }
            if !is_cycle(graph, &set)? {
                return Err(reject("edge set is not a cycle"));
            }
            set.weight(graph)
        }
        ProblemInstance::Socp { graph, p, .. } => {
            let set = edge_set(graph, &witness.first)?;
            if !set.is_odd() {
                return Err(reject("cycle has even parity"));
            }
            if !is_cycle(graph, &set)? {
                return Err(reject("edge set is not a cycle"));
            }
            if !set.vertices(graph)?.contains(p) {
                return Err(reject("cycle misses the prescribed vertex"));
            }
            set.weight(graph)
        }
        ProblemInstance::Disp { graph, s1, s2, t1, t2, .. } => {
            let second = witness.second.as_ref().ok_or_else(|| reject("missing second path"))?;
            let p1 = edge_set(graph, &witness.first)?;
            let p2 = edge_set(graph, second)?;
            let e1 = path_endpoints(graph, &p1)?.ok_or_else(|| reject("first list is not a path"))?;
            let e2 =
                path_endpoints(graph, &p2)?.ok_or_else(|| reject("second list is not a path"))?;
            let sources = [*s1, *s2];
            let sinks = [*t1, *t2];
            let classify = |(a, b): (VertexId, VertexId)| -> Option<(VertexId, VertexId)> {
                if sources.contains(&a) && sinks.contains(&b) {
                    Some((a, b))
                } else if sources.contains(&b) && sinks.contains(&a) {
                    Some((b, a))
                } else {
                    None
                }
            };
            let c1 = classify(e1).ok_or_else(|| reject("first path misses the terminal sets"))?;
            let c2 = classify(e2).ok_or_else(|| reject("second path misses the terminal sets"))?;
            if c1.0 == c2.0 || c1.1 == c2.1 {
                return Err(reject("paths reuse a terminal"));
            }
            let v1 = p1.vertices(graph)?;
            let v2 = p2.vertices(graph)?;
            if v1.intersection(&v2).next().is_some() {
                return Err(reject("paths share a vertex"));
            }
            Ok(p1.weight(graph)? + p2.weight(graph)?)
        }
        ProblemInstance::Motj { graph, terminals, .. } => {
            let set = edge_set(graph, &witness.first)?;
            if !set.is_odd() {
                return Err(reject("T-join has even cardinality"));
            }
            if !is_tjoin(graph, terminals, &set)? {
                return Err(reject("edge set is not a T-join"));
            }
            set.weight(graph)
        }
        ProblemInstance::Bfp { digraph, s, t } => {
            let second =
                witness.second.as_ref().ok_or_else(|| reject("missing return path"))?;
            let fwd = check_arc_path(digraph, &witness.first, *s, *t)?;
            let back = check_arc_path(digraph, second, *t, *s)?;
            let interior_fwd: std::collections::BTreeSet<_> =
                fwd.iter().filter(|&&v| v != *s && v != *t).collect();
            if back.iter().any(|v| interior_fwd.contains(v)) {
                return Err(reject("paths are not openly disjoint"));
            }
            Ok(0)
        }
    }
}

/// Which reduction produced a [`ReducedInstance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    BfpToSocp,
    /// SOCp to SOP via the split-edge relocation at the prescribed vertex.
    SocpToSopSplit,
    /// SOCp to SOP via the `s = t` path convention.
    SocpToSopConvention,
    BfpToDisp,
    SpToSop,
    MotjZeroToNonneg,
}

impl ReductionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::BfpToSocp => "bfp-to-socp",
            ReductionKind::SocpToSopSplit => "socp-to-sop-split",
            ReductionKind::SocpToSopConvention => "socp-to-sop-convention",
            ReductionKind::BfpToDisp => "bfp-to-disp",
            ReductionKind::SpToSop => "sp-to-sop",
            ReductionKind::MotjZeroToNonneg => "motj-zero-to-nonneg",
        }
    }
}

impl std::str::FromStr for ReductionKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bfp-to-socp" => Ok(ReductionKind::BfpToSocp),
            "socp-to-sop-split" => Ok(ReductionKind::SocpToSopSplit),
            "socp-to-sop-convention" => Ok(ReductionKind::SocpToSopConvention),
            "bfp-to-disp" => Ok(ReductionKind::BfpToDisp),
            "sp-to-sop" => Ok(ReductionKind::SpToSop),
            "motj-zero-to-nonneg" => Ok(ReductionKind::MotjZeroToNonneg),
            other => Err(format!("unknown reduction kind `{other}`")),
        }
    }
}

/// Source-to-target correspondence emitted by a reduction. Only the maps a
/// given reduction needs are populated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessMap {
    pub kind: ReductionKind,
    /// Source vertex to its out-copy in the target graph.
    pub vertex_out: BTreeMap<VertexId, VertexId>,
    /// Source vertex to its in-copy in the target graph.
    pub vertex_in: BTreeMap<VertexId, VertexId>,
    /// Source arc to the target +1 edge standing for it.
    pub arc_to_edge: BTreeMap<ArcId, EdgeId>,
    /// Source vertex to its -1 split edge in the target graph.
    pub split_edge: BTreeMap<VertexId, EdgeId>,
    /// Source edge to the identical target edge.
    pub edge_to_edge: BTreeMap<EdgeId, EdgeId>,
    /// Target-only vertices introduced by the reduction.
    pub new_vertices: Vec<VertexId>,
    /// Target-only edges introduced by the reduction.
    pub new_edges: Vec<EdgeId>,
    /// Edges whose weight sign the reduction flipped (the negative edge
    /// set of the source, for the Δ back-map).
    pub flipped_edges: Vec<EdgeId>,
}

impl WitnessMap {
    pub fn empty(kind: ReductionKind) -> Self {
        WitnessMap {
            kind,
            vertex_out: BTreeMap::new(),
            vertex_in: BTreeMap::new(),
            arc_to_edge: BTreeMap::new(),
            split_edge: BTreeMap::new(),
            edge_to_edge: BTreeMap::new(),
            new_vertices: Vec::new(),
            new_edges: Vec::new(),
            flipped_edges: Vec::new(),
        }
    }
}

/// A reduction's output: the target instance plus the data needed to lift
/// target witnesses back to the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub instance: ProblemInstance,
    pub witness_map: WitnessMap,
}
