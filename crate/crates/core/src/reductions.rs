//! Constructive transformations between the problem families, each paired
//! with a verified witness lifting: a reduction without a back-mapping is
//! considered unimplemented here.
//!
//! The exponential engines (shortest odd cycle and friends) are consulted
//! through oracle parameters, keeping the polynomial pipeline separate
//! from the searches it drives.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{
    is_cycle, ArcId, Digraph, EdgeId, EdgeSet, TerminalSet, UndirectedGraph, VertexId, Weight,
};
use crate::instance::{
    ProblemInstance, ReducedInstance, ReductionKind, Witness, WitnessMap,
};
use crate::tjoin::{is_conservative, min_tjoin};

/// Oracle signature for a shortest-odd-cycle engine: given a conservative
/// graph, return a minimum-weight odd cycle or `None` when bipartite.
pub trait SocOracle: Fn(&UndirectedGraph) -> Result<Option<(EdgeSet, Weight)>> {}
impl<F: Fn(&UndirectedGraph) -> Result<Option<(EdgeSet, Weight)>>> SocOracle for F {}

/// Oracle signature for a prescribed-vertex shortest-odd-cycle engine.
pub trait SocpOracle: Fn(&UndirectedGraph, VertexId) -> Result<Option<(EdgeSet, Weight)>> {}
impl<F: Fn(&UndirectedGraph, VertexId) -> Result<Option<(EdgeSet, Weight)>>> SocpOracle for F {}

fn reject(reason: impl Into<String>) -> Error {
    Error::InvalidWitness(reason.into())
}

/// True iff no two negative edges share a vertex.
pub fn negatives_form_matching(g: &UndirectedGraph) -> bool {
    let mut used = vec![false; g.vertex_count() + 1];
    for e in g.edges() {
        if e.weight < 0 {
            if used[e.u] || used[e.v] {
                return false;
            }
            used[e.u] = true;
            used[e.v] = true;
        }
    }
    true
}

/// The unsplit vertex of a split-construction map (the one whose out- and
/// in-copies coincide), if any.
fn unsplit_vertex(map: &WitnessMap) -> Option<VertexId> {
    map.vertex_out
        .iter()
        .find(|(v, &out)| map.vertex_in.get(v) == Some(&out))
        .map(|(&v, _)| v)
}

/// Builds the vertex-splitting gadget shared by the SOCp and DISP
/// reductions. `keep_whole` leaves one vertex unsplit.
fn split_digraph(
    d: &Digraph,
    keep_whole: Option<VertexId>,
    kind: ReductionKind,
) -> Result<(UndirectedGraph, WitnessMap)> {
    let nh = d.vertex_count();
    let mut map = WitnessMap::empty(kind);
    let mut next = 0usize;
    for v in 1..=nh {
        if Some(v) == keep_whole {
            next += 1;
            map.vertex_out.insert(v, next);
            map.vertex_in.insert(v, next);
        } else {
            next += 1;
            map.vertex_out.insert(v, next);
            next += 1;
            map.vertex_in.insert(v, next);
        }
    }
    let mut edges: Vec<(VertexId, VertexId, Weight)> = Vec::new();
    for arc in d.arcs() {
        edges.push((map.vertex_out[&arc.tail], map.vertex_in[&arc.head], 1));
        map.arc_to_edge.insert(arc.id, edges.len());
    }
    for v in 1..=nh {
        if Some(v) != keep_whole {
            edges.push((map.vertex_out[&v], map.vertex_in[&v], -1));
            map.split_edge.insert(v, edges.len());
        }
    }
    let graph = UndirectedGraph::new(next, &edges)?;
    Ok((graph, map))
}

/// BFP to SOCp: split every vertex except `t` into an out-copy and an
/// in-copy, turn arcs into +1 edges and splits into -1 edges, and ask for
/// an odd cycle of weight at most 1 through `s`'s out-copy. The negative
/// edges form a matching and the graph minus `t` is bipartite.
pub fn reduce_bfp_to_socp(d: &Digraph, s: VertexId, t: VertexId) -> Result<ReducedInstance> {
    for v in [s, t] {
        if !d.contains_vertex(v) {
            return Err(Error::VertexOutOfRange(v));
        }
    }
    if s == t {
        return Err(Error::IdenticalEndpoints);
    }
    let (graph, map) = split_digraph(d, Some(t), ReductionKind::BfpToSocp)?;
    let p = map.vertex_out[&s];
    Ok(ReducedInstance {
        instance: ProblemInstance::Socp { graph, p, k: Some(1) },
        witness_map: map,
    })
}

/// Decodes the arcs represented by the +1 edges of `set`, as
/// `(arc id, tail, head)` triples read back through the vertex maps.
fn decode_arcs(map: &WitnessMap, g: &UndirectedGraph, set: &EdgeSet) -> Result<Vec<(ArcId, VertexId, VertexId)>> {
    let edge_to_arc: BTreeMap<EdgeId, ArcId> =
        map.arc_to_edge.iter().map(|(&a, &e)| (e, a)).collect();
    let out_inv: BTreeMap<VertexId, VertexId> =
        map.vertex_out.iter().map(|(&v, &c)| (c, v)).collect();
    let in_inv: BTreeMap<VertexId, VertexId> =
        map.vertex_in.iter().map(|(&v, &c)| (c, v)).collect();
    let split_ids: std::collections::BTreeSet<EdgeId> =
        map.split_edge.values().copied().collect();
    let mut arcs = Vec::new();
    for eid in set.iter() {
        if let Some(&aid) = edge_to_arc.get(&eid) {
            let e = g.edge(eid)?;
            // construction order: e.u is the out-copy of the tail
            let tail = *out_inv.get(&e.u).ok_or_else(|| reject("unmapped edge endpoint"))?;
            let head = *in_inv.get(&e.v).ok_or_else(|| reject("unmapped edge endpoint"))?;
            arcs.push((aid, tail, head));
        } else if !split_ids.contains(&eid) {
            return Err(reject(format!("edge {eid} is neither an arc image nor a split edge")));
        }
    }
    Ok(arcs)
}

/// Orders decoded arcs into the directed cycle they form and splits it at
/// `s` and `t` into the two openly disjoint paths.
fn split_arc_cycle(
    arcs: &[(ArcId, VertexId, VertexId)],
    s: VertexId,
    t: VertexId,
) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    let mut succ: BTreeMap<VertexId, (ArcId, VertexId)> = BTreeMap::new();
    for &(aid, tail, head) in arcs {
        if succ.insert(tail, (aid, head)).is_some() {
            return Err(reject(format!("vertex {tail} has two outgoing arcs in the witness")));
        }
    }
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    let mut at = s;
    let mut seen_t = false;
    for _ in 0..arcs.len() {
        let &(aid, head) = succ
            .get(&at)
            .ok_or_else(|| reject(format!("directed walk stalls at vertex {at}")))?;
        if seen_t {
            backward.push(aid);
        } else {
            forward.push(aid);
        }
        at = head;
        if at == t {
            seen_t = true;
        }
        if at == s {
            break;
        }
    }
    if at != s || !seen_t {
        return Err(reject("arcs do not close into a cycle through s and t"));
    }
    if forward.len() + backward.len() != arcs.len() {
        return Err(reject("witness contains arcs outside the cycle"));
    }
    Ok((forward, backward))
}

/// Lifts a SOCp witness of the BFP gadget back to the two openly disjoint
/// directed paths: the +1 edges of the cycle are the arcs of a directed
/// cycle through `s` and `t`, split at those two vertices.
pub fn lift_socp_to_bfp(r: &ReducedInstance, c: &EdgeSet) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    if r.witness_map.kind != ReductionKind::BfpToSocp {
        return Err(reject("witness map does not describe a BFP-to-SOCp reduction"));
    }
    let (graph, p, k) = match &r.instance {
        ProblemInstance::Socp { graph, p, k } => (graph, *p, k.unwrap_or(1)),
        _ => return Err(reject("reduced instance is not SOCp")),
    };
    if !is_cycle(graph, c)? {
        return Err(reject("witness is not a cycle"));
    }
    if !c.is_odd() {
        return Err(reject("witness cycle has even parity"));
    }
    let w = c.weight(graph)?;
    if w > k {
        return Err(reject(format!("cycle weight {w} exceeds the bound {k}")));
    }
    if !c.vertices(graph)?.contains(&p) {
        return Err(reject("cycle misses the prescribed vertex"));
    }
    let map = &r.witness_map;
    let s = *map
        .vertex_out
        .iter()
        .find(|(_, &out)| out == p)
        .map(|(v, _)| v)
        .ok_or_else(|| reject("prescribed vertex is not an out-copy"))?;
    let t = unsplit_vertex(map).ok_or_else(|| reject("no unsplit vertex in map"))?;
    let arcs = decode_arcs(map, graph, c)?;
    split_arc_cycle(&arcs, s, t)
}

/// SOCp to SOP via the split-edge relocation: the unique -1 edge `p q` is
/// replaced by an edge `s' q` of the same weight for a new vertex `s'`,
/// and odd cycles through `p` correspond to odd `(p, s')`-paths.
///
/// Sound for instances arising from [`reduce_bfp_to_socp`], where every
/// odd cycle of weight at most 1 through `p` uses the split edge.
pub fn reduce_socp_to_sop_split(
    g: &UndirectedGraph,
    p: VertexId,
    k: Option<Weight>,
) -> Result<ReducedInstance> {
    if !g.contains_vertex(p) {
        return Err(Error::VertexOutOfRange(p));
    }
    let negative_at_p: Vec<EdgeId> = g
        .incident(p)
        .iter()
        .copied()
        .filter(|&e| g.edges()[e - 1].weight < 0)
        .collect();
    let &split = match negative_at_p.as_slice() {
        [only] => only,
        _ => return Err(Error::MissingSplitEdge),
    };
    let q = g.edges()[split - 1].other(p);
    let s_prime = g.vertex_count() + 1;
    let edges: Vec<(VertexId, VertexId, Weight)> = g
        .edges()
        .iter()
        .map(|e| {
            if e.id == split {
                (s_prime, q, e.weight)
            } else {
                (e.u, e.v, e.weight)
            }
        })
        .collect();
    let graph = UndirectedGraph::new(s_prime, &edges)?;
    let mut map = WitnessMap::empty(ReductionKind::SocpToSopSplit);
    for e in g.edges() {
        map.edge_to_edge.insert(e.id, e.id);
    }
    map.split_edge.insert(p, split);
    map.new_vertices.push(s_prime);
    Ok(ReducedInstance {
        instance: ProblemInstance::Sop { graph, s: p, t: s_prime, k },
        witness_map: map,
    })
}

/// SOCp to SOP. Instances carrying a unique -1 split edge at `p` (as the
/// BFP gadget produces) are rewired through [`reduce_socp_to_sop_split`];
/// anything else uses the `s = t` path convention unchanged.
pub fn reduce_socp_to_sop(
    g: &UndirectedGraph,
    p: VertexId,
    k: Option<Weight>,
) -> Result<ReducedInstance> {
    match reduce_socp_to_sop_split(g, p, k) {
        Ok(r) => Ok(r),
        Err(Error::MissingSplitEdge) => {
            if !g.contains_vertex(p) {
                return Err(Error::VertexOutOfRange(p));
            }
            let mut map = WitnessMap::empty(ReductionKind::SocpToSopConvention);
            for e in g.edges() {
                map.edge_to_edge.insert(e.id, e.id);
            }
            Ok(ReducedInstance {
                instance: ProblemInstance::Sop { graph: g.clone(), s: p, t: p, k },
                witness_map: map,
            })
        }
        Err(e) => Err(e),
    }
}

/// Lifts a SOP witness back to the SOCp cycle: for the split variant the
/// relocated edge is reread as the original `p q` edge (ids are shared),
/// for the convention variant the path already is the cycle.
pub fn lift_sop_to_socp(r: &ReducedInstance, path: &EdgeSet) -> Result<EdgeSet> {
    let bound = r.instance.bound();
    let witness = Witness::single(path.iter());
    let weight = crate::instance::verify_witness(&r.instance, &witness)?;
    if let Some(k) = bound {
        if weight > k {
            return Err(reject(format!("path weight {weight} exceeds the bound {k}")));
        }
    }
    match r.witness_map.kind {
        ReductionKind::SocpToSopSplit => {
            let (_, split) = r
                .witness_map
                .split_edge
                .iter()
                .next()
                .map(|(&v, &e)| (v, e))
                .ok_or_else(|| reject("map lacks the relocated split edge"))?;
            if !path.contains(split) {
                return Err(reject("path does not use the relocated split edge"));
            }
            Ok(path.clone())
        }
        ReductionKind::SocpToSopConvention => Ok(path.clone()),
        _ => Err(reject("witness map does not describe a SOCp-to-SOP reduction")),
    }
}

/// BFP to DISP: split every vertex including `t`; the instance asks for
/// two vertex-disjoint `({s1,s2},{t1,t2})`-paths of total weight at most 2.
/// The resulting graph is bipartite and its negative edges form a matching.
pub fn reduce_bfp_to_disp(d: &Digraph, s: VertexId, t: VertexId) -> Result<ReducedInstance> {
    for v in [s, t] {
        if !d.contains_vertex(v) {
            return Err(Error::VertexOutOfRange(v));
        }
    }
    if s == t {
        return Err(Error::IdenticalEndpoints);
    }
    let (graph, map) = split_digraph(d, None, ReductionKind::BfpToDisp)?;
    let (s1, s2) = (map.vertex_out[&s], map.vertex_in[&s]);
    let (t1, t2) = (map.vertex_out[&t], map.vertex_in[&t]);
    Ok(ReducedInstance {
        instance: ProblemInstance::Disp { graph, s1, s2, t1, t2, k: Some(2) },
        witness_map: map,
    })
}

/// Lifts a DISP witness back to BFP: closing the two paths with the split
/// edges of `s` and `t` yields a weight-0 cycle whose +1 edges are the
/// arcs of a directed cycle through `s` and `t`.
pub fn lift_disp_to_bfp(
    r: &ReducedInstance,
    path1: &EdgeSet,
    path2: &EdgeSet,
) -> Result<(Vec<ArcId>, Vec<ArcId>)> {
    if r.witness_map.kind != ReductionKind::BfpToDisp {
        return Err(reject("witness map does not describe a BFP-to-DISP reduction"));
    }
    let graph = match &r.instance {
        ProblemInstance::Disp { graph, .. } => graph,
        _ => return Err(reject("reduced instance is not DISP")),
    };
    let witness = Witness::pair(path1.iter(), path2.iter());
    let total = crate::instance::verify_witness(&r.instance, &witness)?;
    if let Some(k) = r.instance.bound() {
        if total > k {
            return Err(reject(format!("total weight {total} exceeds the bound {k}")));
        }
    }
    let map = &r.witness_map;
    let (s1, t1) = match &r.instance {
        ProblemInstance::Disp { s1, t1, .. } => (*s1, *t1),
        _ => unreachable!(),
    };
    let s = *map
        .vertex_out
        .iter()
        .find(|(_, &out)| out == s1)
        .map(|(v, _)| v)
        .ok_or_else(|| reject("terminal s1 is not an out-copy"))?;
    let t = *map
        .vertex_out
        .iter()
        .find(|(_, &out)| out == t1)
        .map(|(v, _)| v)
        .ok_or_else(|| reject("terminal t1 is not an out-copy"))?;
    let combined = path1.union(path2);
    let arcs = decode_arcs(map, graph, &combined)?;
    split_arc_cycle(&arcs, s, t)
}

/// SP to SOP: a new vertex `t'` is tied to `t` by both a 0-weight edge and
/// a 0-weight two-edge path, so a shortest odd `(s, t')`-path has exactly
/// the weight of a shortest `(s, t)`-path.
pub fn reduce_sp_to_sop(g: &UndirectedGraph, s: VertexId, t: VertexId) -> Result<ReducedInstance> {
    for v in [s, t] {
        if !g.contains_vertex(v) {
            return Err(Error::VertexOutOfRange(v));
        }
    }
    if s == t {
        return Err(Error::IdenticalEndpoints);
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let (t_prime, mid) = (n + 1, n + 2);
    let mut edges: Vec<(VertexId, VertexId, Weight)> =
        g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
    edges.push((t, t_prime, 0));
    edges.push((t, mid, 0));
    edges.push((mid, t_prime, 0));
    let graph = UndirectedGraph::new(n + 2, &edges)?;
    let mut map = WitnessMap::empty(ReductionKind::SpToSop);
    for e in g.edges() {
        map.edge_to_edge.insert(e.id, e.id);
    }
    map.new_vertices.extend([t_prime, mid]);
    map.new_edges.extend([m + 1, m + 2, m + 3]);
    Ok(ReducedInstance {
        instance: ProblemInstance::Sop { graph, s, t: t_prime, k: None },
        witness_map: map,
    })
}

/// Lifts a SOP witness of the SP gadget back to the `(s, t)`-path by
/// stripping the 0-weight tail.
pub fn lift_sop_to_sp(r: &ReducedInstance, path: &EdgeSet) -> Result<EdgeSet> {
    if r.witness_map.kind != ReductionKind::SpToSop {
        return Err(reject("witness map does not describe an SP-to-SOP reduction"));
    }
    let graph = match &r.instance {
        ProblemInstance::Sop { graph, .. } => graph,
        _ => return Err(reject("reduced instance is not SOP")),
    };
    let witness = Witness::single(path.iter());
    crate::instance::verify_witness(&r.instance, &witness)?;
    let new_edges: EdgeSet = r.witness_map.new_edges.iter().copied().collect();
    let tail: Vec<EdgeId> = path.iter().filter(|e| new_edges.contains(*e)).collect();
    let stripped: EdgeSet = path.iter().filter(|e| !new_edges.contains(*e)).collect();
    // the tail is either the single direct edge or the two-edge detour
    let direct = r.witness_map.new_edges[0];
    let detour = &r.witness_map.new_edges[1..];
    let tail_ok = tail == [direct] || tail == detour;
    if !tail_ok {
        return Err(reject("path does not end in the 0-weight tail gadget"));
    }
    let (s, t) = {
        let e = graph.edge(direct)?;
        // construction order: the direct edge runs (t, t')
        let t_src = e.u;
        let s = match &r.instance {
            ProblemInstance::Sop { s, .. } => *s,
            _ => unreachable!(),
        };
        (s, t_src)
    };
    if !crate::graph::is_simple_path(graph, &stripped, s, t)? {
        return Err(reject("stripped witness is not a path to the original endpoint"));
    }
    Ok(stripped)
}

/// Minimum-weight odd T-join: take a minimum T-join `F`; if `|F|` is odd it
/// is already optimal, otherwise symmetric-difference `F` with a minimum
/// odd ∅-join of the flipped weights, obtained from the supplied
/// shortest-odd-cycle oracle.
///
/// Errors with [`Error::InfeasibleOddJoin`] when `|F|` is even and the
/// graph has no odd cycle, and [`Error::Infeasible`] when no T-join exists.
pub fn min_odd_tjoin<O: SocOracle>(
    g: &UndirectedGraph,
    t: &TerminalSet,
    soc_oracle: O,
) -> Result<(EdgeSet, Weight)> {
    let base = min_tjoin(g, t)?;
    if base.join.is_odd() {
        return Ok((base.join, base.weight));
    }
    let flipped = g.weight_flip(&base.join)?;
    debug_assert!(is_conservative(&flipped)?, "flip of a minimum join must be conservative");
    let (cycle, cycle_weight) = match soc_oracle(&flipped)? {
        Some(found) => found,
        None => return Err(Error::InfeasibleOddJoin),
    };
    let join = base.join.sym_diff(&cycle);
    let weight = join.weight(g)?;
    // the correspondence identity: flipped weight of the difference equals
    // the weight gap between the two joins
    debug_assert_eq!(cycle_weight, weight - base.weight);
    debug_assert!(join.is_odd());
    Ok((join, weight))
}

/// Conservative MOTJ with `T = ∅` to non-negative MOTJ: if the negative
/// edge set has odd cardinality a pendant -1 edge at vertex 1 fixes its
/// parity; the output instance carries the absolute weights and the odd
/// vertex set of the (augmented) negative edges, and solutions translate
/// back by symmetric difference with those edges.
pub fn motj_conservative_zero_to_nonneg(g: &UndirectedGraph) -> Result<ReducedInstance> {
    if !is_conservative(g)? {
        return Err(Error::NotConservative);
    }
    let negatives = g.negative_edges();
    let mut map = WitnessMap::empty(ReductionKind::MotjZeroToNonneg);
    for e in g.edges() {
        map.edge_to_edge.insert(e.id, e.id);
    }
    let augmented = if negatives.len() % 2 == 1 {
        let pendant = g.vertex_count() + 1;
        let mut edges: Vec<(VertexId, VertexId, Weight)> =
            g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
        edges.push((1, pendant, -1));
        map.new_vertices.push(pendant);
        map.new_edges.push(g.edge_count() + 1);
        UndirectedGraph::new(pendant, &edges)?
    } else {
        g.clone()
    };
    let neg_aug = augmented.negative_edges();
    map.flipped_edges = neg_aug.iter().collect();
    let terminals: TerminalSet = neg_aug.odd_degree_vertices(&augmented)?.into_iter().collect();
    Ok(ReducedInstance {
        instance: ProblemInstance::Motj {
            graph: augmented.abs_weights(),
            terminals,
            k: None,
        },
        witness_map: map,
    })
}

/// Back-maps a solution of the non-negative MOTJ instance to a minimum odd
/// ∅-join of the original conservative graph.
pub fn lift_motj_nonneg(r: &ReducedInstance, join: &EdgeSet) -> Result<EdgeSet> {
    if r.witness_map.kind != ReductionKind::MotjZeroToNonneg {
        return Err(reject("witness map does not describe the MOTJ parity reduction"));
    }
    let witness = Witness::single(join.iter());
    crate::instance::verify_witness(&r.instance, &witness)?;
    let flipped: EdgeSet = r.witness_map.flipped_edges.iter().copied().collect();
    let lifted = join.sym_diff(&flipped);
    for new_edge in &r.witness_map.new_edges {
        if lifted.contains(*new_edge) {
            return Err(reject("lifted join uses the pendant edge"));
        }
    }
    if !lifted.is_odd() {
        return Err(reject("lifted edge set has even cardinality"));
    }
    Ok(lifted)
}

/// Extracts a single odd cycle of weight `w(J)` from a minimum-weight odd
/// ∅-join: even cycles and all but one odd cycle carry weight 0 at
/// optimum, so dropping them changes nothing.
pub fn odd_join_to_odd_cycle(g: &UndirectedGraph, join: &EdgeSet) -> Result<EdgeSet> {
    if !join.is_odd() {
        return Err(Error::EvenParity);
    }
    let cycles = crate::graph::decompose_even_subgraph(g, join)?;
    let mut best: Option<(EdgeSet, Weight)> = None;
    for cycle in cycles {
        if !cycle.is_odd() {
            continue;
        }
        let w = cycle.weight(g)?;
        if best.as_ref().is_none_or(|&(_, bw)| w > bw) {
            best = Some((cycle, w));
        }
    }
    let (cycle, _) = best.expect("odd total cardinality forces an odd cycle");
    Ok(cycle)
}

/// Shortest odd cycle as the minimum over all prescribed vertices of the
/// SOCp optimum. Errors with [`Error::Infeasible`] on bipartite graphs.
pub fn soc_via_socp<O: SocpOracle>(
    g: &UndirectedGraph,
    socp_oracle: O,
) -> Result<(EdgeSet, Weight)> {
    let mut best: Option<(EdgeSet, Weight)> = None;
    for p in 1..=g.vertex_count() {
        if let Some((cycle, w)) = socp_oracle(g, p)? {
            if best.as_ref().is_none_or(|&(_, bw)| w < bw) {
                best = Some((cycle, w));
            }
        }
    }
    best.ok_or(Error::Infeasible)
}
