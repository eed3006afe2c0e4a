//! Shortest odd (or even) `(s, t)`-path under non-negative weights, by
//! reduction to minimum-weight perfect matching.
//!
//! The auxiliary graph H carries two copies of every vertex. Every edge
//! `uv` appears once inside each copy; a zero-weight rung joins the two
//! copies of every vertex other than `s` and `t`. Deleting one copy of `s`
//! and the copy of `t` selected by the queried parity leaves perfect
//! matchings of H in correspondence with parity-constrained `(s, t)`-paths
//! (plus weight-0 cycles, which are discarded). The construction is
//! certified by the brute-force path oracle, not by citation.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeSet, UndirectedGraph, VertexId, Weight};
use crate::matching::{min_weight_perfect_matching, MatchingProblem};

/// Requested parity of the edge count of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// A parity-constrained path query between two distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityPathQuery {
    pub s: VertexId,
    pub t: VertexId,
    pub parity: Parity,
}

/// Which original edge (or rung) an H-edge stands for.
#[derive(Debug, Clone, Copy)]
enum HEdge {
    CopyA(EdgeId),
    CopyB(EdgeId),
    Rung(VertexId),
}

/// Minimum-weight simple `(s, t)`-path of the requested parity under
/// non-negative weights.
///
/// Errors with [`Error::Infeasible`] when no path of that parity exists.
pub fn shortest_parity_path_nonneg(
    g: &UndirectedGraph,
    q: &ParityPathQuery,
) -> Result<(EdgeSet, Weight)> {
    if let Some(e) = g.edges().iter().find(|e| e.weight < 0) {
        return Err(Error::NegativeWeight(e.id));
    }
    if !g.contains_vertex(q.s) {
        return Err(Error::VertexOutOfRange(q.s));
    }
    if !g.contains_vertex(q.t) {
        return Err(Error::VertexOutOfRange(q.t));
    }
    if q.s == q.t {
        return Err(Error::IdenticalEndpoints);
    }

    let n = g.vertex_count();
    // copy A carries the 1st, 3rd, ... path edges counted from s; copy B
    // the 2nd, 4th, ... . An odd path therefore covers t inside copy A and
    // an even path inside copy B: delete s's B-copy always, and the t-copy
    // the queried parity cannot reach.
    let deleted_t_copy_is_a = matches!(q.parity, Parity::Even);

    // compact H vertex numbering: a_id[v], b_id[v]; 0 = deleted
    let mut a_id = vec![0usize; n + 1];
    let mut b_id = vec![0usize; n + 1];
    let mut next = 0usize;
    for v in 1..=n {
        let delete_a = v == q.t && deleted_t_copy_is_a;
        let delete_b = v == q.s || (v == q.t && !deleted_t_copy_is_a);
        if !delete_a {
            next += 1;
            a_id[v] = next;
        }
        if !delete_b {
            next += 1;
            b_id[v] = next;
        }
    }

    let mut h_edges: Vec<(VertexId, VertexId, Weight)> = Vec::new();
    let mut provenance: Vec<HEdge> = Vec::new();
    for e in g.edges() {
        if a_id[e.u] != 0 && a_id[e.v] != 0 {
            h_edges.push((a_id[e.u], a_id[e.v], e.weight));
            provenance.push(HEdge::CopyA(e.id));
        }
        if b_id[e.u] != 0 && b_id[e.v] != 0 {
            h_edges.push((b_id[e.u], b_id[e.v], e.weight));
            provenance.push(HEdge::CopyB(e.id));
        }
    }
    for v in 1..=n {
        if v != q.s && v != q.t {
            h_edges.push((a_id[v], b_id[v], 0));
            provenance.push(HEdge::Rung(v));
        }
    }

    let problem = MatchingProblem::new(next, &h_edges)?;
    let matching = match min_weight_perfect_matching(&problem) {
        Ok(m) => m,
        Err(Error::NoPerfectMatching) => return Err(Error::Infeasible),
        Err(e) => return Err(e),
    };

    // decode: walk from s's A-copy; the matched partner of each reached
    // copy names the next original edge; remaining matched copy-pairs are
    // weight-0 cycles and are dropped
    let mut partner_edge: Vec<Option<usize>> = vec![None; next + 1];
    for &idx in &matching.edge_indices {
        let (hu, hv, _) = h_edges[idx];
        partner_edge[hu] = Some(idx);
        partner_edge[hv] = Some(idx);
    }

    let mut path = EdgeSet::new();
    let mut weight = 0;
    let mut at = q.s;
    let mut in_copy_a = true;
    loop {
        let h_vertex = if in_copy_a { a_id[at] } else { b_id[at] };
        debug_assert!(h_vertex != 0);
        let idx = partner_edge[h_vertex].expect("perfect matching covers every copy");
        let (orig, w) = match provenance[idx] {
            HEdge::CopyA(e) => (e, g.edges()[e - 1].weight),
            HEdge::CopyB(e) => (e, g.edges()[e - 1].weight),
            HEdge::Rung(v) => {
                unreachable!("path trace reached rung at vertex {v}");
            }
        };
        path.insert(orig);
        weight += w;
        at = g.edges()[orig - 1].other(at);
        if at == q.t {
            break;
        }
        // the adjacent path edge covers the opposite copy of `at`
        in_copy_a = !in_copy_a;
    }

    debug_assert!(crate::graph::is_simple_path(g, &path, q.s, q.t)?);
    let want_odd = matches!(q.parity, Parity::Odd);
    debug_assert_eq!(path.is_odd(), want_odd);
    debug_assert_eq!(weight, path.weight(g)?);
    Ok((path, weight))
}
