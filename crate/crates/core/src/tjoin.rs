//! Minimum-weight T-joins for arbitrary integer weights, conservativeness
//! testing, and shortest paths in conservative graphs.
//!
//! The non-negative case runs single-source shortest paths among the
//! terminals and a minimum-weight perfect matching over the resulting
//! distances. General weights reduce to it by flipping the negative edge
//! set; a graph is conservative exactly when its negative edges already
//! form a minimum T-join of the absolute weights.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{is_tjoin, EdgeId, EdgeSet, TerminalSet, UndirectedGraph, VertexId, Weight};
use crate::matching::{min_weight_perfect_matching, MatchingProblem};

/// An optimum T-join together with its total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TJoinResult {
    pub join: EdgeSet,
    pub weight: Weight,
}

/// Shortest-path tree with deterministic parent edges: among equal-length
/// routes the parent with the lowest edge id wins.
struct SpTree {
    source: VertexId,
    dist: Vec<Option<Weight>>,
    parent: Vec<Option<EdgeId>>,
}

impl SpTree {
    fn path_to(&self, g: &UndirectedGraph, target: VertexId) -> EdgeSet {
        let mut path = EdgeSet::new();
        let mut v = target;
        while v != self.source {
            let eid = self.parent[v].expect("target reachable in tree");
            path.insert(eid);
            v = g.edges()[eid - 1].other(v);
        }
        path
    }
}

fn dijkstra(g: &UndirectedGraph, source: VertexId) -> SpTree {
    let n = g.vertex_count();
    let mut dist: Vec<Option<Weight>> = vec![None; n + 1];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n + 1];
    let mut settled = vec![false; n + 1];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v] {
            continue;
        }
        settled[v] = true;
        for &eid in g.incident(v) {
            let e = &g.edges()[eid - 1];
            let w = e.other(v);
            if settled[w] {
                continue;
            }
            let nd = d + e.weight;
            match dist[w] {
                Some(old) if nd > old => {}
                Some(old) if nd == old => {
                    // equal distance: lowest edge id becomes the parent
                    if parent[w].is_none_or(|p| eid < p) {
                        parent[w] = Some(eid);
                    }
                }
                _ => {
                    dist[w] = Some(nd);
                    parent[w] = Some(eid);
                    heap.push(Reverse((nd, w)));
                }
            }
        }
    }
    SpTree { source, dist, parent }
}

fn check_even(t: &TerminalSet) -> Result<()> {
    if t.len() % 2 == 1 {
        return Err(Error::OddTerminalCount(t.len()));
    }
    Ok(())
}

/// Minimum-weight T-join for non-negative weights.
///
/// Errors with [`Error::Infeasible`] when some connected component contains
/// an odd number of terminals, and [`Error::OddTerminalCount`] for odd `|T|`.
pub fn min_tjoin_nonneg(g: &UndirectedGraph, t: &TerminalSet) -> Result<TJoinResult> {
    if let Some(e) = g.edges().iter().find(|e| e.weight < 0) {
        return Err(Error::NegativeWeight(e.id));
    }
    t.check_in_range(g)?;
    check_even(t)?;
    if t.is_empty() {
        return Ok(TJoinResult { join: EdgeSet::new(), weight: 0 });
    }

    // parity feasibility per connected component
    let labels = g.component_labels();
    let mut parity: std::collections::BTreeMap<VertexId, usize> = Default::default();
    for v in t.iter() {
        *parity.entry(labels[v]).or_insert(0) += 1;
    }
    if parity.values().any(|&c| c % 2 == 1) {
        return Err(Error::Infeasible);
    }

    let terminals: Vec<VertexId> = t.iter().collect();
    let trees: Vec<SpTree> = terminals.iter().map(|&s| dijkstra(g, s)).collect();

    // complete distance graph over the terminals; cross-component pairs
    // have no edge, which the parity check already made harmless
    let mut edges = Vec::new();
    for i in 0..terminals.len() {
        for j in (i + 1)..terminals.len() {
            if let Some(d) = trees[i].dist[terminals[j]] {
                edges.push((i + 1, j + 1, d));
            }
        }
    }
    let problem = MatchingProblem::new(terminals.len(), &edges)?;
    let matching = min_weight_perfect_matching(&problem)?;

    let mut join = EdgeSet::new();
    for &(pi, pj) in &matching.pairs {
        let path = trees[pi - 1].path_to(g, terminals[pj - 1]);
        join = join.sym_diff(&path);
    }
    let weight = join.weight(g)?;
    debug_assert_eq!(weight, matching.weight, "join weight must equal matching optimum");
    Ok(TJoinResult { join, weight })
}

/// Minimum-weight T-join for arbitrary integer weights: flip the negative
/// edge set `N`, solve the non-negative instance on `T Δ odd(N)`, and take
/// the symmetric difference with `N`.
pub fn min_tjoin(g: &UndirectedGraph, t: &TerminalSet) -> Result<TJoinResult> {
    t.check_in_range(g)?;
    check_even(t)?;
    let negatives = g.negative_edges();
    let odd = negatives.odd_degree_vertices(g)?;
    let shifted = t.sym_diff_vertices(&odd);
    let nonneg = min_tjoin_nonneg(&g.abs_weights(), &shifted)?;
    let join = nonneg.join.sym_diff(&negatives);
    let weight = join.weight(g)?;
    debug_assert!(is_tjoin(g, t, &join)?);
    Ok(TJoinResult { join, weight })
}

/// True iff no cycle of `g` has negative total weight: the negative edge
/// set must be a minimum T-join of the absolute weights for its own odd
/// vertex set.
pub fn is_conservative(g: &UndirectedGraph) -> Result<bool> {
    let negatives = g.negative_edges();
    let odd: TerminalSet = negatives.odd_degree_vertices(g)?.into_iter().collect();
    let abs = g.abs_weights();
    let optimum = min_tjoin_nonneg(&abs, &odd)?;
    let neg_abs_weight = negatives.weight(&abs)?;
    debug_assert!(optimum.weight <= neg_abs_weight);
    Ok(optimum.weight == neg_abs_weight)
}

/// Peels an inclusionwise smaller T-join out of `j` by repeatedly deleting
/// whole cycles of non-positive weight. For a minimum join under
/// conservative weights every deleted cycle has weight exactly 0, and with
/// `|T| = 2` the result is the single `(s, t)`-path inside `j`.
pub fn peel_minimal_join(g: &UndirectedGraph, t: &TerminalSet, j: &EdgeSet) -> Result<EdgeSet> {
    if !is_tjoin(g, t, j)? {
        return Err(Error::NotATJoin);
    }
    let mut result = j.clone();
    let mut skipped = EdgeSet::new(); // positive cycles stay in place
    loop {
        let searchable: EdgeSet = result.iter().filter(|&e| !skipped.contains(e)).collect();
        match find_cycle_in(g, &searchable) {
            None => break,
            Some(cycle) => {
                if cycle.weight(g)? <= 0 {
                    result = result.sym_diff(&cycle);
                } else {
                    skipped = skipped.union(&cycle);
                }
            }
        }
    }
    Ok(result)
}

/// First cycle inside the edge set, found by DFS exploring lowest edge ids
/// first; `None` when the set is a forest.
fn find_cycle_in(g: &UndirectedGraph, set: &EdgeSet) -> Option<EdgeSet> {
    let n = g.vertex_count();
    let mut visited = vec![false; n + 1];
    let mut consumed = vec![false; g.edge_count() + 1];
    let mut pos = vec![usize::MAX; n + 1];
    for start in 1..=n {
        if visited[start] || !g.incident(start).iter().any(|&e| set.contains(e)) {
            continue;
        }
        // stack of (vertex, cursor, arrival edge)
        let mut stack: Vec<(VertexId, usize, EdgeId)> = vec![(start, 0, 0)];
        visited[start] = true;
        pos[start] = 0;
        while let Some(&mut (v, ref mut cur, _)) = stack.last_mut() {
            if *cur >= g.incident(v).len() {
                pos[v] = usize::MAX;
                stack.pop();
                continue;
            }
            let eid = g.incident(v)[*cur];
            *cur += 1;
            if !set.contains(eid) || consumed[eid] {
                continue;
            }
            consumed[eid] = true;
            let w = g.edges()[eid - 1].other(v);
            if pos[w] != usize::MAX {
                // back edge: cycle runs from w's position up to v, plus eid
                let mut cycle = EdgeSet::new();
                cycle.insert(eid);
                for &(_, _, via) in &stack[pos[w] + 1..] {
                    cycle.insert(via);
                }
                return Some(cycle);
            }
            if !visited[w] {
                visited[w] = true;
                pos[w] = stack.len();
                stack.push((w, 0, eid));
            }
        }
    }
    None
}

/// Minimum-weight `(s, t)`-path in a conservative graph: take a minimum
/// `{s, t}`-join and peel it down to the path.
///
/// Errors with [`Error::NotConservative`] when the precondition check
/// fails and [`Error::Infeasible`] when `s` and `t` lie in different
/// components.
pub fn shortest_path_conservative(
    g: &UndirectedGraph,
    s: VertexId,
    t: VertexId,
) -> Result<(EdgeSet, Weight)> {
    if !g.contains_vertex(s) {
        return Err(Error::VertexOutOfRange(s));
    }
    if !g.contains_vertex(t) {
        return Err(Error::VertexOutOfRange(t));
    }
    if s == t {
        return Err(Error::IdenticalEndpoints);
    }
    if !is_conservative(g)? {
        return Err(Error::NotConservative);
    }
    let terminals = TerminalSet::pair(s, t);
    let optimum = min_tjoin(g, &terminals)?;
    let path = peel_minimal_join(g, &terminals, &optimum.join)?;
    let weight = path.weight(g)?;
    debug_assert_eq!(weight, optimum.weight, "peeled cycles must carry weight 0");
    debug_assert!(crate::graph::is_simple_path(g, &path, s, t)?);
    Ok((path, weight))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, Weight)]) -> UndirectedGraph {
        UndirectedGraph::new(n, edges).unwrap()
    }

    /// Exhaustive minimum T-join via subset enumeration; the independent
    /// oracle for this module.
    pub(crate) fn brute_min_tjoin(
        g: &UndirectedGraph,
        t: &TerminalSet,
    ) -> Option<(EdgeSet, Weight)> {
        let m = g.edge_count();
        assert!(m <= 20);
        let masks: Vec<u64> = g
            .edges()
            .iter()
            .map(|e| (1u64 << (e.u - 1)) | (1u64 << (e.v - 1)))
            .collect();
        let t_mask: u64 = t.iter().fold(0, |acc, v| acc | (1u64 << (v - 1)));
        let mut best: Option<(u32, Weight)> = None;
        for subset in 0u32..(1 << m) {
            let mut sig = 0u64;
            let mut w = 0;
            for (i, mask) in masks.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    sig ^= mask;
                    w += g.edges()[i].weight;
                }
            }
            if sig == t_mask && best.is_none_or(|(_, bw)| w < bw) {
                best = Some((subset, w));
            }
        }
        best.map(|(subset, w)| {
            ((0..m).filter(|i| subset >> i & 1 == 1).map(|i| i + 1).collect(), w)
        })
    }

    #[test]
    fn nonneg_path_graph() {
        let g = graph(3, &[(1, 2, 1), (2, 3, 1)]);
        let t: TerminalSet = [1, 3].into_iter().collect();
        let r = min_tjoin_nonneg(&g, &t).unwrap();
        assert_eq!(r.weight, 2);
        assert_eq!(r.join.iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn nonneg_empty_terminals() {
        let g = graph(3, &[(1, 2, 1), (2, 3, 1)]);
        let r = min_tjoin_nonneg(&g, &TerminalSet::new()).unwrap();
        assert_eq!(r.weight, 0);
        assert!(r.join.is_empty());
    }

    #[test]
    fn nonneg_star() {
        let g = graph(4, &[(4, 1, 1), (4, 2, 1), (4, 3, 1)]);
        let t: TerminalSet = [1, 2].into_iter().collect();
        let r = min_tjoin_nonneg(&g, &t).unwrap();
        assert_eq!(r.weight, 2);
        assert_eq!(r.join.iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn infeasible_and_odd_terminals() {
        let g = graph(4, &[(1, 2, 1), (3, 4, 1)]);
        let t: TerminalSet = [1, 3].into_iter().collect();
        assert_eq!(min_tjoin_nonneg(&g, &t), Err(Error::Infeasible));
        let odd: TerminalSet = [1].into_iter().collect();
        assert_eq!(min_tjoin_nonneg(&g, &odd), Err(Error::OddTerminalCount(1)));
    }

    #[test]
    fn general_single_negative_edge() {
        let g = graph(2, &[(1, 2, -2)]);
        let t: TerminalSet = [1, 2].into_iter().collect();
        let r = min_tjoin(&g, &t).unwrap();
        assert_eq!(r.weight, -2);
        assert_eq!(r.join.iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn general_triangle_examples() {
        // weights (12, 23, 13) = (-1, -1, 1), T = {} -> whole triangle
        let g = graph(3, &[(1, 2, -1), (2, 3, -1), (1, 3, 1)]);
        let r = min_tjoin(&g, &TerminalSet::new()).unwrap();
        assert_eq!(r.weight, -1);
        assert_eq!(r.join.len(), 3);

        // weights (1, 1, -1), T = {1,3} -> the negative edge alone
        let g = graph(3, &[(1, 2, 1), (2, 3, 1), (1, 3, -1)]);
        let t: TerminalSet = [1, 3].into_iter().collect();
        let r = min_tjoin(&g, &t).unwrap();
        assert_eq!(r.weight, -1);
        assert_eq!(r.join.iter().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn conservative_examples() {
        let forest = graph(4, &[(1, 2, -5), (3, 4, 2)]);
        assert!(is_conservative(&forest).unwrap());
        assert!(is_conservative(&graph(3, &[(1, 2, 1), (2, 3, 1), (1, 3, -1)])).unwrap());
        assert!(!is_conservative(&graph(3, &[(1, 2, -1), (2, 3, -1), (1, 3, 1)])).unwrap());
    }

    #[test]
    fn min_join_flip_is_conservative() {
        let g = graph(4, &[(1, 2, 2), (2, 3, -3), (3, 4, 1), (4, 1, 1), (1, 3, -1)]);
        let t: TerminalSet = [2, 4].into_iter().collect();
        let r = min_tjoin(&g, &t).unwrap();
        let flipped = g.weight_flip(&r.join).unwrap();
        assert!(is_conservative(&flipped).unwrap());
    }

    #[test]
    fn peel_examples() {
        // already a path
        let g = graph(3, &[(1, 2, 1), (2, 3, 1)]);
        let t: TerminalSet = [1, 3].into_iter().collect();
        let j: EdgeSet = [1, 2].into_iter().collect();
        assert_eq!(peel_minimal_join(&g, &t, &j).unwrap(), j);

        // path plus a disjoint 0-weight 2-cycle of parallel edges
        let g = graph(5, &[(1, 2, 1), (2, 3, 1), (4, 5, 1), (4, 5, -1)]);
        let j: EdgeSet = [1, 2, 3, 4].into_iter().collect();
        let peeled = peel_minimal_join(&g, &t, &j).unwrap();
        assert_eq!(peeled.iter().collect::<Vec<_>>(), vec![1, 2]);

        // empty join, empty terminals
        assert_eq!(
            peel_minimal_join(&g, &TerminalSet::new(), &EdgeSet::new()).unwrap(),
            EdgeSet::new()
        );

        // not a T-join
        assert_eq!(peel_minimal_join(&g, &t, &EdgeSet::new()), Err(Error::NotATJoin));

        // a 0-weight cycle hanging off an interior path vertex is peeled too
        let g = graph(5, &[(1, 2, 1), (2, 3, 1), (2, 4, 1), (4, 5, -2), (5, 2, 1)]);
        let t: TerminalSet = [1, 3].into_iter().collect();
        let j: EdgeSet = [1, 2, 3, 4, 5].into_iter().collect();
        let peeled = peel_minimal_join(&g, &t, &j).unwrap();
        assert_eq!(peeled.iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn shortest_path_examples() {
        let g = graph(3, &[(1, 2, 1), (2, 3, 1), (1, 3, -1)]);
        let (p, w) = shortest_path_conservative(&g, 1, 3).unwrap();
        assert_eq!(w, -1);
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![3]);

        let path = graph(3, &[(1, 2, 1), (2, 3, 1)]);
        let (p, w) = shortest_path_conservative(&path, 1, 3).unwrap();
        assert_eq!(w, 2);
        assert_eq!(p.len(), 2);

        // 4-cycle, all weights 1: ties break to the lowest-edge-id path
        let c4 = graph(4, &[(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 1, 1)]);
        let (p, w) = shortest_path_conservative(&c4, 1, 3).unwrap();
        assert_eq!(w, 2);
        assert_eq!(p.iter().collect::<Vec<_>>(), vec![1, 2]);

        let neg = graph(3, &[(1, 2, -1), (2, 3, -1), (1, 3, 1)]);
        assert_eq!(shortest_path_conservative(&neg, 1, 3), Err(Error::NotConservative));

        let split = graph(4, &[(1, 2, 1), (3, 4, 1)]);
        assert_eq!(shortest_path_conservative(&split, 1, 3), Err(Error::Infeasible));
    }

    #[test]
    fn random_instances_match_enumeration() {
        let mut state = 0xDEADBEEFCAFEBABEu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..300 {
            let n = 2 + (next() % 6) as usize; // 2..=7
            let m = 1 + (next() % 12) as usize; // 1..=12
            let edges: Vec<(usize, usize, Weight)> = (0..m)
                .map(|_| {
                    let u = 1 + (next() % n as u64) as usize;
                    let mut v = 1 + (next() % (n as u64 - 1)) as usize;
                    if v >= u {
                        v += 1;
                    }
                    (u, v, (next() % 7) as Weight - 3)
                })
                .collect();
            let g = graph(n, &edges);
            let mut t = TerminalSet::new();
            for v in 1..=n {
                if next() % 2 == 0 {
                    t.insert(v);
                }
            }
            if t.len() % 2 == 1 {
                let last = t.iter().last().unwrap();
                let mut t2: TerminalSet = t.iter().collect();
                t2 = t2.iter().filter(|&v| v != last).collect();
                t = t2;
            }
            let brute = brute_min_tjoin(&g, &t);
            match min_tjoin(&g, &t) {
                Ok(r) => {
                    let (_, bw) = brute.expect("solver found a join, oracle must too");
                    assert_eq!(r.weight, bw, "trial {trial}");
                    assert!(is_tjoin(&g, &t, &r.join).unwrap());
                    // flipping a minimum join always leaves the weights
                    // conservative
                    let flipped = g.weight_flip(&r.join).unwrap();
                    assert!(is_conservative(&flipped).unwrap(), "trial {trial}");
                }
                Err(Error::Infeasible) => assert!(brute.is_none(), "trial {trial}"),
                Err(e) => panic!("trial {trial}: {e}"),
            }
        }
    }

    #[test]
    fn shortest_path_agrees_with_join_weight() {
        for seed in 0..60 {
            let spec = crate::gen::GenSpec { n: 7, m: 11, wmax: 3, seed };
            let g = crate::gen::gen_conservative(&spec).unwrap();
            let (s, t) = (1, 7);
            match shortest_path_conservative(&g, s, t) {
                Err(Error::Infeasible) => continue,
                Err(e) => panic!("seed {seed}: {e}"),
                Ok((path, w)) => {
                    assert!(crate::graph::is_simple_path(&g, &path, s, t).unwrap());
                    let join = min_tjoin(&g, &TerminalSet::pair(s, t)).unwrap();
                    assert_eq!(w, join.weight, "seed {seed}");
                }
            }
        }
    }
}
