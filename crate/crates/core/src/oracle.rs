//! Exhaustive exact solvers used as ground truth at small scale.
//!
//! Every search is deterministic (enumeration is canonicalized by edge id)
//! and carries a mandatory step budget; exhausting the budget is an explicit
//! [`Error::BudgetExceeded`] outcome, never a silent wrong answer.

use crate::error::{Error, Result};
use crate::graph::{ArcId, Digraph, EdgeId, EdgeSet, TerminalSet, UndirectedGraph, VertexId, Weight};

/// Step budget for a brute-force search. One step is one node expansion or
/// one examined subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_steps: u64,
}

impl SearchBudget {
    pub const DEFAULT_STEPS: u64 = 10_000_000;

    pub fn steps(max_steps: u64) -> Self {
        SearchBudget { max_steps }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_steps: Self::DEFAULT_STEPS }
    }
}

struct Meter {
    limit: u64,
    used: u64,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter { limit: budget.max_steps, used: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Parity filter for cycle and path enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFilter {
    Any,
    Odd,
    Even,
}

impl ParityFilter {
    fn admits(self, len: usize) -> bool {
        match self {
            ParityFilter::Any => true,
            ParityFilter::Odd => len % 2 == 1,
            ParityFilter::Even => len.is_multiple_of(2),
        }
    }
}

fn better(best: &Option<(EdgeSet, Weight)>, w: Weight) -> bool {
    match best {
        None => true,
        Some((_, bw)) => w < *bw,
    }
}

/// Minimum-weight simple cycle matching the parity filter and, when given,
/// containing the vertex `through`. `Ok(None)` means no such cycle exists.
///
/// Enumeration is canonical: cycles are rooted at their smallest vertex and
/// explored in edge-id order, each cycle visited exactly once.
pub fn bf_min_cycle(
    g: &UndirectedGraph,
    parity: ParityFilter,
    through: Option<VertexId>,
    budget: SearchBudget,
) -> Result<Option<(EdgeSet, Weight)>> {
    if let Some(p) = through {
        if !g.contains_vertex(p) {
            return Err(Error::VertexOutOfRange(p));
        }
    }
    let mut meter = Meter::new(budget);
    let mut best: Option<(EdgeSet, Weight)> = None;

    // path state for the iterative DFS rooted at r
    let n = g.vertex_count();
    let mut on_path = vec![false; n + 1];

    for root in 1..=n {
        // cycles are enumerated with root = min V(C); a through-filter only
        // needs roots at most `through`
        if let Some(p) = through {
            if root > p {
                break;
            }
        }
        on_path[root] = true;
        // stack of (vertex, next adjacency cursor, edge used to get here, weight so far)
        let mut stack: Vec<(VertexId, usize, EdgeId, Weight)> = vec![(root, 0, 0, 0)];
        while let Some(&mut (v, ref mut cur, _, wsum)) = stack.last_mut() {
            if *cur >= g.incident(v).len() {
                stack.pop();
                on_path[v] = false;
                continue;
            }
            let eid = g.incident(v)[*cur];
            *cur += 1;
            meter.tick()?;
            let w = g.edges()[eid - 1].other(v);
            if w == root {
                // closing edge; skip walking back over the very first edge
                let first = stack.get(1).map(|&(_, _, e, _)| e).unwrap_or(eid);
                if stack.len() >= 2 && eid != first && first < eid {
                    let len = stack.len(); // edges in cycle = path edges + closing edge
                    let total = wsum + g.edges()[eid - 1].weight;
                    let through_ok = match through {
                        None => true,
                        Some(p) => p == root || on_path[p],
                    };
                    if parity.admits(len) && through_ok && better(&best, total) {
                        let mut cycle = EdgeSet::new();
                        cycle.insert(eid);
                        for &(_, _, e, _) in &stack[1..] {
                            cycle.insert(e);
                        }
                        best = Some((cycle, total));
                    }
                }
            } else if w > root && !on_path[w] {
                let nw = wsum + g.edges()[eid - 1].weight;
                on_path[w] = true;
                stack.push((w, 0, eid, nw));
            }
        }
        on_path[root] = false;
    }
    Ok(best)
}

/// Minimum-weight simple `(s, t)`-path matching the parity filter, by
/// exhaustive enumeration. With `s == t` the query routes to
/// [`bf_min_cycle`] through `s`, per the path convention for cycles.
pub fn bf_min_path(
    g: &UndirectedGraph,
    s: VertexId,
    t: VertexId,
    parity: ParityFilter,
    budget: SearchBudget,
) -> Result<Option<(EdgeSet, Weight)>> {
    if !g.contains_vertex(s) {
        return Err(Error::VertexOutOfRange(s));
    }
    if !g.contains_vertex(t) {
        return Err(Error::VertexOutOfRange(t));
    }
    if s == t {
        return bf_min_cycle(g, parity, Some(s), budget);
    }
    let mut meter = Meter::new(budget);
    let mut best: Option<(EdgeSet, Weight)> = None;
    let n = g.vertex_count();
    let mut on_path = vec![false; n + 1];
    on_path[s] = true;
    let mut stack: Vec<(VertexId, usize, EdgeId, Weight)> = vec![(s, 0, 0, 0)];
    while let Some(&mut (v, ref mut cur, _, wsum)) = stack.last_mut() {
        if *cur >= g.incident(v).len() {
            stack.pop();
            on_path[v] = false;
            continue;
        }
        let eid = g.incident(v)[*cur];
        *cur += 1;
        meter.tick()?;
        let w = g.edges()[eid - 1].other(v);
        if w == t {
            let len = stack.len(); // path edges including eid
            let total = wsum + g.edges()[eid - 1].weight;
            if parity.admits(len) && better(&best, total) {
                let mut path = EdgeSet::new();
                path.insert(eid);
                for &(_, _, e, _) in &stack[1..] {
                    path.insert(e);
                }
                best = Some((path, total));
            }
        } else if !on_path[w] {
            let nw = wsum + g.edges()[eid - 1].weight;
            on_path[w] = true;
            stack.push((w, 0, eid, nw));
        }
    }
    Ok(best)
}

/// Minimum-weight odd simple `(s, t)`-path.
pub fn bf_min_odd_path(
    g: &UndirectedGraph,
    s: VertexId,
    t: VertexId,
    budget: SearchBudget,
) -> Result<Option<(EdgeSet, Weight)>> {
    bf_min_path(g, s, t, ParityFilter::Odd, budget)
}

/// Witness for a DISP search: two vertex-disjoint terminal paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DispWitness {
    /// Path starting at `s1`.
    pub path1: EdgeSet,
    /// Path starting at `s2`.
    pub path2: EdgeSet,
    pub total_weight: Weight,
}

/// Minimum total weight over all pairs of vertex-disjoint
/// `({s1,s2},{t1,t2})`-paths, each path joining one s-terminal to one
/// t-terminal. `Ok(None)` when no disjoint pair exists.
pub fn bf_disp(
    g: &UndirectedGraph,
    s1: VertexId,
    s2: VertexId,
    t1: VertexId,
    t2: VertexId,
    budget: SearchBudget,
) -> Result<Option<DispWitness>> {
    let terminals = [s1, s2, t1, t2];
    for &v in &terminals {
        if !g.contains_vertex(v) {
            return Err(Error::VertexOutOfRange(v));
        }
    }
    let distinct: std::collections::BTreeSet<_> = terminals.iter().collect();
    if distinct.len() != 4 {
        return Err(Error::IdenticalEndpoints);
    }

    let mut meter = Meter::new(budget);
    let mut best: Option<DispWitness> = None;
    let n = g.vertex_count();

    // enumerate P1 from s1 to either t-terminal, then P2 from s2 to the
    // other t-terminal avoiding all of P1's vertices
    let mut paths1: Vec<(EdgeSet, Weight, VertexId, Vec<bool>)> = Vec::new();
    {
        let mut on_path = vec![false; n + 1];
        on_path[s1] = true;
        let mut stack: Vec<(VertexId, usize, EdgeId, Weight)> = vec![(s1, 0, 0, 0)];
        while let Some(&mut (v, ref mut cur, _, wsum)) = stack.last_mut() {
            if *cur >= g.incident(v).len() {
                stack.pop();
                on_path[v] = false;
                continue;
            }
            let eid = g.incident(v)[*cur];
            *cur += 1;
            meter.tick()?;
            let w = g.edges()[eid - 1].other(v);
            if w == t1 || w == t2 {
                let total = wsum + g.edges()[eid - 1].weight;
                let mut path = EdgeSet::new();
                path.insert(eid);
                for &(_, _, e, _) in &stack[1..] {
                    path.insert(e);
                }
                let mut verts = on_path.clone();
                verts[w] = true;
                paths1.push((path, total, w, verts));
                // t-terminals are endpoints only; do not walk past them
            } else if !on_path[w] {
                let nw = wsum + g.edges()[eid - 1].weight;
                on_path[w] = true;
                stack.push((w, 0, eid, nw));
            }
        }
    }

    for (path1, w1, endpoint1, blocked) in paths1 {
        if blocked[s2] {
            continue;
        }
        let target = if endpoint1 == t1 { t2 } else { t1 };
        if blocked[target] {
            continue;
        }
        // prune: the second path cannot improve on best by more than its
        // own minimum; full enumeration keeps this simple and exact
        let mut on_path = blocked.clone();
        on_path[s2] = true;
        let mut stack: Vec<(VertexId, usize, EdgeId, Weight)> = vec![(s2, 0, 0, 0)];
        while let Some(&mut (v, ref mut cur, _, wsum)) = stack.last_mut() {
            if *cur >= g.incident(v).len() {
                stack.pop();
                on_path[v] = false;
                continue;
            }
            let eid = g.incident(v)[*cur];
            *cur += 1;
            meter.tick()?;
            let w = g.edges()[eid - 1].other(v);
            if w == target {
                let total = w1 + wsum + g.edges()[eid - 1].weight;
                let is_better = match &best {
                    None => true,
                    Some(b) => total < b.total_weight,
                };
                if is_better {
                    let mut path2 = EdgeSet::new();
                    path2.insert(eid);
                    for &(_, _, e, _) in &stack[1..] {
                        path2.insert(e);
                    }
                    best = Some(DispWitness { path1: path1.clone(), path2, total_weight: total });
                }
            } else if !on_path[w] {
                let nw = wsum + g.edges()[eid - 1].weight;
                on_path[w] = true;
                stack.push((w, 0, eid, nw));
            }
        }
    }
    Ok(best)
}

/// Enumeration bound for [`bf_motj`].
pub const MOTJ_EDGE_LIMIT: usize = 20;

/// Minimum-weight odd T-join by exhaustive enumeration of all edge subsets
/// of odd cardinality. Requires at most [`MOTJ_EDGE_LIMIT`] edges.
pub fn bf_motj(
    g: &UndirectedGraph,
    t: &TerminalSet,
    budget: SearchBudget,
) -> Result<Option<(EdgeSet, Weight)>> {
    let m = g.edge_count();
    if m > MOTJ_EDGE_LIMIT {
        return Err(Error::TooLarge(m));
    }
    t.check_in_range(g)?;
    let mut meter = Meter::new(budget);

    // compact vertex ids so degree parities fit one u64 (at most 2m <= 40
    // vertices carry edges); a terminal with no incident edge can never
    // reach odd degree, so no T-join exists at all
    let mut compact = vec![usize::MAX; g.vertex_count() + 1];
    let mut touched = 0usize;
    for e in g.edges() {
        for v in [e.u, e.v] {
            if compact[v] == usize::MAX {
                compact[v] = touched;
                touched += 1;
            }
        }
    }
    if t.iter().any(|v| compact[v] == usize::MAX) {
        return Ok(None);
    }

    // parity signature: subset S is a T-join iff the XOR of its endpoint
    // masks equals the mask of T
    let masks: Vec<u64> = g
        .edges()
        .iter()
        .map(|e| (1u64 << compact[e.u]) | (1u64 << compact[e.v]))
        .collect();
    let weights: Vec<Weight> = g.edges().iter().map(|e| e.weight).collect();
    let t_mask: u64 = t.iter().fold(0, |acc, v| acc | (1u64 << compact[v]));

    let mut best: Option<(u32, Weight)> = None;
    for subset in 0u32..(1u32 << m) {
        meter.tick()?;
        if subset.count_ones() % 2 == 0 {
            continue;
        }
        let mut sig = 0u64;
        let mut w = 0;
        let mut bits = subset;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            sig ^= masks[i];
            w += weights[i];
            bits &= bits - 1;
        }
        if sig == t_mask {
            let is_better = match best {
                None => true,
                Some((_, bw)) => w < bw,
            };
            if is_better {
                best = Some((subset, w));
            }
        }
    }
    Ok(best.map(|(subset, w)| {
        let set: EdgeSet = (0..m).filter(|i| subset >> i & 1 == 1).map(|i| i + 1).collect();
        (set, w)
    }))
}

/// Searches for two openly disjoint directed paths, `s -> t` and `t -> s`
/// (equivalently a directed cycle through both `s` and `t`). Returns the
/// lexicographically first pair in arc-id DFS order.
pub fn bf_bfp(
    d: &Digraph,
    s: VertexId,
    t: VertexId,
    budget: SearchBudget,
) -> Result<Option<(Vec<ArcId>, Vec<ArcId>)>> {
    if !d.contains_vertex(s) {
        return Err(Error::VertexOutOfRange(s));
    }
    if !d.contains_vertex(t) {
        return Err(Error::VertexOutOfRange(t));
    }
    if s == t {
        return Err(Error::IdenticalEndpoints);
    }
    let mut meter = Meter::new(budget);
    let n = d.vertex_count();

    // enumerate simple s->t paths; for each, search a t->s path over the
    // complement of its interior vertices
    let mut on_path = vec![false; n + 1];
    on_path[s] = true;
    let mut stack: Vec<(VertexId, usize, ArcId)> = vec![(s, 0, 0)];
    while let Some(&mut (v, ref mut cur, _)) = stack.last_mut() {
        if *cur >= d.out_arcs(v).len() {
            stack.pop();
            on_path[v] = false;
            continue;
        }
        let aid = d.out_arcs(v)[*cur];
        *cur += 1;
        meter.tick()?;
        let head = d.arcs()[aid - 1].head;
        if head == t {
            let mut p1: Vec<ArcId> = stack[1..].iter().map(|&(_, _, a)| a).collect();
            p1.push(aid);
            if let Some(p2) = directed_path_avoiding(d, t, s, &on_path, &mut meter)? {
                return Ok(Some((p1, p2)));
            }
        } else if !on_path[head] {
            on_path[head] = true;
            stack.push((head, 0, aid));
        }
    }
    Ok(None)
}

/// First simple directed path from `from` to `to` whose interior avoids the
/// `blocked` vertices, in arc-id DFS order. `to` itself may be blocked.
fn directed_path_avoiding(
    d: &Digraph,
    from: VertexId,
    to: VertexId,
    blocked: &[bool],
    meter: &mut Meter,
) -> Result<Option<Vec<ArcId>>> {
    let mut on_path = vec![false; d.vertex_count() + 1];
    on_path[from] = true;
    let mut stack: Vec<(VertexId, usize, ArcId)> = vec![(from, 0, 0)];
    while let Some(&mut (v, ref mut cur, _)) = stack.last_mut() {
        if *cur >= d.out_arcs(v).len() {
            stack.pop();
            on_path[v] = false;
            continue;
        }
        let aid = d.out_arcs(v)[*cur];
        *cur += 1;
        meter.tick()?;
        let head = d.arcs()[aid - 1].head;
        if head == to {
            let mut p: Vec<ArcId> = stack[1..].iter().map(|&(_, _, a)| a).collect();
            p.push(aid);
            return Ok(Some(p));
        }
        if !on_path[head] && !blocked[head] {
            on_path[head] = true;
            stack.push((head, 0, aid));
        }
    }
    Ok(None)
}
