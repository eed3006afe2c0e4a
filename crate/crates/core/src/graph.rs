//! Multigraph substrate: integer-weighted undirected graphs, digraphs,
//! edge sets with weight/parity/degree algebra, and cycle decomposition.
//!
//! Vertices are ids `1..=n`, edge ids `1..=m` in input order and are never
//! renumbered. Weights are exact integers throughout; there is no floating
//! point anywhere in the toolkit.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type ArcId = usize;
pub type Weight = i64;

/// One undirected edge. Parallel edges are permitted, loops are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Weight,
}

impl Edge {
    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            debug_assert_eq!(x, self.v);
            self.u
        }
    }
}

/// Undirected multigraph with exact integer edge weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<EdgeId>>, // 1-indexed; adjacency[0] unused
}

impl UndirectedGraph {
    /// Builds a graph on vertices `1..=n` from `(u, v, weight)` triples.
    /// Edge ids are assigned `1..=m` in input order.
    pub fn new(n: usize, edges: &[(VertexId, VertexId, Weight)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for (i, &(u, v, weight)) in edges.iter().enumerate() {
            let id = i + 1;
            if u == 0 || u > n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::LoopEdge { edge: id, vertex: u });
            }
            out.push(Edge { id, u, v, weight });
        }
        let mut adjacency = vec![Vec::new(); n + 1];
        for e in &out {
            adjacency[e.u].push(e.id);
            adjacency[e.v].push(e.id);
        }
        Ok(UndirectedGraph { n, edges: out, adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id.wrapping_sub(1)).ok_or(Error::UnknownEdge(id))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v >= 1 && v <= self.n
    }

    /// Edge ids incident to `v`, in increasing id order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v]
    }

    /// Returns the graph with the weight of each edge in `flip` negated;
    /// ids, endpoints and order are untouched.
    pub fn weight_flip(&self, flip: &EdgeSet) -> Result<Self> {
        for id in flip.iter() {
            if id == 0 || id > self.edges.len() {
                return Err(Error::UnknownEdge(id));
            }
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            if flip.contains(e.id) {
                e.weight = -e.weight;
            }
        }
        Ok(g)
    }

    /// Same graph with every weight replaced by its absolute value.
    pub fn abs_weights(&self) -> Self {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight = e.weight.abs();
        }
        g
    }

    /// The set of negative-weight edges.
    pub fn negative_edges(&self) -> EdgeSet {
        self.edges.iter().filter(|e| e.weight < 0).map(|e| e.id).collect()
    }

    /// Connected-component label per vertex (labels are the smallest vertex
    /// id in the component); index 0 is unused.
    pub fn component_labels(&self) -> Vec<VertexId> {
        let mut label = vec![0; self.n + 1];
        for start in 1..=self.n {
            if label[start] != 0 {
                continue;
            }
            let mut stack = vec![start];
            label[start] = start;
            while let Some(v) = stack.pop() {
                for &eid in self.incident(v) {
                    let w = self.edges[eid - 1].other(v);
                    if label[w] == 0 {
                        label[w] = start;
                        stack.push(w);
                    }
                }
            }
        }
        label
    }

    /// 2-colors the graph, skipping `skip` entirely when given.
    /// Returns false iff an odd cycle avoiding `skip` exists.
    pub fn is_bipartite_without(&self, skip: Option<VertexId>) -> bool {
        let mut color = vec![-1i8; self.n + 1];
        for start in 1..=self.n {
            if Some(start) == skip || color[start] != -1 {
                continue;
            }
            color[start] = 0;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &eid in self.incident(v) {
                    let w = self.edges[eid - 1].other(v);
                    if Some(w) == skip {
                        continue;
                    }
                    if color[w] == -1 {
                        color[w] = 1 - color[v];
                        stack.push(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_bipartite(&self) -> bool {
        self.is_bipartite_without(None)
    }
}

/// A subset of a host graph's edges, identified by edge ids.
///
/// The host is passed explicitly to the weight/degree operations; an
/// `EdgeSet` is meaningful only together with the graph it was built from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    ids: BTreeSet<EdgeId>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.ids.contains(&id)
    }

    pub fn insert(&mut self, id: EdgeId) -> bool {
        self.ids.insert(id)
    }

    pub fn remove(&mut self, id: EdgeId) -> bool {
        self.ids.remove(&id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Cardinality parity: true iff the set has an odd number of edges.
    pub fn is_odd(&self) -> bool {
        self.ids.len() % 2 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ids.iter().copied()
    }

    /// Total weight under the host graph's weight function.
    pub fn weight(&self, g: &UndirectedGraph) -> Result<Weight> {
        let mut total = 0;
        for id in self.iter() {
            total += g.edge(id)?.weight;
        }
        Ok(total)
    }

    /// Degree profile `d_S(v)` over `1..=n`; index 0 is unused.
    pub fn degrees(&self, g: &UndirectedGraph) -> Result<Vec<usize>> {
        let mut d = vec![0; g.vertex_count() + 1];
        for id in self.iter() {
            let e = g.edge(id)?;
            d[e.u] += 1;
            d[e.v] += 1;
        }
        Ok(d)
    }

    /// Vertices with odd degree in the set.
    pub fn odd_degree_vertices(&self, g: &UndirectedGraph) -> Result<BTreeSet<VertexId>> {
        let d = self.degrees(g)?;
        Ok((1..=g.vertex_count()).filter(|&v| d[v] % 2 == 1).collect())
    }

    /// Symmetric difference of the two sets.
    pub fn sym_diff(&self, other: &EdgeSet) -> EdgeSet {
        self.ids.symmetric_difference(&other.ids).copied().collect()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        self.ids.union(&other.ids).copied().collect()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.ids.is_subset(&other.ids)
    }

    /// Vertices incident to at least one member edge.
    pub fn vertices(&self, g: &UndirectedGraph) -> Result<BTreeSet<VertexId>> {
        let mut vs = BTreeSet::new();
        for id in self.iter() {
            let e = g.edge(id)?;
            vs.insert(e.u);
            vs.insert(e.v);
        }
        Ok(vs)
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet { ids: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = EdgeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, EdgeId>>;
    fn into_iter(self) -> Self::IntoIter {
        self.ids.iter().copied()
    }
}

/// Terminal set `T` for T-join queries. `|T|` must be even for a T-join to
/// exist; that is checked at the call sites that require it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TerminalSet {
    vertices: BTreeSet<VertexId>,
}

impl TerminalSet {
    pub fn new() -> Self {
        TerminalSet::default()
    }

    pub fn pair(s: VertexId, t: VertexId) -> Self {
        [s, t].into_iter().collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn insert(&mut self, v: VertexId) -> bool {
        self.vertices.insert(v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    /// Symmetric difference with an arbitrary vertex set.
    pub fn sym_diff_vertices(&self, other: &BTreeSet<VertexId>) -> TerminalSet {
        TerminalSet { vertices: self.vertices.symmetric_difference(other).copied().collect() }
    }

    pub fn check_in_range(&self, g: &UndirectedGraph) -> Result<()> {
        for v in self.iter() {
            if !g.contains_vertex(v) {
                return Err(Error::VertexOutOfRange(v));
            }
        }
        Ok(())
    }
}

impl FromIterator<VertexId> for TerminalSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        TerminalSet { vertices: iter.into_iter().collect() }
    }
}

/// One directed arc of a [`Digraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// Unweighted digraph; parallel arcs permitted, self-arcs rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut out = Vec::with_capacity(arcs.len());
        for (i, &(tail, head)) in arcs.iter().enumerate() {
            let id = i + 1;
            if tail == 0 || tail > n {
                return Err(Error::VertexOutOfRange(tail));
            }
            if head == 0 || head > n {
                return Err(Error::VertexOutOfRange(head));
            }
            if tail == head {
                return Err(Error::LoopEdge { edge: id, vertex: tail });
            }
            out.push(Arc { id, tail, head });
        }
        let mut out_arcs = vec![Vec::new(); n + 1];
        for a in &out {
            out_arcs[a.tail].push(a.id);
        }
        Ok(Digraph { n, arcs: out, out_arcs })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Result<&Arc> {
        self.arcs.get(id.wrapping_sub(1)).ok_or(Error::UnknownEdge(id))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v >= 1 && v <= self.n
    }

    /// Arc ids leaving `v`, in increasing id order.
    pub fn out_arcs(&self, v: VertexId) -> &[ArcId] {
        &self.out_arcs[v]
    }
}

/// True iff `d_J(v)` is odd exactly for the vertices `v` in `t`.
pub fn is_tjoin(g: &UndirectedGraph, t: &TerminalSet, j: &EdgeSet) -> Result<bool> {
    t.check_in_range(g)?;
    let odd = j.odd_degree_vertices(g)?;
    Ok(odd == t.iter().collect())
}

/// True iff the set is a cycle: non-empty, every vertex of degree exactly 2,
/// and connected on its incident vertices.
pub fn is_cycle(g: &UndirectedGraph, c: &EdgeSet) -> Result<bool> {
    if c.is_empty() {
        return Ok(false);
    }
    let d = c.degrees(g)?;
    let verts = c.vertices(g)?;
    if verts.iter().any(|&v| d[v] != 2) {
        return Ok(false);
    }
    Ok(edge_set_connected(g, c, &verts))
}

/// True iff the set is a simple `(s, t)`-path: endpoints of degree 1,
/// interior degrees 2, connected.
pub fn is_simple_path(g: &UndirectedGraph, p: &EdgeSet, s: VertexId, t: VertexId) -> Result<bool> {
    if s == t || p.is_empty() {
        return Ok(false);
    }
    let d = p.degrees(g)?;
    if d[s] != 1 || d[t] != 1 {
        return Ok(false);
    }
    let verts = p.vertices(g)?;
    for &v in &verts {
        let want = if v == s || v == t { 1 } else { 2 };
        if d[v] != want {
            return Ok(false);
        }
    }
    Ok(edge_set_connected(g, p, &verts))
}

fn edge_set_connected(g: &UndirectedGraph, set: &EdgeSet, verts: &BTreeSet<VertexId>) -> bool {
    let start = match verts.iter().next() {
        Some(&v) => v,
        None => return true,
    };
    let mut seen: BTreeSet<VertexId> = BTreeSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &eid in g.incident(v) {
            if !set.contains(eid) {
                continue;
            }
            let w = g.edges()[eid - 1].other(v);
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == verts.len()
}

/// Decomposes an even-degree edge set into edge-disjoint cycles.
///
/// Walks always extend along the lowest-id unused incident edge, so the
/// output is deterministic given the edge order. Errors with
/// [`Error::OddDegreeVertex`] if some vertex has odd degree in `j`.
pub fn decompose_even_subgraph(g: &UndirectedGraph, j: &EdgeSet) -> Result<Vec<EdgeSet>> {
    let degrees = j.degrees(g)?;
    if let Some(v) = (1..=g.vertex_count()).find(|&v| degrees[v] % 2 == 1) {
        return Err(Error::OddDegreeVertex(v));
    }

    // next unused incident edge per vertex, by cursor into the sorted
    // adjacency list
    let mut used = vec![false; g.edge_count() + 1];
    let mut cursor = vec![0usize; g.vertex_count() + 1];
    let remaining: Vec<EdgeId> = j.iter().collect(); // sorted ascending
    let mut next_start = 0usize;

    let mut cycles = Vec::new();
    let mut walk: Vec<(VertexId, EdgeId)> = Vec::new(); // (vertex, edge that led here)
    let mut pos = vec![usize::MAX; g.vertex_count() + 1]; // index in walk

    loop {
        if walk.is_empty() {
            // start a fresh walk at the lowest-id unused edge
            while next_start < remaining.len() && used[remaining[next_start]] {
                next_start += 1;
            }
            if next_start == remaining.len() {
                break;
            }
            let eid = remaining[next_start];
            let e = g.edge(eid)?;
            let start = e.u.min(e.v);
            walk.push((start, 0));
            pos[start] = 0;
        }

        let (cur, _) = *walk.last().expect("walk is non-empty");
        let mut advanced = false;
        while cursor[cur] < g.incident(cur).len() {
            let eid = g.incident(cur)[cursor[cur]];
            if used[eid] || !j.contains(eid) {
                cursor[cur] += 1;
                continue;
            }
            used[eid] = true;
            let nxt = g.edges()[eid - 1].other(cur);
            if pos[nxt] != usize::MAX {
                // closes a cycle: everything after nxt's position plus eid
                let at = pos[nxt];
                let mut cycle = EdgeSet::new();
                cycle.insert(eid);
                while walk.len() > at + 1 {
                    let (v, via) = walk.pop().expect("walk shrinks to at+1");
                    pos[v] = usize::MAX;
                    cycle.insert(via);
                }
                cycles.push(cycle);
            } else {
                pos[nxt] = walk.len();
                walk.push((nxt, eid));
            }
            advanced = true;
            break;
        }
        if !advanced {
            // exhausted edges at cur; with even degrees this only happens at
            // the walk's bottom vertex
            let (v, _) = walk.pop().expect("walk is non-empty");
            pos[v] = usize::MAX;
            debug_assert!(walk.is_empty(), "walk stalled off its start vertex");
        }
    }
    Ok(cycles)
}
