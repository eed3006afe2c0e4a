//! Exact minimum-weight perfect matching on general graphs.
//!
//! The engine is the classic O(n^3) primal-dual blossom method for
//! maximum-weight matching (Edmonds' blossoms with Galil-style dual
//! updates). Minimum-weight perfect matching negates the weights and asks
//! for a maximum-cardinality maximum-weight matching. Weights are doubled
//! internally so every dual variable and slack stays an exact integer;
//! negative weights are supported directly.

use crate::error::{Error, Result};
use crate::graph::{VertexId, Weight};

/// A matching instance: vertices `1..=n`, weighted edges, loops rejected.
/// Parallel edges are allowed; only a cheapest edge of each parallel class
/// can appear in a minimum-weight perfect matching.
#[derive(Debug, Clone)]
pub struct MatchingProblem {
    n: usize,
    edges: Vec<(VertexId, VertexId, Weight)>,
}

impl MatchingProblem {
    pub fn new(n: usize, edges: &[(VertexId, VertexId, Weight)]) -> Result<Self> {
        for (idx, &(u, v, _)) in edges.iter().enumerate() {
            if u == 0 || u > n {
                return Err(Error::VertexOutOfRange(u));
            }
            if v == 0 || v > n {
                return Err(Error::VertexOutOfRange(v));
            }
            if u == v {
                return Err(Error::LoopEdge { edge: idx + 1, vertex: u });
            }
        }
        Ok(MatchingProblem { n, edges: edges.to_vec() })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, Weight)] {
        &self.edges
    }
}

/// A perfect matching: every vertex covered exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    /// Indices into the problem's edge list, ascending.
    pub edge_indices: Vec<usize>,
    /// Matched pairs `(u, v)` with `u < v`, ascending by `u`.
    pub pairs: Vec<(VertexId, VertexId)>,
    /// Sum of the weights of the matched edges.
    pub weight: Weight,
}

/// Returns a perfect matching of minimum total weight, exactly.
///
/// Errors with [`Error::NoPerfectMatching`] when none exists (odd vertex
/// count, or some vertex cannot be covered).
pub fn min_weight_perfect_matching(problem: &MatchingProblem) -> Result<Matching> {
    let n = problem.n;
    if n % 2 == 1 {
        return Err(Error::NoPerfectMatching);
    }
    if n == 0 {
        return Ok(Matching { edge_indices: vec![], pairs: vec![], weight: 0 });
    }

    // keep one cheapest representative per vertex pair (lowest input index
    // on ties) so the engine sees a simple graph
    let mut best: std::collections::BTreeMap<(VertexId, VertexId), usize> =
        std::collections::BTreeMap::new();
    for (idx, &(u, v, w)) in problem.edges.iter().enumerate() {
        let key = (u.min(v), u.max(v));
        match best.get(&key) {
            Some(&prev) if problem.edges[prev].2 <= w => {}
            _ => {
                best.insert(key, idx);
            }
        }
    }

    let reduced: Vec<(usize, usize, Weight)> = best
        .iter()
        .map(|(&(u, v), &idx)| (u - 1, v - 1, -problem.edges[idx].2))
        .collect();

    let mate = max_weight_matching(n, &reduced, true);

    if mate.contains(&NONE) {
        return Err(Error::NoPerfectMatching);
    }

    let mut edge_indices = Vec::with_capacity(n / 2);
    let mut pairs = Vec::with_capacity(n / 2);
    let mut weight = 0;
    for u0 in 0..n {
        let v0 = mate[u0];
        if u0 < v0 {
            let key = (u0 + 1, v0 + 1);
            let idx = best[&key];
            edge_indices.push(idx);
            pairs.push(key);
            weight += problem.edges[idx].2;
        }
    }
    edge_indices.sort_unstable();
    Ok(Matching { edge_indices, pairs, weight })
}

const NONE: usize = usize::MAX;

/// Maximum-weight matching on vertices `0..n` (each edge `(i, j, w)` simple,
/// `i != j`). Returns `mate` with `mate[v]` the partner of `v` or `NONE`.
/// With `max_cardinality` the matching has maximum cardinality, and maximum
/// weight among those.
pub(crate) fn max_weight_matching(
    n: usize,
    edges: &[(usize, usize, Weight)],
    max_cardinality: bool,
) -> Vec<usize> {
    if edges.is_empty() {
        return vec![NONE; n];
    }
    // double the weights: keeps all duals and slacks integral
    let doubled: Vec<(usize, usize, Weight)> =
        edges.iter().map(|&(i, j, w)| (i, j, 2 * w)).collect();
    let mut solver = Blossom::new(n, doubled, max_cardinality);
    solver.solve();
    solver.verify_optimum();
    solver.mate_vertices()
}

/// State of the primal-dual search. Indices `0..n` are vertices (trivial
/// blossoms), `n..2n` are non-trivial blossom slots. Endpoint `2k` is the
/// first vertex of edge `k`, endpoint `2k+1` the second; `p ^ 1` flips to
/// the remote end.
struct Blossom {
    n: usize,
    edges: Vec<(usize, usize, Weight)>,
    max_cardinality: bool,
    endpoint: Vec<usize>,
    neighb_end: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    label_end: Vec<usize>,
    in_blossom: Vec<usize>,
    blossom_parent: Vec<usize>,
    blossom_childs: Vec<Vec<usize>>,
    blossom_base: Vec<usize>,
    blossom_endps: Vec<Vec<usize>>,
    best_edge: Vec<usize>,
    blossom_best_edges: Vec<Vec<usize>>,
    unused_blossoms: Vec<usize>,
    dual_var: Vec<Weight>,
    allow_edge: Vec<bool>,
    queue: Vec<usize>,
}

impl Blossom {
    fn new(n: usize, edges: Vec<(usize, usize, Weight)>, max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let max_weight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * nedge);
        for &(i, j, _) in &edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighb_end = vec![Vec::new(); n];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighb_end[i].push(2 * k + 1);
            neighb_end[j].push(2 * k);
        }
        let mut dual_var = vec![max_weight; n];
        dual_var.extend(std::iter::repeat_n(0, n));
        Blossom {
            n,
            edges,
            max_cardinality,
            endpoint,
            neighb_end,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            label_end: vec![NONE; 2 * n],
            in_blossom: (0..n).collect(),
            blossom_parent: vec![NONE; 2 * n],
            blossom_childs: vec![Vec::new(); 2 * n],
            blossom_base: (0..n).chain(std::iter::repeat_n(NONE, n)).collect(),
            blossom_endps: vec![Vec::new(); 2 * n],
            best_edge: vec![NONE; 2 * n],
            blossom_best_edges: vec![Vec::new(); 2 * n],
            unused_blossoms: (n..2 * n).collect(),
            dual_var,
            allow_edge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    /// 2 * slack of edge `k` (valid only outside blossoms).
    fn slack(&self, k: usize) -> Weight {
        let (i, j, w) = self.edges[k];
        self.dual_var[i] + self.dual_var[j] - 2 * w
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut leaves = Vec::new();
        self.collect_leaves(b, &mut leaves);
        leaves
    }

    fn collect_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
        } else {
            for &c in &self.blossom_childs[b] {
                self.collect_leaves(c, out);
            }
        }
    }

    /// Python-style (possibly negative) index into a blossom child list.
    fn child_at(&self, b: usize, j: i64) -> usize {
        let len = self.blossom_childs[b].len() as i64;
        let idx = if j >= 0 { j } else { len + j };
        self.blossom_childs[b][idx as usize]
    }

    fn endp_at(&self, b: usize, j: i64) -> usize {
        let len = self.blossom_endps[b].len() as i64;
        let idx = if j >= 0 { j } else { len + j };
        self.blossom_endps[b][idx as usize]
    }

    /// Label the top-level blossom of `w` with `t`, reached via remote
    /// endpoint `p` (or `NONE` when its base is single).
    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.in_blossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.label_end[w] = p;
        self.label_end[b] = p;
        self.best_edge[w] = NONE;
        self.best_edge[b] = NONE;
        if t == 1 {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else {
            // T-blossom: its base has an external mate, which becomes S
            let base = self.blossom_base[b];
            let mbase = self.mate[base];
            debug_assert!(mbase != NONE);
            self.assign_label(self.endpoint[mbase], 1, mbase ^ 1);
        }
    }

    /// Trace back from `v` and `w`; returns the base of a new blossom, or
    /// `NONE` when the paths reach two distinct roots (augmenting path).
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v;
        let mut w = w;
        loop {
            if v == NONE && w == NONE {
                break;
            }
            let mut b = self.in_blossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossom_base[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            debug_assert_eq!(self.label_end[b], self.mate[self.blossom_base[b]]);
            if self.label_end[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.label_end[b]];
                b = self.in_blossom[v];
                debug_assert_eq!(self.label[b], 2);
                debug_assert!(self.label_end[b] != NONE);
                v = self.endpoint[self.label_end[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    /// Form a new S-blossom with the given base around edge `k`.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.in_blossom[base];
        let mut bv = self.in_blossom[v];
        let mut bw = self.in_blossom[w];

        let b = self.unused_blossoms.pop().expect("blossom slots exhausted");
        self.blossom_base[b] = base;
        self.blossom_parent[b] = NONE;
        self.blossom_parent[bb] = b;

        let mut childs = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossom_parent[bv] = b;
            childs.push(bv);
            endps.push(self.label_end[bv]);
            debug_assert!(self.label_end[bv] != NONE);
            v = self.endpoint[self.label_end[bv]];
            bv = self.in_blossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossom_parent[bw] = b;
            childs.push(bw);
            endps.push(self.label_end[bw] ^ 1);
            debug_assert!(self.label_end[bw] != NONE);
            w = self.endpoint[self.label_end[bw]];
            bw = self.in_blossom[w];
        }
        self.blossom_childs[b] = childs;
        self.blossom_endps[b] = endps;

        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.label_end[b] = self.label_end[bb];
        self.dual_var[b] = 0;

        for v in self.blossom_leaves(b) {
            if self.label[self.in_blossom[v]] == 2 {
                self.queue.push(v);
            }
            self.in_blossom[v] = b;
        }

        // least-slack edges from the new blossom to every S-blossom
        let mut best_edge_to = vec![NONE; 2 * self.n];
        let childs = self.blossom_childs[b].clone();
        for bv in childs {
            let nblists: Vec<Vec<usize>> = if self.blossom_best_edges[bv].is_empty() {
                self.blossom_leaves(bv)
                    .into_iter()
                    .map(|v| self.neighb_end[v].iter().map(|p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossom_best_edges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.in_blossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.in_blossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (best_edge_to[bj] == NONE
                            || self.slack(k) < self.slack(best_edge_to[bj]))
                    {
                        best_edge_to[bj] = k;
                    }
                }
            }
            self.blossom_best_edges[bv] = Vec::new();
            self.best_edge[bv] = NONE;
        }
        self.blossom_best_edges[b] =
            best_edge_to.into_iter().filter(|&k| k != NONE).collect();
        self.best_edge[b] = NONE;
        for idx in 0..self.blossom_best_edges[b].len() {
            let k = self.blossom_best_edges[b][idx];
            if self.best_edge[b] == NONE || self.slack(k) < self.slack(self.best_edge[b]) {
                self.best_edge[b] = k;
            }
        }
    }

    /// Expand blossom `b`, restoring its children as top-level blossoms.
    fn expand_blossom(&mut self, b: usize, end_stage: bool) {
        for s in self.blossom_childs[b].clone() {
            self.blossom_parent[s] = NONE;
            if s < self.n {
                self.in_blossom[s] = s;
            } else if end_stage && self.dual_var[s] == 0 {
                self.expand_blossom(s, end_stage);
            } else {
                for v in self.blossom_leaves(s) {
                    self.in_blossom[v] = s;
                }
            }
        }

        // a T-blossom expanded mid-stage needs its children relabeled
        if !end_stage && self.label[b] == 2 {
            debug_assert!(self.label_end[b] != NONE);
            let entry_child = self.in_blossom[self.endpoint[self.label_end[b] ^ 1]];
            let pos = self.blossom_childs[b]
                .iter()
                .position(|&c| c == entry_child)
                .expect("entry child in blossom");
            let mut j = pos as i64;
            let (jstep, endp_trick): (i64, usize) = if pos % 2 == 1 {
                (1, 0)
            } else {
                (-1, 1)
            };
            if pos % 2 == 1 {
                j -= self.blossom_childs[b].len() as i64;
            }
            let mut p = self.label_end[b];
            while j != 0 {
                // relabel the T-sub-blossom
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = self.endp_at(b, j - endp_trick as i64) ^ endp_trick ^ 1;
                self.label[self.endpoint[q]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                // step past the S-sub-blossom
                let allowed = self.endp_at(b, j - endp_trick as i64) / 2;
                self.allow_edge[allowed] = true;
                j += jstep;
                p = self.endp_at(b, j - endp_trick as i64) ^ endp_trick;
                self.allow_edge[p / 2] = true;
                j += jstep;
            }
            // relabel the base T-sub-blossom without stepping to its mate
            let bv = self.child_at(b, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.label_end[self.endpoint[p ^ 1]] = p;
            self.label_end[bv] = p;
            self.best_edge[bv] = NONE;
            // remaining sub-blossoms keep label S or pick up T from a
            // reached internal vertex
            j += jstep;
            while self.child_at(b, j) != entry_child {
                let bv = self.child_at(b, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut reached = NONE;
                for v in self.blossom_leaves(bv) {
                    if self.label[v] != 0 {
                        reached = v;
                        break;
                    }
                }
                if reached != NONE {
                    debug_assert_eq!(self.label[reached], 2);
                    debug_assert_eq!(self.in_blossom[reached], bv);
                    self.label[reached] = 0;
                    self.label[self.endpoint[self.mate[self.blossom_base[bv]]]] = 0;
                    let le = self.label_end[reached];
                    self.assign_label(reached, 2, le);
                }
                j += jstep;
            }
        }

        self.label[b] = 0;
        self.label_end[b] = NONE;
        self.blossom_base[b] = NONE;
        self.best_edge[b] = NONE;
        self.blossom_childs[b] = Vec::new();
        self.blossom_endps[b] = Vec::new();
        self.blossom_best_edges[b] = Vec::new();
        self.unused_blossoms.push(b);
    }

    /// Swap matched and unmatched edges along the alternating path inside
    /// blossom `b` from vertex `v` to the base; `v` becomes the new base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossom_parent[t] != b {
            t = self.blossom_parent[t];
        }
        if t >= self.n {
            self.augment_blossom(t, v);
        }
        let i = self.blossom_childs[b]
            .iter()
            .position(|&c| c == t)
            .expect("sub-blossom in parent");
        let mut j = i as i64;
        let (jstep, endp_trick): (i64, usize) = if i % 2 == 1 { (1, 0) } else { (-1, 1) };
        if i % 2 == 1 {
            j -= self.blossom_childs[b].len() as i64;
        }
        while j != 0 {
            j += jstep;
            let t1 = self.child_at(b, j);
            let p = self.endp_at(b, j - endp_trick as i64) ^ endp_trick;
            if t1 >= self.n {
                self.augment_blossom(t1, self.endpoint[p]);
            }
            j += jstep;
            let t2 = self.child_at(b, j);
            if t2 >= self.n {
                self.augment_blossom(t2, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossom_childs[b].rotate_left(i);
        self.blossom_endps[b].rotate_left(i);
        self.blossom_base[b] = self.blossom_base[self.blossom_childs[b][0]];
        debug_assert_eq!(self.blossom_base[b], v);
    }

    /// Augment the matching along the path through tight edge `k`.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.in_blossom[s];
                debug_assert_eq!(self.label[bs], 1);
                debug_assert_eq!(self.label_end[bs], self.mate[self.blossom_base[bs]]);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.label_end[bs] == NONE {
                    break; // reached a single vertex
                }
                let t = self.endpoint[self.label_end[bs]];
                let bt = self.in_blossom[t];
                debug_assert_eq!(self.label[bt], 2);
                debug_assert!(self.label_end[bt] != NONE);
                s = self.endpoint[self.label_end[bt]];
                let j = self.endpoint[self.label_end[bt] ^ 1];
                debug_assert_eq!(self.blossom_base[bt], t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.label_end[bt];
                p = self.label_end[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _stage in 0..self.n {
            self.label = vec![0; 2 * self.n];
            self.best_edge = vec![NONE; 2 * self.n];
            for b in self.n..2 * self.n {
                self.blossom_best_edges[b] = Vec::new();
            }
            self.allow_edge = vec![false; self.edges.len()];
            self.queue = Vec::new();

            for v in 0..self.n {
                if self.mate[v] == NONE && self.label[self.in_blossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }

            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.in_blossom[v]], 1);
                    let neighbors = self.neighb_end[v].clone();
                    for p in neighbors {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.in_blossom[v] == self.in_blossom[w] {
                            continue; // internal to a blossom
                        }
                        let mut kslack = 0;
                        if !self.allow_edge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allow_edge[k] = true;
                            }
                        }
                        if self.allow_edge[k] {
                            if self.label[self.in_blossom[w]] == 0 {
                                self.assign_label(w, 2, p ^ 1);
                            } else if self.label[self.in_blossom[w]] == 1 {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == 0 {
                                debug_assert_eq!(self.label[self.in_blossom[w]], 2);
                                self.label[w] = 2;
                                self.label_end[w] = p ^ 1;
                            }
                        } else if self.label[self.in_blossom[w]] == 1 {
                            let b = self.in_blossom[v];
                            if self.best_edge[b] == NONE
                                || kslack < self.slack(self.best_edge[b])
                            {
                                self.best_edge[b] = k;
                            }
                        } else if self.label[w] == 0
                            && (self.best_edge[w] == NONE
                                || kslack < self.slack(self.best_edge[w]))
                        {
                            self.best_edge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }

                if augmented {
                    break;
                }

                // no augmenting path under the current duals: pump slack
                let mut delta_type = -1;
                let mut delta: Weight = 0;
                let mut delta_edge = NONE;
                let mut delta_blossom = NONE;

                if !self.max_cardinality {
                    delta_type = 1;
                    delta = self.dual_var[..self.n].iter().copied().min().unwrap_or(0);
                }

                for v in 0..self.n {
                    if self.label[self.in_blossom[v]] == 0 && self.best_edge[v] != NONE {
                        let d = self.slack(self.best_edge[v]);
                        if delta_type == -1 || d < delta {
                            delta = d;
                            delta_type = 2;
                            delta_edge = self.best_edge[v];
                        }
                    }
                }

                for b in 0..2 * self.n {
                    if self.blossom_parent[b] == NONE
                        && self.label[b] == 1
                        && self.best_edge[b] != NONE
                    {
                        let kslack = self.slack(self.best_edge[b]);
                        debug_assert_eq!(kslack % 2, 0, "odd slack between S-blossoms");
                        let d = kslack / 2;
                        if delta_type == -1 || d < delta {
                            delta = d;
                            delta_type = 3;
                            delta_edge = self.best_edge[b];
                        }
                    }
                }

                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE
                        && self.blossom_parent[b] == NONE
                        && self.label[b] == 2
                        && (delta_type == -1 || self.dual_var[b] < delta)
                    {
                        delta = self.dual_var[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }

                if delta_type == -1 {
                    // max-cardinality optimum; final update keeps duals
                    // verifiable
                    debug_assert!(self.max_cardinality);
                    delta_type = 1;
                    delta = self.dual_var[..self.n].iter().copied().min().unwrap_or(0).max(0);
                }

                for v in 0..self.n {
                    match self.label[self.in_blossom[v]] {
                        0 => {}
                        1 => self.dual_var[v] -= delta,
                        2 => self.dual_var[v] += delta,
                        _ => unreachable!("unexpected vertex label"),
                    }
                }
                for b in self.n..2 * self.n {
                    if self.blossom_base[b] != NONE && self.blossom_parent[b] == NONE {
                        match self.label[b] {
                            0 => {}
                            1 => self.dual_var[b] += delta,
                            2 => self.dual_var[b] -= delta,
                            _ => unreachable!("unexpected blossom label"),
                        }
                    }
                }

                match delta_type {
                    1 => break, // optimum reached
                    2 => {
                        self.allow_edge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.in_blossom[i]] == 0 {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.in_blossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allow_edge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        debug_assert_eq!(self.label[self.in_blossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => self.expand_blossom(delta_blossom, false),
                    _ => unreachable!("unexpected delta type"),
                }
            }

            if !augmented {
                break;
            }

            for b in self.n..2 * self.n {
                if self.blossom_parent[b] == NONE
                    && self.blossom_base[b] != NONE
                    && self.label[b] == 1
                    && self.dual_var[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Complementary-slackness certificate for the computed matching.
    fn verify_optimum(&self) {
        let vdual_offset = if self.max_cardinality {
            (-self.dual_var[..self.n].iter().copied().min().unwrap_or(0)).max(0)
        } else {
            0
        };
        assert!(self.dual_var[..self.n].iter().all(|&d| d + vdual_offset >= 0));
        assert!(self.dual_var[self.n..].iter().all(|&d| d >= 0));
        for k in 0..self.edges.len() {
            let (i, j, w) = self.edges[k];
            let mut s = self.dual_var[i] + self.dual_var[j] - 2 * w;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossom_parent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossom_parent[*iblossoms.last().unwrap()]);
            }
            while self.blossom_parent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossom_parent[*jblossoms.last().unwrap()]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (&bi, &bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dual_var[bi];
            }
            assert!(s >= 0, "negative slack in optimality certificate");
            let matched = self.mate[i] / 2 == k || self.mate[j] / 2 == k;
            if matched {
                assert_eq!(self.mate[i] / 2, k);
                assert_eq!(self.mate[j] / 2, k);
                assert_eq!(s, 0, "matched edge with positive slack");
            }
        }
        for v in 0..self.n {
            assert!(self.mate[v] != NONE || self.dual_var[v] + vdual_offset == 0);
        }
        for b in self.n..2 * self.n {
            if self.blossom_base[b] != NONE && self.dual_var[b] > 0 {
                assert_eq!(self.blossom_endps[b].len() % 2, 1);
                for (ix, &p) in self.blossom_endps[b].iter().enumerate() {
                    if ix % 2 == 1 {
                        assert_eq!(self.mate[self.endpoint[p]], p ^ 1);
                        assert_eq!(self.mate[self.endpoint[p ^ 1]], p);
                    }
                }
            }
        }
    }

    /// `mate[v]` as a partner vertex (or `NONE`).
    fn mate_vertices(&self) -> Vec<usize> {
        let mut out = vec![NONE; self.n];
        for v in 0..self.n {
            if self.mate[v] != NONE {
                out[v] = self.endpoint[self.mate[v]];
            }
        }
        for v in 0..self.n {
            debug_assert!(out[v] == NONE || out[out[v]] == v);
        }
        out
    }
}
