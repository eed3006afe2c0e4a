//! Seeded instance generators for conservative graph families and BFP
//! digraphs.
//!
//! All randomness comes from a ChaCha8 stream keyed by the 64-bit seed, so
//! identical parameters reproduce identical instances on every platform.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::graph::{Digraph, EdgeSet, TerminalSet, UndirectedGraph, VertexId, Weight};
use crate::tjoin::min_tjoin_nonneg;

/// Size, weight-magnitude and seed parameters of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    /// Bound on the magnitude of generated weights.
    pub wmax: Weight,
    pub seed: u64,
}

fn rng_for(spec: &GenSpec) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(spec.seed)
}

/// Random endpoint pair with `u != v`.
fn random_pair(rng: &mut ChaCha8Rng, n: usize) -> (VertexId, VertexId) {
    let u = rng.random_range(1..=n);
    let mut v = rng.random_range(1..=n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// Random edge skeleton: a random tree first when `m >= n - 1` (so the
/// result is usually connected), uniform pairs for the rest.
fn random_edges(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<(VertexId, VertexId)> {
    let mut edges = Vec::with_capacity(m);
    if n >= 2 && m >= n - 1 {
        for v in 2..=n {
            let u = rng.random_range(1..v);
            edges.push((u, v));
        }
    }
    while edges.len() < m {
        if n < 2 {
            break;
        }
        edges.push(random_pair(rng, n));
    }
    edges
}

/// Random conservative graph: draw non-negative weights and an even
/// terminal set per component, then flip a minimum T-join. The flipped
/// weights are conservative by construction.
pub fn gen_conservative(spec: &GenSpec) -> Result<UndirectedGraph> {
    let mut rng = rng_for(spec);
    let skeleton = random_edges(&mut rng, spec.n, spec.m);
    let weighted: Vec<(VertexId, VertexId, Weight)> = skeleton
        .iter()
        .map(|&(u, v)| (u, v, rng.random_range(0..=spec.wmax.max(0))))
        .collect();
    let base = UndirectedGraph::new(spec.n, &weighted)?;

    // even terminal count within every component keeps the join feasible
    let labels = base.component_labels();
    let mut by_component: std::collections::BTreeMap<VertexId, Vec<VertexId>> = Default::default();
    for v in 1..=spec.n {
        by_component.entry(labels[v]).or_default().push(v);
    }
    let mut terminals = TerminalSet::new();
    for members in by_component.values() {
        let mut picked: Vec<VertexId> =
            members.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
        if picked.len() % 2 == 1 {
            let last = *picked.last().unwrap();
            if members.last() == Some(&last) {
                picked.pop();
            } else {
                picked.push(*members.last().unwrap());
            }
        }
        for v in picked {
            terminals.insert(v);
        }
    }

    let flip = min_tjoin_nonneg(&base, &terminals)?.join;
    base.weight_flip(&flip)
}

/// Random ±1-weighted graph whose negative edges form a matching; any
/// cycle of length c holds at most ⌊c/2⌋ pairwise non-adjacent negative
/// edges, so every cycle weight is non-negative.
pub fn gen_matching_negatives(spec: &GenSpec) -> Result<UndirectedGraph> {
    let mut rng = rng_for(spec);
    let skeleton = random_edges(&mut rng, spec.n, spec.m);
    let mut weights = vec![1i64; skeleton.len()];

    let mut order: Vec<usize> = (0..skeleton.len()).collect();
    // Fisher-Yates over edge indices
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut used = vec![false; spec.n + 1];
    for idx in order {
        let (u, v) = skeleton[idx];
        if !used[u] && !used[v] && rng.random_bool(0.5) {
            weights[idx] = -1;
            used[u] = true;
            used[v] = true;
        }
    }

    let edges: Vec<(VertexId, VertexId, Weight)> = skeleton
        .iter()
        .zip(&weights)
        .map(|(&(u, v), &w)| (u, v, w))
        .collect();
    UndirectedGraph::new(spec.n, &edges)
}

/// Random digraph with designated distinct terminals `s` and `t`.
pub fn gen_bfp(spec: &GenSpec) -> Result<(Digraph, VertexId, VertexId)> {
    assert!(spec.n >= 2, "a BFP instance needs two distinct terminals");
    let mut rng = rng_for(spec);
    let arcs: Vec<(VertexId, VertexId)> =
        (0..spec.m).map(|_| random_pair(&mut rng, spec.n)).collect();
    let d = Digraph::new(spec.n, &arcs)?;
    let (s, t) = random_pair(&mut rng, spec.n);
    Ok((d, s, t))
}

/// The edge set a conservative instance was flipped on, for reporting.
pub fn negative_edge_set(g: &UndirectedGraph) -> EdgeSet {
    g.negative_edges()
}
