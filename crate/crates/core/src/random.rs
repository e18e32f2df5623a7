//! Seeded random graphs and decremental traces. Weights are multiples of
//! 0.5 in [1, 10], so path sums compare exactly.

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{apply_weights, Graph, UpdateOp, VertexId};

pub type TraceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TraceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn half_weight(rng: &mut TraceRng) -> f64 {
    f64::from(rng.random_range(2u32..=20)) / 2.0
}

/// Each ordered pair becomes an edge with probability `density`.
pub fn random_graph(rng: &mut TraceRng, n: usize, density: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(density) {
                edges.push((i, j, half_weight(rng)));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Exactly `min(m, n(n-1))` distinct edges.
pub fn random_graph_with_edges(rng: &mut TraceRng, n: usize, m: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, half_weight(rng))).collect();
    Graph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Picks a vertex with incident edges (any vertex if none) and raises or
/// deletes a random non-empty subset of its edges.
pub fn random_update(rng: &mut TraceRng, g: &Graph) -> UpdateOp {
    let busy: Vec<VertexId> = g
        .vertices()
        .filter(|&v| g.in_degree(v) + g.out_degree(v) > 0)
        .collect();
    if busy.is_empty() {
        let v = VertexId::from_index(rng.random_range(0..g.vertex_count().max(1)));
        return UpdateOp::new(v);
    }
    let v = busy[rng.random_range(0..busy.len())];
    let incident: Vec<(VertexId, VertexId, f64)> = g
        .in_edges(v)
        .map(|(u, w)| (u, v, w))
        .chain(g.out_edges(v).map(|(u, w)| (v, u, w)))
        .collect();
    let forced = rng.random_range(0..incident.len());
    let mut op = UpdateOp::new(v);
    for (i, &(s, t, w)) in incident.iter().enumerate() {
        if i != forced && !rng.random_bool(0.5) {
            continue;
        }
        if rng.random_bool(0.2) {
            op = op.delete(s, t);
        } else {
            let raise = f64::from(rng.random_range(1u32..=6)) / 2.0;
            op = op.set_weight(s, t, w + raise);
        }
    }
    op
}

/// `len` updates, each valid for the graph produced by its predecessors.
pub fn random_trace(rng: &mut TraceRng, g: &Graph, len: usize) -> Vec<UpdateOp> {
    let mut cur = g.clone();
    let mut ops = Vec::with_capacity(len);
    for _ in 0..len {
        let op = random_update(rng, &cur);
        cur = apply_weights(&cur, &op);
        ops.push(op);
    }
    ops
}
