//! Decremental vertex updates: cleanup strips every locally shortest path
//! through the updated vertex, fixup rebuilds the new ones under the
//! changed weights.

mod accum;
mod cleanup;
mod fixup;
mod heap;

use std::collections::HashSet;

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{apply_weights, validate_update, Graph, GraphError, UpdateOp, VertexId};
use crate::tuples::{Tuple, TupleError, TupleSystem};

pub use accum::AccumulationBuffer;
pub use heap::WorkHeap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateStats {
    /// Triples generated (and decremented) by cleanup.
    pub triples_touched_cleanup: u64,
    /// Triples generated or promoted to shortest by fixup.
    pub triples_touched_fixup: u64,
    /// Tuples that entered P from a zero count during fixup.
    pub new_triples_created: u64,
    pub heap_ops: u64,
}

impl UpdateStats {
    pub fn merge(&mut self, other: &UpdateStats) {
        self.triples_touched_cleanup += other.triples_touched_cleanup;
        self.triples_touched_fixup += other.triples_touched_fixup;
        self.new_triples_created += other.new_triples_created;
        self.heap_ops += other.heap_ops;
    }
}

/// Generation log of one pass, used to check that no (tuple, weight) enters
/// a work heap twice.
#[derive(Clone, Debug, Default)]
pub struct PassAudit {
    seen: HashSet<(Tuple, OrderedFloat<f64>)>,
    pub generated: u64,
    pub duplicates: Vec<(Tuple, f64)>,
}

impl PassAudit {
    fn record(&mut self, tuple: Tuple, weight: f64) {
        self.generated += 1;
        if !self.seen.insert((tuple, OrderedFloat(weight))) {
            self.duplicates.push((tuple, weight));
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct UpdateAudit {
    pub cleanup: PassAudit,
    pub fixup: PassAudit,
    /// `(x, y, wt)` for every pair's first extraction in fixup.
    pub first_extractions: Vec<(VertexId, VertexId, f64)>,
}

#[derive(Debug, Error)]
pub enum UpdateError {
    #[error(transparent)]
    Invalid(#[from] GraphError),
    #[error("engine invariant violated: {0}")]
    Engine(#[from] TupleError),
}

/// Removes every path through `v` from `ts`, which must describe `g`.
pub fn cleanup(ts: &mut TupleSystem, g: &Graph, v: VertexId) -> Result<UpdateStats, TupleError> {
    let mut stats = UpdateStats::default();
    cleanup::run(ts, g, v, &mut stats, &mut PassAudit::default())?;
    Ok(stats)
}

/// Restores the paths of `g_new` that cleanup of `v` removed or that became
/// shortest. Starts a new update sequence number for the paths-through-v
/// stamps.
pub fn fixup(ts: &mut TupleSystem, g_new: &Graph, v: VertexId) -> Result<UpdateStats, TupleError> {
    ts.begin_update();
    let mut stats = UpdateStats::default();
    let mut audit = UpdateAudit::default();
    fixup::run(ts, g_new, v, &mut stats, &mut audit)?;
    Ok(stats)
}

/// Validates `op`, then runs cleanup, reweighting and fixup. Returns the
/// updated graph.
pub fn decremental_update(
    ts: &mut TupleSystem,
    g: &Graph,
    op: &UpdateOp,
) -> Result<(Graph, UpdateStats), UpdateError> {
    let (g_new, stats, _) = decremental_update_audited(ts, g, op)?;
    Ok((g_new, stats))
}

pub fn decremental_update_audited(
    ts: &mut TupleSystem,
    g: &Graph,
    op: &UpdateOp,
) -> Result<(Graph, UpdateStats, UpdateAudit), UpdateError> {
    validate_update(g, op)?;
    ts.begin_update();
    let mut stats = UpdateStats::default();
    let mut audit = UpdateAudit::default();
    cleanup::run(ts, g, op.vertex, &mut stats, &mut audit.cleanup)?;
    let g_new = apply_weights(g, op);
    fixup::run(ts, &g_new, op.vertex, &mut stats, &mut audit)?;
    Ok((g_new, stats, audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures::FIXTURE_G, parse_graph};
    use crate::oracle::build_tuple_system;
    use crate::graph::Edge;

    fn fixture_update(g: &Graph) -> UpdateOp {
        let id = |l: &str| g.vertex(l).unwrap();
        UpdateOp::new(id("v"))
            .set_weight(id("a1"), id("v"), 10.0)
            .set_weight(id("a2"), id("v"), 5.0)
    }

    #[test]
    fn cleanup_on_fixture() {
        let g = parse_graph(FIXTURE_G).unwrap();
        let mut ts = build_tuple_system(&g);
        let id = |l: &str| g.vertex(l).unwrap();
        let (x, a2, a3, b, y, b1, v) = (id("x"), id("a2"), id("a3"), id("b"), id("y"), id("b1"), id("v"));
        let stats = cleanup(&mut ts, &g, v).unwrap();
        let pxy: Vec<_> = ts.p_triples(x, y).iter().map(|t| (t.tuple, t.weight, t.count)).collect();
        assert_eq!(
            pxy,
            vec![(Tuple::new(x, a2, b, y), 4.0, 1), (Tuple::new(x, a3, b, y), 4.0, 1)]
        );
        assert!(ts.p_is_empty(x, b1));
        assert!(ts.pstar_is_empty(x, b1));
        assert_eq!(ts.sigma(x, y), 2);
        assert!(stats.triples_touched_cleanup > 0);
        assert_eq!(ts.marked_count(), 0);
        assert!(ts.l_get(v, Edge::new(b1, id("y1"))).is_empty());
    }

    #[test]
    fn cleanup_of_isolated_vertex_changes_nothing() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let mut ts = build_tuple_system(&g);
        let before = ts.dump(&g);
        let stats = cleanup(&mut ts, &g, VertexId(2)).unwrap();
        assert_eq!(ts.dump(&g), before);
        assert_eq!(stats.triples_touched_cleanup, 0);
        assert_eq!(stats.heap_ops, 2);
    }

    #[test]
    fn cleanup_three_vertex_path() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let mut ts = build_tuple_system(&g);
        assert_eq!(ts.triple_count(), 3);
        cleanup(&mut ts, &g, VertexId(1)).unwrap();
        assert_eq!(ts.dump(&g), "");
    }

    #[test]
    fn fixture_update_matches_rebuild() {
        let g = parse_graph(FIXTURE_G).unwrap();
        let mut ts = build_tuple_system(&g);
        let (g2, stats, audit) = decremental_update_audited(&mut ts, &g, &fixture_update(&g)).unwrap();
        assert_eq!(ts.dump(&g2), build_tuple_system(&g2).dump(&g2));
        assert!(audit.cleanup.duplicates.is_empty());
        assert!(audit.fixup.duplicates.is_empty());
        assert!(stats.new_triples_created > 0);
        ts.check_structure().unwrap();
    }

    #[test]
    fn identity_update_is_bit_equal() {
        let g = parse_graph(FIXTURE_G).unwrap();
        let mut ts = build_tuple_system(&g);
        let before = ts.dump(&g);
        let op = UpdateOp::new(g.vertex("v").unwrap());
        let (g2, _) = decremental_update(&mut ts, &g, &op).unwrap();
        assert_eq!(ts.dump(&g2), before);
    }

    #[test]
    fn deleting_all_edges_of_v() {
        let g = parse_graph(FIXTURE_G).unwrap();
        let mut ts = build_tuple_system(&g);
        let v = g.vertex("v").unwrap();
        let mut op = UpdateOp::new(v);
        for (u, _) in g.in_edges(v) {
            op = op.delete(u, v);
        }
        for (u, _) in g.out_edges(v) {
            op = op.delete(v, u);
        }
        let (g2, _) = decremental_update(&mut ts, &g, &op).unwrap();
        assert_eq!(g2.in_degree(v) + g2.out_degree(v), 0);
        assert_eq!(ts.dump(&g2), build_tuple_system(&g2).dump(&g2));
        let (a1, b1) = (g.vertex("a1").unwrap(), g.vertex("b1").unwrap());
        assert_eq!(ts.distance(a1, b1), 4.0);
        assert_eq!(ts.sigma(a1, b1), 2);
    }

    #[test]
    fn rejects_invalid_update_without_touching_state() {
        let g = parse_graph(FIXTURE_G).unwrap();
        let mut ts = build_tuple_system(&g);
        let before = ts.dump(&g);
        let id = |l: &str| g.vertex(l).unwrap();
        let op = UpdateOp::new(id("v")).set_weight(id("a1"), id("v"), 0.5);
        assert!(matches!(
            decremental_update(&mut ts, &g, &op),
            Err(UpdateError::Invalid(GraphError::WeightDecrease { .. }))
        ));
        assert_eq!(ts.dump(&g), before);
        assert_eq!(ts.update_seq(), 0);
    }
}
