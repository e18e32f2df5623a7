use crate::centrality::{bc_from_dags, BCScores};
use crate::engine::{decremental_update_audited, UpdateAudit, UpdateError, UpdateStats};
use crate::graph::{Graph, UpdateOp};
use crate::oracle::{assert_equivalent, build_tuple_system, DiffReport};
use crate::tuples::TupleSystem;

/// A graph together with its maintained tuple system.
#[derive(Clone, Debug)]
pub struct Session {
    graph: Graph,
    ts: TupleSystem,
}

impl Session {
    pub fn new(graph: Graph) -> Self {
        let ts = build_tuple_system(&graph);
        Session { graph, ts }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tuples(&self) -> &TupleSystem {
        &self.ts
    }

    /// Applies one decremental update. On error the session is unchanged
    /// unless the error is an engine invariant violation.
    pub fn apply(&mut self, op: &UpdateOp) -> Result<UpdateStats, UpdateError> {
        self.apply_audited(op).map(|(stats, _)| stats)
    }

    pub fn apply_audited(&mut self, op: &UpdateOp) -> Result<(UpdateStats, UpdateAudit), UpdateError> {
        let (g, stats, audit) = decremental_update_audited(&mut self.ts, &self.graph, op)?;
        self.graph = g;
        Ok((stats, audit))
    }

    pub fn dump(&self) -> String {
        self.ts.dump(&self.graph)
    }

    pub fn betweenness(&self) -> BCScores {
        bc_from_dags(&self.ts)
    }

    pub fn verify(&self) -> Result<(), DiffReport> {
        assert_equivalent(&self.ts, &self.graph)
    }
}
