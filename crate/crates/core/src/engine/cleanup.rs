use super::{AccumulationBuffer, PassAudit, UpdateStats, WorkHeap};
use crate::graph::{Edge, Graph, VertexId};
use crate::tuples::{HeapKey, Tuple, TupleError, TupleSystem};

enum Item {
    /// The zero-length path at the updated vertex.
    Vertex,
    /// A generated triple and how many of its paths pass through v.
    Through { tuple: Tuple, count: u64 },
}

struct Pass<'a> {
    ts: &'a mut TupleSystem,
    heap: WorkHeap<Item>,
    stats: &'a mut UpdateStats,
    audit: &'a mut PassAudit,
}

impl Pass<'_> {
    fn emit(&mut self, tuple: Tuple, weight: f64, count: u64) -> Result<(), TupleError> {
        self.audit.record(tuple, weight);
        self.stats.triples_touched_cleanup += 1;
        self.heap.push(
            HeapKey::new(weight, tuple.x(), tuple.y()),
            Item::Through { tuple, count },
        );
        let ts = &mut *self.ts;
        if ts.p_decrement(tuple, weight, count)? > 0 {
            ts.mark(tuple);
        } else if !tuple.is_single_edge() {
            ts.l_remove(tuple.a(), tuple.last, tuple.x())?;
            ts.r_remove(tuple.first, tuple.b(), tuple.y())?;
        }
        if ts.pstar_contains(&tuple) {
            ts.pstar_decrement(tuple, weight, count)?;
            let (x, a, b, y) = (tuple.x(), tuple.a(), tuple.b(), tuple.y());
            if !ts.pstar_has_first(x, y, a) {
                ts.lstar_remove(a, y, x)?;
            }
            if !ts.pstar_has_last(x, y, b) {
                ts.rstar_remove(x, b, y)?;
            }
        }
        Ok(())
    }
}

pub(super) fn run(
    ts: &mut TupleSystem,
    g: &Graph,
    v: VertexId,
    stats: &mut UpdateStats,
    audit: &mut PassAudit,
) -> Result<(), TupleError> {
    let n = ts.vertex_count();
    ts.clear_marks();
    let mut pass = Pass {
        ts,
        heap: WorkHeap::new(),
        stats,
        audit,
    };
    pass.heap.push(HeapKey::new(0.0, v, v), Item::Vertex);
    let mut by_last = AccumulationBuffer::new(n);
    let mut by_first = AccumulationBuffer::new(n);

    while let Some((key, group)) = pass.heap.pop_min_group() {
        let (wt, x, y) = (key.weight.0, key.x, key.y);
        for item in group {
            match item {
                Item::Vertex => {
                    for (u, w) in g.in_edges(v) {
                        pass.emit(Tuple::single_edge(u, v), w, 1)?;
                    }
                    for (u, w) in g.out_edges(v) {
                        pass.emit(Tuple::single_edge(v, u), w, 1)?;
                    }
                }
                Item::Through { tuple, count } => {
                    by_last.add(tuple.b(), count, 0);
                    by_first.add(tuple.a(), count, 0);
                }
            }
        }

        for (b, fcount, _) in by_last.drain() {
            let last = Edge::new(b, y);
            for xp in pass.ts.l_get(x, last) {
                let tuple = Tuple::new(xp, x, b, y);
                if pass.ts.is_marked(&tuple) {
                    continue;
                }
                let w = g.weight(xp, x).expect("L member without edge");
                pass.emit(tuple, wt + w, fcount)?;
            }
        }
        for (a, fcount, _) in by_first.drain() {
            let first = Edge::new(x, a);
            for yp in pass.ts.r_get(first, y) {
                let tuple = Tuple::new(x, a, y, yp);
                if pass.ts.is_marked(&tuple) {
                    continue;
                }
                let w = g.weight(y, yp).expect("R member without edge");
                pass.emit(tuple, wt + w, fcount)?;
            }
        }
    }

    pass.stats.heap_ops += pass.heap.ops();
    pass.ts.clear_marks();
    Ok(())
}
