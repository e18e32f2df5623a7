use std::collections::HashSet;

use super::{AccumulationBuffer, UpdateAudit, UpdateStats, WorkHeap};
use crate::graph::{Graph, VertexId};
use crate::tuples::{HeapKey, Tuple, TupleError, TupleSystem};

struct Pass<'a> {
    ts: &'a mut TupleSystem,
    heap: WorkHeap<Tuple>,
    queued: HashSet<Tuple>,
    seq: u64,
    stats: &'a mut UpdateStats,
    audit: &'a mut UpdateAudit,
}

impl Pass<'_> {
    fn enqueue(&mut self, tuple: Tuple, weight: f64) {
        if self.queued.insert(tuple) {
            self.heap
                .push(HeapKey::new(weight, tuple.x(), tuple.y()), tuple);
        }
    }

    fn emit(&mut self, tuple: Tuple, weight: f64, count: u64, paths: u64) -> Result<(), TupleError> {
        self.audit.fixup.record(tuple, weight);
        self.stats.triples_touched_fixup += 1;
        let ts = &mut *self.ts;
        let existed = ts.get(&tuple).is_some();
        ts.p_increment(tuple, weight, count, paths, self.seq)?;
        if !existed {
            ts.l_add(tuple.a(), tuple.last, tuple.x());
            ts.r_add(tuple.first, tuple.b(), tuple.y());
            self.stats.new_triples_created += 1;
        }
        ts.mark(tuple);
        self.enqueue(tuple, weight);
        Ok(())
    }

    fn promote(&mut self, tuple: Tuple, weight: f64, count: u64) -> Result<(), TupleError> {
        self.stats.triples_touched_fixup += 1;
        let ts = &mut *self.ts;
        ts.pstar_increment(tuple, weight, count)?;
        ts.lstar_add(tuple.a(), tuple.y(), tuple.x());
        ts.rstar_add(tuple.x(), tuple.b(), tuple.y());
        Ok(())
    }
}

pub(super) fn run(
    ts: &mut TupleSystem,
    g: &Graph,
    v: VertexId,
    stats: &mut UpdateStats,
    audit: &mut UpdateAudit,
) -> Result<(), TupleError> {
    let n = ts.vertex_count();
    ts.clear_marks();
    let seq = ts.update_seq();
    let mut pass = Pass {
        ts,
        heap: WorkHeap::new(),
        queued: HashSet::new(),
        seq,
        stats,
        audit,
    };

    for (u, w) in g.in_edges(v) {
        let tuple = Tuple::single_edge(u, v);
        pass.audit.fixup.record(tuple, w);
        pass.stats.triples_touched_fixup += 1;
        if pass.ts.p_increment(tuple, w, 1, 1, seq)? == 1 {
            pass.stats.new_triples_created += 1;
        }
        pass.enqueue(tuple, w);
    }
    for (u, w) in g.out_edges(v) {
        let tuple = Tuple::single_edge(v, u);
        pass.audit.fixup.record(tuple, w);
        pass.stats.triples_touched_fixup += 1;
        if pass.ts.p_increment(tuple, w, 1, 1, seq)? == 1 {
            pass.stats.new_triples_created += 1;
        }
        pass.enqueue(tuple, w);
    }

    for x in 0..n {
        for y in 0..n {
            let (x, y) = (VertexId::from_index(x), VertexId::from_index(y));
            if let Some(t) = pass.ts.min_weight_triple(x, y) {
                let (tuple, weight) = (t.tuple, t.weight);
                pass.enqueue(tuple, weight);
            }
        }
    }

    let mut done = vec![false; n * n];
    let mut by_last = AccumulationBuffer::new(n);
    let mut by_first = AccumulationBuffer::new(n);
    let mut promoted: Vec<(Tuple, u64, u64)> = Vec::new();

    while let Some((key, group)) = pass.heap.pop_min_group() {
        let (wt, x, y) = (key.weight.0, key.x, key.y);
        let pair = x.index() * n + y.index();
        if done[pair] {
            continue;
        }
        done[pair] = true;
        pass.audit.first_extractions.push((x, y, wt));

        promoted.clear();
        if pass.ts.pstar_is_empty(x, y) {
            for tuple in pass.ts.p_tuples_at(x, y, wt) {
                let t = *pass.ts.get(&tuple).expect("indexed tuple missing");
                pass.promote(tuple, wt, t.count)?;
                promoted.push((tuple, t.count, t.paths_through(seq)));
            }
        } else {
            for tuple in group {
                let paths = pass
                    .ts
                    .get(&tuple)
                    .ok_or(TupleError::UnknownTuple(tuple))?
                    .paths_through(seq);
                if paths > 0 {
                    pass.promote(tuple, wt, paths)?;
                    promoted.push((tuple, paths, paths));
                }
            }
        }
        for &(tuple, count, paths) in &promoted {
            by_last.add(tuple.b(), count, paths);
            by_first.add(tuple.a(), count, paths);
        }

        for (b, fcount, fpaths) in by_last.drain() {
            for xp in pass.ts.lstar_get(x, b) {
                if xp == y {
                    continue;
                }
                let tuple = Tuple::new(xp, x, b, y);
                if pass.ts.is_marked(&tuple) {
                    continue;
                }
                let w = g.weight(xp, x).expect("L* member without edge");
                let paths = if xp == v { fcount } else { fpaths };
                pass.emit(tuple, wt + w, fcount, paths)?;
            }
        }
        for (a, fcount, fpaths) in by_first.drain() {
            for yp in pass.ts.rstar_get(a, y) {
                if yp == x {
                    continue;
                }
                let tuple = Tuple::new(x, a, y, yp);
                if pass.ts.is_marked(&tuple) {
                    continue;
                }
                let w = g.weight(y, yp).expect("R* member without edge");
                let paths = if yp == v { fcount } else { fpaths };
                pass.emit(tuple, wt + w, fcount, paths)?;
            }
        }
    }

    pass.stats.heap_ops += pass.heap.ops();
    pass.ts.clear_marks();
    Ok(())
}
