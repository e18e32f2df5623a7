use crate::graph::VertexId;

/// Per-neighbour sums of (count, paths through v) for one min-key round.
/// Only touched slots are visited when draining, so a round costs O(touched).
#[derive(Debug)]
pub struct AccumulationBuffer {
    counts: Vec<u64>,
    paths: Vec<u64>,
    touched: Vec<VertexId>,
}

impl AccumulationBuffer {
    pub fn new(n: usize) -> Self {
        AccumulationBuffer {
            counts: vec![0; n],
            paths: vec![0; n],
            touched: Vec::new(),
        }
    }

    pub fn add(&mut self, slot: VertexId, count: u64, paths: u64) {
        let i = slot.index();
        if self.counts[i] == 0 && self.paths[i] == 0 {
            self.touched.push(slot);
        }
        self.counts[i] += count;
        self.paths[i] += paths;
    }

    /// Returns `(slot, count, paths)` in first-touch order and re-zeroes.
    pub fn drain(&mut self) -> Vec<(VertexId, u64, u64)> {
        let mut out = Vec::with_capacity(self.touched.len());
        for slot in self.touched.drain(..) {
            let i = slot.index();
            out.push((slot, self.counts[i], self.paths[i]));
            self.counts[i] = 0;
            self.paths[i] = 0;
        }
        out
    }

    pub fn is_clear(&self) -> bool {
        self.touched.is_empty() && self.counts.iter().chain(&self.paths).all(|&c| c == 0)
    }
}
