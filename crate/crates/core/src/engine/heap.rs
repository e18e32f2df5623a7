use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::tuples::HeapKey;

/// Min-heap of work items keyed by `[wt, x, y]`. Items sharing the minimum
/// key come out together, in insertion order.
#[derive(Debug)]
pub struct WorkHeap<T> {
    order: BinaryHeap<Reverse<(HeapKey, usize)>>,
    slots: Vec<Option<T>>,
    ops: u64,
}

impl<T> Default for WorkHeap<T> {
    fn default() -> Self {
        WorkHeap {
            order: BinaryHeap::new(),
            slots: Vec::new(),
            ops: 0,
        }
    }
}

impl<T> WorkHeap<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: HeapKey, item: T) {
        let slot = self.slots.len();
        self.slots.push(Some(item));
        self.order.push(Reverse((key, slot)));
        self.ops += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Pops every item carrying the current minimum key.
    pub fn pop_min_group(&mut self) -> Option<(HeapKey, Vec<T>)> {
        let Reverse((key, _)) = *self.order.peek()?;
        let mut group = Vec::new();
        while let Some(&Reverse((k, slot))) = self.order.peek() {
            if k != key {
                break;
            }
            self.order.pop();
            self.ops += 1;
            group.push(self.slots[slot].take().expect("slot popped twice"));
        }
        Some((key, group))
    }

    /// Pushes plus pops so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }
}
