//! The tuple system: locally shortest path tuples stored as weighted,
//! counted triples, their shortest-path subset, the four extension-set
//! families and the per-pass Marked-Tuples dictionary.
//!
//! A tuple `(xa, by)` stands for every path `x -> a ~> b -> y` whose middle
//! `a ~> b` is a shortest path; its weight is `w(x,a) + d(a,b) + w(b,y)` and
//! its count is the number of shortest `a ~> b` paths. A single edge `x -> y`
//! is the tuple whose first and last edge coincide, keyed `(x, y, x, y)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use ordered_float::OrderedFloat;
use thiserror::Error;

use crate::graph::{Edge, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple {
    pub first: Edge,
    pub last: Edge,
}

impl Tuple {
    /// The tuple `(xa, by)`.
    pub fn new(x: VertexId, a: VertexId, b: VertexId, y: VertexId) -> Self {
        Tuple {
            first: Edge::new(x, a),
            last: Edge::new(b, y),
        }
    }

    pub fn single_edge(x: VertexId, y: VertexId) -> Self {
        let e = Edge::new(x, y);
        Tuple { first: e, last: e }
    }

    #[inline]
    pub fn x(&self) -> VertexId {
        self.first.source
    }
    #[inline]
    pub fn a(&self) -> VertexId {
        self.first.target
    }
    #[inline]
    pub fn b(&self) -> VertexId {
        self.last.source
    }
    #[inline]
    pub fn y(&self) -> VertexId {
        self.last.target
    }

    pub fn is_single_edge(&self) -> bool {
        self.first == self.last
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{},{}{})", self.x(), self.a(), self.b(), self.y())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Triple {
    pub tuple: Tuple,
    pub weight: f64,
    pub count: u64,
    /// Paths of this triple through the vertex of update `update_num`.
    pub paths_thru_v: u64,
    pub update_num: u64,
}

impl Triple {
    /// `paths_thru_v` if stamped by update `seq`, otherwise 0.
    pub fn paths_through(&self, seq: u64) -> u64 {
        if self.update_num == seq {
            self.paths_thru_v
        } else {
            0
        }
    }
}

/// Work-heap priority `[wt, x, y]`, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeapKey {
    pub weight: OrderedFloat<f64>,
    pub x: VertexId,
    pub y: VertexId,
}

impl HeapKey {
    pub fn new(weight: f64, x: VertexId, y: VertexId) -> Self {
        HeapKey {
            weight: OrderedFloat(weight),
            x,
            y,
        }
    }
}

/// Violations of the tuple-system contracts. Each one means the update
/// engine is wrong, never that the input is.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TupleError {
    #[error("unknown tuple {0}")]
    UnknownTuple(Tuple),
    #[error("over-decrement of {tuple}: count {count}, requested {requested}")]
    OverDecrement {
        tuple: Tuple,
        count: u64,
        requested: u64,
    },
    #[error("weight mismatch for {tuple}: stored {stored}, requested {requested}")]
    WeightMismatch {
        tuple: Tuple,
        stored: f64,
        requested: f64,
    },
    #[error("P* count of {tuple} would exceed its P count")]
    StarExceedsP { tuple: Tuple },
    #[error("increment of {0} by zero paths")]
    ZeroIncrement(Tuple),
    #[error("{set}: member {member} missing")]
    MissingMember { set: &'static str, member: VertexId },
}

type PairKey = usize;
type TripleKey = (VertexId, VertexId, VertexId);

#[derive(Clone, Debug, Default)]
struct PairStar {
    /// (a, b) -> (weight, count)
    entries: BTreeMap<(VertexId, VertexId), (f64, u64)>,
    /// (b, a), for last-edge queries.
    by_last: BTreeSet<(VertexId, VertexId)>,
}

#[derive(Clone, Debug)]
pub struct TupleSystem {
    n: usize,
    dict: HashMap<Tuple, Triple>,
    /// Per pair: (weight, a, b) of every LST, weight-ordered.
    p_index: Vec<BTreeSet<(OrderedFloat<f64>, VertexId, VertexId)>>,
    pstar: Vec<PairStar>,
    /// L(x, by) keyed (x, b, y).
    l: HashMap<TripleKey, BTreeSet<VertexId>>,
    /// R(xa, y) keyed (x, a, y).
    r: HashMap<TripleKey, BTreeSet<VertexId>>,
    lstar: Vec<BTreeSet<VertexId>>,
    rstar: Vec<BTreeSet<VertexId>>,
    marked: HashSet<Tuple>,
    update_seq: u64,
}

/// Single-source shortest-path dag read off the tuple system.
#[derive(Clone, Debug, PartialEq)]
pub struct SpDag {
    pub source: VertexId,
    pub dist: Vec<f64>,
    pub sigma: Vec<u64>,
    pub edges: Vec<Edge>,
}

impl TupleSystem {
    pub fn new(n: usize) -> Self {
        TupleSystem {
            n,
            dict: HashMap::new(),
            p_index: vec![BTreeSet::new(); n * n],
            pstar: vec![PairStar::default(); n * n],
            l: HashMap::new(),
            r: HashMap::new(),
            lstar: vec![BTreeSet::new(); n * n],
            rstar: vec![BTreeSet::new(); n * n],
            marked: HashSet::new(),
            update_seq: 0,
        }
    }

    #[inline]
    fn pair(&self, x: VertexId, y: VertexId) -> PairKey {
        x.index() * self.n + y.index()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn update_seq(&self) -> u64 {
        self.update_seq
    }

    pub(crate) fn begin_update(&mut self) -> u64 {
        self.update_seq += 1;
        self.update_seq
    }

    pub fn triple_count(&self) -> usize {
        self.dict.len()
    }

    pub fn star_triple_count(&self) -> usize {
        self.pstar.iter().map(|p| p.entries.len()).sum()
    }

    pub fn get(&self, tuple: &Tuple) -> Option<&Triple> {
        self.dict.get(tuple)
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.dict.values()
    }

    /// Triples of P(x, y) in (weight, a, b) order.
    pub fn p_triples(&self, x: VertexId, y: VertexId) -> Vec<Triple> {
        self.p_index[self.pair(x, y)]
            .iter()
            .map(|&(_, a, b)| self.dict[&Tuple::new(x, a, b, y)])
            .collect()
    }

    /// Tuples of P(x, y) carrying exactly `weight`, in (a, b) order.
    pub fn p_tuples_at(&self, x: VertexId, y: VertexId, weight: f64) -> Vec<Tuple> {
        let lo = (OrderedFloat(weight), VertexId(0), VertexId(0));
        let hi = (OrderedFloat(weight), VertexId(u32::MAX), VertexId(u32::MAX));
        self.p_index[self.pair(x, y)]
            .range(lo..=hi)
            .map(|&(_, a, b)| Tuple::new(x, a, b, y))
            .collect()
    }

    pub fn p_is_empty(&self, x: VertexId, y: VertexId) -> bool {
        self.p_index[self.pair(x, y)].is_empty()
    }

    /// Removes `k` paths from the triple for `tuple`. A triple reaching zero
    /// leaves P and the dictionary; extension sets are left to the caller.
    pub fn p_decrement(&mut self, tuple: Tuple, weight: f64, k: u64) -> Result<u64, TupleError> {
        let triple = self
            .dict
            .get_mut(&tuple)
            .ok_or(TupleError::UnknownTuple(tuple))?;
        if triple.weight != weight {
            return Err(TupleError::WeightMismatch {
                tuple,
                stored: triple.weight,
                requested: weight,
            });
        }
        if k > triple.count {
            return Err(TupleError::OverDecrement {
                tuple,
                count: triple.count,
                requested: k,
            });
        }
        triple.count -= k;
        let remaining = triple.count;
        if remaining == 0 {
            self.dict.remove(&tuple);
            let key = self.pair(tuple.x(), tuple.y());
            self.p_index[key].remove(&(OrderedFloat(weight), tuple.a(), tuple.b()));
        }
        Ok(remaining)
    }

    /// Adds `k` paths, `paths_thru_v` of them through the updated vertex.
    /// Stale path stamps are reset before accumulating.
    pub fn p_increment(
        &mut self,
        tuple: Tuple,
        weight: f64,
        k: u64,
        paths_thru_v: u64,
        update_num: u64,
    ) -> Result<u64, TupleError> {
        if k == 0 {
            return Err(TupleError::ZeroIncrement(tuple));
        }
        if let Some(triple) = self.dict.get_mut(&tuple) {
            if triple.weight != weight {
                return Err(TupleError::WeightMismatch {
                    tuple,
                    stored: triple.weight,
                    requested: weight,
                });
            }
            triple.count += k;
            triple.paths_thru_v = triple.paths_through(update_num) + paths_thru_v;
            triple.update_num = update_num;
            return Ok(triple.count);
        }
        self.dict.insert(
            tuple,
            Triple {
                tuple,
                weight,
                count: k,
                paths_thru_v,
                update_num,
            },
        );
        let key = self.pair(tuple.x(), tuple.y());
        self.p_index[key].insert((OrderedFloat(weight), tuple.a(), tuple.b()));
        Ok(k)
    }

    pub fn pstar_get(&self, tuple: &Tuple) -> Option<(f64, u64)> {
        self.pstar[self.pair(tuple.x(), tuple.y())]
            .entries
            .get(&(tuple.a(), tuple.b()))
            .copied()
    }

    pub fn pstar_contains(&self, tuple: &Tuple) -> bool {
        self.pstar_get(tuple).is_some()
    }

    pub fn pstar_is_empty(&self, x: VertexId, y: VertexId) -> bool {
        self.pstar[self.pair(x, y)].entries.is_empty()
    }

    /// Shortest-path triples of P*(x, y) in (a, b) order.
    pub fn pstar_triples(&self, x: VertexId, y: VertexId) -> Vec<(Tuple, f64, u64)> {
        self.pstar[self.pair(x, y)]
            .entries
            .iter()
            .map(|(&(a, b), &(w, c))| (Tuple::new(x, a, b, y), w, c))
            .collect()
    }

    /// Whether some ST from x to y still starts with edge (x, a).
    pub fn pstar_has_first(&self, x: VertexId, y: VertexId, a: VertexId) -> bool {
        self.pstar[self.pair(x, y)]
            .entries
            .range((a, VertexId(0))..=(a, VertexId(u32::MAX)))
            .next()
            .is_some()
    }

    /// Whether some ST from x to y still ends with edge (b, y).
    pub fn pstar_has_last(&self, x: VertexId, y: VertexId, b: VertexId) -> bool {
        self.pstar[self.pair(x, y)]
            .by_last
            .range((b, VertexId(0))..=(b, VertexId(u32::MAX)))
            .next()
            .is_some()
    }

    pub fn pstar_decrement(
        &mut self,
        tuple: Tuple,
        weight: f64,
        k: u64,
    ) -> Result<u64, TupleError> {
        let key = self.pair(tuple.x(), tuple.y());
        let star = &mut self.pstar[key];
        let entry = star
            .entries
            .get_mut(&(tuple.a(), tuple.b()))
            .ok_or(TupleError::UnknownTuple(tuple))?;
        if entry.0 != weight {
            return Err(TupleError::WeightMismatch {
                tuple,
                stored: entry.0,
                requested: weight,
            });
        }
        if k > entry.1 {
            return Err(TupleError::OverDecrement {
                tuple,
                count: entry.1,
                requested: k,
            });
        }
        entry.1 -= k;
        let remaining = entry.1;
        if remaining == 0 {
            star.entries.remove(&(tuple.a(), tuple.b()));
            star.by_last.remove(&(tuple.b(), tuple.a()));
        }
        Ok(remaining)
    }

    /// Adds `k` shortest paths. The tuple must be in P with the same weight
    /// and at least as many paths, and every ST of the pair shares one weight.
    pub fn pstar_increment(
        &mut self,
        tuple: Tuple,
        weight: f64,
        k: u64,
    ) -> Result<u64, TupleError> {
        if k == 0 {
            return Err(TupleError::ZeroIncrement(tuple));
        }
        let p_count = match self.dict.get(&tuple) {
            Some(t) if t.weight == weight => t.count,
            Some(t) => {
                return Err(TupleError::WeightMismatch {
                    tuple,
                    stored: t.weight,
                    requested: weight,
                })
            }
            None => {
                return Err(TupleError::WeightMismatch {
                    tuple,
                    stored: f64::NAN,
                    requested: weight,
                })
            }
        };
        let key = self.pair(tuple.x(), tuple.y());
        let star = &mut self.pstar[key];
        if let Some((&_, &(w, _))) = star.entries.iter().next() {
            if w != weight {
                return Err(TupleError::WeightMismatch {
                    tuple,
                    stored: w,
                    requested: weight,
                });
            }
        }
        let entry = star
            .entries
            .entry((tuple.a(), tuple.b()))
            .or_insert((weight, 0));
        if entry.1 + k > p_count {
            if entry.1 == 0 {
                star.entries.remove(&(tuple.a(), tuple.b()));
            }
            return Err(TupleError::StarExceedsP { tuple });
        }
        entry.1 += k;
        let count = entry.1;
        star.by_last.insert((tuple.b(), tuple.a()));
        Ok(count)
    }

    /// L(x, by): vertices x' with (x'x, by) an LST.
    pub fn l_get(&self, x: VertexId, last: Edge) -> Vec<VertexId> {
        self.l
            .get(&(x, last.source, last.target))
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn l_contains(&self, x: VertexId, last: Edge, member: VertexId) -> bool {
        self.l
            .get(&(x, last.source, last.target))
            .is_some_and(|s| s.contains(&member))
    }

    pub fn l_add(&mut self, x: VertexId, last: Edge, member: VertexId) -> bool {
        self.l
            .entry((x, last.source, last.target))
            .or_default()
            .insert(member)
    }

    pub fn l_remove(&mut self, x: VertexId, last: Edge, member: VertexId) -> Result<(), TupleError> {
        remove_member(&mut self.l, (x, last.source, last.target), member, "L")
    }

    /// R(xa, y): vertices y' with (xa, yy') an LST.
    pub fn r_get(&self, first: Edge, y: VertexId) -> Vec<VertexId> {
        self.r
            .get(&(first.source, first.target, y))
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default()
    }

    pub fn r_contains(&self, first: Edge, y: VertexId, member: VertexId) -> bool {
        self.r
            .get(&(first.source, first.target, y))
            .is_some_and(|s| s.contains(&member))
    }

    pub fn r_add(&mut self, first: Edge, y: VertexId, member: VertexId) -> bool {
        self.r
            .entry((first.source, first.target, y))
            .or_default()
            .insert(member)
    }

    pub fn r_remove(&mut self, first: Edge, y: VertexId, member: VertexId) -> Result<(), TupleError> {
        remove_member(&mut self.r, (first.source, first.target, y), member, "R")
    }

    /// L*(x, y): vertices x' with x' -> x ~> y a shortest path.
    pub fn lstar_get(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        self.lstar[self.pair(x, y)].iter().copied().collect()
    }

    pub fn lstar_contains(&self, x: VertexId, y: VertexId, member: VertexId) -> bool {
        self.lstar[self.pair(x, y)].contains(&member)
    }

    pub fn lstar_add(&mut self, x: VertexId, y: VertexId, member: VertexId) -> bool {
        let key = self.pair(x, y);
        self.lstar[key].insert(member)
    }

    pub fn lstar_remove(&mut self, x: VertexId, y: VertexId, member: VertexId) -> Result<(), TupleError> {
        let key = self.pair(x, y);
        if self.lstar[key].remove(&member) {
            Ok(())
        } else {
            Err(TupleError::MissingMember { set: "L*", member })
        }
    }

    /// R*(x, y): vertices y' with x ~> y -> y' a shortest path.
    pub fn rstar_get(&self, x: VertexId, y: VertexId) -> Vec<VertexId> {
        self.rstar[self.pair(x, y)].iter().copied().collect()
    }

    pub fn rstar_contains(&self, x: VertexId, y: VertexId, member: VertexId) -> bool {
        self.rstar[self.pair(x, y)].contains(&member)
    }

    pub fn rstar_add(&mut self, x: VertexId, y: VertexId, member: VertexId) -> bool {
        let key = self.pair(x, y);
        self.rstar[key].insert(member)
    }

    pub fn rstar_remove(&mut self, x: VertexId, y: VertexId, member: VertexId) -> Result<(), TupleError> {
        let key = self.pair(x, y);
        if self.rstar[key].remove(&member) {
            Ok(())
        } else {
            Err(TupleError::MissingMember { set: "R*", member })
        }
    }

    pub fn mark(&mut self, tuple: Tuple) {
        self.marked.insert(tuple);
    }

    pub fn is_marked(&self, tuple: &Tuple) -> bool {
        self.marked.contains(tuple)
    }

    pub fn clear_marks(&mut self) {
        self.marked.clear();
    }

    pub fn marked_count(&self) -> usize {
        self.marked.len()
    }

    /// A minimum-weight triple of P(x, y); ties go to the smallest (a, b).
    pub fn min_weight_triple(&self, x: VertexId, y: VertexId) -> Option<&Triple> {
        self.p_index[self.pair(x, y)]
            .first()
            .map(|&(_, a, b)| &self.dict[&Tuple::new(x, a, b, y)])
    }

    pub fn distance(&self, x: VertexId, y: VertexId) -> f64 {
        if x == y {
            return 0.0;
        }
        self.pstar[self.pair(x, y)]
            .entries
            .values()
            .next()
            .map_or(f64::INFINITY, |&(w, _)| w)
    }

    pub fn sigma(&self, x: VertexId, y: VertexId) -> u64 {
        if x == y {
            return 1;
        }
        self.pstar[self.pair(x, y)]
            .entries
            .values()
            .map(|&(_, c)| c)
            .sum()
    }

    /// Shortest-path dag rooted at `s`: edge (u, z) belongs to it exactly when
    /// z is in R*(s, u), with R*(s, s) holding the shortest out-edges of s.
    pub fn extract_sp_dag(&self, s: VertexId) -> SpDag {
        let vertices = (0..self.n).map(VertexId::from_index);
        let dist: Vec<f64> = vertices.clone().map(|y| self.distance(s, y)).collect();
        let sigma: Vec<u64> = vertices.clone().map(|y| self.sigma(s, y)).collect();
        let mut edges = Vec::new();
        for u in vertices {
            if dist[u.index()].is_finite() {
                for z in self.rstar_get(s, u) {
                    edges.push(Edge::new(u, z));
                }
            }
        }
        SpDag {
            source: s,
            dist,
            sigma,
            edges,
        }
    }

    /// Canonical dump: one line per P / P* triple and per extension-set
    /// member, using `g`'s labels, sorted bytewise.
    pub fn dump_lines(&self, g: &Graph) -> Vec<String> {
        let lab = |v: VertexId| g.label(v);
        let mut lines = Vec::with_capacity(self.dict.len() * 2);
        for t in self.dict.values() {
            let u = t.tuple;
            lines.push(format!(
                "P {} {} {} {} {} {}",
                lab(u.x()),
                lab(u.y()),
                lab(u.a()),
                lab(u.b()),
                t.weight,
                t.count
            ));
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let (xv, yv) = (VertexId::from_index(x), VertexId::from_index(y));
                let key = self.pair(xv, yv);
                for (&(a, b), &(w, c)) in &self.pstar[key].entries {
                    lines.push(format!(
                        "P* {} {} {} {} {} {}",
                        lab(xv),
                        lab(yv),
                        lab(a),
                        lab(b),
                        w,
                        c
                    ));
                }
                for &m in &self.lstar[key] {
                    lines.push(format!("L* {} {} {}", lab(xv), lab(yv), lab(m)));
                }
                for &m in &self.rstar[key] {
                    lines.push(format!("R* {} {} {}", lab(xv), lab(yv), lab(m)));
                }
            }
        }
        for (&(x, b, y), set) in &self.l {
            for &m in set {
                lines.push(format!("L {} {} {} {}", lab(x), lab(b), lab(y), lab(m)));
            }
        }
        for (&(x, a, y), set) in &self.r {
            for &m in set {
                lines.push(format!("R {} {} {} {}", lab(x), lab(a), lab(y), lab(m)));
            }
        }
        lines.sort_unstable();
        lines
    }

    pub fn dump(&self, g: &Graph) -> String {
        let mut out = self.dump_lines(g).join("\n");
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }

    /// Checks the structural invariants that do not need an oracle.
    pub fn check_structure(&self) -> Result<(), String> {
        for (tuple, t) in &self.dict {
            if t.count == 0 {
                return Err(format!("{tuple} stored with zero count"));
            }
            if tuple.x() == tuple.y() {
                return Err(format!("{tuple} is a cycle"));
            }
            let key = self.pair(tuple.x(), tuple.y());
            if !self.p_index[key].contains(&(OrderedFloat(t.weight), tuple.a(), tuple.b())) {
                return Err(format!("{tuple} missing from P index"));
            }
            if !tuple.is_single_edge() {
                if !self.l_contains(tuple.a(), tuple.last, tuple.x()) {
                    return Err(format!("{tuple}: x not in L(a, by)"));
                }
                if !self.r_contains(tuple.first, tuple.b(), tuple.y()) {
                    return Err(format!("{tuple}: y not in R(xa, b)"));
                }
            }
        }
        let indexed: usize = self.p_index.iter().map(|s| s.len()).sum();
        if indexed != self.dict.len() {
            return Err(format!("P index holds {indexed} entries, dict {}", self.dict.len()));
        }
        for (&(x, b, y), set) in &self.l {
            for &m in set {
                if !self.dict.contains_key(&Tuple::new(m, x, b, y)) {
                    return Err(format!("L({x}, {b}{y}) has stale member {m}"));
                }
            }
        }
        for (&(x, a, y), set) in &self.r {
            for &m in set {
                if !self.dict.contains_key(&Tuple::new(x, a, y, m)) {
                    return Err(format!("R({x}{a}, {y}) has stale member {m}"));
                }
            }
        }
        for (key, star) in self.pstar.iter().enumerate() {
            let (x, y) = (VertexId::from_index(key / self.n), VertexId::from_index(key % self.n));
            let mut weight = None;
            for (&(a, b), &(w, c)) in &star.entries {
                if *weight.get_or_insert(w) != w {
                    return Err(format!("P*({x},{y}) mixes weights"));
                }
                let tuple = Tuple::new(x, a, b, y);
                match self.dict.get(&tuple) {
                    Some(t) if t.weight == w && t.count >= c => {}
                    _ => return Err(format!("P* triple {tuple} not backed by P")),
                }
                if !star.by_last.contains(&(b, a)) {
                    return Err(format!("P* last-edge index misses {tuple}"));
                }
            }
            if star.by_last.len() != star.entries.len() {
                return Err(format!("P*({x},{y}) last-edge index out of sync"));
            }
        }
        if !self.marked.is_empty() {
            return Err("Marked-Tuples not empty between updates".into());
        }
        Ok(())
    }
}

fn remove_member(
    map: &mut HashMap<TripleKey, BTreeSet<VertexId>>,
    key: TripleKey,
    member: VertexId,
    set: &'static str,
) -> Result<(), TupleError> {
    let Some(s) = map.get_mut(&key) else {
        return Err(TupleError::MissingMember { set, member });
    };
    if !s.remove(&member) {
        return Err(TupleError::MissingMember { set, member });
    }
    if s.is_empty() {
        map.remove(&key);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures::FIXTURE_G, parse_graph};
    use crate::oracle::build_tuple_system;

    fn fixture() -> (Graph, TupleSystem) {
        let g = parse_graph(FIXTURE_G).unwrap();
        let ts = build_tuple_system(&g);
        (g, ts)
    }

    fn ids<const N: usize>(g: &Graph, labels: [&str; N]) -> [VertexId; N] {
        labels.map(|l| g.vertex(l).unwrap())
    }

    #[test]
    fn decrement_contract() {
        let (g, mut ts) = fixture();
        let [x, a1, a2, b, y] = ids(&g, ["x", "a1", "a2", "b", "y"]);
        let t2 = Tuple::new(x, a2, b, y);
        assert_eq!(ts.p_decrement(t2, 4.0, 0), Ok(2));
        assert_eq!(ts.p_decrement(t2, 4.0, 1), Ok(1));
        let t1 = Tuple::new(x, a1, b, y);
        assert_eq!(ts.p_decrement(t1, 4.0, 1), Ok(0));
        assert!(ts.get(&t1).is_none());
        assert_eq!(ts.p_triples(x, y).len(), 2);
        // extension sets are the caller's business
        assert!(ts.l_contains(a1, Edge::new(b, y), x));
        assert_eq!(ts.p_decrement(t1, 4.0, 1), Err(TupleError::UnknownTuple(t1)));
        assert!(matches!(
            ts.p_decrement(t2, 4.0, 5),
            Err(TupleError::OverDecrement { count: 1, requested: 5, .. })
        ));
    }

    #[test]
    fn increment_contract() {
        let (g, mut ts) = fixture();
        let [x, a1, a2, v, b1, y] = ids(&g, ["x", "a1", "a2", "v", "b1", "y"]);
        let fresh = Tuple::new(x, a1, a1, b1);
        assert_eq!(ts.p_increment(fresh, 5.0, 1, 0, 1), Ok(1));
        assert_eq!(ts.min_weight_triple(x, b1).unwrap().weight, 3.0);
        let existing = Tuple::new(x, a2, v, b1);
        assert_eq!(ts.p_increment(existing, 3.0, 1, 1, 1), Ok(2));
        assert_eq!(ts.get(&existing).unwrap().paths_through(1), 1);
        assert_eq!(ts.get(&existing).unwrap().paths_through(2), 0);
        assert!(matches!(
            ts.p_increment(existing, 7.0, 1, 0, 1),
            Err(TupleError::WeightMismatch { .. })
        ));
        // empty pair receives its first triple
        let lone = Tuple::new(y, a1, a1, v);
        assert!(ts.p_is_empty(y, v));
        ts.p_increment(lone, 3.0, 1, 0, 1).unwrap();
        assert_eq!(ts.p_triples(y, v).len(), 1);
    }

    #[test]
    fn stale_stamp_resets_paths() {
        let (g, mut ts) = fixture();
        let [x, a2, b, y] = ids(&g, ["x", "a2", "b", "y"]);
        let t = Tuple::new(x, a2, b, y);
        ts.p_increment(t, 4.0, 1, 1, 3).unwrap();
        ts.p_increment(t, 4.0, 1, 1, 3).unwrap();
        assert_eq!(ts.get(&t).unwrap().paths_through(3), 2);
        ts.p_increment(t, 4.0, 1, 1, 4).unwrap();
        assert_eq!(ts.get(&t).unwrap().paths_through(4), 1);
    }

    #[test]
    fn pstar_contract() {
        let (g, mut ts) = fixture();
        let [x, a1, a2, v, b1] = ids(&g, ["x", "a1", "a2", "v", "b1"]);
        let t1 = Tuple::new(x, a1, v, b1);
        let t2 = Tuple::new(x, a2, v, b1);
        assert_eq!(ts.pstar_decrement(t1, 3.0, 1), Ok(0));
        assert_eq!(ts.pstar_decrement(t2, 3.0, 1), Ok(0));
        assert!(ts.pstar_is_empty(x, b1));
        assert_eq!(ts.distance(x, b1), f64::INFINITY);

        let absent = Tuple::new(x, a1, a1, b1);
        assert!(matches!(
            ts.pstar_increment(absent, 5.0, 1),
            Err(TupleError::WeightMismatch { .. })
        ));

        let before = ts.dump(&g);
        ts.pstar_increment(t1, 3.0, 1).unwrap();
        ts.pstar_decrement(t1, 3.0, 1).unwrap();
        assert_eq!(ts.dump(&g), before);
        assert!(matches!(
            ts.pstar_increment(t1, 3.0, 2),
            Err(TupleError::StarExceedsP { .. })
        ));
        assert!(ts.pstar_is_empty(x, b1));
    }

    #[test]
    fn extension_sets_on_fixture() {
        let (g, mut ts) = fixture();
        let [x, a1, a2, v, b, b1, y1] = ids(&g, ["x", "a1", "a2", "v", "b", "b1", "y1"]);
        assert_eq!(ts.l_get(v, Edge::new(b1, y1)), vec![a1, a2]);
        assert_eq!(ts.lstar_get(v, y1), vec![a1, a2]);
        assert_eq!(ts.rstar_get(x, v), vec![b1, b]);
        assert_eq!(ts.r_get(Edge::new(x, a2), v), vec![b1, b]);

        ts.l_remove(v, Edge::new(b1, y1), a1).unwrap();
        assert_eq!(
            ts.l_remove(v, Edge::new(b1, y1), a1),
            Err(TupleError::MissingMember { set: "L", member: a1 })
        );
        assert!(ts.lstar_remove(v, y1, x).is_err());
        assert!(!ts.rstar_add(x, v, b));
    }

    #[test]
    fn marks() {
        let (g, mut ts) = fixture();
        let [xp, x, b, y] = ids(&g, ["x'", "x", "b", "y"]);
        let t = Tuple::new(xp, x, b, y);
        assert!(!ts.is_marked(&t));
        ts.mark(t);
        assert!(ts.is_marked(&t));
        ts.clear_marks();
        assert!(!ts.is_marked(&t));
    }

    #[test]
    fn min_weight_and_distance() {
        let (g, ts) = fixture();
        let [x, a1, v, y, b1, v1] = ids(&g, ["x", "a1", "v", "y", "b1", "v1"]);
        assert_eq!(ts.distance(x, y), 4.0);
        assert_eq!(ts.sigma(x, y), 4);
        assert_eq!(ts.distance(x, x), 0.0);
        assert_eq!(ts.sigma(x, x), 1);
        assert_eq!(ts.distance(y, x), f64::INFINITY);
        assert_eq!(ts.sigma(y, x), 0);
        assert!(ts.min_weight_triple(y, x).is_none());
        let only = ts.min_weight_triple(a1, v).unwrap();
        assert_eq!(only.tuple, Tuple::single_edge(a1, v));
        // P(a1, b1) holds the single edge (4), a1->v1->b1 (4) and a1->v->b1 (2)
        let min = ts.min_weight_triple(a1, b1).unwrap();
        assert_eq!((min.weight, min.tuple), (2.0, Tuple::new(a1, v, v, b1)));
        // (a, b) order: the single edge is keyed a = b1
        assert_eq!(
            ts.p_tuples_at(a1, b1, 4.0),
            vec![Tuple::new(a1, v1, v1, b1), Tuple::single_edge(a1, b1)]
        );
    }

    #[test]
    fn structure_holds_after_build() {
        let (_, ts) = fixture();
        ts.check_structure().unwrap();
    }
}
