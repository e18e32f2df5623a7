//! From-scratch ground truth: counting Dijkstra, the closed-form LST
//! condition, direct construction of a tuple system, and literal path
//! enumeration for tiny graphs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use ordered_float::OrderedFloat;
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::tuples::{Tuple, TupleSystem};

/// Distances and shortest-path counts from `s`. Unreachable vertices get
/// `INFINITY` and 0.
pub fn dijkstra_counting(g: &Graph, s: VertexId) -> (Vec<f64>, Vec<u64>) {
    dijkstra_skipping(g, s, None)
}

fn dijkstra_skipping(g: &Graph, s: VertexId, skip: Option<VertexId>) -> (Vec<f64>, Vec<u64>) {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0u64; n];
    let mut settled = vec![false; n];
    if skip == Some(s) {
        return (dist, sigma);
    }
    dist[s.index()] = 0.0;
    sigma[s.index()] = 1;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((OrderedFloat(0.0), s)));
    while let Some(Reverse((OrderedFloat(d), u))) = heap.pop() {
        if settled[u.index()] {
            continue;
        }
        settled[u.index()] = true;
        for (z, w) in g.out_edges(u) {
            if Some(z) == skip {
                continue;
            }
            let nd = d + w;
            let zi = z.index();
            if nd < dist[zi] {
                dist[zi] = nd;
                sigma[zi] = sigma[u.index()];
                heap.push(Reverse((OrderedFloat(nd), z)));
            } else if nd == dist[zi] {
                sigma[zi] += sigma[u.index()];
            }
        }
    }
    (dist, sigma)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub n: usize,
    dist: Vec<f64>,
    sigma: Vec<u64>,
    /// Every LST with its weight and path count.
    pub lst: BTreeMap<Tuple, (f64, u64)>,
}

impl OracleResult {
    pub fn d(&self, x: VertexId, y: VertexId) -> f64 {
        self.dist[x.index() * self.n + y.index()]
    }

    pub fn sigma(&self, x: VertexId, y: VertexId) -> u64 {
        self.sigma[x.index() * self.n + y.index()]
    }
}

fn all_pairs(g: &Graph, skip: Option<VertexId>) -> (Vec<f64>, Vec<u64>) {
    let n = g.vertex_count();
    let mut dist = Vec::with_capacity(n * n);
    let mut sigma = Vec::with_capacity(n * n);
    for s in g.vertices() {
        let (d, c) = dijkstra_skipping(g, s, skip);
        dist.extend(d);
        sigma.extend(c);
    }
    (dist, sigma)
}

pub fn static_apasp(g: &Graph) -> OracleResult {
    let n = g.vertex_count();
    let (dist, sigma) = all_pairs(g, None);
    let d = |x: VertexId, y: VertexId| dist[x.index() * n + y.index()];
    let mut lst = BTreeMap::new();
    for (e, w) in g.edges() {
        lst.insert(Tuple::single_edge(e.source, e.target), (w, 1));
    }
    for a in g.vertices() {
        for b in g.vertices() {
            let count = sigma[a.index() * n + b.index()];
            if count == 0 {
                continue;
            }
            let mid = d(a, b);
            for (x, wx) in g.in_edges(a) {
                if wx + mid != d(x, b) {
                    continue;
                }
                for (y, wy) in g.out_edges(b) {
                    if x != y && mid + wy == d(a, y) {
                        lst.insert(Tuple::new(x, a, b, y), (wx + mid + wy, count));
                    }
                }
            }
        }
    }
    OracleResult {
        n,
        dist,
        sigma,
        lst,
    }
}

/// Builds the tuple system of `g` directly from the defining predicates.
pub fn build_tuple_system(g: &Graph) -> TupleSystem {
    build_from_oracle(g, &static_apasp(g))
}

pub fn build_from_oracle(g: &Graph, o: &OracleResult) -> TupleSystem {
    let mut ts = TupleSystem::new(g.vertex_count());
    for (&t, &(w, c)) in &o.lst {
        ts.p_increment(t, w, c, 0, 0).expect("fresh tuple");
        if !t.is_single_edge() {
            ts.l_add(t.a(), t.last, t.x());
            ts.r_add(t.first, t.b(), t.y());
        }
        if w == o.d(t.x(), t.y()) {
            ts.pstar_increment(t, w, c).expect("shortest tuple");
        }
    }
    for (e, w) in g.edges() {
        let (p, q) = (e.source, e.target);
        for u in g.vertices() {
            let dq = o.d(q, u);
            if dq.is_finite() && w + dq == o.d(p, u) {
                ts.lstar_add(q, u, p);
            }
            let du = o.d(u, p);
            if du.is_finite() && du + w == o.d(u, q) {
                ts.rstar_add(u, p, q);
            }
        }
    }
    ts
}

/// LST counts after removing every path through `v`, with distances of the
/// original graph. This is what cleanup must leave behind.
pub fn lst_avoiding(g: &Graph, v: VertexId) -> BTreeMap<Tuple, (f64, u64)> {
    let n = g.vertex_count();
    let full = static_apasp(g);
    let (dist, sigma) = all_pairs(g, Some(v));
    let mut out = BTreeMap::new();
    for (&t, &(w, _)) in &full.lst {
        if [t.x(), t.a(), t.b(), t.y()].contains(&v) {
            continue;
        }
        let (a, b) = (t.a().index(), t.b().index());
        let count = if t.is_single_edge() {
            1
        } else if dist[a * n + b] == full.d(t.a(), t.b()) {
            sigma[a * n + b]
        } else {
            0
        };
        if count > 0 {
            out.insert(t, (w, count));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpParameters {
    /// Most edges lying on shortest paths through a single vertex.
    pub nu_star: usize,
    /// Edges lying on some shortest path.
    pub m_star: usize,
}

pub fn sp_parameters(g: &Graph, o: &OracleResult) -> SpParameters {
    let m_star = g.edges().filter(|&(e, w)| w == o.d(e.source, e.target)).count();
    let nu_star = g
        .vertices()
        .map(|u| {
            g.edges()
                .filter(|&(e, w)| {
                    let (p, q) = (e.source, e.target);
                    let to_u = o.d(q, u).is_finite() && w + o.d(q, u) == o.d(p, u);
                    let from_u = o.d(u, p).is_finite() && o.d(u, p) + w == o.d(u, q);
                    to_u || from_u
                })
                .count()
        })
        .max()
        .unwrap_or(0);
    SpParameters { nu_star, m_star }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("path enumeration exceeded {cap} paths")]
pub struct ExplosionGuard {
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathRecord {
    pub path: Vec<VertexId>,
    pub weight: f64,
    pub is_sp: bool,
    pub is_lsp: bool,
}

/// Every simple path of 1..=max_hops edges, classified by the literal
/// definitions. Distances come from the enumeration itself, so
/// `max_hops >= n - 1` is needed for them to be exact.
pub fn enumerate_lsps_bruteforce(
    g: &Graph,
    max_hops: usize,
    cap: usize,
) -> Result<Vec<PathRecord>, ExplosionGuard> {
    let n = g.vertex_count();
    let mut paths: Vec<(Vec<VertexId>, f64)> = Vec::new();
    let mut on_path = vec![false; n];
    for s in g.vertices() {
        let mut stack = vec![s];
        on_path[s.index()] = true;
        dfs(g, &mut stack, &mut on_path, 0.0, max_hops, cap, &mut paths)?;
        on_path[s.index()] = false;
    }

    let mut best = vec![f64::INFINITY; n * n];
    for v in g.vertices() {
        best[v.index() * n + v.index()] = 0.0;
    }
    for (p, w) in &paths {
        let k = p[0].index() * n + p[p.len() - 1].index();
        best[k] = best[k].min(*w);
    }
    let sub_weight = |p: &[VertexId]| -> f64 {
        p.windows(2)
            .map(|e| g.weight(e[0], e[1]).expect("path edge"))
            .sum()
    };
    let is_shortest = |p: &[VertexId]| -> bool {
        sub_weight(p) == best[p[0].index() * n + p[p.len() - 1].index()]
    };

    let records = paths
        .into_iter()
        .map(|(path, weight)| {
            let k = path.len() - 1;
            let is_lsp = (0..k).all(|i| {
                (i + 1..=k)
                    .filter(|&j| !(i == 0 && j == k))
                    .all(|j| is_shortest(&path[i..=j]))
            });
            let is_sp = weight == best[path[0].index() * n + path[k].index()];
            PathRecord {
                path,
                weight,
                is_sp,
                is_lsp,
            }
        })
        .collect();
    Ok(records)
}

fn dfs(
    g: &Graph,
    stack: &mut Vec<VertexId>,
    on_path: &mut [bool],
    weight: f64,
    max_hops: usize,
    cap: usize,
    out: &mut Vec<(Vec<VertexId>, f64)>,
) -> Result<(), ExplosionGuard> {
    if stack.len() > max_hops {
        return Ok(());
    }
    let u = *stack.last().expect("non-empty");
    for (z, w) in g.out_edges(u) {
        if on_path[z.index()] {
            continue;
        }
        stack.push(z);
        out.push((stack.clone(), weight + w));
        if out.len() > cap {
            return Err(ExplosionGuard { cap });
        }
        on_path[z.index()] = true;
        dfs(g, stack, on_path, weight + w, max_hops, cap, out)?;
        on_path[z.index()] = false;
        stack.pop();
    }
    Ok(())
}

/// Per-tuple LSP counts and per-pair SP counts read off enumerated paths.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PathCounts {
    pub lsp: BTreeMap<(Tuple, OrderedFloat<f64>), u64>,
    pub sp: BTreeMap<(VertexId, VertexId), (f64, u64)>,
}

impl PathCounts {
    pub fn from_records(records: &[PathRecord]) -> Self {
        let mut out = PathCounts::default();
        for r in records {
            let p = &r.path;
            let k = p.len() - 1;
            if r.is_lsp {
                let t = if k == 1 {
                    Tuple::single_edge(p[0], p[1])
                } else {
                    Tuple::new(p[0], p[1], p[k - 1], p[k])
                };
                *out.lsp.entry((t, OrderedFloat(r.weight))).or_default() += 1;
            }
            if r.is_sp {
                out.sp.entry((p[0], p[k])).or_insert((r.weight, 0)).1 += 1;
            }
        }
        out
    }

    pub fn from_oracle(o: &OracleResult) -> Self {
        let mut out = PathCounts::default();
        for (&t, &(w, c)) in &o.lst {
            out.lsp.insert((t, OrderedFloat(w)), c);
        }
        for x in 0..o.n {
            for y in 0..o.n {
                let (x, y) = (VertexId::from_index(x), VertexId::from_index(y));
                if x != y && o.sigma(x, y) > 0 {
                    out.sp.insert((x, y), (o.d(x, y), o.sigma(x, y)));
                }
            }
        }
        out
    }
}

/// Differences between a maintained system and a fresh rebuild.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffReport {
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    pub truncated: bool,
}

impl DiffReport {
    pub const LIMIT: usize = 100;

    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.missing {
            writeln!(f, "- {l}")?;
        }
        for l in &self.unexpected {
            writeln!(f, "+ {l}")?;
        }
        if self.truncated {
            writeln!(f, "(further differences omitted)")?;
        }
        Ok(())
    }
}

pub fn assert_equivalent(ts: &TupleSystem, g: &Graph) -> Result<(), DiffReport> {
    let got = ts.dump_lines(g);
    let want = build_tuple_system(g).dump_lines(g);
    let report = diff_sorted(&want, &got);
    if report.is_empty() {
        Ok(())
    } else {
        Err(report)
    }
}

fn diff_sorted(want: &[String], got: &[String]) -> DiffReport {
    let mut r = DiffReport::default();
    let (mut i, mut j) = (0, 0);
    let push = |r: &mut DiffReport, missing: bool, line: &String| {
        if r.missing.len() + r.unexpected.len() >= DiffReport::LIMIT {
            r.truncated = true;
        } else if missing {
            r.missing.push(line.clone());
        } else {
            r.unexpected.push(line.clone());
        }
    };
    while i < want.len() || j < got.len() {
        match (want.get(i), got.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                push(&mut r, true, a);
                i += 1;
            }
            (Some(_), Some(b)) => {
                push(&mut r, false, b);
                j += 1;
            }
            (Some(a), None) => {
                push(&mut r, true, a);
                i += 1;
            }
            (None, Some(b)) => {
                push(&mut r, false, b);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures::FIXTURE_G, parse_graph, Edge};

    fn fixture() -> Graph {
        parse_graph(FIXTURE_G).unwrap()
    }

    #[test]
    fn counting_dijkstra_on_fixture() {
        let g = fixture();
        let id = |l: &str| g.vertex(l).unwrap();
        let (d, s) = dijkstra_counting(&g, id("x"));
        assert_eq!((d[id("y").index()], s[id("y").index()]), (4.0, 4));
        assert_eq!((d[id("b1").index()], s[id("b1").index()]), (3.0, 2));
        let (d, s) = dijkstra_counting(&g, id("y"));
        assert!(d.iter().enumerate().all(|(i, &w)| (i == id("y").index()) == w.is_finite()));
        assert_eq!(s.iter().sum::<u64>(), 1);
    }

    #[test]
    fn counting_dijkstra_after_fixture_update() {
        let g0 = fixture();
        let id = |l: &str| g0.vertex(l).unwrap();
        let op = crate::graph::UpdateOp::new(id("v"))
            .set_weight(id("a1"), id("v"), 10.0)
            .set_weight(id("a2"), id("v"), 5.0);
        let g = crate::graph::apply_weights(&g0, &op);
        let (d, s) = dijkstra_counting(&g, id("x"));
        assert_eq!((d[id("b1").index()], s[id("b1").index()]), (5.0, 2));
        let o = static_apasp(&g);
        assert_eq!(
            o.lst.get(&Tuple::new(id("x"), id("a1"), id("a1"), id("b1"))),
            Some(&(5.0, 1))
        );
    }

    #[test]
    fn lst_on_fixture() {
        let g = fixture();
        let id = |l: &str| g.vertex(l).unwrap();
        let o = static_apasp(&g);
        assert_eq!(
            o.lst.get(&Tuple::new(id("x"), id("a2"), id("b"), id("y"))),
            Some(&(4.0, 2))
        );
        assert_eq!(o.d(id("x"), id("x")), 0.0);
        assert_eq!(o.sigma(id("x"), id("x")), 1);
    }

    #[test]
    fn single_edge_graph() {
        let g = Graph::from_edges(2, &[(0, 1, 2.5)]).unwrap();
        let o = static_apasp(&g);
        let want: BTreeMap<_, _> =
            [(Tuple::single_edge(VertexId(0), VertexId(1)), (2.5, 1))].into();
        assert_eq!(o.lst, want);
    }

    #[test]
    fn empty_graph_builds_empty_system() {
        let g = Graph::with_vertices(4);
        assert_eq!(build_tuple_system(&g).dump(&g), "");
        assert_eq!(build_tuple_system(&Graph::with_vertices(0)).triple_count(), 0);
    }

    #[test]
    fn fixture_watched_rows() {
        let g = fixture();
        let id = |l: &str| g.vertex(l).unwrap();
        let ts = build_tuple_system(&g);
        let (x, y, b, b1, v, y1) = (id("x"), id("y"), id("b"), id("b1"), id("v"), id("y1"));
        let rows: Vec<_> = ts
            .p_triples(x, y)
            .iter()
            .map(|t| (g.label(t.tuple.a()).to_string(), t.weight, t.count))
            .collect();
        assert_eq!(
            rows,
            [("a1", 4.0, 1), ("a2", 4.0, 2), ("a3", 4.0, 1)].map(|(a, w, c)| (a.to_string(), w, c))
        );
        assert_eq!(ts.pstar_triples(x, b1).len(), 2);
        assert_eq!(ts.l_get(v, Edge::new(b1, y1)), vec![id("a1"), id("a2")]);
        assert_eq!(ts.rstar_get(x, v), vec![b1, b]);
        let dag = ts.extract_sp_dag(id("a1"));
        let mut edges: Vec<_> = dag
            .edges
            .iter()
            .map(|e| format!("{}-{}", g.label(e.source), g.label(e.target)))
            .collect();
        edges.sort();
        assert_eq!(edges, ["a1-v", "a1-v1", "b-y", "b1-y1", "v-b", "v-b1"]);
    }

    #[test]
    fn bruteforce_agrees_on_fixture() {
        let g = fixture();
        let id = |l: &str| g.vertex(l).unwrap();
        let recs = enumerate_lsps_bruteforce(&g, g.vertex_count(), 100_000).unwrap();
        let lsp_xy = recs
            .iter()
            .filter(|r| r.is_lsp && r.path[0] == id("x") && *r.path.last().unwrap() == id("y"))
            .filter(|r| r.weight == 4.0)
            .count();
        assert_eq!(lsp_xy, 4);
        let a1b1 = recs.iter().find(|r| r.path == [id("a1"), id("b1")]).unwrap();
        assert!(a1b1.is_lsp && !a1b1.is_sp);
        assert_eq!(
            PathCounts::from_records(&recs),
            PathCounts::from_oracle(&static_apasp(&g))
        );
    }

    #[test]
    fn bruteforce_triangle() {
        let g = Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        let recs = enumerate_lsps_bruteforce(&g, 3, 1000).unwrap();
        for r in &recs {
            if r.path.len() == 2 {
                assert!(r.is_sp && r.is_lsp);
            } else {
                assert_eq!(r.is_sp, r.is_lsp);
            }
        }
    }

    #[test]
    fn explosion_guard_trips() {
        let mut edges = Vec::new();
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    edges.push((i, j, 1.0));
                }
            }
        }
        let g = Graph::from_edges(8, &edges).unwrap();
        assert_eq!(
            enumerate_lsps_bruteforce(&g, 7, 1000),
            Err(ExplosionGuard { cap: 1000 })
        );
    }

    #[test]
    fn equivalence_detects_corruption() {
        let g = fixture();
        let mut ts = build_tuple_system(&g);
        assert_eq!(assert_equivalent(&ts, &g), Ok(()));
        let id = |l: &str| g.vertex(l).unwrap();
        ts.p_increment(Tuple::new(id("x"), id("a2"), id("b"), id("y")), 4.0, 1, 0, 0)
            .unwrap();
        let report = assert_equivalent(&ts, &g).unwrap_err();
        assert_eq!(report.missing, ["P x y a2 b 4 2"]);
        assert_eq!(report.unexpected, ["P x y a2 b 4 3"]);
    }

    #[test]
    fn parameters_of_path() {
        let g = Graph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 5.0)]).unwrap();
        let p = sp_parameters(&g, &static_apasp(&g));
        assert_eq!(p, SpParameters { nu_star: 3, m_star: 3 });
    }

    #[test]
    fn avoiding_counts_on_fixture() {
        let g = fixture();
        let id = |l: &str| g.vertex(l).unwrap();
        let rest = lst_avoiding(&g, id("v"));
        assert_eq!(rest.get(&Tuple::new(id("x"), id("a2"), id("b"), id("y"))), Some(&(4.0, 1)));
        assert!(!rest.contains_key(&Tuple::new(id("x"), id("a1"), id("b"), id("y"))));
        assert!(rest.keys().all(|t| !t.is_single_edge() || (t.x() != id("v") && t.y() != id("v"))));
    }
}
