//! Positively weighted digraph, decremental update operations, and the text
//! formats for graphs and update traces.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! vertices 4          (optional header)
//! vertex a            (optional declaration, fixes id order)
//! a b 1.5             (edge: source target weight)
//! ```
//!
//! Trace file, one update per line:
//!
//! ```text
//! update v  a v 10  v b del
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        VertexId(u32::try_from(i).expect("vertex index exceeds u32"))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn new(source: VertexId, target: VertexId) -> Self {
        Edge { source, target }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: non-positive weight {weight} on edge {source_label} -> {target_label}")]
    NonPositiveWeight {
        line: usize,
        source_label: String,
        target_label: String,
        weight: f64,
    },
    #[error("line {line}: duplicate edge {source_label} -> {target_label}")]
    DuplicateEdge {
        line: usize,
        source_label: String,
        target_label: String,
    },
    #[error("line {line}: self-loop on {label}")]
    SelfLoop { line: usize, label: String },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("UnknownEdge: {0} -> {1} is not an edge of the graph")]
    UnknownEdge(String, String),
    #[error("NonIncidentEdge: {0} -> {1} is not incident on the updated vertex {2}")]
    NonIncidentEdge(String, String, String),
    #[error("WeightDecrease: {source_label} -> {target_label} from {current} to {requested}")]
    WeightDecrease {
        source_label: String,
        target_label: String,
        current: f64,
        requested: f64,
    },
    #[error("invalid weight {weight} for {source_label} -> {target_label}")]
    InvalidWeight {
        source_label: String,
        target_label: String,
        weight: f64,
    },
}

/// Directed graph with strictly positive, finite edge weights.
///
/// Adjacency is kept in ordered maps so every traversal is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    out_adj: Vec<BTreeMap<VertexId, f64>>,
    in_adj: Vec<BTreeMap<VertexId, f64>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` vertices labelled `"0".."n-1"` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::from_labels(labels)
    }

    fn from_labels(labels: Vec<String>) -> Self {
        let n = labels.len();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), VertexId::from_index(i)))
            .collect();
        Graph {
            labels,
            index,
            out_adj: vec![BTreeMap::new(); n],
            in_adj: vec![BTreeMap::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an explicit edge list over vertices `0..n`.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut g = Graph::with_vertices(n);
        for (i, &(s, t, w)) in edges.iter().enumerate() {
            let line = i + 1;
            if s >= n || t >= n {
                return Err(GraphError::Parse {
                    line,
                    message: format!("edge {s} -> {t} out of range for {n} vertices"),
                });
            }
            g.insert_edge(line, VertexId::from_index(s), VertexId::from_index(t), w)?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId::from_index)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn weight(&self, source: VertexId, target: VertexId) -> Option<f64> {
        self.out_adj[source.index()].get(&target).copied()
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.out_adj[v.index()].iter().map(|(&t, &w)| (t, w))
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.in_adj[v.index()].iter().map(|(&s, &w)| (s, w))
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v.index()].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v.index()].len()
    }

    /// All edges in (source, target) order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.out_adj.iter().enumerate().flat_map(|(s, adj)| {
            adj.iter()
                .map(move |(&t, &w)| (Edge::new(VertexId::from_index(s), t), w))
        })
    }

    fn insert_edge(
        &mut self,
        line: usize,
        s: VertexId,
        t: VertexId,
        w: f64,
    ) -> Result<(), GraphError> {
        if s == t {
            return Err(GraphError::SelfLoop {
                line,
                label: self.label(s).to_string(),
            });
        }
        if !w.is_finite() || w <= 0.0 {
            return Err(GraphError::NonPositiveWeight {
                line,
                source_label: self.label(s).to_string(),
                target_label: self.label(t).to_string(),
                weight: w,
            });
        }
        if self.out_adj[s.index()].contains_key(&t) {
            return Err(GraphError::DuplicateEdge {
                line,
                source_label: self.label(s).to_string(),
                target_label: self.label(t).to_string(),
            });
        }
        self.out_adj[s.index()].insert(t, w);
        self.in_adj[t.index()].insert(s, w);
        self.edge_count += 1;
        Ok(())
    }

    fn set_weight(&mut self, e: Edge, w: f64) {
        self.out_adj[e.source.index()].insert(e.target, w);
        self.in_adj[e.target.index()].insert(e.source, w);
    }

    fn remove_edge(&mut self, e: Edge) {
        if self.out_adj[e.source.index()].remove(&e.target).is_some() {
            self.in_adj[e.target.index()].remove(&e.source);
            self.edge_count -= 1;
        }
    }
}

/// New weight for an edge incident on the updated vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeChange {
    Weight(f64),
    Delete,
}

/// One decremental update: weight increases and deletions on edges incident
/// on `vertex`.
#[derive(Clone, Debug, PartialEq)]
pub struct UpdateOp {
    pub vertex: VertexId,
    pub changes: BTreeMap<Edge, EdgeChange>,
}

impl UpdateOp {
    pub fn new(vertex: VertexId) -> Self {
        UpdateOp {
            vertex,
            changes: BTreeMap::new(),
        }
    }

    pub fn set_weight(mut self, source: VertexId, target: VertexId, w: f64) -> Self {
        self.changes.insert(Edge::new(source, target), EdgeChange::Weight(w));
        self
    }

    pub fn delete(mut self, source: VertexId, target: VertexId) -> Self {
        self.changes.insert(Edge::new(source, target), EdgeChange::Delete);
        self
    }
}

pub fn validate_update(g: &Graph, op: &UpdateOp) -> Result<(), GraphError> {
    if op.vertex.index() >= g.vertex_count() {
        return Err(GraphError::UnknownVertex(op.vertex.to_string()));
    }
    for (e, change) in &op.changes {
        let (sl, tl) = (label_or_id(g, e.source), label_or_id(g, e.target));
        if e.source != op.vertex && e.target != op.vertex {
            return Err(GraphError::NonIncidentEdge(
                sl,
                tl,
                g.label(op.vertex).to_string(),
            ));
        }
        let Some(current) = (e.source.index() < g.vertex_count())
            .then(|| g.weight(e.source, e.target))
            .flatten()
        else {
            return Err(GraphError::UnknownEdge(sl, tl));
        };
        if let EdgeChange::Weight(w) = *change {
            if w.is_nan() || !w.is_finite() {
                return Err(GraphError::InvalidWeight {
                    source_label: sl,
                    target_label: tl,
                    weight: w,
                });
            }
            if w < current {
                return Err(GraphError::WeightDecrease {
                    source_label: sl,
                    target_label: tl,
                    current,
                    requested: w,
                });
            }
        }
    }
    Ok(())
}

fn label_or_id(g: &Graph, v: VertexId) -> String {
    g.labels
        .get(v.index())
        .cloned()
        .unwrap_or_else(|| v.to_string())
}

/// Returns the updated graph. Assumes `validate_update` passed.
pub fn apply_weights(g: &Graph, op: &UpdateOp) -> Graph {
    let mut out = g.clone();
    apply_weights_in_place(&mut out, op);
    out
}

pub(crate) fn apply_weights_in_place(g: &mut Graph, op: &UpdateOp) {
    for (&e, change) in &op.changes {
        match *change {
            EdgeChange::Weight(w) => g.set_weight(e, w),
            EdgeChange::Delete => g.remove_edge(e),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut labels: Vec<String> = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut raw_edges: Vec<(usize, usize, usize, f64)> = Vec::new();

    let mut intern = |label: &str, labels: &mut Vec<String>| -> usize {
        if let Some(&i) = seen.get(label) {
            return i;
        }
        let i = labels.len();
        labels.push(label.to_string());
        seen.insert(label.to_string(), i);
        i
    };

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        match fields.as_slice() {
            [] => {}
            ["vertices", n] => {
                if declared.is_some() {
                    return Err(GraphError::Parse {
                        line,
                        message: "repeated vertices header".into(),
                    });
                }
                let n = n.parse::<usize>().map_err(|_| GraphError::Parse {
                    line,
                    message: format!("bad vertex count {n:?}"),
                })?;
                declared = Some((n, line));
            }
            ["vertex", label] => {
                intern(label, &mut labels);
            }
            [s, t, w] => {
                let w = w.parse::<f64>().map_err(|_| GraphError::Parse {
                    line,
                    message: format!("bad weight {w:?}"),
                })?;
                let s = intern(s, &mut labels);
                let t = intern(t, &mut labels);
                raw_edges.push((line, s, t, w));
            }
            _ => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected `<src> <dst> <weight>`, got {:?}", raw.trim()),
                })
            }
        }
    }

    if let Some((n, line)) = declared {
        if labels.len() > n {
            return Err(GraphError::Parse {
                line,
                message: format!("header declares {n} vertices but {} labels used", labels.len()),
            });
        }
        for filler in labels.len()..n {
            let label = filler.to_string();
            if seen.contains_key(&label) {
                return Err(GraphError::Parse {
                    line,
                    message: format!("cannot name unlabelled vertex {filler}: label in use"),
                });
            }
            labels.push(label);
        }
    }

    let mut g = Graph::from_labels(labels);
    for (line, s, t, w) in raw_edges {
        g.insert_edge(line, VertexId::from_index(s), VertexId::from_index(t), w)?;
    }
    Ok(g)
}

/// Canonical text form: header, one declaration per vertex in id order, then
/// edges in (source, target) order.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = format!("vertices {}\n", g.vertex_count());
    for l in g.labels() {
        out.push_str(&format!("vertex {l}\n"));
    }
    for (e, w) in g.edges() {
        out.push_str(&format!("{} {} {}\n", g.label(e.source), g.label(e.target), w));
    }
    out
}

/// Parses a trace file against `g`'s labels. Every update line is checked
/// syntactically; semantic validation happens when the update is applied.
pub fn parse_trace(g: &Graph, text: &str) -> Result<Vec<UpdateOp>, GraphError> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = strip_comment(raw).split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        ops.push(parse_update_fields(g, &fields, line)?);
    }
    Ok(ops)
}

/// Parses a single `update ...` line.
pub fn parse_update_line(g: &Graph, text: &str) -> Result<UpdateOp, GraphError> {
    let fields: Vec<&str> = strip_comment(text).split_whitespace().collect();
    parse_update_fields(g, &fields, 1)
}

fn parse_update_fields(g: &Graph, fields: &[&str], line: usize) -> Result<UpdateOp, GraphError> {
    let lookup = |label: &str| {
        g.vertex(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    };
    let ["update", v, rest @ ..] = fields else {
        return Err(GraphError::Parse {
            line,
            message: "expected `update <vertex> [<src> <dst> <weight|del>]...`".into(),
        });
    };
    if rest.len() % 3 != 0 {
        return Err(GraphError::Parse {
            line,
            message: "edge changes come in triples `<src> <dst> <weight|del>`".into(),
        });
    }
    let mut op = UpdateOp::new(lookup(v)?);
    for change in rest.chunks(3) {
        let e = Edge::new(lookup(change[0])?, lookup(change[1])?);
        let c = if change[2] == "del" {
            EdgeChange::Delete
        } else {
            EdgeChange::Weight(change[2].parse::<f64>().map_err(|_| GraphError::Parse {
                line,
                message: format!("bad weight {:?}", change[2]),
            })?)
        };
        if op.changes.insert(e, c).is_some() {
            return Err(GraphError::Parse {
                line,
                message: format!("edge {} -> {} changed twice", change[0], change[1]),
            });
        }
    }
    Ok(op)
}

pub fn serialize_update(g: &Graph, op: &UpdateOp) -> String {
    let mut out = format!("update {}", g.label(op.vertex));
    for (e, c) in &op.changes {
        let w = match c {
            EdgeChange::Weight(w) => w.to_string(),
            EdgeChange::Delete => "del".to_string(),
        };
        out.push_str(&format!(" {} {} {}", g.label(e.source), g.label(e.target), w));
    }
    out
}


#[cfg(test)]
mod tests {
    use super::fixtures::FIXTURE_G;
    use super::*;

    fn fixture() -> Graph {
        parse_graph(FIXTURE_G).unwrap()
    }

    fn v(g: &Graph, l: &str) -> VertexId {
        g.vertex(l).unwrap()
    }

    #[test]
    fn loads_fixture_g() {
        let g = fixture();
        assert_eq!(g.vertex_count(), 12);
        assert_eq!(g.edge_count(), 16);
        assert_eq!(g.weight(v(&g, "a1"), v(&g, "b1")), Some(4.0));
        assert_eq!(g.weight(v(&g, "a1"), v(&g, "v")), Some(1.0));
    }

    #[test]
    fn header_only_graph() {
        let g = parse_graph("vertices 3\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.label(VertexId(2)), "2");
    }

    #[test]
    fn labels_follow_first_appearance() {
        let g = parse_graph("q p 1\np r 2 # trailing comment\n").unwrap();
        assert_eq!(g.labels(), &["q", "p", "r"]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_graph("x a1 0.0"),
            Err(GraphError::NonPositiveWeight { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("x a1 -2"),
            Err(GraphError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            parse_graph("a b 1\na b 2"),
            Err(GraphError::DuplicateEdge { line: 2, .. })
        ));
        assert!(matches!(parse_graph("a a 1"), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(
            parse_graph("a b"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("a b one"),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("vertices 1\na b 1"),
            Err(GraphError::Parse { .. })
        ));
        assert!(matches!(
            parse_graph("a b inf"),
            Err(GraphError::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn validate_fixture_update() {
        let g = fixture();
        let op = UpdateOp::new(v(&g, "v"))
            .set_weight(v(&g, "a1"), v(&g, "v"), 10.0)
            .set_weight(v(&g, "a2"), v(&g, "v"), 5.0);
        assert_eq!(validate_update(&g, &op), Ok(()));
    }

    #[test]
    fn validate_rejects_decrease_and_non_incident() {
        let g = fixture();
        let dec = UpdateOp::new(v(&g, "v")).set_weight(v(&g, "a1"), v(&g, "v"), 0.5);
        assert!(matches!(
            validate_update(&g, &dec),
            Err(GraphError::WeightDecrease { .. })
        ));
        let far = UpdateOp::new(v(&g, "v")).set_weight(v(&g, "x"), v(&g, "a1"), 7.0);
        assert!(matches!(
            validate_update(&g, &far),
            Err(GraphError::NonIncidentEdge(..))
        ));
        let missing = UpdateOp::new(v(&g, "v")).delete(v(&g, "v"), v(&g, "y"));
        assert!(matches!(
            validate_update(&g, &missing),
            Err(GraphError::UnknownEdge(..))
        ));
        let nan = UpdateOp::new(v(&g, "v")).set_weight(v(&g, "a1"), v(&g, "v"), f64::NAN);
        assert!(matches!(
            validate_update(&g, &nan),
            Err(GraphError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn apply_fixture_update_and_deletion() {
        let g = fixture();
        let op = UpdateOp::new(v(&g, "v"))
            .set_weight(v(&g, "a1"), v(&g, "v"), 10.0)
            .set_weight(v(&g, "a2"), v(&g, "v"), 5.0);
        let g2 = apply_weights(&g, &op);
        assert_eq!(g2.weight(v(&g, "a1"), v(&g, "v")), Some(10.0));
        assert_eq!(g2.weight(v(&g, "a2"), v(&g, "v")), Some(5.0));
        assert_eq!(g2.edge_count(), 16);

        assert_eq!(apply_weights(&g, &UpdateOp::new(v(&g, "v"))), g);

        let del = UpdateOp::new(v(&g, "v")).delete(v(&g, "v"), v(&g, "b1"));
        let g3 = apply_weights(&g, &del);
        assert_eq!(g3.in_degree(v(&g, "b1")), g.in_degree(v(&g, "b1")) - 1);
        assert_eq!(g3.weight(v(&g, "v"), v(&g, "b1")), None);
        assert_eq!(g3.edge_count(), 15);
    }

    #[test]
    fn trace_round_trip() {
        let g = fixture();
        let ops = parse_trace(&g, "# fixture update\nupdate v a1 v 10 a2 v 5\n\nupdate v v b del\n").unwrap();
        assert_eq!(ops.len(), 2);
        assert_eq!(serialize_update(&g, &ops[0]), "update v a1 v 10 a2 v 5");
        assert_eq!(ops[1].changes.values().next(), Some(&EdgeChange::Delete));
        assert!(parse_trace(&g, "update v a1 v").is_err());
        assert!(parse_trace(&g, "update zz").is_err());
        assert!(parse_trace(&g, "remove v").is_err());
    }

    #[test]
    fn canonical_form_is_fixed_point() {
        let g = fixture();
        let text = serialize_graph(&g);
        let g2 = parse_graph(&text).unwrap();
        assert_eq!(g2, g);
        assert_eq!(serialize_graph(&g2), text);
    }
}
