//! Betweenness centrality from the maintained shortest-path dags, plus the
//! cubic pair-sum formula used to check it.

use crate::graph::{Graph, VertexId};
use crate::oracle::OracleResult;
use crate::tuples::TupleSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct BCScores {
    pub score: Vec<f64>,
}

impl BCScores {
    pub fn get(&self, v: VertexId) -> f64 {
        self.score[v.index()]
    }

    /// `<label> <score>` lines sorted by label, scores to 12 significant
    /// digits.
    pub fn lines(&self, g: &Graph) -> Vec<String> {
        let mut out: Vec<(&str, f64)> = g.vertices().map(|v| (g.label(v), self.get(v))).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out.into_iter()
            .map(|(l, s)| format!("{l} {}", format_significant(s, 12)))
            .collect()
    }

    pub fn max_abs_diff(&self, other: &BCScores) -> f64 {
        self.score
            .iter()
            .zip(&other.score)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Dependency accumulation over every source's dag.
pub fn bc_from_dags(ts: &TupleSystem) -> BCScores {
    let n = ts.vertex_count();
    let mut score = vec![0.0; n];
    let mut succ: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut delta = vec![0.0; n];
    for s in (0..n).map(VertexId::from_index) {
        let dag = ts.extract_sp_dag(s);
        for list in &mut succ {
            list.clear();
        }
        for e in &dag.edges {
            succ[e.source.index()].push(e.target);
        }
        let mut order: Vec<VertexId> = (0..n)
            .map(VertexId::from_index)
            .filter(|v| dag.dist[v.index()].is_finite())
            .collect();
        order.sort_by(|a, b| {
            dag.dist[b.index()]
                .total_cmp(&dag.dist[a.index()])
                .then(b.cmp(a))
        });
        for &u in &order {
            let su = dag.sigma[u.index()] as f64;
            delta[u.index()] = succ[u.index()]
                .iter()
                .map(|z| su / dag.sigma[z.index()] as f64 * (1.0 + delta[z.index()]))
                .sum();
            if u != s {
                score[u.index()] += delta[u.index()];
            }
        }
    }
    BCScores { score }
}

/// Sum over pairs (s, t) of the fraction of shortest s-t paths through each
/// vertex.
pub fn bc_pair_formula(o: &OracleResult) -> BCScores {
    let n = o.n;
    let mut score = vec![0.0; n];
    let ids: Vec<VertexId> = (0..n).map(VertexId::from_index).collect();
    for &v in &ids {
        let mut total = 0.0;
        for &s in &ids {
            if s == v || o.sigma(s, v) == 0 {
                continue;
            }
            for &t in &ids {
                if t == v || t == s || o.sigma(s, t) == 0 {
                    continue;
                }
                if o.d(s, v) + o.d(v, t) == o.d(s, t) {
                    total += (o.sigma(s, v) * o.sigma(v, t)) as f64 / o.sigma(s, t) as f64;
                }
            }
        }
        score[v.index()] = total;
    }
    BCScores { score }
}

/// `%.{digits}g` formatting.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
