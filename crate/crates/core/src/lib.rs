//! Decremental all-pairs all-shortest-paths over directed graphs with
//! positive real weights, kept as a system of locally shortest path tuples,
//! with betweenness centrality read off the maintained dags.

pub mod centrality;
pub mod cli;
pub mod engine;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod session;
pub mod tuples;

pub use centrality::{bc_from_dags, bc_pair_formula, BCScores};
pub use engine::{decremental_update, UpdateError, UpdateStats};
pub use graph::{Edge, EdgeChange, Graph, GraphError, UpdateOp, VertexId};
pub use oracle::{build_tuple_system, static_apasp, OracleResult};
pub use session::Session;
pub use tuples::{HeapKey, Triple, Tuple, TupleError, TupleSystem};
