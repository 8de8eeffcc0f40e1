//! Exact and approximate counting of independent sets in k-partite
//! k-uniform hypergraphs through a polymer model and its truncated cluster
//! expansion, together with brute-force oracles and instance checkers.

pub mod budget;
pub mod closed_form;
pub mod cluster;
pub mod counting;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod lab;
pub mod matching;
pub mod numeric;
pub mod polymer;
pub mod report;
pub mod ursell;

pub use budget::Budgets;
pub use error::{Error, Result};
pub use hypergraph::{GirthSearch, Hypergraph, LinkGraph, VertexId};
pub use numeric::{LogNumber, Rational};
