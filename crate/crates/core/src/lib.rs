//! Property testing for chordal graphs: exact oracles, the set-coloring
//! tester, M2-free bipartite structure, nearly-simplicial repair, discrete
//! tree representations and the composed pinned / chordality testers.

pub mod coloring;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod guards;
pub mod m2;
pub mod oracles;
pub mod pipeline;
pub mod set;
pub mod simplicial;
pub mod tree;

pub use error::{Error, Result};
pub use graph::{EditKind, EditSet, Graph};
pub use guards::Guards;
pub use set::VertexSet;
