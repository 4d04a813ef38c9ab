//! Layered instances, their balanced-bipartite baseline, and validation.

mod color;
mod digraph;
mod generate;
mod params;
mod validate;

/// Vertex ids are contiguous and 0-based.
pub type Vertex = usize;

pub use color::{gen_coloring, Color, Coloring, PartialColoring};
pub use digraph::{Digraph, DigraphError};
pub use generate::{gen_br_graph, gen_br_pair, gen_br_simple, simple_sides, BrPair, GenError};
pub use params::{paper_params, BrParams, ParamError, DEFAULT_OUTDEG};
pub use validate::{edge_allowed, validate_br, Violation};
