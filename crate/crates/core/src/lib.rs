//! Star edge coloring of cactus graphs.
//!
//! A star edge coloring is a proper edge coloring with no path or cycle of
//! four edges colored `a, b, a, b`. [`color::color_cactus`] colors any cactus
//! with maximum degree Δ using at most ⌊3Δ/2⌋+1 colors; [`exact`] decides the
//! exact question for small graphs; [`verify`] checks any coloring.

pub mod cactus;
pub mod color;
pub mod constructions;
pub mod exact;
pub mod graph;
pub mod io;
pub mod ucc;
pub mod verify;

pub use color::{color_cactus, CactusColoring};
pub use graph::{star_bound, Color, EdgeColoring, EdgeId, Graph, Vertex};
pub use verify::{verify_star_coloring, ColoringReport};
