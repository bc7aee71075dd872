//! JSON and DOT formats.
//!
//! Graphs are `{"vertices": N, "edges": [[u, v], ...]}` with edge indices
//! given by list position. Colorings are `{"palette": k, "colors": [...]}`
//! where an uncolored edge is `-1` or `null` on input and `-1` on output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Color, ColoringError, EdgeColoring, Graph, GraphError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringJson {
    pub palette: Color,
    pub colors: Vec<Option<i64>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson { vertices: g.vertex_count(), edges: g.edges().iter().map(|&(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        let pairs: Vec<(usize, usize)> = j.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::from_edge_list(j.vertices, &pairs)
    }
}

impl From<&EdgeColoring> for ColoringJson {
    fn from(c: &EdgeColoring) -> Self {
        ColoringJson {
            palette: c.palette(),
            colors: c.as_slice().iter().map(|c| Some(c.map_or(-1, i64::from))).collect(),
        }
    }
}

impl TryFrom<ColoringJson> for EdgeColoring {
    type Error = ColoringError;

    fn try_from(j: ColoringJson) -> Result<Self, Self::Error> {
        let palette = j.palette;
        let colors = j
            .colors
            .iter()
            .enumerate()
            .map(|(edge, c)| match *c {
                None | Some(-1) => Ok(None),
                Some(c) if c >= 1 && c <= i64::from(palette) => Ok(Some(c as Color)),
                Some(color) => Err(ColoringError::OutOfPalette { edge, color, palette }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        EdgeColoring::from_colors(palette, colors)
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let j: GraphJson = serde_json::from_str(text)?;
    Ok(Graph::try_from(j)?)
}

pub fn parse_coloring(text: &str) -> Result<EdgeColoring, IoError> {
    let j: ColoringJson = serde_json::from_str(text)?;
    Ok(EdgeColoring::try_from(j)?)
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("plain data serializes")
}

pub fn coloring_to_json(c: &EdgeColoring) -> String {
    serde_json::to_string(&ColoringJson::from(c)).expect("plain data serializes")
}

const DOT_COLORS: [&str; 16] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45", "#fabed4", "#469990",
    "#dcbeff", "#9a6324", "#800000", "#aaffc3", "#808000", "#000075",
];

/// Graphviz rendering; colored edges are labeled and drawn in a fixed
/// 16-entry palette, uncolored edges are dashed gray.
pub fn to_dot(g: &Graph, col: Option<&EdgeColoring>) -> String {
    let mut out = String::from("graph G {\n  node [shape=circle, fontsize=10];\n");
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "  {v};");
    }
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        match col.and_then(|c| c.get(e)) {
            Some(c) => {
                let hue = DOT_COLORS[(c as usize - 1) % DOT_COLORS.len()];
                let _ = writeln!(out, "  {u} -- {v} [label=\"{c}\", color=\"{hue}\", penwidth=2];");
            }
            None if col.is_some() => {
                let _ = writeln!(out, "  {u} -- {v} [style=dashed, color=gray];");
            }
            None => {
                let _ = writeln!(out, "  {u} -- {v};");
            }
        }
    }
    out.push_str("}\n");
    out
}
