//! Simple undirected graphs with dense vertex/edge indices, and the edge
//! coloring value shared by every other module.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

/// Vertex index, dense in `0..vertex_count`.
pub type Vertex = usize;
/// Edge index, dense in `0..edge_count`; equal to the position in the input list.
pub type EdgeId = usize;
/// A color, always in `1..=palette`.
pub type Color = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge {index} ({u}, {v}) is a self-loop")]
    SelfLoop { index: usize, u: Vertex, v: Vertex },
    #[error("edge {index} ({u}, {v}) duplicates edge {first}")]
    DuplicateEdge { index: usize, first: usize, u: Vertex, v: Vertex },
    #[error("edge {index} ({u}, {v}) has an endpoint outside 0..{vertex_count}")]
    OutOfRange { index: usize, u: Vertex, v: Vertex, vertex_count: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// Simple undirected graph.
///
/// Edge `i` is `edges()[i]`; adjacency lists hold `(neighbor, edge)` pairs in
/// insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(Vertex, Vertex)>,
    adjacency: Vec<Vec<(Vertex, EdgeId)>>,
}

impl Graph {
    /// Builds a graph whose edge `i` is `pairs[i]`.
    pub fn from_edge_list(vertex_count: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashMap::with_capacity(pairs.len());
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (index, &(u, v)) in pairs.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::OutOfRange { index, u, v, vertex_count });
            }
            if u == v {
                return Err(GraphError::SelfLoop { index, u, v });
            }
            let key = (u.min(v), u.max(v));
            if let Some(&first) = seen.get(&key) {
                return Err(GraphError::DuplicateEdge { index, first, u, v });
            }
            seen.insert(key, index);
            adjacency[u].push((v, index));
            adjacency[v].push((u, index));
        }
        Ok(Graph { vertex_count, edges: pairs.to_vec(), adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &[(Vertex, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Δ(g); 0 for edgeless graphs.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.adjacency[u].iter().find(|&&(w, _)| w == v).map(|&(_, e)| e)
    }

    pub fn are_adjacent_edges(&self, e: EdgeId, f: EdgeId) -> bool {
        let (a, b) = self.edges[e];
        let (c, d) = self.edges[f];
        e != f && (a == c || a == d || b == c || b == d)
    }

    /// Connected, counting the empty graph and a single vertex as connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_count <= 1 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.vertex_count
    }

    /// True iff every vertex has degree `delta` or 1 (a single vertex counts).
    pub fn is_delta_semiregular(&self, delta: usize) -> Result<bool, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        if self.vertex_count == 1 {
            return Ok(true);
        }
        Ok(self.adjacency.iter().all(|a| a.len() == delta || a.len() == 1))
    }

    /// Subgraph on the given edges, keeping vertex numbering. Edge `i` of the
    /// result is `edges[i]` of `self`.
    pub fn edge_subgraph(&self, edges: &[EdgeId]) -> Graph {
        let pairs: Vec<_> = edges.iter().map(|&e| self.edges[e]).collect();
        Graph::from_edge_list(self.vertex_count, &pairs).expect("subgraph of a simple graph is simple")
    }
}

/// Partial or total assignment of colors `1..=palette` to edges. Absent means
/// uncolored; color 0 is never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    palette: Color,
    colors: Vec<Option<Color>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("edge {edge} has color {color} outside the palette 1..={palette}")]
    OutOfPalette { edge: EdgeId, color: i64, palette: Color },
    #[error("coloring lists {got} edges but the graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

impl EdgeColoring {
    /// All `edge_count` edges uncolored.
    pub fn uncolored(edge_count: usize, palette: Color) -> Self {
        EdgeColoring { palette, colors: vec![None; edge_count] }
    }

    pub fn from_colors(palette: Color, colors: Vec<Option<Color>>) -> Result<Self, ColoringError> {
        for (edge, c) in colors.iter().enumerate() {
            if let Some(c) = *c {
                if c == 0 || c > palette {
                    return Err(ColoringError::OutOfPalette { edge, color: c as i64, palette });
                }
            }
        }
        Ok(EdgeColoring { palette, colors })
    }

    /// Total coloring from plain colors.
    pub fn total(palette: Color, colors: &[Color]) -> Result<Self, ColoringError> {
        Self::from_colors(palette, colors.iter().map(|&c| Some(c)).collect())
    }

    pub fn palette(&self) -> Color {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// Assigns a color.
    ///
    /// # Panics
    /// If `c` is outside `1..=palette`.
    pub fn set(&mut self, e: EdgeId, c: Color) {
        assert!(c >= 1 && c <= self.palette, "color {c} outside 1..={}", self.palette);
        self.colors[e] = Some(c);
    }

    pub fn clear(&mut self, e: EdgeId) {
        self.colors[e] = None;
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    /// Number of distinct colors present.
    pub fn colors_used(&self) -> usize {
        self.colors.iter().flatten().collect::<HashSet<_>>().len()
    }

    pub fn max_color(&self) -> Option<Color> {
        self.colors.iter().flatten().copied().max()
    }

    pub fn with_palette(mut self, palette: Color) -> Result<Self, ColoringError> {
        self.palette = palette;
        Self::from_colors(palette, self.colors)
    }

    pub fn check_length(&self, g: &Graph) -> Result<(), ColoringError> {
        if self.colors.len() != g.edge_count() {
            return Err(ColoringError::LengthMismatch { expected: g.edge_count(), got: self.colors.len() });
        }
        Ok(())
    }
}

/// C(v): colors on the colored edges incident to `v`.
pub fn incident_colors(g: &Graph, col: &EdgeColoring, v: Vertex) -> BTreeSet<Color> {
    g.neighbors(v).iter().filter_map(|&(_, e)| col.get(e)).collect()
}

/// C′(v) = {1..palette} ∖ C(v).
pub fn missing_colors(g: &Graph, col: &EdgeColoring, v: Vertex) -> BTreeSet<Color> {
    let present = incident_colors(g, col, v);
    (1..=col.palette()).filter(|c| !present.contains(c)).collect()
}

/// ⌊3Δ/2⌋ + 1.
pub fn star_bound(delta: usize) -> usize {
    3 * delta / 2 + 1
}
