//! Block structure of cactus graphs.
//!
//! Every block of a cactus is a single edge or a cycle. The decomposition
//! here numbers blocks by their smallest edge index, stores cycles in a
//! canonical cyclic order, and orders blocks by breadth-first search over the
//! block graph (blocks adjacent when they share a vertex).

mod surrogate;

pub use surrogate::{build_ucc_surrogate, Slot, UccSurrogate};

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CactusError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not a cactus: block with edges {edges:?} is neither an edge nor a cycle")]
    NotCactus { edges: Vec<EdgeId> },
    #[error("delta {delta} is below the maximum degree {max_degree}")]
    DeltaTooSmall { delta: usize, max_degree: usize },
    #[error("block index {0} out of range")]
    NoSuchBlock(usize),
}

impl From<GraphError> for CactusError {
    fn from(_: GraphError) -> Self {
        CactusError::Disconnected
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Edge,
    Cycle,
}

/// A block of a cactus.
///
/// For cycles, `vertices[i]` and `vertices[i + 1]` (cyclically) are the ends
/// of `edges[i]`, starting at the smallest vertex and heading to its smaller
/// neighbor on the cycle. For an edge block, `vertices` is the sorted pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub kind: BlockKind,
    pub edges: Vec<EdgeId>,
    pub vertices: Vec<Vertex>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// Position of `v` in the cyclic vertex order.
    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<Vertex>,
    /// Blocks sharing a vertex with each block, ascending.
    pub block_adjacency: Vec<Vec<usize>>,
    /// Block visiting order; empty until [`block_bfs_order`] fills it.
    pub sigma: Vec<usize>,
    #[serde(skip)]
    pub edge_block: Vec<usize>,
    #[serde(skip)]
    pub vertex_blocks: Vec<Vec<usize>>,
}

impl BlockDecomposition {
    /// Lowest-indexed block containing `v`.
    pub fn first_block_at(&self, v: Vertex) -> Option<usize> {
        self.vertex_blocks.get(v).and_then(|b| b.first().copied())
    }

    pub fn cycle_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.kind == BlockKind::Cycle).count()
    }
}

/// Edge sets of the biconnected components, each sorted, ordered by smallest
/// edge index. Works on any graph.
pub(crate) fn biconnected_components(g: &Graph) -> Vec<Vec<EdgeId>> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut comps = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, edge to parent, next neighbor position)
        let mut stack: Vec<(Vertex, Option<EdgeId>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, parent_edge, ref mut pos)) = stack.last_mut() {
            if let Some(&(w, e)) = g.neighbors(v).get(*pos) {
                *pos += 1;
                if Some(e) == parent_edge {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    edge_stack.push(e);
                    stack.push((w, Some(e), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(e);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let (Some(&(u, _, _)), Some(pe)) = (stack.last(), parent_edge) {
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        let mut comp = Vec::new();
                        while let Some(f) = edge_stack.pop() {
                            comp.push(f);
                            if f == pe {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
    }
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

fn block_from_edges(g: &Graph, edges: &[EdgeId]) -> Result<Block, CactusError> {
    let mut verts = BTreeSet::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        verts.insert(u);
        verts.insert(v);
    }
    if edges.len() == 1 {
        return Ok(Block { kind: BlockKind::Edge, edges: edges.to_vec(), vertices: verts.into_iter().collect() });
    }
    if edges.len() != verts.len() || edges.len() < 3 {
        return Err(CactusError::NotCactus { edges: edges.to_vec() });
    }
    // Each vertex has exactly two block edges in a cycle block.
    let in_block: BTreeSet<EdgeId> = edges.iter().copied().collect();
    let local = |v: Vertex| -> Vec<(Vertex, EdgeId)> {
        g.neighbors(v).iter().filter(|(_, e)| in_block.contains(e)).copied().collect()
    };
    for &v in &verts {
        if local(v).len() != 2 {
            return Err(CactusError::NotCactus { edges: edges.to_vec() });
        }
    }
    let start = *verts.iter().next().expect("nonempty");
    let mut nb = local(start);
    nb.sort_unstable();
    let mut vertices = vec![start];
    let mut cyc_edges = vec![nb[0].1];
    let mut prev_edge = nb[0].1;
    let mut cur = nb[0].0;
    while cur != start {
        vertices.push(cur);
        let (next, e) = local(cur).into_iter().find(|&(_, e)| e != prev_edge).expect("cycle vertex has two block edges");
        cyc_edges.push(e);
        prev_edge = e;
        cur = next;
    }
    if vertices.len() != verts.len() {
        return Err(CactusError::NotCactus { edges: edges.to_vec() });
    }
    Ok(Block { kind: BlockKind::Cycle, edges: cyc_edges, vertices })
}

/// Blocks of a connected cactus; `sigma` is left empty.
pub fn block_decompose(g: &Graph) -> Result<BlockDecomposition, CactusError> {
    if !g.is_connected() {
        return Err(CactusError::Disconnected);
    }
    let blocks = biconnected_components(g)
        .iter()
        .map(|edges| block_from_edges(g, edges))
        .collect::<Result<Vec<_>, _>>()?;

    let mut edge_block = vec![usize::MAX; g.edge_count()];
    let mut vertex_blocks = vec![Vec::new(); g.vertex_count()];
    for (i, b) in blocks.iter().enumerate() {
        for &e in &b.edges {
            edge_block[e] = i;
        }
        for &v in &b.vertices {
            vertex_blocks[v].push(i);
        }
    }
    let cut_vertices = (0..g.vertex_count()).filter(|&v| vertex_blocks[v].len() > 1).collect();
    let mut adjacency: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); blocks.len()];
    for at in &vertex_blocks {
        for &a in at {
            for &b in at {
                if a != b {
                    adjacency[a].insert(b);
                }
            }
        }
    }
    Ok(BlockDecomposition {
        blocks,
        cut_vertices,
        block_adjacency: adjacency.into_iter().map(|s| s.into_iter().collect()).collect(),
        sigma: Vec::new(),
        edge_block,
        vertex_blocks,
    })
}

/// True iff every block of the connected graph `g` is an edge or a cycle.
pub fn is_cactus(g: &Graph) -> Result<bool, CactusError> {
    if !g.is_connected() {
        return Err(CactusError::Disconnected);
    }
    Ok(biconnected_components(g).iter().all(|edges| block_from_edges(g, edges).is_ok()))
}

/// Fills `sigma` by BFS over the block graph from `root`; each layer is
/// visited in ascending block index.
pub fn block_bfs_order(mut bd: BlockDecomposition, root: usize) -> Result<BlockDecomposition, CactusError> {
    if root >= bd.blocks.len() {
        return Err(CactusError::NoSuchBlock(root));
    }
    let mut seen = vec![false; bd.blocks.len()];
    seen[root] = true;
    let mut sigma = vec![root];
    let mut layer = vec![root];
    while !layer.is_empty() {
        let mut next = BTreeSet::new();
        for &b in &layer {
            for &c in &bd.block_adjacency[b] {
                if !seen[c] {
                    next.insert(c);
                }
            }
        }
        for &c in &next {
            seen[c] = true;
        }
        sigma.extend(next.iter().copied());
        layer = next.into_iter().collect();
    }
    bd.sigma = sigma;
    Ok(bd)
}

/// Decomposes and orders from the block containing vertex 0.
pub fn ordered_blocks(g: &Graph) -> Result<BlockDecomposition, CactusError> {
    let bd = block_decompose(g)?;
    match bd.first_block_at(0) {
        Some(root) => block_bfs_order(bd, root),
        None => Ok(bd),
    }
}

/// The three edge classes around a block.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeClasses {
    /// Block edges.
    pub e1: Vec<EdgeId>,
    /// Per block vertex, the non-block edges at it, ascending.
    pub e2: BTreeMap<Vertex, Vec<EdgeId>>,
    /// Per second-class edge, the edges adjacent to it outside the first two
    /// classes, ascending.
    pub e3: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl EdgeClasses {
    pub fn e2_all(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.e2.values().flatten().copied()
    }

    pub fn e3_all(&self) -> BTreeSet<EdgeId> {
        self.e3.values().flatten().copied().collect()
    }
}

pub fn classify_edges(g: &Graph, block: &Block) -> EdgeClasses {
    let in_block: BTreeSet<Vertex> = block.vertices.iter().copied().collect();
    let e1: BTreeSet<EdgeId> = block.edges.iter().copied().collect();
    let mut e2 = BTreeMap::new();
    let mut e2_set = BTreeSet::new();
    for &x in &block.vertices {
        let mut at: Vec<EdgeId> = g
            .neighbors(x)
            .iter()
            .filter(|&&(y, e)| !in_block.contains(&y) && !e1.contains(&e))
            .map(|&(_, e)| e)
            .collect();
        at.sort_unstable();
        e2_set.extend(at.iter().copied());
        e2.insert(x, at);
    }
    let mut e3 = BTreeMap::new();
    for (&x, edges) in &e2 {
        for &e in edges {
            let y = g.other_end(e, x);
            let mut out: Vec<EdgeId> = g
                .neighbors(y)
                .iter()
                .map(|&(_, f)| f)
                .filter(|f| !e1.contains(f) && !e2_set.contains(f))
                .collect();
            out.sort_unstable();
            e3.insert(e, out);
        }
    }
    EdgeClasses { e1: block.edges.clone(), e2, e3 }
}

/// A graph padded with leaves, with its original edges as a prefix.
#[derive(Debug, Clone)]
pub struct Augmented {
    pub graph: Graph,
    pub original_vertices: usize,
    pub original_edges: usize,
}

/// Pads every vertex of degree ≥ 2 with new leaves up to degree `delta`.
/// Original edge indices are preserved; new edges follow in vertex order.
pub fn semiregular_augment(g: &Graph, delta: usize) -> Result<Augmented, CactusError> {
    let max_degree = g.max_degree();
    if delta < max_degree {
        return Err(CactusError::DeltaTooSmall { delta, max_degree });
    }
    if !g.is_connected() {
        return Err(CactusError::Disconnected);
    }
    let mut pairs = g.edges().to_vec();
    let mut next = g.vertex_count();
    for v in 0..g.vertex_count() {
        let d = g.degree(v);
        if d >= 2 {
            for _ in d..delta {
                pairs.push((v, next));
                next += 1;
            }
        }
    }
    let graph = Graph::from_edge_list(next, &pairs).expect("padding keeps the graph simple");
    Ok(Augmented { graph, original_vertices: g.vertex_count(), original_edges: g.edge_count() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, pairs: &[(usize, usize)]) -> Graph {
        Graph::from_edge_list(n, pairs).unwrap()
    }

    #[test]
    fn triangle_with_pendant() {
        let bd = block_decompose(&g(4, &[(0, 1), (1, 2), (2, 0), (2, 3)])).unwrap();
        assert_eq!(bd.blocks.len(), 2);
        assert_eq!(bd.blocks[0].kind, BlockKind::Cycle);
        assert_eq!(bd.blocks[0].len(), 3);
        assert_eq!(bd.blocks[1].kind, BlockKind::Edge);
        assert_eq!(bd.cut_vertices, vec![2]);
    }

    #[test]
    fn path_blocks() {
        let bd = block_decompose(&g(4, &[(0, 1), (1, 2), (2, 3)])).unwrap();
        assert_eq!(bd.blocks.len(), 3);
        assert!(bd.blocks.iter().all(|b| b.kind == BlockKind::Edge));
    }

    #[test]
    fn bowtie() {
        let bd = block_decompose(&g(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)])).unwrap();
        assert_eq!(bd.blocks.len(), 2);
        assert!(bd.blocks.iter().all(|b| b.kind == BlockKind::Cycle));
        assert_eq!(bd.cut_vertices, vec![2]);
        assert_eq!(bd.block_adjacency, vec![vec![1], vec![0]]);
    }

    #[test]
    fn cyclic_order_is_canonical() {
        // 5-cycle 3-1-4-0-2-3; smallest vertex 0, smaller neighbor 2.
        let graph = g(5, &[(3, 1), (1, 4), (4, 0), (0, 2), (2, 3)]);
        let bd = block_decompose(&graph).unwrap();
        let b = &bd.blocks[0];
        assert_eq!(b.vertices, vec![0, 2, 3, 1, 4]);
        assert_eq!(b.edges, vec![3, 4, 0, 1, 2]);
        for (i, &e) in b.edges.iter().enumerate() {
            let (u, v) = graph.endpoints(e);
            let (a, c) = (b.vertices[i], b.vertices[(i + 1) % 5]);
            assert!((u, v) == (a, c) || (u, v) == (c, a));
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        assert_eq!(block_decompose(&g(4, &[(0, 1), (2, 3)])), Err(CactusError::Disconnected));
    }

    #[test]
    fn k4_is_not_a_cactus() {
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(!is_cactus(&k4).unwrap());
        assert!(matches!(block_decompose(&k4), Err(CactusError::NotCactus { .. })));
    }

    #[test]
    fn theta_graph_is_not_a_cactus() {
        let theta = g(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2)]);
        assert!(!is_cactus(&theta).unwrap());
    }

    #[test]
    fn trees_are_cacti() {
        assert!(is_cactus(&g(5, &[(0, 1), (1, 2), (1, 3), (3, 4)])).unwrap());
        assert!(is_cactus(&g(1, &[])).unwrap());
    }

    #[test]
    fn bfs_examples() {
        let single = block_bfs_order(block_decompose(&g(3, &[(0, 1), (1, 2), (2, 0)])).unwrap(), 0).unwrap();
        assert_eq!(single.sigma, vec![0]);
        let star = block_bfs_order(block_decompose(&g(4, &[(0, 1), (0, 2), (0, 3)])).unwrap(), 1).unwrap();
        assert_eq!(star.sigma, vec![1, 0, 2]);
        let chain = block_bfs_order(block_decompose(&g(4, &[(0, 1), (1, 2), (2, 3)])).unwrap(), 0).unwrap();
        assert_eq!(chain.sigma, vec![0, 1, 2]);
    }

    #[test]
    fn bfs_layers_sorted() {
        // Root edge 0-1; layer 1: blocks at 1 -> edges (1,2) idx1 and (1,3) idx2.
        // Layer 2: (3,4) idx3 hangs off 3, (2,5) idx4 hangs off 2.
        let graph = g(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (2, 5)]);
        let bd = block_bfs_order(block_decompose(&graph).unwrap(), 0).unwrap();
        assert_eq!(bd.sigma, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn classify_isolated_triangle() {
        let graph = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let bd = block_decompose(&graph).unwrap();
        let cls = classify_edges(&graph, &bd.blocks[0]);
        assert_eq!(cls.e1.len(), 3);
        assert!(cls.e2.values().all(Vec::is_empty));
        assert!(cls.e3.is_empty());
    }

    #[test]
    fn classify_star_edge_block() {
        let graph = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let bd = block_decompose(&graph).unwrap();
        let cls = classify_edges(&graph, &bd.blocks[0]);
        assert_eq!(cls.e1, vec![0]);
        assert_eq!(cls.e2[&0], vec![1, 2]);
        assert!(cls.e2[&1].is_empty());
        assert!(cls.e3.values().all(Vec::is_empty));
    }

    /// The drawn UCC: a 6-cycle whose vertex x carries three tree edges, one
    /// of which continues with three more; x′ carries one tree edge.
    #[test]
    fn classify_six_cycle_example() {
        let mut pairs: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        // x = 1; tree edges to 6, 7, 8; 8 has children 9, 10, 11.
        pairs.extend([(1, 6), (1, 7), (1, 8), (8, 9), (8, 10), (8, 11)]);
        // x′ = 4 with one tree edge.
        pairs.push((4, 12));
        let graph = g(13, &pairs);
        let bd = block_decompose(&graph).unwrap();
        let cycle = bd.blocks.iter().find(|b| b.kind == BlockKind::Cycle).unwrap();
        let cls = classify_edges(&graph, cycle);
        assert_eq!(cls.e1.len(), 6);
        assert_eq!(cls.e2[&1].len(), 3);
        assert_eq!(cls.e2[&4].len(), 1);
        let e = graph.edge_between(1, 8).unwrap();
        assert_eq!(cls.e3[&e].len(), 3);
        assert!(cls.e3[&e].iter().all(|&f| graph.endpoints(f).0 == 8));
    }

    #[test]
    fn augment_examples() {
        let p3 = g(3, &[(0, 1), (1, 2)]);
        let a = semiregular_augment(&p3, 3).unwrap();
        assert_eq!(a.graph.edge_count(), 3);
        assert_eq!(a.graph.degree(1), 3);

        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(semiregular_augment(&star, 3).unwrap().graph, star);

        let tri = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let a = semiregular_augment(&tri, 4).unwrap();
        assert_eq!(a.graph.edge_count(), 9);
        assert_eq!(&a.graph.edges()[..3], tri.edges());
        assert!(a.graph.is_delta_semiregular(4).unwrap());

        assert!(matches!(semiregular_augment(&star, 2), Err(CactusError::DeltaTooSmall { .. })));
    }
}
