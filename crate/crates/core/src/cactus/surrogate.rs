//! The unicyclic surrogate of a block.
//!
//! The surrogate keeps the block, its second- and third-class edges, and
//! opens every attached triangle or 4-cycle: the far edges of such a cycle are
//! dropped and each of the two near vertices gets a pendant edge ("slot") that
//! stands in for the dropped edge next to it.

use std::collections::{BTreeSet, HashMap};

use crate::graph::{EdgeColoring, EdgeId, Graph, Vertex};

use super::{classify_edges, Block, BlockDecomposition, BlockKind, CactusError, EdgeClasses};

/// A pendant edge standing in for `replaces`, an edge of cycle block `cycle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub cycle: usize,
    pub replaces: EdgeId,
}

#[derive(Debug, Clone)]
pub struct UccSurrogate {
    pub block_index: usize,
    pub graph: Graph,
    /// The block in surrogate numbering; its edges are `0..block.len()`.
    pub block: Block,
    pub classes: EdgeClasses,
    /// Original edge behind each surrogate edge; `None` for slots.
    pub origin: Vec<Option<EdgeId>>,
    pub slots: Vec<Option<Slot>>,
    pub vertex_origin: Vec<Option<Vertex>>,
    /// Colors carried over from the host coloring.
    pub inherited: EdgeColoring,
    edge_of: HashMap<EdgeId, EdgeId>,
    vertex_of: HashMap<Vertex, Vertex>,
}

impl UccSurrogate {
    pub fn surrogate_edge(&self, original: EdgeId) -> Option<EdgeId> {
        self.edge_of.get(&original).copied()
    }

    pub fn surrogate_vertex(&self, original: Vertex) -> Option<Vertex> {
        self.vertex_of.get(&original).copied()
    }

    /// The slot at original vertex `v` opened for cycle block `cycle`.
    pub fn slot_at(&self, cycle: usize, v: Vertex) -> Option<EdgeId> {
        let sv = self.surrogate_vertex(v)?;
        self.graph
            .neighbors(sv)
            .iter()
            .map(|&(_, e)| e)
            .find(|&e| matches!(self.slots[e], Some(s) if s.cycle == cycle))
    }

    /// Original edge a surrogate edge speaks for: itself, or the edge a slot replaces.
    pub fn represented(&self, e: EdgeId) -> EdgeId {
        match (self.origin[e], self.slots[e]) {
            (Some(o), _) => o,
            (None, Some(s)) => s.replaces,
            (None, None) => unreachable!("surrogate edge without origin"),
        }
    }
}

/// Builds the surrogate of block `block_index` of the cactus `g`, carrying
/// over the colors of `col`.
pub fn build_ucc_surrogate(
    g: &Graph,
    col: &EdgeColoring,
    bd: &BlockDecomposition,
    block_index: usize,
) -> Result<UccSurrogate, CactusError> {
    let block = bd.blocks.get(block_index).ok_or(CactusError::NoSuchBlock(block_index))?;
    let classes = classify_edges(g, block);

    // Second-class edge -> (cycle, replaced edge) for attached short cycles.
    let mut opened: HashMap<EdgeId, (usize, EdgeId)> = HashMap::new();
    let mut dropped: BTreeSet<EdgeId> = BTreeSet::new();
    for (&x, e2) in &classes.e2 {
        for &e in e2 {
            let d = bd.edge_block[e];
            let cyc = &bd.blocks[d];
            if cyc.kind != BlockKind::Cycle || cyc.len() > 4 {
                continue;
            }
            let y = g.other_end(e, x);
            let replaced = cyc
                .edges
                .iter()
                .copied()
                .find(|&f| f != e && {
                    let (a, b) = g.endpoints(f);
                    a == y || b == y
                })
                .expect("cycle vertex has two cycle edges");
            opened.insert(e, (d, replaced));
            for &f in &cyc.edges {
                let (a, b) = g.endpoints(f);
                if a != x && b != x {
                    dropped.insert(f);
                }
            }
        }
    }

    let mut vertex_of: HashMap<Vertex, Vertex> = HashMap::new();
    let mut vertex_origin: Vec<Option<Vertex>> = Vec::new();
    let mut pairs = Vec::new();
    let mut origin = Vec::new();
    let mut slots = Vec::new();
    let mut inherited = Vec::new();

    macro_rules! vertex {
        ($v:expr) => {
            *vertex_of.entry($v).or_insert_with(|| {
                vertex_origin.push(Some($v));
                vertex_origin.len() - 1
            })
        };
    }
    macro_rules! keep {
        ($e:expr) => {{
            let (a, b) = g.endpoints($e);
            let sa = vertex!(a);
            let sb = vertex!(b);
            pairs.push((sa, sb));
            origin.push(Some($e));
            slots.push(None);
            inherited.push(col.get($e));
        }};
    }

    for &x in &block.vertices {
        let _ = vertex!(x);
    }
    for &e in &block.edges {
        keep!(e);
    }
    for &x in &block.vertices {
        for &e in &classes.e2[&x] {
            keep!(e);
        }
    }
    for &x in &block.vertices {
        for &e in &classes.e2[&x] {
            for &f in &classes.e3[&e] {
                if !dropped.contains(&f) {
                    keep!(f);
                }
            }
            if let Some(&(d, replaced)) = opened.get(&e) {
                let sy = vertex!(g.other_end(e, x));
                vertex_origin.push(None);
                pairs.push((sy, vertex_origin.len() - 1));
                origin.push(None);
                slots.push(Some(Slot { cycle: d, replaces: replaced }));
                inherited.push(col.get(replaced));
            }
        }
    }

    let graph = Graph::from_edge_list(vertex_origin.len(), &pairs).expect("surrogate is simple");
    let sblock = Block {
        kind: block.kind,
        edges: (0..block.len()).collect(),
        vertices: block.vertices.iter().map(|v| vertex_of[v]).collect(),
    };
    let sclasses = classify_edges(&graph, &sblock);
    let edge_of = origin.iter().enumerate().filter_map(|(i, o)| o.map(|o| (o, i))).collect();
    let inherited = EdgeColoring::from_colors(col.palette(), inherited).expect("colors come from a valid coloring");
    Ok(UccSurrogate {
        block_index,
        graph,
        block: sblock,
        classes: sclasses,
        origin,
        slots,
        vertex_origin,
        inherited,
        edge_of,
        vertex_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::{block_decompose, semiregular_augment};

    fn surrogate_of(g: &Graph, pick: impl Fn(&Block) -> bool) -> UccSurrogate {
        let bd = block_decompose(g).unwrap();
        let b = bd.blocks.iter().position(pick).unwrap();
        build_ucc_surrogate(g, &EdgeColoring::uncolored(g.edge_count(), 10), &bd, b).unwrap()
    }

    fn is_unicyclic(s: &UccSurrogate) -> bool {
        s.graph.is_connected() && s.graph.edge_count() == s.graph.vertex_count()
    }

    #[test]
    fn attached_triangle_opens_into_two_slots() {
        // Central 5-cycle on 0..5; triangle 0,5,6 attached at 0.
        let mut pairs: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        pairs.extend([(0, 5), (5, 6), (6, 0)]);
        let g = semiregular_augment(&Graph::from_edge_list(7, &pairs).unwrap(), 4).unwrap().graph;
        let s = surrogate_of(&g, |b| b.len() == 5);
        assert!(is_unicyclic(&s));
        let bd = block_decompose(&g).unwrap();
        let tri = bd.blocks.iter().position(|b| b.len() == 3).unwrap();
        let ab = g.edge_between(5, 6).unwrap();
        assert!(s.surrogate_edge(ab).is_none());
        let s5 = s.slot_at(tri, 5).unwrap();
        let s6 = s.slot_at(tri, 6).unwrap();
        assert_ne!(s5, s6);
        assert_eq!(s.slots[s5].unwrap().replaces, ab);
        assert_eq!(s.slots[s6].unwrap().replaces, ab);
        assert_eq!(s.graph.degree(s.surrogate_vertex(5).unwrap()), 4);
    }

    #[test]
    fn attached_square_slots_replace_neighbouring_edges() {
        // Central triangle 0,1,2; 4-cycle 0,3,4,5 at 0.
        let pairs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 0)];
        let g = semiregular_augment(&Graph::from_edge_list(6, &pairs).unwrap(), 4).unwrap().graph;
        let s = surrogate_of(&g, |b| b.len() == 3);
        assert!(is_unicyclic(&s));
        let bd = block_decompose(&g).unwrap();
        let sq = bd.blocks.iter().position(|b| b.len() == 4).unwrap();
        let s3 = s.slot_at(sq, 3).unwrap();
        let s5 = s.slot_at(sq, 5).unwrap();
        assert_eq!(s.slots[s3].unwrap().replaces, g.edge_between(3, 4).unwrap());
        assert_eq!(s.slots[s5].unwrap().replaces, g.edge_between(4, 5).unwrap());
        assert!(s.surrogate_vertex(4).is_none());
    }

    #[test]
    fn long_attached_cycle_is_kept() {
        let mut pairs = vec![(0, 1), (1, 2), (2, 0)];
        pairs.extend([(0, 3), (3, 4), (4, 5), (5, 6), (6, 0)]);
        let g = semiregular_augment(&Graph::from_edge_list(7, &pairs).unwrap(), 4).unwrap().graph;
        let s = surrogate_of(&g, |b| b.len() == 3);
        assert!(is_unicyclic(&s));
        assert!(s.slots.iter().all(Option::is_none));
        assert!(s.surrogate_edge(g.edge_between(3, 4).unwrap()).is_some());
        assert!(s.surrogate_edge(g.edge_between(6, 5).unwrap()).is_some());
        assert!(s.surrogate_edge(g.edge_between(4, 5).unwrap()).is_none());
    }

    #[test]
    fn inherits_colors_through_slots() {
        let pairs = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let g = Graph::from_edge_list(5, &pairs).unwrap();
        let bd = block_decompose(&g).unwrap();
        let mut col = EdgeColoring::uncolored(6, 4);
        let far = g.edge_between(3, 4).unwrap();
        col.set(far, 3);
        let b = bd.first_block_at(1).unwrap();
        let s = build_ucc_surrogate(&g, &col, &bd, b).unwrap();
        let d = bd.edge_block[far];
        assert_eq!(s.inherited.get(s.slot_at(d, 3).unwrap()), Some(3));
        assert_eq!(s.inherited.get(s.slot_at(d, 4).unwrap()), Some(3));
    }

    #[test]
    fn block_edges_come_first() {
        let g = Graph::from_edge_list(4, &[(0, 3), (1, 2), (2, 3), (3, 1)]).unwrap();
        let s = surrogate_of(&g, |b| b.kind == BlockKind::Cycle);
        assert_eq!(s.block.edges, vec![0, 1, 2]);
        for (i, &e) in s.block.edges.iter().enumerate() {
            let (a, b) = s.graph.endpoints(e);
            let (u, w) = (s.block.vertices[i], s.block.vertices[(i + 1) % 3]);
            assert!((a, b) == (u, w) || (a, b) == (w, u));
        }
    }
}
