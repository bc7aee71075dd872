//! Star edge coloring of unicyclic surrogates.
//!
//! The block is colored with a fixed cyclic pattern, the second-class edges at
//! every block vertex share the smallest colors missing from the block, and
//! the third-class edges hanging below the `i`-th second-class edge at a vertex
//! `x` take the colors missing at `x` first, then colors borrowed from the
//! siblings of opposite index parity before `i` and equal parity after `i`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cactus::{
    block_decompose, build_ucc_surrogate, semiregular_augment, BlockKind, CactusError, UccSurrogate,
};
use crate::graph::{star_bound, Color, EdgeColoring, EdgeId, Graph, Vertex};
use crate::verify::{first_violation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UccError {
    #[error("a cycle block needs delta >= 3, got {delta}")]
    DeltaTooSmall { delta: usize },
    #[error("no block is a cycle of length {0}")]
    InvalidCycleLength(usize),
    #[error("vertex {vertex} needs {needed} more colors but only {available} are usable")]
    InsufficientColors { vertex: Vertex, needed: usize, available: usize },
    #[error("the given partial coloring is not a star coloring: {0:?}")]
    InvalidPartial(Violation),
    #[error("block edges must be colored before extending")]
    BlockUncolored,
    #[error("second-class edges at surrogate vertex {vertex} are only partly colored")]
    PartialSecondClass { vertex: Vertex },
    #[error("produced coloring failed verification: {0:?}")]
    Internal(Violation),
    #[error("graph is not a unicyclic graph around one block")]
    NotUcc,
    #[error(transparent)]
    Cactus(#[from] CactusError),
}

/// Star coloring of a block of `n` edges in cyclic order: `[1]` for an edge
/// block, otherwise at most four colors.
pub fn color_cycle_star(n: usize) -> Result<Vec<Color>, UccError> {
    match n {
        1 => Ok(vec![1]),
        0 | 2 => Err(UccError::InvalidCycleLength(n)),
        _ => {
            let (tail, head): (&[Color], usize) = match n % 3 {
                0 => (&[], n),
                1 => (&[1, 2, 3, 4], n - 4),
                _ => (&[1, 2, 4, 3, 4], n - 5),
            };
            let mut out: Vec<Color> = (0..head).map(|i| [1, 2, 3][i % 3]).collect();
            out.extend_from_slice(tail);
            Ok(out)
        }
    }
}

fn colors_at(g: &Graph, col: &EdgeColoring, v: Vertex) -> BTreeSet<Color> {
    g.neighbors(v).iter().filter_map(|&(_, e)| col.get(e)).collect()
}

/// Colors for the third-class edges below the `i`-th (1-based) of `siblings`,
/// in preference order: colors missing at `x`, then the borrowed sibling colors.
fn third_class_candidates(missing_at_x: &BTreeSet<Color>, sibling_colors: &[Color], i: usize) -> Vec<Color> {
    let mut borrowed: Vec<Color> = sibling_colors
        .iter()
        .enumerate()
        .map(|(j0, &c)| (j0 + 1, c))
        .filter(|&(j, _)| j != i && ((j < i) != (j % 2 == i % 2)))
        .map(|(_, c)| c)
        .collect();
    borrowed.sort_unstable();
    missing_at_x.iter().copied().chain(borrowed).collect()
}

/// Completes the coloring of the surrogate around already colored block
/// edges, never changing a colored edge.
fn fill(s: &UccSurrogate, col: &mut EdgeColoring) -> Result<(), UccError> {
    let g = &s.graph;
    let palette = col.palette();
    let block_colors: BTreeSet<Color> = s.block.edges.iter().filter_map(|&e| col.get(e)).collect();
    let shared: Vec<Color> = (1..=palette).filter(|c| !block_colors.contains(c)).collect();

    for &x in &s.block.vertices {
        let e2 = &s.classes.e2[&x];
        let colored = e2.iter().filter(|&&e| col.get(e).is_some()).count();
        if colored == 0 {
            if e2.len() > shared.len() {
                return Err(UccError::InsufficientColors { vertex: x, needed: e2.len(), available: shared.len() });
            }
            for (&e, &c) in e2.iter().zip(&shared) {
                col.set(e, c);
            }
        } else if colored != e2.len() {
            return Err(UccError::PartialSecondClass { vertex: x });
        }
    }

    for &x in &s.block.vertices {
        let e2 = &s.classes.e2[&x];
        let at_x = colors_at(g, col, x);
        let missing: BTreeSet<Color> = (1..=palette).filter(|c| !at_x.contains(c)).collect();
        let sibling_colors: Vec<Color> = e2.iter().map(|&e| col.get(e).expect("colored above")).collect();
        for (i0, &e) in e2.iter().enumerate() {
            let open: Vec<EdgeId> = s.classes.e3[&e].iter().copied().filter(|&f| col.get(f).is_none()).collect();
            if open.is_empty() {
                continue;
            }
            let y = g.other_end(e, x);
            let taken = colors_at(g, col, y);
            let usable: Vec<Color> = third_class_candidates(&missing, &sibling_colors, i0 + 1)
                .into_iter()
                .filter(|c| !taken.contains(c))
                .collect();
            if usable.len() < open.len() {
                return Err(UccError::InsufficientColors { vertex: y, needed: open.len(), available: usable.len() });
            }
            for (&f, &c) in open.iter().zip(&usable) {
                col.set(f, c);
            }
        }
    }
    Ok(())
}

fn check_delta(s: &UccSurrogate, delta: usize) -> Result<(), UccError> {
    if s.block.kind == BlockKind::Cycle && delta < 3 {
        return Err(UccError::DeltaTooSmall { delta });
    }
    Ok(())
}

fn verified(s: &UccSurrogate, col: EdgeColoring) -> Result<EdgeColoring, UccError> {
    match first_violation(&s.graph, col.as_slice()) {
        Some(v) => Err(UccError::Internal(v)),
        None => Ok(col),
    }
}

/// Colors the whole surrogate from scratch with ⌊3Δ/2⌋+1 colors.
pub fn color_ucc(s: &UccSurrogate, delta: usize) -> Result<EdgeColoring, UccError> {
    check_delta(s, delta)?;
    let mut col = EdgeColoring::uncolored(s.graph.edge_count(), star_bound(delta) as Color);
    for (&e, c) in s.block.edges.iter().zip(color_cycle_star(s.block.len())?) {
        col.set(e, c);
    }
    fill(s, &mut col)?;
    verified(s, col)
}

/// Extends a partial star coloring whose block edges are all colored.
/// At each block vertex the second-class edges must be all colored or all
/// uncolored; colored edges are kept as they are.
pub fn extend_ucc_partial(s: &UccSurrogate, partial: &EdgeColoring, delta: usize) -> Result<EdgeColoring, UccError> {
    check_delta(s, delta)?;
    if let Some(v) = first_violation(&s.graph, partial.as_slice()) {
        return Err(UccError::InvalidPartial(v));
    }
    if s.block.edges.iter().any(|&e| partial.get(e).is_none()) {
        return Err(UccError::BlockUncolored);
    }
    let mut col = partial.clone();
    fill(s, &mut col)?;
    verified(s, col)
}

/// Colors a unicyclic graph (or a tree) in which every edge is within two
/// steps of one block, over the palette ⌊3Δ/2⌋+1 with Δ at least 3.
pub fn color_ucc_graph(g: &Graph, delta: usize) -> Result<EdgeColoring, UccError> {
    let delta = delta.max(g.max_degree()).max(3);
    if g.edge_count() == 0 {
        return Ok(EdgeColoring::uncolored(0, star_bound(delta) as Color));
    }
    let aug = semiregular_augment(g, delta)?;
    let bd = block_decompose(&aug.graph)?;
    if bd.cycle_count() > 1 {
        return Err(UccError::NotUcc);
    }
    let empty = EdgeColoring::uncolored(aug.graph.edge_count(), star_bound(delta) as Color);
    let center = (0..bd.blocks.len())
        .filter(|&b| bd.cycle_count() == 0 || bd.blocks[b].kind == BlockKind::Cycle)
        .find_map(|b| {
            let s = build_ucc_surrogate(&aug.graph, &empty, &bd, b).ok()?;
            (s.graph.edge_count() == aug.graph.edge_count()).then_some(s)
        })
        .ok_or(UccError::NotUcc)?;
    let sc = color_ucc(&center, delta)?;
    let mut out = EdgeColoring::uncolored(g.edge_count(), sc.palette());
    for (se, o) in center.origin.iter().enumerate() {
        if let Some(o) = *o {
            if o < g.edge_count() {
                out.set(o, sc.get(se).expect("total"));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::block_decompose;
    use crate::verify::is_star_coloring;

    fn cycle(n: usize) -> Graph {
        Graph::from_edge_list(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cycle_patterns() {
        assert_eq!(color_cycle_star(1).unwrap(), vec![1]);
        assert_eq!(color_cycle_star(3).unwrap(), vec![1, 2, 3]);
        assert_eq!(color_cycle_star(4).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(color_cycle_star(5).unwrap(), vec![1, 2, 4, 3, 4]);
        assert_eq!(color_cycle_star(7).unwrap(), vec![1, 2, 3, 1, 2, 3, 4]);
        assert_eq!(color_cycle_star(8).unwrap(), vec![1, 2, 3, 1, 2, 4, 3, 4]);
        assert!(color_cycle_star(2).is_err());
    }

    #[test]
    fn cycle_patterns_are_star_colorings() {
        for n in 3..40 {
            let colors: Vec<Option<Color>> = color_cycle_star(n).unwrap().into_iter().map(Some).collect();
            assert!(is_star_coloring(&cycle(n), &colors), "n = {n}");
            assert!(colors.iter().flatten().all(|&c| c <= 4));
        }
    }

    #[test]
    fn borrowed_colors_follow_parity() {
        let missing = BTreeSet::new();
        let sib = [10, 20, 30, 40, 50];
        // i = 1 (odd): even j < 1 none, odd j > 1 -> 3, 5.
        assert_eq!(third_class_candidates(&missing, &sib, 1), vec![30, 50]);
        // i = 2 (even): odd j < 2 -> 1; even j > 2 -> 4.
        assert_eq!(third_class_candidates(&missing, &sib, 2), vec![10, 40]);
        // i = 3: even j < 3 -> 2; odd j > 3 -> 5.
        assert_eq!(third_class_candidates(&missing, &sib, 3), vec![20, 50]);
        // i = 4: odd j < 4 -> 1, 3.
        assert_eq!(third_class_candidates(&missing, &sib, 4), vec![10, 30]);
    }

    #[test]
    fn delta_two_cycle_is_rejected() {
        let g = cycle(4);
        let bd = block_decompose(&g).unwrap();
        let s = build_ucc_surrogate(&g, &EdgeColoring::uncolored(4, 4), &bd, 0).unwrap();
        assert_eq!(color_ucc(&s, 2), Err(UccError::DeltaTooSmall { delta: 2 }));
    }

    #[test]
    fn bare_cycle_uses_block_pattern() {
        let col = color_ucc_graph(&cycle(6), 2).unwrap();
        assert_eq!(col.palette(), 5);
        assert!(is_star_coloring(&cycle(6), col.as_slice()));
    }

    #[test]
    fn rejects_two_cycles() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(color_ucc_graph(&g, 4), Err(UccError::NotUcc));
    }

    #[test]
    fn extension_keeps_given_colors() {
        let g = cycle(5);
        let aug = semiregular_augment(&g, 4).unwrap().graph;
        let bd = block_decompose(&aug).unwrap();
        let mut partial = EdgeColoring::uncolored(aug.edge_count(), 7);
        for (i, c) in color_cycle_star(5).unwrap().into_iter().enumerate() {
            partial.set(bd.blocks[0].edges[i], c);
        }
        let s = build_ucc_surrogate(&aug, &partial, &bd, 0).unwrap();
        let out = extend_ucc_partial(&s, &s.inherited, 4).unwrap();
        for e in 0..5 {
            assert_eq!(out.get(e), s.inherited.get(e));
        }
        assert!(out.is_total());
    }

    #[test]
    fn extension_requires_block_colors() {
        let g = cycle(5);
        let bd = block_decompose(&g).unwrap();
        let s = build_ucc_surrogate(&g, &EdgeColoring::uncolored(5, 7), &bd, 0).unwrap();
        assert_eq!(extend_ucc_partial(&s, &s.inherited, 4), Err(UccError::BlockUncolored));
    }
}
