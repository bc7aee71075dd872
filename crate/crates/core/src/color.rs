//! Star edge coloring of cactus graphs with ⌊3Δ/2⌋+1 colors.
//!
//! The cactus is padded to a Δ-semiregular one, its blocks are visited in
//! breadth-first order, and each block is handled through its unicyclic
//! surrogate: the block and its second-class edges are copied into the global
//! coloring, every other cycle through a block vertex is colored by a pattern
//! that depends on its length mod 3, and the remaining third-class edges are
//! copied last. No edge is ever recolored.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cactus::{
    block_decompose, build_ucc_surrogate, ordered_blocks, semiregular_augment, BlockDecomposition, BlockKind,
    CactusError, UccSurrogate,
};
use crate::graph::{star_bound, Color, EdgeColoring, EdgeId, Graph, Vertex};
use crate::ucc::{color_ucc, extend_ucc_partial, UccError};
use crate::verify::{first_violation, verify_star_coloring, violation_through, ColoringReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error(transparent)]
    Cactus(#[from] CactusError),
    #[error(transparent)]
    Ucc(#[from] UccError),
    #[error("pattern {pattern:?} does not fit a cycle of length {n}")]
    PatternMismatch { n: usize, pattern: CyclePattern },
    #[error("no star coloring found for the cycle block {cycle} attached at vertex {vertex}")]
    AttachedCycleStuck { cycle: usize, vertex: Vertex },
    #[error("final coloring failed verification: {0:?}")]
    Internal(Violation),
}

/// How the interior of an attached cycle is colored, given the colors `c1`,
/// `c2` of its two edges at the block vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclePattern {
    /// Length ≡ 0 (mod 3): `(c1, c2, third)*`.
    Triples { third: Color },
    /// Length ≡ 1 (mod 3): `c1, (c2, c1, far)*`.
    Rotated { far: Color },
    /// Length 4: `c1, c2, far, near`.
    FourCrossed { far: Color, near: Color },
    /// Length 5: `c1, c2, c1, fresh, near`.
    Pentagon { fresh: Color, near: Color },
    /// Length ≡ 2 (mod 3), at least 8: `c1, c2, (c1, near, c2)*, c1, c2, near`.
    Woven { near: Color },
}

/// Colors of `e_1, …, e_n` of an attached cycle under `pattern`.
pub fn attached_cycle_colors(n: usize, c1: Color, c2: Color, pattern: CyclePattern) -> Result<Vec<Color>, ColorError> {
    use CyclePattern::*;
    let mismatch = Err(ColorError::PatternMismatch { n, pattern });
    let out = match pattern {
        Triples { third } if n >= 3 && n.is_multiple_of(3) => [c1, c2, third].repeat(n / 3),
        Rotated { far } if n >= 4 && n % 3 == 1 => {
            let mut v = vec![c1];
            v.extend([c2, c1, far].repeat(n / 3));
            v
        }
        FourCrossed { far, near } if n == 4 => vec![c1, c2, far, near],
        Pentagon { fresh, near } if n == 5 => vec![c1, c2, c1, fresh, near],
        Woven { near } if n >= 8 && n % 3 == 2 => {
            let mut v = vec![c1, c2];
            v.extend([c1, near, c2].repeat((n - 5) / 3));
            v.extend([c1, c2, near]);
            v
        }
        _ => return mismatch,
    };
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoringStats {
    pub rounds: usize,
    pub attached_cycles: usize,
    /// Attached cycles colored by a pattern other than the first choice.
    pub alternates: usize,
    /// Attached cycles colored by exhaustive search.
    pub searched: usize,
}

#[derive(Debug, Clone)]
pub struct CactusColoring {
    pub coloring: EdgeColoring,
    pub report: ColoringReport,
    /// Effective Δ; the palette is ⌊3Δ/2⌋+1.
    pub delta: usize,
    pub stats: ColoringStats,
}

/// An attached cycle, oriented from the block vertex `x`: `edges[0]` joins
/// `x` to `x1`, `edges[1]` joins `x` to `x2`, `edges[2]` leaves `x2`, and
/// `edges[n-1]` enters `x1`.
#[derive(Debug, Clone)]
pub struct AttachedCycleTask {
    pub cycle: usize,
    pub x: Vertex,
    pub x1: Vertex,
    pub x2: Vertex,
    pub edges: Vec<EdgeId>,
    /// Surrogate edge at `x1` standing for `edges[n-1]`.
    pub near_slot: EdgeId,
    /// Surrogate edge at `x2` standing for `edges[2]`.
    pub far_slot: EdgeId,
    /// Third-class surrogate edges below `edges[0]` and `edges[1]`.
    pub near_set: Vec<EdgeId>,
    pub far_set: Vec<EdgeId>,
}

struct Round<'a> {
    g: &'a Graph,
    bd: &'a BlockDecomposition,
    s: &'a UccSurrogate,
    delta: usize,
}

const SEARCH_NODES: u64 = 2_000_000;

/// Star edge colors a connected cactus using at most ⌊3Δ/2⌋+1 colors, where Δ
/// is `max(delta, 3)`. `delta` must be at least the maximum degree.
pub fn color_cactus(g: &Graph, delta: usize) -> Result<CactusColoring, ColorError> {
    let max_degree = g.max_degree();
    if delta < max_degree {
        return Err(CactusError::DeltaTooSmall { delta, max_degree }.into());
    }
    let delta = delta.max(3);
    let palette = star_bound(delta) as Color;
    block_decompose(g)?;
    let mut stats = ColoringStats::default();
    if g.edge_count() == 0 {
        let coloring = EdgeColoring::uncolored(0, palette);
        let report = verify_star_coloring(g, &coloring).expect("lengths match");
        return Ok(CactusColoring { coloring, report, delta, stats });
    }

    let aug = semiregular_augment(g, delta)?;
    let ag = &aug.graph;
    let bd = ordered_blocks(ag)?;
    let mut col = EdgeColoring::uncolored(ag.edge_count(), palette);

    for (round, &b) in bd.sigma.iter().enumerate() {
        let s = build_ucc_surrogate(ag, &col, &bd, b)?;
        let mut sc = if round == 0 { color_ucc(&s, delta)? } else { extend_ucc_partial(&s, &s.inherited, delta)? };
        stats.rounds += 1;

        let near: Vec<EdgeId> = s.block.edges.iter().copied().chain(s.classes.e2_all()).collect();
        for se in near {
            let o = s.origin[se].expect("block and second-class edges are original");
            if col.get(o).is_none() {
                col.set(o, sc.get(se).expect("surrogate coloring is total"));
            }
        }

        let r = Round { g: ag, bd: &bd, s: &s, delta };
        for &x in &bd.blocks[b].vertices {
            for &d in &bd.vertex_blocks[x] {
                let cyc = &bd.blocks[d];
                if d == b || cyc.kind != BlockKind::Cycle || cyc.edges.iter().all(|&e| col.get(e).is_some()) {
                    continue;
                }
                stats.attached_cycles += 1;
                match color_attached_cycle(&r, &mut sc, &mut col, x, d)? {
                    Outcome::First => {}
                    Outcome::Alternate => stats.alternates += 1,
                    Outcome::Searched => stats.searched += 1,
                }
            }
        }

        for se in s.classes.e3_all() {
            if let Some(o) = s.origin[se] {
                if col.get(o).is_none() {
                    col.set(o, sc.get(se).expect("surrogate coloring is total"));
                }
            }
        }
    }

    if let Some(v) = first_violation(ag, col.as_slice()) {
        return Err(ColorError::Internal(v));
    }
    let coloring = EdgeColoring::from_colors(palette, col.as_slice()[..aug.original_edges].to_vec())
        .expect("colors are within the palette");
    let report = verify_star_coloring(g, &coloring).expect("lengths match");
    if let Some(v) = report.violation.clone() {
        return Err(ColorError::Internal(v));
    }
    Ok(CactusColoring { coloring, report, delta, stats })
}

enum Outcome {
    First,
    Alternate,
    Searched,
}

fn colors_of(sc: &EdgeColoring, edges: &[EdgeId]) -> BTreeSet<Color> {
    edges.iter().filter_map(|&e| sc.get(e)).collect()
}

/// Orients the cycle block `d` at `x` and locates its surrogate slots.
fn orient(r: &Round, sc: &EdgeColoring, col: &EdgeColoring, x: Vertex, d: usize) -> AttachedCycleTask {
    let cyc = &r.bd.blocks[d];
    let n = cyc.len();
    let p = cyc.position(x).expect("x lies on the cycle");
    let after = cyc.edges[p];
    let before = cyc.edges[(p + n - 1) % n];
    let e3_of = |e: EdgeId| -> Vec<EdgeId> {
        let se = r.s.surrogate_edge(e).expect("cycle edges at x are second-class");
        r.s.classes.e3[&se].clone()
    };
    // The first edge is one whose third-class colors avoid the other's color.
    let avoids = |e: EdgeId, other: EdgeId| !colors_of(sc, &e3_of(e)).contains(&col.get(other).expect("colored"));
    let (lo, hi) = (after.min(before), after.max(before));
    let first = if avoids(lo, hi) || !avoids(hi, lo) { lo } else { hi };
    let second = if first == after { before } else { after };

    // Walk from x along `second` around the cycle.
    let mut walk = Vec::with_capacity(n);
    let mut v = x;
    let mut e = second;
    for _ in 0..n {
        walk.push(e);
        v = r.g.other_end(e, v);
        if v == x {
            break;
        }
        e = cyc.edges.iter().copied().find(|&f| f != e && {
            let (a, b) = r.g.endpoints(f);
            a == v || b == v
        }).expect("cycle vertex has two cycle edges");
    }
    let mut edges = vec![first];
    edges.extend(&walk[..n - 1]);
    let x1 = r.g.other_end(first, x);
    let x2 = r.g.other_end(second, x);
    let (near_slot, far_slot) = if n <= 4 {
        (r.s.slot_at(d, x1).expect("short cycle opened"), r.s.slot_at(d, x2).expect("short cycle opened"))
    } else {
        (
            r.s.surrogate_edge(edges[n - 1]).expect("kept as third-class"),
            r.s.surrogate_edge(edges[2]).expect("kept as third-class"),
        )
    };
    AttachedCycleTask {
        cycle: d,
        x,
        x1,
        x2,
        edges,
        near_slot,
        far_slot,
        near_set: e3_of(first),
        far_set: e3_of(second),
    }
}

/// Patterns to try, first choice first.
fn candidate_patterns(task: &AttachedCycleTask, sc: &EdgeColoring, at_x: &BTreeSet<Color>, missing_x: &BTreeSet<Color>, delta: usize) -> Vec<CyclePattern> {
    use CyclePattern::*;
    let n = task.edges.len();
    let near: BTreeSet<Color> = colors_of(sc, &task.near_set);
    let far: BTreeSet<Color> = colors_of(sc, &task.far_set);
    let near_missing: Vec<Color> = near.intersection(missing_x).copied().collect();
    let far_missing: Vec<Color> = far.intersection(missing_x).copied().collect();
    let all_missing: Vec<Color> = missing_x.iter().copied().collect();
    let mut out = Vec::new();
    match n % 3 {
        0 => {
            out.extend(all_missing.iter().filter(|c| near.contains(c) && far.contains(c)).map(|&c| Triples { third: c }));
            out.extend(all_missing.iter().map(|&c| Triples { third: c }));
        }
        1 => {
            if n == 4 && delta != 4 {
                for &f in &far_missing {
                    for &c in near.intersection(at_x) {
                        out.push(FourCrossed { far: f, near: c });
                    }
                }
            }
            out.extend(far_missing.iter().map(|&c| Rotated { far: c }));
            out.extend(all_missing.iter().map(|&c| Rotated { far: c }));
            if n == 4 {
                for &f in &all_missing {
                    for &c in at_x.iter().chain(&all_missing) {
                        if c != f {
                            out.push(FourCrossed { far: f, near: c });
                        }
                    }
                }
            }
        }
        _ => {
            for near_pool in [&near_missing, &all_missing] {
                for &c in near_pool {
                    if n == 5 {
                        out.extend(all_missing.iter().filter(|&&f| f != c).map(|&f| Pentagon { fresh: f, near: c }));
                    } else {
                        out.push(Woven { near: c });
                    }
                }
            }
        }
    }
    let mut seen = Vec::new();
    out.retain(|p| {
        let fresh = !seen.contains(p);
        seen.push(*p);
        fresh
    });
    out
}

/// Moves color `c` onto `slot` within `set`: by swapping with the edge that
/// holds it, or by recoloring the slot. Returns the previous colors.
fn place(sc: &mut EdgeColoring, set: &[EdgeId], slot: EdgeId, c: Color) -> Vec<(EdgeId, Option<Color>)> {
    let saved: Vec<_> = set.iter().map(|&e| (e, sc.get(e))).collect();
    if sc.get(slot) == Some(c) {
        return saved;
    }
    if let Some(&holder) = set.iter().find(|&&e| e != slot && sc.get(e) == Some(c)) {
        let old = sc.get(slot).expect("total");
        sc.set(holder, old);
    }
    sc.set(slot, c);
    saved
}

fn restore(sc: &mut EdgeColoring, saved: Vec<(EdgeId, Option<Color>)>) {
    for (e, c) in saved.into_iter().rev() {
        match c {
            Some(c) => sc.set(e, c),
            None => sc.clear(e),
        }
    }
}

/// Third-class surrogate edges at `x` whose original edges would carry their
/// surrogate colors later, excluding edges of cycles still to be colored.
fn pending_third_class(r: &Round, col: &EdgeColoring, x: Vertex) -> Vec<(EdgeId, EdgeId)> {
    let sx = r.s.surrogate_vertex(x).expect("block vertex");
    let mut out = Vec::new();
    for &e in &r.s.classes.e2[&sx] {
        for &f in &r.s.classes.e3[&e] {
            let Some(o) = r.s.origin[f] else { continue };
            if col.get(o).is_some() {
                continue;
            }
            let owner = &r.bd.blocks[r.bd.edge_block[o]];
            if owner.kind == BlockKind::Cycle && owner.contains_vertex(x) {
                continue;
            }
            out.push((f, o));
        }
    }
    out
}

/// Checks every edge in `edges` for a violation in `col` with the pending
/// third-class colors at `x` applied provisionally.
fn locally_valid(r: &Round, sc: &EdgeColoring, col: &mut EdgeColoring, x: Vertex, edges: &[EdgeId]) -> bool {
    let pending = pending_third_class(r, col, x);
    for &(f, o) in &pending {
        col.set(o, sc.get(f).expect("total"));
    }
    let ok = edges
        .iter()
        .chain(pending.iter().map(|(_, o)| o))
        .all(|&e| violation_through(r.g, col.as_slice(), e).is_none());
    for &(_, o) in &pending {
        col.clear(o);
    }
    ok
}

fn color_attached_cycle(
    r: &Round,
    sc: &mut EdgeColoring,
    col: &mut EdgeColoring,
    x: Vertex,
    d: usize,
) -> Result<Outcome, ColorError> {
    let task = orient(r, sc, col, x, d);
    let n = task.edges.len();
    let interior_open = task.edges[2..].iter().all(|&e| col.get(e).is_none());
    let c1 = col.get(task.edges[0]).expect("second-class edges are colored");
    let c2 = col.get(task.edges[1]).expect("second-class edges are colored");
    let at_x: BTreeSet<Color> = r.g.neighbors(x).iter().filter_map(|&(_, e)| col.get(e)).collect();
    let missing_x: BTreeSet<Color> = (1..=col.palette()).filter(|c| !at_x.contains(c)).collect();

    if interior_open {
        let candidates = candidate_patterns(&task, sc, &at_x, &missing_x, r.delta);
        for (rank, pattern) in candidates.into_iter().enumerate() {
            let colors = attached_cycle_colors(n, c1, c2, pattern)?;
            let saved_near = place(sc, &task.near_set, task.near_slot, colors[n - 1]);
            let saved_far = place(sc, &task.far_set, task.far_slot, colors[2]);
            for (&e, &c) in task.edges[2..].iter().zip(&colors[2..]) {
                col.set(e, c);
            }
            if locally_valid(r, sc, col, x, &task.edges) {
                return Ok(if rank == 0 { Outcome::First } else { Outcome::Alternate });
            }
            for &e in &task.edges[2..] {
                col.clear(e);
            }
            restore(sc, saved_far);
            restore(sc, saved_near);
        }
    }

    let open: Vec<EdgeId> = task.edges.iter().copied().filter(|&e| col.get(e).is_none()).collect();
    let limit = (col.palette() as usize).saturating_sub(r.delta.saturating_sub(2)).max(3);
    let mut nodes = 0u64;
    if search(r, sc, col, x, &task.edges, &open, limit, &mut nodes) {
        Ok(Outcome::Searched)
    } else {
        Err(ColorError::AttachedCycleStuck { cycle: d, vertex: x })
    }
}

/// Depth-first completion of the cycle's open edges, keeping at most `limit`
/// distinct colors on the cycle so later rounds still find free colors.
#[allow(clippy::too_many_arguments)]
fn search(
    r: &Round,
    sc: &EdgeColoring,
    col: &mut EdgeColoring,
    x: Vertex,
    cycle: &[EdgeId],
    open: &[EdgeId],
    limit: usize,
    nodes: &mut u64,
) -> bool {
    let Some((&e, rest)) = open.split_first() else {
        return locally_valid(r, sc, col, x, cycle);
    };
    for c in 1..=col.palette() {
        *nodes += 1;
        if *nodes > SEARCH_NODES {
            return false;
        }
        col.set(e, c);
        let used: BTreeSet<Color> = cycle.iter().filter_map(|&f| col.get(f)).collect();
        if used.len() <= limit && violation_through(r.g, col.as_slice(), e).is_none() && search(r, sc, col, x, cycle, rest, limit, nodes) {
            return true;
        }
        col.clear(e);
    }
    false
}
