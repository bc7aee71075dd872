//! Graph families with known behavior, seeded random cacti, and an audit of
//! the structural facts every ⌊3Δ/2⌋-coloring of a height-2 tree must obey.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{enumerate_star_colorings, Budget, ExactError};
use crate::graph::{Color, EdgeColoring, Graph, Vertex};
use crate::verify::{first_violation, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no vertex has room for another block under the degree cap")]
    Infeasible,
    #[error("coloring is not a star edge coloring: {0:?}")]
    NotStar(Violation),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameter(msg.into())
}

fn build(n: usize, pairs: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_edge_list(n, pairs).expect("constructions produce simple graphs")
}

pub fn gen_cycle(n: usize) -> Result<Graph, ConstructionError> {
    if n < 3 {
        return Err(invalid(format!("cycle length {n} < 3")));
    }
    Ok(build(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()))
}

/// Rooted tree of the given height: the root has `delta` children, every other
/// internal vertex `delta - 1`. Vertices are numbered breadth-first.
pub fn gen_semiregular_tree(delta: usize, height: usize) -> Result<Graph, ConstructionError> {
    if delta < 2 {
        return Err(invalid(format!("delta {delta} < 2")));
    }
    let mut pairs = Vec::new();
    let mut layer = vec![0usize];
    let mut next = 1;
    for level in 0..height {
        let children = if level == 0 { delta } else { delta - 1 };
        let mut new_layer = Vec::new();
        for &v in &layer {
            for _ in 0..children {
                pairs.push((v, next));
                new_layer.push(next);
                next += 1;
            }
        }
        layer = new_layer;
    }
    Ok(build(next, &pairs))
}

/// The height-3 semiregular tree with the first two children `x`, `y` of the
/// root joined and the last child of each removed with its subtree. For odd
/// Δ this cactus needs more than ⌊3Δ/2⌋ colors.
pub fn gen_tight_odd(delta: usize) -> Result<Graph, ConstructionError> {
    if delta < 3 || delta.is_multiple_of(2) {
        return Err(invalid(format!("delta {delta} must be odd and at least 3")));
    }
    let tree = gen_semiregular_tree(delta, 3)?;
    let (x, y) = (1, 2);
    let last_child = |v: Vertex| tree.neighbors(v).iter().map(|&(w, _)| w).filter(|&w| w > v).max().expect("internal");
    let mut removed = BTreeSet::new();
    let mut stack = vec![last_child(x), last_child(y)];
    while let Some(v) = stack.pop() {
        removed.insert(v);
        stack.extend(tree.neighbors(v).iter().map(|&(w, _)| w).filter(|&w| w > v));
    }
    let mut index = vec![usize::MAX; tree.vertex_count()];
    let mut n = 0;
    for (v, slot) in index.iter_mut().enumerate() {
        if !removed.contains(&v) {
            *slot = n;
            n += 1;
        }
    }
    let mut pairs: Vec<(Vertex, Vertex)> = tree
        .edges()
        .iter()
        .filter(|(u, v)| !removed.contains(u) && !removed.contains(v))
        .map(|&(u, v)| (index[u], index[v]))
        .collect();
    pairs.push((index[x], index[y]));
    Ok(build(n, &pairs))
}

/// A 6-semiregular cactus with 88 vertices and 89 edges: a triangle
/// `x1 x2 x3` and a 4-cycle `x3 y1 y2 y3` sharing `x3`, padded with leaves at
/// the `x`s, four children `z` at each `y`, and five leaves at each `z`.
///
/// Numbering: `x1..x3` are 0..=2, `y1..y3` are 3..=5, leaves of the `x`s are
/// 6..=15, `z1..z12` are 16..=27, the remaining vertices are leaves of `z`s.
pub fn gen_figure5() -> Graph {
    let mut pairs = vec![(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 2)];
    let mut next = 6;
    for (x, count) in [(0, 4), (1, 4), (2, 2)] {
        for _ in 0..count {
            pairs.push((x, next));
            next += 1;
        }
    }
    let z0 = next;
    for y in 3..=5 {
        for _ in 0..4 {
            pairs.push((y, next));
            next += 1;
        }
    }
    for z in z0..z0 + 12 {
        for _ in 0..5 {
            pairs.push((z, next));
            next += 1;
        }
    }
    build(next, &pairs)
}

/// A block with all vertices of degree `delta`: an edge block when
/// `block_len == 1`, otherwise a cycle of that length. Each block vertex gets
/// second-class edges up to degree `delta`, and each of those ends `delta - 1`
/// leaves.
pub fn gen_ucc(delta: usize, block_len: usize) -> Result<Graph, ConstructionError> {
    if block_len == 2 || block_len == 0 {
        return Err(invalid(format!("block length {block_len}")));
    }
    if delta < 3 {
        return Err(invalid(format!("delta {delta} < 3")));
    }
    let (mut pairs, k) = if block_len == 1 {
        (vec![(0, 1)], 2)
    } else {
        ((0..block_len).map(|i| (i, (i + 1) % block_len)).collect::<Vec<_>>(), block_len)
    };
    let block_degree = if block_len == 1 { 1 } else { 2 };
    let mut next = k;
    let mut middles = Vec::new();
    for x in 0..k {
        for _ in block_degree..delta {
            pairs.push((x, next));
            middles.push(next);
            next += 1;
        }
    }
    for y in middles {
        for _ in 1..delta {
            pairs.push((y, next));
            next += 1;
        }
    }
    Ok(build(next, &pairs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCactusParams {
    pub seed: u64,
    pub n_blocks: usize,
    pub cycle_prob: f64,
    pub min_len: usize,
    pub max_len: usize,
    pub delta_cap: usize,
}

impl Default for RandomCactusParams {
    fn default() -> Self {
        RandomCactusParams { seed: 0, n_blocks: 10, cycle_prob: 0.5, min_len: 3, max_len: 8, delta_cap: 4 }
    }
}

/// Grows a cactus block by block from vertex 0. Each block is a cycle with
/// probability `cycle_prob` (falling back to an edge when no vertex has room
/// for two more edges) and hangs off a uniformly chosen vertex whose degree
/// stays within `delta_cap`.
pub fn gen_random_cactus(p: &RandomCactusParams) -> Result<Graph, ConstructionError> {
    if !(0.0..=1.0).contains(&p.cycle_prob) {
        return Err(invalid(format!("cycle probability {} outside [0, 1]", p.cycle_prob)));
    }
    if p.min_len < 3 || p.min_len > p.max_len {
        return Err(invalid(format!("cycle lengths {}..={}", p.min_len, p.max_len)));
    }
    if p.delta_cap < 2 {
        return Err(invalid(format!("degree cap {} < 2", p.delta_cap)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut degree = vec![0usize];
    let mut pairs = Vec::new();
    for _ in 0..p.n_blocks {
        let want_cycle = rng.gen_bool(p.cycle_prob);
        let room = |need: usize, degree: &[usize]| -> Vec<Vertex> {
            (0..degree.len()).filter(|&v| degree[v] + need <= p.delta_cap).collect()
        };
        let cyc_room = if want_cycle { room(2, &degree) } else { Vec::new() };
        let (at, len) = if !cyc_room.is_empty() {
            (cyc_room[rng.gen_range(0..cyc_room.len())], rng.gen_range(p.min_len..=p.max_len))
        } else {
            let r = room(1, &degree);
            if r.is_empty() {
                return Err(ConstructionError::Infeasible);
            }
            (r[rng.gen_range(0..r.len())], 1)
        };
        let first = degree.len();
        if len == 1 {
            pairs.push((at, first));
            degree.push(1);
        } else {
            let mut prev = at;
            for i in 0..len - 1 {
                pairs.push((prev, first + i));
                degree.push(2);
                prev = first + i;
            }
            pairs.push((prev, at));
            degree[at] += 1;
        }
        degree[at] += 1;
    }
    Ok(build(degree.len(), &pairs))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Which fact failed: `a`, `b` or `c`.
    pub fact: char,
    pub colors: Vec<Color>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub delta: usize,
    pub palette: usize,
    pub edges: usize,
    pub colorings_checked: u64,
    /// False when the budget ran out before every coloring was seen.
    pub complete: bool,
    pub counterexamples: Vec<Counterexample>,
}

const MAX_COUNTEREXAMPLES: usize = 16;

/// Checks one star coloring of the height-2 semiregular tree rooted at 0
/// (root children `1..=Δ`) against the three facts:
/// (a) `|C(x) ∩ C(y)| ≥ (Δ+1)/2` for children `x ≠ y`, and `C′(v) ⊆ C(x)`;
/// (b) each color at the root appears on exactly `(Δ-1)/2` edges away from it;
/// (c) `c(vx) ∈ C(y)` or `c(vy) ∈ C(x)` for children `x ≠ y`.
pub fn audit_coloring(tree: &Graph, col: &EdgeColoring) -> Result<Vec<Counterexample>, ConstructionError> {
    col.check_length(tree).map_err(|e| invalid(e.to_string()))?;
    if let Some(v) = first_violation(tree, col.as_slice()) {
        return Err(ConstructionError::NotStar(v));
    }
    let delta = tree.degree(0);
    let colors: Vec<Color> = col.as_slice().iter().map(|c| c.unwrap_or(0)).collect();
    let at = |v: Vertex| -> BTreeSet<Color> { tree.neighbors(v).iter().filter_map(|&(_, e)| col.get(e)).collect() };
    let root = at(0);
    let missing_root: BTreeSet<Color> = (1..=col.palette()).filter(|c| !root.contains(c)).collect();
    let kids: Vec<(Vertex, Color)> =
        tree.neighbors(0).iter().map(|&(x, e)| (x, col.get(e).expect("total"))).collect();
    let mut out = Vec::new();
    let mut report = |fact: char, detail: String| {
        out.push(Counterexample { fact, colors: colors.clone(), detail });
    };

    for &(x, _) in &kids {
        let cx = at(x);
        if !missing_root.is_subset(&cx) {
            report('a', format!("colors missing at the root are not all at child {x}"));
        }
    }
    for (i, &(x, cvx)) in kids.iter().enumerate() {
        for &(y, cvy) in &kids[i + 1..] {
            let (cx, cy) = (at(x), at(y));
            let common = cx.intersection(&cy).count();
            if common < delta.div_ceil(2) {
                report('a', format!("children {x} and {y} share {common} colors"));
            }
            if !cy.contains(&cvx) && !cx.contains(&cvy) {
                report('c', format!("neither c(0{x}) at {y} nor c(0{y}) at {x}"));
            }
        }
    }
    for &c in &root {
        let away = tree
            .edges()
            .iter()
            .enumerate()
            .filter(|&(e, &(u, v))| u != 0 && v != 0 && col.get(e) == Some(c))
            .count();
        if away != (delta - 1) / 2 {
            report('b', format!("color {c} appears on {away} edges away from the root"));
        }
    }
    Ok(out)
}

/// Enumerates the star colorings of the height-2 semiregular tree with
/// palette ⌊3Δ/2⌋ and audits each one. Δ must be odd.
pub fn audit_lemma_facts(delta: usize, budget: &Budget) -> Result<AuditReport, ConstructionError> {
    if delta < 3 || delta.is_multiple_of(2) {
        return Err(invalid(format!("delta {delta} must be odd and at least 3")));
    }
    let tree = gen_semiregular_tree(delta, 2)?;
    let palette = 3 * delta / 2;
    let mut checked = 0u64;
    let mut counterexamples = Vec::new();
    let mut failure = None;
    let complete = enumerate_star_colorings(&tree, palette, budget, &mut |colors| {
        checked += 1;
        if failure.is_some() {
            return;
        }
        let col = EdgeColoring::total(palette as Color, colors).expect("enumerated colors are in range");
        match audit_coloring(&tree, &col) {
            Ok(found) => {
                let room = MAX_COUNTEREXAMPLES.saturating_sub(counterexamples.len());
                counterexamples.extend(found.into_iter().take(room));
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(AuditReport { delta, palette, edges: tree.edge_count(), colorings_checked: checked, complete, counterexamples })
}
