//! Star edge coloring checker.
//!
//! A coloring is a star edge coloring when it is proper and no path or cycle
//! with four edges alternates between two colors. Uncolored edges impose no
//! constraint, so partial colorings are checked among their colored edges.

use serde::{Deserialize, Serialize};

use crate::graph::{star_bound, Color, ColoringError, EdgeColoring, EdgeId, Graph, Vertex};

/// Four edges in path order. `closed` marks a 4-cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub edges: [EdgeId; 4],
    pub closed: bool,
}

impl Segment {
    /// Normal form: the lexicographically smallest of the reversal (paths) or
    /// of all rotations and reversals (cycles).
    fn canonical(edges: [EdgeId; 4], closed: bool) -> Segment {
        let mut best = edges;
        let mut rev = edges;
        rev.reverse();
        if closed {
            for base in [edges, rev] {
                for r in 0..4 {
                    let mut cand = base;
                    cand.rotate_left(r);
                    best = best.min(cand);
                }
            }
        } else {
            best = best.min(rev);
        }
        Segment { edges: best, closed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    ImproperPair,
    BicoloredSegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edges: Vec<EdgeId>,
    pub colors: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringReport {
    pub valid: bool,
    pub colors_used: usize,
    pub palette: Color,
    pub max_degree: usize,
    /// ⌊3Δ/2⌋+1 for the reported Δ.
    pub bound: usize,
    pub colored_edges: usize,
    pub edges: usize,
    pub violation: Option<Violation>,
}

/// Every path with four edges and every 4-cycle of `g`, once each, sorted by
/// their normal-form edge tuple.
pub fn enumerate_4edge_segments(g: &Graph) -> Vec<Segment> {
    let mut out = Vec::new();
    for m in 0..g.vertex_count() {
        let nb = g.neighbors(m);
        for &(a, e2) in nb {
            for &(b, e3) in nb {
                if e2 == e3 {
                    continue;
                }
                for &(w0, e1) in g.neighbors(a) {
                    if w0 == m || w0 == b {
                        continue;
                    }
                    for &(w4, e4) in g.neighbors(b) {
                        if w4 == m || w4 == a {
                            continue;
                        }
                        let closed = w0 == w4;
                        out.push(Segment::canonical([e1, e2, e3, e4], closed));
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Segments containing edge `e`, normal form, unsorted.
pub fn segments_through(g: &Graph, e: EdgeId) -> Vec<Segment> {
    let mut out = Vec::new();
    let (u, v) = g.endpoints(e);
    // `e` in an end position: e, then a 3-edge walk from one endpoint.
    for (start, pivot) in [(u, v), (v, u)] {
        for &(w2, f2) in g.neighbors(pivot) {
            if w2 == start {
                continue;
            }
            for &(w3, f3) in g.neighbors(w2) {
                if w3 == pivot || w3 == start {
                    continue;
                }
                for &(w4, f4) in g.neighbors(w3) {
                    if w4 == w2 || w4 == pivot {
                        continue;
                    }
                    out.push(Segment::canonical([e, f2, f3, f4], w4 == start));
                }
            }
        }
    }
    // `e` in an inner position: one edge before `start`, two after `pivot`.
    for (start, pivot) in [(u, v), (v, u)] {
        for &(w0, f0) in g.neighbors(start) {
            if w0 == pivot {
                continue;
            }
            for &(w2, f2) in g.neighbors(pivot) {
                if w2 == start || w2 == w0 {
                    continue;
                }
                for &(w3, f3) in g.neighbors(w2) {
                    if w3 == pivot || w3 == start {
                        continue;
                    }
                    out.push(Segment::canonical([f0, e, f2, f3], w3 == w0));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn bicolored(colors: &[Option<Color>], s: &Segment) -> Option<[Color; 4]> {
    let c = [colors[s.edges[0]]?, colors[s.edges[1]]?, colors[s.edges[2]]?, colors[s.edges[3]]?];
    (c[0] == c[2] && c[1] == c[3] && c[0] != c[1]).then_some(c)
}

fn segment_violation(s: &Segment, c: [Color; 4]) -> Violation {
    Violation { kind: ViolationKind::BicoloredSegment, edges: s.edges.to_vec(), colors: c.to_vec() }
}

/// First improper pair in ascending `(e, f)` order, `e < f`.
fn first_improper(g: &Graph, colors: &[Option<Color>]) -> Option<Violation> {
    let mut best: Option<(EdgeId, EdgeId, Color)> = None;
    for v in 0..g.vertex_count() {
        let nb = g.neighbors(v);
        for (i, &(_, e)) in nb.iter().enumerate() {
            let Some(ce) = colors[e] else { continue };
            for &(_, f) in &nb[i + 1..] {
                if colors[f] == Some(ce) {
                    let pair = (e.min(f), e.max(f), ce);
                    if best.is_none_or(|b| (pair.0, pair.1) < (b.0, b.1)) {
                        best = Some(pair);
                    }
                }
            }
        }
    }
    best.map(|(e, f, c)| Violation { kind: ViolationKind::ImproperPair, edges: vec![e, f], colors: vec![c, c] })
}

/// First bicolored segment, assuming the coloring is proper.
fn first_bicolored(g: &Graph, colors: &[Option<Color>]) -> Option<Violation> {
    let edge_with = |v: Vertex, c: Color| g.neighbors(v).iter().find(|&&(_, f)| colors[f] == Some(c)).copied();
    let mut best: Option<(Segment, [Color; 4])> = None;
    for m in 0..g.vertex_count() {
        for &(a, e2) in g.neighbors(m) {
            let Some(beta) = colors[e2] else { continue };
            for &(b, e3) in g.neighbors(m) {
                let Some(alpha) = colors[e3] else { continue };
                if e3 == e2 {
                    continue;
                }
                let Some((w0, e1)) = edge_with(a, alpha) else { continue };
                let Some((w4, e4)) = edge_with(b, beta) else { continue };
                let seg = Segment::canonical([e1, e2, e3, e4], w0 == w4);
                if best.as_ref().is_none_or(|(s, _)| seg < *s) {
                    best = Some((seg, [alpha, beta, alpha, beta]));
                }
            }
        }
    }
    best.map(|(s, _)| {
        let c = bicolored(colors, &s).expect("segment found by color lookup is bicolored");
        segment_violation(&s, c)
    })
}

/// First violation of a (partial) coloring given as raw per-edge colors.
pub fn first_violation(g: &Graph, colors: &[Option<Color>]) -> Option<Violation> {
    first_improper(g, colors).or_else(|| first_bicolored(g, colors))
}

/// A violation involving edge `e`, if any. Only colored edges participate.
pub fn violation_through(g: &Graph, colors: &[Option<Color>], e: EdgeId) -> Option<Violation> {
    let ce = colors[e]?;
    let (u, v) = g.endpoints(e);
    for w in [u, v] {
        for &(_, f) in g.neighbors(w) {
            if f != e && colors[f] == Some(ce) {
                return Some(Violation {
                    kind: ViolationKind::ImproperPair,
                    edges: vec![e.min(f), e.max(f)],
                    colors: vec![ce, ce],
                });
            }
        }
    }
    segments_through(g, e).into_iter().find_map(|s| bicolored(colors, &s).map(|c| segment_violation(&s, c)))
}

/// Checks `col` against `g` and summarizes it.
pub fn verify_star_coloring(g: &Graph, col: &EdgeColoring) -> Result<ColoringReport, ColoringError> {
    col.check_length(g)?;
    EdgeColoring::from_colors(col.palette(), col.as_slice().to_vec())?;
    let violation = first_violation(g, col.as_slice());
    let delta = g.max_degree();
    Ok(ColoringReport {
        valid: violation.is_none(),
        colors_used: col.colors_used(),
        palette: col.palette(),
        max_degree: delta,
        bound: star_bound(delta),
        colored_edges: col.colored_count(),
        edges: g.edge_count(),
        violation,
    })
}

/// Convenience: true iff `colors` (partial allowed) is a star edge coloring.
pub fn is_star_coloring(g: &Graph, colors: &[Option<Color>]) -> bool {
    first_violation(g, colors).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edge_list(n, &pairs).unwrap()
    }

    fn path(edges: usize) -> Graph {
        let pairs: Vec<_> = (0..edges).map(|i| (i, i + 1)).collect();
        Graph::from_edge_list(edges + 1, &pairs).unwrap()
    }

    /// Naive walk enumeration: every sequence of four distinct edges forming a
    /// walk whose vertices are distinct, except first == last for 4-cycles.
    fn brute_segments(g: &Graph) -> Vec<Segment> {
        let m = g.edge_count();
        let mut out = Vec::new();
        for e1 in 0..m {
            let (a, b) = g.endpoints(e1);
            for (w0, w1) in [(a, b), (b, a)] {
                let mut walk = vec![w0, w1];
                let mut edges = vec![e1];
                extend(g, &mut walk, &mut edges, &mut out);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn extend(g: &Graph, walk: &mut Vec<Vertex>, edges: &mut Vec<EdgeId>, out: &mut Vec<Segment>) {
        if edges.len() == 4 {
            let closed = walk[0] == walk[4];
            let inner_distinct = {
                let mut vs: Vec<_> = walk[..4].to_vec();
                vs.sort_unstable();
                vs.dedup();
                vs.len() == 4
            };
            let ok = inner_distinct && (closed || !walk[..4].contains(&walk[4]));
            if ok {
                out.push(Segment::canonical([edges[0], edges[1], edges[2], edges[3]], closed));
            }
            return;
        }
        let last = *walk.last().unwrap();
        for &(w, f) in g.neighbors(last) {
            if edges.contains(&f) {
                continue;
            }
            walk.push(w);
            edges.push(f);
            extend(g, walk, edges, out);
            walk.pop();
            edges.pop();
        }
    }

    #[test]
    fn c4_has_one_closed_segment() {
        let segs = enumerate_4edge_segments(&cycle(4));
        assert_eq!(segs.len(), 1);
        assert!(segs[0].closed);
    }

    #[test]
    fn p5_has_one_segment() {
        let segs = enumerate_4edge_segments(&path(4));
        assert_eq!(segs, vec![Segment { edges: [0, 1, 2, 3], closed: false }]);
    }

    #[test]
    fn c5_segments_match_brute_force() {
        let g = cycle(5);
        let segs = enumerate_4edge_segments(&g);
        assert_eq!(segs, brute_segments(&g));
        assert_eq!(segs.len(), 5);
        assert!(segs.iter().all(|s| !s.closed));
    }

    #[test]
    fn segments_through_agrees_with_full_enumeration() {
        let g = Graph::from_edge_list(7, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6), (6, 4), (2, 5)])
            .unwrap();
        let all = enumerate_4edge_segments(&g);
        assert_eq!(all, brute_segments(&g));
        for e in 0..g.edge_count() {
            let expected: Vec<_> = all.iter().filter(|s| s.edges.contains(&e)).copied().collect();
            assert_eq!(segments_through(&g, e), expected, "edge {e}");
        }
    }

    #[test]
    fn c4_bicolored_is_rejected() {
        let g = cycle(4);
        let col = EdgeColoring::total(2, &[1, 2, 1, 2]).unwrap();
        let r = verify_star_coloring(&g, &col).unwrap();
        assert!(!r.valid);
        let v = r.violation.unwrap();
        assert_eq!(v.kind, ViolationKind::BicoloredSegment);
        assert_eq!(v.edges, vec![0, 1, 2, 3]);
        assert_eq!(v.colors, vec![1, 2, 1, 2]);
    }

    #[test]
    fn c4_three_colors_is_valid() {
        let g = cycle(4);
        let col = EdgeColoring::total(3, &[1, 2, 1, 3]).unwrap();
        let r = verify_star_coloring(&g, &col).unwrap();
        assert!(r.valid);
        assert_eq!(r.colors_used, 3);
    }

    #[test]
    fn c7_pattern_is_valid() {
        let g = cycle(7);
        let col = EdgeColoring::total(4, &[1, 2, 3, 1, 2, 3, 4]).unwrap();
        assert!(verify_star_coloring(&g, &col).unwrap().valid);
        // Cross-check against the naive walk scan.
        let naive_bad = brute_segments(&g).iter().any(|s| bicolored(col.as_slice(), s).is_some());
        assert!(!naive_bad);
    }

    #[test]
    fn improper_pair_reported_first() {
        let g = path(4);
        let col = EdgeColoring::total(2, &[1, 1, 2, 1]).unwrap();
        let v = verify_star_coloring(&g, &col).unwrap().violation.unwrap();
        assert_eq!(v.kind, ViolationKind::ImproperPair);
        assert_eq!(v.edges, vec![0, 1]);
    }

    #[test]
    fn partial_coloring_only_checks_colored_edges() {
        let g = cycle(4);
        let col = EdgeColoring::from_colors(2, vec![Some(1), Some(2), Some(1), None]).unwrap();
        assert!(verify_star_coloring(&g, &col).unwrap().valid);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = cycle(4);
        let col = EdgeColoring::total(2, &[1, 2]).unwrap();
        assert!(verify_star_coloring(&g, &col).is_err());
    }

    #[test]
    fn violation_through_finds_local_problem() {
        let g = path(4);
        let colors = vec![Some(1), Some(2), Some(1), Some(2)];
        for e in 0..4 {
            assert!(violation_through(&g, &colors, e).is_some());
        }
        let colors = vec![Some(1), Some(2), Some(1), Some(3)];
        assert!((0..4).all(|e| violation_through(&g, &colors, e).is_none()));
    }
}
