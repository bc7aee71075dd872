//! Exact star edge coloring by backtracking.
//!
//! Edges are colored in breadth-first order from a vertex of maximum degree.
//! Every placement is checked in O(Δ) time against per-vertex color tables:
//! a new edge can only close a bicolored 4-edge segment as its end edge or as
//! one of its two middle edges, and both shapes are found by color lookups.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::cactus::is_cactus;
use crate::graph::{star_bound, Color, EdgeColoring, EdgeId, Graph};
use crate::verify::enumerate_4edge_segments;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget { max_nodes: Some(n), time_limit: None }
    }

    pub fn seconds(secs: f64) -> Self {
        Budget { max_nodes: None, time_limit: Some(Duration::from_secs_f64(secs)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(EdgeColoring),
    No,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Only allow a new color one above the largest used so far.
    pub symmetry_breaking: bool,
    /// Split the search over rayon's pool.
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { symmetry_breaking: true, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("palette size {0} is not supported (1..=63)")]
    PaletteTooLarge(usize),
    #[error("brute force is limited to {max_edges} edges and {max_colors} colors")]
    TooLargeForBruteForce { max_edges: usize, max_colors: usize },
    #[error("no star coloring with at most {0} colors")]
    NoColoringWithin(usize),
}

/// Result of a chromatic index search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarIndex {
    Exact { index: usize, witness: EdgeColoring },
    /// Every palette below `lower` was refuted before the budget ran out.
    Unknown { lower: usize },
}

/// Breadth-first edge order from the lowest-indexed vertex of maximum degree.
pub fn search_order(g: &Graph) -> Vec<EdgeId> {
    let n = g.vertex_count();
    let mut order = Vec::with_capacity(g.edge_count());
    let mut edge_seen = vec![false; g.edge_count()];
    let mut vertex_seen = vec![false; n];
    let start_candidates = {
        let mut vs: Vec<usize> = (0..n).collect();
        vs.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        vs
    };
    for s in start_candidates {
        if vertex_seen[s] {
            continue;
        }
        vertex_seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let mut inc: Vec<(usize, EdgeId)> = g.neighbors(v).to_vec();
            inc.sort_by_key(|&(_, e)| e);
            for (w, e) in inc {
                if !edge_seen[e] {
                    edge_seen[e] = true;
                    order.push(e);
                }
                if !vertex_seen[w] {
                    vertex_seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    max_nodes: u64,
    deadline: Option<Instant>,
}

impl Shared {
    fn new(budget: &Budget) -> Self {
        Shared {
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            max_nodes: budget.max_nodes.unwrap_or(u64::MAX),
            deadline: budget.time_limit.map(|d| Instant::now() + d),
        }
    }

    fn with_deadline(budget: &Budget, deadline: Option<Instant>) -> Self {
        let mut s = Shared::new(budget);
        s.deadline = deadline.or(s.deadline);
        s
    }
}

enum Step {
    Done,
    Exhausted,
    Stopped,
}

/// Incremental search state over a fixed edge order.
struct Search<'a> {
    g: &'a Graph,
    k: usize,
    order: &'a [EdgeId],
    colors: Vec<u8>,
    /// `table[v * (k + 1) + c]` is the edge of color `c` at `v`, plus one.
    table: Vec<u32>,
    mask: Vec<u64>,
    symmetry: bool,
    local_nodes: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, k: usize, order: &'a [EdgeId], symmetry: bool) -> Self {
        Search {
            g,
            k,
            order,
            colors: vec![0; g.edge_count()],
            table: vec![0; g.vertex_count() * (k + 1)],
            mask: vec![0; g.vertex_count()],
            symmetry,
            local_nodes: 0,
        }
    }

    fn at(&self, v: usize, c: usize) -> Option<EdgeId> {
        match self.table[v * (self.k + 1) + c] {
            0 => None,
            e => Some(e as usize - 1),
        }
    }

    fn far(&self, v: usize, c: usize) -> Option<usize> {
        self.at(v, c).map(|e| self.g.other_end(e, v))
    }

    /// Would coloring `e` with `c` keep the coloring a star coloring?
    fn fits(&self, e: EdgeId, c: usize) -> bool {
        let (u, v) = self.g.endpoints(e);
        let bit = 1u64 << c;
        if (self.mask[u] | self.mask[v]) & bit != 0 {
            return false;
        }
        // e as a middle edge: a - u - v - b with both outer edges colored α.
        let mut common = self.mask[u] & self.mask[v];
        while common != 0 {
            let alpha = common.trailing_zeros() as usize;
            common &= common - 1;
            let a = self.far(u, alpha).expect("in mask");
            let b = self.far(v, alpha).expect("in mask");
            if self.mask[a] & bit != 0 || self.mask[b] & bit != 0 {
                return false;
            }
        }
        // e as an end edge: start - pivot - w2 - w3 - w4 colored c, β, c, β.
        for pivot in [u, v] {
            let mut betas = self.mask[pivot];
            while betas != 0 {
                let beta = betas.trailing_zeros() as usize;
                betas &= betas - 1;
                let w2 = self.far(pivot, beta).expect("in mask");
                if let Some(w3) = self.far(w2, c) {
                    if self.mask[w3] & (1u64 << beta) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&mut self, e: EdgeId, c: usize) {
        let (u, v) = self.g.endpoints(e);
        self.colors[e] = c as u8;
        for w in [u, v] {
            self.table[w * (self.k + 1) + c] = e as u32 + 1;
            self.mask[w] |= 1u64 << c;
        }
    }

    fn unassign(&mut self, e: EdgeId) {
        let c = self.colors[e] as usize;
        let (u, v) = self.g.endpoints(e);
        self.colors[e] = 0;
        for w in [u, v] {
            self.table[w * (self.k + 1) + c] = 0;
            self.mask[w] &= !(1u64 << c);
        }
    }

    fn tick(&mut self, shared: &Shared) -> bool {
        self.local_nodes += 1;
        if self.local_nodes.is_multiple_of(1024) {
            let total = shared.nodes.fetch_add(1024, Ordering::Relaxed) + 1024;
            if total > shared.max_nodes || shared.deadline.is_some_and(|d| Instant::now() >= d) {
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
        !shared.stop.load(Ordering::Relaxed)
    }

    fn max_used(&self, depth: usize) -> usize {
        self.order[..depth].iter().map(|&e| self.colors[e] as usize).max().unwrap_or(0)
    }

    /// Depth-first search from `depth`; on `Done` the state holds a full
    /// coloring. `visit` sees every complete coloring and returns false to stop.
    fn run(&mut self, depth: usize, used: usize, shared: &Shared, visit: &mut dyn FnMut(&[u8]) -> bool) -> Step {
        if depth == self.order.len() {
            return if visit(&self.colors) { Step::Exhausted } else { Step::Done };
        }
        let e = self.order[depth];
        let top = if self.symmetry { (used + 1).min(self.k) } else { self.k };
        for c in 1..=top {
            if !self.tick(shared) {
                return Step::Stopped;
            }
            if !self.fits(e, c) {
                continue;
            }
            self.assign(e, c);
            match self.run(depth + 1, used.max(c), shared, visit) {
                Step::Exhausted => self.unassign(e),
                other => return other,
            }
        }
        Step::Exhausted
    }
}

fn to_coloring(k: usize, colors: &[u8]) -> EdgeColoring {
    EdgeColoring::total(k as Color, &colors.iter().map(|&c| c as Color).collect::<Vec<_>>()).expect("in palette")
}

fn check_palette(k: usize) -> Result<(), ExactError> {
    if k > 63 {
        return Err(ExactError::PaletteTooLarge(k));
    }
    Ok(())
}

/// Decides whether `g` has a star edge coloring with at most `k` colors.
pub fn has_star_k_coloring(g: &Graph, k: usize, budget: &Budget) -> Result<Decision, ExactError> {
    decide_with(g, k, budget, SolverOptions::default())
}

pub fn decide_with(g: &Graph, k: usize, budget: &Budget, options: SolverOptions) -> Result<Decision, ExactError> {
    check_palette(k)?;
    decide(g, k, &Shared::new(budget), options)
}

fn decide(g: &Graph, k: usize, shared: &Shared, options: SolverOptions) -> Result<Decision, ExactError> {
    if g.edge_count() == 0 {
        return Ok(Decision::Yes(EdgeColoring::uncolored(0, k as Color)));
    }
    if k == 0 {
        return Ok(Decision::No);
    }
    let order = search_order(g);
    let mut found = None;
    let mut keep = |c: &[u8]| {
        found = Some(c.to_vec());
        false
    };

    if !options.parallel || rayon::current_num_threads() < 2 || g.edge_count() < 12 {
        let mut s = Search::new(g, k, &order, options.symmetry_breaking);
        return Ok(match s.run(0, 0, shared, &mut keep) {
            Step::Done => Decision::Yes(to_coloring(k, &found.expect("set on done"))),
            Step::Exhausted => Decision::No,
            Step::Stopped => Decision::Unknown,
        });
    }

    // Enumerate valid prefixes breadth-first, then search them in parallel.
    let want = rayon::current_num_threads() * 16;
    let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
    let mut depth = 0;
    while depth < order.len() && prefixes.len() < want {
        let mut next = Vec::new();
        for p in &prefixes {
            let mut s = Search::new(g, k, &order, options.symmetry_breaking);
            for (i, &c) in p.iter().enumerate() {
                s.assign(order[i], c as usize);
            }
            let used = p.iter().copied().max().unwrap_or(0) as usize;
            let top = if options.symmetry_breaking { (used + 1).min(k) } else { k };
            for c in 1..=top {
                if s.fits(order[depth], c) {
                    let mut q = p.clone();
                    q.push(c as u8);
                    next.push(q);
                }
            }
        }
        prefixes = next;
        depth += 1;
        if prefixes.is_empty() {
            return Ok(Decision::No);
        }
    }
    if depth == order.len() {
        let mut colors = vec![0u8; g.edge_count()];
        for (i, &c) in prefixes[0].iter().enumerate() {
            colors[order[i]] = c;
        }
        return Ok(Decision::Yes(to_coloring(k, &colors)));
    }

    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<(usize, Option<Vec<u8>>, bool)> = prefixes
        .par_iter()
        .enumerate()
        .map(|(idx, p)| {
            if best.load(Ordering::Relaxed) < idx || shared.stop.load(Ordering::Relaxed) {
                return (idx, None, best.load(Ordering::Relaxed) >= idx);
            }
            let mut s = Search::new(g, k, &order, options.symmetry_breaking);
            for (i, &c) in p.iter().enumerate() {
                s.assign(order[i], c as usize);
            }
            let used = s.max_used(depth);
            let mut found = None;
            let mut keep = |c: &[u8]| {
                found = Some(c.to_vec());
                false
            };
            match s.run(depth, used, shared, &mut keep) {
                Step::Done => {
                    best.fetch_min(idx, Ordering::Relaxed);
                    (idx, found, false)
                }
                Step::Exhausted => (idx, None, false),
                Step::Stopped => (idx, None, true),
            }
        })
        .collect();
    if let Some((_, Some(c), _)) = results.iter().find(|(_, c, _)| c.is_some()) {
        return Ok(Decision::Yes(to_coloring(k, c)));
    }
    if results.iter().any(|&(_, _, stopped)| stopped) {
        return Ok(Decision::Unknown);
    }
    Ok(Decision::No)
}

/// Calls `visit` on every star edge coloring of `g` with colors `1..=k`
/// (no symmetry reduction). Returns false if the budget ran out first.
pub fn enumerate_star_colorings(
    g: &Graph,
    k: usize,
    budget: &Budget,
    visit: &mut dyn FnMut(&[Color]),
) -> Result<bool, ExactError> {
    check_palette(k)?;
    if g.edge_count() == 0 {
        visit(&[]);
        return Ok(true);
    }
    let order = search_order(g);
    let shared = Shared::new(budget);
    let mut s = Search::new(g, k, &order, false);
    let mut buf = vec![0 as Color; g.edge_count()];
    let mut each = |c: &[u8]| {
        for (b, &x) in buf.iter_mut().zip(c) {
            *b = x as Color;
        }
        visit(&buf);
        true
    };
    Ok(!matches!(s.run(0, 0, &shared, &mut each), Step::Stopped))
}

/// Smallest `k` admitting a star edge coloring, searched upward from Δ. For
/// cacti the search stops at ⌊3Δ/2⌋+1; otherwise at the edge count.
pub fn star_chromatic_index(g: &Graph, budget: &Budget) -> Result<StarIndex, ExactError> {
    let m = g.edge_count();
    if m == 0 {
        return Ok(StarIndex::Exact { index: 0, witness: EdgeColoring::uncolored(0, 0) });
    }
    let delta = g.max_degree();
    let upper = if is_cactus(g).unwrap_or(false) { star_bound(delta).min(m) } else { m };
    let deadline = budget.time_limit.map(|d| Instant::now() + d);
    for k in delta..=upper {
        check_palette(k)?;
        let shared = Shared::with_deadline(budget, deadline);
        match decide(g, k, &shared, SolverOptions::default())? {
            Decision::Yes(witness) => return Ok(StarIndex::Exact { index: k, witness }),
            Decision::No => {}
            Decision::Unknown => return Ok(StarIndex::Unknown { lower: k }),
        }
    }
    Err(ExactError::NoColoringWithin(upper))
}

pub const NAIVE_MAX_EDGES: usize = 10;
pub const NAIVE_MAX_COLORS: usize = 5;

/// Brute force over all `k^m` assignments; a reference for tiny graphs.
pub fn naive_has_k_coloring(g: &Graph, k: usize) -> Result<bool, ExactError> {
    let m = g.edge_count();
    if m > NAIVE_MAX_EDGES || k > NAIVE_MAX_COLORS {
        return Err(ExactError::TooLargeForBruteForce { max_edges: NAIVE_MAX_EDGES, max_colors: NAIVE_MAX_COLORS });
    }
    if m == 0 {
        return Ok(true);
    }
    if k == 0 {
        return Ok(false);
    }
    let mut adjacent = Vec::new();
    for e in 0..m {
        for f in e + 1..m {
            if g.are_adjacent_edges(e, f) {
                adjacent.push((e, f));
            }
        }
    }
    let segments = enumerate_4edge_segments(g);
    let mut colors = vec![0usize; m];
    loop {
        let proper = adjacent.iter().all(|&(e, f)| colors[e] != colors[f]);
        if proper
            && segments.iter().all(|s| {
                let [a, b, c, d] = s.edges.map(|e| colors[e]);
                !(a == c && b == d)
            })
        {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(false);
            }
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Star chromatic index by brute force, for at most 10 edges and 5 colors.
pub fn naive_star_index(g: &Graph) -> Result<usize, ExactError> {
    for k in 0..=NAIVE_MAX_COLORS {
        if naive_has_k_coloring(g, k)? {
            return Ok(k);
        }
    }
    Err(ExactError::NoColoringWithin(NAIVE_MAX_COLORS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_star_coloring;

    fn cycle(n: usize) -> Graph {
        Graph::from_edge_list(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn path(n: usize) -> Graph {
        Graph::from_edge_list(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn c4_and_c5() {
        let b = Budget::unlimited();
        assert_eq!(has_star_k_coloring(&cycle(4), 2, &b).unwrap(), Decision::No);
        assert!(matches!(has_star_k_coloring(&cycle(4), 3, &b).unwrap(), Decision::Yes(_)));
        assert_eq!(has_star_k_coloring(&cycle(5), 3, &b).unwrap(), Decision::No);
        match has_star_k_coloring(&cycle(5), 4, &b).unwrap() {
            Decision::Yes(c) => assert!(is_star_coloring(&cycle(5), c.as_slice())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn path_p5_needs_three() {
        assert_eq!(has_star_k_coloring(&path(5), 2, &Budget::unlimited()).unwrap(), Decision::No);
        assert_eq!(naive_star_index(&path(5)).unwrap(), 3);
        assert_eq!(naive_star_index(&path(4)).unwrap(), 2);
    }

    #[test]
    fn index_of_small_cycles() {
        for n in 3..=10 {
            let want = if n % 3 == 0 { 3 } else if n == 5 { 4 } else { 3 };
            match star_chromatic_index(&cycle(n), &Budget::unlimited()).unwrap() {
                StarIndex::Exact { index, witness } => {
                    assert_eq!(index, want, "n = {n}");
                    assert!(is_star_coloring(&cycle(n), witness.as_slice()));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn node_budget_gives_unknown() {
        let g = cycle(11);
        let d = decide_with(&g, 2, &Budget::nodes(1), SolverOptions { symmetry_breaking: false, parallel: false }).unwrap();
        // Two colors on an odd cycle fail fast or run out; never Yes.
        assert!(matches!(d, Decision::No | Decision::Unknown));
    }

    #[test]
    fn symmetry_breaking_does_not_change_answers() {
        for n in 3..=9 {
            for k in 2..=4 {
                let on = decide_with(&cycle(n), k, &Budget::unlimited(), SolverOptions { symmetry_breaking: true, parallel: false }).unwrap();
                let off = decide_with(&cycle(n), k, &Budget::unlimited(), SolverOptions { symmetry_breaking: false, parallel: false }).unwrap();
                assert_eq!(matches!(on, Decision::Yes(_)), matches!(off, Decision::Yes(_)));
            }
        }
    }

    #[test]
    fn enumeration_counts_path_colorings() {
        // P3 with k colors: proper colorings k(k-1), all star.
        let mut count = 0;
        assert!(enumerate_star_colorings(&path(3), 3, &Budget::unlimited(), &mut |_| count += 1).unwrap());
        assert_eq!(count, 6);
        // C4 with 3 colors: proper colorings minus the bicolored ones.
        let mut count = 0;
        enumerate_star_colorings(&cycle(4), 3, &Budget::unlimited(), &mut |c| {
            assert!(is_star_coloring(&cycle(4), &c.iter().map(|&x| Some(x)).collect::<Vec<_>>()));
            count += 1;
        })
        .unwrap();
        // 18 proper 3-colorings of C4, 6 of which use two colors.
        assert_eq!(count, 12);
    }

    #[test]
    fn brute_force_guard() {
        assert!(naive_star_index(&path(12)).is_err());
        assert!(naive_has_k_coloring(&path(3), 6).is_err());
    }

    #[test]
    fn search_order_starts_at_max_degree() {
        let g = Graph::from_edge_list(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert_eq!(search_order(&g), vec![0, 1, 2, 3]);
    }

    #[test]
    fn parallel_split_agrees_with_serial() {
        let mut pairs: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        pairs.extend((0..6).map(|i| (i, 6 + i)));
        pairs.extend([(6, 12), (7, 13), (8, 14)]);
        let g = Graph::from_edge_list(15, &pairs).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let serial = SolverOptions { symmetry_breaking: true, parallel: false };
        for k in 2..6 {
            let a = decide_with(&g, k, &Budget::unlimited(), serial).unwrap();
            let b = pool.install(|| decide_with(&g, k, &Budget::unlimited(), SolverOptions::default()).unwrap());
            assert_eq!(matches!(a, Decision::Yes(_)), matches!(b, Decision::Yes(_)), "k = {k}");
            if let Decision::Yes(c) = b {
                assert!(is_star_coloring(&g, c.as_slice()));
            }
        }
    }
}
