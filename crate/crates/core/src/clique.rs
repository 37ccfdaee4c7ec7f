//! Exact maximum clique search.
//!
//! Branch and bound over bitset adjacency: candidates are greedily colored,
//! branching runs from the highest color down, and a branch is cut as soon
//! as `|current| + color ≤ best`. The initial vertex order is a degeneracy
//! order (smallest-last), which keeps the coloring bound tight.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build, LevelGraph, Mode, WindowSpec};
use crate::vertex::{det_pair, FareyVertex};

/// Dense bitset adjacency over `n` vertices.
#[derive(Clone, Debug)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph { n, words, rows: vec![0; n * words] }
    }

    pub fn from_adjacency(adj: &[Vec<u32>]) -> Self {
        let mut g = BitGraph::new(adj.len());
        for (i, row) in adj.iter().enumerate() {
            for &j in row {
                g.add_edge(i, j as usize);
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Induced subgraph on `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> BitGraph {
        let mut g = BitGraph::new(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(i, j) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(a, &i)| vs[a + 1..].iter().all(|&j| i != j && self.has_edge(i, j)))
    }
}

/// Degeneracy order of `g`; see [`crate::graph::degeneracy_order`].
pub fn degeneracy_order(g: &BitGraph) -> Vec<usize> {
    let lists: Vec<Vec<u32>> =
        (0..g.len()).map(|i| iter_bits(g.row(i)).map(|j| j as u32).collect()).collect();
    crate::graph::degeneracy_order(&lists)
}

fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                None
            } else {
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            }
        })
    })
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Wall-clock budget; `None` searches to completion.
    pub budget: Option<Duration>,
    /// A clique already known (indices into the graph); only strictly larger
    /// cliques are searched for.
    pub seed: Vec<usize>,
    /// Prune as if a clique of this size were known.
    pub lower_bound: usize,
    /// Re-search for the lexicographically smallest optimum (by index).
    pub canonical_witness: bool,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Best clique found, sorted by index. Empty if nothing beat the lower
    /// bound and no seed was given.
    pub witness: Vec<usize>,
    /// True when the search finished: no clique larger than
    /// `max(witness.len(), lower_bound)` exists.
    pub complete: bool,
    pub nodes: u64,
    pub elapsed: Duration,
}

struct Search<'a> {
    g: &'a BitGraph,
    /// `order[i]` is the original index of search position `i`.
    order: Vec<usize>,
    /// Adjacency permuted into search order.
    pg: BitGraph,
    best: Vec<usize>,
    best_size: usize,
    current: Vec<usize>,
    nodes: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a BitGraph, deadline: Option<Instant>) -> Self {
        let order = degeneracy_order(g);
        let pg = g.induced(&order);
        Search {
            g,
            order,
            pg,
            best: Vec::new(),
            best_size: 0,
            current: Vec::new(),
            nodes: 0,
            deadline,
            timed_out: false,
        }
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Greedy sequential coloring of `p`: vertices listed by increasing
    /// color, with their colors.
    fn color(&self, p: &[u64], verts: &mut Vec<usize>, colors: &mut Vec<usize>) {
        verts.clear();
        colors.clear();
        let mut uncolored = p.to_vec();
        let mut q = vec![0u64; p.len()];
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            q.copy_from_slice(&uncolored);
            while let Some(w) = q.iter().position(|&w| w != 0) {
                let v = w * 64 + q[w].trailing_zeros() as usize;
                q[w] &= q[w] - 1;
                uncolored[w] &= !(1u64 << (v % 64));
                for (qw, nw) in q.iter_mut().zip(self.pg.row(v)) {
                    *qw &= !nw;
                }
                verts.push(v);
                colors.push(color);
            }
        }
    }

    fn expand(&mut self, p: &mut [u64]) {
        self.nodes += 1;
        if self.out_of_time() {
            return;
        }
        let mut verts = Vec::new();
        let mut colors = Vec::new();
        self.color(p, &mut verts, &mut colors);
        for idx in (0..verts.len()).rev() {
            if self.current.len() + colors[idx] <= self.best_size {
                return;
            }
            let v = verts[idx];
            self.current.push(v);
            let mut next: Vec<u64> =
                p.iter().zip(self.pg.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if self.current.len() > self.best_size {
                    self.best_size = self.current.len();
                    self.best = self.current.clone();
                }
            } else {
                self.expand(&mut next);
            }
            self.current.pop();
            p[v / 64] &= !(1u64 << (v % 64));
            if self.timed_out {
                return;
            }
        }
    }
}

/// Maximum clique of `g`.
pub fn solve(g: &BitGraph, opts: &SearchOptions) -> SearchOutcome {
    let start = Instant::now();
    let deadline = opts.budget.map(|b| start + b);
    let seed_ok = !opts.seed.is_empty() && g.is_clique(&opts.seed);
    let mut search = Search::new(g, deadline);
    search.best_size = opts.lower_bound.max(if seed_ok { opts.seed.len() } else { 0 });

    if !g.is_empty() {
        let mut all = vec![0u64; search.pg.words];
        for i in 0..g.len() {
            all[i / 64] |= 1 << (i % 64);
        }
        search.expand(&mut all);
    }

    let found: Vec<usize> = search.best.iter().map(|&i| search.order[i]).collect();
    let mut witness = if !found.is_empty() {
        found
    } else if seed_ok {
        opts.seed.clone()
    } else {
        Vec::new()
    };
    witness.sort_unstable();
    let complete = !search.timed_out;
    let mut nodes = search.nodes;

    if opts.canonical_witness && complete && !witness.is_empty() {
        let remaining = deadline.map(|d| d.saturating_duration_since(Instant::now()));
        if let Some(lex) = lex_first_clique(search.g, witness.len(), remaining, &mut nodes) {
            witness = lex;
        }
    }

    SearchOutcome { witness, complete, nodes, elapsed: start.elapsed() }
}

/// The lexicographically smallest clique of exactly `size` vertices (by
/// sorted index sequence), if the search finishes within `budget`.
pub fn lex_first_clique(
    g: &BitGraph,
    size: usize,
    budget: Option<Duration>,
    nodes: &mut u64,
) -> Option<Vec<usize>> {
    let deadline = budget.map(|b| Instant::now() + b);
    let mut current = Vec::with_capacity(size);
    let all: Vec<usize> = (0..g.len()).collect();
    let mut timed_out = false;
    let found = lex_dfs(g, size, &all, &mut current, deadline, nodes, &mut timed_out);
    if timed_out {
        None
    } else {
        found
    }
}

fn lex_dfs(
    g: &BitGraph,
    size: usize,
    cand: &[usize],
    current: &mut Vec<usize>,
    deadline: Option<Instant>,
    nodes: &mut u64,
    timed_out: &mut bool,
) -> Option<Vec<usize>> {
    *nodes += 1;
    if (*nodes).is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
        *timed_out = true;
    }
    if *timed_out {
        return None;
    }
    if current.len() == size {
        return Some(current.clone());
    }
    if current.len() + greedy_color_count(g, cand) < size {
        return None;
    }
    for (a, &v) in cand.iter().enumerate() {
        if current.len() + (cand.len() - a) < size {
            return None;
        }
        let next: Vec<usize> = cand[a + 1..].iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        current.push(v);
        let r = lex_dfs(g, size, &next, current, deadline, nodes, timed_out);
        current.pop();
        if r.is_some() || *timed_out {
            return r;
        }
    }
    None
}

fn greedy_color_count(g: &BitGraph, vs: &[usize]) -> usize {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in vs {
        match classes.iter_mut().find(|c| c.iter().all(|&u| !g.has_edge(u, v))) {
            Some(c) => c.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes.len()
}

/// Outcome of a windowed search in `F_≤k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueResult {
    pub k: u64,
    pub size: usize,
    pub witness: Vec<FareyVertex>,
    /// No clique larger than `size` exists inside `window`.
    pub optimal_within_window: bool,
    pub window: WindowSpec,
    pub nodes_explored: u64,
    #[serde(with = "seconds")]
    pub elapsed: Duration,
}

mod seconds {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        let secs = f64::deserialize(d)?;
        Duration::try_from_secs_f64(secs).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
pub struct CliqueOptions {
    pub budget: Duration,
    /// Only cliques of at least this size are searched for.
    pub initial_lower: Option<usize>,
    /// A known clique, typically a construction certificate. It need not
    /// lie inside the window.
    pub seed: Vec<FareyVertex>,
}

impl CliqueOptions {
    pub fn with_budget(budget: Duration) -> Self {
        CliqueOptions { budget, initial_lower: None, seed: Vec::new() }
    }
}

/// Checks that `vs` are distinct and pairwise at determinant between 1 and
/// `k`.
pub fn verify_clique(k: u64, vs: &[FareyVertex]) -> Result<()> {
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            let d = det_pair(a, b);
            if d == 0 || d > k {
                return Err(Error::invalid(format!(
                    "{a} and {b} have determinant {d}, outside 1..={k}"
                )));
            }
        }
    }
    Ok(())
}

/// Exact maximum clique of `F_≤k` inside `window`, within a time budget.
pub fn max_clique(k: u64, window: WindowSpec, opts: &CliqueOptions) -> Result<CliqueResult> {
    if opts.budget.is_zero() {
        return Err(Error::invalid("time budget must be positive"));
    }
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let g = build(Mode::AtMostK, k, window)?;
    max_clique_in(&g, opts)
}

/// As [`max_clique`], on an already built `F_≤k` window.
pub fn max_clique_in(g: &LevelGraph, opts: &CliqueOptions) -> Result<CliqueResult> {
    if g.mode() != Mode::AtMostK {
        return Err(Error::invalid("clique search runs on at-most-k graphs"));
    }
    if g.is_empty() {
        return Err(Error::invalid("the window contains no vertices"));
    }
    verify_clique(g.k(), &opts.seed)?;
    let start = Instant::now();
    let deadline = start + opts.budget;
    let bits = BitGraph::from_adjacency(g.adjacency());
    let seed_idx: Option<Vec<usize>> =
        opts.seed.iter().map(|&v| g.index_of(v)).collect::<Option<Vec<_>>>();
    let outside_seed = if seed_idx.is_none() { opts.seed.len() } else { 0 };

    let remaining = || deadline.saturating_duration_since(Instant::now());
    let mut search = SearchOptions {
        budget: Some(remaining()),
        seed: seed_idx.clone().unwrap_or_default(),
        lower_bound: opts.initial_lower.unwrap_or(0).max(outside_seed + 1),
        canonical_witness: true,
    };
    let mut out = solve(&bits, &search);
    let mut nodes = out.nodes;
    if out.witness.is_empty() && out.complete {
        // Nothing at or above the requested size. Fall back to the best
        // in-window clique, preferring the outside seed if it is larger.
        search.lower_bound = 0;
        search.budget = Some(remaining());
        out = solve(&bits, &search);
        nodes += out.nodes;
    }

    let mut witness: Vec<FareyVertex> = out.witness.iter().map(|&i| g.vertices()[i]).collect();
    if witness.len() < outside_seed {
        witness = opts.seed.clone();
        witness.sort();
    }
    verify_clique(g.k(), &witness)?;
    Ok(CliqueResult {
        k: g.k(),
        size: witness.len(),
        witness,
        optimal_within_window: out.complete,
        window: g.window(),
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}

/// Denominator-cap windows `N = start, 2·start, …` up to `max_bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPolicy {
    pub start: u64,
    pub max_bound: u64,
}

impl WindowPolicy {
    /// Starts at `max(k, 4)`.
    pub fn doubling_for(k: u64, max_bound: u64) -> Self {
        WindowPolicy { start: k.max(4), max_bound: max_bound.max(k.max(4)) }
    }
}

/// Runs [`max_clique`] on growing windows, each seeded with the best clique
/// so far, until the budget runs out, `max_bound` is passed, or `stop_at` is
/// reached. Returns the best result and one result per window tried.
pub fn search_growing(
    k: u64,
    policy: WindowPolicy,
    budget: Duration,
    seed: &[FareyVertex],
    stop_at: Option<usize>,
) -> Result<(CliqueResult, Vec<CliqueResult>)> {
    if policy.start == 0 {
        return Err(Error::invalid("window policy must start at 1 or more"));
    }
    let start = Instant::now();
    let mut tried: Vec<CliqueResult> = Vec::new();
    let mut best_seed = seed.to_vec();
    let mut n = policy.start;
    while n <= policy.max_bound {
        let left = budget.saturating_sub(start.elapsed());
        if left.is_zero() {
            break;
        }
        let opts = CliqueOptions { budget: left, initial_lower: None, seed: best_seed.clone() };
        let r = match max_clique(k, WindowSpec::denominator_cap(n), &opts) {
            Ok(r) => r,
            // Out of memory headroom: keep what we have.
            Err(Error::ResourceLimit { .. }) if !tried.is_empty() => break,
            Err(e) => return Err(e),
        };
        best_seed = r.witness.clone();
        let done = stop_at.is_some_and(|t| r.size >= t) || !r.optimal_within_window;
        tried.push(r);
        if done {
            break;
        }
        n *= 2;
    }
    let best = tried
        .iter()
        .max_by_key(|r| (r.size, std::cmp::Reverse(r.window.bound)))
        .cloned()
        .ok_or_else(|| Error::invalid("no window was searched"))?;
    Ok((best, tried))
}
