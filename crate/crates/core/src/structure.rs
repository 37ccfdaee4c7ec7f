//! Structural checks on windowed `F_k`: monotonicity of components,
//! isolated vertices, acyclicity, cut vertices, and the linking test for
//! planarity of line preimages.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::clique::{solve, BitGraph, SearchOptions};
use crate::error::{Error, Result};
use crate::graph::{build, LevelGraph, LevelSweep, MergeWitness, Mode, WindowSpec};
use crate::projline::{prime_power, smallest_prime_factor, LineSpace, ProjLine};
use crate::vertex::{det_pair, vertices_up_to_level, FareyVertex, Level};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub k: u64,
    pub m_lo: u64,
    pub m_hi: u64,
    pub pass: bool,
    /// `(m, b0(F_k^(m)))` for `m_lo..=m_hi`.
    pub b0: Vec<(u64, usize)>,
    pub counterexample: Option<MergeWitness>,
}

/// Checks, level by level from `m_lo` to `m_hi`, that no two vertices in
/// different components of `F_k^(m)` share a component of `F_k^(m+1)`.
pub fn verify_monotone(k: u64, m_lo: u64, m_hi: u64) -> Result<MonotoneReport> {
    if !(k < m_lo && m_lo < m_hi) {
        return Err(Error::invalid(format!(
            "need k < m_lo < m_hi, got k={k}, m_lo={m_lo}, m_hi={m_hi}"
        )));
    }
    let mut sweep = LevelSweep::new(k)?;
    while sweep.level() < m_lo {
        sweep.advance()?;
    }
    let mut b0 = vec![(m_lo, sweep.b0())];
    let mut counterexample = None;
    while sweep.level() < m_hi {
        let (count, merge) = sweep.advance_checked()?;
        b0.push((sweep.level(), count));
        if counterexample.is_none() {
            counterexample = merge;
        }
    }
    Ok(MonotoneReport { k, m_lo, m_hi, pass: counterexample.is_none(), b0, counterexample })
}

/// Vertices of the form `x/p^ℓ` with `x > k`, `x ≡ k/p^ℓ (mod p)`, where `p`
/// is the smallest prime factor of `k` and `p^ℓ` its full power in `k`.
/// Each is confirmed isolated in `F_k^(x)` by scanning every vertex of
/// level at most `x`; unconfirmed candidates are skipped.
pub fn find_isolated_witnesses(k: u64, count: usize) -> Result<Vec<(FareyVertex, Level)>> {
    if k < 2 || prime_power(k).is_some() {
        return Err(Error::invalid(format!(
            "{k} is a prime power or 1; isolated witnesses need another k"
        )));
    }
    let p = smallest_prime_factor(k);
    let mut pl = 1;
    while k.is_multiple_of(pl * p) {
        pl *= p;
    }
    let c = k / pl;
    let mut out = Vec::with_capacity(count);
    let mut x = k + 1;
    // Generous cap on candidates in case verification rejects some.
    let limit = k + 1 + 64 * p * (count as u64 + 1);
    while out.len() < count && x <= limit {
        if x % p == c % p {
            let v = FareyVertex::new(x as i64, pl as i64)?;
            let lvl = v.level();
            if is_isolated_by_scan(v, k, lvl.0) {
                out.push((v, lvl));
            }
        }
        x += 1;
    }
    Ok(out)
}

fn is_isolated_by_scan(v: FareyVertex, k: u64, level: u64) -> bool {
    vertices_up_to_level(level).into_iter().all(|w| det_pair(v, w) != k)
}

/// Whether a component of an exact-k graph has no cycle.
pub fn is_forest(g: &LevelGraph, component: usize) -> Result<bool> {
    if g.mode() != Mode::ExactK {
        return Err(Error::invalid("acyclicity is checked on exact-k graphs"));
    }
    if component >= g.component_count() {
        return Err(Error::invalid(format!("no component {component}")));
    }
    let members: Vec<usize> = (0..g.len()).filter(|&i| g.component_of(i) == component).collect();
    let degree_sum: usize = members.iter().map(|&i| g.degree(i)).sum();
    Ok(degree_sum / 2 + 1 == members.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutCheck {
    Cut,
    NotCut,
    /// The window does not show enough of the neighborhood.
    Inconclusive,
}

/// The window shrunk by `margin`.
fn inner(window: WindowSpec, margin: Level) -> WindowSpec {
    WindowSpec { bound: window.bound.saturating_sub(margin.0), ..window }
}

/// Removes `v` and asks whether its window neighbors fall in at least two
/// components of what remains.
///
/// Neighbors of `v` that are adjacent to each other form clusters; a window
/// showing only one cluster says nothing about separation, since the rest of
/// the (infinite) neighborhood lies outside it. The answer is inconclusive
/// then, and also when `v` is not `margin` inside the window.
pub fn cut_vertex_check(g: &LevelGraph, v: FareyVertex, margin: Level) -> Result<CutCheck> {
    if g.mode() != Mode::ExactK || g.k() < 2 {
        return Err(Error::invalid("cut vertices are checked on exact-k graphs with k ≥ 2"));
    }
    let vi = g
        .index_of(v)
        .ok_or_else(|| Error::invalid(format!("{v} is not in the window {}", g.window())))?;
    let nbrs: Vec<usize> = g.neighbors(vi).iter().map(|&j| j as usize).collect();
    if !inner(g.window(), margin).contains(v) || nbrs.len() < 2 {
        return Ok(CutCheck::Inconclusive);
    }
    let mut clusters = DisjointSets::new(nbrs.len());
    for a in 0..nbrs.len() {
        for b in a + 1..nbrs.len() {
            if g.has_edge(nbrs[a], nbrs[b]) {
                clusters.union(a, b);
            }
        }
    }
    if clusters.count() < 2 {
        return Ok(CutCheck::Inconclusive);
    }
    // Breadth-first search from one neighbor with v deleted.
    let mut seen = vec![false; g.len()];
    seen[vi] = true;
    seen[nbrs[0]] = true;
    let mut queue = VecDeque::from([nbrs[0]]);
    while let Some(i) = queue.pop_front() {
        for &j in g.neighbors(i) {
            let j = j as usize;
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    Ok(if nbrs[1..].iter().any(|&j| !seen[j]) { CutCheck::Cut } else { CutCheck::NotCut })
}

/// Two edges whose endpoints alternate around the circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkedPair {
    pub first: (FareyVertex, FareyVertex),
    pub second: (FareyVertex, FareyVertex),
}

/// Scans all pairs of `edges` for a linked pair in the circular order of
/// `Q ∪ {∞}`. Edges sharing an endpoint never link.
pub fn find_linked_pair(edges: &[(FareyVertex, FareyVertex)]) -> Option<LinkedPair> {
    let mut points: Vec<FareyVertex> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    points.sort_by(FareyVertex::cmp_circular);
    points.dedup();
    let pos = |v: &FareyVertex| {
        points.binary_search_by(|p| p.cmp_circular(v)).expect("endpoint was collected")
    };
    let chords: Vec<(usize, usize)> = edges
        .iter()
        .map(|(a, b)| {
            let (x, y) = (pos(a), pos(b));
            (x.min(y), x.max(y))
        })
        .collect();
    for (i, &(a, b)) in chords.iter().enumerate() {
        for (j, &(c, d)) in chords.iter().enumerate().skip(i + 1) {
            let alternates = (a < c && c < b && b < d) || (c < a && a < d && d < b);
            if alternates {
                return Some(LinkedPair { first: edges[i], second: edges[j] });
            }
        }
    }
    None
}

/// True iff the edges of `g` inside `φ_k⁻¹(line)` contain no linked pair.
pub fn planarity_linking_check(g: &LevelGraph, line: ProjLine) -> Result<bool> {
    if g.mode() != Mode::ExactK {
        return Err(Error::invalid("the linking check runs on exact-k graphs"));
    }
    if line.modulus() != g.k() {
        return Err(Error::invalid(format!("{line} is not a line mod {}", g.k())));
    }
    let space = LineSpace::new(g.k())?;
    let vs = g.vertices();
    let edges: Vec<(FareyVertex, FareyVertex)> = g
        .edges()
        .map(|(i, j)| (vs[i], vs[j]))
        .filter(|&(a, b)| space.phi(a) == line && space.phi(b) == line)
        .collect();
    Ok(find_linked_pair(&edges).is_none())
}

/// Every edge of `g`.
pub fn edge_list(g: &LevelGraph) -> Vec<(FareyVertex, FareyVertex)> {
    let vs = g.vertices();
    g.edges().map(|(i, j)| (vs[i], vs[j])).collect()
}

/// Maximum clique size of the windowed `F_k`.
pub fn clique_number_exact_k(k: u64, window: WindowSpec) -> Result<usize> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let probe = [
        FareyVertex::INFINITY,
        FareyVertex::new(1, k as i64)?,
        FareyVertex::new(2, k as i64)?,
    ];
    if let Some(v) = probe.iter().find(|v| !window.contains(**v)) {
        return Err(Error::invalid(format!("window {window} does not contain {v}")));
    }
    let g = build(Mode::ExactK, k, window)?;
    let bg = BitGraph::from_adjacency(g.adjacency());
    let out = solve(&bg, &SearchOptions::default());
    Ok(out.witness.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub k: u64,
    /// `p^(ℓ−1)(p+1)` when `k = p^ℓ`.
    pub target: Option<usize>,
    pub stabilized: bool,
    pub plateau: Option<usize>,
    /// First level of the plateau.
    pub first_level: Option<u64>,
    /// `b0(F_k^(m))` for `m = 1..=m_max`.
    pub series: Vec<usize>,
}

/// Looks for a run of `max(k, 10)` equal values of `b0`, which must also
/// equal the target when `k` is a prime power.
pub fn stabilization(k: u64, m_max: u64) -> Result<StabilizationReport> {
    let target = prime_power(k).map(|(p, l)| (p.pow(l - 1) * (p + 1)) as usize);
    let run = k.max(10) as usize;
    let mut sweep = LevelSweep::new(k)?;
    let mut series = Vec::with_capacity(m_max as usize);
    let mut found = None;
    let mut start = 0;
    for _ in 1..=m_max {
        let b = sweep.advance()?;
        series.push(b);
        let i = series.len() - 1;
        if i > 0 && series[i - 1] != b {
            start = i;
        }
        let long_enough = i + 1 - start >= run;
        if long_enough && target.is_none_or(|t| t == b) {
            found = Some((b, start as u64 + 1));
            break;
        }
    }
    Ok(StabilizationReport {
        k,
        target,
        stabilized: found.is_some(),
        plateau: found.map(|f| f.0),
        first_level: found.map(|f| f.1),
        series,
    })
}

/// Lowest level at which `b0` reaches `bound`, scanning up to `m_max`.
pub fn first_level_exceeding(k: u64, bound: usize, m_max: u64) -> Result<Option<u64>> {
    let mut sweep = LevelSweep::new(k)?;
    for m in 1..=m_max {
        if sweep.advance()? > bound {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
