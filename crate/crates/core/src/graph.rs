//! Finite windows of `F_k` and `F_≤k`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::neighbors::neighbors_within;
use crate::projline::{LineSpace, ProjLine};
use crate::vertex::{det_pair, FareyVertex, Level, MAX_COORD};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Edges at determinant exactly `k`.
    ExactK,
    /// Edges at determinant in `1..=k`.
    AtMostK,
}

impl Mode {
    pub fn admits(&self, k: u64, det: u64) -> bool {
        match self {
            Mode::ExactK => det == k,
            Mode::AtMostK => det >= 1 && det <= k,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::ExactK => "exact-k",
            Mode::AtMostK => "at-most-k",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// `max(|p|, |q|) ≤ bound`
    LevelCap,
    /// `|p| ≤ bound` and `0 ≤ q ≤ bound`
    DenominatorCap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WindowSpec {
    pub kind: WindowKind,
    pub bound: u64,
    pub include_infinity: bool,
}

impl WindowSpec {
    pub fn level_cap(bound: u64) -> Self {
        WindowSpec { kind: WindowKind::LevelCap, bound, include_infinity: true }
    }

    pub fn denominator_cap(bound: u64) -> Self {
        WindowSpec { kind: WindowKind::DenominatorCap, bound, include_infinity: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bound == 0 {
            return Err(Error::invalid("window bound must be at least 1"));
        }
        if self.bound > MAX_COORD as u64 {
            return Err(Error::invalid(format!("window bound {} is too large", self.bound)));
        }
        Ok(())
    }

    pub fn contains(&self, v: FareyVertex) -> bool {
        if v.is_infinity() {
            return self.include_infinity;
        }
        // Both kinds bound |p| and q by the same number.
        v.p().unsigned_abs() <= self.bound && (v.q() as u64) <= self.bound
    }

    /// Window vertices sorted by `(q, p)`, failing once more than `limit`
    /// would be produced.
    pub fn vertices(&self, limit: usize) -> Result<Vec<FareyVertex>> {
        self.validate()?;
        let n = self.bound as i64;
        let mut out = Vec::new();
        if self.include_infinity {
            out.push(FareyVertex::INFINITY);
        }
        for q in 1..=n {
            for p in -n..=n {
                if p.unsigned_abs().gcd(&(q as u64)) == 1 {
                    out.push(FareyVertex::from_canonical(p, q));
                }
            }
            if out.len() > limit {
                return Err(Error::ResourceLimit {
                    what: "window vertices",
                    limit,
                    actual: out.len(),
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            WindowKind::LevelCap => "level",
            WindowKind::DenominatorCap => "denom",
        };
        write!(f, "{kind}<={}", self.bound)?;
        if !self.include_infinity {
            f.write_str(" without 1/0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacencyStrategy {
    /// All pairs, `O(n²)` determinants.
    PairwiseScan,
    /// Per-vertex sweep of the neighbor families.
    Seeded,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub strategy: AdjacencyStrategy,
    pub max_vertices: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { strategy: AdjacencyStrategy::Seeded, max_vertices: 4_000_000 }
    }
}

/// The subgraph of `F_k` or `F_≤k` induced on a window.
#[derive(Clone, Debug)]
pub struct LevelGraph {
    mode: Mode,
    k: u64,
    window: WindowSpec,
    vertices: Vec<FareyVertex>,
    index: HashMap<FareyVertex, u32>,
    adj: Vec<Vec<u32>>,
    /// Component id per vertex; ids are numbered by first vertex in order.
    component: Vec<u32>,
    component_count: usize,
}

/// Builds the windowed graph with the default (seeded) strategy.
pub fn build(mode: Mode, k: u64, window: WindowSpec) -> Result<LevelGraph> {
    LevelGraph::build_with(mode, k, window, BuildOptions::default())
}

impl LevelGraph {
    pub fn build_with(
        mode: Mode,
        k: u64,
        window: WindowSpec,
        opts: BuildOptions,
    ) -> Result<LevelGraph> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let vertices = window.vertices(opts.max_vertices)?;
        Self::from_vertices(mode, k, window, vertices, opts.strategy)
    }

    /// Induced subgraph on an explicit vertex list. The window is kept only
    /// as a label.
    pub fn from_vertices(
        mode: Mode,
        k: u64,
        window: WindowSpec,
        mut vertices: Vec<FareyVertex>,
        strategy: AdjacencyStrategy,
    ) -> Result<LevelGraph> {
        vertices.sort_unstable();
        vertices.dedup();
        let index: HashMap<FareyVertex, u32> =
            vertices.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();

        let adj = match strategy {
            AdjacencyStrategy::PairwiseScan => pairwise_adjacency(mode, k, &vertices),
            AdjacencyStrategy::Seeded => seeded_adjacency(mode, k, &vertices, &index)?,
        };

        let mut dsu = DisjointSets::new(vertices.len());
        for (i, nbrs) in adj.iter().enumerate() {
            for &j in nbrs {
                dsu.union(i, j as usize);
            }
        }
        let mut label_of_root = HashMap::new();
        let mut component = Vec::with_capacity(vertices.len());
        for i in 0..vertices.len() {
            let root = dsu.find(i);
            let next = label_of_root.len() as u32;
            component.push(*label_of_root.entry(root).or_insert(next));
        }
        Ok(LevelGraph {
            mode,
            k,
            window,
            vertices,
            index,
            adj,
            component,
            component_count: label_of_root.len(),
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn window(&self) -> WindowSpec {
        self.window
    }

    pub fn vertices(&self) -> &[FareyVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: FareyVertex) -> Option<usize> {
        self.index.get(&v).map(|&i| i as usize)
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[i]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&(j as u32)).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, nbrs)| {
            nbrs.iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i, j as usize))
        })
    }

    pub fn component_of(&self, i: usize) -> usize {
        self.component[i] as usize
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Vertex indices of each component, components ordered by their first
    /// (smallest) vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.component_count];
        for (i, &c) in self.component.iter().enumerate() {
            out[c as usize].push(i);
        }
        out
    }
}

fn pairwise_adjacency(mode: Mode, k: u64, vertices: &[FareyVertex]) -> Vec<Vec<u32>> {
    let n = vertices.len();
    let upper: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| mode.admits(k, det_pair(vertices[i], vertices[j])))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let mut adj = vec![Vec::new(); n];
    for (i, row) in upper.into_iter().enumerate() {
        for j in row {
            adj[i].push(j);
            adj[j as usize].push(i as u32);
        }
    }
    for row in &mut adj {
        row.sort_unstable();
    }
    adj
}

fn seeded_adjacency(
    mode: Mode,
    k: u64,
    vertices: &[FareyVertex],
    index: &HashMap<FareyVertex, u32>,
) -> Result<Vec<Vec<u32>>> {
    let cap = Level(vertices.iter().map(|v| v.level().0).max().unwrap_or(1));
    let dets: Vec<u64> = match mode {
        Mode::ExactK => vec![k],
        Mode::AtMostK => (1..=k).collect(),
    };
    vertices
        .par_iter()
        .map(|&v| {
            let mut row = Vec::new();
            for &d in &dets {
                for u in neighbors_within(v, d, cap)? {
                    if let Some(&j) = index.get(&u) {
                        row.push(j);
                    }
                }
            }
            row.sort_unstable();
            row.dedup();
            Ok(row)
        })
        .collect()
}

/// One component's summary line in a [`ComponentReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub representative: FareyVertex,
    pub size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<ProjLine>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub k: u64,
    pub mode: Mode,
    pub window: WindowSpec,
    pub b0: usize,
    /// Component orders, in component order.
    pub sizes: Vec<usize>,
    /// `φ_k` label per component (exact-k mode with `k ≥ 2` only).
    pub lines: Vec<ProjLine>,
    pub isolated: Vec<FareyVertex>,
    /// False if some exact-k component meets two different lines.
    pub monochromatic: bool,
}

impl ComponentReport {
    pub fn summaries(&self, g: &LevelGraph) -> Vec<ComponentSummary> {
        g.components()
            .iter()
            .enumerate()
            .map(|(c, members)| ComponentSummary {
                representative: g.vertices[members[0]],
                size: members.len(),
                line: self.lines.get(c).copied(),
            })
            .collect()
    }
}

pub fn count_components(g: &LevelGraph) -> ComponentReport {
    let comps = g.components();
    let sizes = comps.iter().map(Vec::len).collect();
    let isolated = (0..g.len())
        .filter(|&i| g.degree(i) == 0)
        .map(|i| g.vertices[i])
        .collect();
    let mut lines = Vec::new();
    let mut monochromatic = true;
    if g.mode == Mode::ExactK && g.k >= 2 {
        let space = LineSpace::new(g.k).expect("k >= 2");
        for members in &comps {
            let line = space.phi(g.vertices[members[0]]);
            monochromatic &= members.iter().all(|&i| space.phi(g.vertices[i]) == line);
            lines.push(line);
        }
    }
    ComponentReport {
        k: g.k,
        mode: g.mode,
        window: g.window,
        b0: comps.len(),
        sizes,
        lines,
        isolated,
        monochromatic,
    }
}

/// Vertices of level exactly `level`, sorted by `(q, p)`.
pub fn vertices_at_level(level: u64) -> Vec<FareyVertex> {
    let m = level as i64;
    let mut out = Vec::new();
    if m == 1 {
        out.push(FareyVertex::INFINITY);
    }
    for q in 1..=m {
        let ps: Vec<i64> = if q == m { (-m..=m).collect() } else { vec![-m, m] };
        for p in ps {
            if p.unsigned_abs().gcd(&(q as u64)) == 1 {
                out.push(FareyVertex::from_canonical(p, q));
            }
        }
    }
    out
}

/// Incremental exhaustion `F_k^(1) ⊂ F_k^(2) ⊂ …`, one level at a time.
#[derive(Clone, Debug)]
pub struct LevelSweep {
    k: u64,
    level: u64,
    vertices: Vec<FareyVertex>,
    index: HashMap<FareyVertex, u32>,
    dsu: DisjointSets,
    edges: usize,
}

/// Two old vertices that were in different components at level `m` but are
/// joined at level `m + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeWitness {
    pub level: u64,
    pub first: FareyVertex,
    pub second: FareyVertex,
}

impl LevelSweep {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        Ok(LevelSweep {
            k,
            level: 0,
            vertices: Vec::new(),
            index: HashMap::new(),
            dsu: DisjointSets::new(0),
            edges: 0,
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn b0(&self) -> usize {
        self.dsu.count()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Adds the next level and returns the new `b0`.
    pub fn advance(&mut self) -> Result<usize> {
        let level = self.level + 1;
        let fresh = vertices_at_level(level);
        for &v in &fresh {
            let i = self.dsu.push();
            self.vertices.push(v);
            self.index.insert(v, i as u32);
        }
        for &v in &fresh {
            let i = self.index[&v] as usize;
            for u in neighbors_within(v, self.k, Level(level))? {
                if let Some(&j) = self.index.get(&u) {
                    // Edges between two new vertices are seen from both ends.
                    if u.level().0 < level || (j as usize) > i {
                        self.edges += 1;
                        self.dsu.union(i, j as usize);
                    }
                }
            }
        }
        self.level = level;
        Ok(self.dsu.count())
    }

    /// Advances one level and reports any pair of previously separated
    /// vertices that the new level joins.
    pub fn advance_checked(&mut self) -> Result<(usize, Option<MergeWitness>)> {
        let old = self.vertices.len();
        let before: Vec<usize> = (0..old).map(|i| self.dsu.find(i)).collect();
        let b0 = self.advance()?;
        let mut seen: HashMap<usize, (usize, usize)> = HashMap::new();
        for (i, &old_root) in before.iter().enumerate() {
            let root = self.dsu.find(i);
            match seen.get(&root) {
                Some(&(first, first_root)) if first_root != old_root => {
                    return Ok((
                        b0,
                        Some(MergeWitness {
                            level: self.level - 1,
                            first: self.vertices[first],
                            second: self.vertices[i],
                        }),
                    ));
                }
                Some(_) => {}
                None => {
                    seen.insert(root, (i, old_root));
                }
            }
        }
        Ok((b0, None))
    }

    /// The number of distinct `φ_k` lines among current vertices.
    pub fn lines_hit(&self) -> usize {
        let Ok(space) = LineSpace::new(self.k) else { return 1 };
        let mut lines: Vec<ProjLine> = self.vertices.iter().map(|&v| space.phi(v)).collect();
        lines.sort_unstable();
        lines.dedup();
        lines.len()
    }
}

/// Smallest-last order: repeatedly remove a vertex of minimum remaining
/// degree, then reverse, so the densest core comes first.
pub fn degeneracy_order(adj: &[Vec<u32>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for (i, &d) in degree.iter().enumerate() {
        buckets[d].push(i);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut low = 0;
    while order.len() < n {
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("nonempty bucket");
            // Buckets keep stale entries; skip them.
            if !removed[v] && degree[v] == low {
                break v;
            }
        };
        removed[v] = true;
        order.push(v);
        for &u in &adj[v] {
            let u = u as usize;
            if !removed[u] {
                degree[u] -= 1;
                buckets[degree[u]].push(u);
                low = low.min(degree[u]);
            }
        }
    }
    order.reverse();
    order
}

/// `b0(F_k^(m))` for `m = 1..=m_max`.
pub fn b0_series(k: u64, m_max: u64) -> Result<Vec<usize>> {
    let mut sweep = LevelSweep::new(k)?;
    (1..=m_max).map(|_| sweep.advance()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::vertices_up_to_level;

    #[test]
    fn farey_graph_level_two() {
        let g = build(Mode::ExactK, 1, WindowSpec::level_cap(2)).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.component_count(), 1);
        // Brute-force adjacency on the same 8 vertices.
        let vs = vertices_up_to_level(2);
        let mut edges = 0;
        for i in 0..vs.len() {
            for j in (i + 1)..vs.len() {
                if det_pair(vs[i], vs[j]) == 1 {
                    edges += 1;
                }
            }
        }
        assert_eq!(g.edge_count(), edges);
    }

    #[test]
    fn at_most_two_contains_zero_half() {
        let g = build(Mode::AtMostK, 2, WindowSpec::denominator_cap(2)).unwrap();
        let a = g.index_of(FareyVertex::ZERO).unwrap();
        let b = g.index_of("1/2".parse().unwrap()).unwrap();
        assert!(g.has_edge(a, b));
    }

    #[test]
    fn strategies_agree_small() {
        for k in 1..=6 {
            for mode in [Mode::ExactK, Mode::AtMostK] {
                let w = WindowSpec::level_cap(9);
                let a = LevelGraph::build_with(mode, k, w, BuildOptions { strategy: AdjacencyStrategy::PairwiseScan, ..Default::default() }).unwrap();
                let b = LevelGraph::build_with(mode, k, w, BuildOptions::default()).unwrap();
                assert_eq!(a.adjacency(), b.adjacency(), "k={k} {mode}");
            }
        }
    }

    #[test]
    fn window_predicate_and_limit() {
        let w = WindowSpec { kind: WindowKind::DenominatorCap, bound: 3, include_infinity: false };
        let vs = w.vertices(1000).unwrap();
        assert!(vs.iter().all(|v| w.contains(*v)));
        assert!(!vs.contains(&FareyVertex::INFINITY));
        assert!(matches!(
            WindowSpec::level_cap(100).vertices(50),
            Err(Error::ResourceLimit { .. })
        ));
        assert!(WindowSpec::level_cap(0).validate().is_err());
    }

    #[test]
    fn levels_partition_window() {
        let mut all: Vec<_> = (1..=12).flat_map(vertices_at_level).collect();
        all.sort();
        assert_eq!(all, vertices_up_to_level(12));
    }

    #[test]
    fn sweep_matches_rebuild() {
        for k in [1, 2, 3, 4, 6] {
            let series = b0_series(k, 14).unwrap();
            for m in 1..=14u64 {
                let g = build(Mode::ExactK, k, WindowSpec::level_cap(m)).unwrap();
                assert_eq!(series[m as usize - 1], g.component_count(), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn report_for_f7() {
        let g = build(Mode::ExactK, 7, WindowSpec::level_cap(40)).unwrap();
        let r = count_components(&g);
        assert_eq!(r.b0, 8);
        assert!(r.monochromatic);
        let mut lines = r.lines.clone();
        lines.sort();
        lines.dedup();
        assert_eq!(lines.len(), 8);
        assert_eq!(r.sizes.iter().sum::<usize>(), g.len());
        let json = serde_json::to_value(&r).unwrap();
        for key in ["k", "mode", "window", "b0", "sizes", "lines", "isolated"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
