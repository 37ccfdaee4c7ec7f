//! Proper colorings of windowed `F_≤k`: by projective lines, and greedily.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build, degeneracy_order, LevelGraph, Mode, WindowSpec};
use crate::projline::{LineSpace, ProjLine};
use crate::vertex::FareyVertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyOrder {
    /// Smallest-last order, densest core colored first.
    Degeneracy,
    /// Most distinct neighbor colors first, ties by degree.
    Dsatur,
    /// Window order.
    Lex,
}

impl fmt::Display for GreedyOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GreedyOrder::Degeneracy => "degeneracy",
            GreedyOrder::Dsatur => "dsatur",
            GreedyOrder::Lex => "lex",
        })
    }
}

impl FromStr for GreedyOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degeneracy" => Ok(GreedyOrder::Degeneracy),
            "dsatur" => Ok(GreedyOrder::Dsatur),
            "lex" => Ok(GreedyOrder::Lex),
            _ => Err(Error::Parse(format!("unknown order {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum ColoringMethod {
    PhiLine { r: u64 },
    Greedy { order: GreedyOrder },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringResult {
    pub k: u64,
    pub window: WindowSpec,
    pub colors_used: usize,
    pub assignment: BTreeMap<FareyVertex, u32>,
    pub method: ColoringMethod,
}

/// An edge of `g` whose ends share a color, if any.
pub fn find_conflict(g: &LevelGraph, colors: &[u32]) -> Option<(FareyVertex, FareyVertex)> {
    g.edges()
        .find(|&(i, j)| colors[i] == colors[j])
        .map(|(i, j)| (g.vertices()[i], g.vertices()[j]))
}

fn finish(g: &LevelGraph, colors: Vec<u32>, method: ColoringMethod) -> Result<ColoringResult> {
    if let Some((a, b)) = find_conflict(g, &colors) {
        return Err(Error::invalid(format!("coloring is not proper: {a} and {b} share a color")));
    }
    let mut used = colors.clone();
    used.sort_unstable();
    used.dedup();
    Ok(ColoringResult {
        k: g.k(),
        window: g.window(),
        colors_used: used.len(),
        assignment: g.vertices().iter().copied().zip(colors).collect(),
        method,
    })
}

/// Colors each vertex by its line `φ_r(v)`. Proper on `F_≤k` for `r > k`.
pub fn color_by_lines(k: u64, r: u64, window: WindowSpec) -> Result<ColoringResult> {
    if r <= k {
        return Err(Error::invalid(format!("need r > k for a proper coloring, got r={r}, k={k}")));
    }
    color_graph_by_lines(&build(Mode::AtMostK, k, window)?, r)
}

pub fn color_graph_by_lines(g: &LevelGraph, r: u64) -> Result<ColoringResult> {
    if g.mode() != Mode::AtMostK {
        return Err(Error::invalid("colorings are computed on at-most-k graphs"));
    }
    if r <= g.k() {
        return Err(Error::invalid(format!("need r > k, got r={r}, k={}", g.k())));
    }
    let space = LineSpace::new(r)?;
    let mut ids: HashMap<ProjLine, u32> = HashMap::new();
    let colors = g
        .vertices()
        .iter()
        .map(|&v| {
            let next = ids.len() as u32;
            *ids.entry(space.phi(v)).or_insert(next)
        })
        .collect();
    finish(g, colors, ColoringMethod::PhiLine { r })
}

pub fn greedy_color(k: u64, window: WindowSpec, order: GreedyOrder) -> Result<ColoringResult> {
    greedy_color_graph(&build(Mode::AtMostK, k, window)?, order)
}

pub fn greedy_color_graph(g: &LevelGraph, order: GreedyOrder) -> Result<ColoringResult> {
    if g.is_empty() {
        return Err(Error::invalid("the window contains no vertices"));
    }
    let adj = g.adjacency();
    let colors = match order {
        GreedyOrder::Lex => first_fit(adj, 0..g.len()),
        GreedyOrder::Degeneracy => first_fit(adj, degeneracy_order(adj)),
        GreedyOrder::Dsatur => dsatur(adj),
    };
    finish(g, colors, ColoringMethod::Greedy { order })
}

fn smallest_free(adj: &[u32], colors: &[u32]) -> u32 {
    let mut taken: Vec<u32> = adj.iter().map(|&j| colors[j as usize]).filter(|&c| c != u32::MAX).collect();
    taken.sort_unstable();
    taken.dedup();
    taken.iter().enumerate().find(|&(i, &c)| c != i as u32).map_or(taken.len() as u32, |(i, _)| i as u32)
}

fn first_fit(adj: &[Vec<u32>], order: impl IntoIterator<Item = usize>) -> Vec<u32> {
    let mut colors = vec![u32::MAX; adj.len()];
    for v in order {
        colors[v] = smallest_free(&adj[v], &colors);
    }
    colors
}

fn dsatur(adj: &[Vec<u32>]) -> Vec<u32> {
    let n = adj.len();
    let mut colors = vec![u32::MAX; n];
    let mut seen: Vec<Vec<u32>> = vec![Vec::new(); n];
    // (saturation, degree, lowest index first)
    let mut heap: BinaryHeap<(usize, usize, Reverse<usize>)> =
        (0..n).map(|i| (0, adj[i].len(), Reverse(i))).collect();
    while let Some((sat, _, Reverse(v))) = heap.pop() {
        if colors[v] != u32::MAX || sat != seen[v].len() {
            continue;
        }
        let c = smallest_free(&adj[v], &colors);
        colors[v] = c;
        for &u in &adj[v] {
            let u = u as usize;
            if colors[u] == u32::MAX {
                if let Err(pos) = seen[u].binary_search(&c) {
                    seen[u].insert(pos, c);
                    heap.push((seen[u].len(), adj[u].len(), Reverse(u)));
                }
            }
        }
    }
    colors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projline::line_count;

    #[test]
    fn lines_color_k7() {
        let c = color_by_lines(7, 11, WindowSpec::level_cap(20)).unwrap();
        assert!(c.colors_used <= 12);
        assert_eq!(c.method, ColoringMethod::PhiLine { r: 11 });
    }

    #[test]
    fn lines_need_r_above_k() {
        assert!(color_by_lines(4, 4, WindowSpec::level_cap(5)).is_err());
    }

    #[test]
    fn composite_modulus_colors_too() {
        let c = color_by_lines(5, 6, WindowSpec::level_cap(15)).unwrap();
        assert!(c.colors_used as u64 <= line_count(6));
    }

    #[test]
    fn greedy_orders_are_proper() {
        for order in [GreedyOrder::Degeneracy, GreedyOrder::Dsatur, GreedyOrder::Lex] {
            let c = greedy_color(1, WindowSpec::level_cap(5), order).unwrap();
            assert!(c.colors_used >= 3);
            let c = greedy_color(7, WindowSpec::denominator_cap(10), order).unwrap();
            assert!(c.colors_used >= 10, "{order}: {}", c.colors_used);
        }
    }

    #[test]
    fn detects_conflicts() {
        let g = build(Mode::AtMostK, 1, WindowSpec::level_cap(2)).unwrap();
        assert!(find_conflict(&g, &vec![0; g.len()]).is_some());
    }

    #[test]
    fn json_shape() {
        let c = color_by_lines(2, 3, WindowSpec::level_cap(2)).unwrap();
        let j = serde_json::to_value(&c).unwrap();
        assert_eq!(j["method"]["method"], "phi-line");
        assert!(j["assignment"]["1/0"].is_u64());
    }
}
