//! The dual tree of the Farey tessellation.
//!
//! Nodes are Farey triangles (three vertices with pairwise determinant 1);
//! two nodes are adjacent when they share a Farey edge. The horoball of a
//! vertex `v` is the cycle of triangles containing `v`. Nothing global is
//! stored: triangles are produced on demand by reflecting across edges.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mobius::Mobius;
use crate::vertex::{canonicalize_wide, det_pair, FareyVertex};

/// A Farey triangle, vertices sorted by the vertex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[FareyVertex; 3]", into = "[FareyVertex; 3]")]
pub struct TriangleNode {
    verts: [FareyVertex; 3],
}

impl TriangleNode {
    pub fn new(a: FareyVertex, b: FareyVertex, c: FareyVertex) -> Result<Self> {
        for (x, y) in [(a, b), (b, c), (a, c)] {
            if det_pair(x, y) != 1 {
                return Err(Error::invalid(format!(
                    "{x} and {y} are not Farey neighbors, so {{{a}, {b}, {c}}} is not a triangle"
                )));
            }
        }
        let mut verts = [a, b, c];
        verts.sort();
        Ok(TriangleNode { verts })
    }

    pub fn verts(&self) -> [FareyVertex; 3] {
        self.verts
    }

    pub fn contains(&self, v: FareyVertex) -> bool {
        self.verts.contains(&v)
    }

    /// The vertex of `self` not on the edge `{u, w}`.
    fn opposite(&self, u: FareyVertex, w: FareyVertex) -> Option<FareyVertex> {
        if !self.contains(u) || !self.contains(w) || u == w {
            return None;
        }
        self.verts.iter().copied().find(|&x| x != u && x != w)
    }

    /// The triangle on the other side of the edge `{u, w}` of `self`.
    pub fn across(&self, u: FareyVertex, w: FareyVertex) -> Result<TriangleNode> {
        let o = self
            .opposite(u, w)
            .ok_or_else(|| Error::invalid(format!("{{{u}, {w}}} is not an edge of {self}")))?;
        let (a, b) = (u.p() as i128, u.q() as i128);
        let (c, d) = (w.p() as i128, w.q() as i128);
        let sum = canonicalize_wide(a + c, b + d)?;
        let far = if sum == o { canonicalize_wide(a - c, b - d)? } else { sum };
        TriangleNode::new(u, w, far)
    }

    /// The Farey edge shared with `other`, if the two are adjacent.
    pub fn shared_edge(&self, other: &TriangleNode) -> Option<(FareyVertex, FareyVertex)> {
        let common: Vec<FareyVertex> =
            self.verts.iter().copied().filter(|v| other.contains(*v)).collect();
        match common[..] {
            [u, w] => Some((u, w)),
            _ => None,
        }
    }

    pub fn apply(&self, m: &Mobius) -> Result<TriangleNode> {
        let [a, b, c] = self.verts;
        TriangleNode::new(m.apply(a)?, m.apply(b)?, m.apply(c)?)
    }
}

impl TryFrom<[FareyVertex; 3]> for TriangleNode {
    type Error = Error;

    fn try_from(v: [FareyVertex; 3]) -> Result<Self> {
        TriangleNode::new(v[0], v[1], v[2])
    }
}

impl From<TriangleNode> for [FareyVertex; 3] {
    fn from(t: TriangleNode) -> Self {
        t.verts
    }
}

impl fmt::Display for TriangleNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.verts;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

/// `{1/0, 0/1, 1/1}`
pub fn root_triangle() -> TriangleNode {
    TriangleNode::new(
        FareyVertex::INFINITY,
        FareyVertex::ZERO,
        FareyVertex::from_canonical(1, 1),
    )
    .expect("root is a triangle")
}

/// The three triangles sharing an edge with `t`, in the order of the edges
/// `{v0, v1}`, `{v1, v2}`, `{v0, v2}`.
pub fn triangle_neighbors(t: &TriangleNode) -> Result<[TriangleNode; 3]> {
    let [a, b, c] = t.verts;
    Ok([t.across(a, b)?, t.across(b, c)?, t.across(a, c)?])
}

/// Run lengths of a path along successive horoballs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct LRSequence {
    terms: Vec<u64>,
}

impl LRSequence {
    pub fn new(terms: Vec<u64>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a left-right sequence needs at least one term"));
        }
        if terms.contains(&0) {
            return Err(Error::invalid("left-right sequence terms must be positive"));
        }
        Ok(LRSequence { terms })
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<u64>> for LRSequence {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        LRSequence::new(v)
    }
}

impl From<LRSequence> for Vec<u64> {
    fn from(s: LRSequence) -> Self {
        s.terms
    }
}

impl fmt::Display for LRSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for LRSequence {
    type Err = Error;

    /// Accepts `{2,2}` or `2,2`, with optional spaces.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = match (s.strip_prefix('{'), s.ends_with('}')) {
            (Some(rest), true) => &rest[..rest.len() - 1],
            (None, false) => s,
            _ => return Err(Error::Parse(format!("unbalanced braces in {s:?}"))),
        };
        let terms = inner
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!("bad term {t:?} in {s:?}")));
                }
                t.parse::<u64>().map_err(|_| Error::Parse(format!("term {t:?} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        LRSequence::new(terms).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Which of the two readings of a geodesic to report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reading {
    /// The first run is as long as possible.
    #[default]
    Primary,
    /// The first turn is taken immediately.
    Co,
}

/// The geodesic between two horoballs, after normalizing `from` to `1/0`.
struct Normalized {
    /// Sends `from` to `1/0` and `to` into `(0, 1)`.
    map: Mobius,
    /// Triangles in normalized coordinates, the first containing `1/0` and
    /// the last containing the image of `to`.
    path: Vec<TriangleNode>,
    /// Horoball shared by the entering and leaving edge at each interior
    /// node of `path`.
    pivots: Vec<FareyVertex>,
}

fn normalize(from: FareyVertex, to: FareyVertex) -> Result<Normalized> {
    let d = det_pair(from, to);
    if d == 0 {
        return Err(Error::invalid(format!("{from} and {to} coincide")));
    }
    if d == 1 {
        return Err(Error::invalid(format!(
            "{from} and {to} are Farey neighbors; their horoballs touch"
        )));
    }
    let m = Mobius::sending_to_infinity(from);
    let img = m.apply(to)?;
    let (x, q) = img.as_pair();
    let shift = -x.div_euclid(q);
    let map = Mobius::translation(shift).compose(&m)?;
    let target = map.apply(to)?;
    debug_assert!(target.p() > 0 && target.p() < target.q());

    let inf = FareyVertex::INFINITY;
    let mut path = vec![root_triangle()];
    let mut pivots = Vec::new();
    // Stern–Brocot descent between left and right.
    let (mut l, mut r) = ((0i64, 1i64), (1i64, 1i64));
    let (tp, tq) = (target.p() as i128, target.q() as i128);
    loop {
        let mid = (l.0 + r.0, l.1 + r.1);
        let lv = FareyVertex::from_canonical(l.0, l.1);
        let rv = FareyVertex::from_canonical(r.0, r.1);
        let mv = FareyVertex::from_canonical(mid.0, mid.1);
        path.push(TriangleNode::new(lv, mv, rv)?);
        if mv == target {
            break;
        }
        if tp * (mid.1 as i128) < (mid.0 as i128) * tq {
            pivots.push(lv);
            r = mid;
        } else {
            pivots.push(rv);
            l = mid;
        }
    }
    debug_assert!(path[0].contains(inf));
    Ok(Normalized { map, path, pivots })
}

/// The left-right sequence of the geodesic from `H_from` to `H_to`.
pub fn lr_sequence(from: FareyVertex, to: FareyVertex) -> Result<LRSequence> {
    lr_sequence_with(from, to, Reading::Primary)
}

pub fn lr_sequence_with(from: FareyVertex, to: FareyVertex, reading: Reading) -> Result<LRSequence> {
    let n = normalize(from, to)?;
    // The first node only has a leaving edge, so its pivot may be read as
    // either end of that edge: 0/1 or 1/1 in normalized coordinates.
    let zero = FareyVertex::ZERO;
    let one = FareyVertex::from_canonical(1, 1);
    let first_interior = n.pivots.first().copied().unwrap_or(zero);
    let start = match reading {
        Reading::Primary => first_interior,
        Reading::Co => {
            if first_interior == zero {
                one
            } else {
                zero
            }
        }
    };
    let mut terms: Vec<u64> = Vec::new();
    let mut prev = None;
    for p in std::iter::once(start).chain(n.pivots) {
        if Some(p) == prev {
            *terms.last_mut().expect("run started") += 1;
        } else {
            terms.push(1);
            prev = Some(p);
        }
    }
    LRSequence::new(terms)
}

/// The triangles of the geodesic from `H_from` to `H_to`, first to last.
pub fn geodesic(from: FareyVertex, to: FareyVertex) -> Result<Vec<TriangleNode>> {
    let n = normalize(from, to)?;
    let back = n.map.inverse();
    n.path.iter().map(|t| t.apply(&back)).collect()
}

/// Numerator of `l_1 + 1/(l_2 + … + 1/(l_m + 1))`.
pub fn continuant_numerator(s: &LRSequence) -> BigUint {
    let t = s.terms();
    let last = t.len() - 1;
    // h_i = a_i·h_{i−1} + h_{i−2}, which is always coprime to the matching
    // denominator.
    let (mut h_prev, mut h) = (BigUint::from(0u32), BigUint::from(1u32));
    for (i, &a) in t.iter().enumerate() {
        let a = if i == last { BigUint::from(a) + 1u32 } else { BigUint::from(a) };
        let next = a * &h + &h_prev;
        h_prev = std::mem::replace(&mut h, next);
    }
    h
}

/// The determinant pairing computed through the dual tree.
pub fn det_via_lr(from: FareyVertex, to: FareyVertex) -> Result<BigUint> {
    Ok(continuant_numerator(&lr_sequence(from, to)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstructionTag {
    R(u64),
    S(u64),
    T(u64),
    Custom,
}

impl fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionTag::R(n) => write!(f, "R_{n}"),
            ConstructionTag::S(n) => write!(f, "S_{n}"),
            ConstructionTag::T(n) => write!(f, "T_{n}"),
            ConstructionTag::Custom => f.write_str("custom"),
        }
    }
}

impl FromStr for ConstructionTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "custom" {
            return Ok(ConstructionTag::Custom);
        }
        let bad = || Error::Parse(format!("unknown construction tag {s:?}"));
        let (family, n) = s.split_once('_').ok_or_else(bad)?;
        if n.is_empty() || !n.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: u64 = n.parse().map_err(|_| bad())?;
        match family {
            "R" => Ok(ConstructionTag::R(n)),
            "S" => Ok(ConstructionTag::S(n)),
            "T" => Ok(ConstructionTag::T(n)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for ConstructionTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConstructionTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite connected subgraph of the dual tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSubgraph")]
pub struct DualSubgraph {
    nodes: Vec<TriangleNode>,
    edges: Vec<(usize, usize)>,
    tag: Option<ConstructionTag>,
}

#[derive(Deserialize)]
struct RawSubgraph {
    nodes: Vec<TriangleNode>,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    tag: Option<ConstructionTag>,
}

impl TryFrom<RawSubgraph> for DualSubgraph {
    type Error = Error;

    fn try_from(raw: RawSubgraph) -> Result<Self> {
        DualSubgraph::new(raw.nodes, raw.edges, raw.tag)
    }
}

impl DualSubgraph {
    /// Checks that nodes are distinct, that every edge joins two triangles
    /// sharing a Farey edge, and that the result is connected.
    pub fn new(
        nodes: Vec<TriangleNode>,
        edges: Vec<(usize, usize)>,
        tag: Option<ConstructionTag>,
    ) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("a dual subgraph needs at least one node"));
        }
        if nodes.iter().collect::<BTreeSet<_>>().len() != nodes.len() {
            return Err(Error::invalid("repeated triangle in dual subgraph"));
        }
        let mut dsu = crate::dsu::DisjointSets::new(nodes.len());
        let mut seen = BTreeSet::new();
        for &(i, j) in &edges {
            let (Some(a), Some(b)) = (nodes.get(i), nodes.get(j)) else {
                return Err(Error::invalid(format!("edge ({i}, {j}) refers to a missing node")));
            };
            if a.shared_edge(b).is_none() {
                return Err(Error::invalid(format!("{a} and {b} are not adjacent")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::invalid(format!("edge ({i}, {j}) is repeated")));
            }
            dsu.union(i, j);
        }
        if dsu.count() != 1 {
            return Err(Error::invalid("dual subgraph is not connected"));
        }
        Ok(DualSubgraph { nodes, edges, tag })
    }

    pub fn nodes(&self) -> &[TriangleNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn tag(&self) -> Option<ConstructionTag> {
        self.tag
    }

    /// The Farey edge crossed by each dual edge.
    pub fn crossed_edges(&self) -> Vec<(FareyVertex, FareyVertex)> {
        self.edges
            .iter()
            .map(|&(i, j)| self.nodes[i].shared_edge(&self.nodes[j]).expect("validated"))
            .collect()
    }

    /// Image under a Möbius map.
    pub fn apply(&self, m: &Mobius) -> Result<DualSubgraph> {
        let nodes = self.nodes.iter().map(|t| t.apply(m)).collect::<Result<_>>()?;
        Ok(DualSubgraph { nodes, edges: self.edges.clone(), tag: self.tag })
    }
}

/// Grows a subgraph by reflecting across named edges.
struct Builder {
    nodes: Vec<TriangleNode>,
    index: HashMap<TriangleNode, usize>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new(start: TriangleNode) -> Self {
        Builder { nodes: vec![start], index: HashMap::from([(start, 0)]), edges: Vec::new() }
    }

    /// Adds the neighbor of node `i` across `{u, w}` and the edge to it.
    fn step(&mut self, i: usize, u: FareyVertex, w: FareyVertex) -> Result<usize> {
        let t = self.nodes[i].across(u, w)?;
        let j = match self.index.get(&t) {
            Some(&j) => j,
            None => {
                self.nodes.push(t);
                self.index.insert(t, self.nodes.len() - 1);
                self.nodes.len() - 1
            }
        };
        self.edges.push((i, j));
        Ok(j)
    }

    /// Attaches the full binary subtree of the given depth on the far side
    /// of the edge `{u, w}` of node `i`.
    fn hang(&mut self, i: usize, u: FareyVertex, w: FareyVertex, depth: u32) -> Result<()> {
        if depth == 0 {
            return Ok(());
        }
        let j = self.step(i, u, w)?;
        let far = self.nodes[j].opposite(u, w).expect("fresh triangle");
        self.hang(j, u, far, depth - 1)?;
        self.hang(j, far, w, depth - 1)
    }

    fn finish(self, tag: ConstructionTag) -> DualSubgraph {
        DualSubgraph::new(self.nodes, self.edges, Some(tag)).expect("constructions are valid")
    }
}

fn int(n: u64) -> FareyVertex {
    FareyVertex::from_canonical(n as i64, 1)
}

/// The path `{1/0, j, j+1}` for `j = 0..=len` along the horoball of `1/0`,
/// with a subtree of depth `depth(j)` hanging off each node below it.
fn horocycle_path(len: u64, depth: impl Fn(u64) -> u32) -> Result<Builder> {
    let inf = FareyVertex::INFINITY;
    let mut b = Builder::new(root_triangle());
    let mut cur = 0;
    for j in 0..=len {
        let d = depth(j);
        if d > 0 {
            b.hang(cur, int(j), int(j + 1), d)?;
        }
        if j < len {
            cur = b.step(cur, inf, int(j + 1))?;
        }
    }
    Ok(b)
}

fn check_size(name: &str, n: u64, min: u64) -> Result<()> {
    if n < min {
        return Err(Error::invalid(format!("{name} needs n ≥ {min}, got {n}")));
    }
    // Keeps every vertex far below the coordinate bound.
    if n > 1 << 24 {
        return Err(Error::invalid(format!("{name} with n = {n} is too large")));
    }
    Ok(())
}

/// A path of `n` edges along one horoball plus a pendant edge at every
/// interior node.
pub fn construct_r(n: u64) -> Result<DualSubgraph> {
    check_size("R_n", n, 2)?;
    let b = horocycle_path(n, |j| u32::from(j > 0 && j < n))?;
    Ok(b.finish(ConstructionTag::R(n)))
}

/// `R_{2n}` plus the two edges beyond the pendant at its middle node.
pub fn construct_s(n: u64) -> Result<DualSubgraph> {
    check_size("S_n", n, 2)?;
    let len = 2 * n;
    let b = horocycle_path(len, |j| match j {
        j if j == n => 2,
        j if j > 0 && j < len => 1,
        _ => 0,
    })?;
    Ok(b.finish(ConstructionTag::S(n)))
}

/// A path of `7n − 1` edges whose interior nodes carry subtrees of depth
/// 1, 2 or 3 according to their position.
pub fn construct_t(n: u64) -> Result<DualSubgraph> {
    check_size("T_n", n, 1)?;
    let len = 7 * n - 1;
    let b = horocycle_path(len, |j| {
        if j == 0 || j >= len {
            0
        } else if (3 * n..4 * n).contains(&j) {
            3
        } else if (2 * n..3 * n).contains(&j) || (4 * n..5 * n).contains(&j) {
            2
        } else {
            1
        }
    })?;
    Ok(b.finish(ConstructionTag::T(n)))
}

/// Vertices whose horoball meets `K` in more than a point, and the largest
/// determinant among them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceResult {
    pub v_k: Vec<FareyVertex>,
    pub i_k: u64,
}

impl IncidenceResult {
    /// The same vertex set moved by an integer translation so that its
    /// finite part straddles 0. Determinants are unchanged.
    pub fn centered(&self) -> Result<IncidenceResult> {
        let floors: Vec<i64> = self
            .v_k
            .iter()
            .filter(|v| !v.is_infinity())
            .map(|v| v.p().div_euclid(v.q()))
            .collect();
        let (Some(lo), Some(hi)) = (floors.iter().min(), floors.iter().max()) else {
            return Ok(self.clone());
        };
        let t = Mobius::translation(-(lo + hi).div_euclid(2));
        let mut v_k = self.v_k.iter().map(|&v| t.apply(v)).collect::<Result<Vec<_>>>()?;
        v_k.sort();
        Ok(IncidenceResult { v_k, i_k: self.i_k })
    }
}

/// A horoball meets `K` in more than a point exactly when some dual edge of
/// `K` runs along it, that is, crosses a Farey edge at that vertex. Two
/// `K`-edges meeting at a node always share the horoball of the vertex common
/// to both crossed edges, so that case adds nothing further.
pub fn incident_vertices(k: &DualSubgraph) -> IncidenceResult {
    let v: BTreeSet<FareyVertex> =
        k.crossed_edges().into_iter().flat_map(|(u, w)| [u, w]).collect();
    let v_k: Vec<FareyVertex> = v.into_iter().collect();
    let i_k = max_pairwise_det(&v_k);
    IncidenceResult { v_k, i_k }
}

pub fn max_pairwise_det(vs: &[FareyVertex]) -> u64 {
    let mut best = 0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            best = best.max(det_pair(a, b));
        }
    }
    best
}
