//! Farey vertices: reduced fractions `p/q` together with the point `1/0`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest absolute value accepted for a numerator or denominator.
///
/// Keeping both coordinates below 2^31 means every determinant pairing fits
/// in a `u64` and every Möbius image of a window vertex fits in an `i64`.
pub const MAX_COORD: i64 = (1 << 31) - 1;

/// A vertex of the Farey graph in canonical form.
///
/// Canonical means `gcd(|p|, |q|) = 1` and either `q > 0`, or `(p, q) = (1, 0)`.
/// Because every vertex is canonical, equality is plain field equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyVertex {
    p: i64,
    q: i64,
}

/// `max(|p|, |q|)` of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Level(pub u64);

impl FareyVertex {
    pub const INFINITY: FareyVertex = FareyVertex { p: 1, q: 0 };
    pub const ZERO: FareyVertex = FareyVertex { p: 0, q: 1 };

    /// Reduces `(p, q)` by its gcd and fixes the sign so that `q > 0` (or the
    /// vertex is `1/0`).
    pub fn new(p: i64, q: i64) -> Result<Self> {
        canonicalize(p, q)
    }

    /// An integer `n/1`.
    pub fn integer(n: i64) -> Result<Self> {
        canonicalize(n, 1)
    }

    /// Builds a vertex from parts that are already known to be canonical.
    pub(crate) fn from_canonical(p: i64, q: i64) -> Self {
        debug_assert!(q > 0 || (p, q) == (1, 0));
        debug_assert_eq!(p.unsigned_abs().gcd(&q.unsigned_abs()), 1);
        FareyVertex { p, q }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }

    pub fn level(&self) -> Level {
        level(*self)
    }

    /// Comparison in the cyclic order of `Q ∪ {∞}` cut open at infinity:
    /// rationals by value, `1/0` after every rational.
    pub fn cmp_circular(&self, other: &Self) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                // q > 0 on both sides, so cross-multiplication preserves order.
                let lhs = self.p as i128 * other.q as i128;
                let rhs = other.p as i128 * self.q as i128;
                lhs.cmp(&rhs)
            }
        }
    }

    /// Coordinatewise domination `|p| ≤ |p'|`, `|q| ≤ |q'|`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.p.unsigned_abs() <= other.p.unsigned_abs()
            && self.q.unsigned_abs() <= other.q.unsigned_abs()
    }

    /// The pair `(p, q)` as a primitive vector.
    pub fn as_pair(&self) -> (i64, i64) {
        (self.p, self.q)
    }
}

/// Canonical vertex for `p/q`.
///
/// Fails on the zero pair and on coordinates whose reduced form exceeds
/// [`MAX_COORD`].
pub fn canonicalize(p: i64, q: i64) -> Result<FareyVertex> {
    canonicalize_wide(p as i128, q as i128)
}

pub(crate) fn canonicalize_wide(p: i128, q: i128) -> Result<FareyVertex> {
    if p == 0 && q == 0 {
        return Err(Error::invalid("0/0 is not a Farey vertex"));
    }
    let g = p.unsigned_abs().gcd(&q.unsigned_abs()) as i128;
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 || (q == 0 && p < 0) {
        p = -p;
        q = -q;
    }
    let bound = MAX_COORD as i128;
    if p.abs() > bound || q > bound {
        return Err(Error::Overflow(format!(
            "{p}/{q} exceeds the coordinate bound {MAX_COORD}"
        )));
    }
    Ok(FareyVertex {
        p: p as i64,
        q: q as i64,
    })
}

/// The determinant pairing `|p·b − q·a|`.
pub fn det_pair(v: FareyVertex, w: FareyVertex) -> u64 {
    let d = v.p as i128 * w.q as i128 - v.q as i128 * w.p as i128;
    d.unsigned_abs() as u64
}

pub fn level(v: FareyVertex) -> Level {
    Level(v.p.unsigned_abs().max(v.q.unsigned_abs()))
}

impl Ord for FareyVertex {
    /// Lexicographic on `(q, p)`.
    fn cmp(&self, other: &Self) -> Ordering {
        (self.q, self.p).cmp(&(other.q, other.p))
    }
}

impl PartialOrd for FareyVertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FareyVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for FareyVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for FareyVertex {
    type Err = Error;

    /// Parses `p/q`; a bare integer `n` is read as `n/1`.
    ///
    /// Only the numerator may carry a sign, and the pair must already be
    /// reduced: `2/4` is rejected rather than silently reduced.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let p = parse_int(num, true)?;
        let q = match den {
            Some(d) => parse_int(d, false)?,
            None => 1,
        };
        if p == 0 && q == 0 {
            return Err(Error::Parse("0/0 is not a Farey vertex".into()));
        }
        if q == 0 && p != 1 {
            return Err(Error::Parse(format!("infinity must be written 1/0, got {s:?}")));
        }
        if p.unsigned_abs().gcd(&q.unsigned_abs()) != 1 {
            return Err(Error::Parse(format!("{s:?} is not in lowest terms")));
        }
        canonicalize(p, q).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn parse_int(s: &str, signed: bool) -> Result<i64> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if signed => rest,
        Some(_) => return Err(Error::Parse(format!("unexpected sign in {s:?}"))),
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    s.parse::<i64>()
        .map_err(|_| Error::Parse(format!("integer out of range: {s:?}")))
}

impl Serialize for FareyVertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FareyVertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Every canonical vertex with level at most `cap`, sorted by `(q, p)`.
pub fn vertices_up_to_level(cap: u64) -> Vec<FareyVertex> {
    let cap = cap.min(MAX_COORD as u64) as i64;
    let mut out = Vec::new();
    if cap >= 1 {
        out.push(FareyVertex::INFINITY);
    }
    for q in 1..=cap {
        for p in -cap..=cap {
            if p.unsigned_abs().gcd(&(q as u64)) == 1 {
                out.push(FareyVertex { p, q });
            }
        }
    }
    out
}
