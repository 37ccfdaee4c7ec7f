//! The projective line over `Z/rZ` and the reduction map from Farey vertices.
//!
//! A pair `(a, b)` of residues is admissible when `gcd(a, b, r) = 1`. Lines
//! are admissible pairs up to scaling by units; each line is stored as the
//! lexicographically smallest pair of its orbit.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mobius::Mobius;
use crate::vertex::FareyVertex;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    r: u64,
    a: u64,
    b: u64,
}

impl ProjLine {
    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn rep(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    /// Image of this line under a Möbius transformation.
    pub fn act(&self, m: &Mobius) -> ProjLine {
        let space = LineSpace { r: self.r, units: units(self.r) };
        space.line_of(m.apply_mod((self.a, self.b), self.r))
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}] mod {}", self.a, self.b, self.r)
    }
}

impl fmt::Debug for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ProjLine {
    type Err = Error;

    /// Parses `[a:b] mod r`. The pair must be admissible and already be the
    /// canonical representative of its line.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected \"[a:b] mod r\", got {s:?}"));
        let s = s.trim();
        let rest = s.strip_prefix('[').ok_or_else(bad)?;
        let (pair, rest) = rest.split_once(']').ok_or_else(bad)?;
        let (a, b) = pair.split_once(':').ok_or_else(bad)?;
        let r = rest.trim_start().strip_prefix("mod").ok_or_else(bad)?;
        let num = |t: &str| -> Result<u64> {
            let t = t.trim();
            if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse().map_err(|_| bad())
        };
        let (a, b, r) = (num(a)?, num(b)?, num(r)?);
        if !(2..=MAX_MODULUS).contains(&r) {
            return Err(Error::Parse(format!("modulus {r} out of range 2..={MAX_MODULUS}")));
        }
        if a >= r || b >= r {
            return Err(Error::Parse(format!("residues must be below {r}")));
        }
        let space = LineSpace::new(r).map_err(|e| Error::Parse(e.to_string()))?;
        let line = space
            .line(a, b)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if line.rep() != (a, b) {
            return Err(Error::Parse(format!(
                "[{a}:{b}] is not canonical; the line is written {line}"
            )));
        }
        Ok(line)
    }
}

impl Serialize for ProjLine {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProjLine {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Moduli above this are refused; line canonicalization scans all units.
pub const MAX_MODULUS: u64 = 1 << 20;

/// `L_r` with its unit group cached, for repeated reductions at one modulus.
#[derive(Clone, Debug)]
pub struct LineSpace {
    r: u64,
    units: Vec<u64>,
}

fn units(r: u64) -> Vec<u64> {
    (1..r).filter(|l| l.gcd(&r) == 1).collect()
}

impl LineSpace {
    pub fn new(r: u64) -> Result<Self> {
        if r < 2 {
            return Err(Error::invalid(format!("modulus must be at least 2, got {r}")));
        }
        if r > MAX_MODULUS {
            return Err(Error::invalid(format!("modulus {r} exceeds {MAX_MODULUS}")));
        }
        Ok(LineSpace { r, units: units(r) })
    }

    pub fn modulus(&self) -> u64 {
        self.r
    }

    pub fn is_admissible(&self, a: u64, b: u64) -> bool {
        a.gcd(&b).gcd(&self.r) == 1
    }

    /// The line through an admissible pair.
    pub fn line(&self, a: u64, b: u64) -> Result<ProjLine> {
        let (a, b) = (a % self.r, b % self.r);
        if !self.is_admissible(a, b) {
            return Err(Error::invalid(format!("({a}, {b}) is not admissible mod {}", self.r)));
        }
        Ok(self.line_of((a, b)))
    }

    fn line_of(&self, (a, b): (u64, u64)) -> ProjLine {
        let r = self.r as u128;
        let best = self
            .units
            .iter()
            .map(|&l| {
                let l = l as u128;
                ((l * a as u128 % r) as u64, (l * b as u128 % r) as u64)
            })
            .min()
            .expect("the unit group is nonempty");
        ProjLine { r: self.r, a: best.0, b: best.1 }
    }

    /// The reduction map `φ_r`.
    pub fn phi(&self, v: FareyVertex) -> ProjLine {
        let r = self.r as i64;
        let a = v.p().rem_euclid(r) as u64;
        let b = v.q().rem_euclid(r) as u64;
        // Coprime integers stay admissible mod r.
        self.line_of((a, b))
    }

    /// All lines, sorted by their representatives.
    pub fn lines(&self) -> Vec<ProjLine> {
        let mut out = Vec::new();
        for a in 0..self.r {
            for b in 0..self.r {
                if self.is_admissible(a, b) {
                    let line = self.line_of((a, b));
                    if line.rep() == (a, b) {
                        out.push(line);
                    }
                }
            }
        }
        out
    }
}

/// `φ_r(v)`.
pub fn phi(r: u64, v: FareyVertex) -> Result<ProjLine> {
    Ok(LineSpace::new(r)?.phi(v))
}

/// Every line of `L_r` in a deterministic order.
pub fn enumerate_lines(r: u64) -> Result<Vec<ProjLine>> {
    Ok(LineSpace::new(r)?.lines())
}

/// `|L_r| = r · Π_{p | r} (1 + 1/p)`.
pub fn line_count(r: u64) -> u64 {
    let mut n = r;
    let mut count = r;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            count = count / p * (p + 1);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        count = count / n * (n + 1);
    }
    count
}

/// The `r` in `(k, r_max]` with the fewest lines. Among moduli with equally
/// few lines a prime is preferred, then the smaller `r`.
pub fn min_line_count_above(k: u64, r_max: u64) -> Result<(u64, u64)> {
    if r_max <= k || r_max < 2 {
        return Err(Error::invalid(format!("empty range ({k}, {r_max}]")));
    }
    Ok(((k + 1).max(2)..=r_max)
        .map(|r| (r, line_count(r)))
        .min_by_key(|&(r, c)| (c, !is_prime(r), r))
        .expect("range is nonempty"))
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `k`. Panics past the largest `u64`
/// prime.
pub fn next_prime(k: u64) -> u64 {
    let mut n = k.checked_add(1).expect("no u64 prime above u64::MAX");
    while !is_prime(n) {
        n = n.checked_add(1).expect("no u64 prime above 18446744073709551557");
    }
    n
}

/// `Some((p, ℓ))` when `k = p^ℓ` with `p` prime and `ℓ ≥ 1`.
pub fn prime_power(k: u64) -> Option<(u64, u32)> {
    if k < 2 {
        return None;
    }
    let p = smallest_prime_factor(k);
    let mut n = k;
    let mut l = 0;
    while n.is_multiple_of(p) {
        n /= p;
        l += 1;
    }
    (n == 1).then_some((p, l))
}

pub fn smallest_prime_factor(k: u64) -> u64 {
    assert!(k >= 2);
    let mut p = 2;
    while p * p <= k {
        if k.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    k
}
