//! Neighbors of a vertex at a fixed determinant.
//!
//! If `det(v, w0) = k` then every vertex at determinant `k` from `v = a/b` is
//! `(x0 + m·a)/(y0 + m·b)` for some integer `m`, where `w0 = x0/y0`. All the
//! enumeration here sweeps that one-parameter family.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::vertex::{canonicalize_wide, det_pair, FareyVertex, Level};

/// Some vertex `u` with `det_pair(v, u) = k`, chosen deterministically.
pub fn find_seed_neighbor(v: FareyVertex, k: u64) -> Result<FareyVertex> {
    if k == 0 {
        return Err(Error::invalid("determinant must be positive"));
    }
    let (a, b) = (v.p() as i128, v.q() as i128);
    let e = v.p().extended_gcd(&v.q());
    let (s, t, g) = (e.x as i128, e.y as i128, e.gcd as i128);
    let k = k as i128;
    // a·(k·s·g) − b·(−k·t·g) = k·g·(a·s + b·t) = k
    let mut x0 = -k * t * g;
    let mut y0 = k * s * g;
    // Shift along the family so the seed has a small denominator.
    if b != 0 {
        let m = -div_round(y0, b);
        x0 += m * a;
        y0 += m * b;
    } else {
        let m = -div_round(x0, a);
        x0 += m * a;
        y0 += m * b;
    }
    for i in 0..10_000i128 {
        // 0, 1, -1, 2, -2, ...
        let m = if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) };
        let (x, y) = (x0 + m * a, y0 + m * b);
        if x.unsigned_abs().gcd(&y.unsigned_abs()) == 1 {
            return canonicalize_wide(x, y);
        }
    }
    Err(Error::invalid(format!("no coprime neighbor of {v} at determinant {k} found")))
}

fn div_round(n: i128, d: i128) -> i128 {
    let (q, r) = n.div_mod_floor(&d);
    if 2 * r.abs() >= d.abs() {
        q + if (r > 0) == (d > 0) { 1 } else { 0 }
    } else {
        q
    }
}

/// Every `u` with `det_pair(v, u) = k` and `level(u) ≤ level_cap`, sorted
/// by `(q, p)`. `seed` must itself be at determinant `k` from `v`.
pub fn neighbors_exact(
    v: FareyVertex,
    seed: FareyVertex,
    k: u64,
    level_cap: Level,
) -> Result<Vec<FareyVertex>> {
    if det_pair(v, seed) != k {
        return Err(Error::invalid(format!(
            "seed {seed} is at determinant {} from {v}, not {k}",
            det_pair(v, seed)
        )));
    }
    let cap = level_cap.0 as i128;
    let (a, b) = (v.p() as i128, v.q() as i128);
    let (x0, y0) = (seed.p() as i128, seed.q() as i128);

    let mut range = (i128::MIN, i128::MAX);
    for (c0, step) in [(x0, a), (y0, b)] {
        if step == 0 {
            if c0.abs() > cap {
                return Ok(Vec::new());
            }
            continue;
        }
        let (lo, hi) = if step > 0 {
            (Integer::div_ceil(&(-cap - c0), &step), Integer::div_floor(&(cap - c0), &step))
        } else {
            (Integer::div_ceil(&(cap - c0), &step), Integer::div_floor(&(-cap - c0), &step))
        };
        range = (range.0.max(lo), range.1.min(hi));
    }

    let mut out = Vec::new();
    if range.0 <= range.1 {
        for m in range.0..=range.1 {
            let (x, y) = (x0 + m * a, y0 + m * b);
            if x.unsigned_abs().gcd(&y.unsigned_abs()) == 1 {
                out.push(canonicalize_wide(x, y)?);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Neighbors of `v` at determinant `k` with level at most `level_cap`,
/// seeding the family automatically.
pub fn neighbors_within(v: FareyVertex, k: u64, level_cap: Level) -> Result<Vec<FareyVertex>> {
    let seed = find_seed_neighbor(v, k)?;
    neighbors_exact(v, seed, k, level_cap)
}

/// Predecessors of `v` in `F_k`: neighbors `u ≠ v` with `|u.p| ≤ |v.p|` and
/// `|u.q| ≤ |v.q|`. There are at most two, and at most one for even `k`.
pub fn predecessors(v: FareyVertex, k: u64) -> Result<Vec<FareyVertex>> {
    if v.is_infinity() {
        return Ok(Vec::new());
    }
    let nbrs = neighbors_within(v, k, v.level())?;
    Ok(nbrs
        .into_iter()
        .filter(|u| *u != v && u.dominated_by(&v))
        .collect())
}
