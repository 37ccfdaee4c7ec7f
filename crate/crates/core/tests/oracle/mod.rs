//! Slow, obviously-correct reference computations shared by the test
//! targets. Nothing here calls into the library beyond reading vertex
//! coordinates.

#![allow(dead_code)]

use kfarey::FareyVertex;

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn det(a: FareyVertex, b: FareyVertex) -> u64 {
    let (p, q) = (a.p() as i128, a.q() as i128);
    let (r, s) = (b.p() as i128, b.q() as i128);
    (p * s - q * r).unsigned_abs() as u64
}

/// All reduced `(p, q)` with `max(|p|, |q|) ≤ m`, `q ≥ 0`, `1/0` for infinity.
pub fn pairs_up_to_level(m: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for q in 1..=m {
        for p in -m..=m {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn vertices_up_to_level(m: i64) -> Vec<FareyVertex> {
    pairs_up_to_level(m).into_iter().map(|(p, q)| FareyVertex::new(p, q).unwrap()).collect()
}

pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
        a != b
    }
}

/// Component label per vertex of `F_k` on `vs`, by scanning all pairs.
pub fn components_exact(vs: &[FareyVertex], k: u64) -> (usize, Vec<usize>) {
    let mut d = Dsu::new(vs.len());
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if det(vs[i], vs[j]) == k {
                d.union(i, j);
            }
        }
    }
    let roots: Vec<usize> = (0..vs.len()).map(|i| d.find(i)).collect();
    let mut distinct = roots.clone();
    distinct.sort_unstable();
    distinct.dedup();
    (distinct.len(), roots)
}

pub fn b0_naive(k: u64, level: i64) -> usize {
    components_exact(&vertices_up_to_level(level), k).0
}

/// `(p, ℓ)` if `n = p^ℓ` for a prime `p`, by trial division.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).unwrap();
    let mut m = n;
    let mut l = 0;
    while m.is_multiple_of(p) {
        m /= p;
        l += 1;
    }
    (m == 1).then_some((p, l))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn next_prime_naive(k: u64) -> u64 {
    (k + 1..).find(|&n| is_prime(n)).unwrap()
}

/// `|L_r|` by counting orbits of admissible pairs under the units.
pub fn line_count_by_orbits(r: u64) -> usize {
    let units: Vec<u64> = (1..r).filter(|&u| gcd(u as i64, r as i64) == 1).collect();
    let mut seen = vec![false; (r * r) as usize];
    let mut orbits = 0;
    for a in 0..r {
        for b in 0..r {
            let g = gcd(gcd(a as i64, b as i64), r as i64);
            if g != 1 || seen[(a * r + b) as usize] {
                continue;
            }
            orbits += 1;
            for &u in &units {
                seen[((u * a % r) * r + u * b % r) as usize] = true;
            }
        }
    }
    orbits
}

/// Largest clique by extending cliques in increasing index order, with no
/// pruning beyond "candidates left".
pub fn max_clique_naive(n: usize, adj: &dyn Fn(usize, usize) -> bool) -> usize {
    fn grow(
        cand: &[usize],
        size: usize,
        best: &mut usize,
        adj: &dyn Fn(usize, usize) -> bool,
    ) {
        *best = (*best).max(size);
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&u| adj(v, u)).collect();
            grow(&next, size + 1, best, adj);
        }
    }
    let all: Vec<usize> = (0..n).collect();
    let mut best = 0;
    grow(&all, 0, &mut best, adj);
    best
}

pub fn is_clique_le(k: u64, vs: &[FareyVertex]) -> bool {
    (0..vs.len()).all(|i| (i + 1..vs.len()).all(|j| (1..=k).contains(&det(vs[i], vs[j]))))
}

pub fn max_det(vs: &[FareyVertex]) -> u64 {
    let mut m = 0;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            m = m.max(det(vs[i], vs[j]));
        }
    }
    m
}
