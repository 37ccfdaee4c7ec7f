use std::fmt;

use num_integer::Integer;
use rand::Rng;

use crate::error::{Error, Result};
use crate::vertex::{canonicalize_wide, FareyVertex};

/// A 2×2 integer matrix of determinant ±1, acting on vertices by linear
/// fractional transformations. `M` and `-M` act identically.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mobius {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius { a: 1, b: 0, c: 0, d: 1 };
    /// `x ↦ -1/x`
    pub const S: Mobius = Mobius { a: 0, b: -1, c: 1, d: 0 };
    /// `x ↦ x + 1`
    pub const T: Mobius = Mobius { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det.abs() != 1 {
            return Err(Error::invalid(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected ±1"
            )));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn translation(n: i64) -> Self {
        Mobius { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, v: FareyVertex) -> Result<FareyVertex> {
        let (x, y) = (v.p() as i128, v.q() as i128);
        let p = self.a as i128 * x + self.b as i128 * y;
        let q = self.c as i128 * x + self.d as i128 * y;
        canonicalize_wide(p, q)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Result<Mobius> {
        let mul = |x: i64, y: i64, z: i64, w: i64| -> Result<i64> {
            let r = x as i128 * y as i128 + z as i128 * w as i128;
            i64::try_from(r).map_err(|_| Error::Overflow("Möbius product".into()))
        };
        Ok(Mobius {
            a: mul(self.a, other.a, self.b, other.c)?,
            b: mul(self.a, other.b, self.b, other.d)?,
            c: mul(self.c, other.a, self.d, other.c)?,
            d: mul(self.c, other.b, self.d, other.d)?,
        })
    }

    pub fn inverse(&self) -> Mobius {
        // The adjugate divided by det, and det = ±1.
        let s = self.det();
        Mobius {
            a: s * self.d,
            b: -s * self.b,
            c: -s * self.c,
            d: s * self.a,
        }
    }

    /// An orientation-preserving matrix sending `v` to `1/0`.
    pub fn sending_to_infinity(v: FareyVertex) -> Mobius {
        let (p, q) = v.as_pair();
        // p·s − q·r = 1, so [[p, r], [q, s]] sends 1/0 to p/q.
        let e = p.extended_gcd(&q);
        let (s, r) = (e.x * e.gcd, -e.y * e.gcd);
        let to_v = Mobius { a: p, b: r, c: q, d: s };
        debug_assert_eq!(to_v.det(), 1);
        to_v.inverse()
    }

    /// A random word of length `len` in `S`, `T` and `T⁻¹`.
    pub fn random_word<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Mobius {
        let gens = [Mobius::S, Mobius::T, Mobius::T.inverse()];
        let mut m = Mobius::IDENTITY;
        for _ in 0..len {
            let g = gens[rng.gen_range(0..gens.len())];
            m = m.compose(&g).expect("short words stay small");
        }
        m
    }

    /// Action on a pair of residues mod `r`.
    pub fn apply_mod(&self, (x, y): (u64, u64), r: u64) -> (u64, u64) {
        let r = r as i128;
        let f = |m: i64, n: i64| -> u64 {
            ((m as i128 * x as i128 + n as i128 * y as i128).rem_euclid(r)) as u64
        };
        (f(self.a, self.b), f(self.c, self.d))
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vertex::det_pair;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(s: &str) -> FareyVertex {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(Mobius::new(2, 0, 0, 1).is_err());
        assert!(Mobius::new(0, 1, 1, 0).is_ok());
    }

    #[test]
    fn generators_act_as_expected() {
        assert_eq!(Mobius::S.apply(v("2/3")).unwrap(), v("-3/2"));
        assert_eq!(Mobius::T.apply(v("2/3")).unwrap(), v("5/3"));
        assert_eq!(Mobius::T.apply(FareyVertex::INFINITY).unwrap(), FareyVertex::INFINITY);
        assert_eq!(Mobius::S.apply(FareyVertex::ZERO).unwrap(), FareyVertex::INFINITY);
    }

    #[test]
    fn sending_to_infinity_works() {
        for s in ["1/0", "0/1", "-2/1", "1/3", "-17/12", "355/113"] {
            let m = Mobius::sending_to_infinity(v(s));
            assert_eq!(m.apply(v(s)).unwrap(), FareyVertex::INFINITY, "{s}");
            assert_eq!(m.det(), 1);
        }
    }

    #[test]
    fn inverse_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = Mobius::random_word(&mut rng, 12);
            let id = m.compose(&m.inverse()).unwrap();
            let x = v("7/5");
            assert_eq!(id.apply(x).unwrap(), x);
        }
    }

    #[test]
    fn det_pair_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pool = crate::vertex::vertices_up_to_level(9);
        for _ in 0..100 {
            let m = Mobius::random_word(&mut rng, 10);
            let a = pool[rng.gen_range(0..pool.len())];
            let b = pool[rng.gen_range(0..pool.len())];
            let (ma, mb) = (m.apply(a).unwrap(), m.apply(b).unwrap());
            assert_eq!(det_pair(ma, mb), det_pair(a, b), "{m:?} {a} {b}");
        }
    }
}
