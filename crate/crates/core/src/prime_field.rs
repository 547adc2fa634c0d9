//! Exact arithmetic modulo an odd prime dimension.
//!
//! Every label in the geometry (rows `m`, columns `b`, line parameters) is an
//! element of `Z_d`. All values handed out by [`PrimeDim`] are canonical
//! representatives in `[0, d)`.

use crate::error::{Error, Result};

/// A validated odd prime `d` with its table of multiplicative inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDim {
    d: usize,
    inv2: usize,
    inverses: Vec<usize>,
}

/// Smallest nontrivial divisor of `n`, found by trial division.
pub fn smallest_factor(n: u64) -> Option<u64> {
    if n < 4 {
        return None;
    }
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut k = 3u64;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k) {
            return Some(k);
        }
        k += 2;
    }
    None
}

impl PrimeDim {
    pub fn new(d: u64) -> Result<Self> {
        if d == 2 {
            return Err(Error::EvenPrime);
        }
        if d < 3 {
            return Err(Error::DimensionTooSmall { d });
        }
        if let Some(factor) = smallest_factor(d) {
            return Err(Error::Composite { d, factor });
        }
        let d =
            usize::try_from(d).map_err(|_| Error::Schema(format!("dimension {d} too large")))?;
        // k^(d-2) by Fermat; d is tiny so the table is built once.
        let inverses: Vec<usize> = (0..d)
            .map(|k| if k == 0 { 0 } else { pow_mod(k, d - 2, d) })
            .collect();
        let inv2 = inverses[2];
        Ok(Self { d, inv2, inverses })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Multiplicative inverse of 2.
    #[inline]
    pub fn inv2(&self) -> usize {
        self.inv2
    }

    /// Inverse of `k`, or `None` for `k ≡ 0`.
    pub fn inverse(&self, k: i64) -> Option<usize> {
        match self.reduce(k) {
            0 => None,
            r => Some(self.inverses[r]),
        }
    }

    /// Canonical representative of `x` in `[0, d)`.
    #[inline]
    pub fn reduce(&self, x: i64) -> usize {
        x.rem_euclid(self.d as i64) as usize
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        (a % self.d + b % self.d) % self.d
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        (a % self.d + self.d - b % self.d) % self.d
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        ((a % self.d) * (b % self.d)) % self.d
    }

    /// `x / 2 mod d`.
    #[inline]
    pub fn half(&self, x: i64) -> usize {
        self.mul(self.reduce(x), self.inv2)
    }
}

/// Free-function form of [`PrimeDim::half`].
pub fn half(x: i64, p: &PrimeDim) -> usize {
    p.half(x)
}

fn pow_mod(base: usize, mut exp: usize, modulus: usize) -> usize {
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_oracle(n: u64) -> bool {
        n >= 2 && (2..n).all(|k| !n.is_multiple_of(k))
    }

    #[test]
    fn small_dimensions() {
        let p3 = PrimeDim::new(3).unwrap();
        assert_eq!((p3.d(), p3.inv2()), (3, 2));
        let p7 = PrimeDim::new(7).unwrap();
        assert_eq!((p7.d(), p7.inv2()), (7, 4));
        assert!(matches!(
            PrimeDim::new(4),
            Err(Error::Composite { d: 4, factor: 2 })
        ));
        assert!(matches!(PrimeDim::new(2), Err(Error::EvenPrime)));
        assert!(matches!(
            PrimeDim::new(1),
            Err(Error::DimensionTooSmall { d: 1 })
        ));
        assert!(matches!(
            PrimeDim::new(0),
            Err(Error::DimensionTooSmall { d: 0 })
        ));
    }

    #[test]
    fn half_examples() {
        let p3 = PrimeDim::new(3).unwrap();
        let p7 = PrimeDim::new(7).unwrap();
        assert_eq!(p3.half(2), 1);
        assert_eq!(p3.half(1), 2);
        assert_eq!(half(0, &p7), 0);
        assert_eq!(p3.half(-1), 1);
    }

    #[test]
    fn half_is_exact_for_small_primes() {
        for d in [3u64, 5, 7, 11, 13] {
            let p = PrimeDim::new(d).unwrap();
            for x in 0..p.d() {
                assert_eq!(p.mul(2, p.half(x as i64)), x, "d={d} x={x}");
            }
        }
    }

    #[test]
    fn accepts_exactly_the_odd_primes_up_to_100() {
        for n in 0..=100u64 {
            let expected = n >= 3 && is_prime_oracle(n);
            assert_eq!(PrimeDim::new(n).is_ok(), expected, "n={n}");
        }
    }

    #[test]
    fn inverse_table() {
        for d in [3u64, 5, 7, 11, 13, 97] {
            let p = PrimeDim::new(d).unwrap();
            assert_eq!(p.mul(2, p.inv2()), 1);
            for k in 1..p.d() {
                assert_eq!(p.mul(k, p.inverse(k as i64).unwrap()), 1);
            }
            assert_eq!(p.inverse(0), None);
        }
    }
}
