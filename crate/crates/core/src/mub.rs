//! Clock and shift operators and the `d + 1` mutually unbiased bases.
//!
//! For `b ∈ [0, d)` the basis states are
//!
//! ```text
//! |m;b⟩ = d^{-1/2} Σₙ ω^{(b/2)n(n-1) - nm} |n⟩,   ω = e^{2πi/d}
//! ```
//!
//! and `b = -1` is the computational basis. The exponent is reduced in `Z_d`
//! before ω is raised to it, so every amplitude is one of the `d` exact
//! table values `ω^k / √d`. The `n = 0` amplitude is always real positive.
//!
//! Informally, computational-basis labels play the role of a discretized
//! position and the `b = 0` labels a discretized momentum.

use num_complex::Complex;

use crate::error::Result;
use crate::geometry::Point;
use crate::linalg::{Ket, Operator};
use crate::prime_field::PrimeDim;
use crate::scalar::Scalar;

/// `ω^k` for `k` reduced mod `d`.
pub fn omega_pow<T: Scalar>(k: usize, d: usize) -> Complex<T> {
    let k = k % d;
    if k == 0 {
        return Complex::new(T::one(), T::zero());
    }
    let angle = T::TAU() * T::of_usize(k) / T::of_usize(d);
    Complex::from_polar(T::one(), angle)
}

/// Primitive root of unity `e^{2πi/d}`.
pub fn omega<T: Scalar>(p: &PrimeDim) -> Complex<T> {
    omega_pow(1, p.d())
}

/// Clock operator, `Z|n⟩ = ωⁿ|n⟩`.
pub fn z_operator<T: Scalar>(p: &PrimeDim) -> Operator<T> {
    let d = p.d();
    let diag: Vec<_> = (0..d).map(|n| omega_pow(n, d)).collect();
    Operator::diagonal(&diag)
}

/// Cyclic shift, `X|n⟩ = |n+1 mod d⟩`.
pub fn x_operator<T: Scalar>(p: &PrimeDim) -> Operator<T> {
    let d = p.d();
    Operator::from_fn(d, |r, c| {
        if r == (c + 1) % d {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

/// `|m;b⟩`, with `b = -1` the computational basis.
pub fn mub_state<T: Scalar>(m: usize, b: i64, p: &PrimeDim) -> Result<Ket<T>> {
    let alpha = Point::checked(m as i64, b, p.d())?;
    Ok(mub_state_unchecked(alpha, p))
}

pub(crate) fn mub_state_unchecked<T: Scalar>(alpha: Point, p: &PrimeDim) -> Ket<T> {
    let d = p.d();
    if alpha.b == -1 {
        return Ket::basis(d, alpha.m);
    }
    let b_half = p.half(alpha.b);
    let norm = T::one() / T::of_usize(d).sqrt();
    let amps = (0..d)
        .map(|n| {
            let quad = p.mul(b_half, p.mul(n, p.reduce(n as i64 - 1)));
            let exponent = p.sub(quad, p.mul(n, alpha.m));
            omega_pow::<T>(exponent, d) * norm
        })
        .collect();
    Ket::new(amps)
}

/// Point operator `A_α = |m;b⟩⟨m;b|`.
pub fn point_operator<T: Scalar>(alpha: Point, p: &PrimeDim) -> Result<Operator<T>> {
    let alpha = Point::checked(alpha.m as i64, alpha.b, p.d())?;
    Ok(mub_state_unchecked::<T>(alpha, p).projector())
}
