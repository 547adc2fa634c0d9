//! Random states and operators for testing and simulation.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Ket, Operator};
use crate::scalar::Scalar;

fn gaussian<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::of(re), T::of(im))
}

/// Haar-random pure state.
pub fn random_pure_state<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Ket<T> {
    Ket::new((0..d).map(|_| gaussian(rng)).collect()).normalized()
}

/// Full-rank density matrix `G G† / tr(G G†)` with Ginibre `G`.
pub fn random_density_matrix<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator<T> {
    let g = random_operator::<T, R>(d, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    w.scale_real(T::one() / tr)
}

/// Operator with independent complex Gaussian entries.
pub fn random_operator<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator<T> {
    Operator::from_fn(d, |_, _| gaussian(rng))
}

pub fn random_hermitian<T: Scalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Operator<T> {
    random_operator::<T, R>(d, rng).hermitian_part()
}
