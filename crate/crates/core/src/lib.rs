//! Discrete phase space for prime-dimensional qudits.
//!
//! A qudit of odd prime dimension `d` has `d + 1` mutually unbiased bases.
//! Their `d(d+1)` basis projectors are the points of a dual affine plane
//! over `Z_d`, and the `d²` lines of that plane carry Hermitian, unitary,
//! trace-orthogonal line operators `P_j`. Writing an operator as its line
//! values `V(j) = tr(B P_j)` gives a Wigner-like quasi-distribution, and the
//! map from `V` to measured basis probabilities is a finite Radon transform
//! that can be inverted exactly. That inversion is linear-inversion state
//! tomography.
//!
//! Modules, bottom up:
//!
//! * [`prime_field`]: exact arithmetic mod `d`.
//! * [`geometry`]: points, lines, incidence, axiom checks.
//! * [`mub`]: clock/shift operators, basis states, point projectors.
//! * [`line_operators`]: `P_j` and the identities relating `P_j` and `A_α`.
//! * [`phase_space`]: quasi-distributions and the Radon transform pair.
//! * [`tomography`]: sampling, estimation and reconstruction.
//! * [`io`]: JSON and CSV formats.
//!
//! Hilbert-space types are generic over [`Scalar`] (`f64` or `f32`); the
//! aliases below fix the common `f64` case.
//!
//! ```
//! use finite_radon::{Basis, Line, OperatorF64};
//! use finite_radon::phase_space::{quasi_distribution, reconstruct_operator};
//!
//! let basis = Basis::with_dimension(3).unwrap();
//! let p = basis.line(Line::new(1, 2));
//! assert!(p.matmul(p).max_abs_diff(&OperatorF64::identity(3)) < 1e-12);
//!
//! let rho = OperatorF64::identity(3).scale_real(1.0 / 3.0);
//! let v = quasi_distribution(&rho, &basis).unwrap();
//! assert!(reconstruct_operator(&v, &basis).unwrap().max_abs_diff(&rho) < 1e-12);
//! ```

pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod line_operators;
pub mod mub;
pub mod phase_space;
pub mod prime_field;
pub mod random;
pub mod scalar;
pub mod tomography;

pub use error::{DensityDefect, Error, Result};
pub use geometry::{Geometry, LambdaMatrix, Line, Point};
pub use linalg::{Ket, Operator};
pub use line_operators::OperatorBasis;
pub use phase_space::{PointMarginals, QuasiDistribution};
pub use prime_field::PrimeDim;
pub use scalar::Scalar;
pub use tomography::{MeasurementRecord, ReconstructionReport};

pub use num_complex::Complex;

pub type OperatorF64 = Operator<f64>;
pub type OperatorF32 = Operator<f32>;
pub type KetF64 = Ket<f64>;
pub type KetF32 = Ket<f32>;
pub type Basis = OperatorBasis<f64>;
pub type BasisF32 = OperatorBasis<f32>;
pub type QuasiDistributionF64 = QuasiDistribution<f64>;
pub type PointMarginalsF64 = PointMarginals<f64>;
pub type ReconstructionReportF64 = ReconstructionReport<f64>;
