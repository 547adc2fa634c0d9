//! Operators as functions on lines, and the finite Radon transform.
//!
//! `V(j; B) = tr(B P_j)` maps an operator onto the `d²` lines. Because the
//! line operators are trace-orthogonal with `tr P_j P_k = d δ_jk`, the map
//! is inverted by `B = (1/d) Σ_j V(j; B) P_j`.
//!
//! The Radon transform sends `V` to the point marginals
//! `p_α = (1/d) Σ_j V(j) Λ_{α,j} = tr(B A_α)`; it is undone by summing the
//! marginals along a line, `V(j) = Σ_{α∈j} p_α − 1`, which is exact for
//! unit-trace operators.
//!
//! Values are stored as complex numbers so that non-Hermitian operators
//! round-trip. For Hermitian inputs the imaginary parts vanish and
//! [`QuasiDistribution::real_values`] is the natural view.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Line, Point};
use crate::linalg::Operator;
use crate::line_operators::OperatorBasis;
use crate::scalar::Scalar;

/// `j ↦ V(j)` over all lines, in canonical line order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistribution<T> {
    d: usize,
    values: Vec<Complex<T>>,
}

/// `α ↦ p_α` over all points, in canonical point order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMarginals<T> {
    d: usize,
    values: Vec<Complex<T>>,
}

macro_rules! table_common {
    ($ty:ident, $len:expr) => {
        impl<T: Scalar> $ty<T> {
            pub fn from_complex(d: usize, values: Vec<Complex<T>>) -> Result<Self> {
                let expected = $len(d);
                if values.len() != expected {
                    return Err(Error::LengthMismatch {
                        expected,
                        found: values.len(),
                    });
                }
                Ok(Self { d, values })
            }

            pub fn from_real(d: usize, values: Vec<T>) -> Result<Self> {
                Self::from_complex(
                    d,
                    values
                        .into_iter()
                        .map(|v| Complex::new(v, T::zero()))
                        .collect(),
                )
            }

            pub fn d(&self) -> usize {
                self.d
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn values(&self) -> &[Complex<T>] {
                &self.values
            }

            pub fn real_values(&self) -> Vec<T> {
                self.values.iter().map(|v| v.re).collect()
            }

            /// Largest `|Im|` over all entries.
            pub fn max_imag(&self) -> T {
                self.values.iter().fold(T::zero(), |m, v| m.max(v.im.abs()))
            }

            /// Real parts, provided every imaginary part is within `tolerance`.
            pub fn to_real(&self, tolerance: T) -> Result<Vec<T>> {
                if let Some((index, v)) = self
                    .values
                    .iter()
                    .enumerate()
                    .find(|(_, v)| v.im.abs() > tolerance)
                {
                    return Err(Error::NotReal {
                        index,
                        imag: v.im.to_f64().unwrap_or(f64::NAN),
                    });
                }
                Ok(self.real_values())
            }

            pub fn max_abs_diff(&self, other: &Self) -> T {
                self.values
                    .iter()
                    .zip(&other.values)
                    .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
            }

            fn check_dim(&self, d: usize) -> Result<()> {
                if self.d != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: self.d,
                    });
                }
                Ok(())
            }
        }
    };
}

table_common!(QuasiDistribution, |d: usize| d * d);
table_common!(PointMarginals, |d: usize| d * (d + 1));

impl<T: Scalar> QuasiDistribution<T> {
    pub fn get(&self, j: Line) -> Complex<T> {
        self.values[j.index(self.d)]
    }

    /// `(1/d) Σ_j V(j)`, equal to `tr B`.
    pub fn normalization(&self) -> Complex<T> {
        self.values.iter().fold(Complex::zero(), |acc, &v| acc + v) / T::of_usize(self.d)
    }

    /// Smallest real part and the line where it occurs.
    pub fn min_real(&self) -> (Line, T) {
        let (j, v) = self
            .values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.re.partial_cmp(&b.1.re).expect("finite values"))
            .expect("non-empty distribution");
        (Line::from_index(j, self.d), v.re)
    }
}

impl<T: Scalar> PointMarginals<T> {
    pub fn get(&self, alpha: Point) -> Complex<T> {
        self.values[alpha.index(self.d)]
    }

    /// `Σ_m p_{(m,b)}` for each column `b = -1..d-1`.
    pub fn column_sums(&self) -> Vec<Complex<T>> {
        self.values
            .chunks(self.d)
            .map(|col| col.iter().fold(Complex::zero(), |a, &v| a + v))
            .collect()
    }
}

fn check_operator_dim<T: Scalar>(op: &Operator<T>, g: &Geometry) -> Result<()> {
    if op.dim() != g.d() {
        return Err(Error::DimensionMismatch {
            expected: g.d(),
            found: op.dim(),
        });
    }
    Ok(())
}

/// `V(j; B) = tr(B P_j)` for every line.
pub fn quasi_distribution<T: Scalar>(
    op: &Operator<T>,
    basis: &OperatorBasis<T>,
) -> Result<QuasiDistribution<T>> {
    check_operator_dim(op, basis.geometry())?;
    let values = basis
        .line_operators()
        .iter()
        .map(|p| op.trace_product(p))
        .collect();
    Ok(QuasiDistribution {
        d: basis.d(),
        values,
    })
}

/// `(1/d) Σ_j V(j) P_j`.
pub fn reconstruct_operator<T: Scalar>(
    v: &QuasiDistribution<T>,
    basis: &OperatorBasis<T>,
) -> Result<Operator<T>> {
    v.check_dim(basis.d())?;
    let d = basis.d();
    let mut acc = Operator::zeros(d);
    for (&vj, p) in v.values.iter().zip(basis.line_operators()) {
        acc.add_scaled(vj, p);
    }
    Ok(acc.scale_real(T::one() / T::of_usize(d)))
}

/// `(1/d) Σ_j V(j; ρ) V(j; B)`, which equals `tr(ρB)`.
pub fn pair_expectation<T: Scalar>(
    v_rho: &QuasiDistribution<T>,
    v_b: &QuasiDistribution<T>,
) -> Result<Complex<T>> {
    v_b.check_dim(v_rho.d)?;
    let sum = v_rho
        .values
        .iter()
        .zip(&v_b.values)
        .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b);
    Ok(sum / T::of_usize(v_rho.d))
}

/// Forward Radon transform: `p_α = (1/d) Σ_j V(j) Λ_{α,j}`.
pub fn radon_forward<T: Scalar>(
    v: &QuasiDistribution<T>,
    g: &Geometry,
) -> Result<PointMarginals<T>> {
    v.check_dim(g.d())?;
    let d = g.d();
    let scale = T::one() / T::of_usize(d);
    let values = g
        .points()
        .map(|alpha| {
            g.lines_through_point(alpha)
                .iter()
                .fold(Complex::zero(), |acc, &j| acc + v.get(j))
                * scale
        })
        .collect();
    Ok(PointMarginals { d, values })
}

/// Point marginals computed directly as `tr(B A_α)`.
pub fn point_marginals<T: Scalar>(
    op: &Operator<T>,
    basis: &OperatorBasis<T>,
) -> Result<PointMarginals<T>> {
    check_operator_dim(op, basis.geometry())?;
    let values = basis
        .point_operators()
        .iter()
        .map(|a| op.trace_product(a))
        .collect();
    Ok(PointMarginals {
        d: basis.d(),
        values,
    })
}

/// Inverse Radon transform: `V(j) = Σ_{α∈j} p_α − 1`.
pub fn radon_inverse<T: Scalar>(
    p: &PointMarginals<T>,
    g: &Geometry,
) -> Result<QuasiDistribution<T>> {
    p.check_dim(g.d())?;
    let one = Complex::new(T::one(), T::zero());
    let values = g
        .lines()
        .map(|j| {
            g.points_on_line(j)
                .iter()
                .fold(Complex::<T>::zero(), |acc, &alpha| acc + p.get(alpha))
                - one
        })
        .collect();
    Ok(QuasiDistribution { d: g.d(), values })
}
