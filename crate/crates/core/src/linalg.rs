//! Small dense complex matrices and vectors over the computational basis.
//!
//! Dimensions here are desk-scale (`d ≤ ~20`), so everything is a flat
//! row-major `Vec` and products are the naive triple loop.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A `d × d` complex matrix, row-major over the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    d: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> Operator<T> {
    pub fn zeros(d: usize) -> Self {
        Self {
            d,
            entries: vec![Complex::zero(); d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, |r, c| {
            if r == c {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                entries.push(f(r, c));
            }
        }
        Self { d, entries }
    }

    /// From row-major entries; `entries.len()` must be `d²`.
    pub fn from_entries(d: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                found: entries.len(),
            });
        }
        Ok(Self { d, entries })
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        Self::from_fn(
            diag.len(),
            |r, c| if r == c { diag[r] } else { Complex::zero() },
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.d).fold(Complex::zero(), |acc, i| acc + self[(i, i)])
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.d, other.d, "operator dimensions differ");
        let mut acc = Complex::zero();
        for r in 0..self.d {
            for c in 0..self.d {
                acc = acc + self[(r, c)] * other[(c, r)];
            }
        }
        acc
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.d, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            d: self.d,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self {
            d: self.d,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, s: Complex<T>, other: &Self) {
        assert_eq!(self.d, other.d, "operator dimensions differ");
        for (a, &b) in self.entries.iter_mut().zip(&other.entries) {
            *a = *a + s * b;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "operator dimensions differ");
        let d = self.d;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] = out.entries[r * d + c] + a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(self.d), |acc, _| acc.matmul(self))
    }

    pub fn apply(&self, ket: &Ket<T>) -> Ket<T> {
        assert_eq!(self.d, ket.dim(), "operator and ket dimensions differ");
        let amps = (0..self.d)
            .map(|r| (0..self.d).fold(Complex::zero(), |acc, c| acc + self[(r, c)] * ket[c]))
            .collect();
        Ket { amps }
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.d, other.d, "operator dimensions differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }

    /// Largest elementwise modulus of `self - self†`.
    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for r in 0..self.d {
            for c in r..self.d {
                dev = dev.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian part `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        Self::from_fn(self.d, |r, c| (self[(r, c)] + self[(c, r)].conj()) * half)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues_hermitian(&self) -> Vec<T> {
        HermitianEigen::new(self).values
    }

    /// `f(A)` for Hermitian `A` via its spectral decomposition.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Self {
        HermitianEigen::new(self).apply(f)
    }
}

impl<T> Index<(usize, usize)> for Operator<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.entries[r * self.d + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Operator<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.entries[r * self.d + c]
    }
}

impl<T: Scalar> Add for &Operator<T> {
    type Output = Operator<T>;

    fn add(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.d, rhs.d, "operator dimensions differ");
        Operator {
            d: self.d,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Scalar> Sub for &Operator<T> {
    type Output = Operator<T>;

    fn sub(self, rhs: Self) -> Operator<T> {
        assert_eq!(self.d, rhs.d, "operator dimensions differ");
        Operator {
            d: self.d,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Scalar> Mul for &Operator<T> {
    type Output = Operator<T>;

    fn mul(self, rhs: Self) -> Operator<T> {
        self.matmul(rhs)
    }
}

/// A state vector in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> Ket<T> {
    pub fn new(amps: Vec<Complex<T>>) -> Self {
        Self { amps }
    }

    /// Computational basis vector `|n⟩`.
    pub fn basis(d: usize, n: usize) -> Self {
        let mut amps = vec![Complex::zero(); d];
        amps[n % d] = Complex::one();
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "ket dimensions differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, &b)| acc + a.conj() * b)
    }

    pub fn norm(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self {
            amps: self.amps.iter().map(|&a| a / n).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            amps: self.amps.iter().map(|&a| a * s).collect(),
        }
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator<T> {
        Operator::from_fn(self.dim(), |r, c| self.amps[r] * self.amps[c].conj())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }
}

impl<T> Index<usize> for Ket<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, i: usize) -> &Complex<T> {
        &self.amps[i]
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// `H = X + iY` is embedded as the real symmetric `[[X, -Y], [Y, X]]`, which
/// has every eigenvalue of `H` twice. Cyclic Jacobi diagonalizes the
/// embedding; matrix functions are evaluated on it and read back from the
/// left block column.
struct HermitianEigen<T> {
    d: usize,
    values: Vec<T>,
    embed_values: Vec<T>,
    // 2d × 2d row-major, eigenvectors in columns
    vectors: Vec<T>,
}

impl<T: Scalar> HermitianEigen<T> {
    fn new(h: &Operator<T>) -> Self {
        let d = h.dim();
        let n = 2 * d;
        let half = T::of(0.5);
        let mut a = vec![T::zero(); n * n];
        for r in 0..d {
            for c in 0..d {
                let z = (h[(r, c)] + h[(c, r)].conj()) * half;
                a[r * n + c] = z.re;
                a[(r + d) * n + c + d] = z.re;
                a[r * n + c + d] = -z.im;
                a[(r + d) * n + c] = z.im;
            }
        }
        let (embed_values, vectors) = jacobi_symmetric(a, n);
        let mut sorted = embed_values.clone();
        sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        let values = sorted.chunks(2).map(|p| (p[0] + p[1]) * half).collect();
        Self {
            d,
            values,
            embed_values,
            vectors,
        }
    }

    fn apply(&self, f: impl Fn(T) -> T) -> Operator<T> {
        let (d, n) = (self.d, 2 * self.d);
        let fv: Vec<T> = self.embed_values.iter().map(|&x| f(x)).collect();
        let v = |i: usize, k: usize| self.vectors[i * n + k];
        Operator::from_fn(d, |r, c| {
            let mut re = T::zero();
            let mut im = T::zero();
            for (k, &w) in fv.iter().enumerate() {
                re = re + v(r, k) * w * v(c, k);
                im = im + v(r + d, k) * w * v(c, k);
            }
            Complex::new(re, im)
        })
    }
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric `n × n` matrix.
/// Returns eigenvalues (unsorted) and the orthogonal eigenvector matrix.
fn jacobi_symmetric<T: Scalar>(mut a: Vec<T>, n: usize) -> (Vec<T>, Vec<T>) {
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let scale = a
        .iter()
        .fold(T::zero(), |m, x| m.max(x.abs()))
        .max(T::min_positive_value());
    let eps = T::epsilon() * T::epsilon() * scale * scale;
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[p * n + q] * a[p * n + q];
            }
        }
        if off <= eps {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}
