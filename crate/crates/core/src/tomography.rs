//! Linear-inversion state tomography from finite-shot measurements in all
//! `d + 1` mutually unbiased bases.
//!
//! Sampling uses ChaCha8 seeded from the user's 64-bit seed, with the
//! generator's stream set to the zero-based column index `b + 1`, so every
//! basis draws from its own reproducible stream. Each basis receives `N`
//! shots, drawn as a multinomial via a chain of conditional binomials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{DensityDefect, Error, Result};
use crate::geometry::Point;
use crate::linalg::Operator;
use crate::line_operators::OperatorBasis;
use crate::phase_space::{point_marginals, radon_inverse, reconstruct_operator, PointMarginals};
use crate::scalar::Scalar;

/// Slack allowed when validating a supplied density matrix.
pub const DENSITY_TOLERANCE: f64 = 1e-9;

/// Outcome counts per basis; `counts[b + 1][m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    d: usize,
    shots: u64,
    counts: Vec<Vec<u64>>,
}

impl MeasurementRecord {
    pub fn new(d: usize, shots: u64, counts: Vec<Vec<u64>>) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        if counts.len() != d + 1 {
            return Err(Error::LengthMismatch {
                expected: d + 1,
                found: counts.len(),
            });
        }
        for (col, row) in counts.iter().enumerate() {
            if row.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    found: row.len(),
                });
            }
            let total: u64 = row.iter().sum();
            if total != shots {
                return Err(Error::Schema(format!(
                    "basis {} has {total} counts, expected {shots}",
                    col as i64 - 1
                )));
            }
        }
        Ok(Self { d, shots, counts })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Counts for basis label `b ∈ [-1, d)`.
    pub fn counts(&self, b: i64) -> &[u64] {
        &self.counts[(b + 1) as usize]
    }

    pub fn all_counts(&self) -> &[Vec<u64>] {
        &self.counts
    }
}

/// Check Hermiticity, positivity and unit trace, in that order.
// Negated comparisons so that NaN entries fail every check.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn validate_density<T: Scalar>(rho: &Operator<T>) -> Result<()> {
    let tol = T::of(DENSITY_TOLERANCE);
    let herm = rho.hermiticity_deviation();
    if !(herm <= tol) {
        return Err(Error::InvalidDensity(DensityDefect::NotHermitian {
            deviation: f(herm),
        }));
    }
    let min = rho.eigenvalues_hermitian()[0];
    if !(min >= -tol) {
        return Err(Error::InvalidDensity(DensityDefect::NotPositive {
            min_eigenvalue: f(min),
        }));
    }
    let tr = rho.trace().re;
    if !((tr - T::one()).abs() <= tol) {
        return Err(Error::InvalidDensity(DensityDefect::NotUnitTrace {
            trace: f(tr),
        }));
    }
    Ok(())
}

fn f<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Draw `shots` outcomes in every basis from `p_{(m,b)} = tr(ρ A_{(m,b)})`.
pub fn simulate_measurements<T: Scalar>(
    rho: &Operator<T>,
    shots: u64,
    seed: u64,
    basis: &OperatorBasis<T>,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if rho.dim() != basis.d() {
        return Err(Error::DimensionMismatch {
            expected: basis.d(),
            found: rho.dim(),
        });
    }
    validate_density(rho)?;
    let d = basis.d();
    let probs = point_marginals(rho, basis)?;
    let counts = (0..=d)
        .map(|col| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(col as u64);
            let column: Vec<f64> = (0..d)
                .map(|m| f(probs.get(Point::new(m, col as i64 - 1)).re).max(0.0))
                .collect();
            multinomial(shots, &column, &mut rng)
        })
        .collect();
    MeasurementRecord::new(d, shots, counts)
}

fn multinomial(n: u64, weights: &[f64], rng: &mut ChaCha8Rng) -> Vec<u64> {
    let total: f64 = weights.iter().sum();
    let mut remaining = n;
    let mut mass_left = 1.0;
    let mut out = Vec::with_capacity(weights.len());
    for (i, &w) in weights.iter().enumerate() {
        let p = w / total;
        let k = if i + 1 == weights.len() {
            remaining
        } else if remaining == 0 || p <= 0.0 {
            0
        } else {
            let cond = (p / mass_left).clamp(0.0, 1.0);
            Binomial::new(remaining, cond)
                .expect("probability in [0, 1]")
                .sample(rng)
        };
        out.push(k);
        remaining -= k;
        mass_left -= p;
    }
    out
}

/// Empirical frequencies `counts[b][m] / N`.
pub fn estimate_marginals<T: Scalar>(rec: &MeasurementRecord) -> PointMarginals<T> {
    let n = T::from_u64(rec.shots).expect("shot count representable");
    let values = rec
        .counts
        .iter()
        .flat_map(|col| {
            col.iter()
                .map(move |&k| T::from_u64(k).expect("count representable") / n)
        })
        .collect();
    PointMarginals::from_real(rec.d, values).expect("record shape validated on construction")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport<T> {
    pub rho_hat: Operator<T>,
    /// Smallest eigenvalue of the linear-inversion estimate, before any projection.
    pub min_eigenvalue: T,
    /// Trace of the linear-inversion estimate, before any projection.
    pub trace: T,
    pub projected: bool,
    pub fidelity: Option<T>,
    pub trace_distance: Option<T>,
    /// `None` when reconstructed from exact probabilities.
    pub shots: Option<u64>,
}

/// `ρ̂ = (1/d) Σ_j V̂(j) P_j` with `V̂` the inverse Radon transform of `p`.
///
/// With `project_psd`, negative eigenvalues are clipped to zero and the
/// result renormalized to unit trace. When `truth` is given the report is
/// scored against it.
pub fn reconstruct_state<T: Scalar>(
    p: &PointMarginals<T>,
    basis: &OperatorBasis<T>,
    project_psd: bool,
    truth: Option<&Operator<T>>,
) -> Result<ReconstructionReport<T>> {
    let v = radon_inverse(p, basis.geometry())?;
    let linear = reconstruct_operator(&v, basis)?.hermitian_part();
    let min_eigenvalue = linear.eigenvalues_hermitian()[0];
    let trace = linear.trace().re;
    let rho_hat = if project_psd {
        project_to_density(&linear)
    } else {
        linear
    };
    let (fidelity, trace_distance) = match truth {
        Some(rho) => {
            if rho.dim() != basis.d() {
                return Err(Error::DimensionMismatch {
                    expected: basis.d(),
                    found: rho.dim(),
                });
            }
            (
                Some(fidelity(rho, &rho_hat)),
                Some(trace_distance(rho, &rho_hat)),
            )
        }
        None => (None, None),
    };
    Ok(ReconstructionReport {
        rho_hat,
        min_eigenvalue,
        trace,
        projected: project_psd,
        fidelity,
        trace_distance,
        shots: None,
    })
}

/// Clip negative eigenvalues and renormalize to unit trace.
pub fn project_to_density<T: Scalar>(op: &Operator<T>) -> Operator<T> {
    let clipped = op.map_spectrum(|x| x.max(T::zero()));
    let tr = clipped.trace().re;
    if tr > T::zero() {
        clipped.scale_real(T::one() / tr)
    } else {
        Operator::identity(op.dim()).scale_real(T::one() / T::of_usize(op.dim()))
    }
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
///
/// For pure `ρ = |ψ⟩⟨ψ|` this is `⟨ψ|σ|ψ⟩`, evaluated directly as `tr(ρσ)`.
pub fn fidelity<T: Scalar>(rho: &Operator<T>, sigma: &Operator<T>) -> T {
    let purity = rho.trace_product(rho).re;
    let value = if (purity - T::one()).abs() <= T::of(DENSITY_TOLERANCE) {
        rho.trace_product(sigma).re
    } else {
        let root = rho.map_spectrum(|x| x.max(T::zero()).sqrt());
        let inner = root.matmul(sigma).matmul(&root);
        let s = inner
            .eigenvalues_hermitian()
            .into_iter()
            .fold(T::zero(), |acc, x| acc + x.max(T::zero()).sqrt());
        s * s
    };
    value.max(T::zero()).min(T::one())
}

/// `½ Σ |λ_i(ρ − σ)|`.
pub fn trace_distance<T: Scalar>(rho: &Operator<T>, sigma: &Operator<T>) -> T {
    let diff = rho - sigma;
    diff.eigenvalues_hermitian()
        .into_iter()
        .fold(T::zero(), |acc, x| acc + x.abs())
        * T::of(0.5)
}

/// Simulate, estimate and reconstruct in one call, scoring against `rho`.
pub fn run_tomography<T: Scalar>(
    rho: &Operator<T>,
    shots: u64,
    seed: u64,
    basis: &OperatorBasis<T>,
    project_psd: bool,
) -> Result<ReconstructionReport<T>> {
    let record = simulate_measurements(rho, shots, seed, basis)?;
    let p = estimate_marginals::<T>(&record);
    let mut report = reconstruct_state(&p, basis, project_psd, Some(rho))?;
    report.shots = Some(shots);
    Ok(report)
}

/// Reconstruction from exact probabilities `tr(ρ A_α)`, no sampling.
pub fn run_exact_tomography<T: Scalar>(
    rho: &Operator<T>,
    basis: &OperatorBasis<T>,
    project_psd: bool,
) -> Result<ReconstructionReport<T>> {
    validate_density(rho)?;
    let p = point_marginals(rho, basis)?;
    reconstruct_state(&p, basis, project_psd, Some(rho))
}

/// `Σ_α p_α A_α − I`, the closed form of the reconstruction.
pub fn reconstruct_from_projectors<T: Scalar>(
    p: &PointMarginals<T>,
    basis: &OperatorBasis<T>,
) -> Operator<T> {
    let d = basis.d();
    let mut acc = Operator::identity(d).scale_real(-T::one());
    for (&pa, a) in p.values().iter().zip(basis.point_operators()) {
        acc.add_scaled(pa, a);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Ket;
    use crate::random::{random_density_matrix, random_pure_state};
    use num_complex::Complex;

    fn basis(d: u64) -> OperatorBasis<f64> {
        OperatorBasis::with_dimension(d).unwrap()
    }

    #[test]
    fn eigenstate_is_deterministic_in_its_basis() {
        let b = basis(3);
        let rho = Ket::<f64>::basis(3, 0).projector();
        let rec = simulate_measurements(&rho, 1000, 3, &b).unwrap();
        assert_eq!(rec.counts(-1), &[1000, 0, 0]);
        for col in rec.all_counts() {
            assert_eq!(col.iter().sum::<u64>(), 1000);
        }
    }

    #[test]
    fn unbiased_basis_is_uniform() {
        let b = basis(3);
        let rho = Ket::<f64>::basis(3, 0).projector();
        let n = 300_000;
        let rec = simulate_measurements(&rho, n, 11, &b).unwrap();
        for &k in rec.counts(0) {
            let freq = k as f64 / n as f64;
            // 5 standard deviations of a binomial with p = 1/3
            assert!(
                (freq - 1.0 / 3.0).abs() < 5.0 * (2.0 / 9.0 / n as f64).sqrt(),
                "{freq}"
            );
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let b = basis(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix::<f64, _>(3, &mut rng);
        let a = simulate_measurements(&rho, 100, 42, &b).unwrap();
        let c = simulate_measurements(&rho, 100, 42, &b).unwrap();
        assert_eq!(a, c);
        let other = simulate_measurements(&rho, 100, 43, &b).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn rejects_invalid_inputs() {
        let b = basis(3);
        let rho = Operator::<f64>::identity(3).scale_real(1.0 / 3.0);
        assert!(matches!(
            simulate_measurements(&rho, 0, 1, &b),
            Err(Error::ZeroShots)
        ));
        let not_unit = Operator::<f64>::identity(3);
        assert!(matches!(
            simulate_measurements(&not_unit, 10, 1, &b),
            Err(Error::InvalidDensity(DensityDefect::NotUnitTrace { .. }))
        ));
        let mut not_herm = rho.clone();
        not_herm[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(matches!(
            simulate_measurements(&not_herm, 10, 1, &b),
            Err(Error::InvalidDensity(DensityDefect::NotHermitian { .. }))
        ));
        let negative = Operator::diagonal(&[
            Complex::new(1.5, 0.0),
            Complex::new(-0.5, 0.0),
            Complex::new(0.0, 0.0),
        ]);
        assert!(matches!(
            simulate_measurements(&negative, 10, 1, &b),
            Err(Error::InvalidDensity(DensityDefect::NotPositive { .. }))
        ));
    }

    #[test]
    fn marginal_estimates() {
        let rec = MeasurementRecord::new(
            3,
            30,
            vec![
                vec![10, 10, 10],
                vec![30, 0, 0],
                vec![10, 10, 10],
                vec![5, 5, 20],
            ],
        )
        .unwrap();
        let p = estimate_marginals::<f64>(&rec);
        assert!((p.get(Point::new(0, -1)).re - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.get(Point::new(0, 0)).re, 1.0);
        assert_eq!(p.get(Point::new(2, 0)).re, 0.0);
        for s in p.column_sums() {
            assert!((s.re - 1.0).abs() < 1e-15);
        }
        assert!(MeasurementRecord::new(3, 30, vec![vec![10, 10, 9]; 4]).is_err());
        assert!(MeasurementRecord::new(3, 0, vec![vec![0, 0, 0]; 4]).is_err());
    }

    #[test]
    fn exact_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [3u64, 5, 7] {
            let b = basis(d);
            let rho = random_density_matrix::<f64, _>(d as usize, &mut rng);
            let report = run_exact_tomography(&rho, &b, false).unwrap();
            assert!(report.rho_hat.max_abs_diff(&rho) < 1e-12);
            assert!((report.trace - 1.0).abs() < 1e-12);
            let p = point_marginals(&rho, &b).unwrap();
            assert!(reconstruct_from_projectors(&p, &b).max_abs_diff(&rho) < 1e-12);
        }
    }

    #[test]
    fn uniform_marginals_give_mixed_state() {
        let b = basis(5);
        let p = PointMarginals::from_real(5, vec![0.2; 30]).unwrap();
        let report = reconstruct_state(&p, &b, false, None).unwrap();
        assert!(
            report
                .rho_hat
                .max_abs_diff(&Operator::identity(5).scale_real(0.2))
                < 1e-12
        );
        assert!(report.fidelity.is_none());
    }

    #[test]
    fn psd_projection() {
        let b = basis(3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let psi = random_pure_state::<f64, _>(3, &mut rng);
        let rho = psi.projector();
        let report = run_tomography(&rho, 50, 1, &b, true).unwrap();
        assert!(report.rho_hat.eigenvalues_hermitian()[0] > -1e-12);
        assert!((report.rho_hat.trace().re - 1.0).abs() < 1e-12);
        let raw = run_tomography(&rho, 50, 1, &b, false).unwrap();
        assert!((raw.trace - 1.0).abs() < 1e-9);
        assert!(raw.rho_hat.hermiticity_deviation() < 1e-12);
        assert_eq!(raw.min_eigenvalue, report.min_eigenvalue);
    }

    #[test]
    fn fidelity_and_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density_matrix::<f64, _>(3, &mut rng);
        let sigma = random_density_matrix::<f64, _>(3, &mut rng);
        assert!((fidelity(&rho, &rho) - 1.0).abs() < 1e-9);
        assert!(trace_distance(&rho, &rho) < 1e-12);
        let f = fidelity(&rho, &sigma);
        let t = trace_distance(&rho, &sigma);
        // Fuchs–van de Graaf: 1 - √F ≤ T ≤ √(1 - F)
        assert!(1.0 - f.sqrt() <= t + 1e-12 && t <= (1.0 - f).sqrt() + 1e-12);
        // symmetric for mixed states
        assert!((f - fidelity(&sigma, &rho)).abs() < 1e-9);
        let psi = random_pure_state::<f64, _>(3, &mut rng);
        let pure = psi.projector();
        let overlap = psi.inner(&sigma.apply(&psi)).re;
        assert!((fidelity(&pure, &sigma) - overlap).abs() < 1e-12);
    }
}
