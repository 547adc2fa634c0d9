//! Line operators `P_j = Σ_{α∈j} A_α − I` and the operator identities they obey.

use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Line, Point};
use crate::linalg::Operator;
use crate::mub::mub_state_unchecked;
use crate::scalar::Scalar;

/// Line operator for `line`, built from the point projectors on it.
pub fn line_operator<T: Scalar>(line: Line, g: &Geometry) -> Operator<T> {
    let d = g.d();
    let mut p = Operator::identity(d).scale_real(-T::one());
    for alpha in g.points_on_line(line) {
        p.add_scaled(
            Complex::new(T::one(), T::zero()),
            &mub_state_unchecked::<T>(alpha, g.dim()).projector(),
        );
    }
    p
}

/// Every point projector and line operator of a geometry, materialized once.
#[derive(Debug, Clone)]
pub struct OperatorBasis<T> {
    geometry: Geometry,
    points: Vec<Operator<T>>,
    lines: Vec<Operator<T>>,
}

impl<T: Scalar> OperatorBasis<T> {
    pub fn new(geometry: Geometry) -> Self {
        let p = geometry.dim().clone();
        let points: Vec<Operator<T>> = geometry
            .points()
            .map(|alpha| mub_state_unchecked::<T>(alpha, &p).projector())
            .collect();
        let d = geometry.d();
        let lines = geometry
            .lines()
            .map(|j| {
                let mut op = Operator::identity(d).scale_real(-T::one());
                for alpha in geometry.points_on_line(j) {
                    op.add_scaled(Complex::new(T::one(), T::zero()), &points[alpha.index(d)]);
                }
                op
            })
            .collect();
        Self {
            geometry,
            points,
            lines,
        }
    }

    pub fn with_dimension(d: u64) -> Result<Self> {
        Geometry::with_dimension(d).map(Self::new)
    }

    /// Assemble from explicit operators, e.g. to audit a modified set.
    pub fn from_parts(
        geometry: Geometry,
        points: Vec<Operator<T>>,
        lines: Vec<Operator<T>>,
    ) -> Result<Self> {
        let d = geometry.d();
        if points.len() != geometry.num_points() {
            return Err(Error::LengthMismatch {
                expected: geometry.num_points(),
                found: points.len(),
            });
        }
        if lines.len() != geometry.num_lines() {
            return Err(Error::LengthMismatch {
                expected: geometry.num_lines(),
                found: lines.len(),
            });
        }
        if let Some(op) = points.iter().chain(&lines).find(|op| op.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: op.dim(),
            });
        }
        Ok(Self {
            geometry,
            points,
            lines,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn d(&self) -> usize {
        self.geometry.d()
    }

    pub fn point(&self, alpha: Point) -> &Operator<T> {
        &self.points[alpha.index(self.d())]
    }

    pub fn line(&self, j: Line) -> &Operator<T> {
        &self.lines[j.index(self.d())]
    }

    pub fn point_operators(&self) -> &[Operator<T>] {
        &self.points
    }

    pub fn line_operators(&self) -> &[Operator<T>] {
        &self.lines
    }

    /// `tr(A_α P_j)`, the Hilbert-space side of `Λ_{α,j}`.
    pub fn lambda_trace(&self, alpha: Point, j: Line) -> T {
        self.point(alpha).trace_product(self.line(j)).re
    }

    /// `(1/d) Σ_{j∋α} P_j`.
    pub fn point_from_lines(&self, alpha: Point) -> Operator<T> {
        let d = self.d();
        let mut acc = Operator::zeros(d);
        for j in self.geometry.lines_through_point(alpha) {
            acc.add_scaled(Complex::new(T::one(), T::zero()), self.line(j));
        }
        acc.scale_real(T::one() / T::of_usize(d))
    }

    /// Largest `|tr P_j P_k − d δ_jk|` over the given line-index pairs.
    pub fn orthogonality_deviation(
        &self,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Deviation<T> {
        let d = T::of_usize(self.d());
        let mut worst = Deviation::zero();
        for (j, k) in pairs {
            let expected = if j == k { d } else { T::zero() };
            let dev = (self.lines[j].trace_product(&self.lines[k])
                - Complex::new(expected, T::zero()))
            .norm();
            worst.record(dev, vec![j, k]);
        }
        worst
    }

    /// Run every operator identity and report the worst deviation of each.
    pub fn verify_operator_identities(&self, tolerance: T) -> IdentityReport<T> {
        let d = self.d();
        let nl = self.lines.len();
        let id = Operator::<T>::identity(d);
        let one = Complex::new(T::one(), T::zero());
        let mut checks = Vec::new();

        let mut trace = Deviation::zero();
        for (j, p) in self.lines.iter().enumerate() {
            trace.record((p.trace() - one).norm(), vec![j]);
        }
        checks.push(IdentityCheck::new(Identity::LineTrace, trace, tolerance));

        let pairs = (0..nl).flat_map(|j| (j..nl).map(move |k| (j, k)));
        checks.push(IdentityCheck::new(
            Identity::LineOrthogonality,
            self.orthogonality_deviation(pairs),
            tolerance,
        ));

        let mut involution = Deviation::zero();
        for (j, p) in self.lines.iter().enumerate() {
            involution.record(p.matmul(p).max_abs_diff(&id), vec![j]);
        }
        checks.push(IdentityCheck::new(
            Identity::LineInvolution,
            involution,
            tolerance,
        ));

        let mut hermitian = Deviation::zero();
        for (j, p) in self.lines.iter().enumerate() {
            hermitian.record(p.hermiticity_deviation(), vec![j]);
        }
        checks.push(IdentityCheck::new(
            Identity::LineHermitian,
            hermitian,
            tolerance,
        ));

        let mut lambda = Deviation::zero();
        for alpha in self.geometry.points() {
            for j in self.geometry.lines() {
                let geometric = T::of_usize(self.geometry.incidence(alpha, j) as usize);
                let traced = self.point(alpha).trace_product(self.line(j));
                lambda.record(
                    (traced - Complex::new(geometric, T::zero())).norm(),
                    vec![alpha.index(d), j.index(d)],
                );
            }
        }
        checks.push(IdentityCheck::new(
            Identity::LambdaIncidence,
            lambda,
            tolerance,
        ));

        let mut points_from_lines = Deviation::zero();
        for alpha in self.geometry.points() {
            points_from_lines.record(
                self.point_from_lines(alpha).max_abs_diff(self.point(alpha)),
                vec![alpha.index(d)],
            );
        }
        checks.push(IdentityCheck::new(
            Identity::PointFromLines,
            points_from_lines,
            tolerance,
        ));

        let mut distill = Deviation::zero();
        for j in self.geometry.lines() {
            let on: Vec<&Operator<T>> = self
                .geometry
                .points_on_line(j)
                .iter()
                .map(|&a| self.point(a))
                .collect();
            let mut lhs = Operator::zeros(d);
            let mut rhs = Operator::zeros(d);
            for (i, a) in on.iter().enumerate() {
                rhs.add_scaled(one, a);
                for (k, b) in on.iter().enumerate() {
                    if i != k {
                        lhs.add_scaled(one, &a.matmul(b));
                    }
                }
            }
            distill.record(lhs.max_abs_diff(&rhs), vec![j.index(d)]);
        }
        checks.push(IdentityCheck::new(
            Identity::FluctuationDistillation,
            distill,
            tolerance,
        ));

        // Σ over one column of A = (1/d) Σ_j P_j = (1/(d+1)) Σ_α A_α = I
        let mut resolution = Deviation::zero();
        for b in -1..d as i64 {
            let mut col = Operator::zeros(d);
            for m in 0..d {
                col.add_scaled(one, self.point(Point::new(m, b)));
            }
            resolution.record(col.max_abs_diff(&id), vec![(b + 1) as usize]);
        }
        let mut all_lines = Operator::zeros(d);
        for p in &self.lines {
            all_lines.add_scaled(one, p);
        }
        resolution.record(
            all_lines
                .scale_real(T::one() / T::of_usize(d))
                .max_abs_diff(&id),
            vec![],
        );
        let mut all_points = Operator::zeros(d);
        for a in &self.points {
            all_points.add_scaled(one, a);
        }
        resolution.record(
            all_points
                .scale_real(T::one() / T::of_usize(d + 1))
                .max_abs_diff(&id),
            vec![],
        );
        checks.push(IdentityCheck::new(
            Identity::ResolutionOfIdentity,
            resolution,
            tolerance,
        ));

        IdentityReport {
            d,
            tolerance,
            checks,
        }
    }
}

/// Worst deviation seen so far and where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation<T> {
    pub max: T,
    /// Indices of the worst case (line and/or point indices, check-specific).
    pub at: Vec<usize>,
}

impl<T: Scalar> Deviation<T> {
    fn zero() -> Self {
        Self {
            max: T::zero(),
            at: Vec::new(),
        }
    }

    fn record(&mut self, dev: T, at: Vec<usize>) {
        // NaN must surface as a failure
        if dev > self.max || dev.is_nan() {
            self.max = dev;
            self.at = at;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    LineTrace,
    LineOrthogonality,
    LineInvolution,
    LineHermitian,
    LambdaIncidence,
    PointFromLines,
    FluctuationDistillation,
    ResolutionOfIdentity,
}

impl Identity {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LineTrace => "line_trace_one",
            Self::LineOrthogonality => "line_orthogonality",
            Self::LineInvolution => "line_squares_to_identity",
            Self::LineHermitian => "line_hermitian",
            Self::LambdaIncidence => "lambda_trace_equals_incidence",
            Self::PointFromLines => "point_from_lines",
            Self::FluctuationDistillation => "fluctuation_distillation",
            Self::ResolutionOfIdentity => "resolution_of_identity",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck<T> {
    pub identity: Identity,
    pub deviation: Deviation<T>,
    pub passed: bool,
}

impl<T: Scalar> IdentityCheck<T> {
    fn new(identity: Identity, deviation: Deviation<T>, tolerance: T) -> Self {
        let passed = deviation.max <= tolerance;
        Self {
            identity,
            deviation,
            passed,
        }
    }
}

impl<T: Scalar> fmt::Display for IdentityCheck<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (max deviation {:e} at {:?})",
            self.identity.name(),
            if self.passed { "pass" } else { "FAIL" },
            self.deviation.max,
            self.deviation.at
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport<T> {
    pub d: usize,
    pub tolerance: T,
    pub checks: Vec<IdentityCheck<T>>,
}

impl<T: Scalar> IdentityReport<T> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&IdentityCheck<T>> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, identity: Identity) -> Option<&IdentityCheck<T>> {
        self.checks.iter().find(|c| c.identity == identity)
    }

    pub fn max_deviation(&self) -> T {
        self.checks
            .iter()
            .fold(T::zero(), |m, c| m.max(c.deviation.max))
    }
}
