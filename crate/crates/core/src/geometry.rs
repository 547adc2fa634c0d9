//! The dual affine plane over `Z_d`.
//!
//! Points are the `d(d+1)` pairs `(m, b)` arranged in `d + 1` columns
//! `b = -1, 0, …, d-1`; each column holds `d` rows `m`. A line is a choice of
//! one row per column and is labelled by its rows in the first two columns,
//! `j = (m₋₁, m₀)`. For `b ≥ 0` the row of line `j` in column `b` is
//!
//! ```text
//! m(b) = (b/2)(c - 1) + m₀  (mod d),   c = 2·m₋₁
//! ```
//!
//! with division by 2 taken in `Z_d`.
//!
//! Enumeration is canonical: line index `m₋₁·d + m₀`, point index
//! `(b + 1)·d + m`.

use std::fmt;

use crate::error::{Error, Result};
use crate::prime_field::PrimeDim;

/// A point `(m, b)`: row `m ∈ [0, d)`, column label `b ∈ [-1, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub m: usize,
    pub b: i64,
}

impl Point {
    pub const fn new(m: usize, b: i64) -> Self {
        Self { m, b }
    }

    /// Range-checked constructor.
    pub fn checked(m: i64, b: i64, d: usize) -> Result<Self> {
        check_column(b, d)?;
        if m < 0 || m >= d as i64 {
            return Err(Error::RowOutOfRange { m, d });
        }
        Ok(Self { m: m as usize, b })
    }

    /// Zero-based column position, `b + 1`.
    #[inline]
    pub fn column(&self) -> usize {
        (self.b + 1) as usize
    }

    #[inline]
    pub fn index(&self, d: usize) -> usize {
        self.column() * d + self.m
    }

    pub fn from_index(index: usize, d: usize) -> Self {
        Self {
            m: index % d,
            b: (index / d) as i64 - 1,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.b)
    }
}

/// A line `j = (m₋₁, m₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub m_minus1: usize,
    pub m0: usize,
}

impl Line {
    pub const fn new(m_minus1: usize, m0: usize) -> Self {
        Self { m_minus1, m0 }
    }

    #[inline]
    pub fn index(&self, d: usize) -> usize {
        self.m_minus1 * d + self.m0
    }

    pub fn from_index(index: usize, d: usize) -> Self {
        Self {
            m_minus1: index / d,
            m0: index % d,
        }
    }

    /// Slope parameter `c = 2·m₋₁ mod d`.
    pub fn slope(&self, p: &PrimeDim) -> usize {
        p.mul(2, self.m_minus1)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m_minus1, self.m0)
    }
}

fn check_column(b: i64, d: usize) -> Result<()> {
    if b < -1 || b >= d as i64 {
        return Err(Error::ColumnOutOfRange { b, d });
    }
    Ok(())
}

/// Row of `line` in column `b`, straight from the line equation.
pub fn line_row(line: Line, b: i64, p: &PrimeDim) -> Result<usize> {
    check_column(b, p.d())?;
    if b == -1 {
        return Ok(line.m_minus1 % p.d());
    }
    let c = line.slope(p) as i64;
    let step = p.mul(p.half(b), p.reduce(c - 1));
    Ok(p.add(step, line.m0))
}

/// Incidence structure: for each line, its row in each of the `d + 1` columns.
///
/// [`Geometry::new`] builds the canonical table from the line equation;
/// [`Geometry::from_rows`] accepts an arbitrary candidate so that
/// [`Geometry::verify_dapg_axioms`] can be pointed at other structures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    dim: PrimeDim,
    rows: Vec<usize>,
}

impl Geometry {
    pub fn new(dim: PrimeDim) -> Self {
        let d = dim.d();
        let mut rows = Vec::with_capacity(d * d * (d + 1));
        for j in 0..d * d {
            let line = Line::from_index(j, d);
            for b in -1..d as i64 {
                rows.push(line_row(line, b, &dim).expect("column in range"));
            }
        }
        Self { dim, rows }
    }

    /// Build from an explicit table: `rows[j][b + 1]` is the row of line `j`
    /// in column `b`. Only shape and ranges are checked here.
    pub fn from_rows(dim: PrimeDim, rows: Vec<Vec<usize>>) -> Result<Self> {
        let d = dim.d();
        if rows.len() != d * d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                found: rows.len(),
            });
        }
        let mut flat = Vec::with_capacity(d * d * (d + 1));
        for line in rows {
            if line.len() != d + 1 {
                return Err(Error::LengthMismatch {
                    expected: d + 1,
                    found: line.len(),
                });
            }
            for m in line {
                if m >= d {
                    return Err(Error::RowOutOfRange { m: m as i64, d });
                }
                flat.push(m);
            }
        }
        Ok(Self { dim, rows: flat })
    }

    pub fn with_dimension(d: u64) -> Result<Self> {
        PrimeDim::new(d).map(Self::new)
    }

    #[inline]
    pub fn dim(&self) -> &PrimeDim {
        &self.dim
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.dim.d()
    }

    pub fn num_points(&self) -> usize {
        self.d() * (self.d() + 1)
    }

    pub fn num_lines(&self) -> usize {
        self.d() * self.d()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        let d = self.d();
        (0..self.num_points()).map(move |i| Point::from_index(i, d))
    }

    pub fn lines(&self) -> impl Iterator<Item = Line> + '_ {
        let d = self.d();
        (0..self.num_lines()).map(move |j| Line::from_index(j, d))
    }

    #[inline]
    fn row(&self, line_index: usize, column: usize) -> usize {
        self.rows[line_index * (self.d() + 1) + column]
    }

    /// The unique point of `line` in column `b`.
    pub fn point_on_line(&self, line: Line, b: i64) -> Result<Point> {
        check_column(b, self.d())?;
        let column = (b + 1) as usize;
        Ok(Point::new(self.row(line.index(self.d()), column), b))
    }

    /// Geometric `Λ_{α,j}`: 1 if `alpha` lies on `line`, else 0.
    pub fn incidence(&self, alpha: Point, line: Line) -> u8 {
        match self.point_on_line(line, alpha.b) {
            Ok(p) if p == alpha => 1,
            _ => 0,
        }
    }

    /// The `d + 1` points of `line`, one per column, left to right.
    pub fn points_on_line(&self, line: Line) -> Vec<Point> {
        let j = line.index(self.d());
        (0..=self.d())
            .map(|col| Point::new(self.row(j, col), col as i64 - 1))
            .collect()
    }

    /// Lines through `alpha`, in canonical line order.
    pub fn lines_through_point(&self, alpha: Point) -> Vec<Line> {
        self.lines()
            .filter(|&j| self.incidence(alpha, j) == 1)
            .collect()
    }

    /// Point-by-line incidence matrix, rows in point order.
    pub fn lambda_matrix(&self) -> LambdaMatrix {
        let (np, nl) = (self.num_points(), self.num_lines());
        let mut entries = vec![0u8; np * nl];
        for j in 0..nl {
            for col in 0..=self.d() {
                let alpha = col * self.d() + self.row(j, col);
                entries[alpha * nl + j] = 1;
            }
        }
        LambdaMatrix {
            d: self.d(),
            entries,
        }
    }

    /// Check every dual-affine-plane property against the incidence table.
    pub fn verify_dapg_axioms(&self) -> AxiomReport {
        let d = self.d();
        let np = self.num_points();
        let nl = self.num_lines();
        let lambda = self.lambda_matrix();
        let lines_of: Vec<Vec<usize>> = (0..np)
            .map(|a| (0..nl).filter(|&j| lambda.get(a, j) == 1).collect())
            .collect();
        let shared_lines = |a: usize, b: usize| -> usize {
            lines_of[a]
                .iter()
                .filter(|j| lines_of[b].contains(j))
                .count()
        };

        let mut checks = Vec::with_capacity(5);

        // (a) counts
        let counted_points = (0..np).filter(|&a| !lines_of[a].is_empty()).count();
        let a = if self.rows.len() != nl * (d + 1) {
            Err(Witness::Count {
                what: "line table entries",
                expected: nl * (d + 1),
                found: self.rows.len(),
            })
        } else if counted_points != np {
            Err(Witness::Count {
                what: "points covered by lines",
                expected: np,
                found: counted_points,
            })
        } else {
            Ok(())
        };
        checks.push(AxiomCheck::new(Axiom::Counts, a));

        // (b) two lines meet once; two points in distinct columns share one line
        let mut b = Ok(());
        'lines: for j in 0..nl {
            for k in j + 1..nl {
                let common = (0..np)
                    .filter(|&a| lambda.get(a, j) == 1 && lambda.get(a, k) == 1)
                    .count();
                if common != 1 {
                    b = Err(Witness::LinePair {
                        first: Line::from_index(j, d),
                        second: Line::from_index(k, d),
                        shared_points: common,
                    });
                    break 'lines;
                }
            }
        }
        if b.is_ok() {
            b = first_point_pair(
                np,
                d,
                |x, y| x.b != y.b,
                |x, y| {
                    let n = shared_lines(x.index(d), y.index(d));
                    (n != 1).then_some(n)
                },
            );
        }
        checks.push(AxiomCheck::new(Axiom::UniqueIntersection, b));

        // (c) d lines per point, d + 1 points per line
        let mut c = Ok(());
        for (a, lines) in lines_of.iter().enumerate() {
            if lines.len() != d {
                c = Err(Witness::PointDegree {
                    point: Point::from_index(a, d),
                    lines: lines.len(),
                });
                break;
            }
        }
        if c.is_ok() {
            for j in 0..nl {
                let n = (0..np).filter(|&a| lambda.get(a, j) == 1).count();
                if n != d + 1 {
                    c = Err(Witness::LineSize {
                        line: Line::from_index(j, d),
                        points: n,
                    });
                    break;
                }
            }
        }
        checks.push(AxiomCheck::new(Axiom::Degrees, c));

        // (d) each column is a set of d mutually unconnected points
        let dd = first_point_pair(
            np,
            d,
            |x, y| x.b == y.b,
            |x, y| {
                let n = shared_lines(x.index(d), y.index(d));
                (n != 0).then_some(n)
            },
        );
        checks.push(AxiomCheck::new(Axiom::ColumnPartition, dd));

        // (e) every point is connected to every point outside its column
        let e = first_point_pair(
            np,
            d,
            |x, y| x.b != y.b,
            |x, y| {
                let n = shared_lines(x.index(d), y.index(d));
                (n == 0).then_some(n)
            },
        );
        checks.push(AxiomCheck::new(Axiom::CrossColumnConnected, e));

        AxiomReport { d, checks }
    }
}

fn first_point_pair(
    np: usize,
    d: usize,
    select: impl Fn(Point, Point) -> bool,
    violation: impl Fn(Point, Point) -> Option<usize>,
) -> Result<(), Witness> {
    for a in 0..np {
        for b in a + 1..np {
            let (x, y) = (Point::from_index(a, d), Point::from_index(b, d));
            if select(x, y) {
                if let Some(shared_lines) = violation(x, y) {
                    return Err(Witness::PointPair {
                        first: x,
                        second: y,
                        shared_lines,
                    });
                }
            }
        }
    }
    Ok(())
}

/// `Λ_{α,j}` as a dense `d(d+1) × d²` table of zeros and ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaMatrix {
    d: usize,
    entries: Vec<u8>,
}

impl LambdaMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_points(&self) -> usize {
        self.d * (self.d + 1)
    }

    pub fn num_lines(&self) -> usize {
        self.d * self.d
    }

    #[inline]
    pub fn get(&self, point_index: usize, line_index: usize) -> u8 {
        self.entries[point_index * self.num_lines() + line_index]
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.num_points())
            .map(|a| (0..self.num_lines()).map(|j| self.get(a, j) as usize).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.num_lines())
            .map(|j| {
                (0..self.num_points())
                    .map(|a| self.get(a, j) as usize)
                    .sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `d²` lines and `d(d+1)` points.
    Counts,
    /// Two lines share exactly one point; two points in different columns
    /// lie on exactly one line.
    UniqueIntersection,
    /// Each point lies on `d` lines; each line holds `d + 1` points.
    Degrees,
    /// The columns partition the points into `d + 1` sets of unconnected points.
    ColumnPartition,
    /// Every point is connected to every point outside its column.
    CrossColumnConnected,
}

impl Axiom {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Counts => "dapg_a_counts",
            Self::UniqueIntersection => "dapg_b_unique_intersection",
            Self::Degrees => "dapg_c_degrees",
            Self::ColumnPartition => "dapg_d_column_partition",
            Self::CrossColumnConnected => "dapg_e_cross_column_connected",
        }
    }
}

/// Counterexample attached to a failed axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Count {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    LinePair {
        first: Line,
        second: Line,
        shared_points: usize,
    },
    PointPair {
        first: Point,
        second: Point,
        shared_lines: usize,
    },
    PointDegree {
        point: Point,
        lines: usize,
    },
    LineSize {
        line: Line,
        points: usize,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Count {
                what,
                expected,
                found,
            } => write!(f, "{what}: expected {expected}, found {found}"),
            Self::LinePair {
                first,
                second,
                shared_points,
            } => {
                write!(f, "lines {first} and {second} share {shared_points} points")
            }
            Self::PointPair {
                first,
                second,
                shared_lines,
            } => {
                write!(f, "points {first} and {second} share {shared_lines} lines")
            }
            Self::PointDegree { point, lines } => write!(f, "point {point} lies on {lines} lines"),
            Self::LineSize { line, points } => write!(f, "line {line} holds {points} points"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn new(axiom: Axiom, outcome: Result<(), Witness>) -> Self {
        Self {
            axiom,
            witness: outcome.err(),
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub d: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}
