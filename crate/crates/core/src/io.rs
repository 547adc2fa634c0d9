//! On-disk formats.
//!
//! * Operator JSON: `{"d": 3, "re": [[…], …], "im": [[…], …]}`, row-major.
//! * Ket JSON: `{"d": 3, "re": […], "im": […]}`.
//! * Measurement record JSON: `{"d": 3, "shots": N, "counts": {"-1": […], "0": […], …}}`.
//! * CSV tables, headers exactly as below, reals written with 17 significant
//!   digits so `f64` values survive a round trip:
//!   - incidence: `line_index,m_minus1,m0,b,m`
//!   - Λ matrix: `point_index,line_index,lambda`
//!   - quasi-distribution: `line_index,m_minus1,m0,value`
//!   - point marginals: `point_index,m,b,value`

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AxiomReport, Geometry, Line, Point};
use crate::linalg::{Ket, Operator};
use crate::line_operators::IdentityReport;
use crate::phase_space::{PointMarginals, QuasiDistribution};
use crate::tomography::{MeasurementRecord, ReconstructionReport};

/// Imaginary residue tolerated when writing a real-valued table.
pub const REAL_TOLERANCE: f64 = 1e-9;

/// `{:.16e}`: 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&Operator<f64>> for OperatorJson {
    fn from(op: &Operator<f64>) -> Self {
        let d = op.dim();
        let rows = |f: fn(&Complex<f64>) -> f64| {
            (0..d)
                .map(|r| (0..d).map(|c| f(&op[(r, c)])).collect())
                .collect()
        };
        Self {
            d,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl TryFrom<OperatorJson> for Operator<f64> {
    type Error = Error;

    fn try_from(j: OperatorJson) -> Result<Self> {
        let d = j.d;
        for (name, rows) in [("re", &j.re), ("im", &j.im)] {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Schema(format!(
                    "operator field \"{name}\" must be a {d}x{d} array"
                )));
            }
        }
        let entries =
            j.re.iter()
                .flatten()
                .zip(j.im.iter().flatten())
                .map(|(&re, &im)| Complex::new(re, im))
                .collect();
        Operator::from_entries(d, entries)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub d: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&Ket<f64>> for KetJson {
    fn from(k: &Ket<f64>) -> Self {
        Self {
            d: k.dim(),
            re: k.amplitudes().iter().map(|z| z.re).collect(),
            im: k.amplitudes().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<KetJson> for Ket<f64> {
    type Error = Error;

    fn try_from(j: KetJson) -> Result<Self> {
        if j.re.len() != j.d || j.im.len() != j.d {
            return Err(Error::Schema(format!(
                "ket fields \"re\" and \"im\" must have {} entries",
                j.d
            )));
        }
        Ok(Ket::new(
            j.re.iter()
                .zip(&j.im)
                .map(|(&re, &im)| Complex::new(re, im))
                .collect(),
        ))
    }
}

pub fn write_operator_json<W: Write>(op: &Operator<f64>, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, &OperatorJson::from(op))?;
    Ok(())
}

pub fn read_operator_json<R: Read>(r: R) -> Result<Operator<f64>> {
    let j: OperatorJson =
        serde_json::from_reader(r).map_err(|e| Error::Schema(format!("operator JSON: {e}")))?;
    j.try_into()
}

pub fn write_ket_json<W: Write>(k: &Ket<f64>, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, &KetJson::from(k))?;
    Ok(())
}

pub fn read_ket_json<R: Read>(r: R) -> Result<Ket<f64>> {
    let j: KetJson =
        serde_json::from_reader(r).map_err(|e| Error::Schema(format!("ket JSON: {e}")))?;
    j.try_into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecordJson {
    pub d: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, Vec<u64>>,
}

impl From<&MeasurementRecord> for MeasurementRecordJson {
    fn from(rec: &MeasurementRecord) -> Self {
        let counts = (-1..rec.d() as i64)
            .map(|b| (b.to_string(), rec.counts(b).to_vec()))
            .collect();
        Self {
            d: rec.d(),
            shots: rec.shots(),
            counts,
        }
    }
}

impl TryFrom<MeasurementRecordJson> for MeasurementRecord {
    type Error = Error;

    fn try_from(mut j: MeasurementRecordJson) -> Result<Self> {
        let mut counts = Vec::with_capacity(j.d + 1);
        for b in -1..j.d as i64 {
            let col = j.counts.remove(&b.to_string()).ok_or_else(|| {
                Error::Schema(format!("measurement record lacks counts for basis \"{b}\""))
            })?;
            counts.push(col);
        }
        if let Some(extra) = j.counts.keys().next() {
            return Err(Error::Schema(format!("unexpected basis label \"{extra}\"")));
        }
        MeasurementRecord::new(j.d, j.shots, counts)
    }
}

pub fn write_record_json<W: Write>(rec: &MeasurementRecord, w: W) -> Result<()> {
    serde_json::to_writer_pretty(w, &MeasurementRecordJson::from(rec))?;
    Ok(())
}

pub fn read_record_json<R: Read>(r: R) -> Result<MeasurementRecord> {
    let j: MeasurementRecordJson = serde_json::from_reader(r)
        .map_err(|e| Error::Schema(format!("measurement record JSON: {e}")))?;
    j.try_into()
}

/// Shot count, or `"exact"` when probabilities were used directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShotsJson {
    Count(u64),
    Label(ExactLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactLabel {
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReportJson {
    pub d: usize,
    pub shots: ShotsJson,
    pub projected: bool,
    pub fidelity: Option<f64>,
    pub trace_distance: Option<f64>,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub rho_hat: OperatorJson,
}

impl From<&ReconstructionReport<f64>> for ReconstructionReportJson {
    fn from(r: &ReconstructionReport<f64>) -> Self {
        Self {
            d: r.rho_hat.dim(),
            shots: r
                .shots
                .map_or(ShotsJson::Label(ExactLabel::Exact), ShotsJson::Count),
            projected: r.projected,
            fidelity: r.fidelity,
            trace_distance: r.trace_distance,
            min_eigenvalue: r.min_eigenvalue,
            trace: r.trace,
            rho_hat: OperatorJson::from(&r.rho_hat),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    pub max_dev: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReportJson {
    pub d: usize,
    pub checks: Vec<CheckJson>,
}

impl VerifyReportJson {
    pub fn new(axioms: &AxiomReport, identities: &IdentityReport<f64>) -> Self {
        let mut checks: Vec<CheckJson> = axioms
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.axiom.name().to_string(),
                pass: c.passed(),
                max_dev: if c.passed() { 0.0 } else { 1.0 },
                witness: c.witness.as_ref().map(ToString::to_string),
            })
            .collect();
        checks.extend(identities.checks.iter().map(|c| CheckJson {
            name: c.identity.name().to_string(),
            pass: c.passed,
            max_dev: c.deviation.max,
            witness: (!c.passed).then(|| format!("indices {:?}", c.deviation.at)),
        }));
        Self {
            d: axioms.d,
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckJson> {
        self.checks.iter().find(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncidenceRow {
    pub line_index: usize,
    pub m_minus1: usize,
    pub m0: usize,
    pub b: i64,
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaRow {
    pub point_index: usize,
    pub line_index: usize,
    pub lambda: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiRow {
    pub line_index: usize,
    pub m_minus1: usize,
    pub m0: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalRow {
    pub point_index: usize,
    pub m: usize,
    pub b: i64,
    pub value: f64,
}

pub fn incidence_rows(g: &Geometry) -> Vec<IncidenceRow> {
    let d = g.d();
    g.lines()
        .flat_map(|j| {
            g.points_on_line(j).into_iter().map(move |p| IncidenceRow {
                line_index: j.index(d),
                m_minus1: j.m_minus1,
                m0: j.m0,
                b: p.b,
                m: p.m,
            })
        })
        .collect()
}

pub fn lambda_rows(g: &Geometry) -> Vec<LambdaRow> {
    let lambda = g.lambda_matrix();
    (0..g.num_points())
        .flat_map(|a| {
            let lambda = &lambda;
            (0..g.num_lines()).map(move |j| LambdaRow {
                point_index: a,
                line_index: j,
                lambda: lambda.get(a, j),
            })
        })
        .collect()
}

pub fn quasi_rows(v: &QuasiDistribution<f64>) -> Result<Vec<QuasiRow>> {
    let d = v.d();
    let values = v.to_real(REAL_TOLERANCE)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(j, value)| {
            let line = Line::from_index(j, d);
            QuasiRow {
                line_index: j,
                m_minus1: line.m_minus1,
                m0: line.m0,
                value,
            }
        })
        .collect())
}

pub fn marginal_rows(p: &PointMarginals<f64>) -> Result<Vec<MarginalRow>> {
    let d = p.d();
    let values = p.to_real(REAL_TOLERANCE)?;
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(a, value)| {
            let point = Point::from_index(a, d);
            MarginalRow {
                point_index: a,
                m: point.m,
                b: point.b,
                value,
            }
        })
        .collect())
}

fn write_csv<W: Write>(
    w: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

fn read_csv<R: Read, Row: for<'de> Deserialize<'de>>(
    r: R,
    header: &[&str],
    what: &str,
) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_reader(r);
    let found: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if found != header {
        return Err(Error::Schema(format!(
            "{what} CSV header must be \"{}\", found \"{}\"",
            header.join(","),
            found.join(",")
        )));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| Error::Schema(format!("{what} CSV row {}: {e}", i + 1))))
        .collect()
}

const INCIDENCE_HEADER: [&str; 5] = ["line_index", "m_minus1", "m0", "b", "m"];
const LAMBDA_HEADER: [&str; 3] = ["point_index", "line_index", "lambda"];
const QUASI_HEADER: [&str; 4] = ["line_index", "m_minus1", "m0", "value"];
const MARGINAL_HEADER: [&str; 4] = ["point_index", "m", "b", "value"];

pub fn write_incidence_csv<W: Write>(g: &Geometry, w: W) -> Result<()> {
    let rows = incidence_rows(g).into_iter().map(|r| {
        vec![
            r.line_index.to_string(),
            r.m_minus1.to_string(),
            r.m0.to_string(),
            r.b.to_string(),
            r.m.to_string(),
        ]
    });
    write_csv(w, &INCIDENCE_HEADER, rows)
}

pub fn read_incidence_csv<R: Read>(r: R) -> Result<Vec<IncidenceRow>> {
    read_csv(r, &INCIDENCE_HEADER, "incidence")
}

pub fn write_lambda_csv<W: Write>(g: &Geometry, w: W) -> Result<()> {
    let rows = lambda_rows(g).into_iter().map(|r| {
        vec![
            r.point_index.to_string(),
            r.line_index.to_string(),
            r.lambda.to_string(),
        ]
    });
    write_csv(w, &LAMBDA_HEADER, rows)
}

pub fn read_lambda_csv<R: Read>(r: R) -> Result<Vec<LambdaRow>> {
    read_csv(r, &LAMBDA_HEADER, "lambda")
}

pub fn write_quasi_csv<W: Write>(v: &QuasiDistribution<f64>, w: W) -> Result<()> {
    let rows = quasi_rows(v)?.into_iter().map(|r| {
        vec![
            r.line_index.to_string(),
            r.m_minus1.to_string(),
            r.m0.to_string(),
            format_real(r.value),
        ]
    });
    write_csv(w, &QUASI_HEADER, rows)
}

/// Read a quasi-distribution for dimension `d`; rows may appear in any order.
pub fn read_quasi_csv<R: Read>(r: R, d: usize) -> Result<QuasiDistribution<f64>> {
    quasi_from_rows(read_csv(r, &QUASI_HEADER, "quasi-distribution")?, d)
}

/// Validate rows (any order, each line exactly once) into a distribution.
pub fn quasi_from_rows(rows: Vec<QuasiRow>, d: usize) -> Result<QuasiDistribution<f64>> {
    if rows.len() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: rows.len(),
        });
    }
    let mut values = vec![None; d * d];
    for row in rows {
        let line = Line::new(row.m_minus1, row.m0);
        if row.m_minus1 >= d || row.m0 >= d || row.line_index != line.index(d) {
            return Err(Error::Schema(format!(
                "quasi-distribution row {} does not label a line of dimension {d}",
                row.line_index
            )));
        }
        if values[row.line_index].replace(row.value).is_some() {
            return Err(Error::Schema(format!(
                "duplicate line_index {}",
                row.line_index
            )));
        }
    }
    QuasiDistribution::from_real(
        d,
        values
            .into_iter()
            .map(|v| v.expect("every slot filled"))
            .collect(),
    )
}

pub fn write_marginals_csv<W: Write>(p: &PointMarginals<f64>, w: W) -> Result<()> {
    let rows = marginal_rows(p)?.into_iter().map(|r| {
        vec![
            r.point_index.to_string(),
            r.m.to_string(),
            r.b.to_string(),
            format_real(r.value),
        ]
    });
    write_csv(w, &MARGINAL_HEADER, rows)
}

/// Read point marginals for dimension `d`; rows may appear in any order.
pub fn read_marginals_csv<R: Read>(r: R, d: usize) -> Result<PointMarginals<f64>> {
    marginals_from_rows(read_csv(r, &MARGINAL_HEADER, "point marginals")?, d)
}

/// Validate rows (any order, each point exactly once) into marginals.
pub fn marginals_from_rows(rows: Vec<MarginalRow>, d: usize) -> Result<PointMarginals<f64>> {
    let n = d * (d + 1);
    if rows.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rows.len(),
        });
    }
    let mut values = vec![None; n];
    for row in rows {
        let point = Point::checked(row.m as i64, row.b, d)?;
        if row.point_index != point.index(d) {
            return Err(Error::Schema(format!(
                "point_index {} does not match (m, b) = {point}",
                row.point_index
            )));
        }
        if values[row.point_index].replace(row.value).is_some() {
            return Err(Error::Schema(format!(
                "duplicate point_index {}",
                row.point_index
            )));
        }
    }
    PointMarginals::from_real(
        d,
        values
            .into_iter()
            .map(|v| v.expect("every slot filled"))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line_operators::OperatorBasis;
    use crate::phase_space::{point_marginals, quasi_distribution};
    use crate::random::random_density_matrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn operator_json_shape() {
        let op = Operator::from_entries(
            3,
            (0..9)
                .map(|k| Complex::new(k as f64, -(k as f64)))
                .collect(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_operator_json(&op, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["re"][1][2], 5.0);
        assert_eq!(v["im"][2][0], -6.0);
        assert_eq!(read_operator_json(&buf[..]).unwrap(), op);
    }

    #[test]
    fn operator_json_schema_errors() {
        let bad = br#"{"d": 3, "re": [[1,0,0],[0,1,0]], "im": [[0,0,0],[0,0,0],[0,0,0]]}"#;
        assert!(matches!(read_operator_json(&bad[..]), Err(Error::Schema(m)) if m.contains("re")));
        let missing = br#"{"d": 3, "re": []}"#;
        assert!(matches!(
            read_operator_json(&missing[..]),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn ket_json() {
        let k = Ket::new(vec![Complex::new(0.6, 0.0), Complex::new(0.0, 0.8)]);
        let mut buf = Vec::new();
        write_ket_json(&k, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["im"][1], 0.8);
        assert_eq!(read_ket_json(&buf[..]).unwrap(), k);
        assert!(read_ket_json(&br#"{"d":3,"re":[1],"im":[0]}"#[..]).is_err());
    }

    #[test]
    fn record_json() {
        let rec = MeasurementRecord::new(
            3,
            4,
            vec![vec![4, 0, 0], vec![1, 2, 1], vec![0, 0, 4], vec![2, 2, 0]],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_record_json(&rec, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["counts"]["-1"], serde_json::json!([4, 0, 0]));
        assert_eq!(v["shots"], 4);
        assert_eq!(read_record_json(&buf[..]).unwrap(), rec);
        let missing = br#"{"d":3,"shots":1,"counts":{"0":[1,0,0],"1":[1,0,0],"2":[1,0,0]}}"#;
        assert!(
            matches!(read_record_json(&missing[..]), Err(Error::Schema(m)) if m.contains("\"-1\""))
        );
    }

    #[test]
    fn incidence_table_for_three() {
        let g = Geometry::with_dimension(3).unwrap();
        let mut buf = Vec::new();
        write_incidence_csv(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("line_index,m_minus1,m0,b,m\n"));
        let rows = read_incidence_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 36);
        assert_eq!(rows, incidence_rows(&g));
        let j5: Vec<_> = rows
            .iter()
            .filter(|r| r.line_index == 5)
            .map(|r| (r.m, r.b))
            .collect();
        assert_eq!(j5, vec![(1, -1), (2, 0), (1, 1), (0, 2)]);
    }

    #[test]
    fn lambda_table() {
        let g = Geometry::with_dimension(3).unwrap();
        let mut buf = Vec::new();
        write_lambda_csv(&g, &mut buf).unwrap();
        let rows = read_lambda_csv(&buf[..]).unwrap();
        assert_eq!(rows.len(), 12 * 9);
        assert_eq!(rows.iter().filter(|r| r.lambda == 1).count(), 36);
    }

    #[test]
    fn marginal_csv_rejects_bad_input() {
        let wrong_header = "point,m,b,value\n";
        assert!(matches!(
            read_marginals_csv(wrong_header.as_bytes(), 3),
            Err(Error::Schema(_))
        ));
        let short = "point_index,m,b,value\n0,0,-1,1.0\n";
        assert!(matches!(
            read_marginals_csv(short.as_bytes(), 3),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut rows = String::from("point_index,m,b,value\n");
        for a in 0..12 {
            let p = Point::from_index(a, 3);
            let idx = if a == 3 { 4 } else { a };
            rows.push_str(&format!("{idx},{},{},0.3\n", p.m, p.b));
        }
        assert!(matches!(
            read_marginals_csv(rows.as_bytes(), 3),
            Err(Error::Schema(_))
        ));
        let non_numeric = "point_index,m,b,value\n0,0,-1,abc\n";
        assert!(matches!(
            read_marginals_csv(non_numeric.as_bytes(), 3),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn complex_values_are_not_written_as_reals() {
        let v = QuasiDistribution::from_complex(3, vec![Complex::new(1.0, 0.5); 9]).unwrap();
        assert!(matches!(
            write_quasi_csv(&v, Vec::new()),
            Err(Error::NotReal { .. })
        ));
    }

    proptest! {
        #[test]
        fn tables_round_trip_losslessly(seed in any::<u64>(), d in prop::sample::select(vec![3u64, 5, 7])) {
            let basis = OperatorBasis::<f64>::with_dimension(d).unwrap();
            let d = d as usize;
            let rho = random_density_matrix::<f64, _>(d, &mut ChaCha8Rng::seed_from_u64(seed));
            let v = quasi_distribution(&rho, &basis).unwrap();
            let v_real = QuasiDistribution::from_real(d, v.real_values()).unwrap();
            let mut buf = Vec::new();
            write_quasi_csv(&v_real, &mut buf).unwrap();
            prop_assert_eq!(read_quasi_csv(&buf[..], d).unwrap(), v_real);

            let p = point_marginals(&rho, &basis).unwrap();
            let p_real = PointMarginals::from_real(d, p.real_values()).unwrap();
            let mut buf = Vec::new();
            write_marginals_csv(&p_real, &mut buf).unwrap();
            prop_assert_eq!(read_marginals_csv(&buf[..], d).unwrap(), p_real);

            let mut buf = Vec::new();
            write_operator_json(&rho, &mut buf).unwrap();
            prop_assert_eq!(read_operator_json(&buf[..]).unwrap(), rho);
        }
    }
}
