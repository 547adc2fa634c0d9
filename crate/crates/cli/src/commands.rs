use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use finite_radon::io::{self as fio, MarginalRow, ReconstructionReportJson, VerifyReportJson};
use finite_radon::phase_space::{
    point_marginals, quasi_distribution, radon_forward, radon_inverse, reconstruct_operator,
};
use finite_radon::random::random_pure_state;
use finite_radon::tomography::{
    estimate_marginals, reconstruct_state, simulate_measurements, validate_density,
};
use finite_radon::{
    Basis, Error, Geometry, PointMarginals, PrimeDim, QuasiDistribution, Result, Scalar,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Command, Common, Direction, Format, Shots};

/// Stream of the state generator for `--random`; measurement streams use the
/// column indices `0..=d`.
const STATE_STREAM: u64 = u64::MAX;

pub enum Outcome {
    Success,
    CheckFailed(String),
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Geometry { common } => geometry(&common),
        Command::Verify { common } => verify(&common),
        Command::Radon {
            common,
            direction,
            input,
        } => radon(&common, direction, &input),
        Command::Tomography {
            common,
            state,
            random: _,
            shots,
            seed,
            project_psd,
            record,
        } => tomography(
            &common,
            state.as_deref(),
            shots,
            seed,
            project_psd,
            record.as_deref(),
        ),
    }
}

fn dimension(common: &Common) -> Result<PrimeDim> {
    PrimeDim::new(common.d)
}

fn output_dir(common: &Common) -> Result<PathBuf> {
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Write to `--out` if given, else stdout.
fn emit(common: &Common, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match &common.out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            let mut w = create(path)?;
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w)?;
        }
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.flush()?;
    Ok(())
}

fn json_line<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn geometry(common: &Common) -> Result<Outcome> {
    let g = Geometry::new(dimension(common)?);
    let dir = output_dir(common)?;
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            fio::write_incidence_csv(&g, create(&dir.join("incidence.csv"))?)?;
            fio::write_lambda_csv(&g, create(&dir.join("lambda.csv"))?)?;
        }
        Format::Json => {
            write_json(&dir.join("incidence.json"), &fio::incidence_rows(&g))?;
            write_json(&dir.join("lambda.json"), &fio::lambda_rows(&g))?;
        }
    }
    Ok(Outcome::Success)
}

fn verify(common: &Common) -> Result<Outcome> {
    let basis = Basis::new(Geometry::new(dimension(common)?));
    let axioms = basis.geometry().verify_dapg_axioms();
    let identities = basis.verify_operator_identities(f64::tolerance());
    let report = VerifyReportJson::new(&axioms, &identities);
    emit(common, |w| match common.format.unwrap_or(Format::Json) {
        Format::Json => json_line(w, &report),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["name", "pass", "max_dev"])?;
            for c in &report.checks {
                out.write_record([
                    c.name.clone(),
                    c.pass.to_string(),
                    fio::format_real(c.max_dev),
                ])?;
            }
            out.flush()?;
            Ok(())
        }
    })?;
    Ok(match report.first_failure() {
        Some(c) => Outcome::CheckFailed(c.name.clone()),
        None => Outcome::Success,
    })
}

fn write_quasi(dir: &Path, format: Format, v: &QuasiDistribution<f64>) -> Result<()> {
    match format {
        Format::Csv => fio::write_quasi_csv(v, create(&dir.join("quasi.csv"))?),
        Format::Json => write_json(&dir.join("quasi.json"), &fio::quasi_rows(v)?),
    }
}

fn write_marginals(dir: &Path, format: Format, p: &PointMarginals<f64>) -> Result<()> {
    match format {
        Format::Csv => fio::write_marginals_csv(p, create(&dir.join("marginals.csv"))?),
        Format::Json => write_json(&dir.join("marginals.json"), &fio::marginal_rows(p)?),
    }
}

fn read_marginals(path: &Path, d: usize) -> Result<PointMarginals<f64>> {
    let is_json = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let rows: Vec<MarginalRow> = serde_json::from_reader(open(path)?)
            .map_err(|e| Error::Schema(format!("point marginals JSON: {e}")))?;
        fio::marginals_from_rows(rows, d)
    } else {
        fio::read_marginals_csv(open(path)?, d)
    }
}

fn radon(common: &Common, direction: Direction, input: &Path) -> Result<Outcome> {
    let basis = Basis::new(Geometry::new(dimension(common)?));
    let d = basis.d();
    let format = common.format.unwrap_or(Format::Csv);
    match direction {
        Direction::Forward => {
            let op = fio::read_operator_json(open(input)?)?;
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: op.dim(),
                });
            }
            let v = quasi_distribution(&op, &basis)?;
            let p = radon_forward(&v, basis.geometry())?;
            let dir = output_dir(common)?;
            write_quasi(&dir, format, &v)?;
            write_marginals(&dir, format, &p)?;
        }
        Direction::Inverse => {
            let p = read_marginals(input, d)?;
            let v = radon_inverse(&p, basis.geometry())?;
            let op = reconstruct_operator(&v, &basis)?;
            let dir = output_dir(common)?;
            write_quasi(&dir, format, &v)?;
            fio::write_operator_json(&op, create(&dir.join("operator.json"))?)?;
        }
    }
    Ok(Outcome::Success)
}

fn tomography(
    common: &Common,
    state: Option<&Path>,
    shots: Shots,
    seed: u64,
    project_psd: bool,
    record_path: Option<&Path>,
) -> Result<Outcome> {
    let basis = Basis::new(Geometry::new(dimension(common)?));
    let d = basis.d();
    let rho = match state {
        Some(path) => {
            let rho = fio::read_operator_json(open(path)?)?;
            if rho.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: rho.dim(),
                });
            }
            validate_density(&rho)?;
            rho
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(STATE_STREAM);
            random_pure_state::<f64, _>(d, &mut rng).projector()
        }
    };
    let report = match shots {
        Shots::Exact => {
            let p = point_marginals(&rho, &basis)?;
            reconstruct_state(&p, &basis, project_psd, Some(&rho))?
        }
        Shots::Count(n) => {
            let rec = simulate_measurements(&rho, n, seed, &basis)?;
            if let Some(path) = record_path {
                fio::write_record_json(&rec, create(path)?)?;
            }
            let p = estimate_marginals::<f64>(&rec);
            let mut report = reconstruct_state(&p, &basis, project_psd, Some(&rho))?;
            report.shots = Some(n);
            report
        }
    };
    let json = ReconstructionReportJson::from(&report);
    emit(common, |w| match common.format.unwrap_or(Format::Json) {
        Format::Json => json_line(w, &json),
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["metric", "value"])?;
            let shots = match json.shots {
                fio::ShotsJson::Count(n) => n.to_string(),
                fio::ShotsJson::Label(_) => "exact".into(),
            };
            out.write_record(["shots", shots.as_str()])?;
            for (name, value) in [
                ("fidelity", json.fidelity),
                ("trace_distance", json.trace_distance),
                ("min_eigenvalue", Some(json.min_eigenvalue)),
                ("trace", Some(json.trace)),
            ] {
                out.write_record([name, &value.map(fio::format_real).unwrap_or_default()])?;
            }
            out.flush()?;
            Ok(())
        }
    })?;
    Ok(Outcome::Success)
}
