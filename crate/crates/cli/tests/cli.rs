use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use finite_radon::io::{self, ReconstructionReportJson, ShotsJson, VerifyReportJson};
use finite_radon::{Basis, Complex, OperatorF64, Point};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finite-radon"))
        .args(args)
        .output()
        .expect("spawn finite-radon")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(out: &Output) -> ReconstructionReportJson {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_operator(dir: &Path, name: &str, op: &OperatorF64) -> std::path::PathBuf {
    let path = dir.join(name);
    io::write_operator_json(op, fs::File::create(&path).unwrap()).unwrap();
    path
}

#[test]
fn geometry_tables_have_expected_sizes() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("d3");
    assert_eq!(
        code(&run(&["geometry", "--d", "3", "--out", path_str(&out)])),
        0
    );
    let rows = io::read_incidence_csv(fs::File::open(out.join("incidence.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 36);
    let lambda = io::read_lambda_csv(fs::File::open(out.join("lambda.csv")).unwrap()).unwrap();
    assert_eq!(lambda.len(), 12 * 9);

    let out = tmp.path().join("d5");
    assert_eq!(
        code(&run(&[
            "geometry",
            "--d",
            "5",
            "--out",
            path_str(&out),
            "--format",
            "json"
        ])),
        0
    );
    let rows: Vec<io::IncidenceRow> =
        serde_json::from_slice(&fs::read(out.join("incidence.json")).unwrap()).unwrap();
    let lines: std::collections::BTreeSet<_> = rows.iter().map(|r| r.line_index).collect();
    let points: std::collections::BTreeSet<_> = rows.iter().map(|r| (r.m, r.b)).collect();
    assert_eq!(lines.len(), 25);
    assert_eq!(points.len(), 30);
}

#[test]
fn invalid_dimensions_exit_2() {
    for d in ["4", "6", "1", "2", "9"] {
        let out = run(&["geometry", "--d", d]);
        assert_eq!(code(&out), 2, "d={d}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(code(&run(&["verify", "--d", "6"])), 2);
}

#[test]
fn verify_passes_for_primes() {
    for d in ["3", "11"] {
        let out = run(&["verify", "--d", d]);
        assert_eq!(
            code(&out),
            0,
            "d={d}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r: VerifyReportJson = serde_json::from_slice(&out.stdout).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.checks.len(), 13);
    }
}

#[test]
fn radon_of_maximally_mixed_state_is_flat() {
    let tmp = TempDir::new().unwrap();
    let mixed = OperatorF64::identity(3).scale_real(1.0 / 3.0);
    let input = write_operator(tmp.path(), "mixed.json", &mixed);
    let out = tmp.path().join("out");
    let status = run(&[
        "radon",
        "--d",
        "3",
        "--direction",
        "forward",
        "--input",
        path_str(&input),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&status), 0);
    let v = io::read_quasi_csv(fs::File::open(out.join("quasi.csv")).unwrap(), 3).unwrap();
    let p = io::read_marginals_csv(fs::File::open(out.join("marginals.csv")).unwrap(), 3).unwrap();
    assert!(v
        .real_values()
        .iter()
        .all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
    assert!(p
        .real_values()
        .iter()
        .all(|x| (x - 1.0 / 3.0).abs() < 1e-12));
}

#[test]
fn radon_of_point_projector_is_line_indicator() {
    let tmp = TempDir::new().unwrap();
    let basis = Basis::with_dimension(3).unwrap();
    let alpha = Point::new(1, -1);
    let input = write_operator(tmp.path(), "a.json", basis.point(alpha));
    let out = tmp.path().join("out");
    let status = run(&[
        "radon",
        "--d",
        "3",
        "--direction",
        "forward",
        "--input",
        path_str(&input),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&status), 0);
    let v = io::read_quasi_csv(fs::File::open(out.join("quasi.csv")).unwrap(), 3).unwrap();
    for line in basis.geometry().lines() {
        let expected = f64::from(basis.geometry().incidence(alpha, line));
        assert!((v.get(line).re - expected).abs() < 1e-12, "{line}");
    }
}

#[test]
fn radon_forward_then_inverse_recovers_operator() {
    let tmp = TempDir::new().unwrap();
    let rho = OperatorF64::from_fn(5, |r, c| {
        let z = Complex::new(0.3 * (r as f64 - c as f64), 0.1 * (r + c) as f64);
        if r == c {
            Complex::new(0.2, 0.0)
        } else {
            z * 0.05
        }
    })
    .hermitian_part();
    let input = write_operator(tmp.path(), "rho.json", &rho);
    let fwd = tmp.path().join("fwd");
    let inv = tmp.path().join("inv");
    let args = [
        "radon",
        "--d",
        "5",
        "--direction",
        "forward",
        "--input",
        path_str(&input),
        "--out",
        path_str(&fwd),
    ];
    assert_eq!(code(&run(&args)), 0);
    let marginals = fwd.join("marginals.csv");
    let args = [
        "radon",
        "--d",
        "5",
        "--direction",
        "inverse",
        "--input",
        path_str(&marginals),
        "--out",
        path_str(&inv),
    ];
    assert_eq!(code(&run(&args)), 0);
    let back = io::read_operator_json(fs::File::open(inv.join("operator.json")).unwrap()).unwrap();
    assert!(
        back.max_abs_diff(&rho) < 1e-12,
        "{}",
        back.max_abs_diff(&rho)
    );
}

#[test]
fn radon_rejects_mismatched_dimension() {
    let tmp = TempDir::new().unwrap();
    let input = write_operator(tmp.path(), "i.json", &OperatorF64::identity(3));
    let out = run(&[
        "radon",
        "--d",
        "5",
        "--direction",
        "forward",
        "--input",
        path_str(&input),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tomography_random_state_high_fidelity() {
    let r = report(&run(&[
        "tomography",
        "--d",
        "3",
        "--random",
        "--shots",
        "100000",
        "--seed",
        "7",
    ]));
    assert_eq!(r.shots, ShotsJson::Count(100_000));
    assert!(r.fidelity.unwrap() > 0.99, "{:?}", r.fidelity);

    let mut fidelities: Vec<f64> = (0..20)
        .map(|seed| {
            let s = seed.to_string();
            report(&run(&[
                "tomography",
                "--d",
                "3",
                "--random",
                "--shots",
                "100000",
                "--seed",
                &s,
            ]))
            .fidelity
            .unwrap()
        })
        .collect();
    fidelities.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = 0.5 * (fidelities[9] + fidelities[10]);
    assert!(median > 0.99, "{median}");
}

#[test]
fn tomography_is_deterministic_per_seed() {
    let args = [
        "tomography",
        "--d",
        "5",
        "--random",
        "--shots",
        "2000",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "tomography",
        "--d",
        "5",
        "--random",
        "--shots",
        "2000",
        "--seed",
        "43",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn tomography_exact_shots_recovers_state() {
    let r = report(&run(&[
        "tomography",
        "--d",
        "5",
        "--random",
        "--shots",
        "exact",
        "--seed",
        "3",
    ]));
    assert!(matches!(r.shots, ShotsJson::Label(_)));
    assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-12);
    assert!(r.trace_distance.unwrap() < 1e-12);
}

#[test]
fn tomography_rejects_bad_input() {
    assert_eq!(
        code(&run(&[
            "tomography",
            "--d",
            "3",
            "--random",
            "--shots",
            "0"
        ])),
        2
    );
    assert_eq!(code(&run(&["tomography", "--d", "3", "--shots", "10"])), 2);

    let tmp = TempDir::new().unwrap();
    let not_density = write_operator(tmp.path(), "i.json", &OperatorF64::identity(3));
    let out = run(&[
        "tomography",
        "--d",
        "3",
        "--state",
        path_str(&not_density),
        "--shots",
        "10",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tomography_from_state_file_writes_record() {
    let tmp = TempDir::new().unwrap();
    let rho = OperatorF64::identity(3).scale_real(1.0 / 3.0);
    let state = write_operator(tmp.path(), "rho.json", &rho);
    let record = tmp.path().join("record.json");
    let out = tmp.path().join("report.json");
    let args = [
        "tomography",
        "--d",
        "3",
        "--state",
        path_str(&state),
        "--shots",
        "500",
        "--seed",
        "1",
        "--project-psd",
        "--record",
        path_str(&record),
        "--out",
        path_str(&out),
    ];
    assert_eq!(code(&run(&args)), 0);
    let rec = io::read_record_json(fs::File::open(&record).unwrap()).unwrap();
    assert_eq!(rec.shots(), 500);
    assert!(rec
        .all_counts()
        .iter()
        .all(|c| c.iter().sum::<u64>() == 500));
    let r: ReconstructionReportJson = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert!(r.projected);
    assert!((r.trace - 1.0).abs() < 1e-9);
}
