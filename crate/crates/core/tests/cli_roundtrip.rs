use std::fs;

use fdsl::cli::{config_from_str, parse_report, read_report, render_table, report_json, run, Emit, Overrides};
use fdsl::error::Error;

const SMALL: &str = r#"
[problem]
alpha = "1/3"
beta = 1.5
nonlinearity = { 3 = 0.5 }

[[problem.q]]
kind = "polynomial"
coefficients = [1, -2, 0.5]

[quadrature]
K = 24

[run]
n = [1, 2]
rank = 3
emit = ["table", "report", "plot", "analysis", "slopes"]
"#;

#[test]
fn report_round_trip_and_determinism() {
    let cfg = config_from_str(SMALL, &Overrides::default()).unwrap();
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let report = run(&cfg, d1.path()).unwrap();
    run(&cfg, d2.path()).unwrap();
    for name in ["report.json", "table.txt", "plot_n1.csv", "plot_n2.csv", "analysis.txt", "slopes.txt"] {
        let a = fs::read(d1.path().join(name)).unwrap();
        let b = fs::read(d2.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    assert!(d1.path().join("metadata.json").exists());

    let back = read_report(&d1.path().join("report.json")).unwrap();
    assert_eq!(back.eigenpairs.len(), 2);
    for (x, y) in report.eigenpairs.iter().zip(&back.eigenpairs) {
        assert_eq!(x.lambda, y.lambda);
        assert_eq!(x.corrections.len(), y.corrections.len());
        for (c, d) in x.corrections.iter().zip(&y.corrections) {
            assert_eq!(c.lambda, d.lambda);
        }
    }
    assert_eq!(render_table(&report), render_table(&back));

    let plot = fs::read_to_string(d1.path().join("plot_n1.csv")).unwrap();
    let mut lines = plot.lines();
    assert_eq!(lines.next(), Some("x,u,uprime"));
    assert!(lines.next().unwrap().starts_with("0,0,1.0"));
    // header, two subintervals of 2K+1 nodes, and x = 0, α, 1
    assert_eq!(plot.lines().count(), 1 + 2 * 49 + 3);
}

#[test]
fn unperturbed_table_has_exact_eigenvalues() {
    let text = "[problem]\nalpha = \"1/2\"\n[quadrature]\nK = 256\n[run]\nn = [1, 2, 3]\nrank = 2\nemit = [\"table\", \"analysis\"]\n";
    let cfg = config_from_str(text, &Overrides::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let report = run(&cfg, dir.path()).unwrap();
    for e in &report.eigenpairs {
        let want = (std::f64::consts::PI * e.n as f64).powi(2);
        assert!((e.lambda.to_f64() - want).abs() < 1e-12);
        assert!(e.residual < 1e-12);
    }
    assert!(!dir.path().join("report.json").exists());
    let analysis = fs::read_to_string(dir.path().join("analysis.txt")).unwrap();
    assert!(analysis.contains("inf"), "{analysis}");
    let back = parse_report(&report_json(&report).unwrap()).unwrap();
    assert!(!back.eigenpairs[0].analysis.radius.is_finite());
    assert!(back.eigenpairs[0].analysis.r_n.is_zero());
}

#[test]
fn failure_is_flushed_with_marker() {
    let mut cfg = config_from_str(SMALL, &Overrides::default()).unwrap();
    cfg.k = None;
    cfg.epsilon = fdsl::Scalar::pow10(-40);
    cfg.quadrature.k_cap = 64;
    let dir = tempfile::tempdir().unwrap();
    let err = run(&cfg, dir.path()).unwrap_err();
    assert!(matches!(err, Error::ParameterSearchExhausted { cap: 64 }));
    let table = fs::read_to_string(dir.path().join("table.txt")).unwrap();
    assert!(table.contains("FAILED n = 1"), "{table}");
    let back = read_report(&dir.path().join("report.json")).unwrap();
    assert!(back.failure.is_some() && back.eigenpairs.is_empty());
}

#[test]
fn emit_selection_from_overrides() {
    let ov = Overrides { emit: vec![Emit::Slopes], ..Overrides::default() };
    let cfg = config_from_str("[problem]\nalpha = 0.4\n", &ov).unwrap();
    assert_eq!(cfg.emit.len(), 1);
}
