//! Configuration files, the batch runner and its text/JSON/CSV artifacts.
//!
//! A configuration is TOML with three sections:
//!
//! ```toml
//! [problem]
//! alpha = "1/2"            # "m/n" marks α as exact
//! beta = 2
//! breakpoints = [0.1, 0.2, 0.3, 0.7]
//! nonlinearity = { 9 = 1 } # degree = coefficient
//!
//! [[problem.q]]
//! kind = "inverse_sqrt"    # scale / sqrt(|center - stretch x|)
//! center = 0.7
//!
//! [[problem.q]]
//! kind = "polynomial"
//! coefficients = [1, 0, -2]
//!
//! [quadrature]
//! K = 256                  # omit to search
//!
//! [run]
//! n = [1, 2, 3]
//! rank = 10
//! precision = 50
//! emit = ["table", "report"]
//! ```
//!
//! Numbers may be written as TOML numbers or as strings; strings keep every
//! digit and accept exact ratios.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::analysis::{convergence_report, fit_slopes, ConvergenceReport, SlopeFit};
use crate::basic::BasicSolution;
use crate::error::{Error, Result};
use crate::oracle::find_eigenvalue_near;
use crate::problem::{Alpha, PotentialTerm, ProblemSpec};
use crate::scalar::{precision_digits, set_precision_digits, Scalar};
use crate::sinc::QuadratureOptions;
use crate::solver::{run_fd, Correction, DivergenceWarning, FDSolution, SolveOptions};

/// Agreement required between the solver and the shooting oracle.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

/// Selectable artifacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Table,
    Report,
    Plot,
    Analysis,
    Slopes,
}

/// Validated run description.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub n_list: Vec<u32>,
    pub rank: usize,
    pub precision: u32,
    pub k: Option<usize>,
    pub quadrature: QuadratureOptions,
    pub epsilon: Scalar,
    pub emit: BTreeSet<Emit>,
    pub oracle_check: bool,
}

impl RunConfig {
    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions { quadrature: self.quadrature.clone(), k: self.k, epsilon: self.epsilon.clone() }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n_list: Option<Vec<u32>>,
    pub rank: Option<usize>,
    pub precision: Option<u32>,
    pub k: Option<usize>,
    pub d: Option<String>,
    pub mu: Option<String>,
    pub epsilon: Option<String>,
    pub emit: Vec<Emit>,
    pub oracle_check: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum Num {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Num {
    fn scalar(&self, field: &str) -> Result<Scalar> {
        let parsed = match self {
            Num::Text(t) => Scalar::parse(t),
            Num::Int(i) => Ok(Scalar::from_i64(*i)),
            Num::Float(f) => Scalar::parse(&format!("{f:e}")),
        };
        parsed.map_err(|e| Error::validation(field, e.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: RawProblem,
    #[serde(default)]
    quadrature: RawQuadrature,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    alpha: Num,
    beta: Option<Num>,
    #[serde(default)]
    q: Vec<RawTerm>,
    #[serde(default)]
    nonlinearity: BTreeMap<String, Num>,
    #[serde(default)]
    breakpoints: Vec<Num>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawTerm {
    Polynomial { coefficients: Vec<Num> },
    InverseSqrt { scale: Option<Num>, center: Num, stretch: Option<Num> },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    #[serde(rename = "K")]
    k: Option<usize>,
    d: Option<Num>,
    mu: Option<Num>,
    epsilon: Option<Num>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    n: Option<Vec<u32>>,
    rank: Option<usize>,
    precision: Option<u32>,
    #[serde(default)]
    emit: Vec<Emit>,
    #[serde(default)]
    oracle_check: bool,
}

/// Reads and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    load_config(path, &Overrides::default())
}

/// [`parse_config`] with command-line overrides applied.
pub fn load_config(path: &Path, overrides: &Overrides) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    config_from_str(&text, overrides).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Parses TOML text. Sets the process precision before any number is read.
pub fn config_from_str(text: &str, overrides: &Overrides) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let precision = overrides.precision.or(raw.run.precision).unwrap_or(crate::scalar::DEFAULT_PRECISION_DIGITS);
    if precision < 20 {
        return Err(Error::validation("run.precision", "must be at least 20 digits"));
    }
    set_precision_digits(precision);

    let problem = build_problem(&raw.problem)?;
    let n_list = overrides.n_list.clone().or(raw.run.n).unwrap_or_else(|| vec![1]);
    if n_list.is_empty() {
        return Err(Error::validation("run.n", "must not be empty"));
    }
    if n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::validation("run.n", "indices must be positive and strictly increasing"));
    }

    let mut quadrature = QuadratureOptions::default();
    if let Some(d) = pick(&overrides.d, &raw.quadrature.d, "quadrature.d")? {
        if !(d > 0.0 && d < Scalar::pi()) {
            return Err(Error::validation("quadrature.d", "must lie in (0, π)"));
        }
        quadrature.d = d;
    }
    if let Some(mu) = pick(&overrides.mu, &raw.quadrature.mu, "quadrature.mu")? {
        if mu <= 0.0 {
            return Err(Error::validation("quadrature.mu", "must be positive"));
        }
        quadrature.mu = mu;
    }
    let k = overrides.k.or(raw.quadrature.k);
    if k == Some(0) {
        return Err(Error::validation("quadrature.K", "must be positive"));
    }
    let epsilon = pick(&overrides.epsilon, &raw.quadrature.epsilon, "quadrature.epsilon")?
        .unwrap_or_else(|| Scalar::pow10(-12));
    if epsilon <= 0.0 {
        return Err(Error::validation("quadrature.epsilon", "must be positive"));
    }

    let mut emit: BTreeSet<Emit> = raw.run.emit.into_iter().chain(overrides.emit.iter().copied()).collect();
    if emit.is_empty() {
        emit.insert(Emit::Table);
        emit.insert(Emit::Report);
    }
    Ok(RunConfig {
        problem,
        n_list,
        rank: overrides.rank.or(raw.run.rank).unwrap_or(10),
        precision,
        k,
        quadrature,
        epsilon,
        emit,
        oracle_check: overrides.oracle_check || raw.run.oracle_check,
    })
}

fn pick(cli: &Option<String>, file: &Option<Num>, field: &str) -> Result<Option<Scalar>> {
    match (cli, file) {
        (Some(t), _) => Scalar::parse(t).map(Some).map_err(|e| Error::validation(field, e.to_string())),
        (None, Some(n)) => n.scalar(field).map(Some),
        (None, None) => Ok(None),
    }
}

fn build_problem(raw: &RawProblem) -> Result<ProblemSpec> {
    let alpha = match &raw.alpha {
        Num::Text(t) if t.contains('/') => {
            let (a, b) = t.split_once('/').expect("checked");
            let num = a.trim().parse::<u64>();
            let den = b.trim().parse::<u64>();
            match (num, den) {
                (Ok(num), Ok(den)) => Alpha::rational(num, den)?,
                _ => return Err(Error::validation("problem.alpha", format!("`{t}` is not a ratio of nonnegative integers"))),
            }
        }
        other => Alpha::new(other.scalar("problem.alpha")?),
    };
    let beta = match &raw.beta {
        Some(b) => b.scalar("problem.beta")?,
        None => Scalar::zero(),
    };
    let mut terms = Vec::with_capacity(raw.q.len());
    for (i, t) in raw.q.iter().enumerate() {
        terms.push(match t {
            RawTerm::Polynomial { coefficients } => PotentialTerm::Polynomial(
                coefficients
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.scalar(&format!("problem.q[{i}].coefficients[{j}]")))
                    .collect::<Result<_>>()?,
            ),
            RawTerm::InverseSqrt { scale, center, stretch } => PotentialTerm::inverse_sqrt(
                scale.as_ref().map_or(Ok(Scalar::one()), |s| s.scalar(&format!("problem.q[{i}].scale")))?,
                center.scalar(&format!("problem.q[{i}].center"))?,
                stretch.as_ref().map_or(Ok(Scalar::one()), |s| s.scalar(&format!("problem.q[{i}].stretch")))?,
            ),
        });
    }
    let mut nonlinearity = BTreeMap::new();
    for (deg, coeff) in &raw.nonlinearity {
        let field = format!("problem.nonlinearity.{deg}");
        let p: u32 = deg.trim().parse().map_err(|_| Error::validation(&field, "degree must be an integer"))?;
        if p == 0 {
            return Err(Error::validation(field, "degree must be at least 1"));
        }
        let a = coeff.scalar(&field)?;
        if !a.is_zero() {
            nonlinearity.insert(p, a);
        }
    }
    let breakpoints = raw
        .breakpoints
        .iter()
        .enumerate()
        .map(|(i, b)| b.scalar(&format!("problem.breakpoints[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    ProblemSpec::new(alpha, beta, terms, nonlinearity, breakpoints).map_err(|e| match e {
        Error::Validation { field, reason } if !field.starts_with("problem.") => {
            Error::Validation { field: format!("problem.{field}"), reason }
        }
        other => other,
    })
}

/// Comparison with the shooting oracle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleCheck {
    pub lambda: Scalar,
    pub difference: Scalar,
    pub passed: bool,
    pub steps: usize,
}

/// Everything computed for one eigenpair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenRecord {
    pub n: u32,
    pub rank: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub h: Scalar,
    pub basic: BasicSolution,
    pub lambda: Scalar,
    pub residual: Scalar,
    pub jump_defect: Scalar,
    pub u_at_alpha: Scalar,
    pub corrections: Vec<Correction>,
    pub warnings: Vec<DivergenceWarning>,
    pub analysis: ConvergenceReport,
    #[serde(default)]
    pub residual_history: Vec<Scalar>,
    #[serde(default)]
    pub slopes: Option<SlopeFit>,
    #[serde(default)]
    pub oracle: Option<OracleCheck>,
}

impl EigenRecord {
    /// `‖u^{(m)}‖_∞` of the last correction (`u0` at rank 0).
    pub fn last_correction_norm(&self) -> Scalar {
        match self.corrections.last() {
            Some(c) => c.sup_abs_u.clone(),
            None => self.basic.u0_sup_norm().attained,
        }
    }

    /// `|λ^{(m)}|` of the last correction (`λ0` at rank 0).
    pub fn last_correction_lambda(&self) -> Scalar {
        match self.corrections.last() {
            Some(c) => c.lambda.abs(),
            None => self.basic.lambda0.abs(),
        }
    }
}

/// The structured report. Contains no timestamps, so identical inputs give identical files.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub precision: u32,
    pub rank: usize,
    pub epsilon: Scalar,
    pub eigenpairs: Vec<EigenRecord>,
    /// Set when a solve failed; earlier eigenpairs are still present.
    #[serde(default)]
    pub failure: Option<String>,
}

/// Timing and provenance, kept apart from the data files.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub elapsed_seconds: f64,
    pub per_n_seconds: Vec<(u32, f64)>,
    pub artifacts: Vec<PathBuf>,
    pub failed: bool,
}

/// Solves one eigenpair and gathers the record.
pub fn solve_record(config: &RunConfig, n: u32) -> Result<(EigenRecord, FDSolution)> {
    let sol = run_fd(&config.problem, n, config.rank, &config.solve_options())?;
    let analysis = convergence_report(&config.problem, &sol.basic, Some(config.rank))?;
    let (residual_history, slopes) = if config.emit.contains(&Emit::Slopes) {
        let hist = sol.residual_history();
        (hist.clone(), slopes_of(&sol, &hist))
    } else {
        (Vec::new(), None)
    };
    let oracle = if config.oracle_check { Some(oracle_check(&config.problem, &sol.lambda_m)?) } else { None };
    let record = EigenRecord {
        n,
        rank: sol.rank(),
        k: sol.params.k,
        h: sol.params.h.clone(),
        basic: sol.basic.clone(),
        lambda: sol.lambda_m.clone(),
        residual: sol.residual_r.clone(),
        jump_defect: sol.jump_defect.clone(),
        u_at_alpha: sol.u_at_alpha(),
        corrections: sol.corrections.clone(),
        warnings: sol.warnings.clone(),
        analysis,
        residual_history,
        slopes,
        oracle,
    };
    Ok((record, sol))
}

/// Slope fits over ranks `0..=m`; `None` when a history has a zero entry.
pub fn slopes_of(sol: &FDSolution, residuals: &[Scalar]) -> Option<SlopeFit> {
    let mut u = vec![sol.basic.u0_sup_norm().attained];
    let mut l = vec![sol.basic.lambda0.abs()];
    for c in &sol.corrections {
        u.push(c.sup_abs_u.clone());
        l.push(c.lambda.abs());
    }
    fit_slopes(&u, &l, residuals).ok()
}

/// Shooting eigenvalue closest to `lambda_fd`.
pub fn oracle_check(spec: &ProblemSpec, lambda_fd: &Scalar) -> Result<OracleCheck> {
    let guess = lambda_fd.to_f64();
    let res = find_eigenvalue_near(spec, guess, 1e-6 * guess.abs().max(1.0))?;
    let difference = (&res.lambda - lambda_fd).abs();
    Ok(OracleCheck { passed: difference <= ORACLE_TOLERANCE, lambda: res.lambda, difference, steps: res.steps })
}

/// Runs every `n`, writes the selected artifacts into `out` and returns the report.
/// On failure the partial report is still written, with `failure` set.
pub fn run(config: &RunConfig, out: &Path) -> Result<Report> {
    set_precision_digits(config.precision);
    fs::create_dir_all(out)?;
    let started = SystemTime::now();
    let clock = Instant::now();
    let mut report =
        Report { precision: config.precision, rank: config.rank, epsilon: config.epsilon.clone(), eigenpairs: Vec::new(), failure: None };
    let mut plots = Vec::new();
    let mut per_n = Vec::new();
    let mut error = None;
    for &n in &config.n_list {
        let t = Instant::now();
        match solve_record(config, n) {
            Ok((record, sol)) => {
                if config.emit.contains(&Emit::Plot) {
                    plots.push((n, plot_csv(&sol)));
                }
                report.eigenpairs.push(record);
            }
            Err(e) => {
                report.failure = Some(format!("n = {n}: {e}"));
                error = Some(e);
                break;
            }
        }
        per_n.push((n, t.elapsed().as_secs_f64()));
    }

    let mut artifacts = Vec::new();
    let mut write = |name: String, body: &str| -> Result<()> {
        let path = out.join(name);
        fs::write(&path, body)?;
        artifacts.push(path);
        Ok(())
    };
    if config.emit.contains(&Emit::Table) {
        write("table.txt".into(), &render_table(&report))?;
    }
    if config.emit.contains(&Emit::Report) {
        write("report.json".into(), &report_json(&report)?)?;
    }
    for (n, csv) in &plots {
        write(format!("plot_n{n}.csv"), csv)?;
    }
    if config.emit.contains(&Emit::Analysis) {
        write("analysis.txt".into(), &render_analysis(&report))?;
    }
    if config.emit.contains(&Emit::Slopes) {
        write("slopes.txt".into(), &render_slopes(&report))?;
    }
    let meta = Metadata {
        version: env!("CARGO_PKG_VERSION"),
        started_unix: unix_seconds(started),
        finished_unix: unix_seconds(SystemTime::now()),
        elapsed_seconds: clock.elapsed().as_secs_f64(),
        per_n_seconds: per_n,
        failed: error.is_some(),
        artifacts,
    };
    let meta_json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(out.join("metadata.json"), meta_json + "\n")?;
    match error {
        Some(e) => Err(e),
        None => Ok(report),
    }
}

fn unix_seconds(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

pub fn report_json(report: &Report) -> Result<String> {
    serde_json::to_string_pretty(report).map(|s| s + "\n").map_err(|e| Error::Parse(e.to_string()))
}

/// Reads a report written by [`run`], restoring its precision first.
pub fn read_report(path: &Path) -> Result<Report> {
    parse_report(&fs::read_to_string(path)?)
}

pub fn parse_report(text: &str) -> Result<Report> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let precision = value
        .get("precision")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Parse("report lacks `precision`".into()))?;
    set_precision_digits(precision as u32);
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Significant digits used for eigenvalues in text output.
pub fn lambda_digits(precision: u32) -> usize {
    (precision.saturating_sub(5) as usize).clamp(1, 24)
}

fn short(x: &Scalar) -> String {
    if x.is_zero() {
        return "0".into();
    }
    format!("{:.1e}", x.to_f64())
}

/// Eigenvalue table: `n, m, λ, ‖u^{(m)}‖_∞, |λ^{(m)}|, r, Δ`.
pub fn render_table(report: &Report) -> String {
    let digits = lambda_digits(report.precision);
    let width = digits + 6;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>3} {:>width$} {:>10} {:>10} {:>10} {:>10}",
        "n", "m", "lambda", "|u^(m)|", "|lam^(m)|", "r", "Delta"
    );
    for e in &report.eigenpairs {
        let _ = writeln!(
            s,
            "{:>3} {:>3} {:>width$} {:>10} {:>10} {:>10} {:>10}",
            e.n,
            e.rank,
            e.lambda.to_fixed_string(digits),
            short(&e.last_correction_norm()),
            short(&e.last_correction_lambda()),
            short(&e.residual),
            short(&e.jump_defect.abs()),
        );
        if let Some(o) = &e.oracle {
            let _ = writeln!(
                s,
                "    oracle: lambda = {}  |diff| = {}  {}",
                o.lambda.to_fixed_string(16),
                short(&o.difference),
                if o.passed { "ok" } else { "MISMATCH" }
            );
        }
        for w in &e.warnings {
            let _ = writeln!(s, "    warning (order {}): {}", w.order, w.message);
        }
    }
    if let Some(f) = &report.failure {
        let _ = writeln!(s, "FAILED {f}");
    }
    s
}

/// Convergence constants per `n`.
pub fn render_analysis(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>8} {:>8} {:>8} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "n", "v0", "M", "c~", "|q|", "R", "r_n", "lam bound", "u bound"
    );
    for e in &report.eigenpairs {
        let a = &e.analysis;
        let opt = |x: &Option<Scalar>| x.as_ref().map_or_else(|| "-".to_string(), short);
        let _ = writeln!(
            s,
            "{:>3} {:>8.3} {:>8.3} {:>8.3} {:>10.4} {:>10} {:>10.4} {:>10} {:>10}",
            e.n,
            a.v0_bar.to_f64(),
            a.m_n.to_f64(),
            a.c_tilde.to_f64(),
            a.q_norm.to_f64(),
            format!("{:.2e}", a.radius.to_f64()),
            a.r_n.to_f64(),
            opt(&a.eigenvalue_bound),
            opt(&a.eigenfunction_bound),
        );
    }
    if report.eigenpairs.iter().any(|e| !e.analysis.converged) {
        let _ = writeln!(s, "r_n >= 1 for some n: a-priori bounds do not apply there");
    }
    if let Some(f) = &report.failure {
        let _ = writeln!(s, "FAILED {f}");
    }
    s
}

/// Least-squares slopes of `ln‖u^{(m)}‖`, `ln|λ^{(m)}|`, `ln r^m`.
pub fn render_slopes(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>3} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "n", "a_u", "b_u", "e_u", "a_lam", "b_lam", "e_lam", "a_r", "b_r", "e_r"
    );
    for e in &report.eigenpairs {
        match &e.slopes {
            Some(f) => {
                let _ = writeln!(
                    s,
                    "{:>3} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
                    e.n,
                    f.u.slope,
                    f.u.intercept,
                    f.u.deviation,
                    f.lambda.slope,
                    f.lambda.intercept,
                    f.lambda.deviation,
                    f.r.slope,
                    f.r.intercept,
                    f.r.deviation
                );
            }
            None => {
                let _ = writeln!(s, "{:>3} (a history contains zeros; no fit)", e.n);
            }
        }
    }
    if let Some(f) = &report.failure {
        let _ = writeln!(s, "FAILED {f}");
    }
    s
}

/// `x,u,uprime` at the grid nodes plus `0`, `α`, `1`.
pub fn plot_csv(sol: &FDSolution) -> String {
    let digits = precision_digits().saturating_sub(5).clamp(1, 24) as usize;
    let mut s = String::from("x,u,uprime\n");
    for (x, u, d) in sol.plot_points() {
        let _ = writeln!(s, "{},{},{}", x.to_sig_string(digits), u.to_sig_string(digits), d.to_sig_string(digits));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = r#"
[problem]
alpha = "1/2"
beta = 2
breakpoints = [0.1, 0.2, 0.3, 0.7]
nonlinearity = { 9 = 1 }

[[problem.q]]
kind = "inverse_sqrt"
center = 0.7

[[problem.q]]
kind = "inverse_sqrt"
center = "0.1"

[[problem.q]]
kind = "inverse_sqrt"
center = 0.3

[[problem.q]]
kind = "inverse_sqrt"
center = 0.4
stretch = 2

[run]
n = [1, 2]
rank = 3
"#;

    #[test]
    fn reference_config_matches_builtin() {
        let cfg = config_from_str(REFERENCE, &Overrides::default()).unwrap();
        let builtin = crate::problem::reference_example();
        assert_eq!(cfg.problem.alpha().exact(), Some((1, 2)));
        assert_eq!(cfg.problem.beta(), builtin.beta());
        assert_eq!(cfg.problem.breakpoints(), builtin.breakpoints());
        assert_eq!(cfg.problem.nonlinearity(), builtin.nonlinearity());
        assert_eq!(cfg.problem.q_l1_norm(), builtin.q_l1_norm());
        let x = Scalar::parse("0.5").unwrap();
        assert_eq!(cfg.problem.eval_potential(&x).unwrap(), builtin.eval_potential(&x).unwrap());
        assert_eq!(cfg.n_list, vec![1, 2]);
        assert_eq!(cfg.rank, 3);
        assert!(cfg.emit.contains(&Emit::Table) && cfg.emit.contains(&Emit::Report));
    }

    #[test]
    fn empty_problem_is_unperturbed() {
        let cfg = config_from_str("[problem]\nalpha = 0.25\n", &Overrides::default()).unwrap();
        assert!(cfg.problem.q_terms().is_empty() && cfg.problem.is_linear());
        assert!(cfg.problem.beta().is_zero());
        assert_eq!(cfg.problem.alpha().exact(), None);
    }

    #[test]
    fn validation_names_the_field() {
        let err = config_from_str("[problem]\nalpha = 1.5\n", &Overrides::default()).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "problem.alpha"), "{err}");
        let err = config_from_str("[problem]\nalpha = 0.5\nbeta = -1\n", &Overrides::default()).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "problem.beta"), "{err}");
        let err = config_from_str("[problem]\nalpha = 0.5\n[run]\nn = [2, 1]\n", &Overrides::default()).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "run.n"), "{err}");
        let bad_term = "[problem]\nalpha = 0.5\n[[problem.q]]\nkind = \"inverse_sqrt\"\ncenter = \"x\"\n";
        let err = config_from_str(bad_term, &Overrides::default()).unwrap_err();
        assert!(matches!(&err, Error::Validation { field, .. } if field == "problem.q[0].center"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = config_from_str("[problem]\nalpha = 0.5\ngamma = 1\n", &Overrides::default()).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::Parse(_)));
        assert!(msg.contains("gamma") && msg.contains("line 3"), "{msg}");
        let err = config_from_str("[problem]\nalpha = 0.5\n[[problem.q]]\nkind = \"inverse_sqrt\"\ncenter = 0.5\nwidth = 1\n", &Overrides::default())
            .unwrap_err();
        assert!(err.to_string().contains("width"), "{err}");
    }

    #[test]
    fn overrides_win() {
        let ov = Overrides { n_list: Some(vec![3]), rank: Some(2), k: Some(48), emit: vec![Emit::Plot], ..Overrides::default() };
        let cfg = config_from_str(REFERENCE, &ov).unwrap();
        assert_eq!(cfg.n_list, vec![3]);
        assert_eq!(cfg.rank, 2);
        assert_eq!(cfg.k, Some(48));
        assert_eq!(cfg.emit, [Emit::Plot].into_iter().collect());
    }

    #[test]
    fn lambda_digit_rule() {
        assert_eq!(lambda_digits(50), 24);
        assert_eq!(lambda_digits(25), 20);
    }
}
