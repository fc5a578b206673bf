//! A-priori convergence analysis: majorant sequences, the generating
//! function, the radius `R`, the rate `r_n` and the error bounds.

use serde::{Deserialize, Serialize};

use crate::adomian::{majorant_shifted, MajorantNonlinearity};
use crate::basic::BasicSolution;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::scalar::{tol_digits, Scalar};
use crate::solver::Correction;

/// Number of majorant coefficients used for the nonlinear envelope.
pub const ENVELOPE_TERMS: usize = 60;

/// Convergence constants for one eigenpair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub n: u32,
    pub v0_bar: Scalar,
    pub a_n: Scalar,
    pub b_n: Scalar,
    #[serde(rename = "M_n")]
    pub m_n: Scalar,
    pub c_tilde: Scalar,
    pub q_norm: Scalar,
    #[serde(rename = "R")]
    pub radius: Scalar,
    pub r_n: Scalar,
    pub converged: bool,
    pub linear: bool,
    pub rank: Option<usize>,
    #[serde(rename = "C_nm")]
    pub c_nm: Option<Scalar>,
    pub eigenvalue_bound: Option<Scalar>,
    pub eigenfunction_bound: Option<Scalar>,
    /// `R^j v̄_j`, `j = 0..`; replaces `α_j` in the nonlinear bounds.
    #[serde(skip)]
    pub envelope: Vec<Scalar>,
    #[serde(skip)]
    pub lambda0: Scalar,
}

/// `a(n) = (sqrt(1 + (1 + β/√λ)²) + 1)/√λ` and `b(n) = max{1, √λ/M, √λ√c̃/M}`.
pub fn constants_ab(basic: &BasicSolution) -> (Scalar, Scalar) {
    let y = &basic.y;
    let t = Scalar::one() + &basic.beta / y;
    let a = ((Scalar::one() + t.square()).sqrt() + 1) / y;
    let b = Scalar::one().max(y / &basic.m).max(y * basic.c_tilde.sqrt() / &basic.m);
    (a, b)
}

/// `max{1, c̃, √c̃ M/√λ}`.
fn v0_numerator(basic: &BasicSolution) -> Scalar {
    Scalar::one()
        .max(basic.c_tilde.clone())
        .max(basic.c_tilde.sqrt() * &basic.m / &basic.y)
}

/// `v̄0 = max{1, c̃, √c̃ M/√λ}/M`.
pub fn v0_bar(basic: &BasicSolution) -> Scalar {
    v0_numerator(basic) / &basic.m
}

fn w1(v0: &Scalar) -> Scalar {
    Scalar::one() + v0 * 2 + (v0 * (Scalar::one() + v0)).sqrt() * 2
}

/// `R = (1 + 2v̄0 - 2 sqrt(v̄0(1 + v̄0))) / ((1 + v̄0)‖q‖)`.
pub fn radius_linear(v0: &Scalar, q_norm: &Scalar) -> Result<Scalar> {
    if q_norm.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let num = Scalar::one() + v0 * 2 - (v0 * (Scalar::one() + v0)).sqrt() * 2;
    Ok(num / ((Scalar::one() + v0) * q_norm))
}

/// The inverse map `z(f)` of the generating-function equation and its derivative.
pub fn inverse_map(v0: &Scalar, q_norm: &Scalar, nl: &MajorantNonlinearity, f: &Scalar) -> (Scalar, Scalar) {
    let one_v0 = Scalar::one() + v0;
    let num = f - f.square();
    let dnum = Scalar::one() - f * 2;
    let den = &one_v0 * (q_norm * (f + v0) + nl.eval(f) + nl.slope_at_zero() * v0 - nl.value_at_zero());
    let dden = &one_v0 * (q_norm + nl.derivative(f));
    let z = &num / &den;
    let dz = (dnum * &den - num * dden) / den.square();
    (z, dz)
}

/// `R = max_{0<f<1} z(f)`: golden-section search, then bisection on `z'`.
pub fn radius_nonlinear(v0: &Scalar, q_norm: &Scalar, nl: &MajorantNonlinearity) -> Result<Scalar> {
    if q_norm.is_zero() && nl.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let z = |f: &Scalar| inverse_map(v0, q_norm, nl, f);
    let inv_phi = (Scalar::from_i64(5).sqrt() - 1) / 2;
    let mut a = Scalar::zero();
    let mut b = Scalar::one();
    let mut x1 = &b - (&b - &a) * &inv_phi;
    let mut x2 = &a + (&b - &a) * &inv_phi;
    let (mut z1, mut z2) = (z(&x1).0, z(&x2).0);
    while &b - &a > 1e-6 {
        if z1 < z2 {
            a = x1;
            x1 = x2;
            z1 = z2;
            x2 = &a + (&b - &a) * &inv_phi;
            z2 = z(&x2).0;
        } else {
            b = x2;
            x2 = x1;
            z2 = z1;
            x1 = &b - (&b - &a) * &inv_phi;
            z1 = z(&x1).0;
        }
    }
    // widen slightly so the stationary point is bracketed
    let mut lo = (&a - 1e-6).max(Scalar::pow10(-30));
    let mut hi = (&b + 1e-6).min(Scalar::one() - Scalar::pow10(-30));
    let tol = tol_digits(3);
    for _ in 0..400 {
        let mid = (&lo + &hi) / 2;
        if z(&mid).1 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if &hi - &lo < tol {
            break;
        }
    }
    Ok(z(&((lo + hi) / 2)).0)
}

/// `r_n = (1 + sqrt(1 + (1 + β/√λ)²)) / (√λ R)`.
pub fn rate_rn(basic: &BasicSolution, radius: &Scalar) -> Scalar {
    let y = &basic.y;
    let t = Scalar::one() + &basic.beta / y;
    ((Scalar::one() + t.square()).sqrt() + 1) / (y * radius)
}

/// `α_1 = 1/4`, `α_j = (2j-3)!! / (2 (2j)!!)` for `j ≥ 2`.
pub fn alpha_coeff(j: usize) -> Scalar {
    assert!(j >= 1, "α_j is defined for j ≥ 1");
    if j == 1 {
        return Scalar::from_ratio(1, 4);
    }
    // (2j-3)!!/(2j)!! = Π_{i=1}^{j-1} (2i-1)/(2i) · 1/(2j)
    let mut r = Scalar::one();
    for i in 1..j {
        r = r * (2 * i as i32 - 1) / (2 * i as i32);
    }
    r / (2 * j as i32) / 2
}

/// `v̄_j` and `μ̄_j = v̄_j/(1 + v̄0)` for `j = 0..=count` (index 0 holds `v̄0`).
pub fn majorant_sequence(
    v0: &Scalar,
    q_norm: &Scalar,
    nl: &MajorantNonlinearity,
    count: usize,
) -> (Vec<Scalar>, Vec<Scalar>) {
    let one_v0 = Scalar::one() + v0;
    let mut v = vec![v0.clone()];
    let mut acc = nl.accumulator();
    let mut a_last = acc.push(&Scalar::zero());
    for j in 1..=count {
        let next = if j == 1 {
            &one_v0 * (q_norm * v0 + nl.slope_at_zero() * v0)
        } else {
            let conv: Scalar = (1..j).map(|p| &v[j - p] * &v[p]).sum();
            conv + &one_v0 * (q_norm * &v[j - 1] + &a_last)
        };
        a_last = acc.push(&next);
        v.push(next);
    }
    let mu = v.iter().map(|x| x / &one_v0).collect();
    (v, mu)
}

/// Closed-form generating function `f(z) = (1 - w2 z - sqrt(D))/2` of the linear case.
pub fn generating_function(v0: &Scalar, q_norm: &Scalar, z: &Scalar) -> Scalar {
    let w1 = w1(v0);
    let w2 = (Scalar::one() + v0) * q_norm;
    let d = (&w1 - &w2 * z) * (w1.recip() - &w2 * z);
    (Scalar::one() - &w2 * z - d.sqrt()) / 2
}

/// Taylor coefficients `f_0..f_count` of [`generating_function`] by series
/// square root of `D(z) = 1 - w2(w1 + 1/w1) z + w2² z²`.
pub fn generating_function_series(v0: &Scalar, q_norm: &Scalar, count: usize) -> Vec<Scalar> {
    let w1 = w1(v0);
    let w2 = (Scalar::one() + v0) * q_norm;
    let mut d = vec![Scalar::zero(); count + 1];
    d[0] = Scalar::one();
    if count >= 1 {
        d[1] = -(&w2 * (&w1 + w1.recip()));
    }
    if count >= 2 {
        d[2] = w2.square();
    }
    // s² = d with s_0 = 1
    let mut s = vec![Scalar::zero(); count + 1];
    s[0] = Scalar::one();
    for k in 1..=count {
        let cross: Scalar = (1..k).map(|i| &s[i] * &s[k - i]).sum();
        s[k] = (&d[k] - cross) / 2;
    }
    let mut f: Vec<Scalar> = s.iter().map(|x| -x / 2).collect();
    f[0] += Scalar::from_ratio(1, 2);
    if count >= 1 {
        f[1] -= &w2 / 2;
    }
    f
}

/// Builds the report for `basic`; bounds are filled in when `rank` is given and `r_n < 1`.
pub fn convergence_report(spec: &ProblemSpec, basic: &BasicSolution, rank: Option<usize>) -> Result<ConvergenceReport> {
    let v0 = v0_bar(basic);
    let (a_n, b_n) = constants_ab(basic);
    let q_norm = spec.q_l1_norm();
    let linear = spec.is_linear();
    let shift = basic.u0_sup_norm().attained;
    let nl = majorant_shifted(spec.nonlinearity(), &shift);
    let radius = if linear && q_norm.is_zero() {
        // nothing perturbs the basic problem: every correction vanishes
        Scalar::infinity()
    } else if linear {
        radius_linear(&v0, &q_norm)?
    } else {
        radius_nonlinear(&v0, &q_norm, &nl)?
    };
    let r_n = rate_rn(basic, &radius);
    let envelope = if linear {
        Vec::new()
    } else {
        let (v, _) = majorant_sequence(&v0, &q_norm, &nl, ENVELOPE_TERMS);
        let mut rj = Scalar::one();
        v.iter()
            .map(|x| {
                let e = x * &rj;
                rj = &rj * &radius;
                e
            })
            .collect()
    };
    let mut report = ConvergenceReport {
        n: basic.n,
        v0_bar: v0,
        a_n,
        b_n,
        m_n: basic.m.clone(),
        c_tilde: basic.c_tilde.clone(),
        q_norm,
        radius,
        converged: r_n < 1.0,
        r_n,
        linear,
        rank,
        c_nm: None,
        eigenvalue_bound: None,
        eigenfunction_bound: None,
        envelope,
        lambda0: basic.lambda0.clone(),
    };
    if let Some(m) = rank {
        if let Ok(b) = error_bounds(&report, m) {
            report.c_nm = Some(b.c_nm);
            report.eigenvalue_bound = Some(b.eigenvalue);
            report.eigenfunction_bound = Some(b.eigenfunction);
        }
    }
    Ok(report)
}

/// A-priori bounds for rank `m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorBounds {
    pub c_nm: Scalar,
    pub eigenvalue: Scalar,
    pub eigenfunction: Scalar,
}

/// Coefficient bound at order `j`: `α_j` (linear) or `max_{i≥j} R^i v̄_i` (nonlinear).
pub fn coefficient_bound(report: &ConvergenceReport, j: usize) -> Scalar {
    if report.linear {
        return alpha_coeff(j);
    }
    report.envelope.iter().skip(j).fold(Scalar::zero(), |acc, x| acc.max(x.clone()))
}

/// `C_{n,m} = α_{m+1} M/(1 - r_n)` and the eigenvalue/eigenfunction bounds.
pub fn error_bounds(report: &ConvergenceReport, m: usize) -> Result<ErrorBounds> {
    if !report.converged {
        return Err(Error::NotConvergent(format!(
            "r_{} = {} ≥ 1",
            report.n,
            report.r_n.to_sig_string(4)
        )));
    }
    let y = report.lambda0.sqrt();
    let r = &report.r_n;
    let c_nm = coefficient_bound(report, m + 1) * &report.m_n / (Scalar::one() - r);
    let min_factor = report.m_n.recip().min(y.recip()).min((&y * report.c_tilde.sqrt()).recip());
    let eigenfunction = &c_nm * min_factor * r.powi(m as i32 + 1);
    let vmax = Scalar::one()
        .max(report.c_tilde.clone())
        .max(report.c_tilde.sqrt() * &report.m_n / &y);
    let eigenvalue = &c_nm * r.powi(m as i32) / ((&report.m_n + vmax) * &report.radius);
    Ok(ErrorBounds { c_nm, eigenvalue, eigenfunction })
}

/// One order of the majorant check: scaled correction sizes next to `v̄_j`, `μ̄_j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DominationRow {
    pub order: usize,
    /// `a^{-j} b ‖u^{(j)}‖_∞`
    pub scaled_u: Scalar,
    pub v_bar: Scalar,
    /// `a^{-(j-1)} |λ^{(j)}|`
    pub scaled_lambda: Scalar,
    pub mu_bar: Scalar,
}

impl DominationRow {
    pub fn holds(&self) -> bool {
        self.scaled_u <= self.v_bar && self.scaled_lambda <= self.mu_bar
    }
}

/// Compares computed corrections with the majorant sequence, order by order.
pub fn majorant_domination(spec: &ProblemSpec, basic: &BasicSolution, corrections: &[Correction]) -> Vec<DominationRow> {
    let v0 = v0_bar(basic);
    let (a, b) = constants_ab(basic);
    let nl = majorant_shifted(spec.nonlinearity(), &basic.u0_sup_norm().attained);
    let (v, mu) = majorant_sequence(&v0, &spec.q_l1_norm(), &nl, corrections.len());
    corrections
        .iter()
        .map(|c| {
            let j = c.order;
            DominationRow {
                order: j,
                scaled_u: &b * &c.sup_abs_u / a.powi(j as i32),
                v_bar: v[j].clone(),
                scaled_lambda: c.lambda.abs() / a.powi(j as i32 - 1),
                mu_bar: mu[j].clone(),
            }
        })
        .collect()
}

/// Least-squares line through `(m, y_m)` with max deviation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub deviation: f64,
}

/// Fits of `ln‖u^{(m)}‖`, `ln|λ^{(m)}|` and `ln r^m` against `m`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SlopeFit {
    pub u: LineFit,
    pub lambda: LineFit,
    pub r: LineFit,
}

/// Ordinary least squares on `(i, ln values[i])`.
pub fn fit_line(values: &[Scalar]) -> Result<LineFit> {
    if values.len() < 2 {
        return Err(Error::validation("history", "need at least two samples"));
    }
    if values.iter().any(|v| *v <= 0.0) {
        return Err(Error::validation("history", "samples must be positive"));
    }
    let ys: Vec<f64> = values.iter().map(|v| v.ln().to_f64()).collect();
    let n = ys.len() as f64;
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let deviation = ys
        .iter()
        .enumerate()
        .map(|(i, y)| (slope * i as f64 + intercept - y).abs())
        .fold(0.0, f64::max);
    Ok(LineFit { slope, intercept, deviation })
}

/// Slope fits of the three histories (each indexed by `m = 0..`).
pub fn fit_slopes(u_hist: &[Scalar], lambda_hist: &[Scalar], r_hist: &[Scalar]) -> Result<SlopeFit> {
    Ok(SlopeFit { u: fit_line(u_hist)?, lambda: fit_line(lambda_hist)?, r: fit_line(r_hist)? })
}
