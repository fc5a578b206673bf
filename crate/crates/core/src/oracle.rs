//! Double-precision shooting solver used to cross-check the main pipeline.
//!
//! Integrates `u'' = q u - λ u + N(u)`, `u(0) = 0`, `u'(0) = 1` with an
//! adaptive Dormand–Prince 5(4) pair, applies `u'(α+0) = u'(α-0) + β u(α)`,
//! and bridges a tiny gap around every singular abscissa of `q` in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::scalar::Scalar;

/// Half-width of the gap bridged around a singular abscissa.
pub const SINGULAR_OFFSET: f64 = 1e-12;

/// Integrator tolerances.
#[derive(Clone, Copy, Debug)]
pub struct ShootingOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Stopping width of the eigenvalue search, relative to `λ`.
    pub lambda_tol: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        ShootingOptions { rtol: 1e-12, atol: 1e-14, lambda_tol: 1e-13 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShootingResult {
    pub lambda: Scalar,
    pub u_at_one: f64,
    pub steps: usize,
    /// Width of the final bracket.
    pub error_estimate: f64,
}

struct Problem<'a> {
    spec: &'a ProblemSpec,
    lambda: f64,
    alpha: f64,
    beta: f64,
    singular: Vec<f64>,
}

impl<'a> Problem<'a> {
    fn new(spec: &'a ProblemSpec, lambda: f64) -> Self {
        Problem {
            spec,
            lambda,
            alpha: spec.alpha().value().to_f64(),
            beta: spec.beta().to_f64(),
            singular: spec.singular_points_f64(),
        }
    }

    fn rhs(&self, x: f64, s: [f64; 2]) -> [f64; 2] {
        let q = self.spec.eval_potential_f64(x);
        [s[1], (q - self.lambda) * s[0] + self.spec.eval_nonlinearity_f64(s[0])]
    }

    fn is_singular(&self, x: f64) -> bool {
        self.singular.iter().any(|s| (s - x).abs() < 1e-15)
    }

    /// Closed-form step across `[a, b]` where `q` is unbounded.
    fn bridge(&self, a: f64, b: f64, s: [f64; 2]) -> [f64; 2] {
        let len = b - a;
        let qi = self.spec.potential_integral_f64(a, b);
        let du = s[0] * qi + (-self.lambda * s[0] + self.spec.eval_nonlinearity_f64(s[0])) * len;
        [s[0] + s[1] * len, s[1] + du]
    }

    fn integrate(&self, a: f64, b: f64, s: [f64; 2], opts: &ShootingOptions, steps: &mut usize) -> Result<[f64; 2]> {
        let mut x = a;
        let mut y = s;
        let mut h = ((b - a) / 16.0).max(1e-6_f64.min(b - a));
        let min_h = 1e-15 * (1.0 + b.abs());
        while x < b {
            if x + h > b {
                h = b - x;
            }
            let (next, err) = dopri_step(self, x, y, h);
            let scale0 = opts.atol + opts.rtol * y[0].abs().max(next[0].abs());
            let scale1 = opts.atol + opts.rtol * y[1].abs().max(next[1].abs());
            let e = ((err[0] / scale0).powi(2) + (err[1] / scale1).powi(2)).sqrt() / std::f64::consts::SQRT_2;
            if e <= 1.0 || h <= min_h {
                if h <= min_h && e > 1.0 && b - x > min_h * 2.0 {
                    return Err(Error::StepUnderflow(x));
                }
                x += h;
                y = next;
                *steps += 1;
            }
            let factor = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h *= factor;
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::StepUnderflow(x));
            }
        }
        Ok(y)
    }

    /// `u` at each `stops` point (sorted, in `(0, 1]`), then `(u(1), u'(1))`.
    fn run(&self, stops: &[f64], opts: &ShootingOptions) -> Result<(Vec<f64>, [f64; 2], usize)> {
        let mut edges = vec![0.0, self.alpha, 1.0];
        edges.extend(self.singular.iter().copied().filter(|s| (0.0..=1.0).contains(s)));
        edges.extend(stops.iter().copied());
        edges.sort_by(|a, b| a.partial_cmp(b).expect("finite edges"));
        edges.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let mut state = [0.0, 1.0];
        let mut steps = 0;
        let mut recorded = Vec::with_capacity(stops.len());
        let mut x = 0.0;
        if self.is_singular(0.0) {
            state = self.bridge(0.0, SINGULAR_OFFSET, state);
            x = SINGULAR_OFFSET;
        }
        for &edge in &edges[1..] {
            let end = if self.is_singular(edge) { edge - SINGULAR_OFFSET } else { edge };
            if end > x {
                state = self.integrate(x, end, state, opts, &mut steps)?;
                x = end;
            }
            if self.is_singular(edge) {
                let stop = if edge >= 1.0 { 1.0 } else { edge + SINGULAR_OFFSET };
                state = self.bridge(x, stop, state);
                x = stop;
            }
            if (edge - self.alpha).abs() < 1e-15 {
                state[1] += self.beta * state[0];
            }
            if stops.iter().any(|s| (s - edge).abs() < 1e-15) {
                recorded.push(state[0]);
            }
        }
        Ok((recorded, state, steps))
    }
}

fn dopri_step(p: &Problem, x: f64, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut k = [[0.0f64; 2]; 7];
    for i in 0..7 {
        let mut yi = y;
        for (j, kj) in k.iter().enumerate().take(i) {
            yi[0] += h * A[i][j] * kj[0];
            yi[1] += h * A[i][j] * kj[1];
        }
        k[i] = p.rhs(x + C[i] * h, yi);
    }
    let mut y5 = y;
    let mut err = [0.0; 2];
    for i in 0..7 {
        for d in 0..2 {
            y5[d] += h * B5[i] * k[i][d];
            err[d] += h * (B5[i] - B4[i]) * k[i][d];
        }
    }
    (y5, err)
}

/// `u(1; λ)`.
pub fn shoot(spec: &ProblemSpec, lambda: f64) -> Result<f64> {
    shoot_with(spec, lambda, &ShootingOptions::default()).map(|(u, _)| u)
}

/// `u(1; λ)` and the number of accepted steps.
pub fn shoot_with(spec: &ProblemSpec, lambda: f64, opts: &ShootingOptions) -> Result<(f64, usize)> {
    let (_, state, steps) = Problem::new(spec, lambda).run(&[], opts)?;
    Ok((state[0], steps))
}

/// `u(x; λ)` at sorted points in `(0, 1]`.
pub fn profile(spec: &ProblemSpec, lambda: f64, points: &[f64]) -> Result<Vec<f64>> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
    let (vals, _, _) = Problem::new(spec, lambda).run(&sorted, &ShootingOptions::default())?;
    Ok(vals)
}

/// Eigenvalue in `(lo, hi)` by bisection with secant (Illinois) steps.
pub fn find_eigenvalue(spec: &ProblemSpec, lo: f64, hi: f64) -> Result<ShootingResult> {
    find_eigenvalue_with(spec, lo, hi, &ShootingOptions::default())
}

pub fn find_eigenvalue_with(spec: &ProblemSpec, lo: f64, hi: f64, opts: &ShootingOptions) -> Result<ShootingResult> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut steps) = shoot_with(spec, a, opts)?;
    let (mut fb, s) = shoot_with(spec, b, opts)?;
    steps += s;
    if fa == 0.0 {
        return Ok(ShootingResult { lambda: Scalar::from_f64(a), u_at_one: 0.0, steps, error_estimate: 0.0 });
    }
    if fa * fb > 0.0 {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut x = a;
    let mut fx = fa;
    for i in 0..200 {
        let (left, right) = (a.min(b), a.max(b));
        x = if i % 4 == 3 { 0.5 * (a + b) } else { (a * fb - b * fa) / (fb - fa) };
        if !(x > left && x < right) {
            x = 0.5 * (a + b);
        }
        let (v, s) = shoot_with(spec, x, opts)?;
        steps += s;
        fx = v;
        if fx == 0.0 {
            a = x;
            b = x;
            break;
        }
        if fx * fb < 0.0 {
            a = b;
            fa = fb;
        } else {
            fa *= 0.5;
        }
        b = x;
        fb = fx;
        if (b - a).abs() < opts.lambda_tol * x.abs().max(1.0) {
            break;
        }
    }
    Ok(ShootingResult { lambda: Scalar::from_f64(x), u_at_one: fx, steps, error_estimate: (b - a).abs() })
}

/// Expands a bracket around `guess` until `u(1; λ)` changes sign, then refines.
pub fn find_eigenvalue_near(spec: &ProblemSpec, guess: f64, width: f64) -> Result<ShootingResult> {
    let mut w = width;
    for _ in 0..20 {
        let lo = guess - w;
        let hi = guess + w;
        let flo = shoot(spec, lo)?;
        let fhi = shoot(spec, hi)?;
        if flo * fhi < 0.0 {
            return find_eigenvalue(spec, lo, hi);
        }
        w *= 2.0;
    }
    Err(Error::NoSignChange { lo: guess - w, hi: guess + w })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basic::solve_basic;
    use crate::problem::{reference_example, Alpha};
    use std::f64::consts::PI;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn free(alpha: Alpha, beta: &str) -> ProblemSpec {
        ProblemSpec::unperturbed(alpha, s(beta)).unwrap()
    }

    #[test]
    fn free_problem_values() {
        let spec = free(Alpha::rational(1, 2).unwrap(), "0");
        assert!(shoot(&spec, PI * PI).unwrap().abs() < 1e-10);
        let lam = PI * PI / 2.0;
        let want = lam.sqrt().sin() / lam.sqrt();
        assert!((shoot(&spec, lam).unwrap() - want).abs() < 1e-10);
        let r = find_eigenvalue(&spec, 5.0, 15.0).unwrap();
        assert!((r.lambda.to_f64() - PI * PI).abs() < 1e-8);
        for n in 1..=5 {
            let exact = (PI * n as f64).powi(2);
            let r = find_eigenvalue_near(&spec, exact + 0.3, 1.0).unwrap();
            assert!((r.lambda.to_f64() - exact).abs() < 1e-8 * exact.max(1.0), "n={n}");
        }
        assert!(matches!(find_eigenvalue(&spec, 1.0, 2.0), Err(Error::NoSignChange { .. })));
    }

    #[test]
    fn point_interaction_matches_basic() {
        let spec = free(Alpha::rational(1, 2).unwrap(), "2");
        let b = solve_basic(&spec, 1).unwrap();
        assert!(shoot(&spec, b.lambda0.to_f64()).unwrap().abs() < 1e-8);
        let pts: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
        let got = profile(&spec, b.lambda0.to_f64(), &pts).unwrap();
        for (x, u) in pts.iter().zip(got) {
            let exact = b.eval_u0(&Scalar::from_f64(*x)).to_f64();
            assert!((u - exact).abs() < 1e-8, "x={x}: {u} vs {exact}");
        }
    }

    #[test]
    fn reference_problem_first_eigenvalue() {
        let spec = reference_example();
        let r = find_eigenvalue(&spec, 20.0, 30.0).unwrap();
        assert!((r.lambda.to_f64() - 23.437363200234028).abs() < 1e-6, "{}", r.lambda);
        let loose = ShootingOptions { rtol: 2e-11, atol: 2e-13, ..ShootingOptions::default() };
        let r2 = find_eigenvalue_with(&spec, 20.0, 30.0, &loose).unwrap();
        assert!((r.lambda.to_f64() - r2.lambda.to_f64()).abs() < 1e-7);
    }
}
