//! The unperturbed problem `u'' + λu = 0` with `u(0) = u(1) = 0`, `u'(0) = 1`
//! and the point interaction `u'(α+0) - u'(α-0) = β u(α)`.
//!
//! Its eigenvalues are the squares of the roots of
//! `g(y) = y sin y + β sin(yα) sin(y(1-α))`, one in each `[πn, π(n+1))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::scalar::{precision_digits, tol_digits, Scalar};

/// Solution of the unperturbed problem for one index `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasicSolution {
    pub n: u32,
    pub lambda0: Scalar,
    /// `sqrt(lambda0)`
    pub y: Scalar,
    pub c0: Scalar,
    /// `λ ∫ u0²`
    #[serde(rename = "M")]
    pub m: Scalar,
    /// `λ c0²`
    pub c_tilde: Scalar,
    pub resonant: bool,
    pub alpha: Scalar,
    pub beta: Scalar,
}

/// `y sin y + β sin(yα) sin(y(1-α))`.
pub fn characteristic(y: &Scalar, alpha: &Scalar, beta: &Scalar) -> Scalar {
    let one_minus = Scalar::one() - alpha;
    y * y.sin() + beta * (y * alpha).sin() * (y * &one_minus).sin()
}

/// `dg/dy`.
pub fn characteristic_derivative(y: &Scalar, alpha: &Scalar, beta: &Scalar) -> Scalar {
    let one_minus = Scalar::one() - alpha;
    let (sa, ca) = (y * alpha).sin_cos();
    let (sb, cb) = (y * &one_minus).sin_cos();
    let (s, c) = y.sin_cos();
    s + y * c + beta * (alpha * ca * &sb - &one_minus * sa * cb)
}

/// `f(y) = sin(yα) sin(y(1-α)) / sin y`, increasing on every `(πk, π(k+1))`.
pub fn monotone_map(y: &Scalar, alpha: &Scalar) -> Scalar {
    let one_minus = Scalar::one() - alpha;
    (y * alpha).sin() * (y * &one_minus).sin() / y.sin()
}

/// `f'(y)` for [`monotone_map`].
pub fn monotone_map_derivative(y: &Scalar, alpha: &Scalar) -> Scalar {
    let one_minus = Scalar::one() - alpha;
    let (sa, ca) = (y * alpha).sin_cos();
    let (sb, cb) = (y * &one_minus).sin_cos();
    let (s, c) = y.sin_cos();
    let g = &sa * &sb;
    let dg = alpha * ca * &sb + &one_minus * &sa * cb;
    (dg * &s - g * c) / s.square()
}

/// Solves the unperturbed problem for eigenpair `n ≥ 1`.
pub fn solve_basic(spec: &ProblemSpec, n: u32) -> Result<BasicSolution> {
    if n == 0 {
        return Err(Error::validation("n", "eigenpair index must be at least 1"));
    }
    let alpha = spec.alpha().value().clone();
    let beta = spec.beta().clone();
    let pi_n = Scalar::pi() * n as i32;
    let resonant = spec.alpha().is_resonant(n);
    let y = if beta.is_zero() || resonant { pi_n } else { find_root(n, &alpha, &beta)? };
    Ok(assemble(n, y, alpha, beta, resonant))
}

/// Fills in `c0`, `M` and `c̃` for a known root `y`.
fn assemble(n: u32, y: Scalar, alpha: Scalar, beta: Scalar, resonant: bool) -> BasicSolution {
    let lambda0 = y.square();
    let one_minus = Scalar::one() - &alpha;
    let sin_a = (&y * &alpha).sin();
    let sin_b = (&y * &one_minus).sin();
    let threshold = Scalar::pow10(-(precision_digits() as i32) / 2);
    let c0 = if sin_b.abs() < threshold { -y.cos() / &y } else { &sin_a / (&y * &sin_b) };
    let c_tilde = &lambda0 * c0.square();
    let sin2 = sin_a.square();
    let bracket = &beta * (&y * &alpha * 2).sin() / &y + beta.square() * &sin2 / &lambda0;
    let m = (Scalar::one() + bracket * &one_minus + &beta * &sin2 / &lambda0) / 2;
    BasicSolution { n, lambda0, y, c0, m, c_tilde, resonant, alpha, beta }
}

/// Unique root of `g` in `(πn, π(n+1))` for a non-resonant `α` and `β > 0`.
fn find_root(n: u32, alpha: &Scalar, beta: &Scalar) -> Result<Scalar> {
    let pi = Scalar::pi();
    let lo_edge = &pi * n as i32;
    let hi_edge = &pi * (n as i32 + 1);
    let g = |y: &Scalar| characteristic(y, alpha, beta);
    let mut margin = &pi * 1e-6;
    let mut bracket = None;
    'outer: for _ in 0..4 {
        let lo = &lo_edge + &margin;
        let hi = &hi_edge - &margin;
        let mut cells = 64;
        while cells <= 1 << 14 {
            let step = (&hi - &lo) / cells;
            let mut a = lo.clone();
            let mut ga = g(&a);
            for i in 1..=cells {
                let b = if i == cells { hi.clone() } else { &lo + &step * i };
                let gb = g(&b);
                if ga.is_zero() {
                    bracket = Some((a.clone(), a.clone()));
                    break 'outer;
                }
                if ga.is_sign_negative() != gb.is_sign_negative() || gb.is_zero() {
                    bracket = Some((a, b));
                    break 'outer;
                }
                a = b;
                ga = gb;
            }
            cells *= 4;
        }
        margin *= Scalar::pow10(-6);
    }
    let (mut a, mut b) = bracket.ok_or_else(|| Error::BracketFailure {
        n,
        lo: lo_edge.to_sig_string(12),
        hi: hi_edge.to_sig_string(12),
    })?;
    if a == b {
        return Ok(a);
    }
    let tol = tol_digits(2) * &hi_edge;
    let mut ga = g(&a);
    let mut y = (&a + &b) / 2;
    for _ in 0..400 {
        let gy = g(&y);
        if gy.is_zero() {
            return Ok(y);
        }
        if gy.is_sign_negative() == ga.is_sign_negative() {
            a = y.clone();
            ga = gy.clone();
        } else {
            b = y.clone();
        }
        let dg = characteristic_derivative(&y, alpha, beta);
        let newton = &y - &gy / &dg;
        let next = if dg.is_zero() || newton <= a || newton >= b { (&a + &b) / 2 } else { newton };
        let step = (&next - &y).abs();
        y = next;
        if step < tol || (&b - &a).abs() < tol {
            break;
        }
    }
    Ok(y)
}

impl BasicSolution {
    /// `u0(x)`.
    pub fn eval_u0(&self, x: &Scalar) -> Scalar {
        if *x <= self.alpha {
            (&self.y * x).sin() / &self.y
        } else {
            &self.c0 * (&self.y * (Scalar::one() - x)).sin()
        }
    }

    /// `u0'(x)`; at `x = α` the left derivative.
    pub fn eval_u0_prime(&self, x: &Scalar) -> Scalar {
        if *x <= self.alpha {
            (&self.y * x).cos()
        } else {
            -(&self.c0 * &self.y) * (&self.y * (Scalar::one() - x)).cos()
        }
    }

    /// `u0'(α+0)`.
    pub fn u0_prime_right_of_alpha(&self) -> Scalar {
        -(&self.c0 * &self.y) * (&self.y * (Scalar::one() - &self.alpha)).cos()
    }

    /// `c̃` by the expanded form `1 + (2β/y) cos(yα) sin(yα) + β² sin²(yα)/λ`.
    pub fn c_tilde_expanded(&self) -> Scalar {
        let (s, c) = (&self.y * &self.alpha).sin_cos();
        Scalar::one() + &self.beta * 2 * c * &s / &self.y + self.beta.square() * s.square() / &self.lambda0
    }

    /// `‖u0‖_∞`: the a-priori bound `max{1, √c̃}/√λ` and the attained maximum.
    pub fn u0_sup_norm(&self) -> SupNorm {
        let bound = Scalar::one().max(self.c_tilde.sqrt()) / &self.y;
        let half_pi = Scalar::pi() / 2;
        let left_arg = &self.y * &self.alpha;
        let left = if left_arg >= half_pi { self.y.recip() } else { left_arg.sin() / &self.y };
        let right_arg = &self.y * (Scalar::one() - &self.alpha);
        let right = if right_arg >= half_pi { self.c0.abs() } else { (&self.c0 * right_arg.sin()).abs() };
        SupNorm { bound, attained: left.max(right) }
    }
}

/// Closed-form bound and attained value of `‖u0‖_∞`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupNorm {
    pub bound: Scalar,
    pub attained: Scalar,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Alpha;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn spec(alpha: Alpha, beta: &str) -> ProblemSpec {
        ProblemSpec::unperturbed(alpha, s(beta)).unwrap()
    }

    #[test]
    fn characteristic_values() {
        let half = s("0.5");
        assert!(characteristic(&Scalar::pi(), &half, &s("0")).abs() < tol_digits(5));
        assert!(characteristic(&(Scalar::pi() * 2), &half, &s("2")).abs() < tol_digits(5));
        // mpmath, 50 digits
        let v = characteristic(&s("4"), &s("1/3"), &s("15"));
        assert!(v.approx_eq(&s("3.6393989750177964269070532942203250920724399797258"), &tol_digits(6)));
    }

    #[test]
    fn resonant_and_free_cases() {
        let b = solve_basic(&spec(Alpha::rational(1, 2).unwrap(), "2"), 2).unwrap();
        assert!(b.resonant);
        assert_eq!(b.lambda0, (Scalar::pi() * 2).square());
        assert!(b.c0.approx_eq(&(-(Scalar::pi() * 2).recip()), &tol_digits(5)));

        let b = solve_basic(&spec(Alpha::rational(1, 2).unwrap(), "0"), 1).unwrap();
        assert_eq!(b.lambda0, Scalar::pi().square());
        assert_eq!(b.m, s("0.5"));
        assert!(b.c_tilde.approx_eq(&Scalar::one(), &tol_digits(5)));
        assert!(b.eval_u0(&s("0.5")).approx_eq(&Scalar::pi().recip(), &tol_digits(5)));
        assert!(b.u0_sup_norm().bound.approx_eq(&Scalar::pi().recip(), &tol_digits(5)));
        let b3 = solve_basic(&spec(Alpha::rational(1, 2).unwrap(), "0"), 3).unwrap();
        assert!(b3.u0_sup_norm().bound.approx_eq(&(Scalar::pi() * 3).recip(), &tol_digits(5)));
    }

    #[test]
    fn nonresonant_root_matches_reference() {
        let b = solve_basic(&spec(Alpha::rational(1, 2).unwrap(), "2"), 1).unwrap();
        assert!(!b.resonant);
        let want = s("13.492357146504842251367734066810906371466098319244");
        assert!(b.lambda0.approx_eq(&want, &tol_digits(8)), "{}", b.lambda0);
        assert!(characteristic(&b.y, &b.alpha, &b.beta).abs() < tol_digits(10));
        assert!(b.c_tilde.approx_eq(&b.c_tilde_expanded(), &tol_digits(10)));
        let odd = [
            (3, "92.769348921422847515"),
            (5, "250.71889284712158764"),
            (7, "487.59969227761628297"),
            (9, "803.43132365927257416"),
        ];
        for (n, v) in odd {
            let b = solve_basic(&spec(Alpha::rational(1, 2).unwrap(), "2"), n).unwrap();
            assert!(b.lambda0.approx_eq(&s(v), &s("1e-15")), "n={n}: {}", b.lambda0);
        }
    }

    #[test]
    fn boundary_values_and_continuity() {
        for (a, beta, n) in [("0.3", "5", 2u32), ("0.77", "15", 4), ("0.5", "2", 1)] {
            let b = solve_basic(&spec(Alpha::new(s(a)), beta), n).unwrap();
            assert!(b.eval_u0(&Scalar::zero()).is_zero());
            assert!(b.eval_u0(&Scalar::one()).abs() < tol_digits(8));
            let left = (&b.y * &b.alpha).sin() / &b.y;
            let right = &b.c0 * (&b.y * (Scalar::one() - &b.alpha)).sin();
            assert!(left.approx_eq(&right, &tol_digits(10)));
            let jump = b.u0_prime_right_of_alpha() - b.eval_u0_prime(&b.alpha);
            assert!(jump.approx_eq(&(&b.beta * &left), &tol_digits(10)));
        }
    }

    #[test]
    fn m_matches_quadrature() {
        for (a, beta, n) in [("0.5", "2", 1u32), ("0.3", "7", 3), ("0.5", "2", 2)] {
            let b = solve_basic(&spec(Alpha::new(s(a)), beta), n).unwrap();
            let f = |x: &Scalar| b.eval_u0(x).square();
            let tol = s("1e-30");
            let left = crate::sinc::tanh_rule::adaptive(&f, &Scalar::zero(), &b.alpha, &tol, 1 << 10);
            let right = crate::sinc::tanh_rule::adaptive(&f, &b.alpha, &Scalar::one(), &tol, 1 << 10);
            let m = (left + right) * &b.lambda0;
            assert!(m.approx_eq(&b.m, &s("1e-25")), "{m} vs {}", b.m);
        }
    }

    #[test]
    fn monotone_map_increasing() {
        let alpha = s("0.37");
        for k in 1..4 {
            for i in 1..100 {
                let y = Scalar::pi() * (k as f64 + i as f64 / 100.0);
                assert!(monotone_map_derivative(&y, &alpha) > 0.0);
            }
        }
    }

    #[test]
    fn large_index_normalization() {
        let b = solve_basic(&crate::problem::reference_example(), 20).unwrap();
        assert!((&b.m - 0.5).abs() < 0.1);
        assert!(solve_basic(&crate::problem::reference_example(), 0).is_err());
    }
}
