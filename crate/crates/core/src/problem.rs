//! Problem data: point-interaction position and strength, the integrable
//! potential `q`, and the polynomial nonlinearity `N`.
//!
//! The eigenproblem is
//!
//! ```text
//! u'' - q(x) u + λ u - N(u) = 0,   x ∈ (0,1) \ {α}
//! u(0) = u(1) = 0,  u'(0) = 1,  u'(α+0) - u'(α-0) = β u(α)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{eps_mach, precision_digits, Scalar};
use crate::sinc::tanh_rule;

/// Position of the point interaction, optionally tagged as an exact ratio `num/den`.
#[derive(Clone, Debug)]
pub struct Alpha {
    value: Scalar,
    exact: Option<(u64, u64)>,
}

impl Alpha {
    pub fn new(value: Scalar) -> Self {
        Alpha { value, exact: None }
    }

    /// Exact rational `num/den`, reduced to lowest terms.
    pub fn rational(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::validation("alpha", "zero denominator"));
        }
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        Ok(Alpha { value: Scalar::from_ratio(num as i64, den as i64), exact: Some((num, den)) })
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }

    pub fn exact(&self) -> Option<(u64, u64)> {
        self.exact
    }

    /// Whether `n α` is a positive integer. Exact for rational tags,
    /// otherwise `|nα - round(nα)| < 10^(-P/2)`.
    pub fn is_resonant(&self, n: u32) -> bool {
        match self.exact {
            Some((num, den)) => (u64::from(n) * num) % den == 0,
            None => {
                let na = &self.value * n as i32;
                let dist = (&na - na.round()).abs();
                dist < Scalar::pow10(-(precision_digits() as i32) / 2)
            }
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Host-provided potential term. Its L1 norm is obtained by quadrature.
#[derive(Clone)]
pub struct CustomPotential {
    pub name: String,
    pub eval: Arc<dyn Fn(&Scalar) -> Scalar + Send + Sync>,
    /// Interior points where the term may be unbounded.
    pub singular_points: Vec<Scalar>,
}

impl fmt::Debug for CustomPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomPotential")
            .field("name", &self.name)
            .field("singular_points", &self.singular_points)
            .finish()
    }
}

/// One summand of the potential `q`.
#[derive(Clone, Debug)]
pub enum PotentialTerm {
    /// `Σ c_k x^k`, coefficients in ascending degree.
    Polynomial(Vec<Scalar>),
    /// `scale / sqrt(|center - stretch·x|)`, singular at `center / stretch`.
    InverseSqrt { scale: Scalar, center: Scalar, stretch: Scalar },
    Custom(CustomPotential),
}

impl PotentialTerm {
    pub fn inverse_sqrt(scale: Scalar, center: Scalar, stretch: Scalar) -> Self {
        PotentialTerm::InverseSqrt { scale, center, stretch }
    }

    /// Singular abscissa of an inverse-sqrt term or custom singular points.
    pub fn singular_points(&self) -> Vec<Scalar> {
        match self {
            PotentialTerm::Polynomial(_) => Vec::new(),
            PotentialTerm::InverseSqrt { center, stretch, .. } => vec![center / stretch],
            PotentialTerm::Custom(c) => c.singular_points.clone(),
        }
    }

    pub fn eval(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            PotentialTerm::Polynomial(c) => Ok(horner(c, x)),
            PotentialTerm::InverseSqrt { scale, center, stretch } => {
                let d = (center - stretch * x).abs();
                if d <= eps_mach() * stretch.abs() {
                    return Err(Error::SingularEvaluation(x.to_sig_string(20)));
                }
                Ok(scale / d.sqrt())
            }
            PotentialTerm::Custom(c) => {
                let tol = eps_mach();
                if c.singular_points.iter().any(|s| (s - x).abs() <= tol) {
                    return Err(Error::SingularEvaluation(x.to_sig_string(20)));
                }
                Ok((c.eval)(x))
            }
        }
    }

    /// Like [`eval`](Self::eval) but only an exact hit on a singular abscissa
    /// is rejected (returned as zero). Used on quadrature nodes, which may sit
    /// closer to a singular edge than `ε_mach`.
    pub(crate) fn eval_on_grid(&self, x: &Scalar) -> Scalar {
        match self {
            PotentialTerm::Polynomial(c) => horner(c, x),
            PotentialTerm::InverseSqrt { scale, center, stretch } => {
                let d = (center - stretch * x).abs();
                if d.is_zero() {
                    Scalar::zero()
                } else {
                    scale / d.sqrt()
                }
            }
            PotentialTerm::Custom(c) => {
                if c.singular_points.iter().any(|s| s == x) {
                    Scalar::zero()
                } else {
                    (c.eval)(x)
                }
            }
        }
    }

    /// `∫_a^b term dx` in closed form, `None` for custom terms.
    pub fn integral(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match self {
            PotentialTerm::Polynomial(c) => {
                let anti = |x: &Scalar| {
                    let mut acc = Scalar::zero();
                    for (k, ck) in c.iter().enumerate().rev() {
                        acc = acc * x + ck / (k as i32 + 1);
                    }
                    acc * x
                };
                Some(anti(b) - anti(a))
            }
            PotentialTerm::InverseSqrt { scale, center, stretch } => {
                // t = center - stretch x; ∫|t|^{-1/2} dt over the image interval.
                let ta = center - stretch * a;
                let tb = center - stretch * b;
                let (lo, hi) = if ta < tb { (ta, tb) } else { (tb, ta) };
                let body = if lo >= 0.0 {
                    (hi.sqrt() - lo.sqrt()) * 2
                } else if hi <= 0.0 {
                    (lo.abs().sqrt() - hi.abs().sqrt()) * 2
                } else {
                    (lo.abs().sqrt() + hi.sqrt()) * 2
                };
                let sign = if b >= a { Scalar::one() } else { -Scalar::one() };
                Some(scale * body / stretch.abs() * sign)
            }
            PotentialTerm::Custom(_) => None,
        }
    }

    /// Sign of the term on `(0,1)`: `Some(true)` nonnegative, `Some(false)` nonpositive.
    fn sign_on_unit(&self) -> Option<bool> {
        match self {
            PotentialTerm::InverseSqrt { scale, .. } => Some(!scale.is_sign_negative()),
            PotentialTerm::Polynomial(c) => {
                let zero = Scalar::zero();
                let one = Scalar::one();
                let roots = polynomial_roots_in(c, &zero, &one);
                let mut pts = vec![zero];
                pts.extend(roots);
                pts.push(one);
                let mut nonneg = true;
                let mut nonpos = true;
                for w in pts.windows(2) {
                    let v = horner(c, &((&w[0] + &w[1]) / 2));
                    if v.is_sign_negative() {
                        nonneg = false;
                    }
                    if v > 0.0 {
                        nonpos = false;
                    }
                }
                if nonneg {
                    Some(true)
                } else if nonpos {
                    Some(false)
                } else {
                    None
                }
            }
            PotentialTerm::Custom(_) => None,
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            PotentialTerm::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| acc * x + ck.to_f64()),
            PotentialTerm::InverseSqrt { scale, center, stretch } => {
                scale.to_f64() / (center.to_f64() - stretch.to_f64() * x).abs().sqrt()
            }
            PotentialTerm::Custom(c) => (c.eval)(&Scalar::from_f64(x)).to_f64(),
        }
    }

    /// `∫_a^b term dx` in double precision. Custom terms use a midpoint estimate.
    pub fn integral_f64(&self, a: f64, b: f64) -> f64 {
        match self {
            PotentialTerm::Custom(_) => self.eval_f64(0.5 * (a + b)) * (b - a),
            _ => self
                .integral(&Scalar::from_f64(a), &Scalar::from_f64(b))
                .map(|v| v.to_f64())
                .unwrap_or(0.0),
        }
    }
}

pub(crate) fn horner(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Sign-change roots of a polynomial strictly inside `(a, b)`, located by a
/// uniform scan followed by bisection to working precision.
pub(crate) fn polynomial_roots_in(coeffs: &[Scalar], a: &Scalar, b: &Scalar) -> Vec<Scalar> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let f = |x: &Scalar| horner(coeffs, x);
    sign_change_roots(&f, a, b, 64 * (degree + 1))
}

fn sign_change_roots(f: &dyn Fn(&Scalar) -> Scalar, a: &Scalar, b: &Scalar, samples: usize) -> Vec<Scalar> {
    let step = (b - a) / samples as i32;
    let mut roots = Vec::new();
    let mut x0 = a.clone();
    let mut f0 = f(&x0);
    for i in 1..=samples {
        let x1 = a + &step * i as i32;
        let f1 = f(&x1);
        if f1.is_zero() && i < samples {
            roots.push(x1.clone());
        } else if (f0.is_sign_negative() && f1 > 0.0) || (f0 > 0.0 && f1.is_sign_negative()) {
            roots.push(bisect_root(f, x0.clone(), x1.clone(), f0.is_sign_negative()));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

fn bisect_root(f: &dyn Fn(&Scalar) -> Scalar, mut lo: Scalar, mut hi: Scalar, lo_negative: bool) -> Scalar {
    let tol = eps_mach();
    while (&hi - &lo).abs() > tol {
        let mid = (&lo + &hi) / 2;
        let fm = f(&mid);
        if fm.is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2
}

/// Full problem instance.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    alpha: Alpha,
    beta: Scalar,
    q_terms: Vec<PotentialTerm>,
    nonlinearity: BTreeMap<u32, Scalar>,
    breakpoints: Vec<Scalar>,
}

impl ProblemSpec {
    pub fn new(
        alpha: Alpha,
        beta: Scalar,
        q_terms: Vec<PotentialTerm>,
        nonlinearity: BTreeMap<u32, Scalar>,
        breakpoints: Vec<Scalar>,
    ) -> Result<Self> {
        if !(alpha.value() > &0.0 && alpha.value() < &1.0) {
            return Err(Error::validation("alpha", format!("{} is outside (0, 1)", alpha.value().to_sig_string(12))));
        }
        if beta.is_sign_negative() || !beta.is_finite() {
            return Err(Error::validation("beta", "must be a finite nonnegative number"));
        }
        if let Some(0) = nonlinearity.keys().next() {
            return Err(Error::validation("nonlinearity", "degrees must be at least 1 so that N(0) = 0"));
        }
        for (i, term) in q_terms.iter().enumerate() {
            if let PotentialTerm::InverseSqrt { stretch, center, .. } = term {
                if stretch.is_zero() {
                    return Err(Error::validation(format!("q[{i}].stretch"), "must be nonzero"));
                }
                let s = center / stretch;
                if s.is_sign_negative() || s > 1.0 {
                    return Err(Error::validation(
                        format!("q[{i}]"),
                        format!("singular abscissa {} is outside [0, 1]", s.to_sig_string(12)),
                    ));
                }
            }
        }
        let mut sorted = breakpoints;
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        let tol = eps_mach();
        for (i, b) in sorted.iter().enumerate() {
            if !(b > &0.0 && b < &1.0) {
                return Err(Error::validation("breakpoints", format!("{} is outside (0, 1)", b.to_sig_string(12))));
            }
            if i > 0 && (b - &sorted[i - 1]).abs() <= tol {
                return Err(Error::validation("breakpoints", "entries must be pairwise distinct"));
            }
        }
        Ok(ProblemSpec { alpha, beta, q_terms, nonlinearity, breakpoints: sorted })
    }

    /// Unperturbed problem: `q ≡ 0`, `N ≡ 0`.
    pub fn unperturbed(alpha: Alpha, beta: Scalar) -> Result<Self> {
        Self::new(alpha, beta, Vec::new(), BTreeMap::new(), Vec::new())
    }

    pub fn alpha(&self) -> &Alpha {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn q_terms(&self) -> &[PotentialTerm] {
        &self.q_terms
    }

    pub fn nonlinearity(&self) -> &BTreeMap<u32, Scalar> {
        &self.nonlinearity
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn is_linear(&self) -> bool {
        self.nonlinearity.values().all(Scalar::is_zero)
    }

    pub fn has_potential(&self) -> bool {
        !self.q_terms.is_empty()
    }

    /// Same problem with every potential term multiplied by `factor`.
    pub fn scaled_potential(&self, factor: &Scalar) -> Self {
        let q_terms = self
            .q_terms
            .iter()
            .map(|t| match t {
                PotentialTerm::Polynomial(c) => PotentialTerm::Polynomial(c.iter().map(|ck| ck * factor).collect()),
                PotentialTerm::InverseSqrt { scale, center, stretch } => PotentialTerm::InverseSqrt {
                    scale: scale * factor,
                    center: center.clone(),
                    stretch: stretch.clone(),
                },
                PotentialTerm::Custom(c) => {
                    let inner = c.eval.clone();
                    let f = factor.clone();
                    PotentialTerm::Custom(CustomPotential {
                        name: c.name.clone(),
                        eval: Arc::new(move |x| inner(x) * &f),
                        singular_points: c.singular_points.clone(),
                    })
                }
            })
            .collect();
        ProblemSpec { q_terms, ..self.clone() }
    }

    /// Same problem with the nonlinearity removed.
    pub fn linearized(&self) -> Self {
        ProblemSpec { nonlinearity: BTreeMap::new(), ..self.clone() }
    }

    /// Sorted points splitting `[0,1]` into the integration subintervals:
    /// `0`, the breakpoints, singular abscissae of `q`, `α`, and `1`.
    pub fn subinterval_edges(&self) -> Vec<Scalar> {
        let mut interior: Vec<Scalar> = self.breakpoints.clone();
        interior.push(self.alpha.value().clone());
        for t in &self.q_terms {
            interior.extend(t.singular_points().into_iter().filter(|s| s > &0.0 && s < &1.0));
        }
        interior.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let tol = eps_mach();
        let mut edges = vec![Scalar::zero()];
        for p in interior {
            if (&p - edges.last().unwrap()).abs() > tol {
                edges.push(p);
            }
        }
        if (Scalar::one() - edges.last().unwrap()).abs() > tol {
            edges.push(Scalar::one());
        } else {
            *edges.last_mut().unwrap() = Scalar::one();
        }
        // α must be an exact edge even if a breakpoint within tolerance replaced it.
        for e in edges.iter_mut() {
            if (&*e - self.alpha.value()).abs() <= tol {
                *e = self.alpha.value().clone();
            }
        }
        edges
    }

    /// `q(x)`; fails at a singular abscissa.
    pub fn eval_potential(&self, x: &Scalar) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for t in &self.q_terms {
            acc += t.eval(x)?;
        }
        Ok(acc)
    }

    /// `q(x)` on a quadrature node; see [`PotentialTerm::eval`] for the checked form.
    pub fn eval_potential_on_grid(&self, x: &Scalar) -> Scalar {
        self.q_terms.iter().map(|t| t.eval_on_grid(x)).sum()
    }

    /// `N(u) = Σ a_p u^p`.
    pub fn eval_nonlinearity(&self, u: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (p, a) in &self.nonlinearity {
            acc += a * u.powi(*p as i32);
        }
        acc
    }

    /// `‖q‖_{0,1} = ∫_0^1 |q|`.
    ///
    /// Closed form when `q` is sign-definite or a pure polynomial; otherwise
    /// tanh-rule quadrature of `|q|` on pieces split at singular points and
    /// sign changes.
    pub fn q_l1_norm(&self) -> Scalar {
        let zero = Scalar::zero();
        let one = Scalar::one();
        if self.q_terms.is_empty() {
            return zero;
        }
        let signs: Vec<Option<bool>> = self.q_terms.iter().map(PotentialTerm::sign_on_unit).collect();
        let closed: Option<Vec<Scalar>> = self.q_terms.iter().map(|t| t.integral(&zero, &one)).collect();
        if let Some(parts) = &closed {
            if signs.iter().all(|s| *s == Some(true)) || signs.iter().all(|s| *s == Some(false)) {
                return parts.iter().sum::<Scalar>().abs();
            }
        }
        if self.q_terms.iter().all(|t| matches!(t, PotentialTerm::Polynomial(_))) {
            let mut merged: Vec<Scalar> = Vec::new();
            for t in &self.q_terms {
                if let PotentialTerm::Polynomial(c) = t {
                    if merged.len() < c.len() {
                        merged.resize(c.len(), Scalar::zero());
                    }
                    for (m, ck) in merged.iter_mut().zip(c) {
                        *m += ck;
                    }
                }
            }
            let poly = PotentialTerm::Polynomial(merged.clone());
            let mut pts = vec![zero];
            pts.extend(polynomial_roots_in(&merged, &pts[0].clone(), &one));
            pts.push(one);
            return pts
                .windows(2)
                .map(|w| poly.integral(&w[0], &w[1]).expect("polynomial").abs())
                .sum();
        }
        self.q_l1_norm_quadrature()
    }

    fn q_l1_norm_quadrature(&self) -> Scalar {
        let edges = self.subinterval_edges();
        let q = |x: &Scalar| self.eval_potential_on_grid(x);
        let mut total = Scalar::zero();
        let digits = (precision_digits() as i32 - 10).min(30);
        let tol = Scalar::pow10(-digits);
        for w in edges.windows(2) {
            // interior sign changes, scanned away from the (possibly singular) ends
            let len = &w[1] - &w[0];
            let margin = &len * 1e-9;
            let lo = &w[0] + &margin;
            let hi = &w[1] - &margin;
            let mut pts = vec![w[0].clone()];
            pts.extend(sign_change_roots(&q, &lo, &hi, 256));
            pts.push(w[1].clone());
            for piece in pts.windows(2) {
                total += tanh_rule::adaptive(&|x: &Scalar| q(x).abs(), &piece[0], &piece[1], &tol, 1 << 13);
            }
        }
        total
    }

    /// `q(x)` in double precision, used by the shooting oracle.
    pub fn eval_potential_f64(&self, x: f64) -> f64 {
        self.q_terms.iter().map(|t| t.eval_f64(x)).sum()
    }

    /// `∫_a^b q` in double precision.
    pub fn potential_integral_f64(&self, a: f64, b: f64) -> f64 {
        self.q_terms.iter().map(|t| t.integral_f64(a, b)).sum()
    }

    pub fn eval_nonlinearity_f64(&self, u: f64) -> f64 {
        self.nonlinearity.iter().map(|(p, a)| a.to_f64() * u.powi(*p as i32)).sum()
    }

    /// Interior singular abscissae of `q`, sorted, as doubles.
    pub fn singular_points_f64(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .q_terms
            .iter()
            .flat_map(|t| t.singular_points())
            .map(|s| s.to_f64())
            .filter(|s| *s > 0.0 && *s < 1.0)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        pts
    }
}

/// Reference instance with a point interaction and square-root singularities:
/// `α = 1/2`, `β = 2`,
/// `q = |0.7-x|^{-1/2} + |0.1-x|^{-1/2} + |0.3-x|^{-1/2} + |0.4-2x|^{-1/2}`, `N(u) = u^9`.
pub fn reference_example() -> ProblemSpec {
    let s = |t: &str| Scalar::parse(t).expect("literal");
    let q_terms = vec![
        PotentialTerm::inverse_sqrt(s("1"), s("0.7"), s("1")),
        PotentialTerm::inverse_sqrt(s("1"), s("0.1"), s("1")),
        PotentialTerm::inverse_sqrt(s("1"), s("0.3"), s("1")),
        PotentialTerm::inverse_sqrt(s("1"), s("0.4"), s("2")),
    ];
    let mut nonlinearity = BTreeMap::new();
    nonlinearity.insert(9, Scalar::one());
    ProblemSpec::new(
        Alpha::rational(1, 2).expect("valid"),
        s("2"),
        q_terms,
        nonlinearity,
        vec![s("0.1"), s("0.2"), s("0.3"), s("0.7")],
    )
    .expect("reference problem is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::tol_digits;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn zero_polynomial_potential() {
        let p = ProblemSpec::new(
            Alpha::rational(1, 2).unwrap(),
            s("0"),
            vec![PotentialTerm::Polynomial(vec![s("0")])],
            BTreeMap::new(),
            vec![],
        )
        .unwrap();
        assert!(p.eval_potential(&s("0.3")).unwrap().is_zero());
    }

    #[test]
    fn reference_potential_at_half() {
        let p = reference_example();
        let got = p.eval_potential(&s("0.5")).unwrap();
        let want = s("0.2").sqrt().recip() * 2 + s("0.4").sqrt().recip() + s("0.6").sqrt().recip();
        assert!(got.approx_eq(&want, &eps_mach()), "{got} vs {want}");
    }

    #[test]
    fn inverse_sqrt_value() {
        let t = PotentialTerm::inverse_sqrt(s("1"), s("0.5"), s("1"));
        assert!(t.eval(&s("0.25")).unwrap().approx_eq(&s("2"), &eps_mach()));
    }

    #[test]
    fn singular_evaluation_is_rejected() {
        let p = reference_example();
        assert!(matches!(p.eval_potential(&s("0.7")), Err(Error::SingularEvaluation(_))));
        assert!(matches!(p.eval_potential(&s("0.2")), Err(Error::SingularEvaluation(_))));
    }

    #[test]
    fn nonlinearity_values() {
        let mut m = BTreeMap::new();
        m.insert(9, Scalar::one());
        let p = ProblemSpec::new(Alpha::rational(1, 2).unwrap(), s("0"), vec![], m, vec![]).unwrap();
        assert!(p.eval_nonlinearity(&Scalar::zero()).is_zero());
        assert_eq!(p.eval_nonlinearity(&s("2")), s("512"));
        let mut m = BTreeMap::new();
        m.insert(1, s("3"));
        m.insert(2, s("1"));
        let p = ProblemSpec::new(Alpha::rational(1, 2).unwrap(), s("0"), vec![], m, vec![]).unwrap();
        assert_eq!(p.eval_nonlinearity(&s("2")), s("10"));
    }

    #[test]
    fn l1_norm_closed_forms() {
        let zero = ProblemSpec::unperturbed(Alpha::rational(1, 3).unwrap(), s("1")).unwrap();
        assert!(zero.q_l1_norm().is_zero());

        let single = ProblemSpec::new(
            Alpha::rational(1, 2).unwrap(),
            s("0"),
            vec![PotentialTerm::inverse_sqrt(s("1"), s("0.7"), s("1"))],
            BTreeMap::new(),
            vec![],
        )
        .unwrap();
        let want = (s("0.7").sqrt() + s("0.3").sqrt()) * 2;
        assert!(single.q_l1_norm().approx_eq(&want, &eps_mach()));
    }

    #[test]
    fn l1_norm_of_reference_matches_quadrature() {
        let p = reference_example();
        let closed = p.q_l1_norm();
        // independent value: sum of the four closed-form antiderivatives
        let sq = |t: &str| s(t).sqrt();
        let want = (sq("0.7") + sq("0.3")) * 2
            + (sq("0.1") + sq("0.9")) * 2
            + (sq("0.3") + sq("0.7")) * 2
            + (sq("0.2") + sq("0.8")) * 2 / sq("2");
        assert!(closed.approx_eq(&want, &tol_digits(8)));
        let quad = p.q_l1_norm_quadrature();
        assert!(closed.approx_eq(&quad, &s("1e-25")), "closed {closed} quad {quad}");
    }

    #[test]
    fn l1_norm_sign_changing_polynomial() {
        // q = x - 1/2: ∫|x - 1/2| = 1/4
        let p = ProblemSpec::new(
            Alpha::rational(1, 3).unwrap(),
            s("0"),
            vec![PotentialTerm::Polynomial(vec![s("-0.5"), s("1")])],
            BTreeMap::new(),
            vec![],
        )
        .unwrap();
        assert!(p.q_l1_norm().approx_eq(&s("0.25"), &tol_digits(8)));
    }

    #[test]
    fn l1_norm_mixed_signs_uses_quadrature() {
        // 1/sqrt|0.5-x| - 2 changes sign at |0.5-x| = 1/4
        let p = ProblemSpec::new(
            Alpha::rational(1, 3).unwrap(),
            s("0"),
            vec![
                PotentialTerm::inverse_sqrt(s("1"), s("0.5"), s("1")),
                PotentialTerm::Polynomial(vec![s("-2")]),
            ],
            BTreeMap::new(),
            vec![s("0.5")],
        )
        .unwrap();
        // exact: 2∫_0^{1/2} |t^{-1/2} - 2| dt with the root at t = 1/4
        // ∫_0^{1/4}(t^{-1/2}-2) = 1 - 1/2 = 1/2; ∫_{1/4}^{1/2}(2 - t^{-1/2}) = 1/2 - 2(√(1/2) - 1/2)
        let want = (s("0.5") + s("0.5") - (s("0.5").sqrt() - s("0.5")) * 2) * 2;
        let got = p.q_l1_norm();
        assert!(got.approx_eq(&want, &s("1e-25")), "{got} vs {want}");
    }

    #[test]
    fn validation_errors() {
        assert!(ProblemSpec::unperturbed(Alpha::new(s("1.5")), s("1")).is_err());
        assert!(ProblemSpec::unperturbed(Alpha::new(s("0.5")), s("-1")).is_err());
        let mut m = BTreeMap::new();
        m.insert(0, s("1"));
        assert!(ProblemSpec::new(Alpha::new(s("0.5")), s("0"), vec![], m, vec![]).is_err());
        assert!(ProblemSpec::new(
            Alpha::new(s("0.5")),
            s("0"),
            vec![],
            BTreeMap::new(),
            vec![s("0.2"), s("0.2")]
        )
        .is_err());
        assert!(ProblemSpec::new(
            Alpha::new(s("0.5")),
            s("0"),
            vec![PotentialTerm::inverse_sqrt(s("1"), s("3"), s("1"))],
            BTreeMap::new(),
            vec![]
        )
        .is_err());
    }

    #[test]
    fn resonance_detection() {
        let a = Alpha::rational(2, 4).unwrap();
        assert_eq!(a.exact(), Some((1, 2)));
        assert!(a.is_resonant(2));
        assert!(!a.is_resonant(3));
        let approx = Alpha::new(s("0.25"));
        assert!(approx.is_resonant(4));
        assert!(!approx.is_resonant(3));
    }

    #[test]
    fn edges_include_alpha_and_singularities() {
        let p = reference_example();
        let edges: Vec<f64> = p.subinterval_edges().iter().map(Scalar::to_f64).collect();
        assert_eq!(edges, vec![0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0]);
    }
}
