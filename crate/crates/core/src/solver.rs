//! The functional-discrete recursion.
//!
//! Order `j` solves `u'' + λ0 u = F` with `u(0) = u'(0) = 0`, `u(1) = 0` and
//! the jump `u'(α+0) - u'(α-0) = β u(α)`, where
//! `F = -Σ_{p=0}^{j-1} λ^{(j-p)} u^{(p)} + q u^{(j-1)} + A_{j-1}`.
//! All samples live on the nodes of a [`CompositeGrid`].

use serde::{Deserialize, Serialize};

use crate::adomian::AdomianAccumulator;
use crate::basic::{solve_basic, BasicSolution};
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::scalar::{precision_digits, Scalar};
use crate::sinc::{choose_parameters, CompositeGrid, QuadratureOptions, QuadratureParams};

/// Node samples indexed `[subinterval][node]`.
pub type Samples = Vec<Vec<Scalar>>;

/// Quantities that depend only on the grid and the basic solution.
#[derive(Clone, Debug)]
pub struct NodeData {
    pub x: Samples,
    pub q: Samples,
    pub sin_yx: Samples,
    pub cos_yx: Samples,
    pub u0: Samples,
    pub u0_prime: Samples,
}

impl NodeData {
    fn new(spec: &ProblemSpec, basic: &BasicSolution, grid: &CompositeGrid) -> Self {
        let x = grid.sample(|_, _, z| z.clone());
        let q = grid.sample(|s, i, z| {
            if grid.grids()[s].is_degenerate(i) {
                Scalar::zero()
            } else {
                spec.eval_potential_on_grid(z)
            }
        });
        let mut sin_yx = Vec::new();
        let mut cos_yx = Vec::new();
        for row in &x {
            let (s, c): (Vec<_>, Vec<_>) = row.iter().map(|z| (&basic.y * z).sin_cos()).unzip();
            sin_yx.push(s);
            cos_yx.push(c);
        }
        let u0 = grid.sample(|_, _, z| basic.eval_u0(z));
        let u0_prime = grid.sample(|_, _, z| basic.eval_u0_prime(z));
        NodeData { x, q, sin_yx, cos_yx, u0, u0_prime }
    }
}

/// One term `(λ^{(j)}, c^{(j)}, u^{(j)})` of the expansion.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Correction {
    pub order: usize,
    pub lambda: Scalar,
    pub c: Scalar,
    #[serde(skip)]
    pub u: Samples,
    #[serde(skip)]
    pub u_prime: Samples,
    /// `u(α)` from the left representation.
    pub u_alpha_left: Scalar,
    /// `u(α)` from the right representation.
    pub u_alpha_right: Scalar,
    pub uprime_alpha_left: Scalar,
    pub uprime_alpha_right: Scalar,
    pub sup_abs_u: Scalar,
}

impl Correction {
    /// `u'(α+0) - u'(α-0) - β u(α)` for this order alone.
    pub fn jump_defect(&self, beta: &Scalar) -> Scalar {
        &self.uprime_alpha_right - &self.uprime_alpha_left - beta * &self.u_alpha_left
    }
}

/// Non-fatal signal that `|λ^{(j)}|` grew for three consecutive orders.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DivergenceWarning {
    pub order: usize,
    pub message: String,
}

/// Solver configuration beyond the problem itself.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub quadrature: QuadratureOptions,
    /// Fixed `K`; `None` runs [`choose_parameters`].
    pub k: Option<usize>,
    /// Stopping tolerance of the `K` search.
    pub epsilon: Scalar,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { quadrature: QuadratureOptions::default(), k: None, epsilon: Scalar::pow10(-12) }
    }
}

/// Rank-`m` result.
#[derive(Clone, Debug)]
pub struct FDSolution {
    pub spec: ProblemSpec,
    pub basic: BasicSolution,
    pub params: QuadratureParams,
    pub grid: CompositeGrid,
    pub nodes: NodeData,
    pub corrections: Vec<Correction>,
    pub lambda_m: Scalar,
    pub residual_r: Scalar,
    pub jump_defect: Scalar,
    pub warnings: Vec<DivergenceWarning>,
}

/// Stateful driver for one eigenpair: holds the grid, node data and the
/// per-node Adomian accumulators.
pub struct FdEngine {
    spec: ProblemSpec,
    basic: BasicSolution,
    params: QuadratureParams,
    grid: CompositeGrid,
    nodes: NodeData,
    u0_norm2: Scalar,
    adomian: Vec<Vec<AdomianAccumulator>>,
    // A_{j-1} at every node for the next order j
    last_adomian: Samples,
    corrections: Vec<Correction>,
    warnings: Vec<DivergenceWarning>,
    growth_streak: usize,
}

impl FdEngine {
    pub fn new(spec: &ProblemSpec, basic: BasicSolution, params: QuadratureParams) -> Self {
        let grid = CompositeGrid::new(spec, &params);
        let nodes = NodeData::new(spec, &basic, &grid);
        let sq: Samples = nodes.u0.iter().map(|r| r.iter().map(Scalar::square).collect()).collect();
        let u0_norm2 = grid.definite_integral(&sq);
        let mut adomian: Vec<Vec<AdomianAccumulator>> = nodes
            .u0
            .iter()
            .map(|r| r.iter().map(|_| AdomianAccumulator::new(spec.nonlinearity())).collect())
            .collect();
        let last_adomian = push_all(&mut adomian, &nodes.u0);
        FdEngine {
            spec: spec.clone(),
            basic,
            params,
            grid,
            nodes,
            u0_norm2,
            adomian,
            last_adomian,
            corrections: Vec::new(),
            warnings: Vec::new(),
            growth_streak: 0,
        }
    }

    pub fn grid(&self) -> &CompositeGrid {
        &self.grid
    }

    pub fn nodes(&self) -> &NodeData {
        &self.nodes
    }

    pub fn basic(&self) -> &BasicSolution {
        &self.basic
    }

    pub fn corrections(&self) -> &[Correction] {
        &self.corrections
    }

    /// `∫_0^1 u0²` by the tanh rule.
    pub fn u0_norm2(&self) -> &Scalar {
        &self.u0_norm2
    }

    /// Order of the next correction.
    pub fn next_order(&self) -> usize {
        self.corrections.len() + 1
    }

    /// `F̃ = -Σ_{p=1}^{j-1} λ^{(j-p)} u^{(p)} + q u^{(j-1)} + A_{j-1}` at every node.
    pub fn rhs_f(&self) -> Samples {
        let j = self.next_order();
        let prev: &Samples = if j == 1 { &self.nodes.u0 } else { &self.corrections[j - 2].u };
        let mut out = Vec::with_capacity(prev.len());
        for (s, row) in prev.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, u) in row.iter().enumerate() {
                let mut v = &self.nodes.q[s][i] * u + &self.last_adomian[s][i];
                for p in 1..j {
                    v -= &self.corrections[j - p - 1].lambda * &self.corrections[p - 1].u[s][i];
                }
                r.push(v);
            }
            out.push(r);
        }
        out
    }

    /// `λ^{(j)} = ∫ F̃ u0 / ∫ u0²`.
    pub fn next_lambda(&self, f_tilde: &Samples) -> Scalar {
        let prod = mul(f_tilde, &self.nodes.u0);
        self.grid.definite_integral(&prod) / &self.u0_norm2
    }

    /// `F = F̃ - λ^{(j)} u0`.
    pub fn full_rhs(&self, f_tilde: &Samples, lambda: &Scalar) -> Samples {
        f_tilde
            .iter()
            .zip(&self.nodes.u0)
            .map(|(fr, ur)| fr.iter().zip(ur).map(|(f, u)| f - lambda * u).collect())
            .collect()
    }

    fn moments(&self, f: &Samples) -> Moments {
        let cf = mul(&self.nodes.cos_yx, f);
        let sf = mul(&self.nodes.sin_yx, f);
        let cs = self.grid.subinterval_integrals(&cf);
        let ss = self.grid.subinterval_integrals(&sf);
        let l = self.grid.left_count();
        Moments {
            cos_left: cs[..l].iter().sum(),
            sin_left: ss[..l].iter().sum(),
            cos_right: cs[l..].iter().sum(),
            sin_right: ss[l..].iter().sum(),
            cf,
            sf,
        }
    }

    /// `c^{(j)}` from the continuity relation, or the resonant form when `nα ∈ ℕ`.
    pub fn next_c(&self, f: &Samples) -> Result<Scalar> {
        let m = self.moments(f);
        self.c_from_moments(&m)
    }

    fn c_from_moments(&self, m: &Moments) -> Result<Scalar> {
        let b = &self.basic;
        let y = &b.y;
        let ic = &m.cos_left + &m.cos_right;
        let is = &m.sin_left + &m.sin_right;
        if b.resonant {
            let n = b.n as i32;
            let sign = if n % 2 == 0 { -1 } else { 1 };
            // (-1)^{n+1} ∫cos(πnξ)F/(πn) + (-1)^n β ∫_0^α sin(πnξ)F/(πn)²
            return Ok(ic / y * sign - &b.beta * &m.sin_left / &b.lambda0 * sign);
        }
        let one_minus = Scalar::one() - &b.alpha;
        let denom = (y * &one_minus).sin();
        if denom.abs() < Scalar::pow10(-(precision_digits() as i32) / 2) {
            return Err(Error::DegenerateDenominator(format!(
                "sin(√λ(1-α)) = {} for n = {}",
                denom.to_sig_string(3),
                b.n
            )));
        }
        let (sa, ca) = (y * &b.alpha).sin_cos();
        Ok((sa * ic - ca * is) / (y * denom))
    }

    /// `c^{(j)}` from the derivative-jump relation
    /// `c cos(√λ(1-α)) = -∫cos(√λ(α-ξ))F/√λ - β∫_0^α sin(√λ(α-ξ))F/λ`.
    pub fn c_from_jump_relation(&self, f: &Samples) -> Scalar {
        let m = self.moments(f);
        let b = &self.basic;
        let y = &b.y;
        let (sa, ca) = (y * &b.alpha).sin_cos();
        let ic = &m.cos_left + &m.cos_right;
        let is = &m.sin_left + &m.sin_right;
        let full = (&ca * ic + &sa * is) / y;
        let left = (&sa * &m.cos_left - &ca * &m.sin_left) / &b.lambda0;
        let denom = (y * (Scalar::one() - &b.alpha)).cos();
        (-full - &b.beta * left) / denom
    }

    /// Eigenfunction correction at every node plus its one-sided data at `α`.
    pub fn next_u(&self, f: &Samples, c: &Scalar, order: usize, lambda: &Scalar) -> Correction {
        let m = self.moments(f);
        self.build_correction(&m, c, order, lambda)
    }

    fn build_correction(&self, m: &Moments, c: &Scalar, order: usize, lambda: &Scalar) -> Correction {
        let b = &self.basic;
        let y = &b.y;
        let l = self.grid.left_count();
        let subs = self.grid.grids().len();
        let pre = self.grid.prefix_all(&[&m.cf, &m.sf], 0..l);
        let suf = self.grid.suffix_all(&[&m.cf, &m.sf], l..subs);
        let mut u = Vec::with_capacity(subs);
        let mut u_prime = Vec::with_capacity(subs);
        let mut sup = Scalar::zero();
        for s in 0..subs {
            let mut ur = Vec::with_capacity(self.nodes.x[s].len());
            let mut dr = Vec::with_capacity(self.nodes.x[s].len());
            for i in 0..self.nodes.x[s].len() {
                let sz = &self.nodes.sin_yx[s][i];
                let cz = &self.nodes.cos_yx[s][i];
                let (val, der) = if s < l {
                    let (ic, is) = (&pre[0][s][i], &pre[1][s][i]);
                    ((sz * ic - cz * is) / y, cz * ic + sz * is)
                } else {
                    let (jc, js) = (&suf[0][s][i], &suf[1][s][i]);
                    let (s1, c1) = (y * (Scalar::one() - &self.nodes.x[s][i])).sin_cos();
                    (c * s1 - (sz * jc - cz * js) / y, -(c * y * c1) - (cz * jc + sz * js))
                };
                if val.abs() > sup {
                    sup = val.abs();
                }
                ur.push(val);
                dr.push(der);
            }
            u.push(ur);
            u_prime.push(dr);
        }
        let (sa, ca) = (y * &b.alpha).sin_cos();
        let (s1, c1) = (y * (Scalar::one() - &b.alpha)).sin_cos();
        let u_alpha_left = (&sa * &m.cos_left - &ca * &m.sin_left) / y;
        let u_alpha_right = c * &s1 - (&sa * &m.cos_right - &ca * &m.sin_right) / y;
        let uprime_alpha_left = &ca * &m.cos_left + &sa * &m.sin_left;
        let uprime_alpha_right = -(c * y * &c1) - (&ca * &m.cos_right + &sa * &m.sin_right);
        if u_alpha_left.abs() > sup {
            sup = u_alpha_left.abs();
        }
        Correction {
            order,
            lambda: lambda.clone(),
            c: c.clone(),
            u,
            u_prime,
            u_alpha_left,
            u_alpha_right,
            uprime_alpha_left,
            uprime_alpha_right,
            sup_abs_u: sup,
        }
    }

    /// Computes and stores the next correction.
    pub fn step(&mut self) -> Result<&Correction> {
        let j = self.next_order();
        let f_tilde = self.rhs_f();
        let lambda = self.next_lambda(&f_tilde);
        let f = self.full_rhs(&f_tilde, &lambda);
        let m = self.moments(&f);
        let c = self.c_from_moments(&m)?;
        let corr = self.build_correction(&m, &c, j, &lambda);
        self.track_growth(&corr);
        self.last_adomian = push_all(&mut self.adomian, &corr.u);
        self.corrections.push(corr);
        Ok(self.corrections.last().expect("just pushed"))
    }

    fn track_growth(&mut self, corr: &Correction) {
        if let Some(prev) = self.corrections.last() {
            if corr.lambda.abs() > prev.lambda.abs() && !corr.lambda.is_zero() {
                self.growth_streak += 1;
            } else {
                self.growth_streak = 0;
            }
        }
        if self.growth_streak == 3 {
            let w = DivergenceWarning {
                order: corr.order,
                message: format!(
                    "|λ^({})| grew for three consecutive orders; the expansion may diverge for n = {}",
                    corr.order, self.basic.n
                ),
            };
            log::warn!("{}", w.message);
            self.warnings.push(w);
        }
    }

    /// Assembles the rank-`m` solution and its diagnostics.
    pub fn finish(self) -> FDSolution {
        let lambda_m = &self.basic.lambda0 + self.corrections.iter().map(|c| &c.lambda).sum::<Scalar>();
        let mut sol = FDSolution {
            spec: self.spec,
            basic: self.basic,
            params: self.params,
            grid: self.grid,
            nodes: self.nodes,
            corrections: self.corrections,
            lambda_m,
            residual_r: Scalar::zero(),
            jump_defect: Scalar::zero(),
            warnings: self.warnings,
        };
        sol.residual_r = residual(&sol);
        sol.jump_defect = jump_defect(&sol);
        sol
    }
}

struct Moments {
    cos_left: Scalar,
    sin_left: Scalar,
    cos_right: Scalar,
    sin_right: Scalar,
    cf: Samples,
    sf: Samples,
}

fn mul(a: &Samples, b: &Samples) -> Samples {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).collect()).collect()
}

fn push_all(acc: &mut [Vec<AdomianAccumulator>], v: &Samples) -> Samples {
    acc.iter_mut()
        .zip(v)
        .map(|(ar, vr)| ar.iter_mut().zip(vr).map(|(a, x)| a.push(x)).collect())
        .collect()
}

/// Solves for eigenpair `n` to rank `m`.
pub fn run_fd(spec: &ProblemSpec, n: u32, m: usize, opts: &SolveOptions) -> Result<FDSolution> {
    let basic = solve_basic(spec, n)?;
    let params = match opts.k {
        Some(k) => QuadratureParams::new(k, &opts.quadrature),
        None => choose_parameters(spec, &basic, &opts.epsilon, &opts.quadrature)?,
    };
    log::info!("n = {n}: λ0 = {}, K = {}", basic.lambda0.to_sig_string(20), params.k);
    let mut engine = FdEngine::new(spec, basic, params);
    for _ in 0..m {
        engine.step()?;
    }
    Ok(engine.finish())
}

impl FDSolution {
    pub fn rank(&self) -> usize {
        self.corrections.len()
    }

    /// Rank-`m` eigenfunction and derivative at every node.
    pub fn rank_m_samples(&self) -> (Samples, Samples) {
        self.partial_samples(self.rank())
    }

    /// Partial sum of rank `m ≤ self.rank()` at every node.
    pub fn partial_samples(&self, m: usize) -> (Samples, Samples) {
        let mut u = self.nodes.u0.clone();
        let mut d = self.nodes.u0_prime.clone();
        for c in &self.corrections[..m] {
            for s in 0..u.len() {
                for i in 0..u[s].len() {
                    u[s][i] += &c.u[s][i];
                    d[s][i] += &c.u_prime[s][i];
                }
            }
        }
        (u, d)
    }

    /// Rank-`m` eigenfunction at `α`.
    pub fn u_at_alpha(&self) -> Scalar {
        self.partial_u_at_alpha(self.rank())
    }

    fn partial_u_at_alpha(&self, m: usize) -> Scalar {
        self.basic.eval_u0(&self.basic.alpha) + self.corrections[..m].iter().map(|c| &c.u_alpha_left).sum::<Scalar>()
    }

    /// `λ0 + λ^{(1)} + … + λ^{(m)}`.
    pub fn partial_lambda(&self, m: usize) -> Scalar {
        &self.basic.lambda0 + self.corrections[..m].iter().map(|c| &c.lambda).sum::<Scalar>()
    }

    /// Residual of every partial sum, ranks `0..=self.rank()`.
    pub fn residual_history(&self) -> Vec<Scalar> {
        (0..=self.rank()).map(|m| residual_at_rank(self, m)).collect()
    }

    /// Node abscissae with rank-`m` `u` and `u'`, sorted by `x`, including `0`, `α` and `1`.
    pub fn plot_points(&self) -> Vec<(Scalar, Scalar, Scalar)> {
        let (u, d) = self.rank_m_samples();
        let l = self.grid.left_count();
        let mut out = vec![(Scalar::zero(), Scalar::zero(), Scalar::one())];
        for s in 0..u.len() {
            if s == l {
                let left_d = self.basic.eval_u0_prime(&self.basic.alpha)
                    + self.corrections.iter().map(|c| &c.uprime_alpha_left).sum::<Scalar>();
                out.push((self.basic.alpha.clone(), self.u_at_alpha(), left_d));
            }
            for i in 0..u[s].len() {
                out.push((self.nodes.x[s][i].clone(), u[s][i].clone(), d[s][i].clone()));
            }
        }
        let end_d = -(&self.basic.c0 * &self.basic.y)
            + self.corrections.iter().map(|c| -(&c.c * &self.basic.y)).sum::<Scalar>();
        out.push((Scalar::one(), Scalar::zero(), end_d));
        out
    }
}

/// Integral residual of the rank-`m` approximation:
/// `∫_0^1 |1 - U'(ξ) + β U(α) H(ξ-α) + ∫_0^ξ (qU - ΛU + N(U))| dξ`.
pub fn residual(sol: &FDSolution) -> Scalar {
    residual_at_rank(sol, sol.rank())
}

/// [`residual`] of the rank-`m` partial sum, `m ≤ sol.rank()`.
pub fn residual_at_rank(sol: &FDSolution, m: usize) -> Scalar {
    let (u, d) = sol.partial_samples(m);
    let lambda = sol.partial_lambda(m);
    let g: Samples = u
        .iter()
        .zip(&sol.nodes.q)
        .map(|(ur, qr)| {
            ur.iter()
                .zip(qr)
                .map(|(uv, qv)| qv * uv - &lambda * uv + sol.spec.eval_nonlinearity(uv))
                .collect()
        })
        .collect();
    let subs = sol.grid.grids().len();
    let prefix = sol.grid.prefix_all(&[&g], 0..subs).pop().expect("one input");
    let kick = sol.spec.beta() * sol.partial_u_at_alpha(m);
    let l = sol.grid.left_count();
    let integrand: Samples = (0..subs)
        .map(|s| {
            (0..u[s].len())
                .map(|i| {
                    let mut v = Scalar::one() - &d[s][i] + &prefix[s][i];
                    if s >= l {
                        v += &kick;
                    }
                    v.abs()
                })
                .collect()
        })
        .collect();
    sol.grid.definite_integral(&integrand)
}

/// `U'(α+0) - U'(α-0) - β U(α)` for the rank-`m` approximation.
pub fn jump_defect(sol: &FDSolution) -> Scalar {
    let b = &sol.basic;
    let base = b.u0_prime_right_of_alpha() - b.eval_u0_prime(&b.alpha) - &b.beta * b.eval_u0(&b.alpha);
    base + sol.corrections.iter().map(|c| c.jump_defect(&b.beta)).sum::<Scalar>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{reference_example, Alpha, PotentialTerm};
    use crate::scalar::tol_digits;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    fn fixed(k: usize) -> SolveOptions {
        SolveOptions { k: Some(k), ..SolveOptions::default() }
    }

    fn smooth_problem() -> ProblemSpec {
        ProblemSpec::new(
            Alpha::new(s("0.37")),
            s("3"),
            vec![PotentialTerm::Polynomial(vec![s("1"), s("-2"), s("0.5")])],
            [(3, s("0.5"))].into_iter().collect(),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn unperturbed_corrections_vanish() {
        let spec = ProblemSpec::unperturbed(Alpha::rational(1, 3).unwrap(), s("15")).unwrap();
        let sol = run_fd(&spec, 2, 4, &fixed(32)).unwrap();
        for c in &sol.corrections {
            assert!(c.lambda.is_zero() && c.c.is_zero() && c.sup_abs_u.is_zero());
        }
        assert_eq!(sol.lambda_m, sol.basic.lambda0);
        assert!(sol.jump_defect.abs() < tol_digits(12));
    }

    #[test]
    fn first_rhs_is_q_u0_plus_n_u0() {
        let spec = smooth_problem();
        let basic = solve_basic(&spec, 1).unwrap();
        let engine = FdEngine::new(&spec, basic, QuadratureParams::new(16, &QuadratureOptions::default()));
        let f = engine.rhs_f();
        for (s, row) in f.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                let u0 = &engine.nodes().u0[s][i];
                let want = &engine.nodes().q[s][i] * u0 + u0.powi(3) * s_half();
                assert!(v.approx_eq(&want, &tol_digits(8)));
            }
        }
    }

    fn s_half() -> Scalar {
        s("0.5")
    }

    #[test]
    fn lambda_ratio_and_orthogonality() {
        let spec = smooth_problem();
        let basic = solve_basic(&spec, 1).unwrap();
        let engine = FdEngine::new(&spec, basic, QuadratureParams::new(48, &QuadratureOptions::default()));
        let u0 = engine.nodes().u0.clone();
        assert!(engine.next_lambda(&u0).approx_eq(&Scalar::one(), &tol_digits(8)));
        let f_tilde = engine.rhs_f();
        let lambda = engine.next_lambda(&f_tilde);
        let f = engine.full_rhs(&f_tilde, &lambda);
        let ortho = engine.grid().definite_integral(&mul(&f, &u0));
        assert!(ortho.abs() < 1e-30);
        let zero: Samples = u0.iter().map(|r| vec![Scalar::zero(); r.len()]).collect();
        assert!(engine.next_lambda(&zero).is_zero());
        assert!(engine.next_c(&zero).unwrap().is_zero());
        // both c relations agree
        let c1 = engine.next_c(&f).unwrap();
        let c2 = engine.c_from_jump_relation(&f);
        assert!(c1.approx_eq(&c2, &s("1e-20")), "{c1} vs {c2}");
    }

    #[test]
    fn correction_conditions() {
        let spec = smooth_problem();
        let sol = run_fd(&spec, 2, 3, &fixed(64)).unwrap();
        for c in &sol.corrections {
            assert!(c.u_alpha_left.approx_eq(&c.u_alpha_right, &s("1e-20")));
            assert!(c.jump_defect(sol.spec.beta()).abs() < 1e-20);
            let first = &c.u[0][0];
            let last = c.u.last().unwrap().last().unwrap();
            assert!(first.abs() < 1e-10 && last.abs() < 1e-10);
        }
        assert!(sol.residual_r < 1e-3);
        assert!(sol.jump_defect.abs() < 1e-10);
    }

    #[test]
    fn resonant_index_uses_resonant_form() {
        let spec = reference_example();
        let sol = run_fd(&spec, 2, 2, &fixed(32)).unwrap();
        assert!(sol.basic.resonant);
        assert!(sol.corrections.iter().all(|c| c.c.is_finite()));
        let c = &sol.corrections[0];
        assert!(c.u_alpha_left.approx_eq(&c.u_alpha_right, &s("1e-20")));
    }

    #[test]
    fn residual_shrinks_with_rank() {
        let spec = smooth_problem().scaled_potential(&s("0.2"));
        let low = run_fd(&spec, 1, 1, &fixed(64)).unwrap();
        let high = run_fd(&spec, 1, 6, &fixed(64)).unwrap();
        assert!(high.residual_r < low.residual_r);
        let exact = run_fd(&ProblemSpec::unperturbed(Alpha::new(s("0.37")), s("3")).unwrap(), 1, 0, &fixed(256)).unwrap();
        assert!(exact.residual_r < 1e-15);
    }
}
