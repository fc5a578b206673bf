//! Sinc quadrature on conformally mapped grids.
//!
//! On `(a, b)` the nodes are `z_j = (a + b e^{jh}) / (1 + e^{jh})` for
//! `j = -K..=K` with weights `μ_j = (b - a) / (e^{-jh/2} + e^{jh/2})^2`.
//! The tanh rule approximates `∫_a^b f ≈ h Σ f(z_j) μ_j`; Stenger's formula
//! gives the indefinite integrals `∫_a^{z_k} f ≈ h Σ_p δ_{k-p} f(z_p) μ_p`
//! with `δ_k = 1/2 + Si(πk)/π`.

use std::sync::Arc;

use rug::float::Constant;
use rug::{Assign, Float};

use crate::basic::BasicSolution;
use crate::error::{Error, Result};
use crate::problem::ProblemSpec;
use crate::scalar::{working_bits, Scalar};

/// Sine-integral arguments up to this magnitude use the Maclaurin series.
pub const SERIES_LIMIT: f64 = 20.0;

/// `Si(x) = ∫_0^x sin t / t dt` at working precision.
///
/// Maclaurin series for `|x| ≤ 20`; beyond that, `Si(x0)` for some
/// `x0 ∈ (20 - π, 20]` plus Gauss-Legendre panels of length `π`.
pub fn sine_integral(x: &Scalar) -> Scalar {
    if x.is_sign_negative() {
        return -sine_integral(&x.abs());
    }
    let bits = working_bits() + 64;
    let xf = Float::with_val(bits, x.as_float());
    if xf <= SERIES_LIMIT {
        return Scalar::from_float(si_series(&xf, bits));
    }
    let pi = Float::with_val(bits, Constant::Pi);
    let panels = ((xf.to_f64() - SERIES_LIMIT) / std::f64::consts::PI).ceil().max(1.0) as u32;
    let x0 = Float::with_val(bits, &xf - Float::with_val(bits, &pi * panels));
    let mut acc = si_series(&x0, bits);
    let rule = GaussLegendre::adaptive(bits, |rule| {
        // worst panel is the first one, closest to the origin
        rule.integrate(|s| {
            let t = Float::with_val(bits, &x0 + Float::with_val(bits, &pi * s));
            let sin_t = Float::with_val(bits, t.sin_ref());
            sin_t / t
        }) * &pi
    });
    let sines: Vec<Float> = rule
        .nodes
        .iter()
        .map(|s| Float::with_val(bits, (Float::with_val(bits, &x0 + Float::with_val(bits, &pi * s))).sin_ref()))
        .collect();
    for i in 0..panels {
        let start = Float::with_val(bits, &x0 + Float::with_val(bits, &pi * i));
        let mut panel = Float::new(bits);
        for ((s, w), sn) in rule.nodes.iter().zip(&rule.weights).zip(&sines) {
            let t = Float::with_val(bits, &start + Float::with_val(bits, &pi * s));
            panel += Float::with_val(bits, w * sn) / t;
        }
        panel *= &pi;
        if i % 2 == 1 {
            acc -= panel;
        } else {
            acc += panel;
        }
    }
    Scalar::from_float(acc)
}

fn si_series(x: &Float, bits: u32) -> Float {
    let x2 = Float::with_val(bits, x.square_ref());
    let mut term = x.clone(); // x^{2k+1}/(2k+1)!
    let mut sum = x.clone();
    let cutoff = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    let mut k: u32 = 0;
    loop {
        k += 1;
        let a = 2 * k;
        let b = 2 * k + 1;
        term *= &x2;
        term /= a * b;
        term = -term;
        let contrib = Float::with_val(bits, &term / b);
        sum += &contrib;
        if contrib.clone().abs() < Float::with_val(bits, &cutoff * sum.clone().abs()) || k > 10_000 {
            break;
        }
    }
    sum
}

/// Gauss-Legendre rule on `[0, 1]` at a given binary precision.
struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
}

impl GaussLegendre {
    fn new(n: usize, bits: u32) -> Self {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 4));
        for i in 1..=n {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = Float::with_val(bits, guess);
            let mut dp = Float::new(bits);
            for _ in 0..100 {
                let (p, d) = legendre(n, &x, bits);
                let dx = Float::with_val(bits, &p / &d);
                x -= &dx;
                dp = d;
                if dx.abs() < tol {
                    let (_, d) = legendre(n, &x, bits);
                    dp = d;
                    break;
                }
            }
            // map [-1,1] → [0,1]
            let one_minus = Float::with_val(bits, 1 - Float::with_val(bits, x.square_ref()));
            let dp2 = Float::with_val(bits, dp.square_ref());
            let w = Float::with_val(bits, 1 / Float::with_val(bits, &one_minus * &dp2));
            nodes.push(Float::with_val(bits, (Float::with_val(bits, 1 - &x)) / 2));
            weights.push(w);
        }
        GaussLegendre { nodes, weights }
    }

    fn integrate(&self, f: impl Fn(&Float) -> Float) -> Float {
        let bits = self.nodes.first().map_or(64, Float::prec);
        let mut acc = Float::new(bits);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += Float::with_val(bits, f(x) * w);
        }
        acc
    }

    /// Smallest rule (16, 32, ...) whose `probe` value agrees with the next doubling.
    fn adaptive(bits: u32, probe: impl Fn(&GaussLegendre) -> Float) -> Self {
        let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 48));
        let mut n = 16;
        let mut rule = GaussLegendre::new(n, bits);
        let mut value = probe(&rule);
        loop {
            let next = GaussLegendre::new(2 * n, bits);
            let next_value = probe(&next);
            let diff = Float::with_val(bits, &next_value - &value).abs();
            if diff < tol || n >= 512 {
                return rule;
            }
            n *= 2;
            rule = next;
            value = next_value;
        }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float, bits: u32) -> (Float, Float) {
    let mut p0 = Float::with_val(bits, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let t = Float::with_val(bits, x * &p1) * (2 * k - 1);
        let p2 = (t - Float::with_val(bits, &p0 * (k - 1))) / k;
        p0 = p1;
        p1 = p2;
    }
    let num = Float::with_val(bits, x * &p1) - &p0;
    let den = Float::with_val(bits, x.square_ref()) - 1;
    let d = Float::with_val(bits, num * n as u32) / den;
    (p1, d)
}

/// Table of Stenger coefficients `δ_k`, `k = -2K..=2K`.
#[derive(Clone, Debug)]
pub struct StengerTable {
    k_max: usize,
    deltas: Vec<Float>,
}

impl StengerTable {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "K must be positive");
        let bits = working_bits() + 32;
        let span = 2 * k;
        let pi = Float::with_val(bits, Constant::Pi);
        let half = Float::with_val(bits, 0.5);
        let mut positive = Vec::with_capacity(span + 1); // Si(πm) for m = 0..=span
        positive.push(Float::new(bits));
        let series_top = ((SERIES_LIMIT / std::f64::consts::PI).floor() as usize).min(span);
        for m in 1..=series_top {
            positive.push(si_series(&Float::with_val(bits, &pi * m as u32), bits));
        }
        if span > series_top {
            // ∫_{πi}^{π(i+1)} sin t/t dt = (-1)^i ∫_0^1 sin(πs)/(i+s) ds
            let first = series_top as u32;
            let rule = GaussLegendre::adaptive(bits, |r| {
                r.integrate(|s| {
                    let sn = Float::with_val(bits, Float::with_val(bits, &pi * s).sin_ref());
                    sn / Float::with_val(bits, s + first)
                })
            });
            let weighted: Vec<Float> = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(s, w)| Float::with_val(bits, Float::with_val(bits, &pi * s).sin_ref()) * w)
                .collect();
            let mut acc = positive[series_top].clone();
            for i in series_top..span {
                let mut panel = Float::new(bits);
                for (s, ws) in rule.nodes.iter().zip(&weighted) {
                    panel += Float::with_val(bits, ws / Float::with_val(bits, s + i as u32));
                }
                if i % 2 == 1 {
                    acc -= panel;
                } else {
                    acc += panel;
                }
                positive.push(acc.clone());
            }
        }
        let wb = working_bits();
        let mut deltas = vec![Float::new(wb); 2 * span + 1];
        for (m, si) in positive.iter().enumerate() {
            let d = Float::with_val(bits, &half + Float::with_val(bits, si / &pi));
            let neg = Float::with_val(bits, 1 - &d);
            deltas[span + m] = Float::with_val(wb, &d);
            deltas[span - m] = Float::with_val(wb, &neg);
        }
        deltas[span] = Float::with_val(wb, 0.5);
        StengerTable { k_max: k, deltas }
    }

    pub fn k(&self) -> usize {
        self.k_max
    }

    /// `δ_m` for `|m| ≤ 2K`.
    pub fn delta(&self, m: i64) -> Scalar {
        Scalar::from_float(self.raw(m).clone())
    }

    fn raw(&self, m: i64) -> &Float {
        &self.deltas[(m + 2 * self.k_max as i64) as usize]
    }
}

/// Sinc grid on one interval.
#[derive(Clone, Debug)]
pub struct SincGrid {
    a: Scalar,
    b: Scalar,
    k: usize,
    h: Scalar,
    nodes: Vec<Scalar>,
    weights: Vec<Scalar>,
    // distance from each node to the nearer interval end
    edge_gap: Vec<Scalar>,
}

impl SincGrid {
    /// Grid with `h = sqrt(π d / (μ K))`.
    pub fn build(a: Scalar, b: Scalar, k: usize, d: &Scalar, mu: &Scalar) -> Self {
        let h = step_size(k, d, mu);
        Self::with_step(a, b, k, h)
    }

    pub fn with_step(a: Scalar, b: Scalar, k: usize, h: Scalar) -> Self {
        let len = &b - &a;
        let n = 2 * k + 1;
        let mut nodes = vec![Scalar::zero(); n];
        let mut weights = vec![Scalar::zero(); n];
        let mut edge_gap = vec![Scalar::zero(); n];
        for j in 0..=k {
            let e = (&h * j as i32).exp();
            let one_plus = Scalar::one() + &e;
            let gap = &len / &one_plus;
            let w = &len * &e / one_plus.square();
            nodes[k + j] = &b - &gap;
            nodes[k - j] = &a + &gap;
            weights[k + j] = w.clone();
            weights[k - j] = w;
            edge_gap[k + j] = gap.clone();
            edge_gap[k - j] = gap;
        }
        SincGrid { a, b, k, h, nodes, weights, edge_gap }
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> &Scalar {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes `z_{-K}..z_K`.
    pub fn nodes(&self) -> &[Scalar] {
        &self.nodes
    }

    /// Weights `μ_{-K}..μ_K` (without the factor `h`).
    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    /// `z_j` for `j ∈ [-K, K]`.
    pub fn node(&self, j: i64) -> &Scalar {
        &self.nodes[(j + self.k as i64) as usize]
    }

    /// Whether node `i` (storage index) rounds onto an interval end at
    /// working precision; samples there are taken as zero.
    pub fn is_degenerate(&self, i: usize) -> bool {
        self.nodes[i] == self.a || self.nodes[i] == self.b
    }

    /// Distance from node `i` to the nearer interval end.
    pub fn edge_gap(&self, i: usize) -> &Scalar {
        &self.edge_gap[i]
    }

    /// Tanh rule `h Σ f(z_j) μ_j` over samples indexed by storage order.
    pub fn definite_integral(&self, samples: &[Scalar]) -> Scalar {
        assert_eq!(samples.len(), self.len(), "one sample per node");
        let mut acc = Float::new(working_bits());
        let mut tmp = Float::new(working_bits());
        for (f, w) in samples.iter().zip(&self.weights) {
            tmp.assign(f.as_float() * w.as_float());
            acc += &tmp;
        }
        Scalar::from_float(acc) * &self.h
    }

    /// Stenger indefinite integral at node `j ∈ [-K, K]`.
    pub fn indefinite_integral(
        &self,
        table: &StengerTable,
        samples: &[Scalar],
        j: i64,
        orientation: Orientation,
    ) -> Scalar {
        let k = self.k as i64;
        let mut acc = Float::new(working_bits());
        let mut tmp = Float::new(working_bits());
        for p in -k..=k {
            let idx = (p + k) as usize;
            let m = match orientation {
                Orientation::FromLeft => j - p,
                Orientation::FromRight => p - j,
            };
            tmp.assign(samples[idx].as_float() * self.weights[idx].as_float());
            tmp *= table.raw(m);
            acc += &tmp;
        }
        Scalar::from_float(acc) * &self.h
    }

    /// Stenger integrals at every node in one pass.
    pub fn indefinite_all(&self, table: &StengerTable, samples: &[Scalar], orientation: Orientation) -> Vec<Scalar> {
        self.indefinite_all_many(table, &[samples], orientation).pop().expect("one input")
    }

    /// Like [`indefinite_all`](Self::indefinite_all) for several sample vectors sharing the δ lookups.
    pub fn indefinite_all_many(
        &self,
        table: &StengerTable,
        inputs: &[&[Scalar]],
        orientation: Orientation,
    ) -> Vec<Vec<Scalar>> {
        assert!(table.k() >= self.k, "Stenger table too small for grid");
        let bits = working_bits();
        let n = self.len();
        let weighted: Vec<Vec<Float>> = inputs
            .iter()
            .map(|s| {
                assert_eq!(s.len(), n, "one sample per node");
                s.iter()
                    .zip(&self.weights)
                    .map(|(f, w)| Float::with_val(bits, f.as_float() * w.as_float()))
                    .collect()
            })
            .collect();
        let k = self.k as i64;
        let mut out: Vec<Vec<Scalar>> = vec![Vec::with_capacity(n); inputs.len()];
        let mut acc: Vec<Float> = vec![Float::new(bits); inputs.len()];
        let mut tmp = Float::new(bits);
        for j in -k..=k {
            for a in acc.iter_mut() {
                a.assign(0);
            }
            for p in -k..=k {
                let m = match orientation {
                    Orientation::FromLeft => j - p,
                    Orientation::FromRight => p - j,
                };
                let delta = table.raw(m);
                let idx = (p + k) as usize;
                for (a, g) in acc.iter_mut().zip(&weighted) {
                    tmp.assign(delta * &g[idx]);
                    *a += &tmp;
                }
            }
            for (o, a) in out.iter_mut().zip(&acc) {
                o.push(Scalar::from_float(a.clone()) * &self.h);
            }
        }
        out
    }
}

/// Direction of a Stenger indefinite integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `∫_a^{z_k}`
    FromLeft,
    /// `∫_{z_k}^b`
    FromRight,
}

/// `h = sqrt(π d / (μ K))`.
pub fn step_size(k: usize, d: &Scalar, mu: &Scalar) -> Scalar {
    (Scalar::pi() * d / (mu * k as i32)).sqrt()
}

/// Quadrature tuning: strip width `d ∈ (0, π)` and endpoint decay rate `μ > 0`.
#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    pub d: Scalar,
    pub mu: Scalar,
    /// First `K` tried by [`choose_parameters`].
    pub k_start: usize,
    /// Largest admissible `K`.
    pub k_cap: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { d: Scalar::pi() / 2, mu: Scalar::from_ratio(1, 2), k_start: 32, k_cap: 1 << 14 }
    }
}

/// Chosen `K` and step `h` shared by every subinterval.
#[derive(Clone, Debug)]
pub struct QuadratureParams {
    pub k: usize,
    pub h: Scalar,
}

impl QuadratureParams {
    pub fn new(k: usize, opts: &QuadratureOptions) -> Self {
        QuadratureParams { k, h: step_size(k, &opts.d, &opts.mu) }
    }
}

/// Sinc grids on the subintervals between consecutive problem edges.
#[derive(Clone, Debug)]
pub struct CompositeGrid {
    edges: Vec<Scalar>,
    grids: Vec<SincGrid>,
    alpha_edge: usize,
    table: Arc<StengerTable>,
}

impl CompositeGrid {
    /// Grids for `spec`'s subintervals. `α` is always an edge.
    pub fn new(spec: &ProblemSpec, params: &QuadratureParams) -> Self {
        let edges = spec.subinterval_edges();
        let table = Arc::new(StengerTable::new(params.k));
        Self::from_edges(edges, spec.alpha().value(), params, table)
    }

    pub fn from_edges(edges: Vec<Scalar>, alpha: &Scalar, params: &QuadratureParams, table: Arc<StengerTable>) -> Self {
        let alpha_edge = edges.iter().position(|e| e == alpha).unwrap_or(edges.len() - 1);
        let grids = edges
            .windows(2)
            .map(|w| SincGrid::with_step(w[0].clone(), w[1].clone(), params.k, params.h.clone()))
            .collect();
        CompositeGrid { edges, grids, alpha_edge, table }
    }

    pub fn edges(&self) -> &[Scalar] {
        &self.edges
    }

    pub fn grids(&self) -> &[SincGrid] {
        &self.grids
    }

    pub fn table(&self) -> &StengerTable {
        &self.table
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    /// Number of subintervals left of `α`.
    pub fn left_count(&self) -> usize {
        self.alpha_edge
    }

    pub fn is_left(&self, sub: usize) -> bool {
        sub < self.alpha_edge
    }

    /// Samples `f(z)` at every node, subinterval by subinterval.
    pub fn sample(&self, mut f: impl FnMut(usize, usize, &Scalar) -> Scalar) -> Vec<Vec<Scalar>> {
        self.grids
            .iter()
            .enumerate()
            .map(|(s, g)| g.nodes().iter().enumerate().map(|(i, z)| f(s, i, z)).collect())
            .collect()
    }

    /// Full-subinterval tanh-rule values.
    pub fn subinterval_integrals(&self, samples: &[Vec<Scalar>]) -> Vec<Scalar> {
        self.grids.iter().zip(samples).map(|(g, s)| g.definite_integral(s)).collect()
    }

    /// `∫_0^1 f` as the sum of subinterval tanh rules.
    pub fn definite_integral(&self, samples: &[Vec<Scalar>]) -> Scalar {
        self.subinterval_integrals(samples).into_iter().sum()
    }

    /// `∫_0^α f`.
    pub fn integral_left_of_alpha(&self, samples: &[Vec<Scalar>]) -> Scalar {
        self.grids[..self.alpha_edge]
            .iter()
            .zip(samples)
            .map(|(g, s)| g.definite_integral(s))
            .sum()
    }

    /// `∫_α^1 f`.
    pub fn integral_right_of_alpha(&self, samples: &[Vec<Scalar>]) -> Scalar {
        self.grids[self.alpha_edge..]
            .iter()
            .zip(&samples[self.alpha_edge..])
            .map(|(g, s)| g.definite_integral(s))
            .sum()
    }

    /// `∫_0^{z} f` at node `(sub, j)`, `j ∈ [-K, K]`.
    pub fn prefix_integral(&self, samples: &[Vec<Scalar>], sub: usize, j: i64) -> Scalar {
        let before: Scalar = self.grids[..sub]
            .iter()
            .zip(samples)
            .map(|(g, s)| g.definite_integral(s))
            .sum();
        before + self.grids[sub].indefinite_integral(&self.table, &samples[sub], j, Orientation::FromLeft)
    }

    /// `∫_0^{z} f` at every node of the listed subintervals (others left empty).
    pub fn prefix_all(&self, inputs: &[&[Vec<Scalar>]], subs: std::ops::Range<usize>) -> Vec<Vec<Vec<Scalar>>> {
        let totals: Vec<Vec<Scalar>> = inputs.iter().map(|s| self.subinterval_integrals(s)).collect();
        let mut out = vec![vec![Vec::new(); self.grids.len()]; inputs.len()];
        for sub in subs {
            let before: Vec<Scalar> = totals.iter().map(|t| t[..sub].iter().sum()).collect();
            let samples: Vec<&[Scalar]> = inputs.iter().map(|s| s[sub].as_slice()).collect();
            let local = self.grids[sub].indefinite_all_many(&self.table, &samples, Orientation::FromLeft);
            for (i, vals) in local.into_iter().enumerate() {
                out[i][sub] = vals.into_iter().map(|v| v + &before[i]).collect();
            }
        }
        out
    }

    /// `∫_z^1 f` at every node of the listed subintervals (others left empty).
    pub fn suffix_all(&self, inputs: &[&[Vec<Scalar>]], subs: std::ops::Range<usize>) -> Vec<Vec<Vec<Scalar>>> {
        let totals: Vec<Vec<Scalar>> = inputs.iter().map(|s| self.subinterval_integrals(s)).collect();
        let mut out = vec![vec![Vec::new(); self.grids.len()]; inputs.len()];
        for sub in subs {
            let after: Vec<Scalar> = totals.iter().map(|t| t[sub + 1..].iter().sum()).collect();
            let samples: Vec<&[Scalar]> = inputs.iter().map(|s| s[sub].as_slice()).collect();
            let local = self.grids[sub].indefinite_all_many(&self.table, &samples, Orientation::FromRight);
            for (i, vals) in local.into_iter().enumerate() {
                out[i][sub] = vals.into_iter().map(|v| v + &after[i]).collect();
            }
        }
        out
    }
}

/// Plain tanh-rule helpers.
pub mod tanh_rule {
    use super::*;

    /// `∫_a^b f` by the tanh rule with `K` doubled from 16 until successive
    /// values differ by less than `tol` (or `cap` is reached).
    pub fn adaptive(f: &dyn Fn(&Scalar) -> Scalar, a: &Scalar, b: &Scalar, tol: &Scalar, cap: usize) -> Scalar {
        let opts = QuadratureOptions::default();
        let mut k = 16;
        let mut prev = once(f, a, b, k, &opts);
        loop {
            k *= 2;
            let next = once(f, a, b, k, &opts);
            if (&next - &prev).abs() < *tol || k >= cap {
                return next;
            }
            prev = next;
        }
    }

    /// One tanh-rule evaluation with `K` nodes per side.
    pub fn once(f: &dyn Fn(&Scalar) -> Scalar, a: &Scalar, b: &Scalar, k: usize, opts: &QuadratureOptions) -> Scalar {
        let grid = SincGrid::build(a.clone(), b.clone(), k, &opts.d, &opts.mu);
        let samples: Vec<Scalar> = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, z)| if grid.is_degenerate(i) { Scalar::zero() } else { f(z) })
            .collect();
        grid.definite_integral(&samples)
    }
}

/// Value of the probe `∫_0^1 (q + u0 + N(u0))` on a composite grid with `K` nodes per side.
pub fn probe_integral(spec: &ProblemSpec, basic: &BasicSolution, k: usize, opts: &QuadratureOptions) -> Scalar {
    let params = QuadratureParams::new(k, opts);
    let edges = spec.subinterval_edges();
    let mut total = Scalar::zero();
    for w in edges.windows(2) {
        let grid = SincGrid::with_step(w[0].clone(), w[1].clone(), k, params.h.clone());
        let samples: Vec<Scalar> = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if grid.is_degenerate(i) {
                    return Scalar::zero();
                }
                let u0 = basic.eval_u0(z);
                let q = spec.eval_potential_on_grid(z);
                q + spec.eval_nonlinearity(&u0) + u0
            })
            .collect();
        total += grid.definite_integral(&samples);
    }
    total
}

/// A-posteriori choice of `K`: starting from `opts.k_start`, doubles `K`
/// until the probe integral changes by less than `eps`, and returns the first
/// `K` whose value is confirmed by its doubling.
pub fn choose_parameters(
    spec: &ProblemSpec,
    basic: &BasicSolution,
    eps: &Scalar,
    opts: &QuadratureOptions,
) -> Result<QuadratureParams> {
    let mut k = opts.k_start.max(4);
    if k > opts.k_cap {
        return Err(Error::ParameterSearchExhausted { cap: opts.k_cap });
    }
    let mut prev = probe_integral(spec, basic, k, opts);
    loop {
        let next_k = 2 * k;
        if next_k > opts.k_cap {
            return Err(Error::ParameterSearchExhausted { cap: opts.k_cap });
        }
        let next = probe_integral(spec, basic, next_k, opts);
        if (&next - &prev).abs() < *eps {
            log::debug!("quadrature K = {k} (probe change {})", (&next - &prev).abs().to_sig_string(3));
            return Ok(QuadratureParams::new(k, opts));
        }
        k = next_k;
        prev = next;
    }
}

/// Digits of agreement expected from a tanh rule with `K` nodes per side.
pub fn nominal_error(k: usize, opts: &QuadratureOptions) -> f64 {
    (-(std::f64::consts::PI * opts.d.to_f64() * opts.mu.to_f64() * k as f64).sqrt()).exp()
}
