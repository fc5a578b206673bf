//! Adomian polynomials of a polynomial nonlinearity.
//!
//! `A_k(N; v_0, …, v_k)` is the coefficient of `t^k` in `N(Σ_p v_p t^p)`.

use std::collections::BTreeMap;

use rug::{Assign, Float};
use serde::Serialize;

use crate::scalar::{working_bits, Scalar};

/// Incrementally built Adomian polynomials for one jet.
///
/// Keeps the truncated series of `v^p` for every degree present in `N`, so
/// pushing `v_k` costs `O(k · deg N)` multiplications.
#[derive(Clone, Debug)]
pub struct AdomianAccumulator {
    terms: Vec<(u32, Scalar)>,
    max_degree: usize,
    jet: Vec<Float>,
    // powers[p - 1][k] = coefficient of t^k in (Σ v_i t^i)^p
    powers: Vec<Vec<Float>>,
}

impl AdomianAccumulator {
    pub fn new(nonlinearity: &BTreeMap<u32, Scalar>) -> Self {
        Self::from_terms(nonlinearity.iter().map(|(p, a)| (*p, a.clone())).collect())
    }

    /// Dense coefficients, index = degree (degree 0 allowed).
    pub fn from_dense(coeffs: &[Scalar]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(p, a)| (p as u32, a.clone()))
                .collect(),
        )
    }

    fn from_terms(terms: Vec<(u32, Scalar)>) -> Self {
        let max_degree = terms.iter().map(|(p, _)| *p as usize).max().unwrap_or(0);
        AdomianAccumulator { terms, max_degree, jet: Vec::new(), powers: vec![Vec::new(); max_degree] }
    }

    /// Number of jet entries pushed so far.
    pub fn order(&self) -> usize {
        self.jet.len()
    }

    /// Appends `v_k` and returns `A_k`.
    pub fn push(&mut self, v: &Scalar) -> Scalar {
        let bits = working_bits();
        let k = self.jet.len();
        self.jet.push(v.as_float().clone());
        let mut tmp = Float::new(bits);
        for p in 0..self.max_degree {
            let value = if p == 0 {
                v.as_float().clone()
            } else {
                let prev = &self.powers[p - 1];
                let mut acc = Float::new(bits);
                for i in 0..=k {
                    tmp.assign(&prev[i] * &self.jet[k - i]);
                    acc += &tmp;
                }
                acc
            };
            self.powers[p].push(value);
        }
        let mut out = Float::new(bits);
        for (p, a) in &self.terms {
            if *p == 0 {
                if k == 0 {
                    out += a.as_float();
                }
            } else {
                tmp.assign(a.as_float() * &self.powers[*p as usize - 1][k]);
                out += &tmp;
            }
        }
        Scalar::from_float(out)
    }
}

/// `A_0, …, A_k` for the jet `v_0, …, v_k`.
pub fn adomian_all(nonlinearity: &BTreeMap<u32, Scalar>, jet: &[Scalar]) -> Vec<Scalar> {
    assert!(!jet.is_empty(), "jet must be nonempty");
    let mut acc = AdomianAccumulator::new(nonlinearity);
    jet.iter().map(|v| acc.push(v)).collect()
}

/// `Ñ1(v) = Σ |a_p| (s0 + v)^p`, re-expanded about `v = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct MajorantNonlinearity {
    /// Dense coefficients, index = degree.
    pub coeffs: Vec<Scalar>,
    pub shift: Scalar,
}

impl MajorantNonlinearity {
    pub fn eval(&self, v: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * v + c)
    }

    pub fn derivative(&self, v: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Scalar::zero(), |acc, (p, c)| acc * v + c * p as i32)
    }

    /// `Ñ1(0)`.
    pub fn value_at_zero(&self) -> Scalar {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// `Ñ1'(0)`.
    pub fn slope_at_zero(&self) -> Scalar {
        self.coeffs.get(1).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn accumulator(&self) -> AdomianAccumulator {
        AdomianAccumulator::from_dense(&self.coeffs)
    }
}

/// Binomial re-expansion of `Σ |a_p| (s0 + v)^p`.
pub fn majorant_shifted(nonlinearity: &BTreeMap<u32, Scalar>, shift: &Scalar) -> MajorantNonlinearity {
    let degree = nonlinearity.keys().max().copied().unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(); if nonlinearity.is_empty() { 0 } else { degree + 1 }];
    for (p, a) in nonlinearity {
        let p = *p as usize;
        let a = a.abs();
        let mut binom = Scalar::one();
        for i in 0..=p {
            // C(p, i) s0^{p-i}
            coeffs[i] += &a * &binom * shift.powi((p - i) as i32);
            binom = binom * (p - i) as i32 / (i as i32 + 1);
        }
    }
    MajorantNonlinearity { coeffs, shift: shift.clone() }
}
