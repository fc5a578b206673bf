//! A potential outside the built-in term algebra, supplied as a callback.
//! Its L1 norm falls back to adaptive quadrature.

use std::collections::BTreeMap;
use std::sync::Arc;

use fdsl::problem::{Alpha, CustomPotential, PotentialTerm, ProblemSpec};
use fdsl::solver::{run_fd, SolveOptions};
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    // q(x) = ln(1 + x) / 2
    let log_term = PotentialTerm::Custom(CustomPotential {
        name: "log1p".into(),
        eval: Arc::new(|x: &Scalar| (Scalar::one() + x).ln() / 2),
        singular_points: Vec::new(),
    });
    let mut nl = BTreeMap::new();
    nl.insert(3, Scalar::parse("0.1")?);
    let spec = ProblemSpec::new(Alpha::new(Scalar::parse("0.3")?), Scalar::parse("1.5")?, vec![log_term], nl, vec![])?;
    println!("‖q‖ = {:.20}", spec.q_l1_norm());
    for n in 1..=3 {
        let sol = run_fd(&spec, n, 8, &SolveOptions::default())?;
        println!("n = {n}: K = {:>4}, λ = {}, r = {:.1e}", sol.params.k, sol.lambda_m.to_fixed_string(22), sol.residual_r.to_f64());
    }
    Ok(())
}
