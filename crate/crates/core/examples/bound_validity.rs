//! With a weak potential the rate `r_n` drops below one and the a-priori
//! bounds become finite. Compare them with the observed errors.

use fdsl::analysis::{convergence_report, error_bounds, majorant_domination};
use fdsl::basic::solve_basic;
use fdsl::problem::reference_example;
use fdsl::solver::{run_fd, SolveOptions};
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    let spec = reference_example().scaled_potential(&Scalar::parse("0.01")?).linearized();
    let n = (1..=20)
        .find(|&n| {
            let b = solve_basic(&spec, n).expect("basic problem");
            convergence_report(&spec, &b, None).map(|r| r.converged).unwrap_or(false)
        })
        .expect("some r_n < 1");
    let sol = run_fd(&spec, n, 14, &SolveOptions::default())?;
    let rep = convergence_report(&spec, &sol.basic, None)?;
    println!("n = {n}, r_n = {:.4}, λ = {}", rep.r_n.to_f64(), sol.lambda_m.to_fixed_string(24));
    println!("{:>3} {:>12} {:>12}", "m", "|λ - λ^m|", "bound");
    for m in 1..=8 {
        let err = (&sol.lambda_m - sol.partial_lambda(m)).abs();
        let bound = error_bounds(&rep, m)?.eigenvalue;
        println!("{m:>3} {:>12.3e} {:>12.3e}", err.to_f64(), bound.to_f64());
    }
    println!("\n{:>3} {:>12} {:>12} {:>12} {:>12}", "j", "a^-j b|u|", "v_j", "a^1-j |λ|", "mu_j");
    for row in majorant_domination(&spec, &sol.basic, &sol.corrections) {
        println!(
            "{:>3} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
            row.order,
            row.scaled_u.to_f64(),
            row.v_bar.to_f64(),
            row.scaled_lambda.to_f64(),
            row.mu_bar.to_f64()
        );
    }
    Ok(())
}
