//! A-priori convergence constants for the reference problem, `n = 1..=10`:
//! `v̄0`, `R`, `r_n` and, where `r_n < 1`, the error bounds.

use fdsl::analysis::{convergence_report, error_bounds};
use fdsl::basic::solve_basic;
use fdsl::problem::reference_example;
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    for (label, spec) in [("reference", reference_example()), ("q/100, N = 0", reference_example().scaled_potential(&Scalar::parse("0.01")?).linearized())] {
        println!("{label}");
        println!("{:>3} {:>8} {:>8} {:>8} {:>10} {:>10}   bounds (m = 10)", "n", "v0", "M", "c~", "R", "r_n");
        for n in 1..=10 {
            let basic = solve_basic(&spec, n)?;
            let rep = convergence_report(&spec, &basic, Some(10))?;
            let bounds = match error_bounds(&rep, 10) {
                Ok(b) => format!("|λ err| ≤ {:.2e}, |u err| ≤ {:.2e}", b.eigenvalue.to_f64(), b.eigenfunction.to_f64()),
                Err(_) => "r_n ≥ 1".to_string(),
            };
            println!(
                "{n:>3} {:>8.3} {:>8.4} {:>8.4} {:>10.3e} {:>10.4}   {bounds}",
                rep.v0_bar.to_f64(),
                rep.m_n.to_f64(),
                rep.c_tilde.to_f64(),
                rep.radius.to_f64(),
                rep.r_n.to_f64()
            );
        }
        println!();
    }
    Ok(())
}
