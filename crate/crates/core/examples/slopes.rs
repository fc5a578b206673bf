//! Log-linear fits of the correction sizes and residuals against the rank.
//!
//! ```bash
//! cargo run --release -p fdsl --example slopes -- 1 5 10
//! ```

use fdsl::cli::slopes_of;
use fdsl::problem::reference_example;
use fdsl::solver::{run_fd, SolveOptions};

fn main() -> fdsl::Result<()> {
    let ns: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ns = if ns.is_empty() { vec![1, 5, 10] } else { ns };
    let spec = reference_example();
    println!("{:>3} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7} {:>7}", "n", "a_u", "b_u", "e_u", "a_lam", "b_lam", "e_lam", "a_r", "b_r", "e_r");
    for n in ns {
        let sol = run_fd(&spec, n, 10, &SolveOptions::default())?;
        let residuals = sol.residual_history();
        match slopes_of(&sol, &residuals) {
            Some(f) => println!(
                "{n:>3} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2} {:>7.2}",
                f.u.slope, f.u.intercept, f.u.deviation, f.lambda.slope, f.lambda.intercept, f.lambda.deviation, f.r.slope, f.r.intercept, f.r.deviation
            ),
            None => println!("{n:>3} (zero in a history)"),
        }
    }
    Ok(())
}
