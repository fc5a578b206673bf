//! Eigenvalues of the reference problem at rank 10 for `n = 1..=N`.
//!
//! ```bash
//! cargo run --release -p fdsl --example reference_table -- 3
//! ```

use std::time::Instant;

use fdsl::problem::reference_example;
use fdsl::solver::{run_fd, SolveOptions};

fn main() -> fdsl::Result<()> {
    let top: u32 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10);
    let spec = reference_example();
    let opts = SolveOptions::default();
    println!("{:>3} {:>5} {:>30} {:>12} {:>10}", "n", "K", "lambda_10", "residual", "secs");
    for n in 1..=top {
        let t = Instant::now();
        let sol = run_fd(&spec, n, 10, &opts)?;
        println!(
            "{n:>3} {:>5} {:>30} {:>12} {:>10.2}",
            sol.params.k,
            sol.lambda_m.to_sig_string(24),
            sol.residual_r.to_sig_string(3),
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
