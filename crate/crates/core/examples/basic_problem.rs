//! The unperturbed problem: only the point interaction is kept.
//!
//! Prints `λ0`, `c0`, `M` and `c̃` for a few `n`, with and without resonance.

use fdsl::basic::{characteristic, solve_basic};
use fdsl::problem::{Alpha, ProblemSpec};
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    let beta = Scalar::parse("2")?;
    for alpha in [Alpha::rational(1, 2)?, Alpha::new(Scalar::parse("0.3718")?)] {
        let spec = ProblemSpec::unperturbed(alpha.clone(), beta.clone())?;
        println!("alpha = {}, beta = 2", alpha.value().to_f64());
        println!("{:>3} {:>28} {:>12} {:>10} {:>10} {:>9}", "n", "lambda0", "c0", "M", "c~", "resonant");
        for n in 1..=6 {
            let b = solve_basic(&spec, n)?;
            let g = characteristic(&b.y, alpha.value(), &beta);
            assert!(g.abs() < 1e-30);
            println!(
                "{n:>3} {:>28} {:>12.8} {:>10.6} {:>10.6} {:>9}",
                b.lambda0.to_fixed_string(24),
                b.c0.to_f64(),
                b.m.to_f64(),
                b.c_tilde.to_f64(),
                b.resonant
            );
        }
        println!();
    }

    // u0 itself, continuous at α with a kink of size β u0(α)
    let spec = ProblemSpec::unperturbed(Alpha::rational(1, 2)?, beta.clone())?;
    let b = solve_basic(&spec, 1)?;
    for i in 0..=10 {
        let x = Scalar::from_ratio(i, 10);
        println!("x = {:.1}  u0 = {:>12.8}  u0' = {:>12.8}", x.to_f64(), b.eval_u0(&x).to_f64(), b.eval_u0_prime(&x).to_f64());
    }
    let sup = b.u0_sup_norm();
    println!("sup|u0| = {:.10} (bound {:.10})", sup.attained.to_f64(), sup.bound.to_f64());
    Ok(())
}
