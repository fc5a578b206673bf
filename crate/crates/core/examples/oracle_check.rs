//! Cross-check against the double-precision shooting solver.

use fdsl::oracle::{find_eigenvalue, find_eigenvalue_near, profile};
use fdsl::problem::{reference_example, Alpha, ProblemSpec};
use fdsl::solver::{run_fd, SolveOptions};
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    // free string: λ = π²
    let free = ProblemSpec::unperturbed(Alpha::rational(1, 2)?, Scalar::zero())?;
    let shot = find_eigenvalue(&free, 5.0, 15.0)?;
    println!("free: λ = {:.12} (π² = {:.12})", shot.lambda.to_f64(), std::f64::consts::PI.powi(2));

    let spec = reference_example();
    let fd = run_fd(&spec, 1, 10, &SolveOptions::default())?;
    let shot = find_eigenvalue_near(&spec, fd.lambda_m.to_f64(), 0.1)?;
    println!(
        "reference n = 1: FD {}  shooting {:.12}  |diff| = {:.1e}  ({} steps)",
        fd.lambda_m.to_fixed_string(20),
        shot.lambda.to_f64(),
        (&shot.lambda - &fd.lambda_m).abs().to_f64(),
        shot.steps
    );

    // eigenfunctions agree pointwise as well
    let xs: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
    let u_shot = profile(&spec, shot.lambda.to_f64(), &xs)?;
    let (u_fd, _) = fd.rank_m_samples();
    let nodes = &fd.nodes.x;
    for (x, us) in xs.iter().zip(&u_shot) {
        // nearest FD node
        let (mut best, mut ufd) = (f64::INFINITY, 0.0);
        for (row, urow) in nodes.iter().zip(&u_fd) {
            for (z, u) in row.iter().zip(urow) {
                let d = (z.to_f64() - x).abs();
                if d < best {
                    best = d;
                    ufd = u.to_f64();
                }
            }
        }
        println!("x ≈ {x:.1}: shooting u = {us:+.8}, FD u = {ufd:+.8} (node offset {best:.1e})");
    }
    Ok(())
}
