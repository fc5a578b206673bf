//! Sinc quadrature on a finite interval: the tanh rule for an endpoint
//! singularity and Stenger's indefinite integral.

use fdsl::sinc::{nominal_error, sine_integral, tanh_rule, Orientation, QuadratureOptions, SincGrid, StengerTable};
use fdsl::Scalar;

fn main() {
    let opts = QuadratureOptions::default();
    let (a, b) = (Scalar::zero(), Scalar::one());

    println!("∫_0^1 dx/sqrt(x) = 2");
    for k in [16, 64, 256, 1024] {
        let got = tanh_rule::once(&|x: &Scalar| x.sqrt().recip(), &a, &b, k, &opts);
        println!("  K = {k:>5}: error {:.3e} (nominal {:.1e})", (got - 2).abs().to_f64(), nominal_error(k, &opts));
    }

    println!("\n∫_0^x sin t dt = 1 - cos x at the nodes");
    for k in [25, 100, 400] {
        let grid = SincGrid::build(a.clone(), b.clone(), k, &opts.d, &opts.mu);
        let table = StengerTable::new(k);
        let f: Vec<Scalar> = grid.nodes().iter().map(Scalar::sin).collect();
        let left = grid.indefinite_all(&table, &f, Orientation::FromLeft);
        let right = grid.indefinite_all(&table, &f, Orientation::FromRight);
        let mut worst = Scalar::zero();
        for ((x, l), r) in grid.nodes().iter().zip(&left).zip(&right) {
            worst = worst.max((Scalar::one() - x.cos() - l).abs());
            worst = worst.max((x.cos() - b.cos() - r).abs());
        }
        println!("  K = {k:>4}: max node error {:.3e}", worst.to_f64());
    }

    println!("\nSi(π) = {:.30}", sine_integral(&Scalar::pi()));
}
