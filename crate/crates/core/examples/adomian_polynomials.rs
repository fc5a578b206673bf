//! Adomian polynomials `A_k` of `N(u) = u^9` and of a mixed polynomial.
//!
//! `A_k` is the `t^k` coefficient of `N(v_0 + v_1 t + v_2 t^2 + …)`.

use std::collections::BTreeMap;

use fdsl::adomian::{adomian_all, majorant_shifted, AdomianAccumulator};
use fdsl::Scalar;

fn main() -> fdsl::Result<()> {
    let jet: Vec<Scalar> = ["0.3", "-0.02", "0.005", "0.0004"].iter().map(|t| Scalar::parse(t)).collect::<Result<_, _>>()?;

    let mut ninth = BTreeMap::new();
    ninth.insert(9, Scalar::one());
    for (k, a) in adomian_all(&ninth, &jet).iter().enumerate() {
        println!("u^9:  A_{k} = {a:.20}");
    }

    // streaming use, as the solver does at every node
    let mut mixed = BTreeMap::new();
    mixed.insert(1, Scalar::parse("2")?);
    mixed.insert(3, Scalar::parse("-0.5")?);
    let mut acc = AdomianAccumulator::new(&mixed);
    for v in &jet {
        let a = acc.push(v);
        println!("2u - u^3/2:  A_{} = {a:.20}", acc.order() - 1);
    }

    // majorant used by the convergence analysis: Σ|a_p|(s0 + v)^p
    let shifted = majorant_shifted(&mixed, &Scalar::parse("0.3")?);
    println!("majorant coefficients about v = 0: {:?}", shifted.coeffs.iter().map(Scalar::to_f64).collect::<Vec<_>>());
    Ok(())
}
