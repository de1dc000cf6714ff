//! Integrate the affine background and print a, a', and the growth ratio.

use affine_vacuum::background::{gamma_exponents, AffineMotion, Horizon};

fn main() -> affine_vacuum::Result<()> {
    for gamma in [1.4, 5.0 / 3.0, 2.0] {
        let m = AffineMotion::integrate(gamma, 1.0, 1.0, Horizon::Tau(6.0), 1e-12)?;
        let ex = gamma_exponents(gamma)?;
        println!("gamma = {gamma:.4}  a0 = {:.6}  above 5/3: {}", m.a0_rate, ex.above_five_thirds());
        for tau in [0.0, 2.0, 4.0, 6.0] {
            let s = m.at_tau(tau)?;
            println!("  tau {tau:4.1}  t {:10.4}  a {:12.5e}  a' {:10.5}", s.t, s.a, s.a_t);
        }
    }
    Ok(())
}
