//! Refinement study of the operator identities with their observed orders.

use affine_vacuum::harness::operators::operator_studies;

fn main() -> affine_vacuum::Result<()> {
    for s in operator_studies(1.4, 4, 2, &[32, 64, 128, 256])? {
        let last = s.residual.last().copied().unwrap_or(f64::NAN);
        println!("{:<16} {:<10} k={}  residual {:.2e}  order {:.2}", s.identity, s.profile, s.index, last, s.order);
    }
    Ok(())
}
