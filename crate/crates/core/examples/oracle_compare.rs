//! Compare the perturbation solver with the Lagrangian referee.

use affine_vacuum::harness::{oracle_rows, ScenarioConfig, ScenarioKind};

fn main() -> affine_vacuum::Result<()> {
    let cfg = ScenarioConfig::new(ScenarioKind::OracleCompare);
    for row in oracle_rows(&cfg, &[64, 128, 256])? {
        println!("n = {:4}  rel sup {:.3e}  rel perturbation {:.3e}", row.n, row.rel_sup, row.rel_perturbation);
    }
    Ok(())
}
