//! Evolve small data and watch the normalized size stay bounded while the
//! energy decays.

use affine_vacuum::harness::{stability_outcome, ScenarioConfig, ScenarioKind};

fn main() -> affine_vacuum::Result<()> {
    let mut cfg = ScenarioConfig::new(ScenarioKind::StabilityRun);
    cfg.n = 128;
    cfg.initial.epsilon = 1e-4;
    cfg.initial.lambda = 1e-4;
    let out = stability_outcome(&cfg)?;
    println!("sup S^N = {:.4e}   C* = {:.4}", out.sup_sn, out.c_star);
    println!("decay rate = {:.4}  ({:.3} of a0 = {:.4})", out.decay_rate, out.decay_relative_to_a0, out.a0);
    println!("C1 = {:.4}  C2 = {:.4}  monitors ok: {}", out.c1, out.c2, out.monitors_ok);
    for (tau, v) in out.sn_series.iter().step_by(10) {
        println!("  tau {tau:5.2}  sup S^N {v:.4e}");
    }
    Ok(())
}
