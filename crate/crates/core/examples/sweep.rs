//! Sweep the stability scenario over gamma and the data size on two threads.

use affine_vacuum::harness::{sweep, ScenarioConfig, ScenarioKind};

fn main() -> affine_vacuum::Result<()> {
    let mut configs = Vec::new();
    for gamma in [1.4, 5.0 / 3.0, 2.0] {
        for eps in [1e-3, 1e-4] {
            let mut c = ScenarioConfig::new(ScenarioKind::StabilityRun);
            c.gamma = gamma;
            c.n = 64;
            c.initial.epsilon = eps;
            c.initial.lambda = eps;
            configs.push((format!("g{gamma:.3}-e{eps:e}"), c));
        }
    }
    let report = sweep(&configs, 2, None)?;
    for r in &report.rows {
        println!("{:<16} passed {:5}  C* {:.4}", r.file, r.passed, r.c_star);
    }
    println!("max C* = {:.4}, all finite: {}", report.c_star_max, report.all_c_star_finite);
    Ok(())
}
