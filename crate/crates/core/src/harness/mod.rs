//! Configuration-driven scenarios, sweeps and operator checks.
//!
//! A scenario is one JSON file ([`ScenarioConfig`]); [`run_scenario`] runs it
//! and writes `summary.json` plus kind-specific CSV, JSON and SVG files.

pub mod config;
pub mod operators;
pub mod output;
pub mod scenario;
pub mod svg;
pub mod sweep;

pub use config::{ScenarioConfig, ScenarioKind};
pub use scenario::{oracle_rows, output_dir, run_scenario, stability_outcome, Check, Relation, StabilityOutcome, Summary};
pub use sweep::{load_configs, sweep, SweepReport, SweepRow};

use std::path::Path;

use crate::error::Result;

/// The `check-ops` command: operator identities and the control survey for
/// indices up to `order`, with randomized draws from `seed`.
pub fn check_ops(order: usize, seed: u64, out: Option<&Path>) -> Result<Summary> {
    let mut cfg = ScenarioConfig::new(ScenarioKind::OperatorProperties);
    cfg.name = Some("check-ops".into());
    cfg.order_max = order;
    cfg.seed = seed;
    run_scenario(&cfg, out)
}
