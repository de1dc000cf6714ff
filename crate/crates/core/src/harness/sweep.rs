//! Parallel execution of a directory of scenario configs.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ScenarioConfig, ScenarioKind};
use super::output::{fmt_f64, to_json, write_file};
use super::scenario::run_scenario;
use crate::error::{Error, Result};

/// One row of the sweep report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub file: String,
    pub name: String,
    pub kind: ScenarioKind,
    pub gamma: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub n: usize,
    #[serde(rename = "N")]
    pub order: usize,
    pub passed: bool,
    pub error: Option<String>,
    pub sup_sn: f64,
    /// `sup_τ 𝒮^N / (ε + λ)`.
    pub c_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Largest finite `C_*` over the rows; `null` when there is none.
    pub c_star_max: f64,
    pub all_c_star_finite: bool,
    /// Files of configs whose run failed.
    pub failed: Vec<String>,
}

impl SweepReport {
    /// 0 when every run passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failed.is_empty() {
            0
        } else {
            1
        }
    }

    /// CSV with columns `file,name,kind,gamma,epsilon,lambda,n,N,passed,sup_sn,c_star`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("file,name,kind,gamma,epsilon,lambda,n,N,passed,sup_sn,c_star\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.file,
                r.name,
                r.kind.as_str(),
                fmt_f64(r.gamma),
                fmt_f64(r.epsilon),
                fmt_f64(r.lambda),
                r.n,
                r.order,
                r.passed,
                fmt_f64(r.sup_sn),
                fmt_f64(r.c_star)
            ));
        }
        s
    }
}

/// `*.json` files of `dir`, sorted by name, parsed and validated. Any
/// invalid file makes the whole sweep invalid.
pub fn load_configs(dir: &Path) -> Result<Vec<(String, ScenarioConfig)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            ScenarioConfig::from_file(p).map(|c| (stem, c))
        })
        .collect()
}

/// Run every config on a pool of `jobs` threads. Run `k` writes to
/// `out/<file>` when `out` is given; the report goes to `out` itself.
pub fn sweep(configs: &[(String, ScenarioConfig)], jobs: usize, out: Option<&Path>) -> Result<SweepReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    let rows = pool.install(|| {
        configs
            .par_iter()
            .map(|(file, cfg)| {
                let dir = out.map(|o| o.join(file));
                let summary = run_scenario(cfg, dir.as_deref());
                Ok(match summary {
                    Ok(s) => SweepRow {
                        file: file.clone(),
                        name: s.name.clone(),
                        kind: cfg.kind,
                        gamma: cfg.gamma,
                        epsilon: cfg.initial.epsilon,
                        lambda: cfg.initial.lambda,
                        n: cfg.n,
                        order: cfg.order,
                        passed: s.passed,
                        error: s.error.clone(),
                        sup_sn: s.metric("sup_sn"),
                        c_star: s.metric("c_star"),
                    },
                    Err(Error::ConfigInvalid(m)) => return Err(Error::ConfigInvalid(m)),
                    Err(e) => SweepRow {
                        file: file.clone(),
                        name: cfg.label(),
                        kind: cfg.kind,
                        gamma: cfg.gamma,
                        epsilon: cfg.initial.epsilon,
                        lambda: cfg.initial.lambda,
                        n: cfg.n,
                        order: cfg.order,
                        passed: false,
                        error: Some(e.to_string()),
                        sup_sn: f64::NAN,
                        c_star: f64::NAN,
                    },
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let finite: Vec<f64> = rows.iter().map(|r| r.c_star).filter(|c| c.is_finite()).collect();
    let stability_rows = rows.iter().filter(|r| r.kind == ScenarioKind::StabilityRun);
    let report = SweepReport {
        c_star_max: finite.iter().copied().fold(f64::NAN, f64::max),
        all_c_star_finite: stability_rows.clone().all(|r| r.c_star.is_finite()),
        failed: rows.iter().filter(|r| !r.passed).map(|r| r.file.clone()).collect(),
        rows,
    };
    if let Some(dir) = out {
        write_file(dir, "sweep.json", &to_json(&report)?)?;
        write_file(dir, "sweep.csv", &report.to_csv())?;
    }
    Ok(report)
}
