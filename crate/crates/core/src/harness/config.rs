//! Scenario configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::background::PhiSpec;
use crate::error::{Error, Result};
use crate::solver::{InitialData, Model};

/// Scenario kinds understood by [`super::run_scenario`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    AffineExactness,
    StabilityRun,
    ConvergenceStudy,
    LwpIteration,
    OracleCompare,
    OperatorProperties,
    EmbeddingSurvey,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::AffineExactness => "affine-exactness",
            ScenarioKind::StabilityRun => "stability-run",
            ScenarioKind::ConvergenceStudy => "convergence-study",
            ScenarioKind::LwpIteration => "lwp-iteration",
            ScenarioKind::OracleCompare => "oracle-compare",
            ScenarioKind::OperatorProperties => "operator-properties",
            ScenarioKind::EmbeddingSurvey => "embedding-survey",
        }
    }

    fn default_resolutions(self) -> Vec<usize> {
        match self {
            ScenarioKind::OperatorProperties => vec![32, 64, 128, 256],
            _ => vec![128, 256, 512],
        }
    }

    fn default_tau_final(self) -> f64 {
        match self {
            ScenarioKind::AffineExactness => 5.0,
            ScenarioKind::StabilityRun => 8.0,
            ScenarioKind::ConvergenceStudy => 2.0,
            ScenarioKind::LwpIteration => 0.25,
            _ => 1.0,
        }
    }
}

/// One scenario. Every field except `kind` has a default; unknown keys are
/// rejected. See `configs/README.md` for the documented ranges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// Order of the norm `𝒮^N` and of the energy identity.
    #[serde(rename = "N", default = "default_order")]
    pub order: usize,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_stencil")]
    pub stencil_order: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Final rescaled time; the default depends on `kind`.
    #[serde(default)]
    pub tau_final: Option<f64>,
    #[serde(default = "PhiSpec::cubic_bump")]
    pub profile: PhiSpec,
    #[serde(default = "default_initial")]
    pub initial: InitialData,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_one")]
    pub a_init: f64,
    #[serde(default = "default_one")]
    pub adot_init: f64,
    #[serde(default = "default_sample_interval")]
    pub sample_interval: f64,
    #[serde(default)]
    pub dtau: Option<f64>,
    #[serde(default)]
    pub include_r3: bool,
    #[serde(default)]
    pub model: Model,
    /// Grid sizes of refinement studies; the default depends on `kind`.
    #[serde(default)]
    pub resolutions: Option<Vec<usize>>,
    /// Physical end time of the oracle window.
    #[serde(default = "default_one")]
    pub t_final: f64,
    #[serde(default = "default_lwp_iterations")]
    pub lwp_iterations: usize,
    #[serde(default = "default_draws")]
    pub draws: usize,
    /// Highest operator index in operator and survey scenarios.
    #[serde(default = "default_order")]
    pub order_max: usize,
}

fn default_gamma() -> f64 {
    1.4
}
fn default_order() -> usize {
    2
}
fn default_n() -> usize {
    256
}
fn default_stencil() -> usize {
    4
}
fn default_cfl() -> f64 {
    0.4
}
fn default_one() -> f64 {
    1.0
}
fn default_sample_interval() -> f64 {
    0.1
}
fn default_initial() -> InitialData {
    InitialData::with_smallness(1e-3, 1e-3)
}
fn default_lwp_iterations() -> usize {
    12
}
fn default_draws() -> usize {
    100
}

impl ScenarioConfig {
    /// A config of the given kind with every other field at its default.
    pub fn new(kind: ScenarioKind) -> ScenarioConfig {
        serde_json::from_value(serde_json::json!({ "kind": kind })).expect("defaults deserialize")
    }

    pub fn from_json(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig = serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<ScenarioConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
        ScenarioConfig::from_json(&text).map_err(|e| match e {
            Error::ConfigInvalid(m) => Error::ConfigInvalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn tau_final(&self) -> f64 {
        self.tau_final.unwrap_or_else(|| self.kind.default_tau_final())
    }

    pub fn resolutions(&self) -> Vec<usize> {
        self.resolutions.clone().unwrap_or_else(|| self.kind.default_resolutions())
    }

    /// Display name: `name`, or the kind.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.kind.as_str().to_string())
    }

    /// Check every documented range.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        if !(self.gamma.is_finite() && self.gamma > 1.0 && self.gamma <= 3.0) {
            return bad(format!("gamma = {} outside (1, 3]", self.gamma));
        }
        if self.order > 4 {
            return bad(format!("N = {} outside [0, 4]", self.order));
        }
        if self.stencil_order != 2 && self.stencil_order != 4 {
            return bad(format!("stencil_order = {} must be 2 or 4", self.stencil_order));
        }
        let check_n = |n: usize| -> Result<()> {
            if !(16..=4096).contains(&n) || !n.is_multiple_of(4) {
                return Err(Error::ConfigInvalid(format!("n = {n} must be a multiple of 4 in [16, 4096]")));
            }
            Ok(())
        };
        check_n(self.n)?;
        let res = self.resolutions();
        if res.len() < 2 || res.windows(2).any(|w| w[1] <= w[0]) {
            return bad("resolutions need at least two strictly increasing entries".into());
        }
        res.iter().try_for_each(|&n| check_n(n))?;
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl = {} outside (0, 1]", self.cfl));
        }
        if !finite_pos(self.tau_final()) || self.tau_final() > 50.0 {
            return bad(format!("tau_final = {} outside (0, 50]", self.tau_final()));
        }
        if !finite_pos(self.t_final) || self.t_final > 20.0 {
            return bad(format!("t_final = {} outside (0, 20]", self.t_final));
        }
        if !finite_pos(self.a_init) || !self.adot_init.is_finite() || self.adot_init < 0.0 {
            return bad("a_init must be positive and adot_init nonnegative".into());
        }
        if !finite_pos(self.sample_interval) || self.sample_interval > self.tau_final() {
            return bad(format!("sample_interval = {} outside (0, tau_final]", self.sample_interval));
        }
        if let Some(dt) = self.dtau {
            if !finite_pos(dt) {
                return bad(format!("dtau = {dt} must be positive"));
            }
        }
        let ini = &self.initial;
        if !(ini.epsilon.is_finite() && ini.epsilon >= 0.0 && ini.epsilon <= 0.1) {
            return bad(format!("initial.epsilon = {} outside [0, 0.1]", ini.epsilon));
        }
        if !(ini.lambda.is_finite() && ini.lambda >= 0.0 && ini.lambda <= 0.1) {
            return bad(format!("initial.lambda = {} outside [0, 0.1]", ini.lambda));
        }
        if ini.amplitude.is_some_and(|s| !s.is_finite()) || ini.theta.iter().chain(&ini.theta_tau).any(|c| !c.is_finite()) {
            return bad("initial data coefficients must be finite".into());
        }
        if self.lwp_iterations < 2 || self.lwp_iterations > 50 {
            return bad(format!("lwp_iterations = {} outside [2, 50]", self.lwp_iterations));
        }
        if self.draws < 4 || self.draws > 100_000 {
            return bad(format!("draws = {} outside [4, 100000]", self.draws));
        }
        if self.order_max > 4 {
            return bad(format!("order_max = {} outside [0, 4]", self.order_max));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = ScenarioConfig::from_json(r#"{"kind": "stability-run"}"#).unwrap();
        assert_eq!(cfg.n, 256);
        assert_eq!(cfg.tau_final(), 8.0);
        assert_eq!(cfg.profile, PhiSpec::cubic_bump());
    }

    #[test]
    fn rejects_unknown_keys_and_bad_ranges() {
        for text in [
            r#"{"kind": "stability-run", "colour": 1}"#,
            r#"{"kind": "stability-run", "n": -256}"#,
            r#"{"kind": "stability-run", "n": 250}"#,
            r#"{"kind": "stability-run", "gamma": 1.0}"#,
            r#"{"kind": "stability-run", "stencil_order": 6}"#,
            r#"{"kind": "launch"}"#,
            r#"{"gamma": 1.4}"#,
            r#"{"kind": "stability-run", "initial": {"epsilon": -1}}"#,
            "not json",
        ] {
            assert!(matches!(ScenarioConfig::from_json(text), Err(Error::ConfigInvalid(_))), "{text}");
        }
    }

    #[test]
    fn order_key_is_uppercase_n() {
        let cfg = ScenarioConfig::from_json(r#"{"kind": "stability-run", "N": 3}"#).unwrap();
        assert_eq!(cfg.order, 3);
        assert!(ScenarioConfig::from_json(r#"{"kind": "stability-run", "order": 3}"#).is_err());
    }
}
