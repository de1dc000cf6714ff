//! Time integration of the `H` equation with sampling and monitors.

use serde::{Deserialize, Serialize};

use super::equation::{Equation, EquationOptions};
use super::monitor::AprioriMonitor;
use super::state::PerturbationState;
use crate::background::AffineSample;
use crate::diagnostics::{compute_energy_identity_terms, sn_instant, EnergyReport};
use crate::error::{Error, Result};

/// Run controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Controls {
    pub cfl: f64,
    /// Fixed step. When absent the step is `0.95` of the CFL bound of the
    /// initial state, shrunk so that samples land on whole steps.
    pub dtau: Option<f64>,
    /// Spacing of recorded samples in `τ`.
    pub sample_interval: f64,
    /// Order `N` of the norm `𝒮^N` and of the energy reports.
    pub order: usize,
    pub options: EquationOptions,
    /// Stop with an error as soon as an a-priori bound fails.
    pub enforce_monitors: bool,
    /// Attach an energy report to every sample.
    pub reports: bool,
}

impl Default for Controls {
    fn default() -> Self {
        Controls {
            cfl: 0.4,
            dtau: None,
            sample_interval: 0.05,
            order: 2,
            options: EquationOptions::default(),
            enforce_monitors: true,
            reports: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub state: PerturbationState,
    pub background: AffineSample,
    /// Running supremum of `𝒮^N` up to this sample.
    pub sn: f64,
    pub monitor: AprioriMonitor,
    pub report: Option<EnergyReport>,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dtau: f64,
    pub steps: usize,
    pub order: usize,
}

impl Trajectory {
    pub fn states(&self) -> Vec<&PerturbationState> {
        self.samples.iter().map(|s| &s.state).collect()
    }

    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectories hold at least the initial sample")
    }

    /// `sup_τ ‖H‖_∞`.
    pub fn sup_h(&self) -> f64 {
        self.samples.iter().map(|s| s.state.h.max_abs()).fold(0.0, f64::max)
    }

    /// Largest `𝒮^N` along the run.
    pub fn sup_sn(&self) -> f64 {
        self.last().sn
    }

    pub fn monitors_ok(&self) -> bool {
        self.samples.iter().all(|s| s.monitor.all_ok())
    }

    /// CSV with columns `tau,r,H,H_tau`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,r,H,H_tau\n");
        for smp in &self.samples {
            s.push_str(&smp.state.csv_rows());
        }
        s
    }
}

/// Evolve `initial` to `tau_final`.
pub fn solve(initial: PerturbationState, eq: &Equation, tau_final: f64, controls: &Controls) -> Result<Trajectory> {
    if !(tau_final > initial.tau) {
        return Err(Error::InvalidParameter(format!("tau_final = {tau_final} must exceed the initial time")));
    }
    if tau_final > eq.motion.tau_final() * (1.0 + 1e-12) {
        return Err(Error::WindowMismatch(format!(
            "tau_final = {tau_final} beyond the background range {}",
            eq.motion.tau_final()
        )));
    }
    if !(controls.cfl > 0.0) || !(controls.sample_interval > 0.0) {
        return Err(Error::InvalidParameter("cfl and sample_interval must be positive".into()));
    }
    let span = tau_final - initial.tau;
    let n_samples = ((span / controls.sample_interval) - 1e-9).ceil().max(1.0) as usize;
    let interval = span / n_samples as f64;
    let target = match controls.dtau {
        Some(dt) if dt > 0.0 => dt,
        Some(dt) => return Err(Error::InvalidParameter(format!("dtau must be positive, got {dt}"))),
        None => 0.95 * eq.cfl_limit(&initial, controls.cfl)?,
    };
    let per_sample = ((interval / target) - 1e-9).ceil().max(1.0) as usize;
    let dtau = interval / per_sample as f64;

    let mut samples = Vec::with_capacity(n_samples + 1);
    let mut sn_run = 0.0;
    let tau0 = initial.tau;
    let mut state = initial;
    record(&mut samples, &state, eq, controls, &mut sn_run)?;
    let mut steps = 0;
    for k in 1..=n_samples {
        for m in 1..=per_sample {
            let mut next = eq.step(&state, dtau, controls.cfl)?;
            // Pin the clock to the sample lattice to avoid drift.
            next.tau = tau0 + ((k - 1) * per_sample + m) as f64 * dtau;
            if m == per_sample {
                next.tau = tau0 + k as f64 * interval;
            }
            state = next;
            steps += 1;
        }
        record(&mut samples, &state, eq, controls, &mut sn_run)?;
    }
    Ok(Trajectory { samples, dtau, steps, order: controls.order })
}

fn record(
    samples: &mut Vec<TrajectorySample>,
    state: &PerturbationState,
    eq: &Equation,
    controls: &Controls,
    sn_run: &mut f64,
) -> Result<()> {
    let bg = eq.motion.at_tau(state.tau)?;
    let sn = sn_instant(state, &bg, eq.profile, controls.order)?;
    *sn_run = sn_run.max(sn);
    let monitor = AprioriMonitor::measure(state, *sn_run);
    let report = if controls.reports {
        Some(compute_energy_identity_terms(state, eq.motion, eq.profile, controls.order, controls.options)?)
    } else {
        None
    };
    if controls.enforce_monitors && !monitor.all_ok() {
        return Err(Error::AprioriViolated { tau: state.tau, bounds: monitor.violations() });
    }
    samples.push(TrajectorySample { state: state.clone(), background: bg, sn: *sn_run, monitor, report });
    Ok(())
}
