//! The seven scenario kinds and their pass/fail summaries.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use super::config::{ScenarioConfig, ScenarioKind};
use super::operators::{observed_order, operator_studies};
use super::output::{csv, series_csv, to_json, write_file};
use super::svg::LinePlot;
use crate::background::{gamma_exponents, AffineMotion, BackgroundProfile, Horizon};
use crate::calculus::survey::{control_lemma_survey, embedding_survey};
use crate::calculus::{weighted_norm, RadialGrid};
use crate::diagnostics::{
    check_coercivity, check_norm_energy_equivalence, energy_identity_residual, fit_decay, sn_series, EnergyReport,
};
use crate::error::{Error, Result};
use crate::oracle::{compare_solutions, solve_chi, solve_chi_matching, ChiState, OracleControls};
use crate::solver::{
    lwp_iterate, solve, Controls, Equation, EquationOptions, LwpControls, ManufacturedSolution, PerturbationState,
};

/// Sup norm of the perturbation that counts as "stays zero".
pub const FIXED_POINT_TOL: f64 = 1e-10;
/// Closed-form affine comparison for `γ = 5/3`, `a(0) = 1`, `a'(0) = 0`.
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const A1_TOL: f64 = 1e-3;
/// Referee value of `χ` for affine data against `a(t)`.
pub const AFFINE_REFEREE_TOL: f64 = 1e-8;
/// Bound on `sup 𝒮^N / (ε + λ)`.
pub const STABILITY_CONSTANT: f64 = 100.0;
/// Fitted rates within this distance of zero count as "no decay".
pub const DECAY_RATE_BAND: f64 = 0.05;
pub const COERCIVITY_BOUND: f64 = 10.0;
/// Relative distance of the fitted rate of `e^{-a₀τ} 𝒮^N` from `-a₀`.
pub const Z1_RATE_TOL: f64 = 0.25;
/// Highest index of the coercivity check.
pub const COERCIVITY_MAX_INDEX: usize = 2;
pub const IDENTITY_RESIDUAL_TOL: f64 = 1e-4;
/// Minimal reduction of the identity residual per refinement.
pub const IDENTITY_REFINEMENT_FACTOR: f64 = 2.0;
pub const ORACLE_TOL: f64 = 1e-6;
pub const ORACLE_MIN_ORDER: f64 = 2.0;
pub const LWP_CONTRACTION: f64 = 0.5;
pub const LWP_LIMIT_TOL: f64 = 1e-6;
/// Operator identities must converge at `stencil_order - ORDER_SLACK`.
pub const ORDER_SLACK: f64 = 0.3;
/// Identity studies for `i, k <= OPERATOR_ACCEPTANCE_INDEX`.
pub const OPERATOR_ACCEPTANCE_INDEX: usize = 2;
/// Number of oracle samples in the window.
const ORACLE_SAMPLES: usize = 10;
const MOTION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<")]
    Below,
}

/// One pass/fail property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Check {
        let passed = value.is_finite()
            && match relation {
                Relation::AtMost => value <= bound,
                Relation::AtLeast => value >= bound,
                Relation::Below => value < bound,
            };
        Check { name: name.into(), value, relation, bound, passed }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check::new(name, if ok { 1.0 } else { 0.0 }, Relation::AtLeast, 1.0)
    }
}

/// The `summary.json` record of one scenario.
#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub name: String,
    pub kind: ScenarioKind,
    pub passed: bool,
    /// Diagnostic of a run that stopped early.
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
    pub files: Vec<String>,
    pub config: ScenarioConfig,
}

impl Summary {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metric(&self, name: &str) -> f64 {
        self.metrics.get(name).copied().unwrap_or(f64::NAN)
    }

    /// Process exit status: 0 on success, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Scenario output accumulated in memory and written at the end.
#[derive(Default)]
struct Outcome {
    checks: Vec<Check>,
    metrics: BTreeMap<String, f64>,
    files: Vec<(String, String)>,
}

impl Outcome {
    fn metric(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }

    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

/// Output directory: the explicit override, then `config.out`, then
/// `out/<label>`.
pub fn output_dir(config: &ScenarioConfig, override_dir: Option<&Path>) -> PathBuf {
    override_dir
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(config.label()))
}

/// Validate, run and summarise one scenario. Invalid configs return
/// `Error::ConfigInvalid` before anything is written; failures during the
/// run are reported in the summary. Files go to `out` when given.
pub fn run_scenario(config: &ScenarioConfig, out: Option<&Path>) -> Result<Summary> {
    config.validate()?;
    let result = match config.kind {
        ScenarioKind::AffineExactness => affine_exactness(config),
        ScenarioKind::StabilityRun => stability_run(config),
        ScenarioKind::ConvergenceStudy => convergence_study(config),
        ScenarioKind::LwpIteration => lwp_iteration(config),
        ScenarioKind::OracleCompare => oracle_compare(config),
        ScenarioKind::OperatorProperties => operator_properties(config),
        ScenarioKind::EmbeddingSurvey => embedding(config),
    };
    let (outcome, error) = match result {
        Ok(o) => (o, None),
        Err(Error::ConfigInvalid(m)) => return Err(Error::ConfigInvalid(m)),
        Err(e) => (Outcome::default(), Some(e.to_string())),
    };
    let mut summary = Summary {
        name: config.label(),
        kind: config.kind,
        passed: error.is_none() && outcome.checks.iter().all(|c| c.passed),
        error,
        checks: outcome.checks,
        metrics: outcome.metrics,
        files: outcome.files.iter().map(|(n, _)| n.clone()).collect(),
        config: config.clone(),
    };
    summary.files.push("summary.json".into());
    if let Some(dir) = out {
        for (name, contents) in &outcome.files {
            write_file(dir, name, contents)?;
        }
        write_file(dir, "summary.json", &to_json(&summary)?)?;
    }
    Ok(summary)
}

struct Setup {
    grid: Arc<RadialGrid>,
    profile: BackgroundProfile,
    motion: AffineMotion,
}

fn setup(cfg: &ScenarioConfig, n: usize, horizon: Horizon) -> Result<Setup> {
    let motion = AffineMotion::integrate(cfg.gamma, cfg.a_init, cfg.adot_init, horizon, MOTION_TOL)?;
    let grid = RadialGrid::new(n, cfg.stencil_order)?;
    let profile = BackgroundProfile::build(&cfg.profile, cfg.gamma, &grid, cfg.order + 2)?;
    Ok(Setup { grid, profile, motion })
}

fn options(cfg: &ScenarioConfig) -> EquationOptions {
    EquationOptions { model: cfg.model, include_r3: cfg.include_r3 }
}

fn controls(cfg: &ScenarioConfig, sample_interval: f64, reports: bool) -> Controls {
    Controls {
        cfl: cfg.cfl,
        dtau: cfg.dtau,
        sample_interval,
        order: cfg.order,
        options: options(cfg),
        enforce_monitors: true,
        reports,
    }
}

fn tau_horizon(tau_final: f64) -> Horizon {
    Horizon::Tau(tau_final * 1.05 + 0.1)
}

fn affine_exactness(cfg: &ScenarioConfig) -> Result<Outcome> {
    let tau_final = cfg.tau_final();
    let s = setup(cfg, cfg.n, tau_horizon(tau_final))?;
    let mut out = Outcome::default();
    let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg));
    let traj = solve(PerturbationState::zero(&s.grid, 0.0), &eq, tau_final, &controls(cfg, cfg.sample_interval, false))?;
    let sup = traj.samples.iter().map(|p| p.state.max_abs()).fold(0.0, f64::max);
    out.checks.push(Check::new("sup_perturbation", sup, Relation::AtMost, FIXED_POINT_TOL));
    out.checks.push(Check::flag("monitors_ok", traj.monitors_ok()));

    // The referee keeps spatially constant data spatially constant.
    let t_ref = cfg.t_final.min(s.motion.t_final());
    let chi0 = ChiState::affine(&s.grid, &s.motion.at_t(0.0)?);
    let chi = solve_chi(chi0, &s.profile, t_ref, &OracleControls { cfl: cfg.cfl, ..OracleControls::default() })?;
    let mut dev = 0.0f64;
    for c in &chi.samples {
        let a = s.motion.at_t(c.t)?.a;
        dev = dev.max(c.chi.map(|v| (v - a) / a).max_abs());
    }
    out.checks.push(Check::new("referee_affine_deviation", dev, Relation::AtMost, AFFINE_REFEREE_TOL));

    if (cfg.gamma - 5.0 / 3.0).abs() < 1e-14 && cfg.a_init == 1.0 && cfg.adot_init == 0.0 {
        let m = AffineMotion::integrate(cfg.gamma, 1.0, 0.0, Horizon::Time(10.0), MOTION_TOL)?;
        let err = m.samples.iter().map(|p| (p.a - (1.0 + p.t * p.t).sqrt()).abs()).fold(0.0, f64::max);
        out.checks.push(Check::new("closed_form_error", err, Relation::AtMost, CLOSED_FORM_TOL));
        out.checks.push(Check::new("a1_error", (s.motion.a1_limit - 1.0).abs(), Relation::AtMost, A1_TOL));
    }
    out.metric("a1", s.motion.a1_limit);
    out.metric("a0", s.motion.a0_rate);
    out.metric("tau_final", tau_final);
    out.file("motion.csv", s.motion.to_csv());
    let plot = LinePlot::new("a(tau) exp(-a1 tau)", "tau", "ratio", false).with_series("a e^{-a1 tau}", s.motion.growth_ratio());
    out.file("growth.svg", plot.render());
    Ok(out)
}

/// Results of one stability run, shared with the sweep and the acceptance test.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityOutcome {
    pub sup_sn: f64,
    pub c_star: f64,
    pub monitors_ok: bool,
    pub decay_rate: f64,
    pub decay_relative_to_a0: f64,
    pub coercivity: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    pub identity_relative: f64,
    pub sn_series: Vec<(f64, f64)>,
    pub decay_series: Vec<(f64, f64)>,
    pub z1_series: Vec<(f64, f64)>,
    pub z1_rate: f64,
    pub a0: f64,
}

fn stability_core(cfg: &ScenarioConfig) -> Result<(StabilityOutcome, String, Vec<EnergyReport>)> {
    let tau_final = cfg.tau_final();
    let s = setup(cfg, cfg.n, tau_horizon(tau_final))?;
    let init = cfg.initial.build(&s.motion, &s.profile, cfg.order)?;
    let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg));
    let traj = solve(init, &eq, tau_final, &controls(cfg, cfg.sample_interval, true))?;
    let reports: Vec<EnergyReport> = traj.samples.iter().filter_map(|p| p.report.clone()).collect();
    let identity_relative = energy_identity_residual(&reports).map(|r| r.relative).unwrap_or(f64::NAN);

    let d_exp = gamma_exponents(cfg.gamma)?.d_exp;
    let decay_series: Vec<(f64, f64)> = traj
        .samples
        .iter()
        .map(|p| (p.state.tau, p.background.a.powf(d_exp) * weighted_norm(&p.state.h_tau, 0, &s.profile)))
        .collect();
    let fit = fit_decay(&decay_series, &s.motion)?;
    let sn = sn_series(&traj, &s.motion, &s.profile, cfg.order)?;
    let a0 = s.motion.a0_rate;
    let z1_series: Vec<(f64, f64)> = sn.iter().map(|&(t, v)| (t, (-a0 * t).exp() * v)).collect();
    let z1_rate = fit_decay(&z1_series, &s.motion).map(|f| f.rate).unwrap_or(f64::NAN);
    let coercivity = (0..=COERCIVITY_MAX_INDEX)
        .map(|i| check_coercivity(&traj, &s.motion, &s.profile, i))
        .collect::<Result<Vec<_>>>()?;
    let ne = check_norm_energy_equivalence(&traj, &s.motion, &s.profile, cfg.order, options(cfg))?;
    let size = cfg.initial.epsilon + cfg.initial.lambda;
    let sup_sn = traj.sup_sn();
    Ok((
        StabilityOutcome {
            sup_sn,
            c_star: if size > 0.0 { sup_sn / size } else { f64::NAN },
            monitors_ok: traj.monitors_ok(),
            decay_rate: fit.rate,
            decay_relative_to_a0: fit.relative_to_a0,
            coercivity,
            c1: ne.c1,
            c2: ne.c2,
            identity_relative,
            sn_series: sn,
            decay_series,
            z1_series,
            z1_rate,
            a0,
        },
        traj.to_csv(),
        reports,
    ))
}

/// Run the stability experiment of `cfg` without writing files.
pub fn stability_outcome(cfg: &ScenarioConfig) -> Result<StabilityOutcome> {
    cfg.validate()?;
    Ok(stability_core(cfg)?.0)
}

fn stability_run(cfg: &ScenarioConfig) -> Result<Outcome> {
    let (so, traj_csv, reports) = stability_core(cfg)?;
    let mut out = Outcome::default();
    out.checks.push(Check::flag("monitors_ok", so.monitors_ok));
    if so.c_star.is_finite() {
        out.checks.push(Check::new("sup_sn_over_size", so.c_star, Relation::AtMost, STABILITY_CONSTANT));
    }
    out.checks.push(Check::new("decay_rate", so.decay_rate, Relation::Below, -DECAY_RATE_BAND));
    out.checks.push(Check::new("z1_rate_deviation", (so.z1_rate / -so.a0 - 1.0).abs(), Relation::AtMost, Z1_RATE_TOL));
    for (i, c) in so.coercivity.iter().enumerate() {
        out.checks.push(Check::new(format!("coercivity_{i}"), *c, Relation::AtMost, COERCIVITY_BOUND));
    }
    out.checks.push(Check::flag("norm_energy_constants_positive", so.c1 > 0.0 && so.c2 > 0.0 && so.c1.is_finite() && so.c2.is_finite()));
    for (k, v) in [
        ("sup_sn", so.sup_sn),
        ("c_star", so.c_star),
        ("decay_rate", so.decay_rate),
        ("decay_relative_to_a0", so.decay_relative_to_a0),
        ("z1_rate", so.z1_rate),
        ("a0", so.a0),
        ("c1", so.c1),
        ("c2", so.c2),
        ("identity_relative_residual", so.identity_relative),
    ] {
        out.metric(k, v);
    }
    out.file("trajectory.csv", traj_csv);
    out.file(
        "series.csv",
        series_csv(&[("sn", so.sn_series.clone()), ("decay_quantity", so.decay_series.clone()), ("z1_integrand", so.z1_series.clone())]),
    );
    out.file("energy.json", to_json(&reports)?);
    out.file("sn.svg", LinePlot::new("running sup of S^N", "tau", "S^N", true).with_series("S^N", so.sn_series.clone()).render());
    out.file(
        "decay.svg",
        LinePlot::new("a^d |H_tau|^2", "tau", "value", true).with_series("a^d |H_tau|_0^2", so.decay_series.clone()).render(),
    );
    Ok(out)
}

fn convergence_study(cfg: &ScenarioConfig) -> Result<Outcome> {
    let res = cfg.resolutions();
    let tau_final = cfg.tau_final();
    let mut out = Outcome::default();
    let mut identity = Vec::new();
    let mut mms = Vec::new();
    let mut rows = Vec::new();
    for &n in &res {
        let s = setup(cfg, n, tau_horizon(tau_final))?;
        let si = cfg.sample_interval * res[0] as f64 / n as f64;
        let init = cfg.initial.build(&s.motion, &s.profile, cfg.order)?;
        let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg));
        let traj = solve(init, &eq, tau_final, &controls(cfg, si, true))?;
        let reports: Vec<EnergyReport> = traj.samples.iter().filter_map(|p| p.report.clone()).collect();
        let rel = energy_identity_residual(&reports)?.relative;
        identity.push(rel);

        let amp = cfg.initial.epsilon.max(1e-3);
        let ms = ManufacturedSolution { epsilon: amp, options: options(cfg) };
        let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg)).with_forcing(&ms);
        let t_mms = tau_final.min(1.0);
        let mut c = controls(cfg, t_mms, false);
        c.enforce_monitors = false;
        let traj = solve(ms.state(&s.grid, 0.0), &eq, t_mms, &c)?;
        let exact = ms.state(&s.grid, t_mms);
        let err = (&traj.last().state.h - &exact.h).max_abs() / exact.h.max_abs();
        mms.push(err);
        rows.push(vec![n as f64, si, rel, err]);
    }
    let min_order = cfg.stencil_order as f64 - ORDER_SLACK;
    let mms_order = observed_order(&res, &mms);
    out.checks.push(Check::new("identity_residual_finest", *identity.last().unwrap(), Relation::AtMost, IDENTITY_RESIDUAL_TOL));
    let worst_factor = identity.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
    out.checks.push(Check::new("identity_refinement_factor", worst_factor, Relation::AtLeast, IDENTITY_REFINEMENT_FACTOR));
    out.checks.push(Check::new("manufactured_order", mms_order, Relation::AtLeast, min_order));
    out.metric("identity_order", observed_order(&res, &identity));
    out.metric("manufactured_error_finest", *mms.last().unwrap());
    out.file("convergence.csv", csv(&["n", "sample_interval", "identity_relative_residual", "manufactured_error"], rows));
    let pts = |v: &[f64]| res.iter().zip(v).map(|(&n, &e)| ((n as f64).log2(), e)).collect::<Vec<_>>();
    out.file(
        "convergence.svg",
        LinePlot::new("refinement", "log2 n", "residual", true)
            .with_series("identity residual", pts(&identity))
            .with_series("manufactured error", pts(&mms))
            .render(),
    );
    Ok(out)
}

fn lwp_iteration(cfg: &ScenarioConfig) -> Result<Outcome> {
    let tau_final = cfg.tau_final();
    let s = setup(cfg, cfg.n, tau_horizon(tau_final))?;
    let init = cfg.initial.build(&s.motion, &s.profile, cfg.order)?;
    let lc = LwpControls {
        t_final: tau_final,
        j_max: cfg.lwp_iterations,
        cfl: cfg.cfl,
        dtau: cfg.dtau,
        options: options(cfg),
        ..LwpControls::default()
    };
    let res = lwp_iterate(&init, &s.motion, &s.profile, &lc)?;
    let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg));
    let c = Controls { dtau: Some(res.dtau), ..controls(cfg, tau_final, false) };
    let direct = solve(init, &eq, tau_final, &c)?;
    let (a, b) = (&direct.last().state, res.final_state());
    let scale = weighted_norm(&a.h, 0, &s.profile) + weighted_norm(&a.h_tau, 0, &s.profile);
    let diff = weighted_norm(&(&a.h - &b.h), 0, &s.profile) + weighted_norm(&(&a.h_tau - &b.h_tau), 0, &s.profile);
    let rel = if scale > 0.0 { (diff / scale).sqrt() } else { diff.sqrt() };
    let mut out = Outcome::default();
    let ratio = res.max_ratio_from(2).unwrap_or(0.0);
    out.checks.push(Check::new("max_ratio_from_2", ratio, Relation::AtMost, LWP_CONTRACTION));
    out.checks.push(Check::new("limit_vs_solve", rel, Relation::AtMost, LWP_LIMIT_TOL));
    out.metric("reconstruction_residual", res.reconstruction_residual);
    out.metric("iterates", res.history.len() as f64);
    out.metric("dtau", res.dtau);
    out.metric("converged", if res.converged { 1.0 } else { 0.0 });
    out.file(
        "lwp.csv",
        csv(
            &["iterate", "difference", "ratio"],
            res.history.iter().map(|h| vec![h.iterate as f64, h.difference, h.ratio.unwrap_or(f64::NAN)]),
        ),
    );
    out.file("lwp.json", to_json(&res.history)?);
    Ok(out)
}

/// Oracle discrepancy at one resolution.
#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub n: usize,
    pub rel_sup: f64,
    pub rel_perturbation: f64,
}

/// Run both formulations on `[0, t_final]` at each resolution.
pub fn oracle_rows(cfg: &ScenarioConfig, resolutions: &[usize]) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for &n in resolutions {
        let s = setup(cfg, n, Horizon::Time(cfg.t_final * 1.05 + 0.1))?;
        let init = cfg.initial.build(&s.motion, &s.profile, cfg.order)?;
        let tau1 = s.motion.tau_of_t(cfg.t_final)?;
        let eq = Equation::new(&s.motion, &s.profile).with_options(options(cfg));
        let traj = solve(init, &eq, tau1, &controls(cfg, tau1 / ORACLE_SAMPLES as f64, false))?;
        let chi = solve_chi_matching(&traj, &s.motion, &s.profile, &OracleControls { cfl: cfg.cfl, ..OracleControls::default() })?;
        let rep = compare_solutions(&chi, &traj, &s.motion, &s.profile)?;
        rows.push(OracleRow { n, rel_sup: rep.rel_sup, rel_perturbation: rep.rel_perturbation });
    }
    Ok(rows)
}

fn oracle_compare(cfg: &ScenarioConfig) -> Result<Outcome> {
    let res = cfg.resolutions();
    let rows = oracle_rows(cfg, &res)?;
    let mut out = Outcome::default();
    let finest = rows.last().unwrap();
    out.checks.push(Check::new("discrepancy_finest", finest.rel_perturbation, Relation::AtMost, ORACLE_TOL));
    let order = observed_order(&res, &rows.iter().map(|r| r.rel_perturbation).collect::<Vec<_>>());
    out.checks.push(Check::new("discrepancy_order", order, Relation::AtLeast, ORACLE_MIN_ORDER));
    out.metric("rel_sup_finest", finest.rel_sup);
    out.file("discrepancy.json", to_json(&rows)?);
    Ok(out)
}

fn operator_properties(cfg: &ScenarioConfig) -> Result<Outcome> {
    let res = cfg.resolutions();
    let studies = operator_studies(cfg.gamma, cfg.stencil_order, cfg.order_max, &res)?;
    let min_order = cfg.stencil_order as f64 - ORDER_SLACK;
    let mut out = Outcome::default();
    for s in &studies {
        let name = format!("{}_{}_{}_order", s.identity, s.profile, s.index);
        out.checks.push(Check::new(name, s.order, Relation::AtLeast, min_order));
    }
    let grid = RadialGrid::new(cfg.n, cfg.stencil_order)?;
    let survey = control_lemma_survey(&grid, cfg.order_max, cfg.draws, cfg.seed)?;
    for st in &survey {
        out.checks.push(Check::flag(format!("{}_{}_stable", st.label, st.order), st.stable()));
        out.metric(&format!("{}_{}_constant", st.label, st.order), st.constant);
    }
    out.file("operators.json", to_json(&studies)?);
    out.file("control_survey.json", to_json(&survey)?);
    Ok(out)
}

fn embedding(cfg: &ScenarioConfig) -> Result<Outcome> {
    let grid = RadialGrid::new(cfg.n, cfg.stencil_order)?;
    let profile = BackgroundProfile::build(&cfg.profile, cfg.gamma, &grid, 2)?;
    let stats = embedding_survey(&profile, cfg.draws, cfg.seed)?;
    let mut out = Outcome::default();
    for st in &stats {
        out.checks.push(Check::flag(format!("{}_{}_finite", st.label, st.order), st.finite()));
        out.checks.push(Check::flag(format!("{}_{}_stable", st.label, st.order), st.stable()));
        out.metric(&format!("{}_{}_constant", st.label, st.order), st.constant);
    }
    out.file("embedding.json", to_json(&stats)?);
    Ok(out)
}
