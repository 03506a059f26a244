//! Canned, reproducible scenarios tying the kernel, solver and diagnostics together.
//!
//! A [`ScenarioConfig`] fully determines a run: the report contains nothing that
//! is not a function of the configuration (wall time is only attached on request).

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    analytic_moments, boundary_flux, corner_value, extrapolated_residual, first_moment, fit_powerlaw, rel_error,
    residual_expression, total_mass, ErrorReport, MaskRule, PowerLawFit, ResidualEstimate, TimeSeries,
};
use crate::error::{Error, Result};
use crate::kernel::{
    eval_linear_superposed, eval_superposed, front_position, support_extent, Solution, SuperposedParams,
};
use crate::solver::{
    gaussian_ic, integrate, make_grid, project_analytic, BoundaryCondition, FieldState, Grid1D, StepControl,
};

/// Relative level below which the linear profile counts as outside its support
/// for the front-margin check.
pub const LINEAR_TAIL: f64 = 1e-8;

/// The domain must exceed the analytic front by this factor.
pub const FRONT_MARGIN: f64 = 1.2;

/// The right end counts as dry while its integrated outflow stays below this
/// fraction of the initial mass.
pub const DRY_TOLERANCE: f64 = 1e-12;

pub const FIG1_SNAPSHOTS: [f64; 5] = [0.0, 3.0, 9.0, 27.0, 81.0];
pub const FIG1_N: f64 = 7.0 / 3.0;
pub const FIG1_LENGTH: f64 = 30.0;
pub const FIG1_CELLS: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcKind {
    NeumannZero,
    GammaDirichlet,
    AbsorbingZero,
}

/// How the Gaussian start is tied to the comparator at `τ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianMatch {
    /// Fixed width; the amplitude reproduces the comparator's mass.
    Mass,
    /// Width and amplitude reproduce both the mass and the first moment.
    MassAndMoment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    Gaussian { amplitude: f64, center: f64, width: f64 },
    Analytic { solution: Solution },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub n: f64,
    pub bc: BcKind,
    pub gamma0: f64,
    pub phi0: f64,
    pub tau_shift: f64,
    pub length: f64,
    pub cells: usize,
    pub ic: InitialCondition,
    pub comparator: Solution,
    pub snap_times: Vec<f64>,
    /// Extra sampling times for the boundary series.
    pub probe_times: Vec<f64>,
    /// Fit window in shifted time `τ + τ₀`.
    pub fit_window: [f64; 2],
    pub step: StepControl,
}

impl ScenarioConfig {
    pub fn params(&self) -> Result<SuperposedParams> {
        SuperposedParams::new(self.n, self.gamma0, self.phi0, self.tau_shift)
    }

    pub fn grid(&self) -> Result<Grid1D> {
        make_grid(self.length, self.cells)
    }

    pub fn boundary(&self) -> Result<BoundaryCondition> {
        Ok(match self.bc {
            BcKind::NeumannZero => BoundaryCondition::NeumannZero,
            BcKind::AbsorbingZero => BoundaryCondition::AbsorbingZero,
            BcKind::GammaDirichlet => BoundaryCondition::GammaDirichlet { params: self.params()? },
        })
    }

    pub fn tau_end(&self) -> f64 {
        let last_snap = self.snap_times.last().copied().unwrap_or(0.0);
        let last_probe = self.probe_times.last().copied().unwrap_or(0.0);
        last_snap.max(last_probe)
    }

    /// Analytic support extent of the comparator at the final time.
    pub fn front_at_end(&self) -> Result<f64> {
        let p = self.comparator.effective_params(&self.params()?);
        if self.comparator == Solution::Linear {
            let t = p.shifted_time(self.tau_end())?;
            return Ok((4.0 * t * (1.0 / LINEAR_TAIL).ln()).sqrt());
        }
        support_extent(&p, self.tau_end(), LINEAR_TAIL)
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.params()?;
        self.grid()?;
        self.step.validate()?;
        let sorted = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if self.snap_times.is_empty() || !sorted(&self.snap_times) || !sorted(&self.probe_times) {
            return Err(Error::Config("snapshot and probe times must be non-empty and strictly increasing".into()));
        }
        if self.snap_times.iter().chain(&self.probe_times).any(|&t| !(t >= 0.0) || !t.is_finite()) {
            return Err(Error::Config("snapshot and probe times must be finite and >= 0".into()));
        }
        if self.comparator == Solution::Linear && !p.ctx.is_linear() {
            return Err(Error::Config("the linear comparator requires n = 0".into()));
        }
        if !(self.fit_window[0] > 0.0 && self.fit_window[0] < self.fit_window[1]) {
            return Err(Error::Config(format!("fit window {:?} is not a positive interval", self.fit_window)));
        }
        if let InitialCondition::Gaussian { amplitude, width, .. } = self.ic {
            if !(amplitude > 0.0 && width > 0.0) {
                return Err(Error::Config("Gaussian amplitude and width must be positive".into()));
            }
        }
        let front = self.front_at_end()?;
        if !(self.length >= FRONT_MARGIN * front) {
            return Err(Error::Config(format!(
                "domain length {} does not exceed the analytic front {front:.6} at tau = {} by {:.0}%",
                self.length,
                self.tau_end(),
                (FRONT_MARGIN - 1.0) * 100.0
            )));
        }
        Ok(())
    }

    fn initial_state(&self) -> Result<FieldState> {
        let grid = self.grid()?;
        match self.ic {
            InitialCondition::Gaussian { amplitude, center, width } => gaussian_ic(grid, amplitude, center, width),
            InitialCondition::Analytic { solution } => project_analytic(grid, &self.params()?, 0.0, solution),
        }
    }
}

/// Gaussian centred at the origin matched to `which` at `τ = 0` (shifted time `τ₀`).
pub fn matched_gaussian(
    p: &SuperposedParams,
    which: Solution,
    rule: GaussianMatch,
    width: f64,
) -> Result<InitialCondition> {
    let (m0, m1) = analytic_moments(p, 0.0, which, 1 << 16)?;
    if !(m0 > 0.0) {
        return Err(Error::Config("comparator has no mass to match".into()));
    }
    let half = (std::f64::consts::PI / 2.0).sqrt();
    let width = match rule {
        GaussianMatch::Mass => width,
        GaussianMatch::MassAndMoment => half * m1 / m0,
    };
    Ok(InitialCondition::Gaussian { amplitude: m0 / (width * half), center: 0.0, width })
}

/// `count` times geometrically spaced in shifted time from `τ₀` to `τ_end + τ₀`.
pub fn geometric_probes(tau_shift: f64, tau_end: f64, count: usize) -> Vec<f64> {
    let (a, b) = (tau_shift.max(1e-3), tau_end + tau_shift);
    let mut v: Vec<f64> = (0..count)
        .map(|i| a * (b / a).powf(i as f64 / (count - 1) as f64) - tau_shift)
        .map(|t| t.clamp(0.0, tau_end))
        .collect();
    v[count - 1] = tau_end;
    v.dedup();
    v
}

/// Gaussian matching for the insulated panel: unit width, mass fixed by the
/// amplitude. Mass is the conserved quantity of that problem.
pub const LEFT_MATCH: GaussianMatch = GaussianMatch::Mass;

/// Gaussian matching for the imposed-value panel. Mass leaves through the
/// boundary there, while `d/dτ ∫ξθ = θ(0)^{n+1}` is fixed by the boundary law,
/// so the first moment is what selects the member of the family.
pub const RIGHT_MATCH: GaussianMatch = GaussianMatch::MassAndMoment;

#[allow(clippy::too_many_arguments)]
fn fig1_config(
    name: &str,
    n: f64,
    bc: BcKind,
    gamma0: f64,
    phi0: f64,
    comparator: Solution,
    rule: GaussianMatch,
) -> Result<ScenarioConfig> {
    let tau_shift = 1.0;
    let p = SuperposedParams::new(n, gamma0, phi0, tau_shift)?;
    let end = *FIG1_SNAPSHOTS.last().unwrap();
    Ok(ScenarioConfig {
        name: name.to_string(),
        n,
        bc,
        gamma0,
        phi0,
        tau_shift,
        length: FIG1_LENGTH,
        cells: FIG1_CELLS,
        ic: matched_gaussian(&p, comparator, rule, 1.0)?,
        comparator,
        snap_times: FIG1_SNAPSHOTS.to_vec(),
        probe_times: geometric_probes(tau_shift, end, 33),
        fit_window: [10.0, end + tau_shift],
        step: StepControl::default(),
    })
}

/// Insulated bar from a mass-matched Gaussian, compared with the exact
/// insulated solution shifted by one time unit.
pub fn fig1_left_config() -> Result<ScenarioConfig> {
    fig1_config("fig1_left", FIG1_N, BcKind::NeumannZero, 1.0, 0.0, Solution::Neumann, LEFT_MATCH)
}

/// Boundary held at `Γ(τ)^{1/(n+1)}` with `Γ₀ = 0.1`, `Φ₀ = 1`, compared with
/// the superposed profile.
pub fn fig1_right_config() -> Result<ScenarioConfig> {
    fig1_right_config_for(FIG1_N)
}

pub fn fig1_right_config_for(n: f64) -> Result<ScenarioConfig> {
    let mut cfg = fig1_config("fig1_right", n, BcKind::GammaDirichlet, 0.1, 1.0, Solution::Superposed, RIGHT_MATCH)?;
    if n != FIG1_N {
        cfg.name = format!("fig1_right_n{n}");
    }
    Ok(cfg)
}

/// Start from the exact profile at `τ₀ = 1` and follow it for `decades` decades.
pub fn exact_start_config(n: f64, which: Solution, decades: f64, cells_per_unit: f64) -> Result<ScenarioConfig> {
    let (bc, gamma0, phi0) = match which {
        Solution::Neumann => (BcKind::NeumannZero, 1.0, 0.0),
        Solution::Dirichlet => (BcKind::AbsorbingZero, 0.0, 1.0),
        _ => return Err(Error::Config("exact runs use the neumann or dirichlet solution".into())),
    };
    let tau_shift = 1.0;
    let end = tau_shift * 10f64.powf(decades) - tau_shift;
    let comparator = if n == 0.0 { Solution::Linear } else { which };
    let mut cfg = ScenarioConfig {
        name: format!("exact_{}_n{n}", which.name()),
        n,
        bc,
        gamma0,
        phi0,
        tau_shift,
        length: 1.0,
        cells: 16,
        ic: InitialCondition::Analytic { solution: which },
        comparator,
        snap_times: vec![0.0, end],
        probe_times: geometric_probes(tau_shift, end, 41),
        fit_window: [tau_shift, end + tau_shift],
        step: StepControl::default(),
    };
    let front = cfg.front_at_end()?;
    cfg.length = (FRONT_MARGIN * front * 1.05).ceil();
    cfg.cells = ((cfg.length * cells_per_unit).round() as usize).max(crate::solver::MIN_CELLS);
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRecord {
    pub tau: f64,
    pub error: Option<ErrorReport>,
    pub boundary_value: f64,
    pub mass: f64,
    pub first_moment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassLedger {
    pub initial_mass: f64,
    pub final_mass: f64,
    /// `∫ F(0, τ) dτ`, flux through the left end in the `+ξ` direction.
    pub integrated_left_flux: f64,
    /// `∫ F(L, τ) dτ`.
    pub integrated_right_flux: f64,
    pub clipped: f64,
    /// `|Δm − (left − right + clipped)| / max(m₀, m₁)`.
    pub closure_rel: f64,
    /// Relative drift `|Δm| / m₀`.
    pub drift_rel: f64,
    /// Integrated outflow at `ξ = L` is below [`DRY_TOLERANCE`] of the initial mass.
    pub right_boundary_dry: bool,
}

impl MassLedger {
    pub fn closes(&self, tol: f64) -> bool {
        self.closure_rel <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    /// Largest `|residual_expression|` over the final error mask.
    pub max_expression: f64,
    pub sample_xi: f64,
    pub sample_tau: f64,
    pub sample: ResidualEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ScenarioConfig,
    pub comparator_exact: bool,
    pub snapshots: Vec<SnapshotRecord>,
    /// `(τ + τ₀, F(0))` from the one-sided boundary stencil.
    pub flux_series: TimeSeries,
    /// `(τ + τ₀, θ(0)^{n+1})`.
    pub corner_series: TimeSeries,
    pub flux_fit: Option<PowerLawFit>,
    pub corner_fit: Option<PowerLawFit>,
    pub ledger: MassLedger,
    pub residual: Option<ResidualSummary>,
    pub steps: u64,
    pub clipping_flagged: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(skip)]
    pub fields: Vec<SnapshotFields>,
}

/// Nodal data behind one snapshot record.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFields {
    pub numeric: FieldState,
    pub analytic: FieldState,
}

impl RunReport {
    pub fn snapshot(&self, tau: f64) -> Option<&SnapshotRecord> {
        self.snapshots.iter().find(|s| s.tau == tau)
    }

    pub fn l2_at(&self, tau: f64) -> Option<f64> {
        self.snapshot(tau).and_then(|s| s.error).map(|e| e.l2_rel)
    }

    pub fn late_time_l2(&self) -> Option<f64> {
        self.snapshots.last().and_then(|s| s.error).map(|e| e.l2_rel)
    }
}

fn merge_times(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Run a scenario. The report is a pure function of `cfg`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    let p = cfg.params()?;
    let grid = cfg.grid()?;
    let bc = cfg.boundary()?;
    let n = cfg.n;
    let start = cfg.initial_state()?;
    let times = merge_times(&cfg.snap_times, &cfg.probe_times);
    let run = integrate(&start, &bc, n, cfg.tau_end(), &cfg.step, &times)?;

    let mut flux_series = TimeSeries::default();
    let mut corner_series = TimeSeries::default();
    let mut snapshots = Vec::with_capacity(cfg.snap_times.len());
    let mut fields = Vec::with_capacity(cfg.snap_times.len());
    let comparator_params = cfg.comparator.effective_params(&p);
    for state in &run.snapshots {
        let t = state.tau + cfg.tau_shift;
        if t > 0.0 {
            flux_series.push(t, boundary_flux(state, n))?;
            corner_series.push(t, corner_value(state, n))?;
        }
        if !cfg.snap_times.contains(&state.tau) {
            continue;
        }
        let analytic = project_analytic(grid, &p, state.tau, cfg.comparator)?;
        let front =
            if cfg.comparator == Solution::Linear { None } else { front_position(&comparator_params, state.tau)? };
        let error = rel_error(state, &analytic, &MaskRule::with_front(front)).ok();
        snapshots.push(SnapshotRecord {
            tau: state.tau,
            error,
            boundary_value: state.theta[0],
            mass: total_mass(state),
            first_moment: first_moment(state),
        });
        fields.push(SnapshotFields { numeric: state.clone(), analytic });
    }

    let [lo, hi] = cfg.fit_window;
    let fit = |ts: &TimeSeries| fit_powerlaw(&ts.magnitude().window(lo, hi)).ok();
    let flux_fit = fit(&flux_series);
    let corner_fit = fit(&corner_series);

    let initial_mass = total_mass(&start);
    let final_mass = total_mass(&run.state);
    let led = run.ledger;
    let delta = final_mass - initial_mass;
    let scale = initial_mass.max(final_mass);
    let ledger = MassLedger {
        initial_mass,
        final_mass,
        integrated_left_flux: led.left,
        integrated_right_flux: led.right,
        clipped: led.clipped,
        closure_rel: if scale > 0.0 { (delta - (led.left - led.right + led.clipped)).abs() / scale } else { 0.0 },
        drift_rel: if initial_mass > 0.0 { delta.abs() / initial_mass } else { 0.0 },
        right_boundary_dry: led.right.abs() <= DRY_TOLERANCE * initial_mass.max(f64::MIN_POSITIVE),
    };

    let residual = residual_summary(cfg, &p, &fields)?;

    Ok(RunReport {
        config: cfg.clone(),
        comparator_exact: cfg.comparator.is_exact(&p),
        snapshots,
        flux_series,
        corner_series,
        flux_fit,
        corner_fit,
        ledger,
        residual,
        steps: run.steps,
        clipping_flagged: run.clipping_flagged(),
        wall_time_s: None,
        fields,
    })
}

/// Same as [`run_scenario`] with the elapsed wall time attached.
pub fn run_scenario_timed(cfg: &ScenarioConfig) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = run_scenario(cfg)?;
    report.wall_time_s = Some(start.elapsed().as_secs_f64());
    Ok(report)
}

fn residual_summary(
    cfg: &ScenarioConfig,
    p: &SuperposedParams,
    fields: &[SnapshotFields],
) -> Result<Option<ResidualSummary>> {
    if cfg.comparator != Solution::Superposed {
        return Ok(None);
    }
    let Some(last) = fields.last() else { return Ok(None) };
    let tau = last.analytic.tau;
    let t = tau + cfg.tau_shift;
    if !(t > 0.0) {
        return Ok(None);
    }
    let floor = 1e-3 * last.analytic.max_value();
    let mut max_expression: f64 = 0.0;
    for (xi, &a) in last.analytic.grid.positions().zip(&last.analytic.theta) {
        if a > floor {
            let r = residual_expression(&p.ctx, p.gamma0, p.phi0, xi, t)?;
            max_expression = max_expression.max(r.abs());
        }
    }
    let sample_xi = match front_position(p, tau)? {
        Some(front) => 0.5 * front,
        None => (t).sqrt(),
    };
    let h = 1e-2 * sample_xi;
    let dt = 1e-2 * t;
    let sample = extrapolated_residual(p, sample_xi, tau, h, dt)?;
    Ok(Some(ResidualSummary { max_expression, sample_xi, sample_tau: tau, sample }))
}

/// The two reference scenarios: insulated end (left) and prescribed boundary value (right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Panel {
    Left,
    Right,
}

/// Optional replacements for the panel defaults. Unset fields keep the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PanelOverrides {
    pub n: Option<f64>,
    pub gamma0: Option<f64>,
    pub phi0: Option<f64>,
    pub length: Option<f64>,
    pub cells: Option<usize>,
    pub snap_times: Option<Vec<f64>>,
}

/// Panel configuration with overrides applied. The Gaussian start, probe times
/// and fit window are rederived from the overridden values.
pub fn panel_config(panel: Panel, o: &PanelOverrides) -> Result<ScenarioConfig> {
    let n = o.n.unwrap_or(FIG1_N);
    let mut cfg = match panel {
        Panel::Left => fig1_config(
            "fig1_left",
            n,
            BcKind::NeumannZero,
            o.gamma0.unwrap_or(1.0),
            o.phi0.unwrap_or(0.0),
            Solution::Neumann,
            LEFT_MATCH,
        )?,
        Panel::Right => fig1_config(
            "fig1_right",
            n,
            BcKind::GammaDirichlet,
            o.gamma0.unwrap_or(0.1),
            o.phi0.unwrap_or(1.0),
            if n == 0.0 { Solution::Linear } else { Solution::Superposed },
            RIGHT_MATCH,
        )?,
    };
    if let Some(length) = o.length {
        cfg.length = length;
    }
    if let Some(cells) = o.cells {
        cfg.cells = cells;
    }
    if let Some(snaps) = &o.snap_times {
        let end = snaps.last().copied().ok_or_else(|| Error::Config("no snapshot times".into()))?;
        cfg.snap_times = snaps.clone();
        cfg.probe_times = geometric_probes(cfg.tau_shift, end, 33);
        let t_end = end + cfg.tau_shift;
        cfg.fit_window = [(t_end / 8.2).min(10.0), t_end];
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn fig1_left() -> Result<RunReport> {
    run_scenario(&fig1_left_config()?)
}

pub fn fig1_right() -> Result<RunReport> {
    run_scenario(&fig1_right_config()?)
}

/// One sweep entry; a failed scenario does not abort the others.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub n: f64,
    pub report: Result<RunReport>,
}

/// The right-panel configuration for another `n`, with the domain widened
/// (at fixed spacing) when the front or the linear tail needs more room.
pub fn sweep_config(n: f64) -> Result<ScenarioConfig> {
    let mut cfg = fig1_right_config_for(n)?;
    if n == 0.0 {
        cfg.comparator = Solution::Linear;
    }
    let h = cfg.length / cfg.cells as f64;
    let needed = FRONT_MARGIN * cfg.front_at_end()?;
    if cfg.length < needed {
        cfg.cells = (needed / h).ceil() as usize;
        cfg.length = cfg.cells as f64 * h;
    }
    Ok(cfg)
}

/// Repeat the right-panel scenario for each `n`, concurrently.
pub fn n_sweep(ns: &[f64]) -> Vec<SweepEntry> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| scope.spawn(move || SweepEntry { n, report: sweep_config(n).and_then(|c| run_scenario(&c)) }))
            .collect();
        handles
            .into_iter()
            .zip(ns)
            .map(|(h, &n)| {
                h.join().unwrap_or_else(|_| SweepEntry {
                    n,
                    report: Err(Error::Config(format!("scenario n = {n} panicked"))),
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearLimitEntry {
    pub eps: f64,
    /// Max `|θ_eps − θ_lin|` over the sample.
    pub deviation: f64,
    /// `deviation / max |θ_lin|`.
    pub rel_deviation: f64,
    /// The same for the `Γ₀ = 0` sub-case.
    pub dirichlet_deviation: f64,
    /// Max over the sampled times of `|Γ^{1/(1+eps)} − Γ|` at `ξ = 0`.
    pub boundary_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearLimitReport {
    pub gamma0: f64,
    pub phi0: f64,
    pub entries: Vec<LinearLimitEntry>,
    /// Deviations shrink strictly as `eps` decreases.
    pub monotone: bool,
}

pub const LIMIT_GAMMA0: f64 = 0.1;
pub const LIMIT_PHI0: f64 = 1.0;

/// The fixed `(ξ, τ)` sample for the linear-limit comparison.
pub fn limit_sample() -> Vec<(f64, f64)> {
    let taus = [0.5, 1.0, 2.0, 4.0, 8.0];
    taus.iter().flat_map(|&tau| (0..=40).map(move |i| (i as f64 * 0.25, tau))).collect()
}

/// Deviation of the superposed profile at `n = eps` from the linear superposition.
pub fn linear_limit_check(eps_list: &[f64]) -> Result<LinearLimitReport> {
    let sample = limit_sample();
    let mut entries = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!("eps = {eps} must be positive")));
        }
        let p = SuperposedParams::new(eps, LIMIT_GAMMA0, LIMIT_PHI0, 0.0)?;
        let (mut dev, mut dev_d, mut scale, mut dev_b) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &(xi, tau) in &sample {
            let lin = eval_linear_superposed(LIMIT_GAMMA0, LIMIT_PHI0, xi, tau, 0.0)?;
            dev = dev.max((eval_superposed(&p, xi, tau)? - lin).abs());
            scale = scale.max(lin.abs());
            let lin_d = eval_linear_superposed(0.0, LIMIT_PHI0, xi, tau, 0.0)?;
            dev_d = dev_d.max((eval_superposed(&p.dirichlet_part(), xi, tau)? - lin_d).abs());
            if xi == 0.0 {
                let gamma = LIMIT_GAMMA0 * tau.powf(-p.ctx.beta());
                let lin_gamma = LIMIT_GAMMA0 / tau.sqrt();
                dev_b = dev_b.max((gamma.powf(1.0 / (1.0 + eps)) - lin_gamma).abs());
            }
        }
        entries.push(LinearLimitEntry {
            eps,
            deviation: dev,
            rel_deviation: dev / scale,
            dirichlet_deviation: dev_d,
            boundary_deviation: dev_b,
        });
    }
    let mut order: Vec<&LinearLimitEntry> = entries.iter().collect();
    order.sort_by(|a, b| b.eps.total_cmp(&a.eps));
    let monotone = order.windows(2).all(|w| w[1].deviation < w[0].deviation);
    Ok(LinearLimitReport { gamma0: LIMIT_GAMMA0, phi0: LIMIT_PHI0, entries, monotone })
}
