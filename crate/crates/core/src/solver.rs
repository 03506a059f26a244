//! Explicit conservative finite differences for `θ_τ = (θ^{n+1})_ξξ` on `[0, L]`.
//!
//! Nodes sit at `ξ_i = i h`. Interior nodes own a full cell, the two end nodes
//! own a half cell, and the interface fluxes are the two-point differences
//! `F_{i+1/2} = −(u_{i+1} − u_i)/h` of the transported quantity `u = θ^{n+1}`.
//! With that layout the trapezoidal mass changes exactly by the boundary fluxes,
//! which the integrator accumulates in a [`FluxLedger`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{gamma_of_tau, Solution, SuperposedParams};

/// Smallest admissible cell count.
pub const MIN_CELLS: usize = 16;

/// Uniform mesh of `[0, L]` with `N` cells and `N + 1` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    length: f64,
    cells: usize,
}

impl Grid1D {
    pub fn new(length: f64, cells: usize) -> Result<Self> {
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!("length {length} must be positive")));
        }
        if cells < MIN_CELLS {
            return Err(Error::InvalidGrid(format!("{cells} cells, need at least {MIN_CELLS}")));
        }
        Ok(Self { length, cells })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.cells as f64
    }

    /// Node position; the last node is exactly `L`.
    pub fn xi(&self, i: usize) -> f64 {
        if i == self.cells {
            self.length
        } else {
            i as f64 * self.spacing()
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.nodes()).map(move |i| self.xi(i))
    }
}

/// `make_grid(L, N)`.
pub fn make_grid(length: f64, cells: usize) -> Result<Grid1D> {
    Grid1D::new(length, cells)
}

/// Nodal values of `θ` at time `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub grid: Grid1D,
    pub theta: Vec<f64>,
    pub tau: f64,
}

impl FieldState {
    pub fn new(grid: Grid1D, theta: Vec<f64>, tau: f64) -> Result<Self> {
        if theta.len() != grid.nodes() {
            return Err(Error::InvalidGrid(format!("{} values for {} nodes", theta.len(), grid.nodes())));
        }
        if let Some(bad) = theta.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain(format!("state value {bad} is not finite and non-negative")));
        }
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!("state time {tau} must be >= 0")));
        }
        Ok(Self { grid, theta, tau })
    }

    pub fn zeros(grid: Grid1D, tau: f64) -> Self {
        Self { grid, theta: vec![0.0; grid.nodes()], tau }
    }

    pub fn max_value(&self) -> f64 {
        self.theta.iter().copied().fold(0.0, f64::max)
    }
}

/// Left boundary treatment. The right end is always held at `θ(L) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// Insulated end, `θ_ξ(0, τ) = 0`.
    NeumannZero,
    /// `θ(0, τ) = Γ(τ)^{1/(n+1)}` with `Γ` taken from the parameters.
    GammaDirichlet { params: SuperposedParams },
    /// Perfect sink, `θ(0, τ) = 0`.
    AbsorbingZero,
}

impl BoundaryCondition {
    fn left_value(&self, n: f64, tau: f64) -> Result<Option<f64>> {
        match self {
            BoundaryCondition::NeumannZero => Ok(None),
            BoundaryCondition::AbsorbingZero => Ok(Some(0.0)),
            BoundaryCondition::GammaDirichlet { params } => {
                let gamma = gamma_of_tau(params, tau)?;
                Ok(Some(if gamma == 0.0 { 0.0 } else { gamma.powf(1.0 / (n + 1.0)) }))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepControl {
    /// Fraction of the explicit stability limit, in `(0, 1]`.
    pub safety: f64,
    pub dt_min: f64,
    pub max_steps: u64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self { safety: 0.4, dt_min: 1e-14, max_steps: 10_000_000 }
    }
}

impl StepControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.safety > 0.0 && self.safety <= 1.0) {
            return Err(Error::Config(format!("safety {} must lie in (0, 1]", self.safety)));
        }
        if !(self.dt_min > 0.0) {
            return Err(Error::Config(format!("dt_min {} must be positive", self.dt_min)));
        }
        Ok(())
    }
}

/// `θ_i = A exp(−(ξ_i − c)² / (2 w²))` at `τ = 0`.
pub fn gaussian_ic(grid: Grid1D, amplitude: f64, center: f64, width: f64) -> Result<FieldState> {
    if !(amplitude > 0.0) || !amplitude.is_finite() {
        return Err(Error::Domain(format!("amplitude {amplitude} must be positive")));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::Domain(format!("width {width} must be positive")));
    }
    let theta = grid
        .positions()
        .map(|xi| {
            let z = (xi - center) / width;
            amplitude * (-0.5 * z * z).exp()
        })
        .collect();
    FieldState::new(grid, theta, 0.0)
}

/// Sample a closed-form solution onto the grid at time `tau`.
pub fn project_analytic(grid: Grid1D, p: &SuperposedParams, tau: f64, which: Solution) -> Result<FieldState> {
    let theta = grid.positions().map(|xi| which.eval(p, xi, tau)).collect::<Result<Vec<_>>>()?;
    FieldState::new(grid, theta, tau)
}

fn check_n(n: f64) -> Result<()> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::Domain(format!("nonlinearity n = {n} must be >= 0")));
    }
    Ok(())
}

/// `h² / (2 (n+1) max θ^n)`, the largest stable step.
fn stability_limit(s: &FieldState, n: f64) -> f64 {
    let h = s.grid.spacing();
    let peak = s.max_value();
    if peak == 0.0 {
        return 0.5 * h * h;
    }
    let diffusivity = (n + 1.0) * if n == 0.0 { 1.0 } else { peak.powf(n) };
    h * h / (2.0 * diffusivity)
}

/// Step size from the stability limit scaled by `c.safety`, floored at `c.dt_min`.
pub fn stable_dt(s: &FieldState, n: f64, c: &StepControl) -> f64 {
    (c.safety * stability_limit(s, n)).max(c.dt_min)
}

/// One explicit step and the boundary fluxes it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub state: FieldState,
    /// Flux through `ξ = 0` in the `+ξ` direction.
    pub left_flux: f64,
    /// Flux through `ξ = L` in the `+ξ` direction.
    pub right_flux: f64,
    /// Mass added by clipping negative round-off.
    pub clipped: f64,
}

#[inline]
fn transported(theta: f64, n: f64) -> f64 {
    if n == 0.0 {
        theta
    } else {
        theta.powf(n + 1.0)
    }
}

/// Advance `s` by `dt`.
pub fn step_explicit(s: &FieldState, bc: &BoundaryCondition, n: f64, dt: f64) -> Result<Step> {
    check_n(n)?;
    let limit = stability_limit(s, n);
    if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit });
    }
    let grid = s.grid;
    let h = grid.spacing();
    let last = grid.cells();
    let u: Vec<f64> = s.theta.iter().map(|&t| transported(t, n)).collect();
    // flux[i] = F_{i+1/2}
    let flux: Vec<f64> = u.windows(2).map(|w| -(w[1] - w[0]) / h).collect();

    let mut theta = Vec::with_capacity(grid.nodes());
    let half = 2.0 * dt / h;
    theta.push(s.theta[0] - half * flux[0]);
    let r = dt / h;
    for i in 1..last {
        theta.push(s.theta[i] - r * (flux[i] - flux[i - 1]));
    }
    theta.push(0.0);

    let tau = s.tau + dt;
    if let Some(v) = bc.left_value(n, tau)? {
        theta[0] = v;
    }

    let mut clipped = 0.0;
    for v in theta.iter_mut() {
        if *v < 0.0 {
            clipped -= *v;
            *v = 0.0;
        }
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite value after step at tau = {tau}")));
        }
    }

    // Half-cell balances at the end nodes give the fluxes through ξ = 0 and ξ = L.
    let left_flux = match bc {
        BoundaryCondition::NeumannZero => 0.0,
        _ => flux[0] + 0.5 * h * (theta[0] - s.theta[0]) / dt,
    };
    let right_flux = flux[last - 1] - 0.5 * h * (theta[last] - s.theta[last]) / dt;

    Ok(Step { state: FieldState { grid, theta, tau }, left_flux, right_flux, clipped })
}

/// Time-integrated boundary fluxes of a run.
///
/// The trapezoidal mass obeys `m(end) − m(start) = left − right + clipped`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FluxLedger {
    pub left: f64,
    pub right: f64,
    pub clipped: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub state: FieldState,
    pub snapshots: Vec<FieldState>,
    pub ledger: FluxLedger,
    pub steps: u64,
    /// Largest per-step clipped mass relative to the peak value.
    pub max_clip_ratio: f64,
}

impl Integration {
    /// Whether clipping ever exceeded round-off level.
    pub fn clipping_flagged(&self) -> bool {
        self.max_clip_ratio >= 1e-12
    }
}

/// Integrate to `tau_end`, landing exactly on every snapshot time.
pub fn integrate(
    s: &FieldState,
    bc: &BoundaryCondition,
    n: f64,
    tau_end: f64,
    c: &StepControl,
    snap_times: &[f64],
) -> Result<Integration> {
    check_n(n)?;
    c.validate()?;
    if !(tau_end >= s.tau) || !tau_end.is_finite() {
        return Err(Error::Config(format!("tau_end {tau_end} precedes the state time {}", s.tau)));
    }
    if snap_times.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Config("snapshot times must be sorted".into()));
    }
    if snap_times.iter().any(|&t| !(t >= s.tau && t <= tau_end)) {
        return Err(Error::Config(format!("snapshot times must lie within [{}, {tau_end}]", s.tau)));
    }

    let mut run = Integration {
        state: s.clone(),
        snapshots: Vec::with_capacity(snap_times.len()),
        ledger: FluxLedger::default(),
        steps: 0,
        max_clip_ratio: 0.0,
    };
    for &target in snap_times {
        advance(&mut run, bc, n, target, c)?;
        run.snapshots.push(run.state.clone());
    }
    advance(&mut run, bc, n, tau_end, c)?;
    Ok(run)
}

fn advance(run: &mut Integration, bc: &BoundaryCondition, n: f64, target: f64, c: &StepControl) -> Result<()> {
    while run.state.tau < target {
        if run.steps >= c.max_steps {
            return Err(Error::MaxSteps { max_steps: c.max_steps, tau_reached: run.state.tau });
        }
        let remaining = target - run.state.tau;
        let dt = stable_dt(&run.state, n, c);
        let landing = remaining <= dt;
        let dt = if landing { remaining } else { dt };
        let step = step_explicit(&run.state, bc, n, dt)?;
        run.ledger.left += dt * step.left_flux;
        run.ledger.right += dt * step.right_flux;
        run.ledger.clipped += step.clipped;
        let peak = step.state.max_value();
        if peak > 0.0 {
            run.max_clip_ratio = run.max_clip_ratio.max(step.clipped / peak);
        }
        run.state = step.state;
        if landing {
            run.state.tau = target;
        }
        run.steps += 1;
    }
    Ok(())
}
