//! Measured quantities: conserved integrals, boundary fluxes, error norms,
//! power-law fits and PDE residuals of the closed-form profiles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{eval_superposed, front_position, support_extent, Nonlinearity, Solution, SuperposedParams};
use crate::solver::FieldState;

/// Trapezoidal `∫ θ dξ` over the grid.
pub fn total_mass(s: &FieldState) -> f64 {
    trapezoid(s, |_, v| v)
}

/// Trapezoidal `∫ ξ θ dξ` over the grid.
pub fn first_moment(s: &FieldState) -> f64 {
    trapezoid(s, |xi, v| xi * v)
}

fn trapezoid(s: &FieldState, f: impl Fn(f64, f64) -> f64) -> f64 {
    let g = s.grid;
    let last = g.cells();
    let interior: f64 = (1..last).map(|i| f(g.xi(i), s.theta[i])).sum();
    let ends = 0.5 * (f(g.xi(0), s.theta[0]) + f(g.xi(last), s.theta[last]));
    g.spacing() * (interior + ends)
}

fn transported(theta: f64, n: f64) -> f64 {
    if n == 0.0 {
        theta
    } else {
        theta.powf(n + 1.0)
    }
}

/// Fick flux `−∂(θ^{n+1})/∂ξ` at `ξ = 0`, second-order one-sided.
pub fn boundary_flux(s: &FieldState, n: f64) -> f64 {
    let h = s.grid.spacing();
    let u = |i: usize| transported(s.theta[i], n);
    -(-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h)
}

/// Corner flux at the boundary, `θ(0)^{n+1}`.
pub fn corner_value(s: &FieldState, n: f64) -> f64 {
    transported(s.theta[0], n)
}

/// Selects the nodes an error norm is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaskRule {
    /// Nodes with analytic value at or below `floor_fraction · max` are dropped.
    pub floor_fraction: f64,
    /// Analytic front position, if the profile has compact support.
    pub front: Option<f64>,
    /// Nodes within this many cells of the front are dropped.
    pub collar_cells: f64,
}

impl Default for MaskRule {
    fn default() -> Self {
        Self { floor_fraction: 1e-3, front: None, collar_cells: 2.0 }
    }
}

impl MaskRule {
    pub fn with_front(front: Option<f64>) -> Self {
        Self { front, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub l2_rel: f64,
    pub linf_rel: f64,
    pub support_mask_fraction: f64,
}

/// Relative L2 and L∞ errors of `numeric` against `analytic` on the mask.
pub fn rel_error(numeric: &FieldState, analytic: &FieldState, mask: &MaskRule) -> Result<ErrorReport> {
    if numeric.grid != analytic.grid || numeric.theta.len() != analytic.theta.len() {
        return Err(Error::InvalidGrid("error norm needs matching grids".into()));
    }
    let g = analytic.grid;
    let floor = mask.floor_fraction * analytic.max_value();
    let collar = mask.collar_cells * g.spacing();
    let (mut diff2, mut ref2, mut diff_max, mut ref_max, mut count) = (0.0, 0.0, 0.0f64, 0.0f64, 0usize);
    for (i, (&num, &ana)) in numeric.theta.iter().zip(&analytic.theta).enumerate() {
        if !(ana > floor) {
            continue;
        }
        if let Some(front) = mask.front {
            if g.xi(i) >= front - collar {
                continue;
            }
        }
        let d = num - ana;
        diff2 += d * d;
        ref2 += ana * ana;
        diff_max = diff_max.max(d.abs());
        ref_max = ref_max.max(ana.abs());
        count += 1;
    }
    if count == 0 || ref2 == 0.0 {
        return Err(Error::EmptyMask);
    }
    Ok(ErrorReport {
        l2_rel: (diff2 / ref2).sqrt(),
        linf_rel: diff_max / ref_max,
        support_mask_fraction: count as f64 / g.nodes() as f64,
    })
}

/// Samples `(τ, value)` with strictly increasing `τ`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub points: Vec<(f64, f64)>,
}

impl TimeSeries {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        let mut ts = TimeSeries::default();
        for (t, v) in points {
            ts.push(t, v)?;
        }
        Ok(ts)
    }

    pub fn push(&mut self, tau: f64, value: f64) -> Result<()> {
        if !tau.is_finite() || !value.is_finite() {
            return Err(Error::Domain(format!("non-finite sample ({tau}, {value})")));
        }
        if let Some(&(last, _)) = self.points.last() {
            if !(tau > last) {
                return Err(Error::Domain(format!("sample time {tau} does not follow {last}")));
            }
        }
        self.points.push((tau, value));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn magnitude(&self) -> TimeSeries {
        TimeSeries { points: self.points.iter().map(|&(t, v)| (t, v.abs())).collect() }
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> TimeSeries {
        TimeSeries { points: self.points.iter().map(|&(t, v)| (t, f(v))).collect() }
    }

    /// Samples with `lo <= τ <= hi`.
    pub fn window(&self, lo: f64, hi: f64) -> TimeSeries {
        TimeSeries { points: self.points.iter().copied().filter(|&(t, _)| t >= lo && t <= hi).collect() }
    }
}

/// `value ≈ prefactor · τ^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r2: f64,
}

/// Least-squares line through `(ln τ, ln value)`.
pub fn fit_powerlaw(ts: &TimeSeries) -> Result<PowerLawFit> {
    if ts.len() < 4 {
        return Err(Error::Fit(format!("{} samples, need at least 4", ts.len())));
    }
    if let Some(&(t, v)) = ts.points.iter().find(|&&(t, v)| !(t > 0.0 && v > 0.0)) {
        return Err(Error::Fit(format!("non-positive sample ({t}, {v})")));
    }
    let logs: Vec<(f64, f64)> = ts.points.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let m = logs.len() as f64;
    let (mx, my) = logs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x / m, b + y / m));
    let (sxx, sxy, syy) = logs.iter().fold((0.0, 0.0, 0.0), |(a, b, c), &(x, y)| {
        let (dx, dy) = (x - mx, y - my);
        (a + dx * dx, b + dx * dy, c + dy * dy)
    });
    if sxx == 0.0 {
        return Err(Error::Fit("sample times are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs.iter().map(|&(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(PowerLawFit { exponent: slope, prefactor: intercept.exp(), r2 })
}

/// `θ_τ − (θ^{n+1})_ξξ` of the superposed profile by centered differences
/// with spacings `stencil_h` and `stencil_dt`.
pub fn pde_residual_analytic(p: &SuperposedParams, xi: f64, tau: f64, stencil_h: f64, stencil_dt: f64) -> Result<f64> {
    if !(stencil_h > 0.0 && stencil_dt > 0.0) {
        return Err(Error::Stencil("stencil spacings must be positive".into()));
    }
    if !(xi - stencil_h > 0.0) {
        return Err(Error::Stencil(format!("xi = {xi} with h = {stencil_h} reaches the boundary")));
    }
    let t_lo = tau - stencil_dt;
    if !(t_lo + p.tau_shift > 0.0) {
        return Err(Error::Stencil(format!("tau = {tau} with dt = {stencil_dt} reaches t = 0")));
    }
    if !p.ctx.is_linear() {
        // The front advances in time, so the earliest one is the binding constraint.
        for t in [t_lo, tau, tau + stencil_dt] {
            if let Some(front) = front_position(p, t)? {
                if !(xi + stencil_h < front) {
                    return Err(Error::Stencil(format!(
                        "stencil [{}, {}] crosses the front {front} at tau = {t}",
                        xi - stencil_h,
                        xi + stencil_h
                    )));
                }
            }
        }
    }
    let n = p.ctx.n();
    let theta = |x: f64, t: f64| eval_superposed(p, x, t);
    let u = |x: f64| theta(x, tau).map(|v| transported(v, n));
    let dtheta = (theta(xi, tau + stencil_dt)? - theta(xi, t_lo)?) / (2.0 * stencil_dt);
    let d2u = (u(xi + stencil_h)? - 2.0 * u(xi)? + u(xi - stencil_h)?) / (stencil_h * stencil_h);
    Ok(dtheta - d2u)
}

/// Residuals at two stencil sizes and their Richardson combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualEstimate {
    pub coarse: f64,
    pub fine: f64,
    /// `(4 fine − coarse) / 3`, the residual with the `O(h²)` term removed.
    pub extrapolated: f64,
}

pub fn extrapolated_residual(
    p: &SuperposedParams,
    xi: f64,
    tau: f64,
    stencil_h: f64,
    stencil_dt: f64,
) -> Result<ResidualEstimate> {
    let coarse = pde_residual_analytic(p, xi, tau, stencil_h, stencil_dt)?;
    let fine = pde_residual_analytic(p, xi, tau, 0.5 * stencil_h, 0.5 * stencil_dt)?;
    Ok(ResidualEstimate { coarse, fine, extrapolated: (4.0 * fine - coarse) / 3.0 })
}

/// The three-term superposition requirement with `Γ = Γ₀ τ^{−β}`,
/// `Φ = −Φ₀ τ^{−α}` and their exact time derivatives.
///
/// Multiplied out so that vanishing gauges need no division:
/// `(τΦ̇ + αΦ) ξ²Φ + (τΓ̇Φ + τΦ̇Γ + 2ΓΦ) ξ + (τΓ̇ + βΓ) Γ`.
pub fn residual_expression(ctx: &Nonlinearity, gamma0: f64, phi0: f64, xi: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("tau = {tau} must be positive")));
    }
    let (a, b) = (ctx.alpha(), ctx.beta());
    let gamma = gamma0 * tau.powf(-b);
    let phi = -phi0 * tau.powf(-a);
    // τ d/dτ of each power law
    let tau_dgamma = -b * gamma;
    let tau_dphi = -a * phi;
    let first = (tau_dphi + a * phi) * xi * xi * phi;
    let second = (tau_dgamma * phi + tau_dphi * gamma + 2.0 * gamma * phi) * xi;
    let third = (tau_dgamma + b * gamma) * gamma;
    Ok(first + second + third)
}

/// Zeroth and first moments of a closed-form profile by composite Simpson
/// over its support.
pub fn analytic_moments(p: &SuperposedParams, tau: f64, which: Solution, intervals: usize) -> Result<(f64, f64)> {
    let eff = which.effective_params(p);
    let extent = match which {
        Solution::Linear => {
            let t = p.shifted_time(tau)?;
            (4.0 * t * 1e17f64.ln()).sqrt()
        }
        _ => support_extent(&eff, tau, 1e-17)?,
    };
    if extent == 0.0 {
        return Ok((0.0, 0.0));
    }
    let m = intervals.max(2) & !1;
    let h = extent / m as f64;
    let (mut m0, mut m1) = (0.0, 0.0);
    for i in 0..=m {
        let xi = if i == m { extent } else { i as f64 * h };
        let w = if i == 0 || i == m {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let v = which.eval(p, xi, tau)?;
        m0 += w * v;
        m1 += w * xi * v;
    }
    Ok((m0 * h / 3.0, m1 * h / 3.0))
}
