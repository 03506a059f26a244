//! Closed-form self-similar solutions of `θ_τ = (θ^{n+1})_ξξ` on the half line.
//!
//! Everything here is a pure evaluator. The two classical solutions are written
//! in flux form: the absorbing-boundary solution is parameterized by the boundary
//! flux `Φ(τ) = −Φ₀ τ^{−α}` and the insulated one by the corner flux
//! `Γ(τ) = Γ₀ τ^{−β}`. Replacing the single slot of either by `Γ − ξΦ` gives the
//! nonlinearly superposed profile
//!
//! ```text
//! θ = B^{1/(n+1)} · (1 − k_n ξ²/τ · B^{1/(n+1)−1})^{1/n},   B = Γ(τ) − ξΦ(τ),
//! ```
//!
//! which is exact when `n = 0` or when one of the gauges vanishes.
//!
//! All evaluators take the unshifted time `τ` and apply the stored shift
//! `τ₀`, so they are evaluated at `τ + τ₀`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The nonlinearity exponent `n` together with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NonlinearityRepr", into = "NonlinearityRepr")]
pub struct Nonlinearity {
    n: f64,
    k: f64,
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
struct NonlinearityRepr {
    n: f64,
}

impl TryFrom<NonlinearityRepr> for Nonlinearity {
    type Error = Error;

    fn try_from(repr: NonlinearityRepr) -> Result<Self> {
        Nonlinearity::new(repr.n)
    }
}

impl From<Nonlinearity> for NonlinearityRepr {
    fn from(ctx: Nonlinearity) -> Self {
        NonlinearityRepr { n: ctx.n }
    }
}

impl Nonlinearity {
    pub fn new(n: f64) -> Result<Self> {
        if !n.is_finite() || n < 0.0 {
            return Err(Error::Domain(format!("nonlinearity n = {n} must be finite and >= 0")));
        }
        Ok(Self {
            n,
            k: n / (2.0 * (n + 1.0) * (n + 2.0)),
            alpha: 1.0 + 1.0 / (2.0 * (n + 1.0)),
            beta: 1.0 - 1.0 / (n + 2.0),
        })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// Front constant `k_n = n / (2(n+1)(n+2))`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// Decay exponent of the boundary flux `Φ`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Decay exponent of the corner flux `Γ`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_linear(&self) -> bool {
        self.n == 0.0
    }
}

/// Gauge constants and time shift of the superposed family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperposedParams {
    pub ctx: Nonlinearity,
    pub gamma0: f64,
    pub phi0: f64,
    pub tau_shift: f64,
}

impl SuperposedParams {
    pub fn new(n: f64, gamma0: f64, phi0: f64, tau_shift: f64) -> Result<Self> {
        let ctx = Nonlinearity::new(n)?;
        for (name, v) in [("gamma0", gamma0), ("phi0", phi0), ("tau_shift", tau_shift)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Domain(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(Self { ctx, gamma0, phi0, tau_shift })
    }

    /// The same family with `Γ₀ = 0`: the absorbing-boundary solution.
    pub fn dirichlet_part(&self) -> Self {
        Self { gamma0: 0.0, ..*self }
    }

    /// The same family with `Φ₀ = 0`: the insulated-boundary solution.
    pub fn neumann_part(&self) -> Self {
        Self { phi0: 0.0, ..*self }
    }

    pub fn shifted_time(&self, tau: f64) -> Result<f64> {
        let t = tau + self.tau_shift;
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!(
                "shifted time tau + tau_shift = {tau} + {} must be positive",
                self.tau_shift
            )));
        }
        Ok(t)
    }
}

/// Integration constants of the steady profile `(Γ − Φξ)^{1/(n+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyParams {
    pub gamma: f64,
    pub phi: f64,
    pub n: f64,
}

/// Which closed-form solution to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solution {
    /// Absorbing boundary, parameterized by `Φ` (gauge `Γ₀` ignored).
    Dirichlet,
    /// Insulated boundary, parameterized by `Γ` (gauge `Φ₀` ignored).
    Neumann,
    /// Nonlinear superposition of both.
    Superposed,
    /// The `n = 0` superposition `(Γ − ξΦ) e^{−ξ²/4τ}`, whatever `n` says.
    Linear,
}

impl Solution {
    pub fn eval(self, p: &SuperposedParams, xi: f64, tau: f64) -> Result<f64> {
        match self {
            Solution::Dirichlet => eval_dirichlet_flux_form(p, xi, tau),
            Solution::Neumann => eval_neumann_flux_form(p, xi, tau),
            Solution::Superposed => eval_superposed(p, xi, tau),
            Solution::Linear => eval_linear_superposed(p.gamma0, p.phi0, xi, tau, p.tau_shift),
        }
    }

    /// Parameters the evaluator effectively uses.
    pub fn effective_params(self, p: &SuperposedParams) -> SuperposedParams {
        match self {
            Solution::Dirichlet => p.dirichlet_part(),
            Solution::Neumann => p.neumann_part(),
            Solution::Superposed | Solution::Linear => *p,
        }
    }

    /// Whether the sampled profile solves the PDE exactly for these parameters.
    pub fn is_exact(self, p: &SuperposedParams) -> bool {
        match self {
            Solution::Dirichlet | Solution::Neumann | Solution::Linear => true,
            Solution::Superposed => p.ctx.is_linear() || p.gamma0 == 0.0 || p.phi0 == 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solution::Dirichlet => "dirichlet",
            Solution::Neumann => "neumann",
            Solution::Superposed => "superposed",
            Solution::Linear => "linear",
        }
    }
}

/// `Γ(τ) = Γ₀ (τ+τ₀)^{−β}`.
pub fn gamma_of_tau(p: &SuperposedParams, tau: f64) -> Result<f64> {
    let t = p.shifted_time(tau)?;
    Ok(p.gamma0 * pow_pos(t, -p.ctx.beta))
}

/// `Φ(τ) = −Φ₀ (τ+τ₀)^{−α}`; non-positive for the admissible gauges.
pub fn phi_of_tau(p: &SuperposedParams, tau: f64) -> Result<f64> {
    let t = p.shifted_time(tau)?;
    Ok(-p.phi0 * pow_pos(t, -p.ctx.alpha))
}

/// `base^exp` for `base > 0` through exp/ln; `0^exp = 0` for `exp > 0`.
fn pow_pos(base: f64, exp: f64) -> f64 {
    if base == 0.0 {
        0.0
    } else {
        (exp * base.ln()).exp()
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} must be finite and >= 0")));
    }
    Ok(())
}

/// Bracket term `k ξ²/t · B^{1/(n+1)−1}`, formed in log space so that the
/// `ξ → 0` limit with `B → 0` never raises zero to a negative power.
fn bracket_load(ctx: &Nonlinearity, xi: f64, t: f64, b: f64) -> f64 {
    if xi == 0.0 {
        return 0.0;
    }
    let p = 1.0 / (ctx.n + 1.0);
    ctx.k / t * (2.0 * xi.ln() + (p - 1.0) * b.ln()).exp()
}

/// Nonlinearly superposed profile. Zero outside the compact support.
pub fn eval_superposed(p: &SuperposedParams, xi: f64, tau: f64) -> Result<f64> {
    check_xi(xi)?;
    if p.ctx.is_linear() {
        return eval_linear_superposed(p.gamma0, p.phi0, xi, tau, p.tau_shift);
    }
    let t = p.shifted_time(tau)?;
    let gamma = p.gamma0 * pow_pos(t, -p.ctx.beta);
    let phi = -p.phi0 * pow_pos(t, -p.ctx.alpha);
    let b = gamma - xi * phi;
    if b <= 0.0 {
        return Ok(0.0);
    }
    let load = bracket_load(&p.ctx, xi, t, b);
    if load >= 1.0 {
        return Ok(0.0);
    }
    let n = p.ctx.n;
    // ln_1p keeps (1 − load)^{1/n} accurate as n → 0, where load ~ n.
    let log_theta = b.ln() / (n + 1.0) + (-load).ln_1p() / n;
    Ok(log_theta.exp())
}

/// Absorbing-boundary solution written through `Φ(τ)`; `θ(0, τ) = 0`.
pub fn eval_dirichlet_flux_form(p: &SuperposedParams, xi: f64, tau: f64) -> Result<f64> {
    eval_superposed(&p.dirichlet_part(), xi, tau)
}

/// Insulated-boundary solution written through `Γ(τ)`; `θ_ξ(0, τ) = 0`.
pub fn eval_neumann_flux_form(p: &SuperposedParams, xi: f64, tau: f64) -> Result<f64> {
    eval_superposed(&p.neumann_part(), xi, tau)
}

/// Exact linear superposition `(Γ − ξΦ) e^{−ξ²/4t}` with
/// `Γ = Γ₀ t^{−1/2}`, `Φ = −Φ₀ t^{−3/2}`, `t = τ + τ₀`.
pub fn eval_linear_superposed(gamma0: f64, phi0: f64, xi: f64, tau: f64, tau_shift: f64) -> Result<f64> {
    let t = tau + tau_shift;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("shifted time {tau} + {tau_shift} must be positive")));
    }
    if !xi.is_finite() {
        return Err(Error::Domain(format!("xi = {xi} must be finite")));
    }
    let gamma = gamma0 / t.sqrt();
    let phi = -phi0 / (t * t.sqrt());
    Ok((gamma - xi * phi) * (-xi * xi / (4.0 * t)).exp())
}

/// Steady profile `(Γ − Φξ)^{1/(n+1)}`.
pub fn eval_steady(s: &SteadyParams, xi: f64) -> Result<f64> {
    if !s.n.is_finite() || s.n < 0.0 {
        return Err(Error::Domain(format!("nonlinearity n = {} must be >= 0", s.n)));
    }
    let base = s.gamma - s.phi * xi;
    if !(base >= 0.0) {
        return Err(Error::Domain(format!("steady base Γ − Φξ = {base} is negative at xi = {xi}")));
    }
    Ok(pow_pos(base, 1.0 / (s.n + 1.0)))
}

/// The surviving cross term `k_n ξ Γ Φ` of the superposition residual.
pub fn superposition_defect(ctx: &Nonlinearity, gamma: f64, phi: f64, xi: f64) -> f64 {
    ctx.k * xi * gamma * phi
}

/// Position of the compact-support front at time `τ`.
///
/// `None` for `n = 0`, whose support is the whole half line.
pub fn front_position(p: &SuperposedParams, tau: f64) -> Result<Option<f64>> {
    if p.ctx.is_linear() {
        p.shifted_time(tau)?;
        return Ok(None);
    }
    let t = p.shifted_time(tau)?;
    let gamma = p.gamma0 * pow_pos(t, -p.ctx.beta);
    let phi = -p.phi0 * pow_pos(t, -p.ctx.alpha);
    if gamma == 0.0 && phi == 0.0 {
        return Ok(Some(0.0));
    }
    if phi == 0.0 {
        let p_exp = 1.0 / (p.ctx.n + 1.0);
        return Ok(Some((t * pow_pos(gamma, 1.0 - p_exp) / p.ctx.k).sqrt()));
    }
    // The load k ξ²/t · B^{1/(n+1)−1} increases monotonically in ξ.
    let load = |xi: f64| bracket_load(&p.ctx, xi, t, gamma - xi * phi);
    let mut hi = 1.0;
    while load(hi) < 1.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::Domain("front position diverges".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if load(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(hi))
}

/// Distance beyond which the profile is negligible: the front for `n > 0`,
/// otherwise the point where the Gaussian factor of the linear solution
/// drops below `tail`.
pub fn support_extent(p: &SuperposedParams, tau: f64, tail: f64) -> Result<f64> {
    match front_position(p, tau)? {
        Some(f) => Ok(f),
        None => {
            let t = p.shifted_time(tau)?;
            Ok((4.0 * t * (1.0 / tail).ln()).sqrt())
        }
    }
}
