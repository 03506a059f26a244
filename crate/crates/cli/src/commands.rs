use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use selfsim_core::diagnostics::{extrapolated_residual, residual_expression};
use selfsim_core::experiments::{n_sweep, panel_config, run_scenario, run_scenario_timed, Panel, PanelOverrides};
use selfsim_core::kernel::{gamma_of_tau, phi_of_tau, superposition_defect};
use selfsim_core::report::{csv_table, sweep_summary_csv, write_report};
use selfsim_core::{Solution, SuperposedParams};

use crate::{AnalyticArgs, PanelArg, ReproduceArgs, ResidualArgs, SolutionArg, SweepArgs, OUT_ENV};

/// Grids coarser than this draw a warning before running.
const COARSE_CELLS: usize = 100;

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("selfsim-out"))
}

fn solution(arg: SolutionArg) -> Solution {
    match arg {
        SolutionArg::Neumann => Solution::Neumann,
        SolutionArg::Dirichlet => Solution::Dirichlet,
        SolutionArg::Superposed => Solution::Superposed,
        SolutionArg::Linear => Solution::Linear,
    }
}

pub fn analytic(a: &AnalyticArgs) -> Result<()> {
    ensure!(a.samples >= 2, "--samples must be at least 2");
    ensure!(a.xi_max > 0.0 && a.xi_max.is_finite(), "--xi-max must be positive");
    let p = SuperposedParams::new(a.n, a.gamma0, a.phi0, a.tau_shift)?;
    p.shifted_time(a.tau)?;
    let which = solution(a.solution);
    let rows = (0..a.samples)
        .map(|i| {
            let xi = if i + 1 == a.samples { a.xi_max } else { a.xi_max * i as f64 / (a.samples - 1) as f64 };
            Ok(vec![Some(xi), Some(which.eval(&p, xi, a.tau)?)])
        })
        .collect::<selfsim_core::Result<Vec<_>>>()?;
    emit(a.out.as_deref(), &csv_table(&["xi", "theta"], rows.iter().map(Vec::as_slice)))
}

pub fn reproduce(a: &ReproduceArgs) -> Result<()> {
    let panel = match a.panel {
        PanelArg::Left => Panel::Left,
        PanelArg::Right => Panel::Right,
    };
    if let Some(cells) = a.cells {
        if cells < COARSE_CELLS {
            eprintln!("warning: N = {cells} is a coarse grid; the front-margin check or the run may fail");
        }
    }
    let overrides = PanelOverrides {
        n: a.n,
        gamma0: a.gamma0,
        phi0: a.phi0,
        length: a.length,
        cells: a.cells,
        snap_times: a.snap_times.clone(),
    };
    let cfg = panel_config(panel, &overrides).context("invalid scenario")?;
    let report = if a.timestamps { run_scenario_timed(&cfg) } else { run_scenario(&cfg) }
        .with_context(|| format!("scenario {} failed; no outputs written", cfg.name))?;

    let dir = out_dir(&a.out_dir);
    let written = write_report(&dir, &report, a.format).map_err(|e| {
        anyhow::anyhow!("writing outputs under {} failed (partial outputs may remain): {e}", dir.display())
    })?;

    println!("{} ({} steps)", cfg.name, report.steps);
    for s in &report.snapshots {
        match s.error {
            Some(e) => println!("tau = {:>6}  l2_rel = {:.6e}  linf_rel = {:.6e}", s.tau, e.l2_rel, e.linf_rel),
            None => println!("tau = {:>6}  l2_rel = n/a (empty mask)", s.tau),
        }
    }
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    ensure!(!a.n.is_empty(), "--n needs at least one value");
    let entries = n_sweep(&a.n);
    let dir = out_dir(&a.out_dir);
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join("sweep_summary.csv");
    emit(Some(&path), &sweep_summary_csv(&entries))?;
    println!("wrote {}", path.display());

    let failed: Vec<String> =
        entries.iter().filter_map(|e| e.report.as_ref().err().map(|err| format!("n = {}: {err}", e.n))).collect();
    if !failed.is_empty() {
        bail!("{} of {} scenarios failed: {}", failed.len(), entries.len(), failed.join("; "));
    }
    Ok(())
}

pub fn residual(a: &ResidualArgs) -> Result<()> {
    ensure!(a.xi_samples >= 2, "--xi-samples must be at least 2");
    ensure!(a.xi_max > 0.0, "--xi-max must be positive");
    ensure!(!a.tau.is_empty(), "--tau needs at least one value");
    let p = SuperposedParams::new(a.n, a.gamma0, a.phi0, a.tau_shift)?;
    let mut rows = Vec::with_capacity(a.tau.len() * a.xi_samples);
    for &tau in &a.tau {
        let t = p.shifted_time(tau)?;
        let gamma = gamma_of_tau(&p, tau)?;
        let phi = phi_of_tau(&p, tau)?;
        for i in 0..a.xi_samples {
            let xi = a.xi_max * i as f64 / (a.xi_samples - 1) as f64;
            let expression = residual_expression(&p.ctx, a.gamma0, a.phi0, xi, t)?;
            let defect = superposition_defect(&p.ctx, gamma, phi, xi);
            let pde = extrapolated_residual(&p, xi, tau, 1e-2 * xi, 1e-2 * t).ok().map(|r| r.extrapolated);
            rows.push(vec![Some(xi), Some(tau), Some(gamma), Some(phi), Some(expression), Some(defect), pde]);
        }
    }
    let header = ["xi", "tau", "gamma", "phi", "expression", "defect", "pde_residual"];
    emit(a.out.as_deref(), &csv_table(&header, rows.iter().map(Vec::as_slice)))
}
