//! Acceptance suite: one `PASS`/`FAIL` line per criterion.
//!
//! Runs as a plain binary so the verdict lines are printed even when
//! everything passes. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim_core::diagnostics::{extrapolated_residual, fit_powerlaw, pde_residual_analytic};
use selfsim_core::experiments::{
    exact_start_config, fig1_left, linear_limit_check, n_sweep, run_scenario, RunReport, FIG1_N,
};
use selfsim_core::kernel::front_position;
use selfsim_core::{Nonlinearity, Solution, SuperposedParams};

struct Verdict {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn verdict(id: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { id, pass, detail }
}

fn a1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(0.0..=10.0);
        let c = Nonlinearity::new(n).unwrap();
        worst = worst.max((2.0 - c.alpha() - c.beta() - c.k()).abs());
    }
    verdict("A1", worst < 1e-12, format!("max |2 - alpha - beta - k| over 200 n = {worst:.3e} (tol 1e-12)"))
}

fn a2() -> Verdict {
    let (mut min_order, mut max_order, mut worst_extrap) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    let mut failures = Vec::new();
    for n in [0.5, 1.0, 7.0 / 3.0] {
        for which in [Solution::Dirichlet, Solution::Neumann] {
            let p = which.effective_params(&SuperposedParams::new(n, 1.0, 1.0, 0.0).unwrap());
            let tau = 2.0;
            let front = front_position(&p, tau).unwrap().unwrap();
            for frac in [0.25, 0.5, 0.7] {
                let xi = frac * front;
                let h = 0.02 * xi;
                let dt = 0.02 * tau;
                let r1 = pde_residual_analytic(&p, xi, tau, h, dt).unwrap();
                let r2 = pde_residual_analytic(&p, xi, tau, h / 2.0, dt / 2.0).unwrap();
                let order = (r1 / r2).abs().log2();
                let extrap = extrapolated_residual(&p, xi, tau, h / 2.0, dt / 2.0).unwrap().extrapolated.abs();
                min_order = min_order.min(order);
                max_order = max_order.max(order);
                worst_extrap = worst_extrap.max(extrap);
                if !((order - 2.0).abs() <= 0.3 && extrap < 1e-8) {
                    failures.push(format!("{}(n={n:.3}, xi={xi:.3})", which.name()));
                }
            }
        }
    }
    verdict(
        "A2",
        failures.is_empty(),
        format!(
            "observed order in [{min_order:.3}, {max_order:.3}] (2.0 +/- 0.3), max extrapolated residual {worst_extrap:.3e} (tol 1e-8){}",
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

fn a3(left: &RunReport) -> Verdict {
    let e27 = left.l2_at(27.0).unwrap_or(f64::NAN);
    let e81 = left.l2_at(81.0).unwrap_or(f64::NAN);
    verdict(
        "A3",
        e27 < 0.02 && e81 < 0.01,
        format!("left panel L2 error {e27:.4e} at tau=27 (tol 2e-2), {e81:.4e} at tau=81 (tol 1e-2)"),
    )
}

fn a4(right: &RunReport, left: &RunReport) -> Verdict {
    let e = right.l2_at(81.0).unwrap_or(f64::NAN);
    let floor = left.l2_at(81.0).unwrap_or(f64::NAN);
    verdict(
        "A4",
        e < 0.05 && e > floor,
        format!("right panel L2 error {e:.4e} at tau=81 (tol 5e-2), discretization floor {floor:.4e}"),
    )
}

fn a5(sweep: &[(f64, Option<f64>)]) -> Verdict {
    let errs: Vec<f64> = sweep.iter().map(|&(_, e)| e.unwrap_or(f64::NAN)).collect();
    let monotone = errs.windows(2).all(|w| w[1] >= w[0]);
    let margin = errs[0] <= 0.5 * errs[errs.len() - 1];
    let table: Vec<String> = sweep.iter().map(|(n, e)| format!("n={n:.4}: {:.4e}", e.unwrap_or(f64::NAN))).collect();
    verdict(
        "A5",
        monotone && margin,
        format!(
            "tau=81 L2 errors {} (non-decreasing: {monotone}, n=0.25 at most half of n=7/3: {margin})",
            table.join(", ")
        ),
    )
}

fn a6() -> Verdict {
    let n = FIG1_N;
    let dir = run_scenario(&exact_start_config(n, Solution::Dirichlet, 2.0, 20.0).unwrap()).unwrap();
    let neu = run_scenario(&exact_start_config(n, Solution::Neumann, 2.0, 20.0).unwrap()).unwrap();
    let alpha = Nonlinearity::new(n).unwrap().alpha();
    let flux = fit_powerlaw(&dir.flux_series.magnitude()).map(|f| -f.exponent).unwrap_or(f64::NAN);
    let theta0 = neu.corner_series.map_values(|v| v.powf(1.0 / (n + 1.0)));
    let target = 1.0 / (n + 2.0);
    let corner = fit_powerlaw(&theta0).map(|f| -f.exponent).unwrap_or(f64::NAN);
    let (ef, ec) = ((flux - alpha).abs() / alpha, (corner - target).abs() / target);
    verdict(
        "A6",
        ef < 0.02 && ec < 0.02,
        format!("flux exponent {flux:.5} vs {alpha:.5} ({:.3}%), boundary-value exponent {corner:.5} vs {target:.5} ({:.3}%) (tol 2%)", 100.0 * ef, 100.0 * ec),
    )
}

fn a7() -> Verdict {
    let eps = [1e-2, 1e-4, 1e-6];
    let report = linear_limit_check(&eps).unwrap();
    let rel = report.entries[2].rel_deviation;
    let ratios: Vec<f64> = report.entries.windows(2).map(|w| w[0].deviation / w[1].deviation).collect();
    let tracking = ratios.iter().all(|&r| (r.log10() - 2.0).abs() < 0.3);
    verdict(
        "A7",
        rel < 1e-4 && tracking,
        format!(
            "relative deviation at eps=1e-6 {rel:.3e} (tol 1e-4), deviation ratios {:.2} and {:.2} for eps ratio 100",
            ratios[0], ratios[1]
        ),
    )
}

fn a8(left: &RunReport, right: &RunReport) -> Verdict {
    let (l, r) = (&left.ledger, &right.ledger);
    verdict(
        "A8",
        l.drift_rel < 1e-10 && l.right_boundary_dry && r.closes(1e-6),
        format!(
            "insulated drift {:.3e} (tol 1e-10, right end dry: {}), value-BC ledger closure {:.3e} (tol 1e-6)",
            l.drift_rel, l.right_boundary_dry, r.closure_rel
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let left = fig1_left().expect("left panel runs");
    let sweep = n_sweep(&[0.25, 0.5, 1.0, FIG1_N]);
    let right = sweep.last().unwrap().report.as_ref().expect("right panel runs");
    let sweep_errs: Vec<(f64, Option<f64>)> =
        sweep.iter().map(|e| (e.n, e.report.as_ref().ok().and_then(|r| r.l2_at(81.0)))).collect();

    let verdicts = [a1(), a2(), a3(&left), a4(right, &left), a5(&sweep_errs), a6(), a7(), a8(&left, right)];
    for v in &verdicts {
        println!("{} {}: {}", v.id, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let failed = verdicts.iter().filter(|v| !v.pass).count();
    println!(
        "acceptance: {} passed, {failed} failed ({:.1} s)",
        verdicts.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
