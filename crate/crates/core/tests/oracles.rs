//! Solver and diagnostics checked against independent references.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim_core::diagnostics::{
    extrapolated_residual, fit_powerlaw, pde_residual_analytic, rel_error, total_mass, MaskRule, TimeSeries,
};
use selfsim_core::experiments::{exact_start_config, run_scenario};
use selfsim_core::kernel::{eval_linear_superposed, eval_superposed, front_position};
use selfsim_core::solver::{gaussian_ic, integrate, project_analytic};
use selfsim_core::{BoundaryCondition, Grid1D, Solution, StepControl, SuperposedParams};

/// Insulated profile written out directly from `Γ₀`, `n` and `t`.
fn insulated_reference(n: f64, gamma0: f64, xi: f64, t: f64) -> f64 {
    let k = n / (2.0 * (n + 1.0) * (n + 2.0));
    let gamma = gamma0 * t.powf(-(n + 1.0) / (n + 2.0));
    let bracket = 1.0 - k * xi * xi / t * gamma.powf(-n / (n + 1.0));
    if bracket <= 0.0 {
        0.0
    } else {
        gamma.powf(1.0 / (n + 1.0)) * bracket.powf(1.0 / n)
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

#[test]
fn trapezoid_mass_converges_to_simpson_reference() {
    let t = 2.0;
    for (n, finest_tol) in [(1.0, 1e-6), (7.0 / 3.0, 2e-6)] {
        let p = SuperposedParams::new(n, 1.0, 0.0, 0.0).unwrap();
        let front = front_position(&p, t).unwrap().unwrap();
        let reference = simpson(|x| insulated_reference(n, 1.0, x, t), 0.0, front, 1 << 20);
        let length = 1.25 * front;
        let mut errors = Vec::new();
        for cells in [500, 1000, 2000, 4000, 8000] {
            let grid = Grid1D::new(length, cells).unwrap();
            let s = project_analytic(grid, &p, t, Solution::Neumann).unwrap();
            errors.push((total_mass(&s) - reference).abs() / reference);
        }
        assert!(errors.last().unwrap() < &finest_tol, "n={n}: {errors:?}");
        assert!(errors.windows(2).all(|w| w[1] < 0.5 * w[0]), "n={n}: {errors:?}");
    }
}

#[test]
fn kernel_agrees_with_written_out_profile() {
    for n in [0.3, 1.0, 7.0 / 3.0, 5.0] {
        let p = SuperposedParams::new(n, 1.5, 0.0, 0.0).unwrap();
        for i in 0..200 {
            let xi = 0.05 * i as f64;
            let a = eval_superposed(&p, xi, 3.0).unwrap();
            let b = insulated_reference(n, 1.5, xi, 3.0);
            assert!((a - b).abs() <= 1e-12 * b.max(1e-3), "n={n} xi={xi}: {a} vs {b}");
        }
    }
}

#[test]
fn noisy_power_laws_recover_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let exponent = -1.15;
    for _ in 0..200 {
        let points = (0..25)
            .map(|i| {
                let t = 10f64.powf(2.0 * i as f64 / 24.0);
                let noise = 1.0 + rng.gen_range(-0.02..0.02);
                (t, 0.7 * t.powf(exponent) * noise)
            })
            .collect();
        let fit = fit_powerlaw(&TimeSeries::new(points).unwrap()).unwrap();
        assert!((fit.exponent - exponent).abs() < 0.02, "{fit:?}");
        assert!(fit.r2 > 0.99);
    }
}

#[test]
fn tiny_n_matches_linear_superposition() {
    let eps = 1e-8;
    let p = SuperposedParams::new(eps, 0.1, 1.0, 0.0).unwrap();
    let (mut dev, mut scale) = (0.0f64, 0.0f64);
    for tau in [0.5, 1.0, 2.0, 4.0, 8.0] {
        for i in 0..=40 {
            let xi = 0.25 * i as f64;
            let lin = eval_linear_superposed(0.1, 1.0, xi, tau, 0.0).unwrap();
            dev = dev.max((eval_superposed(&p, xi, tau).unwrap() - lin).abs());
            scale = scale.max(lin.abs());
        }
    }
    assert!(dev / scale < 1e-6, "relative deviation {}", dev / scale);
}

fn exact_run_error(n: f64, which: Solution, cells_per_unit: f64) -> f64 {
    let cfg = exact_start_config(n, which, 0.3, cells_per_unit).unwrap();
    run_scenario(&cfg).unwrap().late_time_l2().unwrap()
}

#[test]
fn exact_start_error_converges_with_grid() {
    // For n >= 1 the front corner makes the sequence erratic at these resolutions.
    for (n, which) in [(0.0, Solution::Neumann), (0.5, Solution::Neumann), (0.5, Solution::Dirichlet)] {
        let errs: Vec<f64> = [10.0, 20.0, 40.0].iter().map(|&c| exact_run_error(n, which, c)).collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.0..=2.2).contains(&order), "n={n} {}: errors {errs:?}", which.name());
        }
    }
}

#[test]
fn insulated_exact_start_stays_close() {
    let p = SuperposedParams::new(2.0, 1.0, 0.0, 1.0).unwrap();
    let front = front_position(&p, 1.0).unwrap().unwrap();
    let mut errs = Vec::new();
    for cells in [100, 200] {
        let grid = Grid1D::new(1.5 * front, cells).unwrap();
        let h = grid.spacing();
        let s = project_analytic(grid, &p, 0.0, Solution::Neumann).unwrap();
        let run = integrate(&s, &BoundaryCondition::NeumannZero, 2.0, 1.0, &StepControl::default(), &[1.0]).unwrap();
        let analytic = project_analytic(grid, &p, 1.0, Solution::Neumann).unwrap();
        let err = rel_error(&run.state, &analytic, &MaskRule::with_front(Some(front))).unwrap().l2_rel;
        assert!(err < 2.0 * h * h / front.powi(2) + 1e-3, "cells={cells} err={err}");
        errs.push(err);
    }
    assert!(errs[1] < errs[0]);
}

#[test]
fn comparison_principle_holds() {
    let grid = Grid1D::new(20.0, 400).unwrap();
    let low = gaussian_ic(grid, 1.0, 0.0, 1.5).unwrap();
    let high = gaussian_ic(grid, 1.3, 0.0, 1.5).unwrap();
    let c = StepControl::default();
    for bc in [BoundaryCondition::NeumannZero, BoundaryCondition::AbsorbingZero] {
        let a = integrate(&low, &bc, 1.5, 6.0, &c, &[1.0, 3.0, 6.0]).unwrap();
        let b = integrate(&high, &bc, 1.5, 6.0, &c, &[1.0, 3.0, 6.0]).unwrap();
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            assert!(sa.theta.iter().zip(&sb.theta).all(|(x, y)| x <= y), "{bc:?} at tau={}", sa.tau);
        }
    }
}

#[test]
fn runs_are_bitwise_reproducible() {
    let cfg = exact_start_config(7.0 / 3.0, Solution::Dirichlet, 0.5, 10.0).unwrap();
    let a = run_scenario(&cfg).unwrap();
    let b = run_scenario(&cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn absorbing_ledger_closes() {
    let cfg = exact_start_config(1.0, Solution::Dirichlet, 1.0, 10.0).unwrap();
    let r = run_scenario(&cfg).unwrap();
    assert!(r.ledger.closes(1e-12), "{:?}", r.ledger);
    assert!(r.ledger.integrated_left_flux < 0.0);
    assert!(r.ledger.right_boundary_dry);
    assert!(!r.clipping_flagged);
}

#[test]
fn residual_stencil_converges_at_second_order() {
    let exact = SuperposedParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let mixed = SuperposedParams::new(1.0, 0.1, 1.0, 0.0).unwrap();
    for p in [exact, mixed] {
        let (xi, tau) = (0.8, 2.0);
        let r: Vec<f64> =
            [0.04, 0.02, 0.01].iter().map(|&s| pde_residual_analytic(&p, xi, tau, s * xi, s * tau).unwrap()).collect();
        let ratio = (r[0] - r[1]) / (r[1] - r[2]);
        assert!((ratio - 4.0).abs() < 0.3, "ratio {ratio}, residuals {r:?}");
    }
}

#[test]
fn superposition_leaves_a_residual_that_pure_profiles_do_not() {
    let (xi, tau) = (0.8, 2.0);
    let pure = SuperposedParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
    let mixed = SuperposedParams::new(1.0, 0.1, 1.0, 0.0).unwrap();
    let r_pure = extrapolated_residual(&pure, xi, tau, 0.01, 0.01).unwrap().extrapolated;
    let r_mixed = extrapolated_residual(&mixed, xi, tau, 0.01, 0.01).unwrap().extrapolated;
    assert!(r_pure.abs() < 1e-8, "{r_pure}");
    assert!(r_mixed.abs() > 1e-4, "{r_mixed}");
}

#[test]
fn stencil_rejects_points_near_the_front() {
    let p = SuperposedParams::new(2.0, 1.0, 0.0, 0.0).unwrap();
    let front = front_position(&p, 1.0).unwrap().unwrap();
    assert!(pde_residual_analytic(&p, front - 0.01, 1.0, 0.05, 0.01).is_err());
    assert!(pde_residual_analytic(&p, 0.02, 1.0, 0.05, 0.01).is_err());
}
