//! Dynamics checks on the working-size grid (n = 2048 on [-150, 150]).

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use qzd_core::diagnostics::{continuity_report, overlap_coefficients, teleportation_time_analytic};
use qzd_core::potential::GaussianPotential;
use qzd_core::propagator::{energy_expectation, evolve};
use qzd_core::zeno::{qzd_run, Preparation};
use qzd_core::{Grid, MomentumWindow, Potential, QzdConfig, Wavefunction};

fn setup() -> (Wavefunction, GaussianPotential) {
    let grid = Arc::new(Grid::new(-150.0, 150.0, 2048).unwrap());
    let psi = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
    (psi, GaussianPotential::well(10.0, 30.0).unwrap())
}

#[test]
fn unmeasured_packet_reaches_the_mirror_point() {
    let (psi0, well) = setup();
    let mut config = QzdConfig::new(1.0, SQRT_2, 30.0, 0);
    config.snapshot_stride = 4;
    let record = qzd_run(&psi0, &well, &config).unwrap();
    let grid = psi0.grid();
    // Leftmost excursion of the density peak.
    let (t, x_peak) = record
        .snapshots
        .iter()
        .map(|s| {
            let i = s
                .density
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            (s.t, grid.x_axis()[i])
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!((x_peak + 30.0).abs() <= 3.0, "peak {x_peak} at t = {t}");
}

fn worst_energy_drift(tau: f64) -> f64 {
    let (psi0, well) = setup();
    let e0 = energy_expectation(&psi0, &well, 1.0).unwrap();
    let mut psi = psi0.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..60 {
        evolve(&mut psi, &well, 1.0, 0.5, tau).unwrap();
        let e = energy_expectation(&psi, &well, 1.0).unwrap();
        worst = worst.max(((e - e0) / e0).abs());
    }
    worst
}

#[test]
fn unmeasured_energy_is_conserved() {
    // At the default substep (0.05) the splitting error alone is ~1.3e-5.
    let worst = worst_energy_drift(0.0125);
    assert!(worst < 1e-6, "relative energy drift {worst:e}");
}

#[test]
fn energy_error_is_second_order() {
    let ratio = worst_energy_drift(0.05) / worst_energy_drift(0.025);
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn unmeasured_run_obeys_continuity() {
    let (psi0, well) = setup();
    let config = QzdConfig::new(1.0, SQRT_2, 30.0, 0);
    let record = qzd_run(&psi0, &well, &config).unwrap();
    let report = continuity_report(&record).unwrap();
    assert_eq!(report.residual[0], 0.0);
    assert!(report.max_abs_residual() <= 0.01, "{}", report.max_abs_residual());
    assert!(report.norm.iter().all(|n| (n - 1.0).abs() < 1e-10));

    // Differential form: d/dt P[0,∞) = j(0, t).
    let trace = &record.trace;
    let mut worst: f64 = 0.0;
    for w in trace.windows(3) {
        let rate = (w[2].region_prob - w[0].region_prob) / (w[2].t - w[0].t);
        worst = worst.max((rate - w[1].flux.unwrap()).abs());
    }
    assert!(worst <= 1e-3, "continuity rate residual {worst}");
}

#[test]
fn early_mean_momentum_follows_the_force() {
    let (psi0, well) = setup();
    let slope = well.derivative(30.0).abs();
    let mut config = QzdConfig::new(1.0, SQRT_2, 11.533, 1024);
    config.snapshot_stride = 1;
    config.horizon = 1.0;
    config.n_measurements = 89;
    let record = qzd_run(&psi0, &well, &config).unwrap();
    // Rebuild the state at t = 1 and compare with the classical impulse.
    let p = record.final_state.expectation_momentum().unwrap();
    let expected = -slope * 1.0;
    assert!(((p - expected) / expected).abs() < 0.05, "<p> = {p}, expected {expected}");
}

#[test]
fn zeno_run_conserves_the_product_identity() {
    let (psi0, well) = setup();
    let config = QzdConfig::new(1.0, SQRT_2, 11.533, 256);
    let record = qzd_run(&psi0, &well, &config).unwrap();
    let product = record.step_probability_product();
    assert!((record.final_state.norm2() - product).abs() < 1e-10);
    assert!((record.final_survival() - product).abs() < 1e-10);
}

#[test]
fn raw_start_pays_the_window_cost() {
    let (psi0, well) = setup();
    let mut config = QzdConfig::new(1.0, SQRT_2, 11.533, 1024);
    config.preparation = Preparation::Raw;
    config.record_flux_at = None;
    let raw = qzd_run(&psi0, &well, &config).unwrap();
    config.preparation = Preparation::Projected;
    let prepared = qzd_run(&psi0, &well, &config).unwrap();
    // The two differ by (almost exactly) the preparation probability.
    let ratio = raw.final_survival() / prepared.final_survival();
    assert!((ratio - prepared.preparation_probability).abs() < 1e-3);
    assert!((prepared.preparation_probability - 0.9545).abs() < 1e-3);
}

#[test]
fn overlap_templates_bound_the_norm() {
    let (psi0, well) = setup();
    let config = QzdConfig::new(1.0, SQRT_2, 11.533, 1024);
    let record = qzd_run(&psi0, &well, &config).unwrap();
    let window = MomentumWindow::new(psi0.grid().clone(), 1.0, SQRT_2).unwrap();
    for w in [None, Some(&window)] {
        let (a, b) = overlap_coefficients(&record.final_state, 30.0, SQRT_2, w).unwrap();
        assert!(a.norm_sqr() + b.norm_sqr() <= record.final_state.norm2() + 1e-10);
        assert!(a.norm_sqr() < 0.02);
    }
    let t = teleportation_time_analytic(1.0, SQRT_2, &well, 30.0).unwrap();
    assert!((t - 11.532).abs() < 1e-3);
}
