//! Quick numerical self-test behind `qzd check`.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use qzd_core::potential::GaussianPotential;
use qzd_core::propagator::{evolve, StepPlan};
use qzd_core::zeno::qzd_run;
use qzd_core::{Grid, MomentumWindow, QzdConfig, Wavefunction};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &'static str, value: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }
}

/// Unitarity, Parseval, projector idempotence, the survival product
/// identity and all-pass equivalence on the working electron setup.
pub fn run_checks() -> Result<Vec<CheckResult>> {
    let grid = Arc::new(Grid::new(-150.0, 150.0, 2048)?);
    let well = GaussianPotential::well(10.0, 30.0)?;
    let psi0 = Wavefunction::gaussian_packet(grid.clone(), 30.0, SQRT_2, 0.0)?;
    let mut out = Vec::new();

    let plan = StepPlan::new(grid.clone(), &well, 1.0, 0.05)?;
    let mut psi = psi0.clone();
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let before = psi.norm2();
        plan.step(&mut psi)?;
        worst = worst.max((psi.norm2() - before).abs());
    }
    out.push(CheckResult::new("unitarity per step", worst, 1e-12));

    let mut hat = psi.clone();
    hat.to_momentum()?;
    out.push(CheckResult::new("parseval", (hat.norm2() - psi.norm2()).abs(), 1e-12));

    let window = MomentumWindow::new(grid.clone(), 1.0, SQRT_2)?;
    let mut once = psi.clone();
    window.project(&mut once)?;
    let mut twice = once.clone();
    let p2 = window.project(&mut twice)?;
    let diff = once
        .amplitudes()
        .iter()
        .zip(twice.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.push(CheckResult::new("projector idempotence", diff.max((p2 - 1.0).abs()), 1e-14));

    let config = QzdConfig::new(1.0, SQRT_2, 11.533, 256);
    let record = qzd_run(&psi0, &well, &config)?;
    let identity = (record.final_state.norm2() - record.step_probability_product()).abs();
    out.push(CheckResult::new("survival product identity", identity, 1e-10));

    let mut open = QzdConfig::new(1.0, 1e6, 2.0, 8);
    open.record_flux_at = None;
    let measured = qzd_run(&psi0, &well, &open)?;
    let mut free = psi0.clone();
    for _ in 0..8 {
        evolve(&mut free, &well, 1.0, 0.25, open.max_substep)?;
    }
    let diff = measured
        .final_state
        .amplitudes()
        .iter()
        .zip(free.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    out.push(CheckResult::new("all-pass window", diff, 1e-10));
    Ok(out)
}
