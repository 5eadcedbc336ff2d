//! Symmetric split-step (Strang) propagation of
//! `i ∂ψ/∂t = -(1/2m) ∂²ψ/∂x² + V(x) ψ`.
//!
//! One step is `e^{-iVdt/2} · F⁻¹ e^{-ip²dt/2m} F · e^{-iVdt/2}`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::potential::Potential;
use crate::state::{Representation, Wavefunction};
use crate::{Error, Result};

/// Cached phase tables for a fixed grid, potential, mass and step.
#[derive(Debug, Clone)]
pub struct StepPlan {
    grid: Arc<Grid>,
    mass: f64,
    dt: f64,
    kinetic: Vec<Complex64>,
    half_potential: Vec<Complex64>,
}

fn unit(theta: f64) -> Complex64 {
    Complex64::new(theta.cos(), theta.sin())
}

impl StepPlan {
    /// Builds the phase tables `e^{-i p²dt/2m}` and `e^{-i V dt/2}`.
    pub fn new<P: Potential + ?Sized>(
        grid: Arc<Grid>,
        potential: &P,
        mass: f64,
        dt: f64,
    ) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", value: mass });
        }
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter { name: "dt", value: dt });
        }
        let kinetic = grid
            .p_axis()
            .iter()
            .map(|&p| unit(-p * p / (2.0 * mass) * dt))
            .collect();
        let half_potential = grid
            .x_axis()
            .iter()
            .map(|&x| unit(-potential.value(x) * dt / 2.0))
            .collect();
        Ok(Self {
            grid,
            mass,
            dt,
            kinetic,
            half_potential,
        })
    }

    /// Step length.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Particle mass.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Grid the tables were built on.
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Kinetic phase table, natural momentum ordering.
    pub fn kinetic_phases(&self) -> &[Complex64] {
        &self.kinetic
    }

    /// Half-step potential phase table.
    pub fn half_potential_phases(&self) -> &[Complex64] {
        &self.half_potential
    }

    /// Advances a position-space state by one step in place.
    pub fn step(&self, psi: &mut Wavefunction) -> Result<()> {
        psi.require(Representation::Position)?;
        psi.require_grid(&self.grid)?;
        let amps = psi.amplitudes_mut();
        apply(amps, &self.half_potential);
        self.grid.forward_in_place(amps);
        apply(amps, &self.kinetic);
        self.grid.inverse_in_place(amps);
        apply(amps, &self.half_potential);
        Ok(())
    }

    /// Applies `count` consecutive steps.
    pub fn steps(&self, psi: &mut Wavefunction, count: usize) -> Result<()> {
        for _ in 0..count {
            self.step(psi)?;
        }
        Ok(())
    }
}

fn apply(amps: &mut [Complex64], phases: &[Complex64]) {
    for (a, ph) in amps.iter_mut().zip(phases) {
        *a *= ph;
    }
}

/// Number of equal substeps used to cover `duration` without exceeding
/// `max_substep`: `ceil(duration / max_substep)`, at least one for a
/// positive duration.
pub fn substep_count(duration: f64, max_substep: f64) -> usize {
    if duration <= 0.0 {
        return 0;
    }
    // Absorb round-off so that e.g. 1.0 / 0.5 gives exactly two substeps.
    let ratio = duration / max_substep;
    let count = (ratio * (1.0 - 1e-12)).ceil();
    count.max(1.0) as usize
}

/// Evolves `psi` over `duration` with equal substeps no longer than `max_substep`.
pub fn evolve<P: Potential + ?Sized>(
    psi: &mut Wavefunction,
    potential: &P,
    mass: f64,
    duration: f64,
    max_substep: f64,
) -> Result<()> {
    if !(duration >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "duration",
            value: duration,
        });
    }
    if !(max_substep > 0.0) {
        return Err(Error::InvalidParameter {
            name: "max_substep",
            value: max_substep,
        });
    }
    let count = substep_count(duration, max_substep);
    if count == 0 {
        return Ok(());
    }
    let plan = StepPlan::new(psi.grid().clone(), potential, mass, duration / count as f64)?;
    plan.steps(psi, count)
}

/// `⟨Ĥ⟩ / ⟨ψ|ψ⟩`.
pub fn energy_expectation<P: Potential + ?Sized>(
    psi: &Wavefunction,
    potential: &P,
    mass: f64,
) -> Result<f64> {
    let grid = psi.grid();
    let norm = psi.norm2();
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let kinetic: f64 = psi
        .momentum_amplitudes()
        .iter()
        .zip(grid.p_axis())
        .map(|(c, &p)| c.norm_sqr() * p * p / (2.0 * mass))
        .sum::<f64>()
        * grid.dp();
    let pot: f64 = psi
        .position_amplitudes()
        .iter()
        .zip(grid.x_axis())
        .map(|(c, &x)| c.norm_sqr() * potential.value(x))
        .sum::<f64>()
        * grid.dx();
    Ok((kinetic + pot) / norm)
}
