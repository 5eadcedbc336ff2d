//! Probability current, continuity accounting, teleportation-time estimates,
//! thermal parameterisation and the two-site overlap decomposition.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::potential::Potential;
use crate::state::{Representation, Wavefunction};
use crate::zeno::{MomentumWindow, RunRecord};
use crate::{Error, Result};

/// `j(x) = (1/m)·Im{ψ* ∂ψ/∂x}` over the position axis, with a spectral
/// derivative (the Nyquist mode does not contribute to `∂ψ/∂x`).
pub fn probability_current(psi: &Wavefunction, mass: f64) -> Result<Vec<f64>> {
    psi.require(Representation::Position)?;
    let grid = psi.grid();
    let n = grid.len();
    let mut deriv = psi.amplitudes().to_vec();
    grid.forward_in_place(&mut deriv);
    for (k, (c, &p)) in deriv.iter_mut().zip(grid.p_axis()).enumerate() {
        *c = if k == n / 2 {
            Complex64::new(0.0, 0.0)
        } else {
            *c * Complex64::new(0.0, p)
        };
    }
    grid.inverse_in_place(&mut deriv);
    Ok(psi
        .amplitudes()
        .iter()
        .zip(&deriv)
        .map(|(a, d)| (a.conj() * d).im / mass)
        .collect())
}

/// Probability current at an arbitrary point, by trigonometric interpolation.
pub fn current_at(psi: &Wavefunction, mass: f64, x: f64) -> f64 {
    let amps = psi.momentum_amplitudes();
    current_from_momentum(psi.grid(), &amps, mass, x)
}

/// Current at `x` from natural-order momentum amplitudes.
///
/// The Nyquist mode is interpolated as a cosine, which reproduces the lattice
/// values and contributes nothing to the derivative on the lattice.
pub(crate) fn current_from_momentum(
    grid: &Grid,
    momentum: &[Complex64],
    mass: f64,
    x: f64,
) -> f64 {
    const REANCHOR: usize = 128;
    let n = grid.len();
    let half = n / 2;
    let dp = grid.dp();
    let u = x - grid.x_min();
    let phase = |k: f64| {
        let theta = k * dp * u;
        Complex64::new(theta.cos(), theta.sin())
    };
    let step = phase(1.0);

    let mut value = grid.dft_coefficient(0, momentum[0]);
    let mut slope = Complex64::new(0.0, 0.0);
    let mut w = Complex64::new(1.0, 0.0);
    for k in 1..half {
        w = if k % REANCHOR == 0 { phase(k as f64) } else { w * step };
        let pos = grid.dft_coefficient(k, momentum[k]);
        let neg = grid.dft_coefficient(n - k, momentum[n - k]);
        let kp = k as f64 * dp;
        let wc = w.conj();
        value += pos * w + neg * wc;
        slope += (pos * w - neg * wc) * Complex64::new(0.0, kp);
    }
    let nyq = grid.dft_coefficient(half, momentum[half]);
    let arg = half as f64 * dp * u;
    value += nyq * arg.cos();
    slope -= nyq * (half as f64 * dp * arg.sin());

    let scale = dp / (2.0 * core::f64::consts::PI).sqrt();
    (value.conj() * slope).im * scale * scale / mass
}

/// Continuity bookkeeping over `[x_ref, ∞)`: the loss of probability from
/// that region versus the time-integrated current leaving through `x_ref`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    /// Sample times.
    pub times: Vec<f64>,
    /// `P_region(0) - P_region(t)`.
    pub decrement: Vec<f64>,
    /// `-∫_0^t j(x_ref, t') dt'` (trapezoid rule over the samples).
    pub flux_integral: Vec<f64>,
    /// `decrement - flux_integral`.
    pub residual: Vec<f64>,
    /// Squared norm of the state.
    pub norm: Vec<f64>,
}

impl ContinuityReport {
    /// Largest `|residual|`.
    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Largest `|flux_integral|`.
    pub fn max_abs_flux_integral(&self) -> f64 {
        self.flux_integral.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Builds a [`ContinuityReport`] from a record's substep trace.
pub fn continuity_report(record: &RunRecord) -> Result<ContinuityReport> {
    let first = record.trace.first().ok_or(Error::MissingSeries("trace"))?;
    let flux = record.flux_series().ok_or(Error::MissingSeries("flux"))?;
    let region0 = first.region_prob;
    let len = record.trace.len();
    let mut report = ContinuityReport {
        times: Vec::with_capacity(len),
        decrement: Vec::with_capacity(len),
        flux_integral: Vec::with_capacity(len),
        residual: Vec::with_capacity(len),
        norm: Vec::with_capacity(len),
    };
    let mut integral = 0.0;
    for (i, point) in record.trace.iter().enumerate() {
        if i > 0 {
            let (t0, j0) = flux[i - 1];
            let (t1, j1) = flux[i];
            integral += 0.5 * (j0 + j1) * (t1 - t0);
        }
        let decrement = region0 - point.region_prob;
        report.times.push(point.t);
        report.decrement.push(decrement);
        report.flux_integral.push(-integral);
        report.residual.push(decrement + integral);
        report.norm.push(point.norm);
    }
    Ok(report)
}

/// `mΔv/|V'(x0)| + mΔv/|V'(x1)|`, with `x1` the other turning point; for a
/// symmetric potential this is `2mΔv/|V'(x0)|`.
pub fn teleportation_time_analytic<P: Potential + ?Sized>(
    mass: f64,
    delta_v: f64,
    potential: &P,
    x0: f64,
) -> Result<f64> {
    let d0 = potential.derivative(x0);
    if d0 == 0.0 || !d0.is_finite() {
        return Err(Error::Equilibrium { x0 });
    }
    let x1 = potential.mirror_turning_point(x0)?;
    let d1 = potential.derivative(x1);
    if d1 == 0.0 || !d1.is_finite() {
        return Err(Error::Equilibrium { x0: x1 });
    }
    let dp = mass * delta_v;
    Ok(dp / d0.abs() + dp / d1.abs())
}

/// Teleportation time with the thermal momentum width `Δp = √(am)`,
/// i.e. `√(4am)/|V'(x0)|` for symmetric potentials.
pub fn teleportation_time_thermal<P: Potential + ?Sized>(
    a: f64,
    mass: f64,
    potential: &P,
    x0: f64,
) -> Result<f64> {
    let params = ThermalParams::new(a, mass)?;
    teleportation_time_analytic(mass, params.v_th, potential, x0)
}

/// Teleportation time read off a record's snapshots.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasuredTime {
    /// Time of the density maximum at the target, parabolically refined
    /// unless the maximum sits at the first or last snapshot.
    pub time: f64,
    /// Largest target density among the snapshots.
    pub peak_density: f64,
    /// Target density in the first snapshot.
    pub initial_density: f64,
    /// The maximum is at an end of the snapshot series; `time` is unrefined.
    pub at_edge: bool,
    /// The peak exceeds ten times the initial density at the target.
    pub teleported: bool,
}

/// Time at which the density at the grid point nearest `x_target` is largest.
pub fn teleportation_time_measured(record: &RunRecord, x_target: f64) -> Result<MeasuredTime> {
    let snaps = &record.snapshots;
    if snaps.len() < 3 {
        return Err(Error::MissingSeries("snapshots"));
    }
    let idx = record.final_state.grid().nearest_index(x_target);
    let series: Vec<(f64, f64)> = snaps.iter().map(|s| (s.t, s.density[idx])).collect();
    let (imax, &(t_peak, peak)) = series
        .iter()
        .enumerate()
        .fold(None, |best: Option<(usize, &(f64, f64))>, (i, pt)| match best {
            Some((_, b)) if b.1 >= pt.1 => best,
            _ => Some((i, pt)),
        })
        .expect("at least three snapshots");
    let initial = series[0].1;
    let at_edge = imax == 0 || imax == series.len() - 1;
    let time = if at_edge {
        t_peak
    } else {
        parabola_vertex(series[imax - 1], series[imax], series[imax + 1]).unwrap_or(t_peak)
    };
    Ok(MeasuredTime {
        time,
        peak_density: peak,
        initial_density: initial,
        at_edge,
        teleported: peak > 10.0 * initial,
    })
}

/// Abscissa of the vertex of the parabola through three points, if concave.
fn parabola_vertex(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<f64> {
    let (t0, d0) = a;
    let (t1, d1) = b;
    let (t2, d2) = c;
    let denom = (t0 - t1) * (t0 - t2) * (t1 - t2);
    let qa = (t2 * (d1 - d0) + t1 * (d0 - d2) + t0 * (d2 - d1)) / denom;
    let qb = (t2 * t2 * (d0 - d1) + t1 * t1 * (d2 - d0) + t0 * t0 * (d1 - d2)) / denom;
    if qa < 0.0 {
        Some(-qb / (2.0 * qa))
    } else {
        None
    }
}

/// Largest template overlap accepted by [`overlap_coefficients`].
pub const MAX_TEMPLATE_OVERLAP: f64 = 1e-3;

/// `(α, β) = (⟨t₊|ψ⟩, ⟨t₋|ψ⟩)` against normalized Gaussian templates of
/// half-width `delta_x` centred at `+x0` and `-x0`.
///
/// With a window, each template is first projected onto it and
/// renormalized, which matches a packet prepared at rest by a measurement.
pub fn overlap_coefficients(
    psi: &Wavefunction,
    x0: f64,
    delta_x: f64,
    window: Option<&MomentumWindow>,
) -> Result<(Complex64, Complex64)> {
    let mut plus = Wavefunction::gaussian_packet(psi.grid().clone(), x0, delta_x, 0.0)?;
    if let Some(window) = window {
        let kept = window.project(&mut plus)?;
        plus.scale(1.0 / kept.sqrt());
    }
    let minus = plus.translated(-2.0 * x0);
    let overlap = plus.inner_product(&minus)?.norm();
    if overlap > MAX_TEMPLATE_OVERLAP {
        return Err(Error::OverlappingTemplates { overlap });
    }
    Ok((plus.inner_product(psi)?, minus.inner_product(psi)?))
}

/// Thermal-width parameterisation of a particle at rest.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThermalParams {
    /// `2·k_B·T` in hartree.
    pub a: f64,
    /// Mass.
    pub mass: f64,
    /// `√(a/m)`.
    pub v_th: f64,
    /// `√(am)`.
    pub delta_p: f64,
    /// `2/√(am)`.
    pub delta_x: f64,
}

impl ThermalParams {
    /// Requires `a > 0` and `mass > 0`.
    pub fn new(a: f64, mass: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter { name: "a", value: a });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter { name: "mass", value: mass });
        }
        let delta_p = (a * mass).sqrt();
        Ok(Self {
            a,
            mass,
            v_th: (a / mass).sqrt(),
            delta_p,
            delta_x: 2.0 / delta_p,
        })
    }
}

/// Shorthand for [`ThermalParams::new`].
pub fn thermal_params(a: f64, mass: f64) -> Result<ThermalParams> {
    ThermalParams::new(a, mass)
}
