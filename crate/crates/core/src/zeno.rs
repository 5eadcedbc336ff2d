//! Selective momentum-window measurements interleaved with Schrödinger
//! evolution.
//!
//! The simulated object is the unnormalized state
//! `|ψ_N⟩ = Π e^{-iĤΔt} ⋯ Π e^{-iĤΔt} |ψ_0⟩` with exactly `N` evolution and
//! projection pairs and `Δt = T/N`. Its squared norm is the probability
//! `P_1 P_2 ⋯ P_N` that every measurement found `|p| < m·Δv`. Only the
//! all-positive branch is followed.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::diagnostics::{self, MeasuredTime};
use crate::grid::Grid;
use crate::potential::Potential;
use crate::propagator::{substep_count, StepPlan};
use crate::state::{region_integral, Representation, Wavefunction};
use crate::{Error, Result};

/// Grid points at each edge inspected by the boundary-leak check.
pub const BOUNDARY_STRIP: usize = 5;

/// Projector onto `|p| < p_cut` on a given grid.
#[derive(Debug, Clone)]
pub struct MomentumWindow {
    grid: Arc<Grid>,
    p_cut: f64,
    mask: Vec<bool>,
    inside: usize,
}

impl MomentumWindow {
    /// Window `|p| < mass·delta_v`. The edge itself is discarded.
    pub fn new(grid: Arc<Grid>, mass: f64, delta_v: f64) -> Result<Self> {
        let p_cut = mass * delta_v;
        if !(p_cut > 2.0 * grid.dp()) {
            return Err(Error::UnresolvableWindow {
                p_cut,
                dp: grid.dp(),
            });
        }
        let mask: Vec<bool> = grid.p_axis().iter().map(|p| p.abs() < p_cut).collect();
        let inside = mask.iter().filter(|&&m| m).count();
        Ok(Self {
            grid,
            p_cut,
            mask,
            inside,
        })
    }

    /// Momentum bound `m·Δv`.
    pub fn p_cut(&self) -> f64 {
        self.p_cut
    }

    /// Per-mode mask over the natural-order momentum axis.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Number of modes kept.
    pub fn modes_inside(&self) -> usize {
        self.inside
    }

    /// Grid the mask refers to.
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Zeroes momentum amplitudes outside the window, leaving the state
    /// unnormalized and in its original representation. Returns the kept
    /// fraction `P = ⟨ψ|Π|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn project(&self, psi: &mut Wavefunction) -> Result<f64> {
        psi.require_grid(&self.grid)?;
        let original = psi.representation();
        if original == Representation::Position {
            psi.to_momentum()?;
        }
        let mut before = 0.0;
        let mut after = 0.0;
        for (c, &keep) in psi.amplitudes_mut().iter_mut().zip(&self.mask) {
            let d = c.norm_sqr();
            before += d;
            if keep {
                after += d;
            } else {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        if original == Representation::Position {
            psi.to_position()?;
        }
        if before <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(after / before)
    }
}

/// How the initial packet enters the measured sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Preparation {
    /// The packet is conditioned on being at rest before the first interval:
    /// it is projected onto the window and renormalized. The cost of that
    /// preparation is reported separately and not counted in the survival.
    #[default]
    Projected,
    /// The raw packet is evolved; the first projection happens at `Δt`.
    Raw,
}

/// Full description of one measured run.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QzdConfig {
    /// Particle mass in electron masses.
    pub mass: f64,
    /// Velocity uncertainty defining the window `|p| < m·Δv`.
    pub delta_v: f64,
    /// Total time `T`.
    pub horizon: f64,
    /// Number of measurements `N`; zero means pure Schrödinger evolution.
    pub n_measurements: usize,
    /// Upper bound on the propagator step.
    pub max_substep: f64,
    /// Snapshot every this many intervals (measurement intervals, or
    /// substeps when `n_measurements == 0`); zero disables snapshots.
    pub snapshot_stride: usize,
    /// Where to sample the probability current; `None` skips it. The
    /// region probability is taken over `[x_ref, ∞)` with `x_ref` this
    /// point or zero.
    pub record_flux_at: Option<f64>,
    /// Treatment of the initial packet.
    pub preparation: Preparation,
    /// Abort when the probability within [`BOUNDARY_STRIP`] points of either
    /// edge exceeds this value. The run starts normalized, so this bounds
    /// the wrapped probability in absolute terms.
    pub leak_tolerance: f64,
}

/// Default propagator step bound for the short (tens of a.u.) runs.
pub const DEFAULT_MAX_SUBSTEP: f64 = 0.05;
/// Default boundary-leak tolerance.
pub const DEFAULT_LEAK_TOLERANCE: f64 = 1e-3;

impl QzdConfig {
    /// Config with defaults for everything but the physics.
    pub fn new(mass: f64, delta_v: f64, horizon: f64, n_measurements: usize) -> Self {
        Self {
            mass,
            delta_v,
            horizon,
            n_measurements,
            max_substep: DEFAULT_MAX_SUBSTEP,
            snapshot_stride: 0,
            record_flux_at: Some(0.0),
            preparation: Preparation::default(),
            leak_tolerance: DEFAULT_LEAK_TOLERANCE,
        }
    }

    /// Checks scalar preconditions.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("delta_v", self.delta_v),
            ("horizon", self.horizon),
            ("max_substep", self.max_substep),
            ("leak_tolerance", self.leak_tolerance),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || value.is_nan() || (name != "delta_v" && !value.is_finite()) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// Measurement interval `T/N` (or `T` when `N = 0`).
    pub fn interval(&self) -> f64 {
        if self.n_measurements == 0 {
            self.horizon
        } else {
            self.horizon / self.n_measurements as f64
        }
    }

    /// Reference point for flux and region probability.
    pub fn reference_point(&self) -> f64 {
        self.record_flux_at.unwrap_or(0.0)
    }
}

/// Observation taken after every propagator substep (and at `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TracePoint {
    /// Time.
    pub t: f64,
    /// Squared norm of the unnormalized state (the survival so far).
    pub norm: f64,
    /// Probability in `[x_ref, ∞)`.
    pub region_prob: f64,
    /// Probability current at `x_ref`, if recorded.
    pub flux: Option<f64>,
}

/// Position and momentum densities at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// Time.
    pub t: f64,
    /// Interval count at which it was taken.
    pub index: usize,
    /// `|ψ(x)|²` over the position axis.
    pub density: Vec<f64>,
    /// `j(x)` over the position axis.
    pub current: Vec<f64>,
    /// `|ψ̂(p)|²` over the ascending momentum axis.
    pub momentum_density: Vec<f64>,
}

/// Everything recorded during one measured run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Configuration that produced this record.
    pub config: QzdConfig,
    /// Measurement instants `t_n = n·T/N`, `n = 1..=N`.
    pub times: Vec<f64>,
    /// `P^(S)(t_n)`: squared norm after the `n`-th projection.
    pub survival: Vec<f64>,
    /// Kept fraction `P_n` at each measurement.
    pub step_probabilities: Vec<f64>,
    /// Probability in `[x_ref, ∞)` after each measurement.
    pub region_prob_series: Vec<f64>,
    /// Substep-resolution trace, starting at `t = 0`.
    pub trace: Vec<TracePoint>,
    /// Density snapshots at the configured stride, starting at `t = 0`.
    pub snapshots: Vec<Snapshot>,
    /// Window probability of the raw packet, consumed by the preparation
    /// (1 when the packet is used raw).
    pub preparation_probability: f64,
    /// State after the last interval, unnormalized.
    pub final_state: Wavefunction,
}

impl RunRecord {
    /// `P_N^(S)`; 1 for a run without measurements.
    pub fn final_survival(&self) -> f64 {
        self.survival.last().copied().unwrap_or(1.0)
    }

    /// Flux samples from the trace, if they were recorded.
    pub fn flux_series(&self) -> Option<Vec<(f64, f64)>> {
        self.trace.iter().map(|p| p.flux.map(|j| (p.t, j))).collect()
    }

    /// `Π_n P_n`.
    pub fn step_probability_product(&self) -> f64 {
        self.step_probabilities.iter().product()
    }
}

/// Runs `N` evolution/projection pairs over `[0, T]` starting from `psi0`.
pub fn qzd_run<P: Potential + ?Sized>(
    psi0: &Wavefunction,
    potential: &P,
    config: &QzdConfig,
) -> Result<RunRecord> {
    config.validate()?;
    psi0.require(Representation::Position)?;
    let norm0 = psi0.norm2();
    if (norm0 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized { norm: norm0 });
    }
    let grid = psi0.grid().clone();
    let n_meas = config.n_measurements;
    let window = if n_meas > 0 {
        Some(MomentumWindow::new(grid.clone(), config.mass, config.delta_v)?)
    } else {
        None
    };

    let mut psi = psi0.clone();
    let mut preparation_probability = 1.0;
    if let (Some(window), Preparation::Projected) = (&window, config.preparation) {
        preparation_probability = window.project(&mut psi)?;
        psi.scale(1.0 / preparation_probability.sqrt());
    }

    // With no measurements the whole horizon is a single interval and the
    // snapshot stride counts substeps instead.
    let intervals = n_meas.max(1);
    let interval = config.interval();
    let substeps = substep_count(interval, config.max_substep);
    let h = interval / substeps as f64;
    let plan = StepPlan::new(grid.clone(), potential, config.mass, h)?;

    let mut obs = Observer::new(grid.clone(), config);
    let mut record = RunRecord {
        config: config.clone(),
        times: Vec::with_capacity(n_meas),
        survival: Vec::with_capacity(n_meas),
        step_probabilities: Vec::with_capacity(n_meas),
        region_prob_series: Vec::with_capacity(n_meas),
        trace: Vec::with_capacity(intervals * substeps + 1),
        snapshots: Vec::new(),
        preparation_probability,
        final_state: psi.clone(),
    };
    record.trace.push(obs.trace_point(&psi, 0.0)?);
    if config.snapshot_stride > 0 {
        record.snapshots.push(snapshot(&psi, config.mass, 0.0, 0)?);
    }

    let mut dead = false;
    for n in 1..=intervals {
        let t_start = (n - 1) as f64 * interval;
        let t_end = if n_meas == 0 {
            config.horizon
        } else {
            n as f64 * config.horizon / n_meas as f64
        };
        for s in 1..=substeps {
            if !dead {
                plan.step(&mut psi)?;
            }
            let last = s == substeps;
            if last {
                if let Some(window) = &window {
                    let p_step = if dead { 0.0 } else { window.project(&mut psi)? };
                    if p_step == 0.0 {
                        dead = true;
                    }
                    record.times.push(t_end);
                    record.step_probabilities.push(p_step);
                }
            }
            let t = if last { t_end } else { t_start + s as f64 * h };
            let point = if dead {
                TracePoint {
                    t,
                    norm: 0.0,
                    region_prob: 0.0,
                    flux: config.record_flux_at.map(|_| 0.0),
                }
            } else {
                obs.trace_point(&psi, t)?
            };
            if last && window.is_some() {
                record.survival.push(point.norm);
                record.region_prob_series.push(point.region_prob);
            }
            record.trace.push(point);
            let index = if n_meas == 0 { s } else { n };
            let take = config.snapshot_stride > 0
                && index % config.snapshot_stride == 0
                && (n_meas > 0 && last || n_meas == 0);
            if take {
                record.snapshots.push(snapshot(&psi, config.mass, t, index)?);
            }
        }
    }
    record.final_state = psi;
    Ok(record)
}

/// Per-substep observations with a reusable scratch buffer.
struct Observer<'a> {
    grid: Arc<Grid>,
    config: &'a QzdConfig,
    density: Vec<f64>,
    scratch: Vec<Complex64>,
}

impl<'a> Observer<'a> {
    fn new(grid: Arc<Grid>, config: &'a QzdConfig) -> Self {
        let n = grid.len();
        Self {
            grid,
            config,
            density: Vec::with_capacity(n),
            scratch: Vec::with_capacity(n),
        }
    }

    fn trace_point(&mut self, psi: &Wavefunction, t: f64) -> Result<TracePoint> {
        let amps = psi.amplitudes();
        self.density.clear();
        self.density.extend(amps.iter().map(|c| c.norm_sqr()));
        let dx = self.grid.dx();
        let norm = self.density.iter().sum::<f64>() * dx;
        let n = self.density.len();
        let strips: f64 = self.density[..BOUNDARY_STRIP].iter().sum::<f64>()
            + self.density[n - BOUNDARY_STRIP..].iter().sum::<f64>();
        let fraction = strips * dx;
        if fraction > self.config.leak_tolerance {
            return Err(Error::BoundaryLeak { t, fraction });
        }
        let x_ref = self.config.reference_point();
        let region_prob = region_integral(&self.grid, &self.density, x_ref, f64::INFINITY);
        let flux = match self.config.record_flux_at {
            Some(x) => {
                self.scratch.clear();
                self.scratch.extend_from_slice(amps);
                self.grid.forward_in_place(&mut self.scratch);
                Some(diagnostics::current_from_momentum(
                    &self.grid,
                    &self.scratch,
                    self.config.mass,
                    x,
                ))
            }
            None => None,
        };
        Ok(TracePoint {
            t,
            norm,
            region_prob,
            flux,
        })
    }
}

fn snapshot(psi: &Wavefunction, mass: f64, t: f64, index: usize) -> Result<Snapshot> {
    Ok(Snapshot {
        t,
        index,
        density: psi.probability_density(),
        current: diagnostics::probability_current(psi, mass)?,
        momentum_density: psi.momentum_density(),
    })
}

/// One row of a measurement-count sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// `N`.
    pub n_measurements: usize,
    /// `P_N^(S)`.
    pub survival: f64,
    /// Measured teleportation time, when snapshots and a target were available.
    pub teleportation_time: Option<MeasuredTime>,
}

/// One [`qzd_run`] per entry of `n_list`, all over the same horizon.
pub fn sweep_measurements<P: Potential + ?Sized>(
    psi0: &Wavefunction,
    potential: &P,
    base: &QzdConfig,
    n_list: &[usize],
    x_target: Option<f64>,
) -> Result<Vec<SweepRow>> {
    n_list
        .iter()
        .map(|&n| {
            let record = run_sweep_entry(psi0, potential, base, n)?;
            Ok(sweep_row(&record, x_target))
        })
        .collect()
}

/// The run behind one sweep row.
pub fn run_sweep_entry<P: Potential + ?Sized>(
    psi0: &Wavefunction,
    potential: &P,
    base: &QzdConfig,
    n: usize,
) -> Result<RunRecord> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n_measurements",
            value: 0.0,
        });
    }
    let config = QzdConfig {
        n_measurements: n,
        ..base.clone()
    };
    qzd_run(psi0, potential, &config)
}

/// Summarizes a record as a sweep row.
pub fn sweep_row(record: &RunRecord, x_target: Option<f64>) -> SweepRow {
    SweepRow {
        n_measurements: record.config.n_measurements,
        survival: record.final_survival(),
        teleportation_time: x_target
            .and_then(|x| diagnostics::teleportation_time_measured(record, x).ok()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::GaussianPotential;
    use crate::propagator::evolve;
    use alloc::vec;
    use core::f64::consts::SQRT_2;

    fn fig2_grid() -> Arc<Grid> {
        Arc::new(Grid::new(-150.0, 150.0, 2048).unwrap())
    }

    #[test]
    fn window_keeps_strictly_inside() {
        // dp = 0.1 exactly.
        let length = 2.0 * core::f64::consts::PI / 0.1;
        let grid = Arc::new(Grid::new(-length / 2.0, length / 2.0, 256).unwrap());
        let w = MomentumWindow::new(grid.clone(), 1.0, SQRT_2).unwrap();
        for (&p, &keep) in grid.p_axis().iter().zip(w.mask()) {
            assert_eq!(keep, p.abs() <= 1.4 + 1e-9, "p = {p}");
        }
        assert_eq!(w.modes_inside(), 29);
    }

    #[test]
    fn edge_mode_is_discarded() {
        let grid = Arc::new(Grid::new(-core::f64::consts::PI, core::f64::consts::PI, 16).unwrap());
        let w = MomentumWindow::new(grid, 1.0, 3.0).unwrap();
        let kept: usize = w.mask().iter().filter(|&&k| k).count();
        assert_eq!(kept, 5);
    }

    #[test]
    fn infinite_window_keeps_everything() {
        let w = MomentumWindow::new(fig2_grid(), 1.0, f64::INFINITY).unwrap();
        assert!(w.mask().iter().all(|&k| k));
    }

    #[test]
    fn thermal_proton_window() {
        let a: f64 = 1.856e-3;
        let m = 1836.0;
        let dv = (a / m).sqrt();
        assert!((dv - 1.0055e-3).abs() < 1e-6);
        let grid = Arc::new(Grid::new(-4500.0, 4500.0, 1 << 15).unwrap());
        let w = MomentumWindow::new(grid, m, dv).unwrap();
        assert!((w.p_cut() - 1.846).abs() < 1e-3);
    }

    #[test]
    fn unresolvable_window() {
        let grid = fig2_grid();
        let dp = grid.dp();
        assert!(matches!(
            MomentumWindow::new(grid, 1.0, 1.5 * dp),
            Err(Error::UnresolvableWindow { .. })
        ));
    }

    #[test]
    fn projection_edge_cases() {
        let grid = fig2_grid();
        let w = MomentumWindow::new(grid.clone(), 1.0, SQRT_2).unwrap();
        // Fully inside: a wide, slow packet.
        let mut inside = Wavefunction::gaussian_packet(grid.clone(), 0.0, 20.0, 0.0).unwrap();
        let before = inside.clone();
        let p = w.project(&mut inside).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        for (a, b) in inside.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        // Single mode outside.
        let mut amps = vec![Complex64::new(0.0, 0.0); 2048];
        amps[100] = Complex64::new(1.0, 0.0);
        assert!(grid.p_axis()[100] > SQRT_2);
        let mut outside = Wavefunction::new(grid.clone(), amps, Representation::Momentum).unwrap();
        assert_eq!(w.project(&mut outside).unwrap(), 0.0);
        assert_eq!(outside.norm2(), 0.0);
        assert_eq!(w.project(&mut outside), Err(Error::ZeroNorm));
    }

    #[test]
    fn projection_is_idempotent() {
        let grid = fig2_grid();
        let w = MomentumWindow::new(grid.clone(), 1.0, SQRT_2).unwrap();
        let mut psi = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.3).unwrap();
        psi.to_momentum().unwrap();
        w.project(&mut psi).unwrap();
        let once = psi.clone();
        let p2 = w.project(&mut psi).unwrap();
        assert_eq!(once.amplitudes(), psi.amplitudes());
        assert!((p2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn no_measurements_is_pure_evolution() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        let config = QzdConfig::new(1.0, SQRT_2, 2.0, 0);
        let record = qzd_run(&psi0, &well, &config).unwrap();
        assert!(record.survival.is_empty());
        assert!(record.times.is_empty());
        assert!((record.final_state.norm2() - 1.0).abs() < 1e-12);
        assert_eq!(record.trace.len(), 41);
        let mut direct = psi0.clone();
        evolve(&mut direct, &well, 1.0, 2.0, 0.05).unwrap();
        assert_eq!(direct.amplitudes(), record.final_state.amplitudes());
    }

    #[test]
    fn all_pass_window_matches_pure_evolution() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        let config = QzdConfig::new(1.0, f64::INFINITY, 2.0, 16);
        let record = qzd_run(&psi0, &well, &config).unwrap();
        assert!((record.final_survival() - 1.0).abs() < 1e-12);
        let mut direct = psi0.clone();
        for _ in 0..16 {
            evolve(&mut direct, &well, 1.0, 0.125, 0.05).unwrap();
        }
        let diff: f64 = direct
            .amplitudes()
            .iter()
            .zip(record.final_state.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * direct.grid().dx();
        assert!(diff.sqrt() < 1e-10);
    }

    #[test]
    fn survival_is_product_of_steps_and_monotone() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        let config = QzdConfig::new(1.0, SQRT_2, 3.0, 64);
        let record = qzd_run(&psi0, &well, &config).unwrap();
        assert_eq!(record.survival.len(), 64);
        let mut product = 1.0;
        for (s, p) in record.survival.iter().zip(&record.step_probabilities) {
            product *= p;
            assert!((s - product).abs() < 1e-10);
        }
        assert!(record.survival.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert_eq!(*record.times.last().unwrap(), 3.0);
        assert!((record.final_state.norm2() - record.step_probability_product()).abs() < 1e-10);
    }

    #[test]
    fn snapshot_stride() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        let mut config = QzdConfig::new(1.0, SQRT_2, 1.0, 8);
        config.snapshot_stride = 4;
        let record = qzd_run(&psi0, &well, &config).unwrap();
        let times: Vec<f64> = record.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(times, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn sweep_is_deterministic() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        let base = QzdConfig::new(1.0, SQRT_2, 1.0, 1);
        let a = sweep_measurements(&psi0, &well, &base, &[8, 16], None).unwrap();
        let b = sweep_measurements(&psi0, &well, &base, &[8, 16], None).unwrap();
        assert_eq!(a, b);
        let single = sweep_measurements(&psi0, &well, &base, &[16], None).unwrap();
        assert_eq!(single[0], a[1]);
        let direct = qzd_run(&psi0, &well, &QzdConfig::new(1.0, SQRT_2, 1.0, 16)).unwrap();
        assert_eq!(single[0].survival, direct.final_survival());
        assert!(sweep_measurements(&psi0, &well, &base, &[0], None).is_err());
    }

    #[test]
    fn rejects_unnormalized_start() {
        let grid = fig2_grid();
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let mut psi0 = Wavefunction::gaussian_packet(grid, 30.0, SQRT_2, 0.0).unwrap();
        psi0.scale(0.5);
        let config = QzdConfig::new(1.0, SQRT_2, 1.0, 4);
        assert!(matches!(
            qzd_run(&psi0, &well, &config),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn leak_is_detected() {
        // A fast packet on a small box runs into the edge.
        let grid = Arc::new(Grid::new(-20.0, 20.0, 512).unwrap());
        let psi0 = Wavefunction::gaussian_packet(grid, 10.0, 1.0, 0.0).unwrap();
        let flat = crate::potential::FreeSpace;
        let config = QzdConfig::new(1.0, 100.0, 20.0, 0);
        assert!(matches!(
            qzd_run(&psi0, &flat, &config),
            Err(Error::BoundaryLeak { .. })
        ));
    }
}
