//! Turns a spec into a set of runs and executes them on a worker pool.

use std::sync::Arc;

use log::{debug, info};
use qzd_core::diagnostics::{
    continuity_report, overlap_coefficients, teleportation_time_analytic,
    teleportation_time_measured, teleportation_time_thermal, ContinuityReport, MeasuredTime,
};
use qzd_core::potential::GaussianPotential;
use qzd_core::propagator::substep_count;
use qzd_core::zeno::qzd_run;
use qzd_core::{Grid, MomentumWindow, Potential, QzdConfig, RunRecord, Wavefunction};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spec::{ExperimentSpec, Horizon, ParticleSpec};

/// Largest point count the grid refinement will go to.
pub const MAX_GRID_POINTS: usize = 1 << 22;

/// Everything about one particle that does not depend on `N`.
#[derive(Debug, Clone)]
pub struct ParticleSetup {
    pub particle: ParticleSpec,
    pub grid: Arc<Grid>,
    pub potential: GaussianPotential,
    pub psi0: Wavefunction,
    pub x0: f64,
    pub delta_x: f64,
    pub delta_v: f64,
    /// Mirror turning point.
    pub x_target: f64,
    pub t_analytic: f64,
    pub t_thermal: Option<f64>,
    pub horizon: f64,
}

impl ParticleSetup {
    pub fn new(spec: &ExperimentSpec, particle: &ParticleSpec) -> Result<Self> {
        let mass = particle.mass;
        let delta_x = spec.delta_x(mass);
        let delta_v = spec.delta_v(mass);
        let grid = Arc::new(refined_grid(spec, delta_x, mass * delta_v)?);
        if grid.len() != spec.grid.n {
            info!(
                "{}: grid refined to n = {} for Δx = {delta_x:.4}",
                particle.name,
                grid.len()
            );
        }
        let potential = spec.potential.build(mass)?;
        let x0 = spec.packet.x0;
        let psi0 = Wavefunction::gaussian_packet(grid.clone(), x0, delta_x, 0.0)?;
        let x_target = potential.mirror_turning_point(x0)?;
        let t_analytic = teleportation_time_analytic(mass, delta_v, &potential, x0)?;
        let t_thermal = spec
            .packet
            .thermal_a
            .map(|a| teleportation_time_thermal(a, mass, &potential, x0))
            .transpose()?;
        let horizon = match spec.measurement.horizon {
            Horizon::Fixed(t) => t,
            Horizon::Analytic => t_analytic,
            Horizon::Thermal => t_thermal.ok_or_else(|| Error::Spec("thermal horizon without thermal_a".into()))?,
        };
        Ok(Self {
            particle: particle.clone(),
            grid,
            potential,
            psi0,
            x0,
            delta_x,
            delta_v,
            x_target,
            t_analytic,
            t_thermal,
            horizon,
        })
    }

    pub fn window(&self) -> Result<MomentumWindow> {
        Ok(MomentumWindow::new(self.grid.clone(), self.particle.mass, self.delta_v)?)
    }
}

/// Doubles `n` until the packet spans four cells and the window sits well
/// inside the momentum range.
fn refined_grid(spec: &ExperimentSpec, delta_x: f64, p_cut: f64) -> Result<Grid> {
    let g = &spec.grid;
    let mut n = g.n;
    loop {
        let grid = Grid::new(g.x_min, g.x_max, n)?;
        if delta_x >= 4.0 * grid.dx() && p_cut <= 0.5 * grid.p_max() {
            return Ok(grid);
        }
        if n >= MAX_GRID_POINTS {
            return Err(Error::Spec(format!(
                "no grid up to n = {MAX_GRID_POINTS} resolves Δx = {delta_x} and p_cut = {p_cut}"
            )));
        }
        n *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    /// Unmeasured reference evolution.
    Control,
    Measured,
}

/// One scheduled run.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub id: String,
    pub particle: usize,
    pub kind: RunKind,
    /// Requested spacing, for interval-driven runs.
    pub interval: Option<f64>,
    pub config: QzdConfig,
}

/// Which part of a spec to execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Control runs, every `N` and every snapshot run.
    Full,
    /// Measured runs only, without snapshots.
    Sweep,
    /// The first `N` (or interval) of the first particle.
    Single,
}

fn base_config(spec: &ExperimentSpec, setup: &ParticleSetup, horizon: f64, n: usize) -> QzdConfig {
    let m = &spec.measurement;
    let mut config = QzdConfig::new(setup.particle.mass, setup.delta_v, horizon, n);
    config.max_substep = m.max_substep;
    config.preparation = m.preparation;
    config.record_flux_at = m.record_flux.then_some(m.flux_at);
    config.leak_tolerance = m.leak_tolerance;
    config
}

/// Stride giving about `frames` snapshots after `t = 0`.
fn stride_for(config: &QzdConfig, frames: usize) -> usize {
    let units = if config.n_measurements == 0 {
        substep_count(config.horizon, config.max_substep)
    } else {
        config.n_measurements
    };
    (units / frames.max(1)).max(1)
}

fn format_interval(dt: f64) -> String {
    format!("{dt}").replace('.', "p")
}

pub fn plan_jobs(spec: &ExperimentSpec, setups: &[ParticleSetup], selection: Selection) -> Vec<Job> {
    let m = &spec.measurement;
    let mut jobs = Vec::new();
    for (i, setup) in setups.iter().enumerate() {
        let name = &setup.particle.name;
        if selection == Selection::Full {
            if let Some(t) = m.control_horizon {
                let mut config = base_config(spec, setup, t, 0);
                config.snapshot_stride = stride_for(&config, m.snapshot_frames);
                jobs.push(Job {
                    id: format!("{name}-free"),
                    particle: i,
                    kind: RunKind::Control,
                    interval: None,
                    config,
                });
            }
        }
        let mut counts: Vec<usize> = m.n_measurements.clone();
        if selection == Selection::Full {
            for &n in &m.snapshot_runs {
                if !counts.contains(&n) && m.intervals.is_empty() {
                    counts.push(n);
                }
            }
        }
        for n in counts {
            let mut config = base_config(spec, setup, setup.horizon, n);
            if selection != Selection::Sweep && m.snapshot_runs.contains(&n) {
                config.snapshot_stride = stride_for(&config, m.snapshot_frames);
            }
            jobs.push(Job {
                id: format!("{name}-n{n}"),
                particle: i,
                kind: if n == 0 { RunKind::Control } else { RunKind::Measured },
                interval: None,
                config,
            });
        }
        for &dt in &m.intervals {
            let n = ((setup.horizon / dt).round() as usize).max(1);
            jobs.push(Job {
                id: format!("{name}-dt{}", format_interval(dt)),
                particle: i,
                kind: RunKind::Measured,
                interval: Some(dt),
                config: base_config(spec, setup, setup.horizon, n),
            });
        }
    }
    if selection == Selection::Single {
        jobs.retain(|j| j.particle == 0);
        jobs.truncate(1);
    }
    jobs
}

/// `|α|²`, `|β|²` against window-projected templates at `±x0`, and against
/// the raw Gaussians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlaps {
    pub alpha2: f64,
    pub beta2: f64,
    pub alpha2_raw: f64,
    pub beta2_raw: f64,
    /// Probability in `(-∞, 0]`.
    pub left_probability: f64,
}

impl Overlaps {
    pub fn compute(setup: &ParticleSetup, psi: &Wavefunction) -> Result<Option<Self>> {
        if psi.norm2() == 0.0 {
            return Ok(None);
        }
        let window = setup.window()?;
        let res = overlap_coefficients(psi, setup.x0, setup.delta_x, Some(&window))
            .and_then(|w| Ok((w, overlap_coefficients(psi, setup.x0, setup.delta_x, None)?)));
        match res {
            Ok(((a, b), (ar, br))) => Ok(Some(Self {
                alpha2: a.norm_sqr(),
                beta2: b.norm_sqr(),
                alpha2_raw: ar.norm_sqr(),
                beta2_raw: br.norm_sqr(),
                left_probability: psi.region_probability(f64::NEG_INFINITY, 0.0),
            })),
            Err(qzd_core::Error::OverlappingTemplates { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// A finished run with its derived quantities.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub job: Job,
    pub record: RunRecord,
    pub measured: Option<MeasuredTime>,
    pub continuity: Option<ContinuityReport>,
    pub overlaps: Option<Overlaps>,
}

pub fn execute(setup: &ParticleSetup, job: &Job) -> Result<RunOutcome> {
    debug!("{}: starting ({} measurements, T = {})", job.id, job.config.n_measurements, job.config.horizon);
    let record = qzd_run(&setup.psi0, &setup.potential, &job.config)?;
    let measured = teleportation_time_measured(&record, setup.x_target).ok();
    let continuity = match job.config.record_flux_at {
        Some(_) => Some(continuity_report(&record)?),
        None => None,
    };
    let overlaps = Overlaps::compute(setup, &record.final_state)?;
    info!("{}: P = {:.6}", job.id, record.final_survival());
    Ok(RunOutcome {
        job: job.clone(),
        record,
        measured,
        continuity,
        overlaps,
    })
}

/// All runs of one experiment, in plan order.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub spec: ExperimentSpec,
    pub setups: Vec<ParticleSetup>,
    pub runs: Vec<RunOutcome>,
}

impl ExperimentOutput {
    pub fn run(&self, id: &str) -> Option<&RunOutcome> {
        self.runs.iter().find(|r| r.job.id == id)
    }
}

/// Runs the selected part of `spec` on `jobs` worker threads (0 = all cores).
pub fn run_experiment(spec: &ExperimentSpec, selection: Selection, jobs: usize) -> Result<ExperimentOutput> {
    spec.validate()?;
    let setups = spec
        .particles
        .iter()
        .map(|p| ParticleSetup::new(spec, p))
        .collect::<Result<Vec<_>>>()?;
    let plan = plan_jobs(spec, &setups, selection);
    info!("{}: {} runs over {} particle(s)", spec.name, plan.len(), setups.len());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Pool(e.to_string()))?;
    // Longest runs first so the pool drains evenly; results return in plan order.
    let mut order: Vec<usize> = (0..plan.len()).collect();
    order.sort_by(|&a, &b| cost(&plan[b]).total_cmp(&cost(&plan[a])));
    let mut finished: Vec<(usize, RunOutcome)> = pool.install(|| {
        order
            .par_iter()
            .map(|&i| execute(&setups[plan[i].particle], &plan[i]).map(|o| (i, o)))
            .collect::<Result<Vec<_>>>()
    })?;
    finished.sort_by_key(|(i, _)| *i);
    Ok(ExperimentOutput {
        spec: spec.clone(),
        setups,
        runs: finished.into_iter().map(|(_, o)| o).collect(),
    })
}

fn cost(job: &Job) -> f64 {
    let c = &job.config;
    let intervals = c.n_measurements.max(1);
    (intervals * substep_count(c.interval(), c.max_substep)) as f64
}
