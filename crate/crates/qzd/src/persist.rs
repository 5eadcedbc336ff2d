//! On-disk layout:
//!
//! ```text
//! <out>/<experiment>/spec.toml
//! <out>/<experiment>/index.json
//! <out>/<experiment>/summary.csv
//! <out>/<experiment>/<run-id>/meta.json
//! <out>/<experiment>/<run-id>/series.csv        t, survival, region_prob, flux
//! <out>/<experiment>/<run-id>/measurements.csv  n, t, step_probability, survival, region_prob
//! <out>/<experiment>/<run-id>/snapshots.csv     t, x, density, current, p, momentum_density
//! <out>/<experiment>/<run-id>/continuity.csv    t, decrement, flux_integral, residual, norm
//! ```
//!
//! Files hold no timestamps, so identical invocations give identical trees.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use qzd_core::diagnostics::MeasuredTime;
use qzd_core::potential::PotentialKind;
use qzd_core::QzdConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::runner::{ExperimentOutput, Overlaps, ParticleSetup, RunKind, RunOutcome};
use crate::spec::{ParticleSpec, Scheme};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dx: f64,
    pub dp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialInfo {
    pub kind: PotentialKind,
    pub v0: f64,
    pub xp: f64,
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuitySummary {
    pub max_abs_residual: f64,
    pub max_abs_flux_integral: f64,
    pub final_decrement: f64,
    pub final_flux_integral: f64,
}

/// Contents of `meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub run_id: String,
    pub experiment: String,
    pub scheme: Scheme,
    pub kind: RunKind,
    pub particle: ParticleSpec,
    pub grid: GridInfo,
    pub potential: PotentialInfo,
    pub x0: f64,
    pub delta_x: f64,
    pub x_target: f64,
    pub config: QzdConfig,
    pub requested_interval: Option<f64>,
    pub interval: f64,
    pub survival: f64,
    pub preparation_probability: f64,
    pub t_analytic: f64,
    pub t_thermal: Option<f64>,
    pub t_measured: Option<MeasuredTime>,
    pub continuity: Option<ContinuitySummary>,
    pub overlaps: Option<Overlaps>,
    pub files: Vec<String>,
}

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub run_id: String,
    pub particle: String,
    pub mass: f64,
    pub kind: RunKind,
    pub n_measurements: usize,
    pub interval: f64,
    pub horizon: f64,
    pub survival: f64,
    pub preparation_probability: f64,
    pub t_analytic: f64,
    pub t_thermal: Option<f64>,
    pub t_measured: Option<f64>,
    pub teleported: Option<bool>,
    pub beta2: Option<f64>,
    pub max_continuity_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub run_id: String,
    pub particle: String,
    pub n_measurements: usize,
    pub survival: f64,
    pub dir: String,
}

/// Contents of `index.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentIndex {
    pub name: String,
    pub scheme: Scheme,
    pub spec: String,
    pub summary: String,
    pub runs: Vec<IndexEntry>,
}

pub fn summary_row(setup: &ParticleSetup, run: &RunOutcome) -> SummaryRow {
    let c = &run.record.config;
    SummaryRow {
        run_id: run.job.id.clone(),
        particle: setup.particle.name.clone(),
        mass: setup.particle.mass,
        kind: run.job.kind,
        n_measurements: c.n_measurements,
        interval: c.interval(),
        horizon: c.horizon,
        survival: run.record.final_survival(),
        preparation_probability: run.record.preparation_probability,
        t_analytic: setup.t_analytic,
        t_thermal: setup.t_thermal,
        t_measured: run.measured.map(|m| m.time),
        teleported: run.measured.map(|m| m.teleported),
        beta2: run.overlaps.map(|o| o.beta2),
        max_continuity_residual: run.continuity.as_ref().map(|c| c.max_abs_residual()),
    }
}

fn meta(output: &ExperimentOutput, setup: &ParticleSetup, run: &RunOutcome, files: Vec<String>) -> RunMeta {
    let g = &setup.grid;
    RunMeta {
        run_id: run.job.id.clone(),
        experiment: output.spec.name.clone(),
        scheme: output.spec.scheme,
        kind: run.job.kind,
        particle: setup.particle.clone(),
        grid: GridInfo {
            x_min: g.x_min(),
            x_max: g.x_max(),
            n: g.len(),
            dx: g.dx(),
            dp: g.dp(),
        },
        potential: PotentialInfo {
            kind: setup.potential.kind(),
            v0: setup.potential.v0(),
            xp: setup.potential.xp(),
            center: setup.potential.center(),
        },
        x0: setup.x0,
        delta_x: setup.delta_x,
        x_target: setup.x_target,
        config: run.record.config.clone(),
        requested_interval: run.job.interval,
        interval: run.record.config.interval(),
        survival: run.record.final_survival(),
        preparation_probability: run.record.preparation_probability,
        t_analytic: setup.t_analytic,
        t_thermal: setup.t_thermal,
        t_measured: run.measured,
        continuity: run.continuity.as_ref().map(|c| ContinuitySummary {
            max_abs_residual: c.max_abs_residual(),
            max_abs_flux_integral: c.max_abs_flux_integral(),
            final_decrement: c.decrement.last().copied().unwrap_or(0.0),
            final_flux_integral: c.flux_integral.last().copied().unwrap_or(0.0),
        }),
        overlaps: run.overlaps,
        files,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    Ok(csv::Writer::from_writer(create(path)?))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Shortest round-trip form, in exponent notation for very small or large
/// magnitudes. Both zeros print as `0`.
fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let s = format!("{v:?}");
    match s.strip_suffix(".0") {
        Some(int) => int.to_owned(),
        None => s,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Writes one run directory.
pub fn write_run(dir: &Path, output: &ExperimentOutput, setup: &ParticleSetup, run: &RunOutcome) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let rec = &run.record;
    let mut files = vec!["meta.json".to_string(), "series.csv".to_string()];

    let mut w = csv_writer(&dir.join("series.csv"))?;
    w.write_record(["t", "survival", "region_prob", "flux"])?;
    for p in &rec.trace {
        w.write_record([num(p.t), num(p.norm), num(p.region_prob), opt(p.flux)])?;
    }
    w.flush().map_err(|e| Error::io(dir, e))?;

    if !rec.times.is_empty() {
        files.push("measurements.csv".into());
        let mut w = csv_writer(&dir.join("measurements.csv"))?;
        w.write_record(["n", "t", "step_probability", "survival", "region_prob"])?;
        for (i, t) in rec.times.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                num(*t),
                num(rec.step_probabilities[i]),
                num(rec.survival[i]),
                num(rec.region_prob_series[i]),
            ])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;
    }

    if !rec.snapshots.is_empty() {
        files.push("snapshots.csv".into());
        let xs = setup.grid.x_axis();
        let ps = setup.grid.sorted_momenta();
        let mut w = csv_writer(&dir.join("snapshots.csv"))?;
        w.write_record(["t", "x", "density", "current", "p", "momentum_density"])?;
        for s in &rec.snapshots {
            let t = num(s.t);
            for i in 0..xs.len() {
                w.write_record([
                    t.as_str(),
                    &num(xs[i]),
                    &num(s.density[i]),
                    &num(s.current[i]),
                    &num(ps[i]),
                    &num(s.momentum_density[i]),
                ])?;
            }
        }
        w.flush().map_err(|e| Error::io(dir, e))?;
    }

    if let Some(c) = &run.continuity {
        files.push("continuity.csv".into());
        let mut w = csv_writer(&dir.join("continuity.csv"))?;
        w.write_record(["t", "decrement", "flux_integral", "residual", "norm"])?;
        for i in 0..c.times.len() {
            w.write_record([
                num(c.times[i]),
                num(c.decrement[i]),
                num(c.flux_integral[i]),
                num(c.residual[i]),
                num(c.norm[i]),
            ])?;
        }
        w.flush().map_err(|e| Error::io(dir, e))?;
    }

    write_json(&dir.join("meta.json"), &meta(output, setup, run, files))
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = csv_writer(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<Vec<SummaryRow>, _>>()?)
}

pub fn read_meta(path: &Path) -> Result<RunMeta> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_index(path: &Path) -> Result<ExperimentIndex> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes the whole experiment under `root/<name>` and returns that directory.
pub fn persist(output: &ExperimentOutput, root: &Path) -> Result<PathBuf> {
    let dir = root.join(&output.spec.name);
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let spec_path = dir.join("spec.toml");
    fs::write(&spec_path, output.spec.to_toml()?).map_err(|e| Error::io(&spec_path, e))?;

    let mut rows = Vec::with_capacity(output.runs.len());
    let mut entries = Vec::with_capacity(output.runs.len());
    for run in &output.runs {
        let setup = &output.setups[run.job.particle];
        write_run(&dir.join(&run.job.id), output, setup, run)?;
        rows.push(summary_row(setup, run));
        entries.push(IndexEntry {
            run_id: run.job.id.clone(),
            particle: setup.particle.name.clone(),
            n_measurements: run.record.config.n_measurements,
            survival: run.record.final_survival(),
            dir: run.job.id.clone(),
        });
    }
    write_summary(&dir.join("summary.csv"), &rows)?;
    write_json(
        &dir.join("index.json"),
        &ExperimentIndex {
            name: output.spec.name.clone(),
            scheme: output.spec.scheme,
            spec: "spec.toml".into(),
            summary: "summary.csv".into(),
            runs: entries,
        },
    )?;
    Ok(dir)
}
