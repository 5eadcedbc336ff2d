//! Built-in experiment specs.

use std::f64::consts::SQRT_2;
use std::path::PathBuf;

use qzd_core::potential::PotentialKind;
use qzd_core::units::mass;
use qzd_core::zeno::{Preparation, DEFAULT_LEAK_TOLERANCE};

use crate::error::Result;
use crate::spec::{
    ExperimentSpec, GridSpec, Horizon, MassScaling, MeasurementSpec, PacketSpec, ParticleSpec,
    PotentialSpec, Scheme, Shape,
};

/// Width parameter `a = 2k_BT` of the thermal packets.
pub const THERMAL_A: f64 = 1.856e-3;
pub const FIG5_X0: f64 = 1414.2;
pub const FIG5_XP: f64 = 1000.0;
pub const FIG5_V0: f64 = 0.4396;

pub fn particle(name: &str) -> Option<ParticleSpec> {
    let mass = match name {
        "electron" => mass::ELECTRON,
        "muon" => mass::MUON,
        "pion" => mass::PION,
        "proton" => mass::PROTON,
        _ => return None,
    };
    Some(ParticleSpec {
        name: name.to_string(),
        mass,
    })
}

fn particles(names: &[&str]) -> Vec<ParticleSpec> {
    names.iter().map(|n| particle(n).expect("known particle")).collect()
}

fn powers_of_two(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

fn measurement(delta_v: Option<f64>, horizon: Horizon, max_substep: f64) -> MeasurementSpec {
    MeasurementSpec {
        delta_v,
        horizon,
        n_measurements: Vec::new(),
        intervals: Vec::new(),
        max_substep,
        preparation: Preparation::Projected,
        record_flux: true,
        flux_at: 0.0,
        leak_tolerance: DEFAULT_LEAK_TOLERANCE,
        snapshot_runs: Vec::new(),
        snapshot_frames: 120,
        control_horizon: None,
    }
}

/// The small-grid electron setup shared by the first three figures.
fn electron_well(name: &str, scheme: Scheme, horizon: Horizon) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        scheme,
        output_dir: PathBuf::from("runs"),
        grid: GridSpec {
            x_min: -150.0,
            x_max: 150.0,
            n: 2048,
        },
        potential: PotentialSpec {
            shape: Shape::Gaussian,
            kind: PotentialKind::Well,
            v0: 10.0,
            xp: 30.0,
            center: 0.0,
            mass_scaling: MassScaling::None,
        },
        particles: particles(&["electron"]),
        packet: PacketSpec {
            x0: 30.0,
            delta_x: Some(SQRT_2),
            thermal_a: None,
        },
        measurement: measurement(Some(SQRT_2), horizon, 0.05),
    }
}

fn thermal(name: &str, scheme: Scheme, scaling: MassScaling, horizon: Horizon) -> ExperimentSpec {
    let mut m = measurement(None, horizon, 0.5);
    m.record_flux = false;
    ExperimentSpec {
        name: name.to_string(),
        scheme,
        output_dir: PathBuf::from("runs"),
        grid: GridSpec {
            x_min: -4500.0,
            x_max: 4500.0,
            n: 1 << 15,
        },
        potential: PotentialSpec {
            shape: Shape::Gaussian,
            kind: PotentialKind::Well,
            v0: FIG5_V0,
            xp: FIG5_XP,
            center: 0.0,
            mass_scaling: scaling,
        },
        particles: particles(&["electron", "muon"]),
        packet: PacketSpec {
            x0: FIG5_X0,
            delta_x: None,
            thermal_a: Some(THERMAL_A),
        },
        measurement: m,
    }
}

pub fn fig2() -> ExperimentSpec {
    let mut s = electron_well("fig2", Scheme::Fig2, Horizon::Fixed(30.0));
    s.measurement.n_measurements = powers_of_two(4, 11);
    s.measurement.snapshot_runs = vec![1 << 9, 1 << 11];
    s.measurement.control_horizon = Some(30.0);
    s
}

pub fn fig3() -> ExperimentSpec {
    let mut s = electron_well("fig3", Scheme::Fig3, Horizon::Analytic);
    s.measurement.n_measurements = vec![1 << 10];
    s.measurement.snapshot_runs = vec![1 << 10];
    s.measurement.snapshot_frames = 2;
    s
}

pub fn fig4() -> ExperimentSpec {
    let mut s = electron_well("fig4", Scheme::Fig4, Horizon::Analytic);
    s.measurement.n_measurements = vec![1 << 11];
    s.measurement.control_horizon = Some(30.0);
    s
}

pub fn fig5b() -> ExperimentSpec {
    let mut s = thermal("fig5b", Scheme::Fig5b, MassScaling::Sqrt, Horizon::Thermal);
    s.measurement.n_measurements = powers_of_two(4, 11);
    s
}

pub fn fig5c() -> ExperimentSpec {
    let mut s = thermal("fig5c", Scheme::Fig5c, MassScaling::None, Horizon::Thermal);
    s.measurement.n_measurements = powers_of_two(4, 11);
    s
}

pub fn fig5d() -> ExperimentSpec {
    let mut s = thermal("fig5d", Scheme::Fig5d, MassScaling::None, Horizon::Thermal);
    s.measurement.intervals = vec![16.0, 8.0, 4.0, 2.0, 1.0, 0.5];
    s
}

/// Adds pion and proton to a mass-scheme preset.
pub fn extended(mut spec: ExperimentSpec) -> ExperimentSpec {
    for name in ["pion", "proton"] {
        if !spec.particles.iter().any(|p| p.name == name) {
            spec.particles.push(particle(name).expect("known particle"));
        }
    }
    spec
}

pub fn preset(name: &str) -> Result<ExperimentSpec> {
    let (base, extended_suite) = match name.strip_suffix("-extended") {
        Some(base) => (base, true),
        None => (name, false),
    };
    let spec = match base.parse::<Scheme>()? {
        Scheme::Fig2 => fig2(),
        Scheme::Fig3 => fig3(),
        Scheme::Fig4 => fig4(),
        Scheme::Fig5b => fig5b(),
        Scheme::Fig5c => fig5c(),
        Scheme::Fig5d => fig5d(),
        Scheme::Custom => return Err(crate::Error::UnknownPreset(name.to_string())),
    };
    Ok(if extended_suite {
        let mut spec = extended(spec);
        spec.name = name.to_string();
        spec
    } else {
        spec
    })
}
