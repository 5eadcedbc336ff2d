//! Declarative experiment description and its TOML encoding.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qzd_core::potential::{GaussianPotential, PotentialKind};
use qzd_core::zeno::{Preparation, DEFAULT_LEAK_TOLERANCE, DEFAULT_MAX_SUBSTEP};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which figure-level runner an experiment belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Fig2,
    Fig3,
    Fig4,
    Fig5b,
    Fig5c,
    Fig5d,
    Custom,
}

impl Scheme {
    pub const PRESETS: [Scheme; 6] = [
        Scheme::Fig2,
        Scheme::Fig3,
        Scheme::Fig4,
        Scheme::Fig5b,
        Scheme::Fig5c,
        Scheme::Fig5d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Fig2 => "fig2",
            Scheme::Fig3 => "fig3",
            Scheme::Fig4 => "fig4",
            Scheme::Fig5b => "fig5b",
            Scheme::Fig5c => "fig5c",
            Scheme::Fig5d => "fig5d",
            Scheme::Custom => "custom",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Scheme::Fig2),
            "fig3" => Ok(Scheme::Fig3),
            "fig4" => Ok(Scheme::Fig4),
            "fig5b" => Ok(Scheme::Fig5b),
            "fig5c" => Ok(Scheme::Fig5c),
            "fig5d" => Ok(Scheme::Fig5d),
            "custom" => Ok(Scheme::Custom),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    /// Starting point count; refined per particle when a packet is too narrow.
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    #[default]
    Gaussian,
}

/// How the depth depends on the particle mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassScaling {
    #[default]
    None,
    /// `V0 → V0·√(m/m_e)`.
    Sqrt,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    #[serde(default)]
    pub shape: Shape,
    pub kind: PotentialKind,
    pub v0: f64,
    pub xp: f64,
    #[serde(default)]
    pub center: f64,
    #[serde(default)]
    pub mass_scaling: MassScaling,
}

impl PotentialSpec {
    pub fn build(&self, mass: f64) -> Result<GaussianPotential> {
        let depth = match self.mass_scaling {
            MassScaling::None => self.v0,
            MassScaling::Sqrt => self.v0 * mass.sqrt(),
        };
        Ok(GaussianPotential::new(self.kind, depth, self.xp)?.with_center(self.center))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpec {
    pub name: String,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSpec {
    pub x0: f64,
    /// Fixed half-width; exclusive with `thermal_a`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_x: Option<f64>,
    /// Thermal width parameter `a`: `Δx = 2/√(am)` per particle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thermal_a: Option<f64>,
}

/// Total time of each measured run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Horizon {
    Fixed(f64),
    /// `mΔv/|V′(x0)| + mΔv/|V′(x1)|` per particle.
    Analytic,
    /// Same estimate with `Δv = v_th`.
    Thermal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    /// Window half-width in velocity; `v_th` of the thermal packet if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_v: Option<f64>,
    pub horizon: Horizon,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub n_measurements: Vec<usize>,
    /// Measurement spacings; each becomes `N = round(T/Δt)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intervals: Vec<f64>,
    #[serde(default = "default_max_substep")]
    pub max_substep: f64,
    #[serde(default)]
    pub preparation: Preparation,
    #[serde(default = "default_true")]
    pub record_flux: bool,
    #[serde(default)]
    pub flux_at: f64,
    #[serde(default = "default_leak_tolerance")]
    pub leak_tolerance: f64,
    /// `N` values that are re-run with snapshots.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub snapshot_runs: Vec<usize>,
    /// Frames per snapshot run, not counting `t = 0`.
    #[serde(default = "default_frames")]
    pub snapshot_frames: usize,
    /// Adds an unmeasured run over this horizon for each particle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_horizon: Option<f64>,
}

fn default_max_substep() -> f64 {
    DEFAULT_MAX_SUBSTEP
}

fn default_leak_tolerance() -> f64 {
    DEFAULT_LEAK_TOLERANCE
}

fn default_true() -> bool {
    true
}

fn default_frames() -> usize {
    120
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub scheme: Scheme,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    pub grid: GridSpec,
    pub potential: PotentialSpec,
    pub particles: Vec<ParticleSpec>,
    pub packet: PacketSpec,
    pub measurement: MeasurementSpec,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Reads and validates a spec file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let spec = Self::from_toml(&text).map_err(|source| Error::Parse {
            path: path.to_path_buf(),
            source: Box::new(source),
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Spec(msg));
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        {
            return bad(format!("name `{}` must be a non-empty file-name-safe string", self.name));
        }
        if self.particles.is_empty() {
            return bad("at least one particle is required".into());
        }
        for p in &self.particles {
            if !(p.mass > 0.0 && p.mass.is_finite()) {
                return bad(format!("particle `{}` has non-positive mass", p.name));
            }
            if p.name.is_empty() || p.name.contains(['/', '\\']) {
                return bad(format!("particle name `{}` is not file-name-safe", p.name));
            }
        }
        let mut names: Vec<&str> = self.particles.iter().map(|p| p.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("particle names must be unique".into());
        }
        match (self.packet.delta_x, self.packet.thermal_a) {
            (Some(_), Some(_)) => {
                return bad("packet: give exactly one of `delta_x` and `thermal_a`, not both".into())
            }
            (None, None) => return bad("packet: one of `delta_x` or `thermal_a` is required".into()),
            _ => {}
        }
        let m = &self.measurement;
        if m.delta_v.is_none() && self.packet.thermal_a.is_none() {
            return bad("measurement.delta_v is required unless the packet is thermal".into());
        }
        if matches!(m.horizon, Horizon::Thermal) && self.packet.thermal_a.is_none() {
            return bad("horizon = \"thermal\" needs packet.thermal_a".into());
        }
        if let Horizon::Fixed(t) = m.horizon {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("horizon.fixed must be positive, got {t}"));
            }
        }
        match (m.n_measurements.is_empty(), m.intervals.is_empty()) {
            (false, false) => {
                return bad("measurement: give exactly one of `n_measurements` and `intervals`".into())
            }
            (true, true) if m.control_horizon.is_none() => {
                return bad("measurement: one of `n_measurements` or `intervals` is required".into())
            }
            _ => {}
        }
        if m.intervals.iter().any(|&dt| !(dt > 0.0 && dt.is_finite())) {
            return bad("measurement.intervals must be positive".into());
        }
        if !(m.max_substep > 0.0) {
            return bad("measurement.max_substep must be positive".into());
        }
        if let Some(t) = m.control_horizon {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("measurement.control_horizon must be positive, got {t}"));
            }
        }
        if self.grid.x_max <= self.grid.x_min || !self.grid.n.is_power_of_two() {
            return bad("grid: need x_max > x_min and a power-of-two n".into());
        }
        Ok(())
    }

    /// `Δx` for a particle.
    pub fn delta_x(&self, mass: f64) -> f64 {
        match (self.packet.delta_x, self.packet.thermal_a) {
            (Some(dx), _) => dx,
            (None, Some(a)) => 2.0 / (a * mass).sqrt(),
            (None, None) => f64::NAN,
        }
    }

    /// `Δv` for a particle.
    pub fn delta_v(&self, mass: f64) -> f64 {
        match (self.measurement.delta_v, self.packet.thermal_a) {
            (Some(dv), _) => dv,
            (None, Some(a)) => (a / mass).sqrt(),
            (None, None) => f64::NAN,
        }
    }
}
