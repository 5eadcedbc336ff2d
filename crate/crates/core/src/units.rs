//! Atomic-unit conversions used at report boundaries.

/// Metres per second in one atomic unit of velocity.
pub const VELOCITY_M_PER_S: f64 = 2.187_691_263_64e6;
/// Metres in one atomic unit of length (Bohr radius).
pub const LENGTH_M: f64 = 5.291_772_109_03e-11;
/// Seconds in one atomic unit of time.
pub const TIME_S: f64 = 2.418_884_326_585_7e-17;

/// Particle masses in electron masses.
pub mod mass {
    /// Electron.
    pub const ELECTRON: f64 = 1.0;
    /// Muon.
    pub const MUON: f64 = 206.767;
    /// Charged pion.
    pub const PION: f64 = 273.767;
    /// Proton.
    pub const PROTON: f64 = 1836.0;
}

/// Converts an atomic-unit velocity to m/s.
pub fn velocity_to_si(v: f64) -> f64 {
    v * VELOCITY_M_PER_S
}

/// Converts an atomic-unit length to metres.
pub fn length_to_si(x: f64) -> f64 {
    x * LENGTH_M
}

/// Converts an atomic-unit time to seconds.
pub fn time_to_si(t: f64) -> f64 {
    t * TIME_S
}
