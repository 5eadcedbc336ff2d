//! Split-step spectral propagation of the 1-D Schrödinger equation interleaved
//! with selective momentum-window measurements (quantum Zeno dynamics), plus
//! the observables and diagnostics used to characterise the resulting
//! teleportation of a particle between the turning points of a potential.
//!
//! Everything is in atomic units (ħ = 1, electron mass = 1). The crate is
//! `no_std` and only needs `alloc`; IO, file formats and the command line live
//! in the companion `qzd` crate.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
mod error;
pub mod fft;
pub mod grid;
pub mod potential;
pub mod propagator;
pub mod state;
pub mod units;
pub mod zeno;

pub use error::Error;
pub use grid::Grid;
pub use num_complex::Complex64;
pub use potential::{GaussianPotential, HarmonicPotential, Potential, PotentialKind};
pub use propagator::StepPlan;
pub use state::{Representation, Wavefunction};
pub use zeno::{MomentumWindow, QzdConfig, RunRecord};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
