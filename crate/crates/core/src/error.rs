use core::fmt;

use crate::state::Representation;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Grid point count is not a power of two, or is too small.
    InvalidPointCount(usize),
    /// `x_max` does not exceed `x_min`, or a bound is not finite.
    InvalidBounds {
        /// Lower bound.
        x_min: f64,
        /// Upper bound.
        x_max: f64,
    },
    /// A state was in the wrong representation for the requested operation.
    RepresentationMismatch {
        /// Representation the operation needs.
        expected: Representation,
        /// Representation the state is in.
        found: Representation,
    },
    /// Two objects live on different grids.
    GridMismatch,
    /// Amplitude buffer length does not match the grid.
    LengthMismatch {
        /// Grid point count.
        expected: usize,
        /// Buffer length supplied.
        found: usize,
    },
    /// Packet width is below four grid spacings.
    UnresolvableWidth {
        /// Requested half-width.
        delta_x: f64,
        /// Grid spacing.
        dx: f64,
    },
    /// Packet centre lies outside the central 80% of the grid.
    PacketNearBoundary {
        /// Requested centre.
        x0: f64,
    },
    /// The state has zero norm.
    ZeroNorm,
    /// Momentum window keeps too few modes (needs `m·Δv > 2·dp`).
    UnresolvableWindow {
        /// Window half-width in momentum.
        p_cut: f64,
        /// Momentum spacing.
        dp: f64,
    },
    /// The point is an equilibrium (`V'(x0) = 0`): no teleportation.
    Equilibrium {
        /// Offending position.
        x0: f64,
    },
    /// No second turning point exists on the far side of an extremum.
    NoSecondTurningPoint {
        /// Starting turning point.
        x0: f64,
    },
    /// Probability reached the periodic boundary strips.
    BoundaryLeak {
        /// Time at which the leak was detected.
        t: f64,
        /// Probability in the boundary strips.
        fraction: f64,
    },
    /// Templates at `±x0` overlap too much to separate the two sites.
    OverlappingTemplates {
        /// Magnitude of the template inner product.
        overlap: f64,
    },
    /// A record lacks a series needed by a diagnostic.
    MissingSeries(&'static str),
    /// A scalar argument violates its precondition.
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// Supplied value.
        value: f64,
    },
    /// The initial state handed to a run is not normalized.
    NotNormalized {
        /// Its squared norm.
        norm: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPointCount(n) => {
                write!(f, "point count {n} is not a power of two >= 8")
            }
            Error::InvalidBounds { x_min, x_max } => {
                write!(f, "invalid grid bounds [{x_min}, {x_max}]")
            }
            Error::RepresentationMismatch { expected, found } => {
                write!(f, "expected {expected:?} representation, found {found:?}")
            }
            Error::GridMismatch => f.write_str("objects live on different grids"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "buffer has {found} points, grid has {expected}")
            }
            Error::UnresolvableWidth { delta_x, dx } => {
                write!(f, "packet width {delta_x} is below 4 grid spacings (dx = {dx})")
            }
            Error::PacketNearBoundary { x0 } => {
                write!(f, "packet centre {x0} is outside the central 80% of the grid")
            }
            Error::ZeroNorm => f.write_str("state has zero norm"),
            Error::UnresolvableWindow { p_cut, dp } => {
                write!(f, "momentum window |p| < {p_cut} is unresolvable with dp = {dp}")
            }
            Error::Equilibrium { x0 } => {
                write!(f, "x0 = {x0} is an equilibrium point; no teleportation occurs")
            }
            Error::NoSecondTurningPoint { x0 } => {
                write!(f, "no second turning point found for x0 = {x0}")
            }
            Error::BoundaryLeak { t, fraction } => write!(
                f,
                "boundary leak at t = {t}: {fraction:e} probability sits in the edge strips"
            ),
            Error::OverlappingTemplates { overlap } => {
                write!(f, "site templates overlap ({overlap:e})")
            }
            Error::MissingSeries(name) => write!(f, "record is missing the {name} series"),
            Error::InvalidParameter { name, value } => write!(f, "invalid {name} = {value}"),
            Error::NotNormalized { norm } => {
                write!(f, "initial state is not normalized (norm2 = {norm})")
            }
        }
    }
}

impl core::error::Error for Error {}
