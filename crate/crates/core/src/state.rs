//! Wavefunction container and its observables.
//!
//! States may be unnormalized: the squared norm of a selectively measured
//! state is the survival probability itself. Observables that need a
//! normalized density divide by [`Wavefunction::norm2`] explicitly.

use alloc::borrow::Cow;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::Grid;
use crate::{Error, Result};

/// Which basis the amplitudes are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Representation {
    /// Amplitudes over `grid.x_axis()`.
    Position,
    /// Amplitudes over `grid.p_axis()` (natural ordering).
    Momentum,
}

/// Axis selector for width measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Position density.
    Position,
    /// Momentum density.
    Momentum,
}

/// Result of a 1/e² half-width measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfWidth {
    /// Half of the distance between the two 1/e² crossings.
    pub width: f64,
    /// False when the density exceeds the threshold in more than one
    /// contiguous region, or a crossing is missing at the axis edge.
    pub unimodal: bool,
}

/// Complex amplitude field on a [`Grid`].
#[derive(Debug, Clone)]
pub struct Wavefunction {
    grid: Arc<Grid>,
    amplitudes: Vec<Complex64>,
    representation: Representation,
}

impl Wavefunction {
    /// Wraps an amplitude buffer.
    pub fn new(
        grid: Arc<Grid>,
        amplitudes: Vec<Complex64>,
        representation: Representation,
    ) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: amplitudes.len(),
            });
        }
        Ok(Self {
            grid,
            amplitudes,
            representation,
        })
    }

    /// Position-space state from samples `f(x_j)`.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64) -> Complex64) -> Self {
        let amplitudes = grid.x_axis().iter().map(|&x| f(x)).collect();
        Self {
            grid,
            amplitudes,
            representation: Representation::Position,
        }
    }

    /// Normalized Gaussian `(2/πΔx²)^{1/4} exp[-((x-x0)/Δx)²] e^{i p0 x}`.
    ///
    /// `delta_x` is the half-width at which the probability density falls to
    /// 1/e² of its peak. The packet must be resolvable (`delta_x ≥ 4·dx`) and
    /// centred in the middle 80% of the grid.
    pub fn gaussian_packet(grid: Arc<Grid>, x0: f64, delta_x: f64, p0: f64) -> Result<Self> {
        if !(delta_x >= 4.0 * grid.dx()) {
            return Err(Error::UnresolvableWidth {
                delta_x,
                dx: grid.dx(),
            });
        }
        let margin = 0.1 * grid.length();
        if !(x0 >= grid.x_min() + margin && x0 <= grid.x_max() - margin) {
            return Err(Error::PacketNearBoundary { x0 });
        }
        let amp = (2.0 / (PI * delta_x * delta_x)).powf(0.25);
        let mut psi = Self::from_fn(grid, |x| {
            let u = (x - x0) / delta_x;
            let phase = p0 * x;
            Complex64::new(phase.cos(), phase.sin()) * (amp * (-u * u).exp())
        });
        let norm = psi.norm2();
        psi.scale(1.0 / norm.sqrt());
        Ok(psi)
    }

    /// The grid this state lives on.
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Current basis.
    pub fn representation(&self) -> Representation {
        self.representation
    }

    /// Raw amplitudes in the current representation.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Mutable raw amplitudes in the current representation.
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    /// Consumes the state, returning its amplitudes.
    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub(crate) fn require(&self, repr: Representation) -> Result<()> {
        if self.representation == repr {
            Ok(())
        } else {
            Err(Error::RepresentationMismatch {
                expected: repr,
                found: self.representation,
            })
        }
    }

    pub(crate) fn require_grid(&self, grid: &Grid) -> Result<()> {
        if core::ptr::eq(&*self.grid, grid) || *self.grid == *grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Transforms position amplitudes into momentum amplitudes.
    pub fn to_momentum(&mut self) -> Result<()> {
        self.require(Representation::Position)?;
        self.grid.forward_in_place(&mut self.amplitudes);
        self.representation = Representation::Momentum;
        Ok(())
    }

    /// Transforms momentum amplitudes into position amplitudes.
    pub fn to_position(&mut self) -> Result<()> {
        self.require(Representation::Momentum)?;
        self.grid.inverse_in_place(&mut self.amplitudes);
        self.representation = Representation::Position;
        Ok(())
    }

    /// Position amplitudes, transforming a copy if needed.
    pub fn position_amplitudes(&self) -> Cow<'_, [Complex64]> {
        match self.representation {
            Representation::Position => Cow::Borrowed(&self.amplitudes),
            Representation::Momentum => {
                let mut buf = self.amplitudes.clone();
                self.grid.inverse_in_place(&mut buf);
                Cow::Owned(buf)
            }
        }
    }

    /// Momentum amplitudes in natural ordering, transforming a copy if needed.
    pub fn momentum_amplitudes(&self) -> Cow<'_, [Complex64]> {
        match self.representation {
            Representation::Momentum => Cow::Borrowed(&self.amplitudes),
            Representation::Position => {
                let mut buf = self.amplitudes.clone();
                self.grid.forward_in_place(&mut buf);
                Cow::Owned(buf)
            }
        }
    }

    fn measure(&self) -> f64 {
        match self.representation {
            Representation::Position => self.grid.dx(),
            Representation::Momentum => self.grid.dp(),
        }
    }

    /// Squared norm `Σ|ψ|²` times the measure of the current representation.
    pub fn norm2(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.measure()
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scale(&mut self, factor: f64) {
        for c in &mut self.amplitudes {
            *c *= factor;
        }
    }

    /// `⟨self|other⟩` evaluated in position space.
    pub fn inner_product(&self, other: &Wavefunction) -> Result<Complex64> {
        other.require_grid(&self.grid)?;
        let a = self.position_amplitudes();
        let b = other.position_amplitudes();
        let sum: Complex64 = a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum();
        Ok(sum * self.grid.dx())
    }

    /// The state translated by `shift`, i.e. `ψ(x - shift)`, computed spectrally.
    pub fn translated(&self, shift: f64) -> Wavefunction {
        let mut buf = self.momentum_amplitudes().into_owned();
        for (c, &p) in buf.iter_mut().zip(self.grid.p_axis()) {
            let theta = -p * shift;
            *c *= Complex64::new(theta.cos(), theta.sin());
        }
        let mut out = Wavefunction {
            grid: self.grid.clone(),
            amplitudes: buf,
            representation: Representation::Momentum,
        };
        if self.representation == Representation::Position {
            out.grid.inverse_in_place(&mut out.amplitudes);
            out.representation = Representation::Position;
        }
        out
    }

    /// `⟨x⟩` on the normalized density.
    pub fn expectation_position(&self) -> Result<f64> {
        let density = self.probability_density();
        let total: f64 = density.iter().sum();
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let first: f64 = density
            .iter()
            .zip(self.grid.x_axis())
            .map(|(d, x)| d * x)
            .sum();
        Ok(first / total)
    }

    /// `⟨p⟩` on the normalized momentum density.
    pub fn expectation_momentum(&self) -> Result<f64> {
        let amps = self.momentum_amplitudes();
        let mut total = 0.0;
        let mut first = 0.0;
        for (c, &p) in amps.iter().zip(self.grid.p_axis()) {
            let d = c.norm_sqr();
            total += d;
            first += d * p;
        }
        if total <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(first / total)
    }

    /// `|ψ(x_j)|²` over the position axis.
    pub fn probability_density(&self) -> Vec<f64> {
        self.position_amplitudes().iter().map(|c| c.norm_sqr()).collect()
    }

    /// `|ψ̂(p)|²` over the ascending momentum axis ([`Grid::sorted_momenta`]).
    pub fn momentum_density(&self) -> Vec<f64> {
        let amps = self.momentum_amplitudes();
        self.grid
            .sorted_momentum_order()
            .map(|k| amps[k].norm_sqr())
            .collect()
    }

    /// `∫_a^b |ψ|² dx`.
    ///
    /// Each lattice point owns the cell `[x_j - dx/2, x_j + dx/2]` and is
    /// weighted by the fraction of that cell inside `[a, b]`. Bounds at or
    /// beyond the grid edges (including infinities) mean "to the edge", so
    /// `region_probability(x_min, x_max)` equals the norm.
    pub fn region_probability(&self, a: f64, b: f64) -> f64 {
        let density = self.probability_density();
        region_integral(&self.grid, &density, a, b)
    }

    /// Half-width at which the density falls to 1/e² of its peak.
    pub fn half_width_1e2(&self, axis: Axis) -> HalfWidth {
        match axis {
            Axis::Position => half_width(self.grid.x_axis(), &self.probability_density()),
            Axis::Momentum => half_width(&self.grid.sorted_momenta(), &self.momentum_density()),
        }
    }
}

/// Cell-overlap integral of a lattice density over `[a, b]`.
pub(crate) fn region_integral(grid: &Grid, density: &[f64], a: f64, b: f64) -> f64 {
    if !(a < b) {
        return 0.0;
    }
    let dx = grid.dx();
    let lo = if a <= grid.x_min() { f64::NEG_INFINITY } else { a };
    let hi = if b >= grid.x_max() { f64::INFINITY } else { b };
    density
        .iter()
        .zip(grid.x_axis())
        .map(|(d, &x)| {
            let (left, right) = (x - 0.5 * dx, x + 0.5 * dx);
            if left >= lo && right <= hi {
                return d * dx;
            }
            let overlap = right.min(hi) - left.max(lo);
            if overlap > 0.0 {
                d * overlap
            } else {
                0.0
            }
        })
        .sum()
}

fn half_width(axis: &[f64], density: &[f64]) -> HalfWidth {
    let (peak_idx, peak) = density
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, d)| if d > best.1 { (i, d) } else { best });
    if !(peak > 0.0) {
        return HalfWidth {
            width: f64::NAN,
            unimodal: false,
        };
    }
    let threshold = peak * (-2.0f64).exp();
    let n = density.len();
    let mut unimodal = true;

    let mut r = peak_idx;
    while r + 1 < n && density[r + 1] >= threshold {
        r += 1;
    }
    let right = if r + 1 < n {
        crossing(axis[r], axis[r + 1], density[r], density[r + 1], threshold)
    } else {
        unimodal = false;
        axis[n - 1]
    };
    let mut l = peak_idx;
    while l > 0 && density[l - 1] >= threshold {
        l -= 1;
    }
    let left = if l > 0 {
        crossing(axis[l], axis[l - 1], density[l], density[l - 1], threshold)
    } else {
        unimodal = false;
        axis[0]
    };

    let above = density.iter().map(|&d| d >= threshold);
    let runs = above
        .clone()
        .zip(core::iter::once(false).chain(above))
        .filter(|&(now, before)| now && !before)
        .count();
    if runs != 1 {
        unimodal = false;
    }
    HalfWidth {
        width: 0.5 * (right - left),
        unimodal,
    }
}

/// Linear interpolation of the point between `x_in` (at or above the
/// threshold) and `x_out` (below it) where the density equals the threshold.
fn crossing(x_in: f64, x_out: f64, d_in: f64, d_out: f64, threshold: f64) -> f64 {
    x_in + (d_in - threshold) / (d_in - d_out) * (x_out - x_in)
}
