//! Uniform periodic position lattice and its conjugate momentum lattice.
//!
//! The discrete transform pair is normalized so that both representations
//! carry the same squared norm with their own measure:
//!
//! ```text
//! ψ̂_k = dx/√(2π) · Σ_j ψ_j e^{-i p_k x_j}
//! ψ_j = dp/√(2π) · Σ_k ψ̂_k e^{+i p_k x_j}
//! Σ_j |ψ_j|² dx = Σ_k |ψ̂_k|² dp
//! ```
//!
//! With this choice `ψ̂_k` samples the continuum Fourier transform
//! `(2π)^{-1/2} ∫ ψ(x) e^{-ipx} dx` at `p_k`. Momenta are kept in natural
//! transform ordering: `k·dp` for `k < n/2`, then `(k-n)·dp`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::Radix2Fft;
use crate::{Error, Result};

/// Smallest admissible point count.
pub const MIN_POINTS: usize = 8;

/// Periodic 1-D lattice with paired momentum lattice and transforms.
#[derive(Debug, Clone)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
    dx: f64,
    dp: f64,
    x_axis: Vec<f64>,
    p_axis: Vec<f64>,
    fft: Radix2Fft,
    /// `e^{-i p_k x_min}`, the offset phase of the forward transform.
    origin_phase: Vec<Complex64>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.x_min == other.x_min && self.x_max == other.x_max
    }
}

impl Grid {
    /// Builds the lattice `x_j = x_min + j·dx`, `j = 0..n`, with `dx = (x_max - x_min)/n`.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::InvalidBounds { x_min, x_max });
        }
        if n < MIN_POINTS || !n.is_power_of_two() {
            return Err(Error::InvalidPointCount(n));
        }
        let fft = Radix2Fft::new(n).ok_or(Error::InvalidPointCount(n))?;
        let length = x_max - x_min;
        let dx = length / n as f64;
        let dp = 2.0 * PI / length;
        let x_axis = (0..n).map(|j| x_min + j as f64 * dx).collect();
        let p_axis: Vec<f64> = (0..n)
            .map(|k| {
                let k = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
                k * dp
            })
            .collect();
        let origin_phase = p_axis
            .iter()
            .map(|&p| {
                let theta = -p * x_min;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Ok(Self {
            x_min,
            x_max,
            n,
            dx,
            dp,
            x_axis,
            p_axis,
            fft,
            origin_phase,
        })
    }

    /// Lower edge (a lattice point).
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Upper edge (identified with `x_min` by periodicity; not a lattice point).
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Position spacing.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Momentum spacing `2π/L`.
    pub fn dp(&self) -> f64 {
        self.dp
    }

    /// Period `x_max - x_min`.
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Largest representable momentum magnitude, `π/dx`.
    pub fn p_max(&self) -> f64 {
        PI / self.dx
    }

    /// Lattice positions.
    pub fn x_axis(&self) -> &[f64] {
        &self.x_axis
    }

    /// Lattice momenta in natural transform ordering.
    pub fn p_axis(&self) -> &[f64] {
        &self.p_axis
    }

    /// Index permutation producing ascending momenta from natural ordering.
    pub fn sorted_momentum_order(&self) -> impl Iterator<Item = usize> + '_ {
        (self.n / 2..self.n).chain(0..self.n / 2)
    }

    /// Momenta in ascending order, from `-n/2·dp` to `(n/2-1)·dp`.
    pub fn sorted_momenta(&self) -> Vec<f64> {
        self.sorted_momentum_order().map(|k| self.p_axis[k]).collect()
    }

    /// Index of the lattice point nearest to `x`, with periodic wrapping.
    pub fn nearest_index(&self, x: f64) -> usize {
        let u = ((x - self.x_min) / self.dx).round();
        let n = self.n as f64;
        (u - n * (u / n).floor()) as usize % self.n
    }

    /// Forward transform of position amplitudes into momentum amplitudes.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.fft.forward(buf);
        let scale = self.dx / (2.0 * PI).sqrt();
        for (c, phase) in buf.iter_mut().zip(&self.origin_phase) {
            *c *= phase * scale;
        }
    }

    /// Inverse of [`Grid::forward_in_place`].
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        let scale = self.dp / (2.0 * PI).sqrt();
        for (c, phase) in buf.iter_mut().zip(&self.origin_phase) {
            *c *= phase.conj() * scale;
        }
        self.fft.inverse(buf);
    }

    /// Converts a natural-order momentum amplitude into the plain DFT
    /// coefficient `c_k` with `ψ_j = dp/√(2π) Σ_k c_k e^{i p_k (x_j - x_min)}`.
    pub(crate) fn dft_coefficient(&self, k: usize, amp: Complex64) -> Complex64 {
        amp * self.origin_phase[k].conj()
    }
}
