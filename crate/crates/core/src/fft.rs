//! In-place iterative radix-2 FFT for power-of-two lengths.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Precomputed twiddles and bit-reversal table for one transform length.
#[derive(Debug, Clone)]
pub struct Radix2Fft {
    n: usize,
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2Fft {
    /// Plans a transform of length `n`. Returns `None` unless `n` is a power of two.
    pub fn new(n: usize) -> Option<Self> {
        if n == 0 || !n.is_power_of_two() || n > u32::MAX as usize {
            return None;
        }
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (32 - bits) })
            .collect();
        let twiddles = (0..n / 2)
            .map(|k| {
                let theta = -2.0 * PI * k as f64 / n as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Some(Self { n, twiddles, bitrev })
    }

    /// Transform length.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false; plans have at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `X_k = Σ_j x_j e^{-2πi jk/n}`, unnormalized.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, false);
    }

    /// `x_j = Σ_k X_k e^{+2πi jk/n}`, unnormalized.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, true);
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        assert_eq!(buf.len(), self.n, "buffer length does not match FFT plan");
        for (i, &r) in self.bitrev.iter().enumerate() {
            let r = r as usize;
            if i < r {
                buf.swap(i, r);
            }
        }
        let mut len = 2;
        while len <= self.n {
            let half = len / 2;
            let stride = self.n / len;
            for chunk in buf.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for (k, (a, b)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let t = *b * w;
                    *b = *a - t;
                    *a += t;
                }
            }
            len <<= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (j, &v)| {
                    let theta = sign * 2.0 * PI * (j * k % n) as f64 / n as f64;
                    acc + v * Complex64::new(theta.cos(), theta.sin())
                })
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| {
                let t = j as f64;
                Complex64::new((0.37 * t).sin() + 0.1 * t, (1.3 * t).cos() - 0.05 * t * t)
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 4, 8, 64, 256] {
            let x = sample(n);
            let mut fwd = x.clone();
            let plan = Radix2Fft::new(n).unwrap();
            plan.forward(&mut fwd);
            let oracle = naive_dft(&x, -1.0);
            let scale = oracle.iter().map(|c| c.norm()).fold(1.0, f64::max);
            for (a, b) in fwd.iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-11 * scale, "n = {n}");
            }
            let mut inv = x.clone();
            plan.inverse(&mut inv);
            let oracle = naive_dft(&x, 1.0);
            for (a, b) in inv.iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-11 * scale, "n = {n}");
            }
        }
    }

    #[test]
    fn rejects_non_power_of_two() {
        assert!(Radix2Fft::new(0).is_none());
        assert!(Radix2Fft::new(7).is_none());
        assert!(Radix2Fft::new(12).is_none());
    }

    #[test]
    fn roundtrip_scales_by_n() {
        let n = 1024;
        let x = sample(n);
        let mut y = x.clone();
        let plan = Radix2Fft::new(n).unwrap();
        plan.forward(&mut y);
        plan.inverse(&mut y);
        let scale = x.iter().map(|c| c.norm()).fold(1.0, f64::max);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b / n as f64).norm() < 1e-12 * scale);
        }
    }
}
