//! Analytic potentials with exact derivatives, and turning-point search.


use crate::{Error, Result};

/// A static 1-D potential with an exact derivative.
pub trait Potential: Send + Sync {
    /// `V(x)` in hartree.
    fn value(&self, x: f64) -> f64;

    /// `V'(x) = dV/dx`.
    fn derivative(&self, x: f64) -> f64;

    /// Point about which the potential is exactly mirror-symmetric, if any.
    fn symmetry_center(&self) -> Option<f64> {
        None
    }

    /// The other classical turning point at the energy `V(x0)`.
    ///
    /// Symmetric potentials return the mirror image of `x0` exactly; others
    /// fall back to [`search_turning_point`].
    fn mirror_turning_point(&self, x0: f64) -> Result<f64> {
        if self.derivative(x0) == 0.0 {
            return Err(Error::Equilibrium { x0 });
        }
        match self.symmetry_center() {
            Some(c) => Ok(2.0 * c - x0),
            None => search_turning_point(self, x0),
        }
    }
}

impl<P: Potential + ?Sized> Potential for &P {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        (**self).derivative(x)
    }
    fn symmetry_center(&self) -> Option<f64> {
        (**self).symmetry_center()
    }
    fn mirror_turning_point(&self, x0: f64) -> Result<f64> {
        (**self).mirror_turning_point(x0)
    }
}

/// Sign of a Gaussian potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PotentialKind {
    /// `V = -v0·exp(-(x-c)²/xp²)`.
    Well,
    /// `V = +v0·exp(-(x-c)²/xp²)`.
    Barrier,
}

/// Gaussian well or barrier of depth/height `v0` and width `xp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPotential {
    kind: PotentialKind,
    v0: f64,
    xp: f64,
    center: f64,
}

impl GaussianPotential {
    /// Gaussian centred at the origin. Requires `v0 > 0`, `xp > 0`.
    pub fn new(kind: PotentialKind, v0: f64, xp: f64) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) {
            return Err(Error::InvalidParameter { name: "v0", value: v0 });
        }
        if !(xp > 0.0 && xp.is_finite()) {
            return Err(Error::InvalidParameter { name: "xp", value: xp });
        }
        Ok(Self {
            kind,
            v0,
            xp,
            center: 0.0,
        })
    }

    /// Well shorthand.
    pub fn well(v0: f64, xp: f64) -> Result<Self> {
        Self::new(PotentialKind::Well, v0, xp)
    }

    /// Barrier shorthand.
    pub fn barrier(v0: f64, xp: f64) -> Result<Self> {
        Self::new(PotentialKind::Barrier, v0, xp)
    }

    /// Moves the centre to `center`.
    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    /// Same shape with the opposite sign.
    pub fn flipped(self) -> Self {
        let kind = match self.kind {
            PotentialKind::Well => PotentialKind::Barrier,
            PotentialKind::Barrier => PotentialKind::Well,
        };
        Self { kind, ..self }
    }

    /// Well or barrier.
    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    /// Depth or height magnitude.
    pub fn v0(&self) -> f64 {
        self.v0
    }

    /// Width parameter.
    pub fn xp(&self) -> f64 {
        self.xp
    }

    /// Centre of the Gaussian.
    pub fn center(&self) -> f64 {
        self.center
    }

    fn signed_amplitude(&self) -> f64 {
        match self.kind {
            PotentialKind::Well => -self.v0,
            PotentialKind::Barrier => self.v0,
        }
    }
}

impl Potential for GaussianPotential {
    fn value(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.xp;
        self.signed_amplitude() * (-u * u).exp()
    }

    fn derivative(&self, x: f64) -> f64 {
        let s = x - self.center;
        let u = s / self.xp;
        self.signed_amplitude() * (-2.0 * s / (self.xp * self.xp)) * (-u * u).exp()
    }

    fn symmetry_center(&self) -> Option<f64> {
        Some(self.center)
    }
}

/// `V = ½·m·ω²·(x-c)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicPotential {
    /// Particle mass the frequency refers to.
    pub mass: f64,
    /// Angular frequency.
    pub omega: f64,
    /// Equilibrium position.
    pub center: f64,
}

impl Potential for HarmonicPotential {
    fn value(&self, x: f64) -> f64 {
        let s = x - self.center;
        0.5 * self.mass * self.omega * self.omega * s * s
    }

    fn derivative(&self, x: f64) -> f64 {
        self.mass * self.omega * self.omega * (x - self.center)
    }

    fn symmetry_center(&self) -> Option<f64> {
        Some(self.center)
    }
}

/// `V = 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FreeSpace;

impl Potential for FreeSpace {
    fn value(&self, _x: f64) -> f64 {
        0.0
    }

    fn derivative(&self, _x: f64) -> f64 {
        0.0
    }
}

const SEARCH_REACH: f64 = 1e7;

/// Finds the root of `V(x) = V(x0)` beyond the extremum nearest to `x0`.
///
/// Scans outward in both directions with geometrically growing steps for a
/// sign change of `V'`, bisects that extremum, then scans past it for the
/// energy crossing and bisects it to 1e-10.
pub fn search_turning_point<P: Potential + ?Sized>(potential: &P, x0: f64) -> Result<f64> {
    let d0 = potential.derivative(x0);
    if d0 == 0.0 {
        return Err(Error::Equilibrium { x0 });
    }
    let energy = potential.value(x0);
    let h0 = 1e-3 * x0.abs().max(1.0);

    let extremum = [1.0, -1.0]
        .into_iter()
        .filter_map(|dir| {
            let (a, b) = scan(x0, dir, h0, |x| potential.derivative(x).signum() != d0.signum())?;
            let x = bisect(a, b, |x| potential.derivative(x).signum() != d0.signum());
            Some((x, dir))
        })
        .min_by(|a, b| (a.0 - x0).abs().total_cmp(&(b.0 - x0).abs()));
    let (x_ext, dir) = extremum.ok_or(Error::NoSecondTurningPoint { x0 })?;

    let side = (potential.value(x_ext) - energy).signum();
    let crossed = |x: f64| (potential.value(x) - energy).signum() != side;
    let (a, b) = scan(x_ext, dir, h0, crossed).ok_or(Error::NoSecondTurningPoint { x0 })?;
    Ok(bisect(a, b, crossed))
}

/// Steps from `start` in direction `dir` until `hit` holds; returns the
/// bracketing pair (last miss, first hit).
fn scan(start: f64, dir: f64, h0: f64, hit: impl Fn(f64) -> bool) -> Option<(f64, f64)> {
    let mut prev = start;
    let mut h = h0;
    while (prev - start).abs() < SEARCH_REACH {
        let next = prev + dir * h;
        if hit(next) {
            return Some((prev, next));
        }
        prev = next;
        h *= 1.02;
    }
    None
}

fn bisect(mut miss: f64, mut hit_pt: f64, hit: impl Fn(f64) -> bool) -> f64 {
    while (hit_pt - miss).abs() > 1e-10 * (1.0 + hit_pt.abs()) {
        let mid = 0.5 * (miss + hit_pt);
        if mid == miss || mid == hit_pt {
            break;
        }
        if hit(mid) {
            hit_pt = mid;
        } else {
            miss = mid;
        }
    }
    0.5 * (miss + hit_pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::E;

    #[test]
    fn well_values() {
        let v = GaussianPotential::well(10.0, 30.0).unwrap();
        assert_eq!(v.value(0.0), -10.0);
        assert!((v.value(30.0) + 10.0 / E).abs() < 1e-12);
        assert!((v.value(30.0) + 3.6788).abs() < 1e-4);
        assert_eq!(v.value(1e6), 0.0);
        assert_eq!(v.value(-1e6), 0.0);
    }

    #[test]
    fn well_slopes() {
        let v = GaussianPotential::well(10.0, 30.0).unwrap();
        assert_eq!(v.derivative(0.0), 0.0);
        let expected = (20.0 * 30.0 / 900.0) / E;
        assert!((v.derivative(30.0) - expected).abs() < 1e-14);
        assert!((v.derivative(30.0) - 0.24526).abs() < 1e-5);
        let thermal = GaussianPotential::well(0.4396, 1000.0).unwrap();
        assert!((thermal.derivative(1414.2).abs() - 1.683e-4).abs() < 1e-7);
    }

    #[test]
    fn derivative_matches_central_differences() {
        let h = 1e-4;
        let shapes = [
            GaussianPotential::well(10.0, 30.0).unwrap(),
            GaussianPotential::barrier(3.0, 7.5).unwrap().with_center(2.0),
        ];
        for v in shapes {
            for i in 0..100 {
                let x = -60.0 + 1.2 * i as f64 + 0.013;
                let fd = (v.value(x + h) - v.value(x - h)) / (2.0 * h);
                let exact = v.derivative(x);
                let scale = exact.abs().max(1e-3 * v.v0() / v.xp());
                assert!((fd - exact).abs() < 1e-8 * scale.max(1e-300) + 1e-12, "x = {x}");
            }
        }
    }

    #[test]
    fn symmetric_mirrors() {
        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        assert_eq!(well.mirror_turning_point(30.0).unwrap(), -30.0);
        let barrier = GaussianPotential::barrier(10.0, 30.0).unwrap();
        assert_eq!(barrier.mirror_turning_point(-12.5).unwrap(), 12.5);
        let shifted = GaussianPotential::well(1.0, 1.0).unwrap().with_center(1.0);
        assert_eq!(shifted.mirror_turning_point(0.0).unwrap(), 2.0);
        assert!(matches!(
            well.mirror_turning_point(0.0),
            Err(Error::Equilibrium { .. })
        ));
    }

    #[test]
    fn searched_mirror_matches_symmetry() {
        let shifted = GaussianPotential::well(1.0, 1.0).unwrap().with_center(1.0);
        let x1 = search_turning_point(&shifted, 0.0).unwrap();
        assert!((x1 - 2.0).abs() < 1e-9);
        assert!((shifted.value(x1) - shifted.value(0.0)).abs() < 1e-9);

        let barrier = GaussianPotential::barrier(10.0, 30.0).unwrap();
        let x1 = search_turning_point(&barrier, -12.5).unwrap();
        assert!((x1 - 12.5).abs() < 1e-8);

        let well = GaussianPotential::well(10.0, 30.0).unwrap();
        let x1 = search_turning_point(&well, 30.0).unwrap();
        assert!((x1 + 30.0).abs() < 1e-8);
    }

    /// Two Gaussians of different widths: no mirror symmetry.
    struct Lopsided;

    impl Potential for Lopsided {
        fn value(&self, x: f64) -> f64 {
            -(-(x * x) / 4.0).exp() - 0.5 * (-(x - 1.0) * (x - 1.0)).exp()
        }
        fn derivative(&self, x: f64) -> f64 {
            0.5 * x * (-(x * x) / 4.0).exp() + (x - 1.0) * (-(x - 1.0) * (x - 1.0)).exp()
        }
    }

    #[test]
    fn asymmetric_mirror_has_equal_energy() {
        let v = Lopsided;
        for x0 in [2.0, 3.5, -2.0, -1.5] {
            let x1 = v.mirror_turning_point(x0).unwrap();
            assert!((v.value(x1) - v.value(x0)).abs() < 1e-9, "x0 = {x0}");
            assert!(x1.signum() != x0.signum());
        }
    }

    #[test]
    fn monotone_side_has_no_partner() {
        struct Ramp;
        impl Potential for Ramp {
            fn value(&self, x: f64) -> f64 {
                x
            }
            fn derivative(&self, _x: f64) -> f64 {
                1.0
            }
        }
        assert!(matches!(
            Ramp.mirror_turning_point(1.0),
            Err(Error::NoSecondTurningPoint { .. })
        ));
    }

    #[test]
    fn invalid_shapes() {
        assert!(GaussianPotential::well(0.0, 1.0).is_err());
        assert!(GaussianPotential::well(1.0, -1.0).is_err());
    }
}
