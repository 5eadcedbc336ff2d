use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use proptest::prelude::*;
use qzd_core::potential::GaussianPotential;
use qzd_core::state::Axis;
use qzd_core::{Complex64, Grid, MomentumWindow, Potential, Representation, Wavefunction};

fn random_field(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

fn grid_and_field() -> impl Strategy<Value = (Arc<Grid>, Vec<Complex64>)> {
    (3u32..11, -50.0f64..0.0, 1.0f64..80.0).prop_flat_map(|(log2n, x_min, len)| {
        let n = 1usize << log2n;
        let grid = Arc::new(Grid::new(x_min, x_min + len, n).unwrap());
        random_field(n).prop_map(move |f| (grid.clone(), f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_and_roundtrip((grid, field) in grid_and_field()) {
        let psi = Wavefunction::new(grid.clone(), field.clone(), Representation::Position).unwrap();
        let n_x = psi.norm2();
        let mut hat = psi.clone();
        hat.to_momentum().unwrap();
        let n_p = hat.norm2();
        prop_assert!((n_x - n_p).abs() <= 1e-12 * n_x);
        hat.to_position().unwrap();
        let scale = field.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in hat.amplitudes().iter().zip(&field) {
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn full_region_is_the_norm((grid, field) in grid_and_field()) {
        let psi = Wavefunction::new(grid.clone(), field, Representation::Position).unwrap();
        let full = psi.region_probability(grid.x_min(), grid.x_max());
        prop_assert!((full - psi.norm2()).abs() <= 1e-12 * psi.norm2());
        prop_assert!(psi.probability_density().iter().all(|&d| d >= 0.0));
        prop_assert!(psi.momentum_density().iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn projection_is_idempotent((grid, field) in grid_and_field(), frac in 0.1f64..0.9) {
        let dv = frac * grid.p_max();
        prop_assume!(dv > 2.0 * grid.dp());
        let window = MomentumWindow::new(grid.clone(), 1.0, dv).unwrap();
        let mut psi = Wavefunction::new(grid, field, Representation::Momentum).unwrap();
        let p1 = window.project(&mut psi).unwrap();
        prop_assume!(p1 > 0.0);
        let once = psi.amplitudes().to_vec();
        let p2 = window.project(&mut psi).unwrap();
        prop_assert_eq!(once.as_slice(), psi.amplitudes());
        prop_assert!((p2 - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn minimal_packets_saturate_uncertainty(delta_x in 1.0f64..6.0, x0 in -40.0f64..40.0) {
        let grid = Arc::new(Grid::new(-100.0, 100.0, 4096).unwrap());
        let psi = Wavefunction::gaussian_packet(grid, x0, delta_x, 0.0).unwrap();
        let wx = psi.half_width_1e2(Axis::Position);
        let wp = psi.half_width_1e2(Axis::Momentum);
        prop_assert!(wx.unimodal && wp.unimodal);
        prop_assert!((wx.width * wp.width - 2.0).abs() < 0.04);
        prop_assert!((psi.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_point_has_equal_energy(x0 in 1.0f64..80.0, v0 in 0.5f64..20.0, xp in 5.0f64..50.0) {
        let well = GaussianPotential::well(v0, xp).unwrap();
        let x1 = qzd_core::potential::search_turning_point(&well, x0).unwrap();
        prop_assert!((well.value(x1) - well.value(x0)).abs() < 1e-9);
        prop_assert!((well.value(well.mirror_turning_point(x0).unwrap()) - well.value(x0)).abs() < 1e-9);
    }
}

/// Composite Simpson rule, used as an independent quadrature oracle.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

#[test]
fn windowed_fraction_matches_continuum_quadrature() {
    let grid = Arc::new(Grid::new(-200.0, 200.0, 4096).unwrap());
    let delta_x = 2.0;
    let delta_p = 2.0 / delta_x;
    // Place the cut midway between modes so the lattice sum is a midpoint rule.
    let p_cut = 60.5 * grid.dp();
    let window = MomentumWindow::new(grid.clone(), 1.0, p_cut).unwrap();
    let mut psi = Wavefunction::gaussian_packet(grid, 3.0, delta_x, 0.0).unwrap();
    let kept = window.project(&mut psi).unwrap();

    // Continuum momentum density of the minimal packet.
    let rho = |p: f64| (2.0 / (PI * delta_p * delta_p)).sqrt() * (-2.0 * p * p / (delta_p * delta_p)).exp();
    let total = simpson(rho, -12.0, 12.0, 20_000);
    let inside = simpson(rho, -p_cut, p_cut, 20_000);
    // Leading midpoint-rule term: -(h²/24) [f'(b) - f'(a)].
    let slope = |p: f64| -4.0 * p / (delta_p * delta_p) * rho(p);
    let h = window.grid().dp();
    let midpoint = inside - h * h / 24.0 * (slope(p_cut) - slope(-p_cut));
    assert!((total - 1.0).abs() < 1e-12);
    assert!((kept - midpoint).abs() < 1e-8, "kept {kept} vs oracle {midpoint}");
    assert!(kept > 0.5 && kept < 0.99);
}

#[test]
fn momentum_amplitudes_sample_the_continuum_transform() {
    let grid = Arc::new(Grid::new(-150.0, 150.0, 2048).unwrap());
    let psi = Wavefunction::gaussian_packet(grid.clone(), 30.0, SQRT_2, 0.0).unwrap();
    let hat = psi.momentum_amplitudes();
    // FT of (1/π)^{1/4} e^{-(x-30)²/2} is (1/π)^{1/4} e^{-p²/2} e^{-30ip}.
    for (c, &p) in hat.iter().zip(grid.p_axis()) {
        let expected = Complex64::from_polar((1.0 / PI).powf(0.25) * (-p * p / 2.0).exp(), -30.0 * p);
        assert!((c - expected).norm() < 1e-12);
    }
}
