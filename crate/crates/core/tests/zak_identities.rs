use std::f64::consts::PI;

use gabor_rp_core::constants::{assemble_constants, ConstantsConfig};
use gabor_rp_core::zak::*;
use gabor_rp_core::{Complex64, Error, Side, WindowSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog() -> Vec<WindowSpec> {
    vec![
        WindowSpec::indicator(),
        WindowSpec::gaussian(1.0).unwrap(),
        WindowSpec::gaussian(0.6).unwrap(),
        WindowSpec::hermite(0).unwrap(),
        WindowSpec::hermite(1).unwrap(),
        WindowSpec::hermite(3).unwrap(),
        WindowSpec::bspline(0).unwrap(),
        WindowSpec::bspline(1).unwrap(),
        WindowSpec::bspline(2).unwrap(),
        WindowSpec::bspline(3).unwrap(),
        WindowSpec::totally_positive(0.0, 0.0, vec![0.5, -0.4, 0.3], 1.0).unwrap(),
        WindowSpec::totally_positive(0.4, 0.1, vec![0.4, -0.3], 1.0).unwrap(),
    ]
}

/// Independent oracle: plain series over a fixed wide index range.
fn direct_series(spec: &WindowSpec, s: f64, xi: f64, range: i64) -> Complex64 {
    (-range..=range)
        .map(|k| {
            let v = spec.eval_time(s + k as f64).unwrap();
            Complex64::from_polar(v, 2.0 * PI * k as f64 * xi)
        })
        .sum()
}

#[test]
fn quasi_periodicity_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for spec in catalog() {
        for _ in 0..100 {
            let t: f64 = rng.gen();
            let xi: f64 = rng.gen();
            let z = zak_point(&spec, 0.0, t, xi, 1e-13).unwrap();
            let shifted_t = zak_point(&spec, 0.0, t + 1.0, xi, 1e-13).unwrap();
            let shifted_xi = zak_point(&spec, 0.0, t, xi + 1.0, 1e-13).unwrap();
            let phase = Complex64::from_polar(1.0, -2.0 * PI * xi);
            assert!((shifted_t - phase * z).norm() <= 1e-12, "{spec} t={t} xi={xi}");
            assert!((shifted_xi - z).norm() <= 1e-12, "{spec} t={t} xi={xi}");
        }
    }
}

#[test]
fn grid_quasi_periodicity_against_direct_series() {
    let spec = WindowSpec::bspline(2).unwrap();
    let g = zak_grid(&spec, 0.0, 16, 16, 1e-12).unwrap();
    for j in 0..16 {
        for s in 0..16 {
            let t = j as f64 / 16.0;
            let xi = s as f64 / 16.0;
            let shifted = direct_series(&spec, t + 1.0, xi, 8);
            let expect = Complex64::from_polar(1.0, -2.0 * PI * xi) * g.get(j, s);
            assert!((shifted - expect).norm() <= 1e-12);
        }
    }
}

#[test]
fn gaussian_zak_zero_at_half_half() {
    let g = WindowSpec::gaussian(1.0).unwrap();
    let z = zak_point(&g, 0.0, 0.5, 0.5, 1e-12).unwrap();
    assert!(z.norm() <= 1e-6);
    // Dense oracle over |k| ≤ 40 confirms the cancellation.
    assert!(direct_series(&g, 0.5, 0.5, 40).norm() <= 1e-15);
}

#[test]
fn shifted_grid_matches_direct_series_and_resampling() {
    let spec = WindowSpec::bspline(2).unwrap();
    let shifted = zak_grid(&spec, 0.25, 256, 256, 1e-10).unwrap();
    let base = zak_grid(&spec, 0.0, 256, 256, 1e-10).unwrap();
    for j in (0..256).step_by(7) {
        for s in (0..256).step_by(5) {
            let t = j as f64 / 256.0;
            let xi = s as f64 / 256.0;
            let oracle = direct_series(&spec, t - 0.25, xi, 6);
            assert!((shifted.get(j, s) - oracle).norm() <= 1e-12);
            // t − 1/4 lands on grid row j − 64; wrap with quasi-periodicity.
            let resampled = if j >= 64 {
                base.get(j - 64, s)
            } else {
                Complex64::from_polar(1.0, 2.0 * PI * xi) * base.get(j + 192, s)
            };
            assert!((shifted.get(j, s) - resampled).norm() <= 1e-12);
        }
    }
}

#[test]
fn fft_and_direct_sweeps_agree_across_catalog() {
    for spec in catalog() {
        let a = zak_grid_with(&spec, 0.37, 16, 64, 1e-12, Sweep::Fft).unwrap();
        let b = zak_grid_with(&spec, 0.37, 16, 64, 1e-12, Sweep::Direct).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).norm() <= 1e-12, "{spec}");
        }
    }
}

#[test]
fn unitarity_defect_examples() {
    let d = zak_unitarity_defect(&WindowSpec::indicator(), 64, 64, 1e-12).unwrap();
    assert!(d <= 1e-12);
    for spec in [WindowSpec::gaussian(1.0).unwrap(), WindowSpec::bspline(1).unwrap()] {
        assert!(zak_unitarity_defect(&spec, 256, 256, 1e-10).unwrap() <= 1e-6, "{spec}");
    }
}

#[test]
fn unitarity_converges_under_refinement() {
    // Oracle: the rectangle-rule energy of the Zak grid approaches the exact
    // norm ‖β¹‖² = 2/3 as the grid is refined.
    let spec = WindowSpec::bspline(1).unwrap();
    let mut last = f64::INFINITY;
    for n in [32usize, 64, 128, 256] {
        let e = zak_grid(&spec, 0.0, n, n, 1e-12).unwrap().energy();
        let err = (e - 2.0 / 3.0).abs();
        assert!(err < last);
        last = err;
    }
    assert!(last < 1e-5);
}

#[test]
fn switch_identity_against_pointwise_oracle() {
    // Independent summation of both sides at random points.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [
        WindowSpec::gaussian(1.0).unwrap(),
        WindowSpec::bspline(2).unwrap(),
        WindowSpec::hermite(1).unwrap(),
    ] {
        for _ in 0..10 {
            let t: f64 = rng.gen();
            let xi: f64 = rng.gen();
            let lhs = direct_series(&spec, t, xi, 10);
            let rhs: Complex64 = (-30_000i64..=30_000)
                .map(|n| spec.eval_freq(n as f64 - xi) * Complex64::from_polar(1.0, 2.0 * PI * n as f64 * t))
                .sum::<Complex64>()
                * Complex64::from_polar(1.0, -2.0 * PI * t * xi);
            assert!((lhs - rhs).norm() <= 1e-6, "{spec} t={t} xi={xi}");
        }
        assert!(zak_switch_defect(&spec, 128, 128, 1e-10).unwrap() <= 1e-6, "{spec}");
    }
}

#[test]
fn switch_identity_refused_without_summable_spectrum() {
    assert!(matches!(
        zak_switch_defect(&WindowSpec::indicator(), 16, 16, 1e-10),
        Err(Error::Uncertifiable(_))
    ));
}

#[test]
fn covariance_examples() {
    let g = WindowSpec::gaussian(1.0).unwrap();
    assert_eq!(covariance_defect(&g, 0, 0, 64, 64).unwrap(), 0.0);
    assert!(covariance_defect(&g, 1, 0, 64, 64).unwrap() <= 1e-10);
    let b = WindowSpec::bspline(1).unwrap();
    assert!(covariance_defect(&b, 0, 2, 64, 64).unwrap() <= 1e-12);
}

#[test]
fn signal_round_trips() {
    let chi = SignalGrid::from_fn(16, 2, |t| Complex64::new(if (0.0..1.0).contains(&t) { 1.0 } else { 0.0 }, 0.0)).unwrap();
    let z = zak_of_signal(&chi, 8).unwrap();
    assert!(z.values.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));

    let gauss = SignalGrid::from_fn(32, 8, |t| Complex64::new((-PI * t * t).exp(), 0.0)).unwrap();
    let back = inverse_zak(&zak_of_signal(&gauss, 16).unwrap(), 8).unwrap();
    let err = back.max_abs_diff(&gauss).unwrap();
    assert!(err <= 1e-10 * gauss.norm_sq().sqrt());
}

#[test]
fn zak_modulus_bounded_by_k() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for spec in [
        WindowSpec::gaussian(1.0).unwrap(),
        WindowSpec::bspline(2).unwrap(),
        WindowSpec::hermite(1).unwrap(),
    ] {
        let k = assemble_constants(&spec, &ConstantsConfig::default()).unwrap().k();
        for _ in 0..20 {
            let x: f64 = rng.gen();
            let g = zak_grid(&spec, x, 64, 64, 1e-12).unwrap();
            assert!(g.max_abs() <= k + 1e-9, "{spec} x={x}");
        }
    }
}

#[test]
fn truncation_error_is_reported() {
    let g = zak_grid(&WindowSpec::gaussian(1.0).unwrap(), 0.0, 8, 8, 1e-10).unwrap();
    assert!(g.truncation_error <= 1e-10);
    let tail = WindowSpec::gaussian(1.0).unwrap().tail_bound(Side::Time, g.radius).unwrap();
    assert_eq!(tail, g.truncation_error);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_signal_round_trip(
        samples in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * 3 * 8),
    ) {
        let f = SignalGrid::new(8, 3, samples.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let back = inverse_zak(&zak_of_signal(&f, 8).unwrap(), 3).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-12);
    }

    #[test]
    fn covariance_holds_for_random_shifts(k in -3i64..=3, n in -3i64..=3, which in 0usize..4) {
        let spec = [
            WindowSpec::gaussian(1.0).unwrap(),
            WindowSpec::bspline(2).unwrap(),
            WindowSpec::hermite(2).unwrap(),
            WindowSpec::totally_positive(0.0, 0.0, vec![0.5, -0.4, 0.3], 1.0).unwrap(),
        ][which].clone();
        prop_assert!(covariance_defect(&spec, k, n, 16, 16).unwrap() <= 1e-10);
    }

    #[test]
    fn zak_grid_rows_obey_unitarity(x in 0.0f64..1.0) {
        // For each row, discrete Parseval in ξ gives Σ_k |g(t−x+k)|².
        let spec = WindowSpec::bspline(3).unwrap();
        let g = zak_grid(&spec, x, 8, 16, 1e-12).unwrap();
        for j in 0..8 {
            let t = j as f64 / 8.0;
            let row: f64 = g.row(j).iter().map(|z| z.norm_sqr()).sum::<f64>() / 16.0;
            let direct: f64 = (-6..=6).map(|k| spec.eval_time(t - x + k as f64).unwrap().powi(2)).sum();
            prop_assert!((row - direct).abs() <= 1e-12);
        }
    }
}
