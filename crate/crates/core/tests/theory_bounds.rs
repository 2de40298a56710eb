use gabor_rp_core::theory::*;
use gabor_rp_core::{Error, WindowConstants};
use proptest::prelude::*;

fn reference() -> WindowConstants {
    WindowConstants::from_values(1.0, 1.0, 1.0 / 3.0, 1.0, 10.0).unwrap()
}

#[test]
fn reference_threshold_by_hand() {
    // 4CK/q = 120, 2·121²/0.1 = 292820, (γ − q/2)² = 1/144.
    let hand = 72.0 * 292_820f64.ln();
    let r = sample_complexity(&ComplexityQuery::new(reference(), 1.0 / 12.0, 0.25, 0.1).unwrap()).unwrap();
    assert!((r.branch_upper - hand).abs() <= 1e-9);
    assert!((r.branch_lower - hand).abs() <= 1e-9);
    assert_eq!(r.m_threshold, 907);
    assert!((r.delta - 1.0 / 120.0).abs() <= 1e-15);
    assert!((r.mesh_surrogate - 121.0 * 121.0).abs() <= 1e-9);
}

#[test]
fn reference_failure_probabilities() {
    let hand = 14641.0 * (-2.0 * 907.0 / 144.0f64).exp();
    let b = failure_probability_bounds(&reference(), 1.0 / 12.0, 0.25, 907).unwrap();
    assert!((b.p1 - hand).abs() <= 1e-12);
    assert!((b.p1 - 0.04951).abs() <= 1e-4);
    assert!(b.p1 < 0.05 && b.p2 < 0.05);
}

#[test]
fn hypotheses_are_checked() {
    for (a, b) in [(1.0 / 6.0, 0.25), (0.1, 1.0 / 6.0), (0.2, 0.3)] {
        assert!(matches!(
            ComplexityQuery::new(reference(), a, b, 0.1),
            Err(Error::HypothesisViolation(_))
        ));
    }
    assert!(matches!(ComplexityQuery::new(reference(), 0.0, 0.25, 0.1), Err(Error::InvalidArgument(_))));
    assert!(matches!(ComplexityQuery::new(reference(), 0.1, 0.25, 1.0), Err(Error::InvalidArgument(_))));
}

fn constants_strategy() -> impl Strategy<Value = WindowConstants> {
    (0.5f64..3.0, 0.05f64..1.0, 1.0f64..3.0, 0.5f64..20.0)
        .prop_map(|(k, q, rq, c)| WindowConstants::from_values(k, k, q, q * rq, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn hoeffding_doubling_squares(n in 1u64..200, t in 0.01f64..2.0, widths in proptest::collection::vec(0.1f64..3.0, 1..8)) {
        let ranges: Vec<(f64, f64)> = widths.iter().map(|&w| (0.0, w)).collect();
        // Doubling n with the range list duplicated squares the bound.
        let doubled: Vec<(f64, f64)> = ranges.iter().chain(&ranges).copied().collect();
        let single = hoeffding_bound(n, &ranges, t).unwrap();
        let twice = hoeffding_bound(2 * n, &doubled, t).unwrap();
        prop_assert!((twice - single * single).abs() <= 1e-12);
    }

    #[test]
    fn mesh_width_scales_to_one(k in 0.1f64..5.0, q in 0.01f64..2.0, c in 0.1f64..50.0) {
        let m = mesh_width(k, q, c).unwrap();
        prop_assert!((m.delta * 4.0 * k * c / q - 1.0).abs() <= 1e-12);
        let steps = (m.mesh_points as f64).sqrt() as u64;
        prop_assert_eq!(steps * steps, m.mesh_points);
        prop_assert!((steps - 1) as f64 * m.delta <= 1.0 + 1e-9);
        prop_assert!(steps as f64 * m.delta > 1.0 - 1e-9);
    }

    #[test]
    fn threshold_is_least_m_with_both_branches_below_half_eps(
        c in constants_strategy(), a in 0.05f64..0.95, b in 1.05f64..3.0, eps in 0.01f64..0.5,
    ) {
        let half = c.q() / 2.0;
        let (alpha, beta) = (a * half, b * half);
        let r = sample_complexity(&ComplexityQuery::new(c.clone(), alpha, beta, eps).unwrap()).unwrap();
        let m = r.m_threshold;
        let at = failure_probability_bounds(&c, alpha, beta, m).unwrap();
        prop_assert!(at.p1_unclamped < eps / 2.0 && at.p2_unclamped < eps / 2.0);
        prop_assert!(at.total < eps);
        if m > 1 {
            let before = failure_probability_bounds(&c, alpha, beta, m - 1).unwrap();
            prop_assert!(before.p1_unclamped.max(before.p2_unclamped) >= eps / 2.0 * (1.0 - 1e-9));
        }
    }

    #[test]
    fn threshold_monotone_in_eps(c in constants_strategy(), e1 in 0.01f64..0.9, e2 in 0.01f64..0.9) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let half = c.q() / 2.0;
        let at = |e| sample_complexity(&ComplexityQuery::new(c.clone(), 0.5 * half, 2.0 * half, e).unwrap()).unwrap().m_threshold;
        prop_assert!(at(lo) >= at(hi));
    }

    #[test]
    fn probabilities_in_unit_interval(c in constants_strategy(), m in 0u64..100_000) {
        let half = c.q() / 2.0;
        let b = failure_probability_bounds(&c, 0.3 * half, 1.7 * half, m).unwrap();
        for p in [b.p1, b.p2, b.total] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!(b.p1_unclamped >= b.p1 && b.p2_unclamped >= b.p2);
    }
}
