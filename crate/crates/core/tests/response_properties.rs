mod common;

use common::*;
use epa_core::fixed_point::logistic_response;
use epa_core::monotonicity::{
    check_m_monotonicity, check_weak_monotonicity, monotone_probability_cap, MonotonicityTolerance,
};
use epa_core::qre::{qre_fixed_point, LogisticConfig};
use epa_core::{Role, StrategyProfile};
use proptest::prelude::*;

proptest! {
    #[test]
    fn logistic_is_a_positive_distribution(
        payoffs in proptest::collection::vec(-50.0f64..50.0, 1..30),
        lambda in 0.0f64..5.0,
    ) {
        let out = logistic_response(&payoffs, lambda).unwrap();
        prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(out.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn logistic_preserves_payoff_order(
        payoffs in proptest::collection::vec(-50i32..50, 2..30),
        lambda in 0.01f64..5.0,
    ) {
        let x: Vec<f64> = payoffs.iter().map(|&v| v as f64).collect();
        let out = logistic_response(&x, lambda).unwrap();
        for m in 0..x.len() {
            for t in 0..x.len() {
                prop_assert_eq!(x[m] >= x[t], out[m] >= out[t]);
            }
        }
    }

    #[test]
    fn m_monotonicity_weakens_as_m_shrinks(
        (g, low, high) in game().prop_flat_map(|g| {
            let n = g.num_bids();
            (Just(g), interior_dist(n), interior_dist(n))
        }),
        m_hi in 0.0f64..=1.0,
        frac in 0.0f64..=1.0,
    ) {
        let profile = StrategyProfile::new(low, high).unwrap();
        let tol = MonotonicityTolerance::prob(1e-12);
        let m_lo = m_hi * frac;
        let hi = check_m_monotonicity(&g, &profile, m_hi, tol).unwrap();
        let lo = check_m_monotonicity(&g, &profile, m_lo, tol).unwrap();
        prop_assert!(!hi.holds || lo.holds);
    }

    #[test]
    fn quantal_responses_are_monotone_and_capped(g in game(), lambda in 0.1f64..50.0) {
        let cfg = LogisticConfig { lambda, ..LogisticConfig::default() };
        let fp = qre_fixed_point(&g, &cfg, &StrategyProfile::uniform(g.num_bids())).unwrap();
        prop_assert!(fp.converged);
        let tol = MonotonicityTolerance::prob(cfg.residual_tol * lambda.max(1.0));
        let report = check_weak_monotonicity(&g, &fp.profile, tol).unwrap();
        prop_assert!(report.holds, "{:?}", report.violations.first());
        prop_assert!(fp.profile.is_interior());
        for role in Role::BOTH {
            for bid in 0..g.num_bids() {
                let cap = monotone_probability_cap(&g, &fp.profile, role, bid, 1e-9).unwrap();
                prop_assert!(cap.satisfied, "{:?} bid {} {:?}", role, bid, cap);
            }
        }
    }
}
