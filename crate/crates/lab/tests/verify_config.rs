use epa_core::empirical::{allowed_bids, EmpiricalBounds};
use epa_core::{ValuationProfile, Variant};
use epa_lab::acceptance::Suite;
use epa_lab::config::SweepConfig;
use epa_lab::report::Status;

fn only(ids: &[&str]) -> SweepConfig {
    SweepConfig {
        criteria: ids.iter().map(|s| s.to_string()).collect(),
        ..SweepConfig::default()
    }
}

/// Off-by-one winner-bid bound: one extra bid past the cutoff.
fn tampered(profile: &ValuationProfile, variant: Variant) -> EmpiricalBounds {
    let mut b = allowed_bids(profile, variant);
    if variant == Variant::WinnerBid {
        let next = b.allowed.last().unwrap() + 1;
        if profile.nash_range().contains(&next) {
            b.allowed.push(next);
        }
    }
    b
}

#[test]
fn tampered_bounds_fail_the_spot_values() {
    let suite = Suite::new(only(&["A2", "A3"]))
        .unwrap()
        .with_bounds(tampered);
    let report = suite.run_all();
    assert!(!report.passed);
    let first = report.first_failure().unwrap();
    assert_eq!(first.id, "A2");
    assert!(first.details.iter().any(|d| d.contains("(4, 16, 10)")));
    assert_eq!(report.criteria[1].status, Status::Fail);
}

#[test]
fn standard_bounds_pass_the_same_selection() {
    let report = Suite::new(only(&["A2", "A3", "A10"])).unwrap().run_all();
    assert!(report.passed);
    assert_eq!(report.criteria.len(), 3);
}

#[test]
fn full_tie_weight_keeps_the_equilibrium_structure() {
    let cfg = SweepConfig {
        gamma: "1".into(),
        ..only(&["A1", "A4", "A7", "A8"])
    };
    let report = Suite::new(cfg).unwrap().run_all();
    let status: Vec<(&str, Status)> = report.criteria.iter().map(|c| (c.id, c.status)).collect();
    assert_eq!(
        status,
        [
            ("A1", Status::Pass),
            ("A4", Status::Skipped),
            ("A7", Status::Pass),
            ("A8", Status::Skipped)
        ]
    );
    assert!(report.passed);
}

#[test]
fn reports_are_reproducible() {
    let cfg = SweepConfig {
        cap_samples: 50,
        v_high_max: 10,
        ..only(&["A1", "A5", "A9", "A10"])
    };
    let a = Suite::new(cfg.clone()).unwrap().run_all().to_json();
    let b = Suite::new(cfg.clone()).unwrap().run_all().to_json();
    assert_eq!(a, b);
    let other_seed = SweepConfig {
        seed: cfg.seed + 1,
        ..cfg
    };
    let c = Suite::new(other_seed).unwrap().run_all().to_json();
    assert_ne!(a, c);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = SweepConfig {
        variants: vec!["xb".into()],
        ..SweepConfig::default()
    };
    assert!(Suite::new(bad).is_err());
    let bad = SweepConfig {
        witness_ts: vec![1.0],
        ..SweepConfig::default()
    };
    assert!(Suite::new(bad).is_err());
}
