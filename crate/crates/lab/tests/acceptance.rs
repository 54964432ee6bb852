use std::io::Write;

use epa_lab::acceptance::Suite;
use epa_lab::config::SweepConfig;
use epa_lab::report::Status;

#[test]
fn acceptance_criteria() {
    let report = Suite::new(SweepConfig::default()).unwrap().run_all();
    // bypasses the harness capture so the lines show up in plain `cargo test`
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for c in &report.criteria {
        writeln!(err, "{c}").unwrap();
        for d in &c.details {
            writeln!(err, "    {d}").unwrap();
        }
    }
    drop(err);
    let ids: Vec<&str> = report.criteria.iter().map(|c| c.id).collect();
    assert_eq!(
        ids,
        ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"]
    );
    assert!(report.criteria.iter().all(|c| c.status == Status::Pass));
    assert!(report.passed);
}
