use normcert::verify::{run_all, run_suite, SweepSpec, PRESETS, SUITES};

#[test]
fn every_preset_parses() {
    for name in PRESETS {
        let spec = SweepSpec::preset(name).unwrap();
        assert_eq!(spec.name, *name);
    }
}

#[test]
fn smoke_preset_passes_every_suite() {
    let mut spec = SweepSpec::preset("smoke").unwrap();
    spec.suites = SUITES.iter().map(|s| s.name.to_string()).collect();
    for report in run_all(&spec).unwrap() {
        assert!(report.complete, "{}", report.suite);
        assert!(report.cases > 0, "{}", report.suite);
        assert!(report.passed, "{}: {:#?}", report.suite, report.failures);
    }
}

#[test]
fn reports_are_deterministic() {
    let mut spec = SweepSpec::preset("smoke").unwrap();
    spec.threads = Some(3);
    let a = serde_json::to_string(&run_suite("binomial-certificate", &spec).unwrap()).unwrap();
    spec.threads = Some(1);
    let b = serde_json::to_string(&run_suite("binomial-certificate", &spec).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn case_cap_marks_report_incomplete() {
    let mut spec = SweepSpec::preset("smoke").unwrap();
    spec.max_cases = Some(5);
    let r = run_suite("binomial-certificate", &spec).unwrap();
    assert!(!r.complete);
    assert_eq!(r.cases, 5);
}

#[test]
fn failure_list_is_capped() {
    let mut spec = SweepSpec::preset("smoke").unwrap();
    // A tolerance no floating point comparison can meet forces failures.
    spec.tolerances.oracle = 1e-300;
    spec.failure_cap = 3;
    let r = run_suite("oracle-equivalence", &spec).unwrap();
    assert!(r.failures_total > 3);
    assert_eq!(r.failures.len(), 3);
    assert!(!r.passed);
    assert!(r.failures[0].rerun.starts_with("normcert "));
}

#[test]
fn desk_preset_passes_supporting_suites() {
    let spec = SweepSpec::preset("desk").unwrap();
    for suite in
        ["cp-reflection", "cp-coverage", "rate-convexity", "normal-tail", "kernel-invariants", "lagrange-invalidity", "symmetric-density"]
    {
        let r = run_suite(suite, &spec).unwrap();
        assert!(r.passed && r.complete, "{suite}: {:#?}", &r.failures[..r.failures.len().min(5)]);
    }
}
