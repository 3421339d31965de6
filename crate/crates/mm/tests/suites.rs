use mm::suites::{run_with, Ctx};
use mm::{run_suite, Status, SuiteConfig, SUITES};

fn small() -> SuiteConfig {
    SuiteConfig { fields: vec![String::new()], max_deg: 3, pairs: 12, morphisms: 24, unions: 4, nori_n_max: 3, ..SuiteConfig::default() }
}

#[test]
fn reports_are_reproducible_up_to_timings() {
    let a = run_suite("decomposition", &small()).unwrap().without_timings().to_json();
    let b = run_suite("decomposition", &small()).unwrap().without_timings().to_json();
    assert_eq!(a, b);
    assert!(a.contains("\"schema_version\": \"mm-report/1\""));
}

#[test]
fn empty_corpus_passes_vacuously_with_a_warning() {
    let r = run_suite("dims", &SuiteConfig { fields: vec![String::new()], ..SuiteConfig::empty() }).unwrap();
    assert!(r.passed());
    assert!(r.warnings.iter().any(|w| w.contains("empty")));
    assert!(r.checks.iter().filter(|c| c.name.contains("oracle")).all(|c| c.instances == 0));
}

#[test]
fn injected_fault_fails_every_suite_with_a_witness() {
    let ctx = Ctx::new(&SuiteConfig { inject_fault: true, ..small() }).unwrap();
    for s in SUITES {
        let r = run_with(&ctx, s).unwrap();
        let failed: Vec<_> = r.failures().collect();
        assert!(!failed.is_empty(), "{} did not notice the fault", s);
        assert!(failed.iter().all(|c| c.status == Status::Fail && c.witness.is_some()), "{}", s);
    }
}

#[test]
fn small_config_passes_everything() {
    let r = run_suite("all", &small()).unwrap();
    let failed: Vec<_> = r.failures().map(|c| c.name.clone()).collect();
    assert!(failed.is_empty(), "{:?}", failed);
    assert!(r.dimensions.iter().all(|d| d.total == d.oracle));
    let md = r.to_markdown();
    assert!(md.contains("| check | status |"));
}

#[test]
fn unknown_suite_is_an_error() {
    assert!(run_suite("nope", &small()).is_err());
}
