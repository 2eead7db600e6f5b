use std::path::PathBuf;

use cyclewall::verify::{run_verify, Status, Suite, VerifyConfig};
use cyclewall::{reference, Presentation};

fn shipped(name: &str) -> Presentation {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../presentations").join(format!("{name}.json"));
    Presentation::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn shipped_files_match_the_builtin_presentations() {
    for (name, p) in reference::all() {
        assert_eq!(shipped(name), p, "{name}");
    }
}

#[test]
fn bad_files_report_a_position() {
    let err = Presentation::from_json("{\n  \"n\": 5,\n  \"groups\": [\n    {\"kind\": \"cyclic\", \"order\": 1}\n  ]\n}")
        .unwrap_err()
        .to_string();
    assert!(err.contains("line"), "{err}");
    let err = Presentation::from_json(r#"{"n": 4, "groups": [{"kind":"cyclic","order":2},{"kind":"cyclic","order":2},{"kind":"cyclic","order":2},{"kind":"cyclic","order":2}]}"#)
        .unwrap_err()
        .to_string();
    assert!(err.contains("at least 5"), "{err}");
    let err = Presentation::from_json(r#"{"n": 5, "groups": []}"#).unwrap_err().to_string();
    assert!(err.contains("group specs"), "{err}");
}

#[test]
fn every_suite_passes_on_the_hexagon() {
    let p = shipped("c6_mixed");
    let cfg = VerifyConfig::default();
    for suite in [Suite::Words, Suite::Davis, Suite::Walls, Suite::Algebraic, Suite::Aut, Suite::Diagrams] {
        let r = run_verify(&p, suite, &cfg).unwrap();
        let bad: Vec<_> = r.checks.iter().filter(|c| c.status != Status::Pass).map(|c| &c.id).collect();
        assert!(bad.is_empty(), "{suite}: {bad:?}");
        assert!(r.checks.iter().all(|c| c.id.starts_with(&format!("{suite}."))));
    }
}

#[test]
fn different_seeds_change_samples_not_verdicts() {
    let p = reference::c5_z3();
    let a = run_verify(&p, Suite::Aut, &VerifyConfig::default()).unwrap();
    let b = run_verify(&p, Suite::Aut, &VerifyConfig { seed: 7, ..VerifyConfig::default() }).unwrap();
    assert_eq!(a.exit_code(), 0);
    assert_eq!(b.exit_code(), 0);
    assert_eq!(b.seed, 7);
}

#[test]
fn tiny_budget_is_a_resource_error() {
    let p = reference::c6_mixed();
    let cfg = VerifyConfig { radius: 4, budget_bytes: 1 << 16, ..VerifyConfig::default() };
    assert!(matches!(run_verify(&p, Suite::Davis, &cfg), Err(cyclewall::Error::Resource(_))));
}
