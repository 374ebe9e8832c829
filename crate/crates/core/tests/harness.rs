use uaforge_core::analysis::Status;
use uaforge_core::harness::{claim_ids, run_all, run_claim, run_claim_with, Report};
use uaforge_core::Error;

#[test]
fn registry_has_every_claim() {
    let ids = claim_ids();
    assert_eq!(ids.len(), 23);
    assert_eq!(ids.iter().filter(|i| i.starts_with("S2.")).count(), 10);
    for id in ids {
        assert!(!id.contains('?'));
    }
}

#[test]
fn full_run_at_default_size() {
    let results = run_all(None, 3).unwrap();
    assert_eq!(results.len(), 23);
    for r in &results {
        eprintln!("{:?} {} ({} ms, {} instances): {}", r.status, r.id, r.elapsed_ms, r.instances, r.evidence);
    }
    let report = Report::new(results.clone());
    assert_eq!(report.summary.pass + report.summary.fail, 23);
    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["claims"].as_array().unwrap().len(), 23);
    // The printed identity `a in {0,e,1} iff !!a = 1` is false at a = 0.
    for r in &results {
        let expected = if r.id.starts_with("S3.EQ1-8") { Status::Fail } else { Status::Pass };
        assert_eq!(r.status, expected, "{}: {}", r.id, r.evidence);
    }
}

#[test]
fn filter_selects_by_prefix() {
    let results = run_all(Some("S2.S"), 3).unwrap();
    let ids: Vec<&str> = results.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["S2.SG-EMPTY", "S2.SUBALGS", "S2.SIMPLE-A", "S2.SI-LIST"]);
}

#[test]
fn single_claims_and_parameters() {
    let r = run_claim("S3.FKN?n=3").unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.id, "S3.FKN?n=3");
    assert!(r.instances > 0);
    let again = run_claim_with("S3.FKN", 3).unwrap();
    assert_eq!(again.evidence, r.evidence);
    assert!(matches!(run_claim("S3.FKN?n=5"), Err(Error::Parameter(_))));
    assert!(matches!(run_claim("S3.FKN?n=2"), Err(Error::Parameter(_))));
    assert!(matches!(run_claim("S3.FKN?k=3"), Err(Error::Parameter(_))));
    assert!(matches!(run_claim("S2.SIMPLE-A?n=3"), Err(Error::Parameter(_))));
    assert!(matches!(run_claim("S9.NOPE"), Err(Error::UnknownClaim(_))));
}

#[test]
fn outcomes_do_not_depend_on_order() {
    let forward = run_all(Some("S2."), 3).unwrap();
    let mut ids = claim_ids();
    ids.retain(|i| i.starts_with("S2."));
    ids.reverse();
    for id in ids {
        let r = run_claim(id).unwrap();
        let f = forward.iter().find(|f| f.id == r.id).unwrap();
        assert_eq!((f.status, &f.evidence, f.instances), (r.status, &r.evidence, r.instances));
    }
}
