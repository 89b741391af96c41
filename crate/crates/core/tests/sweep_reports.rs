//! Sweep engine and report files.

use relgnc::harness::{records_to_csv, records_to_json, run_sweep, write_report};
use relgnc::{AuditRecord, GroupSpec, ShapeClass, SweepConfig};

fn families(specs: &[&str]) -> SweepConfig {
    SweepConfig {
        families: Some(specs.iter().map(|s| s.parse::<GroupSpec>().unwrap()).collect()),
        ..SweepConfig::default()
    }
}

#[test]
fn s3_has_exactly_three_star_instances() {
    let report = run_sweep(&families(&["S3"])).unwrap();
    assert!(report.is_clean(), "{:?}", report.violations);
    let stars: Vec<&AuditRecord> =
        report.records.iter().filter(|r| matches!(r.shape, ShapeClass::Star { .. }) && r.standing_assumptions_met).collect();
    assert_eq!(stars.len(), 3);
    assert!(stars.iter().all(|r| r.h_order == 2 && r.edges_oracle == 5));
}

#[test]
fn abelian_group_has_only_the_trivial_commutator() {
    let report = run_sweep(&families(&["C4"])).unwrap();
    assert!(!report.records.is_empty());
    for r in &report.records {
        assert_eq!(r.g_in_k, r.g_label == "1", "{}", r.key());
        if r.g_in_k {
            assert_eq!(r.shape, ShapeClass::EmptyGraph);
        }
    }
}

#[test]
fn empty_family_list_gives_empty_report() {
    let report = run_sweep(&families(&[])).unwrap();
    assert!(report.records.is_empty());
    assert_eq!(records_to_json(&report.records).unwrap(), "[]\n");
    assert_eq!(records_to_csv(&report.records).unwrap().lines().count(), 1);
}

#[test]
fn json_round_trip_and_byte_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = families(&["S3", "D4", "Q8"]);
    let first = run_sweep(&config).unwrap();
    let (j1, c1) = (dir.path().join("a.json"), dir.path().join("a.csv"));
    write_report(&first.records, &j1, Some(&c1)).unwrap();
    let reloaded: Vec<AuditRecord> = serde_json::from_str(&std::fs::read_to_string(&j1).unwrap()).unwrap();
    assert_eq!(reloaded, first.records);

    let parallel = run_sweep(&SweepConfig { jobs: 3, ..config }).unwrap();
    let (j2, c2) = (dir.path().join("b.json"), dir.path().join("b.csv"));
    write_report(&parallel.records, &j2, Some(&c2)).unwrap();
    assert_eq!(std::fs::read(&j1).unwrap(), std::fs::read(&j2).unwrap());
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
}

#[test]
fn skipping_central_subgroups() {
    let config = SweepConfig { include_g_not_in_k: false, ..families(&["S3", "C4"]) };
    let report = run_sweep(&config).unwrap();
    assert!(report.records.iter().all(|r| r.group_spec == "S3"));
    assert!(report.records.iter().all(|r| r.h_order > 1));
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(run_sweep(&SweepConfig { max_order: 0, ..SweepConfig::default() }).is_err());
    assert!(run_sweep(&SweepConfig { max_order: 65, ..SweepConfig::default() }).is_err());
    assert!(run_sweep(&SweepConfig { jobs: 0, ..SweepConfig::default() }).is_err());
}
