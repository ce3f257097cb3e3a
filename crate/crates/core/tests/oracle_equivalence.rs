//! Engine output against two independent oracles: the library's exhaustive
//! DP and a brute-force subsequence search that lives only in test code.

mod common;

use std::collections::BTreeSet;

use kpmlcs::oracle::{check_instance, dp_mlcs, random_suite, run_verify, VerifyConfig};
use kpmlcs::{mine, MineParams, ProblemInstance, PruneMode};

fn suite() -> Vec<ProblemInstance> {
    random_suite(&VerifyConfig::default())
}

fn engine_strings(inst: &ProblemInstance, prune: PruneMode) -> (u32, BTreeSet<String>) {
    let mut params = MineParams::exact();
    params.prune = prune;
    params.mode = kpmlcs::MiningMode::Exact { cap: usize::MAX };
    let out = mine(inst, &params).unwrap();
    (out.dag.mlcs_len(), common::decoded_strings(&out.dag))
}

#[test]
fn dp_oracle_matches_engine_on_default_suite() {
    let report = run_verify(&VerifyConfig::default());
    assert_eq!(report.instances, 200);
    assert!(report.passed(), "{:#?}", report.mismatches.first());
}

#[test]
fn brute_force_matches_engine() {
    for inst in suite() {
        let seqs: Vec<String> = (0..inst.d()).map(|i| inst.text(i)).collect();
        if seqs.iter().map(String::len).min().unwrap() > 12 {
            continue;
        }
        let (len, strings) = common::brute_force_mlcs(&seqs);
        let (l, got) = engine_strings(&inst, PruneMode::Off);
        assert_eq!(l as usize, len, "{seqs:?}");
        assert_eq!(got, strings, "{seqs:?}");
    }
}

#[test]
fn brute_force_agrees_with_dp_oracle() {
    // The two oracles are independent; make sure they agree with each other too.
    for inst in suite().into_iter().take(60) {
        let seqs: Vec<String> = (0..inst.d()).map(|i| inst.text(i)).collect();
        let (len, strings) = common::brute_force_mlcs(&seqs);
        let (l, dp) = dp_mlcs(&inst);
        assert_eq!((l as usize, &dp), (len, &strings));
    }
}

#[test]
fn bounded_expansion_is_exact() {
    let cfg = VerifyConfig {
        prune: PruneMode::Bounded,
        ..Default::default()
    };
    let report = run_verify(&cfg);
    assert!(report.passed(), "{:#?}", report.mismatches.first());
}

#[test]
fn spec_examples() {
    let cases: [(&[&str], u32, &[&str]); 4] = [
        (&["ACGT", "ACGT", "ACGT"], 4, &["ACGT"]),
        (&["AC", "CA", "AC"], 1, &["A", "C"]),
        (&["ABC", "ACB", "ABC"], 2, &["AB", "AC"]),
        (&["A", "C", "A"], 0, &[""]),
    ];
    for (seqs, l, want) in cases {
        let inst = ProblemInstance::from_strs(seqs).unwrap();
        let (got_l, got) = engine_strings(&inst, PruneMode::Off);
        assert_eq!(got_l, l);
        assert_eq!(got, want.iter().map(|s| s.to_string()).collect());
    }
}

/// Dominance pruning never changes L, but it is allowed to lose strings.
/// The count is printed so the discrepancy stays visible.
#[test]
fn dominance_pruning_discrepancy_report() {
    let mut lost = 0;
    let instances = suite();
    for inst in &instances {
        let (l_full, full) = engine_strings(inst, PruneMode::Off);
        let (l_dom, dom) = engine_strings(inst, PruneMode::On);
        assert_eq!(l_full, l_dom);
        assert!(dom.is_subset(&full), "pruning invented a string");
        assert!(!dom.is_empty());
        if dom != full {
            lost += 1;
        }
    }
    println!(
        "dominance pruning lost strings on {lost} of {} instances",
        instances.len()
    );
}

#[test]
fn verify_flags_injected_fault() {
    let inst = ProblemInstance::from_strs(&["GATTACA", "TACGATA", "ATTGACA"]).unwrap();
    assert!(check_instance(&inst, PruneMode::Off, false).is_none());
    assert!(check_instance(&inst, PruneMode::Off, true).is_some());
}
