use std::time::Instant;

use maxsep_core::fixtures::{
    check_fixture_identities, extract_choice, label_counts, make_fixture, pn_structure_violations, FamilyY,
    FixtureKind, FixtureParams, IdentityBounds,
};
use maxsep_core::{is_separated, Space};

fn family() -> FamilyY {
    FamilyY::synthetic(&[3, 1, 4, 2]).unwrap()
}

#[test]
fn identity_reports_pass_for_every_fixture() {
    for kind in [FixtureKind::Pse, FixtureKind::Pn, FixtureKind::Dyadic, FixtureKind::Circle] {
        let t = Instant::now();
        let fx = make_fixture(kind, family(), FixtureParams::default()).unwrap();
        let report = check_fixture_identities(&fx, &IdentityBounds::default());
        for r in &report.0 {
            println!("{kind} {:?} {} ({})", r.status, r.identity, r.checked);
        }
        println!("{kind}: {:?}", t.elapsed());
        assert!(report.all_pass(), "{kind}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn corrupting_any_case_fails_a_named_identity() {
    for kind in [FixtureKind::Pse, FixtureKind::Pn, FixtureKind::Dyadic, FixtureKind::Circle] {
        for case in kind.cases() {
            let params = FixtureParams {
                corrupt: Some(case.to_string()),
                resolution: 8,
                ..FixtureParams::default()
            };
            let fx = make_fixture(kind, family(), params).unwrap();
            let bounds = IdentityBounds {
                resolution: 8,
                long_range: 8,
                samples: 40,
                sample_depth: 8,
            };
            let report = check_fixture_identities(&fx, &bounds);
            let failure = report.failures().next();
            assert!(failure.is_some(), "{kind} corrupted at {case} still passes");
            assert!(failure.unwrap().counterexample.is_some());
        }
    }
}

#[test]
fn extensions_select_one_label_per_set() {
    for kind in [FixtureKind::Pse, FixtureKind::Pn, FixtureKind::Dyadic, FixtureKind::Circle] {
        let t = Instant::now();
        let fx = make_fixture(kind, family(), FixtureParams::default()).unwrap();
        let (set, cert) = fx.extend().unwrap();
        println!("{kind}: {} points, {:?}", set.len(), t.elapsed());
        assert!(cert.ok(), "{kind}: {cert:?}");
        assert!(is_separated(fx.space().as_ref(), &set).is_ok());
        let choice = extract_choice(&fx, &set.points).unwrap();
        assert_eq!(choice.len(), fx.family().len());
        for (n, label) in &choice {
            assert!(fx.family().set(*n).iter().any(|l| &l.name == label));
        }
        match kind {
            FixtureKind::Pn => assert!(pn_structure_violations(&fx, &set.points).is_empty()),
            FixtureKind::Circle => assert!(label_counts(&fx, &set.points).iter().all(|&c| c >= 1)),
            _ => assert!(label_counts(&fx, &set.points).iter().all(|&c| c == 1)),
        }
        let _ = fx.space().dense_len();
    }
}
