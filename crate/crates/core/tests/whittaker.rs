use hecke_core::params::enumerate_enhanced;
use hecke_core::whittaker::{build_whittaker, compare_normalizations, verify_transformation_laws, Verdict};
use hecke_core::{rat, Multisegment, Perm, Rho, Segment};

#[test]
fn transformation_laws_rank_three() {
    let r = verify_transformation_laws(3).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(r.checks > 40);
}

#[test]
fn gamma_pairs_values() {
    let w = build_whittaker(3).unwrap();
    for v in Perm::all(3) {
        assert_eq!(w.value(&v.gamma()), &w.value(&v).gamma());
    }
}

#[test]
fn normalizations_agree_on_small_fixed_parameters() {
    let q = rat(3);
    let m = Multisegment::new(vec![Segment::new(0, 0, 1)]);
    assert_eq!(compare_normalizations(&m, &q, 2).unwrap().verdict, Verdict::Equal);
    let m = Multisegment::new(vec![Segment::new(0, -1, 2)]);
    assert_eq!(compare_normalizations(&m, &q, 2).unwrap().verdict, Verdict::Equal);
    let m = Multisegment::new(vec![Segment::new(0, 2, 1), Segment::new(0, 0, 1), Segment::new(0, -2, 1)]);
    let c = compare_normalizations(&m, &q, 2).unwrap();
    assert_eq!(c.verdict, Verdict::Equal, "{c:?}");
}

#[test]
fn every_fixed_parameter_up_to_rank_three() {
    let q = rat(3);
    for lam in (1..=3).flat_map(|n| hecke_core::params::fixed_lambdas(n, 2)) {
        for p in enumerate_enhanced(&lam, 2) {
            if p.rho != Rho::Trivial {
                continue;
            }
            let c = compare_normalizations(&p.m, &q, 2).unwrap();
            assert_eq!(c.verdict, Verdict::Equal, "{}: {c:?}", p.m);
        }
    }
}
