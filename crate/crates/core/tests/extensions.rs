use hecke_core::module::oracle::{composition_factors, cosocle, find_submodule, generalized_weights, hom_dim};
use hecke_core::module::{gamma_extensions, gamma_pullback, induce_to_plus, induced_standard};
use hecke_core::params::{enumerate_multisegments, fixed_lambdas, window_lambdas};
use hecke_core::{rat, Point};

fn lambdas(n: usize) -> Vec<Vec<Point>> {
    let mut out = fixed_lambdas(n, 2);
    for unit in [0, 1] {
        out.extend(window_lambdas(n, 3, unit));
    }
    out.sort();
    out.dedup();
    out
}

#[test]
fn extension_dichotomy_up_to_rank_three() {
    let (mut fixed, mut free) = (0, 0);
    for n in 1..=3 {
        for lambda in lambdas(n) {
            for m in enumerate_multisegments(&lambda) {
                let e = induced_standard(&m, &rat(3), 2).unwrap();
                let (l, _) = cosocle(&e).unwrap();
                assert!(find_submodule(&l).unwrap().is_none(), "{m}: quotient is reducible");
                let exts = gamma_extensions(&l).unwrap();
                if m.is_gamma_fixed(2) {
                    fixed += 1;
                    assert_eq!(exts.len(), 2, "{m}");
                    let (a, b) = (&exts[0], &exts[1]);
                    assert_eq!(a.gamma().unwrap(), &-b.gamma().unwrap());
                    assert_eq!(hom_dim(a, b), 0, "{m}: the two extensions are isomorphic");
                    assert_eq!(hom_dim(a, a), 1);
                } else {
                    free += 1;
                    assert!(exts.is_empty(), "{m}");
                    let plus = induce_to_plus(&l).unwrap();
                    assert!(plus.audit().is_empty());
                    assert!(find_submodule(&plus).unwrap().is_none(), "{m}: induced module is reducible");
                    let restricted = composition_factors(&plus.without_gamma()).unwrap();
                    assert_eq!(restricted.length(), 2);
                    let pulled = gamma_pullback(&l).unwrap();
                    let mut got: Vec<_> = restricted.factors.iter().map(|f| f.weights.clone()).collect();
                    let mut want = vec![generalized_weights(&l).unwrap(), generalized_weights(&pulled).unwrap()];
                    got.sort();
                    want.sort();
                    assert_eq!(got, want, "{m}");
                    for f in &restricted.factors {
                        assert!(hom_dim(&f.module, &l) + hom_dim(&f.module, &pulled) >= 1);
                    }
                }
            }
        }
    }
    assert!(fixed > 5 && free > 5, "{fixed} fixed, {free} non-fixed");
}
