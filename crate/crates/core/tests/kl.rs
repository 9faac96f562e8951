use std::sync::Arc;

use hecke_core::kl::{KlEngine, KlPolynomial};
use hecke_core::multiplicity::Multiplicities;
use hecke_core::params::{enumerate_multisegments, window_lambdas};
use hecke_core::{rat, Perm};

#[test]
fn symmetry_degree_and_short_intervals() {
    let kl = KlEngine::in_memory();
    for n in 1..=5 {
        let perms = Perm::all(n);
        for w in &perms {
            for x in &perms {
                let p = kl.polynomial(x, w);
                if !x.bruhat_leq(w) {
                    assert!(p.is_zero());
                    continue;
                }
                assert_eq!(p.coeff(0), 1, "P_{x},{w}");
                let gap = w.length() - x.length();
                if gap > 0 {
                    assert!(2 * p.degree().unwrap() < gap, "degree of P_{x},{w} = {p}");
                }
                if gap <= 2 {
                    assert_eq!(p, KlPolynomial::one());
                }
                assert!(p.0.iter().all(|&c| c >= 0));
                assert_eq!(p, kl.polynomial(&x.inverse(), &w.inverse()));
            }
        }
    }
}

#[test]
fn cache_persists_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kl.json");
    let w0 = Perm::longest(4);
    let total = {
        let kl = KlEngine::open(&path).unwrap();
        let s: i64 = Perm::all(4).iter().map(|x| kl.polynomial(x, &w0).at_one()).sum();
        kl.mark_validated(4);
        kl.save().unwrap();
        s
    };
    let kl = KlEngine::open(&path).unwrap();
    assert!(!kl.discarded_corrupt_cache());
    assert!(kl.is_validated(4));
    assert!(!kl.is_empty());
    let again: i64 = Perm::all(4).iter().map(|x| kl.polynomial(x, &w0).at_one()).sum();
    assert_eq!(total, again);

    let text = std::fs::read_to_string(&path).unwrap().replacen("[1]", "[5]", 1);
    std::fs::write(&path, text).unwrap();
    let kl = KlEngine::open(&path).unwrap();
    assert!(kl.discarded_corrupt_cache());
    assert!(kl.is_empty() && !kl.is_validated(4));
    let recomputed: i64 = Perm::all(4).iter().map(|x| kl.polynomial(x, &w0).at_one()).sum();
    assert_eq!(total, recomputed);
}

#[test]
fn multiplicities_are_gamma_equivariant() {
    let m = Multiplicities::new(rat(3), 2, 240, Arc::new(KlEngine::in_memory()));
    for n in 1..=4 {
        for lambda in window_lambdas(n, 3, 0) {
            let ms = enumerate_multisegments(&lambda);
            for xi in &ms {
                for zeta in &ms {
                    let a = m.mult_untwisted(xi, zeta).unwrap();
                    let b = m.mult_untwisted(&xi.gamma_dual(2), &zeta.gamma_dual(2)).unwrap();
                    assert_eq!(a, b, "{xi} in {zeta}");
                    if xi == zeta {
                        assert_eq!(a, 1);
                    }
                    if !zeta.closure_leq(xi).unwrap() {
                        assert_eq!(a, 0);
                    }
                }
            }
        }
    }
}

#[test]
fn gate_blocks_long_lines_until_validated() {
    use hecke_core::{Error, Multisegment, Segment};
    let kl = Arc::new(KlEngine::in_memory());
    let m = Multiplicities::new(rat(3), 2, 240, kl.clone());
    let long = Multisegment::new((0..5).map(|k| Segment::new(0, 2 * k, 1)).collect());
    let open = Multisegment::new(vec![Segment::new(0, 0, 5)]);
    assert!(matches!(m.mult_untwisted(&open, &long), Err(Error::RecipeUnvalidated(5))));
    kl.mark_validated(4);
    assert_eq!(m.mult_untwisted(&open, &long).unwrap(), 1);
}
