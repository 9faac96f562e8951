use std::sync::Arc;

use hecke_core::kl::KlEngine;
use hecke_core::multiplicity::{Multiplicities, TwistedOracle};
use hecke_core::params::fixed_lambdas;
use hecke_core::{rat, Error, Point, Rho};

fn engine() -> Multiplicities {
    Multiplicities::new(rat(3), 2, 240, Arc::new(KlEngine::in_memory()))
}

#[test]
fn twisted_tables_agree_with_the_oracle() {
    let m = engine();
    for n in 2..=3 {
        for lambda in fixed_lambdas(n, 2) {
            let oracle = TwistedOracle::build(&lambda, &rat(3), 2, 240).unwrap();
            let observed = oracle.table(&lambda).unwrap();
            let predicted = m.decomposition_matrix(&lambda, true).unwrap();
            assert_eq!(observed.params, predicted.params);
            assert!(observed.is_unitriangular(), "{lambda:?}: {:?}", observed.matrix);
            assert_eq!(observed.matrix, predicted.matrix, "{lambda:?}");

            let ps = &observed.params;
            for (i, zeta) in ps.iter().enumerate() {
                for (j, xi) in ps.iter().enumerate() {
                    let got = observed.matrix[i][j];
                    match (xi.rho, zeta.rho) {
                        (Rho::None, Rho::None) => {
                            let expected = m.mult_untwisted(&xi.m, &zeta.m).unwrap()
                                + m.mult_untwisted(&xi.m, &zeta.m.gamma_dual(2)).unwrap();
                            assert_eq!(got, expected, "induced case {xi} in {zeta}");
                        }
                        (Rho::Trivial, _) => {
                            let sign = ps.iter().position(|p| p.m == xi.m && p.rho == Rho::Sign).unwrap();
                            let mut total = m.mult_untwisted(&xi.m, &zeta.m).unwrap();
                            if zeta.rho == Rho::None {
                                total += m.mult_untwisted(&xi.m, &zeta.m.gamma_dual(2)).unwrap();
                                assert_eq!(got, observed.matrix[i][sign], "{xi} and its sign twist in {zeta}");
                            }
                            assert_eq!(got + observed.matrix[i][sign], total, "sum rule {xi} in {zeta}");
                        }
                        _ => {}
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_refuses_large_modules() {
    let lambda = [Point::new(0, -2), Point::new(0, 0), Point::new(0, 2)];
    assert!(matches!(TwistedOracle::build(&lambda, &rat(3), 2, 4), Err(Error::OracleRequired { dim: 6, threshold: 4 })));
}
