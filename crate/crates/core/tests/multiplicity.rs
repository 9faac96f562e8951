use std::sync::Arc;

use hecke_core::kl::{KlEngine, KlPolynomial};
use hecke_core::multiplicity::{Multiplicities, UntwistedOracle};
use hecke_core::{rat, Perm, Point};

fn engine() -> Multiplicities {
    Multiplicities::new(rat(3), 2, 240, Arc::new(KlEngine::in_memory()))
}

#[test]
fn rank_two_matrix() {
    let lambda = [Point::new(0, -1), Point::new(0, 1)];
    let t = engine().decomposition_matrix(&lambda, false).unwrap();
    assert_eq!(t.matrix, vec![vec![1, 0], vec![1, 1]]);
    let o = UntwistedOracle::build(&lambda, &rat(3), 2, 240).unwrap();
    assert_eq!(o.table(&lambda).unwrap().matrix, t.matrix);
}

#[test]
fn singular_pair_appears() {
    let kl = KlEngine::in_memory();
    let p = |s: &str| Perm::from_one_line(&s.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>());
    assert_eq!(kl.polynomial(&p("2143"), &p("4231")), KlPolynomial(vec![1, 1]));
}

#[test]
fn recipe_matches_oracle_on_windows() {
    let m = engine();
    let bad = m.validate_recipe(1..=4, 4).unwrap();
    assert!(bad.is_empty(), "{bad:#?}");
    assert!(m.kl().is_validated(4));
}

#[test]
fn two_by_two_block_has_multiplicity_two() {
    let lambda: Vec<Point> = [0, 0, 2, 2].iter().map(|&e| Point::new(0, e)).collect();
    let t = engine().decomposition_matrix(&lambda, false).unwrap();
    assert!(t.matrix.iter().flatten().any(|&x| x == 2));
    assert_eq!(t.matrix, UntwistedOracle::build(&lambda, &rat(3), 2, 240).unwrap().table(&lambda).unwrap().matrix);
}
