use hecke_core::hecke::{intertwiner, intertwiner_denominator, intertwiner_from_word, simple_intertwiner};
use hecke_core::{GroupAlgebraElement, HeckeElement, Perm, Scalar};
use proptest::prelude::*;

fn random_element(n: usize, seed: &[(i32, i32, usize, bool, i32)]) -> HeckeElement {
    let perms = Perm::all(n);
    let mut h = HeckeElement::zero(n);
    for &(a, b, w, g, c) in seed {
        let mut y = vec![0; n];
        y[0] = a;
        y[n - 1] += b;
        let term = HeckeElement::monomial(y, perms[w % perms.len()].clone(), g, Scalar::from_int(c as i64));
        h = &h + &term;
    }
    h
}

fn term_strategy() -> impl Strategy<Value = Vec<(i32, i32, usize, bool, i32)>> {
    prop::collection::vec((-1i32..=1, -1i32..=1, 0usize..24, any::<bool>(), -2i32..=2), 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn associativity_rank_three(a in term_strategy(), b in term_strategy(), c in term_strategy()) {
        let (a, b, c) = (random_element(3, &a), random_element(3, &b), random_element(3, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn gamma_twist_is_multiplicative(a in term_strategy(), b in term_strategy()) {
        let strip = |v: Vec<(i32, i32, usize, bool, i32)>| v.into_iter().map(|(x, y, w, _, c)| (x, y, w, false, c)).collect::<Vec<_>>();
        let (a, b) = (random_element(3, &strip(a)), random_element(3, &strip(b)));
        let lhs = (&a * &b).gamma_twist().unwrap();
        let rhs = &a.gamma_twist().unwrap() * &b.gamma_twist().unwrap();
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert_eq!(lhs.gamma_twist().unwrap(), &a * &b);
    }
}

#[test]
fn braid_relations_up_to_rank_five() {
    for n in 3..=5 {
        for i in 1..n - 1 {
            let a = HeckeElement::t_simple(n, i);
            let b = HeckeElement::t_simple(n, i + 1);
            assert_eq!(&(&a * &b) * &a, &(&b * &a) * &b);
        }
    }
}

#[test]
fn gamma_conjugation_of_generators() {
    let n = 4;
    let g = HeckeElement::t_gamma(n);
    for i in 1..n {
        let t = HeckeElement::t_simple(n, i);
        assert_eq!(&(&g * &t) * &g, HeckeElement::t_simple(n, n - i));
    }
    let y = [2, 0, -1, 3];
    assert_eq!(&(&g * &HeckeElement::theta(&y)) * &g, HeckeElement::theta(&[-3, 1, 0, -2]));
}

#[test]
fn intertwiner_word_independence_rank_four() {
    for w in Perm::all(4) {
        let reference = intertwiner(&w);
        for word in w.all_reduced_words() {
            assert_eq!(intertwiner_from_word(4, &word), reference, "w = {w}, word = {word:?}");
        }
    }
}

#[test]
fn intertwiners_twist_theta() {
    let n = 3;
    for w in Perm::all(n) {
        let iota = intertwiner(&w);
        for k in 0..n {
            let mut y = vec![0; n];
            y[k] = 1;
            let lhs = &iota * &HeckeElement::theta(&y);
            let rhs = &HeckeElement::theta(&w.act(&y)) * &iota;
            assert_eq!(lhs, rhs, "w = {w}, y = {y:?}");
        }
    }
}

#[test]
fn simple_intertwiner_squares_to_product_of_denominators() {
    let n = 2;
    let iota = simple_intertwiner(n, 1);
    let p = GroupAlgebraElement::from_scalar(n, Scalar::p());
    let a = &p - &GroupAlgebraElement::theta(&[-1, 1]);
    let b = &p - &GroupAlgebraElement::theta(&[1, -1]);
    assert_eq!(&iota * &iota, HeckeElement::from_group_algebra(&(&a * &b)));
}

#[test]
fn normalized_intertwiners_factor_along_reduced_words() {
    for n in 2..=4 {
        for w in Perm::all(n) {
            for i in 1..n {
                let s = Perm::simple(n, i);
                let ws = w.compose(&s);
                if ws.length() < w.length() {
                    continue;
                }
                // ι⁰_{ws} = ι⁰_w ι⁰_s amounts to these two identities.
                assert_eq!(&intertwiner(&w) * &intertwiner(&s), intertwiner(&ws));
                let lhs = intertwiner_denominator(&ws);
                let rhs = &intertwiner_denominator(&w).act(&s) * &intertwiner_denominator(&s);
                assert_eq!(lhs, rhs, "n_{ws} for w = {w}, s = s_{i}");
            }
        }
    }
}

#[test]
fn normalized_intertwiner_commutes_past_denominators() {
    for w in Perm::all(3) {
        for i in 1..3 {
            let s = Perm::simple(3, i);
            let n_w = HeckeElement::from_group_algebra(&intertwiner_denominator(&w));
            let moved = HeckeElement::from_group_algebra(&intertwiner_denominator(&w).act(&s));
            assert_eq!(&n_w * &intertwiner(&s), &intertwiner(&s) * &moved);
        }
    }
}

fn basis_box(n: usize) -> Vec<HeckeElement> {
    let mut ys = vec![vec![0; n]];
    for j in 0..n {
        for s in [1, -1] {
            let mut y = vec![0; n];
            y[j] = s;
            ys.push(y);
        }
    }
    let mut out = Vec::new();
    for y in &ys {
        for w in Perm::all(n) {
            for g in [false, true] {
                out.push(HeckeElement::monomial(y.clone(), w.clone(), g, Scalar::one()));
            }
        }
    }
    out
}

#[test]
fn associativity_exhaustive_small_rank() {
    use rayon::prelude::*;
    for n in 1..=3 {
        let basis = basis_box(n);
        let products: Vec<Vec<HeckeElement>> = basis.par_iter().map(|a| basis.iter().map(|b| a * b).collect()).collect();
        let bad = (0..basis.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (basis, products) = (&basis, &products);
                (0..basis.len()).flat_map(move |j| {
                    (0..basis.len()).filter_map(move |k| {
                        let lhs = &products[i][j] * &basis[k];
                        let rhs = &basis[i] * &products[j][k];
                        (lhs != rhs).then_some((i, j, k))
                    })
                })
            })
            .count();
        assert_eq!(bad, 0, "rank {n}");
    }
}

#[test]
fn associativity_random_rank_four() {
    use rand::{Rng, SeedableRng};
    use rayon::prelude::*;
    let bad = (0..10_000u64)
        .into_par_iter()
        .filter(|&seed| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut pick = || {
                let terms: Vec<(i32, i32, usize, bool, i32)> = (0..rng.gen_range(1..=2))
                    .map(|_| (rng.gen_range(-1..=1), rng.gen_range(-1..=1), rng.gen_range(0..24), rng.gen(), rng.gen_range(-2..=2)))
                    .collect();
                random_element(4, &terms)
            };
            let (a, b, c) = (pick(), pick(), pick());
            &(&a * &b) * &c != &a * &(&b * &c)
        })
        .count();
    assert_eq!(bad, 0);
}
