use hecke_core::{GroupAlgebraElement, HeckeElement, Scalar};

fn power_sum(n: usize, k: i32) -> HeckeElement {
    let mut f = GroupAlgebraElement::zero(n);
    for j in 0..n {
        let mut y = vec![0; n];
        y[j] = k;
        f = &f + &GroupAlgebraElement::monomial(y, Scalar::one());
    }
    HeckeElement::from_group_algebra(&f)
}

#[test]
fn power_sums_are_central() {
    for n in 2..=4 {
        for k in [-2, -1, 1, 2, 3] {
            assert!(power_sum(n, k).is_central(), "n = {n}, k = {k}");
            assert!(!power_sum(n, k).is_central_twisted(), "n = {n}, k = {k}");
            assert!((&power_sum(n, k) + &power_sum(n, -k)).is_central_twisted(), "n = {n}, k = {k}");
        }
    }
}

#[test]
fn theta_e1_is_not_central() {
    for n in 2..=4 {
        let mut y = vec![0; n];
        y[0] = 1;
        assert!(!HeckeElement::theta(&y).is_central(), "n = {n}");
    }
}

#[test]
fn products_of_power_sums_stay_central() {
    let z = &power_sum(3, 1) * &power_sum(3, -1);
    assert!(z.is_central_twisted());
    let not = &z + &HeckeElement::t_simple(3, 1);
    assert!(!not.is_central());
}
