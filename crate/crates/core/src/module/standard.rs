//! Standard modules `E = H ⊗_{H_L} (χ_1 ⊗ ⋯ ⊗ χ_k)` induced from
//! Steinberg-type characters of a Levi subalgebra.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::linalg::QMatrix;
use crate::params::{Multisegment, Segment};
use crate::scalar::{rat, rat_pow, Rational};
use crate::weyl::Perm;

use super::MatrixModule;

/// Numeric value of the unit label `k ∈ Z/N`. Labels `0` and `N/2` map to
/// `±1`. Any other label maps to `r^{k'}` with `k' ∈ (−N/2, N/2)` and `r` the
/// smallest prime coprime to `q`, so dual labels map to inverse values.
pub fn unit_value(k: u32, modulus: u32, q: &Rational) -> Rational {
    let k = k % modulus;
    if k == 0 {
        return Rational::one();
    }
    if 2 * k == modulus {
        return -Rational::one();
    }
    let centered = if 2 * k < modulus { k as i64 } else { k as i64 - modulus as i64 };
    let mut r = 2i64;
    let coprime = |r: i64| {
        let b = BigInt::from(r);
        q.numer().gcd(&b).is_one() && q.denom().gcd(&b).is_one()
    };
    while !(is_prime(r) && coprime(r)) {
        r += 1;
    }
    rat_pow(&rat(r), centered)
}

fn is_prime(r: i64) -> bool {
    r >= 2 && (2..).take_while(|d| d * d <= r).all(|d| r % d != 0)
}

pub fn check_specialization(q: &Rational) -> Result<()> {
    if q.is_zero() || q.abs().is_one() {
        return Err(Error::BadSpecialization(q.to_string()));
    }
    Ok(())
}

/// The inducing character `t` of an ordered segment sequence.
pub fn inducing_character(order: &[Segment], modulus: u32, q: &Rational) -> Vec<Rational> {
    order
        .iter()
        .flat_map(|s| {
            let u = unit_value(s.unit, modulus, q);
            s.exponents_x2().map(move |e| &u * rat_pow(q, e as i64)).collect::<Vec<_>>()
        })
        .collect()
}

/// Standard module of `m` with its segments in standard order.
pub fn induced_standard(m: &Multisegment, q: &Rational, modulus: u32) -> Result<MatrixModule> {
    induced_from_sequence(&m.standard_order(), q, modulus)
}

/// Standard module for an explicitly ordered segment sequence. The sequence
/// must have non-increasing centers.
pub fn induced_from_sequence(order: &[Segment], q: &Rational, modulus: u32) -> Result<MatrixModule> {
    check_specialization(q)?;
    for w in order.windows(2) {
        if w[0].center_x2() < w[1].center_x2() {
            return Err(Error::UnorderedSegments(format!("{} before {}", w[0], w[1])));
        }
    }
    let t = inducing_character(order, modulus, q);
    let blocks: Vec<usize> = order.iter().map(|s| s.len as usize).collect();
    let mut candidates: BTreeSet<Rational> = t.iter().cloned().collect();
    candidates.extend(t.iter().map(|x| x.recip()));
    build_induced(&blocks, &t, q, candidates)
}

/// `H ⊗_{H_L} χ` where `χ(T_s) = −1` on `W_L` and `χ(θ_y) = t^y`.
pub fn build_induced(
    blocks: &[usize],
    t: &[Rational],
    q: &Rational,
    candidates: BTreeSet<Rational>,
) -> Result<MatrixModule> {
    let n: usize = blocks.iter().sum();
    let reps = Perm::min_coset_reps(blocks);
    let index: BTreeMap<Perm, usize> = reps.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let d = reps.len();
    let p = q * q;

    // u = u'·v with u' a minimal representative and v ∈ W_L; returns (u', l(v)).
    let reduce = |u: &Perm| -> (Perm, usize) {
        let mut images: Vec<usize> = (0..n).map(|j| u.image(j)).collect();
        let mut start = 0;
        for &b in blocks {
            images[start..start + b].sort_unstable();
            start += b;
        }
        let rep = Perm::from_images(&images);
        let v = rep.inverse().compose(u);
        (rep, v.length())
    };

    let mut t_mats = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let mut m = QMatrix::zeros(d, d);
        for (col, w) in reps.iter().enumerate() {
            let sw = w.mul_simple_left(i);
            if w.has_left_descent(i) {
                m[(col, col)] += &p - Rational::one();
                m[(index[&sw], col)] += p.clone();
            } else if let Some(&row) = index.get(&sw) {
                m[(row, col)] += Rational::one();
            } else {
                m[(col, col)] -= Rational::one();
            }
        }
        t_mats.push(m);
    }

    let mut theta_mats = Vec::with_capacity(n);
    for j in 0..n {
        let mut y = vec![0; n];
        y[j] = 1;
        let mut m = QMatrix::zeros(d, d);
        for (col, w) in reps.iter().enumerate() {
            let h = &HeckeElement::theta(&y) * &HeckeElement::t(w);
            for (u, f) in h.to_right_form()? {
                let val = f.eval(q, t);
                if val.is_zero() {
                    continue;
                }
                let (rep, lv) = reduce(&u);
                let sign = if lv % 2 == 0 { Rational::one() } else { -Rational::one() };
                m[(index[&rep], col)] += val * sign;
            }
        }
        theta_mats.push(m);
    }

    let tags = reps.iter().map(|w| format!("T{w}x0")).collect();
    MatrixModule::new(q.clone(), t_mats, theta_mats, None, tags, candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_frac;

    fn seg(s: i32, l: u32) -> Segment {
        Segment::new(0, s, l)
    }

    #[test]
    fn steinberg_rank_two() {
        let m = Multisegment::new(vec![seg(-1, 2)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert_eq!(e.dim(), 1);
        assert_eq!(e.t_simple(1)[(0, 0)], rat(-1));
        assert_eq!(e.theta_basis(1)[(0, 0)], rat_frac(1, 3));
        assert_eq!(e.theta_basis(2)[(0, 0)], rat(3));
        assert!(e.audit().is_empty());
    }

    #[test]
    fn principal_series_rank_two() {
        let m = Multisegment::new(vec![seg(1, 1), seg(-1, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(e.audit().is_empty(), "{:?}", e.audit());
        let cc = e.central_character().unwrap();
        assert_eq!(cc, vec![rat(3) + rat_frac(1, 3), rat(1)]);
    }

    #[test]
    fn rank_one_point() {
        let m = Multisegment::new(vec![seg(0, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert_eq!(e.dim(), 1);
        assert_eq!(e.theta_basis(1)[(0, 0)], rat(1));
    }

    #[test]
    fn bad_inputs() {
        let m = Multisegment::new(vec![seg(0, 1)]);
        assert!(matches!(induced_standard(&m, &rat(1), 2), Err(Error::BadSpecialization(_))));
        assert!(matches!(
            induced_from_sequence(&[seg(-1, 1), seg(1, 1)], &rat(3), 2),
            Err(Error::UnorderedSegments(_))
        ));
    }

    #[test]
    fn larger_modules_satisfy_relations() {
        let m = Multisegment::new(vec![seg(2, 1), seg(0, 1), seg(-2, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert_eq!(e.dim(), 6);
        assert!(e.audit().is_empty(), "{:?}", e.audit());
        let m = Multisegment::new(vec![seg(0, 2), seg(0, 1), seg(2, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert_eq!(e.dim(), 12);
        assert!(e.audit().is_empty(), "{:?}", e.audit());
    }

    #[test]
    fn units_invert_under_duality() {
        let q = rat(3);
        assert_eq!(unit_value(1, 4, &q) * unit_value(3, 4, &q), rat(1));
        assert_eq!(unit_value(2, 4, &q), rat(-1));
        assert_eq!(unit_value(1, 4, &q), rat(2));
    }
}
