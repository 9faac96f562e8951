//! The group algebra `Z[v, v⁻¹][Y]` of the cocharacter lattice `Y = Z^n`.
//!
//! Elements are finite sums `Σ c_y θ_y` with Laurent-polynomial coefficients.
//! Exact division treats an element as a Laurent polynomial in the `n + 1`
//! variables `(θ_{e_1}, …, θ_{e_n}, v)` and runs long division in lex order,
//! cut off by the Newton-box of the would-be quotient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{rat_pow, Rational, Scalar};
use crate::weyl::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<Vec<i32>, Scalar>,
}

type Flat = BTreeMap<Vec<i32>, Rational>;

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::from_scalar(n, Scalar::one())
    }

    pub fn from_scalar(n: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; n], c)
    }

    /// `θ_y`.
    pub fn theta(y: &[i32]) -> Self {
        Self::monomial(y.to_vec(), Scalar::one())
    }

    pub fn monomial(y: Vec<i32>, c: Scalar) -> Self {
        let n = y.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(y, c);
        }
        GroupAlgebraElement { n, terms }
    }

    /// `θ_{e_i - e_j}` raised to `k`, with 0-based indices.
    pub fn theta_root(n: usize, i: usize, j: usize, k: i32) -> Self {
        let mut y = vec![0; n];
        y[i] += k;
        y[j] -= k;
        Self::theta(&y)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// The coefficient of `θ_0` when that is the only term.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        if self.terms.len() == 1 {
            let (y, c) = self.terms.iter().next().unwrap();
            if y.iter().all(|&a| a == 0) {
                return Some(c);
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, y: &[i32]) -> Scalar {
        self.terms.get(y).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, y: Vec<i32>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&y) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&y);
                }
            }
            None => {
                self.terms.insert(y, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (y, a) in &self.terms {
            out.add_term(y.clone(), &(a * c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (y, a) in &self.terms {
            out.add_term(y.clone(), &a.scale(c));
        }
        out
    }

    /// Multiply by the monomial `θ_z`.
    pub fn shift(&self, z: &[i32]) -> Self {
        GroupAlgebraElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(y, c)| (add_vec(y, z), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// The action `θ_y ↦ θ_{w·y}` of the symmetric group.
    pub fn act(&self, w: &Perm) -> Self {
        let mut out = Self::zero(self.n);
        for (y, c) in &self.terms {
            out.add_term(w.act(y), c);
        }
        out
    }

    /// The action `θ_y ↦ θ_{γ(y)}`, `γ(y) = −reverse(y)`.
    pub fn gamma(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (y, c) in &self.terms {
            out.add_term(gamma_vec(y), c);
        }
        out
    }

    /// Replace `v` by `q` but keep the lattice variables.
    pub fn specialize_v(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.n);
        for (y, c) in &self.terms {
            out.add_term(y.clone(), &Scalar::from_rational(c.eval(q)));
        }
        out
    }

    /// Evaluate at `v = q` and the character `θ_y ↦ ∏ t_i^{y_i}`.
    pub fn eval(&self, q: &Rational, t: &[Rational]) -> Rational {
        debug_assert_eq!(t.len(), self.n);
        let mut acc = Rational::zero();
        for (y, c) in &self.terms {
            let mut mono = c.eval(q);
            for (ti, yi) in t.iter().zip(y) {
                if *yi != 0 {
                    mono *= rat_pow(ti, *yi as i64);
                }
            }
            acc += mono;
        }
        acc
    }

    fn flatten(&self) -> Flat {
        let mut out = Flat::new();
        for (y, c) in &self.terms {
            for (k, a) in c.terms() {
                let mut key = y.clone();
                key.push(k);
                out.insert(key, a.clone());
            }
        }
        out
    }

    fn unflatten(n: usize, flat: &Flat) -> Self {
        let mut out = Self::zero(n);
        for (key, a) in flat {
            let y = key[..n].to_vec();
            out.add_term(y, &Scalar::monomial(a.clone(), key[n]));
        }
        out
    }

    /// Componentwise minimum and maximum exponents over the support.
    pub fn exponent_box(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        let flat = self.flatten();
        let mut it = flat.keys();
        let first = it.next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for key in it {
            for (i, &a) in key.iter().enumerate() {
                lo[i] = lo[i].min(a);
                hi[i] = hi[i].max(a);
            }
        }
        Some((lo, hi))
    }

    /// The unique `h` with `g·h = self`, or `NotDivisible`.
    pub fn exact_div(&self, g: &Self) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::NotDivisible);
        }
        if self.n != g.n {
            return Err(Error::RankMismatch(self.n, g.n));
        }
        if self.is_zero() {
            return Ok(Self::zero(self.n));
        }
        if g.is_one() {
            return Ok(self.clone());
        }
        let (flo, fhi) = self.exponent_box().unwrap();
        let (glo, ghi) = g.exponent_box().unwrap();
        let lo: Vec<i32> = flo.iter().zip(&glo).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = fhi.iter().zip(&ghi).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Err(Error::NotDivisible);
        }
        let gflat = g.flatten();
        let (glead_key, glead) = gflat.iter().next_back().unwrap();
        let mut rem = self.flatten();
        let mut quot = Flat::new();
        while let Some((rkey, rc)) = rem.iter().next_back() {
            let qkey: Vec<i32> = rkey.iter().zip(glead_key).map(|(a, b)| a - b).collect();
            let in_box = qkey
                .iter()
                .enumerate()
                .all(|(i, &a)| lo[i] <= a && a <= hi[i]);
            if !in_box {
                return Err(Error::NotDivisible);
            }
            let qc = rc / glead;
            for (gk, gc) in &gflat {
                let key: Vec<i32> = gk.iter().zip(&qkey).map(|(a, b)| a + b).collect();
                let delta = gc * &qc;
                let entry = rem.entry(key.clone()).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qkey, qc);
        }
        Ok(Self::unflatten(self.n, &quot))
    }

    /// Factor out a monomial so that every lattice and `v` exponent has
    /// minimum zero, and scale so that the lex-leading coefficient is 1.
    /// Returns the normalized element together with the removed monomial
    /// `(y, k, c)` meaning `self = c · v^k θ_y · normalized`.
    pub fn monic_part(&self) -> Option<(Self, Vec<i32>, i32, Rational)> {
        let (lo, _) = self.exponent_box()?;
        let y = lo[..self.n].to_vec();
        let k = lo[self.n];
        let neg: Vec<i32> = y.iter().map(|a| -a).collect();
        let shifted = self.shift(&neg);
        let mut flat = shifted.flatten();
        let lead = flat.values().next_back().unwrap().clone();
        for val in flat.values_mut() {
            *val /= &lead;
        }
        let mut out = Self::unflatten(self.n, &flat);
        out = GroupAlgebraElement {
            n: self.n,
            terms: out.terms.into_iter().map(|(y, c)| (y, c.shift(-k))).collect(),
        };
        Some((out, y, k, lead))
    }
}

pub(crate) fn add_vec(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn gamma_vec(y: &[i32]) -> Vec<i32> {
    y.iter().rev().map(|a| -a).collect()
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (y, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if y.iter().all(|&a| a == 0) {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})θ{y:?}")?;
            }
        }
        Ok(())
    }
}

impl Add<&GroupAlgebraElement> for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn add(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        for (y, c) in &rhs.terms {
            out.add_term(y.clone(), c);
        }
        out
    }
}

impl Sub<&GroupAlgebraElement> for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn sub(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = self.clone();
        for (y, c) in &rhs.terms {
            out.add_term(y.clone(), &-c);
        }
        out
    }
}

impl Neg for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        GroupAlgebraElement {
            n: self.n,
            terms: self.terms.iter().map(|(y, c)| (y.clone(), -c)).collect(),
        }
    }
}

impl Mul<&GroupAlgebraElement> for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn mul(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
        let mut out = GroupAlgebraElement::zero(self.n.max(rhs.n));
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(add_vec(a, b), &(x * y));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GroupAlgebraElement {
            type Output = GroupAlgebraElement;
            fn $m(self, rhs: GroupAlgebraElement) -> GroupAlgebraElement {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn th(y: &[i32]) -> GroupAlgebraElement {
        GroupAlgebraElement::theta(y)
    }

    #[test]
    fn bernstein_quotient_rank_two() {
        let f = &th(&[1, 0]) - &th(&[0, 1]);
        let g = &GroupAlgebraElement::one(2) - &th(&[-1, 1]);
        let h = f.exact_div(&g).unwrap();
        assert_eq!(h, th(&[1, 0]));
        assert_eq!(&g * &h, f);
    }

    #[test]
    fn divide_by_one() {
        let f = &th(&[2, -1]) + &GroupAlgebraElement::from_scalar(2, Scalar::p());
        assert_eq!(f.exact_div(&GroupAlgebraElement::one(2)).unwrap(), f);
    }

    #[test]
    fn geometric_series() {
        let one = GroupAlgebraElement::one(2);
        let a = th(&[1, -1]);
        let f = &one - &a.pow(2);
        let g = &one - &a;
        let h = f.exact_div(&g).unwrap();
        assert_eq!(h, &one + &a);
        assert_eq!(&g * &h, f);
    }

    #[test]
    fn non_divisible_is_reported() {
        let one = GroupAlgebraElement::one(2);
        let f = &one + &th(&[1, -1]);
        let g = &one - &th(&[1, -1]);
        assert_eq!(f.exact_div(&g), Err(Error::NotDivisible));
        let h = &GroupAlgebraElement::from_scalar(2, Scalar::p()) - &th(&[1, 0]);
        assert_eq!(h.exact_div(&g), Err(Error::NotDivisible));
    }

    #[test]
    fn division_with_v_coefficients() {
        let n = 3;
        let p = GroupAlgebraElement::from_scalar(n, Scalar::p());
        let a = &p - &th(&[0, -1, 1]);
        let b = &p - &th(&[-1, 0, 1]);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn eval_character() {
        let f = &th(&[1, -1]) + &GroupAlgebraElement::from_scalar(2, Scalar::p());
        let t = [rat(3), rat(1) / rat(3)];
        assert_eq!(f.eval(&rat(3), &t), rat(9) + rat(9));
    }

    #[test]
    fn gamma_is_negated_reversal() {
        assert_eq!(th(&[2, -1, 5]).gamma(), th(&[-5, 1, -2]));
    }
}
