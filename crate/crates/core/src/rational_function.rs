//! Fractions of group-algebra elements.
//!
//! There is no multivariate gcd here. A fraction is normalized by trying exact
//! division, then by stripping the monomial content of the denominator and
//! making its lex-leading coefficient 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group_algebra::GroupAlgebraElement;
use crate::scalar::{Rational, Scalar};
use crate::weyl::Perm;

#[derive(Clone)]
pub struct RationalFunction {
    num: GroupAlgebraElement,
    den: GroupAlgebraElement,
}

impl RationalFunction {
    pub fn new(num: GroupAlgebraElement, den: GroupAlgebraElement) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize_parts(num, den))
    }

    fn normalize_parts(num: GroupAlgebraElement, den: GroupAlgebraElement) -> Self {
        let n = den.rank();
        if num.is_zero() {
            return RationalFunction { num: GroupAlgebraElement::zero(n), den: GroupAlgebraElement::one(n) };
        }
        if let Ok(q) = num.exact_div(&den) {
            return RationalFunction { num: q, den: GroupAlgebraElement::one(n) };
        }
        let (d, y, k, c) = den.monic_part().expect("nonzero denominator");
        let neg: Vec<i32> = y.iter().map(|a| -a).collect();
        let num = num
            .shift(&neg)
            .scale(&Scalar::monomial(c.recip(), -k));
        RationalFunction { num, den: d }
    }

    pub fn from_ga(f: GroupAlgebraElement) -> Self {
        let n = f.rank();
        RationalFunction { num: f, den: GroupAlgebraElement::one(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_ga(GroupAlgebraElement::zero(n))
    }

    pub fn one(n: usize) -> Self {
        Self::from_ga(GroupAlgebraElement::one(n))
    }

    pub fn numerator(&self) -> &GroupAlgebraElement {
        &self.num
    }

    pub fn denominator(&self) -> &GroupAlgebraElement {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying group-algebra element when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&GroupAlgebraElement> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::normalize_parts(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn act(&self, w: &Perm) -> Self {
        Self::normalize_parts(self.num.act(w), self.den.act(w))
    }

    pub fn gamma(&self) -> Self {
        Self::normalize_parts(self.num.gamma(), self.den.gamma())
    }

    pub fn scale(&self, c: &GroupAlgebraElement) -> Self {
        Self::normalize_parts(&self.num * c, self.den.clone())
    }

    /// Value at `v = q` and the character `t`, or `SingularDenominator`.
    pub fn eval(&self, q: &Rational, t: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(q, t);
        if d.is_zero() {
            return Err(Error::SingularDenominator(format!("{self} at {t:?}")));
        }
        Ok(self.num.eval(q, t) / d)
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let signed = |x: &GroupAlgebraElement| if sign { x.clone() } else { -x };
        if self.den == rhs.den {
            return Self::normalize_parts(&self.num + &signed(&rhs.num), self.den.clone());
        }
        if let Ok(f) = self.den.exact_div(&rhs.den) {
            let num = &self.num + &signed(&(&rhs.num * &f));
            return Self::normalize_parts(num, self.den.clone());
        }
        if let Ok(f) = rhs.den.exact_div(&self.den) {
            let num = &(&self.num * &f) + &signed(&rhs.num);
            return Self::normalize_parts(num, rhs.den.clone());
        }
        let num = &(&self.num * &rhs.den) + &signed(&(&rhs.num * &self.den));
        Self::normalize_parts(num, &self.den * &rhs.den)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, true)
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self.combine(rhs, false)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.num.rank());
        }
        RationalFunction::normalize_parts(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(y: &[i32]) -> GroupAlgebraElement {
        GroupAlgebraElement::theta(y)
    }

    #[test]
    fn monomial_cancellation() {
        let r = RationalFunction::new(&th(&[1, -1]) - &th(&[2, -2]), th(&[1, -1])).unwrap();
        assert!(r.denominator().is_one());
        assert_eq!(*r.numerator(), &GroupAlgebraElement::one(2) - &th(&[1, -1]));
    }

    #[test]
    fn self_quotient_is_one() {
        let f = &th(&[1, 0]) + &GroupAlgebraElement::from_scalar(2, Scalar::p());
        let r = RationalFunction::new(f.clone(), f).unwrap();
        assert!(r.numerator().is_one());
        assert!(r.denominator().is_one());
    }

    #[test]
    fn geometric_quotient() {
        let one = GroupAlgebraElement::one(2);
        let a = th(&[1, -1]);
        let r = RationalFunction::new(&one - &a.pow(2), &one - &a).unwrap();
        assert!(r.denominator().is_one());
        assert_eq!(*r.numerator(), &one + &a);
    }

    #[test]
    fn zero_denominator_rejected() {
        let r = RationalFunction::new(GroupAlgebraElement::one(2), GroupAlgebraElement::zero(2));
        assert!(matches!(r, Err(Error::ZeroDenominator)));
    }

    #[test]
    fn fractions_add_and_compare() {
        let one = GroupAlgebraElement::one(2);
        let a = th(&[1, -1]);
        let x = RationalFunction::new(one.clone(), &one - &a).unwrap();
        let y = RationalFunction::new(a.clone(), &one - &a).unwrap();
        let s = &x + &y;
        assert_eq!(s, RationalFunction::new(&one + &a, &one - &a).unwrap());
        let d = &x - &y;
        assert_eq!(d, RationalFunction::one(2));
    }
}
