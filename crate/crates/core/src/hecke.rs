//! The twisted affine Hecke algebra `H(G⁺, v) = H(G, v) ⋊ ⟨T_γ⟩` for `GL_n`.
//!
//! Elements are kept in Bernstein left normal form `Σ c · θ_y T_w T_γ^ε`. The
//! only nontrivial rewrite is moving `T_s` past `θ_c`:
//!
//! ```text
//! T_s θ_c = θ_{s(c)} T_s − (p − 1)(θ_{s(c)} − θ_c) / (1 − θ_{−α})
//! ```
//!
//! where the quotient is computed by exact division in the group algebra.
//! Products of the form `T_u θ_c` and `T_u T_w` are memoized per thread.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::group_algebra::{add_vec, GroupAlgebraElement};
use crate::scalar::Scalar;
use crate::weyl::{gamma_lattice, Perm};

type Key = (Vec<i32>, Perm, bool);
type LeftTerms = Vec<(Vec<i32>, Perm, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    terms: BTreeMap<Key, Scalar>,
}

#[derive(Default)]
struct Caches {
    iwahori: HashMap<(Perm, Perm), Rc<Vec<(Perm, Scalar)>>>,
    t_theta: HashMap<(Perm, Vec<i32>), Rc<LeftTerms>>,
    bernstein: HashMap<(usize, Vec<i32>), Rc<GroupAlgebraElement>>,
    intertwiners: HashMap<Perm, Rc<HeckeElement>>,
}

const CACHE_LIMIT: usize = 400_000;

thread_local! {
    static CACHES: RefCell<Caches> = RefCell::new(Caches::default());
}

fn p_minus_one() -> Scalar {
    &Scalar::p() - &Scalar::one()
}

/// The smallest left descent `s` of `u` with `u = s·u'`.
fn split_left(u: &Perm) -> Option<(usize, Perm)> {
    (1..u.n())
        .find(|&i| u.has_left_descent(i))
        .map(|i| (i, u.mul_simple_left(i)))
}

/// `T_s T_r` for a simple reflection `s_i`.
fn simple_times(i: usize, r: &Perm, c: &Scalar, out: &mut HashMap<Perm, Scalar>) {
    let sr = r.mul_simple_left(i);
    if r.has_left_descent(i) {
        accumulate(out, r.clone(), &(c * &p_minus_one()));
        accumulate(out, sr, &(c * &Scalar::p()));
    } else {
        accumulate(out, sr, c);
    }
}

fn accumulate<K: std::hash::Hash + Eq>(map: &mut HashMap<K, Scalar>, k: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(k).or_default();
    *e += c;
}

/// `T_u T_w` in the basis `{T_r}`.
fn iwahori_product(u: &Perm, w: &Perm) -> Rc<Vec<(Perm, Scalar)>> {
    let key = (u.clone(), w.clone());
    if let Some(hit) = CACHES.with(|c| c.borrow().iwahori.get(&key).cloned()) {
        return hit;
    }
    let result: Vec<(Perm, Scalar)> = match split_left(u) {
        None => vec![(w.clone(), Scalar::one())],
        Some((i, rest)) => {
            let inner = iwahori_product(&rest, w);
            let mut acc = HashMap::new();
            for (r, c) in inner.iter() {
                simple_times(i, r, c, &mut acc);
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        }
    };
    let rc = Rc::new(result);
    CACHES.with(|c| {
        let mut c = c.borrow_mut();
        if c.iwahori.len() > CACHE_LIMIT {
            c.iwahori.clear();
        }
        c.iwahori.insert(key, rc.clone());
    });
    rc
}

/// `(θ_{s(c)} − θ_c) / (1 − θ_{−α_i})`.
fn bernstein_quotient(i: usize, c: &[i32]) -> Rc<GroupAlgebraElement> {
    let key = (i, c.to_vec());
    if let Some(hit) = CACHES.with(|ca| ca.borrow().bernstein.get(&key).cloned()) {
        return hit;
    }
    let n = c.len();
    let sc = Perm::simple(n, i).act(c);
    let num = &GroupAlgebraElement::theta(&sc) - &GroupAlgebraElement::theta(c);
    let den = &GroupAlgebraElement::one(n) - &GroupAlgebraElement::theta_root(n, i, i - 1, 1);
    let q = num
        .exact_div(&den)
        .expect("Bernstein numerator is always divisible by 1 - θ_{-α}");
    let rc = Rc::new(q);
    CACHES.with(|ca| {
        let mut ca = ca.borrow_mut();
        if ca.bernstein.len() > CACHE_LIMIT {
            ca.bernstein.clear();
        }
        ca.bernstein.insert(key, rc.clone());
    });
    rc
}

/// `T_u θ_c` in left normal form.
fn t_theta(u: &Perm, c: &[i32]) -> Rc<LeftTerms> {
    let key = (u.clone(), c.to_vec());
    if let Some(hit) = CACHES.with(|ca| ca.borrow().t_theta.get(&key).cloned()) {
        return hit;
    }
    let n = c.len();
    let result: LeftTerms = match split_left(u) {
        None => vec![(c.to_vec(), Perm::identity(n), Scalar::one())],
        Some((i, rest)) => {
            let inner = t_theta(&rest, c);
            let s = Perm::simple(n, i);
            let pm1 = p_minus_one();
            let mut acc: HashMap<(Vec<i32>, Perm), Scalar> = HashMap::new();
            for (z, r, coef) in inner.iter() {
                let sz = s.act(z);
                let mut tt = HashMap::new();
                simple_times(i, r, coef, &mut tt);
                for (r2, c2) in tt {
                    accumulate(&mut acc, (sz.clone(), r2), &c2);
                }
                if sz != *z {
                    let b = bernstein_quotient(i, z);
                    let factor = -(&pm1 * coef);
                    for (y, cb) in b.terms() {
                        accumulate(&mut acc, (y.clone(), r.clone()), &(cb * &factor));
                    }
                }
            }
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((y, w), c)| (y, w, c))
                .collect()
        }
    };
    let rc = Rc::new(result);
    CACHES.with(|ca| {
        let mut ca = ca.borrow_mut();
        if ca.t_theta.len() > CACHE_LIMIT {
            ca.t_theta.clear();
        }
        ca.t_theta.insert(key, rc.clone());
    });
    rc
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        Self::monomial(vec![0; n], Perm::identity(n), false, c)
    }

    pub fn monomial(y: Vec<i32>, w: Perm, gamma: bool, c: Scalar) -> Self {
        assert_eq!(y.len(), w.n());
        let n = y.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((y, w, gamma), c);
        }
        HeckeElement { n, terms }
    }

    pub fn theta(y: &[i32]) -> Self {
        Self::monomial(y.to_vec(), Perm::identity(y.len()), false, Scalar::one())
    }

    pub fn t(w: &Perm) -> Self {
        Self::monomial(vec![0; w.n()], w.clone(), false, Scalar::one())
    }

    pub fn t_simple(n: usize, i: usize) -> Self {
        Self::t(&Perm::simple(n, i))
    }

    pub fn t_gamma(n: usize) -> Self {
        Self::monomial(vec![0; n], Perm::identity(n), true, Scalar::one())
    }

    /// Embed `Σ c_y θ_y` from the group algebra.
    pub fn from_group_algebra(f: &GroupAlgebraElement) -> Self {
        let n = f.rank();
        let mut out = Self::zero(n);
        for (y, c) in f.terms() {
            out.add_term((y.clone(), Perm::identity(n), false), c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, y: &[i32], w: &Perm, gamma: bool) -> Scalar {
        self.terms
            .get(&(y.to_vec(), w.clone(), gamma))
            .cloned()
            .unwrap_or_default()
    }

    pub fn has_gamma_part(&self) -> bool {
        self.terms.keys().any(|k| k.2)
    }

    fn add_term(&mut self, k: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(self.n);
        for (k, a) in &self.terms {
            out.add_term(k.clone(), &(a * c));
        }
        out
    }

    /// Left multiplication by an element of the group algebra.
    pub fn left_mul_ga(&self, f: &GroupAlgebraElement) -> Self {
        let mut out = Self::zero(self.n);
        for ((y, w, e), a) in &self.terms {
            for (z, b) in f.terms() {
                out.add_term((add_vec(y, z), w.clone(), *e), &(a * b));
            }
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        let mut acc: HashMap<Key, Scalar> = HashMap::new();
        for ((ya, ua, ea), ca) in &self.terms {
            for ((yb, ub, eb), cb) in &other.terms {
                let (yb, ub) = if *ea {
                    (gamma_lattice(yb), ub.gamma())
                } else {
                    (yb.clone(), ub.clone())
                };
                let cab = ca * cb;
                let flip = ea ^ eb;
                for (z, u, c1) in t_theta(ua, &yb).iter() {
                    let y = add_vec(ya, z);
                    let c = &cab * c1;
                    for (r, c2) in iwahori_product(u, &ub).iter() {
                        accumulate(&mut acc, (y.clone(), r.clone(), flip), &(&c * c2));
                    }
                }
            }
        }
        let mut out = Self::zero(self.n);
        for (k, c) in acc {
            if !c.is_zero() {
                out.terms.insert(k, c);
            }
        }
        Ok(out)
    }

    /// `θ_y T_w ↦ θ_{γ(y)} T_{γ(w)}` on elements without a `T_γ` component.
    pub fn gamma_twist(&self) -> Result<Self> {
        if self.has_gamma_part() {
            return Err(Error::MixedInput);
        }
        let mut out = Self::zero(self.n);
        for ((y, w, e), c) in &self.terms {
            out.add_term((gamma_lattice(y), w.gamma(), *e), c);
        }
        Ok(out)
    }

    /// Rewrite into the right normal form `Σ T_w · f_w` with `f_w` in the
    /// group algebra. Uses the anti-involution `T_w ↦ T_{w⁻¹}`, `θ_y ↦ θ_y`.
    pub fn to_right_form(&self) -> Result<BTreeMap<Perm, GroupAlgebraElement>> {
        if self.has_gamma_part() {
            return Err(Error::MixedInput);
        }
        let mut out: BTreeMap<Perm, GroupAlgebraElement> = BTreeMap::new();
        for ((y, w, _), c) in &self.terms {
            for (z, u, d) in t_theta(&w.inverse(), y).iter() {
                let f = GroupAlgebraElement::monomial(z.clone(), c * d);
                let e = out
                    .entry(u.inverse())
                    .or_insert_with(|| GroupAlgebraElement::zero(self.n));
                *e = &*e + &f;
            }
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }

    /// Inverse of [`to_right_form`](Self::to_right_form).
    pub fn from_right_form(n: usize, form: &BTreeMap<Perm, GroupAlgebraElement>) -> Self {
        let mut out = Self::zero(n);
        for (w, f) in form {
            out = &out + &(&Self::t(w) * &Self::from_group_algebra(f));
        }
        out
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        &(self * other) == &(other * self)
    }

    /// Central in `H`: commutes with every `T_{s_i}` and with `θ_{e_1}`.
    pub fn is_central(&self) -> bool {
        let n = self.n;
        let mut e1 = vec![0; n];
        if n > 0 {
            e1[0] = 1;
        }
        (1..n).all(|i| self.commutes_with(&Self::t_simple(n, i))) && self.commutes_with(&Self::theta(&e1))
    }

    /// Central in the twisted algebra, i.e. also commuting with `T_γ`.
    pub fn is_central_twisted(&self) -> bool {
        self.is_central() && self.commutes_with(&Self::t_gamma(self.n))
    }
}

/// `ι_{s_i} = T_{s_i}(1 − θ_{α_i}) + (p − 1)θ_{α_i}`.
pub fn simple_intertwiner(n: usize, i: usize) -> HeckeElement {
    let alpha = GroupAlgebraElement::theta_root(n, i - 1, i, 1);
    let one_minus = &GroupAlgebraElement::one(n) - &alpha;
    let t = HeckeElement::t_simple(n, i);
    let first = &t * &HeckeElement::from_group_algebra(&one_minus);
    let second = HeckeElement::from_group_algebra(&alpha.scale(&p_minus_one()));
    &first + &second
}

/// `ι_w = ι_{s_{i_1}} ⋯ ι_{s_{i_k}}` over the canonical reduced word of `w`.
pub fn intertwiner(w: &Perm) -> HeckeElement {
    if let Some(hit) = CACHES.with(|c| c.borrow().intertwiners.get(w).cloned()) {
        return (*hit).clone();
    }
    let out = intertwiner_from_word(w.n(), &w.reduced_word());
    CACHES.with(|c| c.borrow_mut().intertwiners.insert(w.clone(), Rc::new(out.clone())));
    out
}

pub fn intertwiner_from_word(n: usize, word: &[usize]) -> HeckeElement {
    let mut acc = HeckeElement::one(n);
    for &i in word {
        acc = &acc * &simple_intertwiner(n, i);
    }
    acc
}

/// `n_w = ∏_{β ∈ R_w} (p − θ_{−β})`.
pub fn intertwiner_denominator(w: &Perm) -> GroupAlgebraElement {
    let n = w.n();
    let p = GroupAlgebraElement::from_scalar(n, Scalar::p());
    let mut acc = GroupAlgebraElement::one(n);
    for (i, j) in w.inversion_roots() {
        acc = &acc * &(&p - &GroupAlgebraElement::theta_root(n, j, i, 1));
    }
    acc
}

/// `(ι_w, n_w)`, representing `ι⁰_w = ι_w · n_w⁻¹`.
pub fn normalized_intertwiner(w: &Perm) -> (HeckeElement, GroupAlgebraElement) {
    (intertwiner(w), intertwiner_denominator(w))
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((y, w, e), c)| {
                let mut s = format!("({c})");
                if y.iter().any(|&a| a != 0) {
                    s.push_str(&format!("θ{y:?}"));
                }
                if !w.is_identity() {
                    s.push_str(&format!("T{w}"));
                }
                if *e {
                    s.push_str("Tγ");
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&HeckeElement> for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        assert_eq!(self.n, rhs.n, "rank mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl Sub<&HeckeElement> for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        self + &(-rhs)
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        HeckeElement {
            n: self.n,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul<&HeckeElement> for &HeckeElement {
    type Output = HeckeElement;
    /// Panics on rank mismatch; use [`HeckeElement::multiply`] for the checked form.
    fn mul(self, rhs: &HeckeElement) -> HeckeElement {
        self.multiply(rhs).expect("rank mismatch in Hecke product")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Scalar {
        Scalar::p()
    }

    #[test]
    fn quadratic_relation() {
        let t = HeckeElement::t_simple(2, 1);
        let expected = &t.scale(&(&p() - &Scalar::one())) + &HeckeElement::scalar(2, p());
        assert_eq!(&t * &t, expected);
    }

    #[test]
    fn gamma_squares_to_one() {
        for n in 1..5 {
            let g = HeckeElement::t_gamma(n);
            assert_eq!(&g * &g, HeckeElement::one(n));
        }
    }

    #[test]
    fn bernstein_rank_two() {
        let t = HeckeElement::t_simple(2, 1);
        let lhs = &(&HeckeElement::theta(&[1, 0]) * &t) - &(&t * &HeckeElement::theta(&[0, 1]));
        let rhs = HeckeElement::theta(&[1, 0]).scale(&(&p() - &Scalar::one()));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_twist_examples() {
        let a = &HeckeElement::theta(&[1, 0]) * &HeckeElement::t_simple(2, 1);
        let b = &HeckeElement::theta(&[0, -1]) * &HeckeElement::t_simple(2, 1);
        assert_eq!(a.gamma_twist().unwrap(), b);
        assert_eq!(HeckeElement::one(2).gamma_twist().unwrap(), HeckeElement::one(2));
        assert_eq!(HeckeElement::t_gamma(2).gamma_twist(), Err(Error::MixedInput));
    }

    #[test]
    fn simple_intertwiner_left_form() {
        let n = 2;
        let iota = simple_intertwiner(n, 1);
        let neg_alpha = GroupAlgebraElement::theta_root(n, 1, 0, 1);
        let left = &HeckeElement::from_group_algebra(&(&GroupAlgebraElement::one(n) - &neg_alpha))
            * &HeckeElement::t_simple(n, 1);
        let expected = &left + &HeckeElement::scalar(n, &Scalar::one() - &p());
        assert_eq!(iota, expected);
    }

    #[test]
    fn simple_intertwiner_commutes_with_theta() {
        let iota = simple_intertwiner(2, 1);
        let lhs = &iota * &HeckeElement::theta(&[1, 0]);
        let rhs = &HeckeElement::theta(&[0, 1]) * &iota;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn right_form_round_trip() {
        let n = 3;
        let h = &(&HeckeElement::theta(&[2, -1, 0]) * &HeckeElement::t(&Perm::longest(3)))
            + &HeckeElement::theta(&[0, 1, 1]);
        let form = h.to_right_form().unwrap();
        assert_eq!(HeckeElement::from_right_form(n, &form), h);
    }

    #[test]
    fn normalized_intertwiner_small_cases() {
        let (e, d) = normalized_intertwiner(&Perm::identity(3));
        assert_eq!(e, HeckeElement::one(3));
        assert!(d.is_one());
        let s = Perm::simple(2, 1);
        let (i, d) = normalized_intertwiner(&s);
        assert_eq!(i, simple_intertwiner(2, 1));
        let expected = &GroupAlgebraElement::from_scalar(2, p()) - &GroupAlgebraElement::theta(&[-1, 1]);
        assert_eq!(d, expected);
    }

    #[test]
    fn central_examples() {
        let n = 3;
        let mut sym = GroupAlgebraElement::zero(n);
        for i in 0..n {
            let mut y = vec![0; n];
            y[i] = 1;
            sym = &sym + &GroupAlgebraElement::theta(&y);
            y[i] = -1;
            sym = &sym + &GroupAlgebraElement::theta(&y);
        }
        assert!(HeckeElement::from_group_algebra(&sym).is_central_twisted());
        assert!(!HeckeElement::theta(&[1, 0, 0]).is_central());
        assert!(HeckeElement::scalar(n, Scalar::v()).is_central());
    }
}
