//! The symmetric group `S_n` in one-line notation and its extension
//! `W⁺ = S_n ⋊ ⟨γ⟩`, where `γ(s_i) = s_{n−i}`.
//!
//! Conventions: a permutation maps position `j` to `w(j)` (0-based internally),
//! it acts on `Z^n` by `w·e_j = e_{w(j)}`, and products compose as functions,
//! `(a·b)(j) = a(b(j))`. Simple reflections are numbered from 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From 0-based images. Panics if `images` is not a permutation.
    pub fn from_images(images: &[usize]) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in images {
            assert!(i < images.len() && !seen[i], "not a permutation: {images:?}");
            seen[i] = true;
        }
        Perm(images.iter().map(|&i| i as u8).collect())
    }

    /// From 1-based one-line notation, e.g. `[2, 1, 4, 3]`.
    pub fn from_one_line(one_line: &[usize]) -> Self {
        let zero: Vec<usize> = one_line.iter().map(|&i| i - 1).collect();
        Self::from_images(&zero)
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn simple(n: usize, i: usize) -> Self {
        assert!(i >= 1 && i < n, "s_{i} out of range for n = {n}");
        let mut p = Self::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    pub fn longest(n: usize) -> Self {
        Perm((0..n as u8).rev().collect())
    }

    pub fn from_word(n: usize, word: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &i in word {
            p = p.mul_simple_right(i);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, j: usize) -> usize {
        self.0[j] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| i == a as usize)
    }

    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (j, &w) in self.0.iter().enumerate() {
            inv[w as usize] = j as u8;
        }
        Perm(inv)
    }

    /// `s_i · w`: swap the values `i−1` and `i`.
    pub fn mul_simple_left(&self, i: usize) -> Perm {
        let (a, b) = ((i - 1) as u8, i as u8);
        Perm(
            self.0
                .iter()
                .map(|&x| if x == a { b } else if x == b { a } else { x })
                .collect(),
        )
    }

    /// `w · s_i`: swap the positions `i−1` and `i`.
    pub fn mul_simple_right(&self, i: usize) -> Perm {
        let mut p = self.clone();
        p.0.swap(i - 1, i);
        p
    }

    /// `l(s_i w) < l(w)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        let inv = self.inverse();
        inv.0[i - 1] > inv.0[i]
    }

    /// `l(w s_i) < l(w)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// A reduced word `(i_1, …, i_k)` with `w = s_{i_1} ⋯ s_{i_k}`, peeling off
    /// the smallest left descent at each step.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.clone();
        let mut word = Vec::with_capacity(self.length());
        'outer: while !w.is_identity() {
            for i in 1..w.n() {
                if w.has_left_descent(i) {
                    word.push(i);
                    w = w.mul_simple_left(i);
                    continue 'outer;
                }
            }
            unreachable!("non-identity permutation without descent");
        }
        word
    }

    /// Every reduced word of `w`.
    pub fn all_reduced_words(&self) -> Vec<Vec<usize>> {
        if self.is_identity() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 1..self.n() {
            if self.has_left_descent(i) {
                for mut rest in self.mul_simple_left(i).all_reduced_words() {
                    rest.insert(0, i);
                    out.push(rest);
                }
            }
        }
        out
    }

    /// `(w·y)_{w(j)} = y_j`.
    pub fn act(&self, y: &[i32]) -> Vec<i32> {
        let mut out = vec![0; y.len()];
        for (j, &w) in self.0.iter().enumerate() {
            out[w as usize] = y[j];
        }
        out
    }

    /// Generic action on coordinates: `out[w(j)] = v[j]`.
    pub fn act_slice<T: Clone>(&self, v: &[T]) -> Vec<T> {
        let mut out: Vec<Option<T>> = vec![None; v.len()];
        for (j, &w) in self.0.iter().enumerate() {
            out[w as usize] = Some(v[j].clone());
        }
        out.into_iter().map(|x| x.unwrap()).collect()
    }

    /// `w₀ w w₀`, the image under the diagram automorphism.
    pub fn gamma(&self) -> Perm {
        let n = self.n();
        let mut out = vec![0u8; n];
        for j in 0..n {
            out[n - 1 - j] = (n - 1 - self.0[j] as usize) as u8;
        }
        Perm(out)
    }

    /// Positive roots `e_i − e_j` (`i < j`, 0-based) sent to negative roots by `w`.
    pub fn inversion_roots(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.0[i] > self.0[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Bruhat order via the tableau criterion.
    pub fn bruhat_leq(&self, other: &Perm) -> bool {
        let n = self.n();
        for k in 1..n {
            let mut a: Vec<u8> = self.0[..k].to_vec();
            let mut b: Vec<u8> = other.0[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            if a.iter().zip(&b).any(|(x, y)| x > y) {
                return false;
            }
        }
        true
    }

    /// All of `S_n` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Minimal-length representatives of `S_n / W_L`, where `W_L` is the
    /// Young subgroup of the composition `blocks`, sorted by length and then
    /// by reduced word.
    pub fn min_coset_reps(blocks: &[usize]) -> Vec<Perm> {
        let n: usize = blocks.iter().sum();
        let levi = levi_simples(blocks);
        let mut reps: Vec<Perm> = Perm::all(n)
            .into_iter()
            .filter(|w| levi.iter().all(|&i| !w.has_right_descent(i)))
            .collect();
        sort_by_length_word(&mut reps);
        reps
    }
}

/// Simple reflections `s_i` lying inside the Young subgroup of `blocks`.
pub fn levi_simples(blocks: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    for &b in blocks {
        for k in 1..b {
            out.push(start + k);
        }
        start += b;
    }
    out
}

pub fn sort_by_length_word(perms: &mut [Perm]) {
    perms.sort_by_cached_key(|w| (w.length(), w.reduced_word()));
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.one_line().iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", s.join(""))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        let mut seen = vec![false; v.len()];
        for &i in &v {
            if i == 0 || i > v.len() || seen[i - 1] {
                return Err(serde::de::Error::custom("not a permutation"));
            }
            seen[i - 1] = true;
        }
        Ok(Perm::from_one_line(&v))
    }
}

/// `γ(y) = −reverse(y)`.
pub fn gamma_lattice(y: &[i32]) -> Vec<i32> {
    y.iter().rev().map(|a| -a).collect()
}

/// An element `w γ^ε` of `W⁺`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExtendedWeylElement {
    pub perm: Perm,
    pub flip: bool,
}

impl ExtendedWeylElement {
    pub fn new(perm: Perm, flip: bool) -> Self {
        ExtendedWeylElement { perm, flip }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(Perm::identity(n), false)
    }

    pub fn gamma(n: usize) -> Self {
        Self::new(Perm::identity(n), true)
    }

    pub fn n(&self) -> usize {
        self.perm.n()
    }

    /// `(w₁γ^{a})(w₂γ^{b}) = w₁ γ^{a}(w₂) γ^{a+b}`.
    pub fn compose(&self, other: &Self) -> Self {
        let w2 = if self.flip { other.perm.gamma() } else { other.perm.clone() };
        Self::new(self.perm.compose(&w2), self.flip ^ other.flip)
    }

    pub fn inverse(&self) -> Self {
        let inv = self.perm.inverse();
        let perm = if self.flip { inv.gamma() } else { inv };
        Self::new(perm, self.flip)
    }

    pub fn act_on_lattice(&self, y: &[i32]) -> Result<Vec<i32>> {
        if y.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: y.len() });
        }
        let y = if self.flip { gamma_lattice(y) } else { y.to_vec() };
        Ok(self.perm.act(&y))
    }

    /// `γ` has length zero, so this is the length of the permutation part.
    pub fn length(&self) -> usize {
        self.perm.length()
    }

    pub fn reduced_word(&self) -> Vec<usize> {
        self.perm.reduced_word()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_on_rank_two_lattice() {
        let g = ExtendedWeylElement::gamma(2);
        assert_eq!(g.act_on_lattice(&[3, -7]).unwrap(), vec![7, -3]);
    }

    #[test]
    fn identity_and_simple_actions() {
        let e = ExtendedWeylElement::identity(3);
        assert_eq!(e.act_on_lattice(&[4, 5, 6]).unwrap(), vec![4, 5, 6]);
        let s1 = ExtendedWeylElement::new(Perm::simple(3, 1), false);
        assert_eq!(s1.act_on_lattice(&[1, 0, 0]).unwrap(), vec![0, 1, 0]);
        assert!(matches!(e.act_on_lattice(&[1, 2]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn longest_element_of_s3() {
        let w0 = Perm::longest(3);
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.reduced_word(), vec![1, 2, 1]);
        assert_eq!(Perm::identity(3).reduced_word(), Vec::<usize>::new());
        let s1s2 = Perm::simple(3, 1).compose(&Perm::simple(3, 2));
        assert_eq!(s1s2.length(), 2);
        assert_eq!(s1s2.reduced_word(), vec![1, 2]);
    }

    #[test]
    fn inversion_sets() {
        assert!(Perm::identity(3).inversion_roots().is_empty());
        assert_eq!(Perm::simple(3, 2).inversion_roots(), vec![(1, 2)]);
        assert_eq!(Perm::longest(3).inversion_roots(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn gamma_conjugates_simple_reflections() {
        for n in 2..6 {
            for i in 1..n {
                assert_eq!(Perm::simple(n, i).gamma(), Perm::simple(n, n - i));
            }
        }
    }

    #[test]
    fn coset_reps_count() {
        assert_eq!(Perm::min_coset_reps(&[2, 1, 1]).len(), 12);
        assert_eq!(Perm::min_coset_reps(&[2, 2]).len(), 6);
        assert_eq!(Perm::min_coset_reps(&[3]).len(), 1);
        assert_eq!(Perm::all(4).len(), 24);
    }
}
