//! Segments, multisegments and enhanced Langlands parameters.
//!
//! Exponents are half-integers stored doubled (`exp_x2`). A segment on the
//! unit line `k ∈ Z/N` covers `start_x2, start_x2 + 2, …`. The γ-dual of a
//! segment `(k, e, len)` is `(−k, −e − len + 1, len)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Point {
    pub unit: u32,
    pub exp_x2: i32,
}

impl Point {
    pub fn new(unit: u32, exp_x2: i32) -> Self {
        Point { unit, exp_x2 }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub unit: u32,
    pub start_x2: i32,
    pub len: u32,
}

impl Segment {
    pub fn new(unit: u32, start_x2: i32, len: u32) -> Self {
        assert!(len > 0, "segments are nonempty");
        Segment { unit, start_x2, len }
    }

    pub fn end_x2(&self) -> i32 {
        self.start_x2 + 2 * (self.len as i32 - 1)
    }

    /// Twice the central exponent.
    pub fn center_x2(&self) -> i32 {
        self.start_x2 + self.len as i32 - 1
    }

    pub fn exponents_x2(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.len as i32).map(move |k| self.start_x2 + 2 * k)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.exponents_x2().map(move |e| Point::new(self.unit, e))
    }

    pub fn contains_x2(&self, e: i32) -> bool {
        e >= self.start_x2 && e <= self.end_x2() && (e - self.start_x2) % 2 == 0
    }

    pub fn gamma_dual(&self, modulus: u32) -> Segment {
        Segment::new(dual_unit(self.unit, modulus), -self.end_x2(), self.len)
    }

    pub fn is_self_dual(&self, modulus: u32) -> bool {
        self.gamma_dual(modulus) == *self
    }

    /// Linked in the sense that the union is a longer segment and neither
    /// contains the other.
    pub fn is_linked(&self, other: &Segment) -> bool {
        if self.unit != other.unit || (self.start_x2 - other.start_x2) % 2 != 0 {
            return false;
        }
        let (a, b) = if self.start_x2 <= other.start_x2 { (self, other) } else { (other, self) };
        a.start_x2 < b.start_x2 && a.end_x2() < b.end_x2() && b.start_x2 <= a.end_x2() + 2
    }
}

pub fn dual_unit(unit: u32, modulus: u32) -> u32 {
    (modulus - unit % modulus) % modulus
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |x: i32| {
            if x % 2 == 0 {
                format!("{}", x / 2)
            } else {
                format!("{}/2", x)
            }
        };
        if self.len == 1 {
            write!(f, "({})[{}]", self.unit, show(self.start_x2))
        } else {
            write!(f, "({})[{},{}]", self.unit, show(self.start_x2), show(self.end_x2()))
        }
    }
}

/// A multiset of segments, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Multisegment {
    segments: Vec<Segment>,
}

impl Multisegment {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        Multisegment { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn rank(&self) -> usize {
        self.segments.iter().map(|s| s.len as usize).sum()
    }

    /// The infinitesimal multiset, sorted.
    pub fn infinitesimal(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.segments.iter().flat_map(|s| s.points().collect::<Vec<_>>()).collect();
        pts.sort();
        pts
    }

    pub fn gamma_dual(&self, modulus: u32) -> Multisegment {
        Multisegment::new(self.segments.iter().map(|s| s.gamma_dual(modulus)).collect())
    }

    pub fn is_gamma_fixed(&self, modulus: u32) -> bool {
        self.gamma_dual(modulus) == *self
    }

    pub fn component_group(&self, modulus: u32) -> ComponentGroup {
        if self.is_gamma_fixed(modulus) {
            ComponentGroup::Order2
        } else {
            ComponentGroup::Trivial
        }
    }

    /// `r_{ij}`: the number of segments containing `[i, j]` on `unit`.
    pub fn rank_count(&self, unit: u32, i_x2: i32, j_x2: i32) -> usize {
        self.segments
            .iter()
            .filter(|s| s.unit == unit && s.contains_x2(i_x2) && s.contains_x2(j_x2))
            .count()
    }

    fn rank_profile(&self) -> BTreeMap<(u32, i32, i32), usize> {
        let pts: BTreeSet<Point> = self.infinitesimal().into_iter().collect();
        let mut out = BTreeMap::new();
        for a in &pts {
            for b in &pts {
                if a.unit == b.unit && a.exp_x2 <= b.exp_x2 && (b.exp_x2 - a.exp_x2) % 2 == 0 {
                    out.insert((a.unit, a.exp_x2, b.exp_x2), self.rank_count(a.unit, a.exp_x2, b.exp_x2));
                }
            }
        }
        out
    }

    /// Orbit closure order by rank counts. The open orbit is maximal.
    pub fn closure_leq(&self, other: &Multisegment) -> Result<bool> {
        if self.infinitesimal() != other.infinitesimal() {
            return Err(Error::DifferentInfinitesimal);
        }
        let a = self.rank_profile();
        let b = other.rank_profile();
        Ok(a.iter().all(|(k, v)| *v <= b[k]))
    }

    /// Σ of all rank counts; strictly monotone along the closure order.
    pub fn rank_weight(&self) -> usize {
        self.rank_profile().values().sum()
    }

    /// Segments in standard order: decreasing center, ties by
    /// `(unit, start, len)`.
    pub fn standard_order(&self) -> Vec<Segment> {
        let mut segs = self.segments.clone();
        segs.sort_by(|a, b| {
            b.center_x2()
                .cmp(&a.center_x2())
                .then(a.unit.cmp(&b.unit))
                .then(a.start_x2.cmp(&b.start_x2))
                .then(a.len.cmp(&b.len))
        });
        segs
    }

    pub fn unit_lines(&self) -> BTreeMap<u32, Multisegment> {
        let mut out: BTreeMap<u32, Vec<Segment>> = BTreeMap::new();
        for s in &self.segments {
            out.entry(s.unit).or_default().push(*s);
        }
        out.into_iter().map(|(k, v)| (k, Multisegment::new(v))).collect()
    }
}

impl fmt::Display for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.standard_order().iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentGroup {
    Trivial,
    Order2,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rho {
    Trivial,
    Sign,
    None,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct EnhancedParameter {
    #[serde(flatten)]
    pub m: Multisegment,
    pub rho: Rho,
}

impl EnhancedParameter {
    pub fn new(m: Multisegment, rho: Rho, modulus: u32) -> Result<Self> {
        let fixed = m.is_gamma_fixed(modulus);
        match (fixed, rho) {
            (true, Rho::Trivial | Rho::Sign) | (false, Rho::None) => Ok(EnhancedParameter { m, rho }),
            _ => Err(Error::BadInput(format!("label {rho:?} incompatible with {m}"))),
        }
    }
}

impl fmt::Display for EnhancedParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rho {
            Rho::None => write!(f, "{}", self.m),
            Rho::Trivial => write!(f, "{}+", self.m),
            Rho::Sign => write!(f, "{}-", self.m),
        }
    }
}

/// `γ(λ) = {(−k, −e)}`, sorted.
pub fn gamma_dual_lambda(lambda: &[Point], modulus: u32) -> Vec<Point> {
    let mut out: Vec<Point> = lambda
        .iter()
        .map(|p| Point::new(dual_unit(p.unit, modulus), -p.exp_x2))
        .collect();
    out.sort();
    out
}

pub fn is_gamma_fixed_lambda(lambda: &[Point], modulus: u32) -> bool {
    let mut l = lambda.to_vec();
    l.sort();
    gamma_dual_lambda(&l, modulus) == l
}

/// All ways of cutting a multiset of exponents on one line into segments.
fn segmentations(unit: u32, counts: &mut BTreeMap<i32, usize>) -> Vec<Vec<Segment>> {
    let Some((&e, _)) = counts.iter().find(|(_, &c)| c > 0) else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    let mut len = 1;
    while counts.get(&(e + 2 * (len as i32 - 1))).copied().unwrap_or(0) > 0 {
        for k in 0..len {
            *counts.get_mut(&(e + 2 * k as i32)).unwrap() -= 1;
        }
        for mut rest in segmentations(unit, counts) {
            rest.push(Segment::new(unit, e, len));
            out.push(rest);
        }
        for k in 0..len {
            *counts.get_mut(&(e + 2 * k as i32)).unwrap() += 1;
        }
        len += 1;
    }
    out
}

/// Every multisegment with infinitesimal multiset `lambda`, each once, in a
/// fixed linear extension of the closure order with the open orbit first.
pub fn enumerate_multisegments(lambda: &[Point]) -> Vec<Multisegment> {
    let mut per_unit: BTreeMap<u32, BTreeMap<i32, usize>> = BTreeMap::new();
    for p in lambda {
        *per_unit.entry(p.unit).or_default().entry(p.exp_x2).or_default() += 1;
    }
    let mut combos: Vec<Vec<Segment>> = vec![vec![]];
    for (unit, mut counts) in per_unit {
        let options: BTreeSet<Multisegment> = segmentations(unit, &mut counts)
            .into_iter()
            .map(Multisegment::new)
            .collect();
        let mut next = Vec::new();
        for base in &combos {
            for opt in &options {
                let mut v = base.clone();
                v.extend_from_slice(opt.segments());
                next.push(v);
            }
        }
        combos = next;
    }
    let mut out: Vec<Multisegment> = combos.into_iter().map(Multisegment::new).collect();
    out.sort_by_cached_key(|m| (std::cmp::Reverse(m.rank_weight()), std::cmp::Reverse(m.clone())));
    out.dedup();
    out
}

/// Enhanced parameters over `lambda` for the twisted theory. A γ-fixed
/// multisegment gets both labels; a non-fixed pair `{m, γm}` is listed once,
/// represented by whichever comes first in the untwisted enumeration.
pub fn enumerate_enhanced(lambda: &[Point], modulus: u32) -> Vec<EnhancedParameter> {
    let ms = enumerate_multisegments(lambda);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for m in ms {
        if m.is_gamma_fixed(modulus) {
            out.push(EnhancedParameter { m: m.clone(), rho: Rho::Trivial });
            out.push(EnhancedParameter { m, rho: Rho::Sign });
        } else if !seen.contains(&m) {
            seen.insert(m.gamma_dual(modulus));
            out.push(EnhancedParameter { m, rho: Rho::None });
        }
    }
    out
}

/// Decomposition of a multisegment in standard order into the tempered core
/// (center 0, self-dual unit) and γ-dual pairs of blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    pub order: Vec<Segment>,
    pub core: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

pub fn langlands_block_split(m: &Multisegment, modulus: u32, twisted: bool) -> Result<BlockSplit> {
    if twisted && !m.is_gamma_fixed(modulus) {
        return Err(Error::NotGammaFixed);
    }
    let order = m.standard_order();
    let mut core = Vec::new();
    let mut pairs = Vec::new();
    let mut used = vec![false; order.len()];
    for i in 0..order.len() {
        let s = order[i];
        if s.center_x2() == 0 && dual_unit(s.unit, modulus) == s.unit {
            core.push(i);
            used[i] = true;
        }
    }
    for i in 0..order.len() {
        if used[i] {
            continue;
        }
        let d = order[i].gamma_dual(modulus);
        if let Some(j) = (0..order.len()).rev().find(|&j| j != i && !used[j] && order[j] == d) {
            used[i] = true;
            used[j] = true;
            pairs.push((i.min(j), i.max(j)));
        }
    }
    pairs.sort();
    Ok(BlockSplit { order, core, pairs })
}

/// Multisets of `n` points on the unit line `unit` whose exponents lie in
/// `window` consecutive values and include the lowest one, for both parities
/// of the doubled exponent.
pub fn window_lambdas(n: usize, window: usize, unit: u32) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    for base in [0, 1] {
        for ks in multisets(n, window).into_iter().filter(|ks| ks.first() == Some(&0)) {
            out.push(ks.iter().map(|&k| Point::new(unit, base + 2 * k as i32)).collect());
        }
    }
    out
}

/// γ-fixed multisets of `n` points on the unit line 0 with exponents in a
/// symmetric window of at most four consecutive values.
pub fn fixed_lambdas(n: usize, modulus: u32) -> Vec<Vec<Point>> {
    let mut out = Vec::new();
    for (lo, window) in [(-2, 3usize), (-3, 4)] {
        for ks in multisets(n, window) {
            let l: Vec<Point> = ks.iter().map(|&k| Point::new(0, lo + 2 * k as i32)).collect();
            if is_gamma_fixed_lambda(&l, modulus) {
                out.push(l);
            }
        }
    }
    out
}

fn multisets(n: usize, window: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, lo: usize, window: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in lo..window {
            cur.push(k);
            go(n, k, window, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, window, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(s: i32, l: u32) -> Segment {
        Segment::new(0, s, l)
    }

    #[test]
    fn two_point_window() {
        let lambda = [Point::new(0, -1), Point::new(0, 1)];
        let ms = enumerate_multisegments(&lambda);
        assert_eq!(ms, vec![Multisegment::new(vec![seg(-1, 2)]), Multisegment::new(vec![seg(1, 1), seg(-1, 1)])]);
    }

    #[test]
    fn single_point_and_distinct_lines() {
        assert_eq!(enumerate_multisegments(&[Point::new(0, 0)]).len(), 1);
        let ms = enumerate_multisegments(&[Point::new(0, 0), Point::new(1, 0)]);
        assert_eq!(ms, vec![Multisegment::new(vec![Segment::new(0, 0, 1), Segment::new(1, 0, 1)])]);
    }

    #[test]
    fn duality_examples() {
        let sd = Multisegment::new(vec![seg(-1, 2)]);
        assert_eq!(sd.gamma_dual(2), sd);
        let m = Multisegment::new(vec![seg(2, 2)]);
        assert_eq!(m.gamma_dual(2), Multisegment::new(vec![seg(-4, 2)]));
        assert_eq!(sd.component_group(2), ComponentGroup::Order2);
        assert_eq!(m.component_group(2), ComponentGroup::Trivial);
    }

    #[test]
    fn closure_examples() {
        let open = Multisegment::new(vec![seg(-1, 2)]);
        let closed = Multisegment::new(vec![seg(1, 1), seg(-1, 1)]);
        assert!(closed.closure_leq(&open).unwrap());
        assert!(!open.closure_leq(&closed).unwrap());
        assert!(open.closure_leq(&open).unwrap());
        let other = Multisegment::new(vec![seg(0, 1), seg(2, 1)]);
        assert_eq!(open.closure_leq(&other), Err(Error::DifferentInfinitesimal));
    }

    #[test]
    fn block_split_with_core() {
        let m = Multisegment::new(vec![seg(2, 2), seg(0, 1), seg(-4, 2)]);
        let split = langlands_block_split(&m, 2, true).unwrap();
        assert_eq!(split.order, vec![seg(2, 2), seg(0, 1), seg(-4, 2)]);
        assert_eq!(split.core, vec![1]);
        assert_eq!(split.pairs, vec![(0, 2)]);
        let single = Multisegment::new(vec![seg(-2, 3)]);
        let s = langlands_block_split(&single, 2, true).unwrap();
        assert_eq!((s.core.len(), s.pairs.len()), (1, 0));
        let nf = Multisegment::new(vec![seg(2, 2)]);
        assert_eq!(langlands_block_split(&nf, 2, true), Err(Error::NotGammaFixed));
    }

    #[test]
    fn json_shape() {
        let m = Multisegment::new(vec![seg(-1, 2)]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"segments":[{"unit":0,"start_x2":-1,"len":2}]}"#);
        let back: Multisegment = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
