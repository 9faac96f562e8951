//! Kazhdan–Lusztig polynomials of symmetric groups, with a persistent cache.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::weyl::Perm;

/// Polynomial in `q` with integer coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct KlPolynomial(pub Vec<i64>);

impl KlPolynomial {
    pub fn zero() -> Self {
        KlPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        KlPolynomial(vec![1])
    }

    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> i64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn at_one(&self) -> i64 {
        self.0.iter().sum()
    }

    fn add_shifted(&mut self, other: &KlPolynomial, shift: usize, factor: i64) {
        if self.0.len() < other.0.len() + shift {
            self.0.resize(other.0.len() + shift, 0);
        }
        for (k, c) in other.0.iter().enumerate() {
            self.0[k + shift] += factor * c;
        }
    }
}

impl fmt::Display for KlPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match k {
                0 => c.to_string(),
                1 if c == 1 => "q".into(),
                1 => format!("{c}q"),
                _ if c == 1 => format!("q^{k}"),
                _ => format!("{c}q^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for KlPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn key(x: &Perm, w: &Perm) -> String {
    let s = |p: &Perm| p.one_line().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
    format!("{}:{}:{}", x.n(), s(x), s(w))
}

#[derive(Default)]
struct Store {
    table: HashMap<(Perm, Perm), KlPolynomial>,
    validated: BTreeSet<usize>,
    dirty: bool,
}

/// Memoizing KL engine. Readers share the table; inserts take the write lock.
pub struct KlEngine {
    store: RwLock<Store>,
    path: Option<PathBuf>,
    corrupt: bool,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    validated: Vec<usize>,
    entries: BTreeMap<String, Vec<i64>>,
    checksum: String,
}

fn checksum(validated: &[usize], entries: &BTreeMap<String, Vec<i64>>) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&(validated, entries)).unwrap_or_default());
    hex::encode(h.finalize())
}

fn parse_key(k: &str) -> Option<(Perm, Perm)> {
    let mut parts = k.split(':');
    let n: usize = parts.next()?.parse().ok()?;
    let mut perm = || -> Option<Perm> {
        let v: Vec<usize> = parts.next()?.split(',').map(|s| s.parse().ok()).collect::<Option<_>>()?;
        let mut seen = v.clone();
        seen.sort_unstable();
        if v.len() != n || seen != (1..=n).collect::<Vec<_>>() {
            return None;
        }
        Some(Perm::from_one_line(&v))
    };
    let x = perm()?;
    let w = perm()?;
    Some((x, w))
}

impl Default for KlEngine {
    fn default() -> Self {
        Self::in_memory()
    }
}

impl KlEngine {
    pub fn in_memory() -> Self {
        KlEngine { store: RwLock::new(Store::default()), path: None, corrupt: false }
    }

    /// Open a cache file. A missing file starts empty. A file that fails to
    /// parse or whose checksum does not match is discarded, and everything is
    /// recomputed; [`KlEngine::discarded_corrupt_cache`] reports this.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut store = Store::default();
        let mut corrupt = false;
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            match Self::parse_cache(&text) {
                Some((table, validated)) => {
                    store.table = table;
                    store.validated = validated;
                }
                None => {
                    corrupt = true;
                    store.dirty = true;
                }
            }
        }
        Ok(KlEngine { store: RwLock::new(store), path: Some(path), corrupt })
    }

    fn parse_cache(text: &str) -> Option<(HashMap<(Perm, Perm), KlPolynomial>, BTreeSet<usize>)> {
        let file: CacheFile = serde_json::from_str(text).ok()?;
        if file.version != 1 || checksum(&file.validated, &file.entries) != file.checksum {
            return None;
        }
        let mut table = HashMap::new();
        for (k, v) in file.entries {
            table.insert(parse_key(&k)?, KlPolynomial(v));
        }
        Some((table, file.validated.into_iter().collect()))
    }

    pub fn discarded_corrupt_cache(&self) -> bool {
        self.corrupt
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.store.read().unwrap().table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_validated(&self, n: usize) -> bool {
        self.store.read().unwrap().validated.contains(&n)
    }

    pub fn mark_validated(&self, n: usize) {
        let mut s = self.store.write().unwrap();
        s.dirty |= s.validated.insert(n);
    }

    /// Write the cache back if anything changed.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut s = self.store.write().unwrap();
        if !s.dirty && path.exists() {
            return Ok(());
        }
        let entries: BTreeMap<String, Vec<i64>> = s.table.iter().map(|((x, w), p)| (key(x, w), p.0.clone())).collect();
        let validated: Vec<usize> = s.validated.iter().copied().collect();
        let file = CacheFile { version: 1, checksum: checksum(&validated, &entries), validated, entries };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(&file)?)?;
        std::fs::rename(&tmp, path)?;
        s.dirty = false;
        Ok(())
    }

    fn lookup(&self, x: &Perm, w: &Perm) -> Option<KlPolynomial> {
        self.store.read().unwrap().table.get(&(x.clone(), w.clone())).cloned()
    }

    fn insert(&self, x: &Perm, w: &Perm, p: &KlPolynomial) {
        let mut s = self.store.write().unwrap();
        s.table.insert((x.clone(), w.clone()), p.clone());
        s.dirty = true;
    }

    /// `P_{x,w}`, zero unless `x ≤ w`.
    pub fn polynomial(&self, x: &Perm, w: &Perm) -> KlPolynomial {
        assert_eq!(x.n(), w.n(), "permutations of different sizes");
        if !x.bruhat_leq(w) {
            return KlPolynomial::zero();
        }
        if x == w {
            return KlPolynomial::one();
        }
        if let Some(p) = self.lookup(x, w) {
            return p;
        }
        let n = w.n();
        let s = (1..n).find(|&i| w.has_left_descent(i)).expect("non-identity element has a descent");
        let v = w.mul_simple_left(s);
        let sx = x.mul_simple_left(s);
        let c = x.has_left_descent(s);
        let mut acc = KlPolynomial::zero();
        acc.add_shifted(&self.polynomial(&sx, &v), if c { 0 } else { 1 }, 1);
        acc.add_shifted(&self.polynomial(x, &v), if c { 1 } else { 0 }, 1);
        let lw = w.length();
        for z in Perm::all(n) {
            if !z.has_left_descent(s) || z == v || !x.bruhat_leq(&z) || !z.bruhat_leq(&v) {
                continue;
            }
            let mu = self.mu(&z, &v);
            if mu != 0 {
                acc.add_shifted(&self.polynomial(x, &z), (lw - z.length()) / 2, -mu);
            }
        }
        let acc = acc.trim();
        self.insert(x, w, &acc);
        acc
    }

    /// Coefficient of `q^{(l(w)−l(x)−1)/2}` in `P_{x,w}`.
    pub fn mu(&self, x: &Perm, w: &Perm) -> i64 {
        let (lx, lw) = (x.length(), w.length());
        if lx >= lw || (lw - lx) % 2 == 0 {
            return 0;
        }
        self.polynomial(x, w).coeff((lw - lx - 1) / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        Perm::from_one_line(&s.chars().map(|c| c.to_digit(10).unwrap() as usize).collect::<Vec<_>>())
    }

    #[test]
    fn s3_is_trivial() {
        let e = KlEngine::in_memory();
        for x in Perm::all(3) {
            for w in Perm::all(3) {
                let expected = if x.bruhat_leq(&w) { KlPolynomial::one() } else { KlPolynomial::zero() };
                assert_eq!(e.polynomial(&x, &w), expected);
            }
        }
    }

    #[test]
    fn first_singular_pair_in_s4() {
        let e = KlEngine::in_memory();
        assert_eq!(e.polynomial(&p("1324"), &p("3412")), KlPolynomial(vec![1, 1]));
        assert_eq!(e.polynomial(&p("2143"), &p("4231")), KlPolynomial(vec![1, 1]));
        assert_eq!(e.polynomial(&p("1234"), &p("4321")), KlPolynomial::one());
        assert_eq!(KlPolynomial(vec![1, 1]).to_string(), "1 + q");
    }
}
