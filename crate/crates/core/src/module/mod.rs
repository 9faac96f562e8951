//! Finite-dimensional modules over `H(G, v)` and `H(G⁺, v)` given by exact
//! matrices at a fixed specialization `v = q`.

pub mod gamma;
pub mod oracle;
pub mod standard;

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group_algebra::GroupAlgebraElement;
use crate::hecke::HeckeElement;
use crate::linalg::QMatrix;
use crate::scalar::{rat_pow, Rational};
use crate::weyl::{gamma_lattice, Perm};

pub use gamma::{extend_by_gamma, gamma_extensions, gamma_pullback, induce_to_plus, GammaMode};
pub use oracle::{composition_factors, cosocle, Decomposition};
pub use standard::{induced_from_sequence, induced_standard, unit_value};

#[derive(Clone, Debug)]
pub struct MatrixModule {
    n: usize,
    q: Rational,
    t: Vec<QMatrix>,
    theta: Vec<QMatrix>,
    theta_inv: Vec<QMatrix>,
    gamma: Option<QMatrix>,
    basis_tags: Vec<String>,
    weight_candidates: BTreeSet<Rational>,
}

impl MatrixModule {
    /// Assemble a module from generator matrices. `theta[j]` is the action
    /// of `θ_{e_{j+1}}` and must be invertible.
    pub fn new(
        q: Rational,
        t: Vec<QMatrix>,
        theta: Vec<QMatrix>,
        gamma: Option<QMatrix>,
        basis_tags: Vec<String>,
        weight_candidates: BTreeSet<Rational>,
    ) -> Result<Self> {
        let n = theta.len();
        if t.len() + 1 != n.max(1) {
            return Err(Error::BadInput(format!("{} T-matrices for rank {n}", t.len())));
        }
        let theta_inv = theta
            .iter()
            .map(|m| m.inverse().ok_or_else(|| Error::BadInput("θ matrix not invertible".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixModule { n, q, t, theta, theta_inv, gamma, basis_tags, weight_candidates })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.theta.first().map_or(0, |m| m.rows())
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn p(&self) -> Rational {
        &self.q * &self.q
    }

    pub fn basis_tags(&self) -> &[String] {
        &self.basis_tags
    }

    pub fn weight_candidates(&self) -> &BTreeSet<Rational> {
        &self.weight_candidates
    }

    /// `T_{s_i}`, with `i` counted from 1.
    pub fn t_simple(&self, i: usize) -> &QMatrix {
        &self.t[i - 1]
    }

    /// `θ_{e_j}`, with `j` counted from 1.
    pub fn theta_basis(&self, j: usize) -> &QMatrix {
        &self.theta[j - 1]
    }

    pub fn gamma(&self) -> Option<&QMatrix> {
        self.gamma.as_ref()
    }

    pub fn has_gamma(&self) -> bool {
        self.gamma.is_some()
    }

    pub fn with_gamma(&self, g: QMatrix) -> Self {
        let mut m = self.clone();
        m.gamma = Some(g);
        m
    }

    pub fn without_gamma(&self) -> Self {
        let mut m = self.clone();
        m.gamma = None;
        m
    }

    /// Generators used for spinning: every `T_i`, every `θ_{e_j}` and `T_γ`.
    pub fn generators(&self) -> Vec<&QMatrix> {
        let mut g: Vec<&QMatrix> = self.t.iter().chain(self.theta.iter()).collect();
        if let Some(x) = &self.gamma {
            g.push(x);
        }
        g
    }

    pub fn t_word(&self, word: &[usize]) -> QMatrix {
        let mut acc = QMatrix::identity(self.dim());
        for &i in word {
            acc = &acc * &self.t[i - 1];
        }
        acc
    }

    pub fn t_perm(&self, w: &Perm) -> QMatrix {
        self.t_word(&w.reduced_word())
    }

    pub fn theta_of(&self, y: &[i32]) -> QMatrix {
        let mut acc = QMatrix::identity(self.dim());
        for (j, &k) in y.iter().enumerate() {
            let base = if k >= 0 { &self.theta[j] } else { &self.theta_inv[j] };
            for _ in 0..k.unsigned_abs() {
                acc = &acc * base;
            }
        }
        acc
    }

    /// Action of a group-algebra element at `v = q`.
    pub fn ga_action(&self, f: &GroupAlgebraElement) -> QMatrix {
        let mut acc = QMatrix::zeros(self.dim(), self.dim());
        for (y, c) in f.terms() {
            acc = &acc + &self.theta_of(y).scale(&c.eval(&self.q));
        }
        acc
    }

    /// Action of an arbitrary Hecke element. Terms with `T_γ` need a γ-action.
    pub fn act(&self, h: &HeckeElement) -> Result<QMatrix> {
        let d = self.dim();
        let mut acc = QMatrix::zeros(d, d);
        for ((y, w, e), c) in h.terms() {
            let mut m = &self.theta_of(y) * &self.t_perm(w);
            if *e {
                let g = self.gamma.as_ref().ok_or(Error::MixedInput)?;
                m = &m * g;
            }
            acc = &acc + &m.scale(&c.eval(&self.q));
        }
        Ok(acc)
    }

    /// Conjugate every generator by the change of basis `P` (columns = new basis).
    pub fn change_basis(&self, p: &QMatrix, p_inv: &QMatrix) -> Self {
        let conj = |m: &QMatrix| &(p_inv * m) * p;
        MatrixModule {
            n: self.n,
            q: self.q.clone(),
            t: self.t.iter().map(conj).collect(),
            theta: self.theta.iter().map(conj).collect(),
            theta_inv: self.theta_inv.iter().map(conj).collect(),
            gamma: self.gamma.as_ref().map(conj),
            basis_tags: (0..self.dim()).map(|i| format!("b{i}")).collect(),
            weight_candidates: self.weight_candidates.clone(),
        }
    }

    fn block(&self, m: &QMatrix, lo: usize, hi: usize) -> QMatrix {
        let idx: Vec<usize> = (lo..hi).collect();
        m.select(&idx, &idx)
    }

    /// Given a basis of a submodule, return `(sub, quotient, projection)`
    /// where `projection` maps coordinates of `self` to those of the quotient.
    pub fn split_along(&self, sub_basis: &[Vec<Rational>]) -> Result<(MatrixModule, MatrixModule, QMatrix)> {
        let d = self.dim();
        let k = sub_basis.len();
        let mut cols: Vec<Vec<Rational>> = sub_basis.to_vec();
        let pivots = if k == 0 { Vec::new() } else { QMatrix::from_rows(cols.clone()).rref().1 };
        if pivots.len() != k {
            return Err(Error::BadInput("submodule basis not independent".into()));
        }
        for e in (0..d).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); d];
            v[e] = Rational::one();
            cols.push(v);
        }
        let p = QMatrix::from_columns(d, &cols);
        let p_inv = p.inverse().ok_or_else(|| Error::BadInput("submodule basis not independent".into()))?;
        let conj = self.change_basis(&p, &p_inv);
        for g in conj.generators() {
            for i in k..d {
                for j in 0..k {
                    if !g[(i, j)].is_zero() {
                        return Err(Error::BadInput("subspace is not a submodule".into()));
                    }
                }
            }
        }
        let make = |lo: usize, hi: usize| -> MatrixModule {
            MatrixModule {
                n: self.n,
                q: self.q.clone(),
                t: conj.t.iter().map(|m| self.block(m, lo, hi)).collect(),
                theta: conj.theta.iter().map(|m| self.block(m, lo, hi)).collect(),
                theta_inv: conj.theta_inv.iter().map(|m| self.block(m, lo, hi)).collect(),
                gamma: conj.gamma.as_ref().map(|m| self.block(m, lo, hi)),
                basis_tags: (lo..hi).map(|i| format!("b{i}")).collect(),
                weight_candidates: self.weight_candidates.clone(),
            }
        };
        let rows: Vec<usize> = (k..d).collect();
        let all: Vec<usize> = (0..d).collect();
        let projection = p_inv.select(&rows, &all);
        Ok((make(0, k), make(k, d), projection))
    }

    /// Every defining relation checked as an exact matrix identity. Returns
    /// the list of violated relations.
    pub fn audit(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let n = self.n;
        let d = self.dim();
        let id = QMatrix::identity(d);
        let p = self.p();
        for i in 1..n {
            let t = self.t_simple(i);
            let lhs = &(t + &id) * &(t - &QMatrix::scalar(d, &p));
            if !lhs.is_zero() {
                bad.push(format!("quadratic relation for T_{i}"));
            }
        }
        for i in 1..n {
            for j in i + 1..n {
                let (a, b) = (self.t_simple(i), self.t_simple(j));
                let ok = if j == i + 1 {
                    &(&(a * b) * a) == &(&(b * a) * b)
                } else {
                    &(a * b) == &(b * a)
                };
                if !ok {
                    bad.push(format!("braid relation for T_{i}, T_{j}"));
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if &self.theta[a] * &self.theta[b] != &self.theta[b] * &self.theta[a] {
                    bad.push(format!("θ_{} and θ_{} do not commute", a + 1, b + 1));
                }
            }
        }
        for i in 1..n {
            let t = HeckeElement::t_simple(n, i);
            for j in 0..n {
                let mut y = vec![0; n];
                y[j] = 1;
                let prod = &t * &HeckeElement::theta(&y);
                match self.act(&prod) {
                    Ok(m) if m == self.t_simple(i) * &self.theta[j] => {}
                    _ => bad.push(format!("Bernstein relation for T_{i}, θ_{}", j + 1)),
                }
            }
        }
        if let Some(g) = &self.gamma {
            if &(g * g) != &id {
                bad.push("T_γ² ≠ 1".into());
            }
            for i in 1..n {
                if &(&(g * self.t_simple(i)) * g) != self.t_simple(n - i) {
                    bad.push(format!("T_γ T_{i} T_γ ≠ T_{}", n - i));
                }
            }
            for j in 0..n {
                let mut y = vec![0; n];
                y[j] = 1;
                if &(&(g * &self.theta[j]) * g) != &self.theta_of(&gamma_lattice(&y)) {
                    bad.push(format!("T_γ θ_{} T_γ ≠ θ_γ", j + 1));
                }
            }
        }
        bad
    }

    /// The scalars by which the elementary symmetric functions of the `θ_{e_j}`
    /// act, or `None` if one of them is not scalar.
    pub fn central_character(&self) -> Option<Vec<Rational>> {
        let n = self.n;
        let d = self.dim();
        let mut out = Vec::new();
        for k in 1..=n {
            let mut acc = QMatrix::zeros(d, d);
            for subset in subsets(n, k) {
                let mut m = QMatrix::identity(d);
                for j in subset {
                    m = &m * &self.theta[j];
                }
                acc = &acc + &m;
            }
            let c = acc[(0, 0)].clone();
            if acc != QMatrix::scalar(d, &c) {
                return None;
            }
            out.push(c);
        }
        Some(out)
    }
}

/// `e_k(t)` for every `k`.
pub fn elementary_symmetric(t: &[Rational]) -> Vec<Rational> {
    let n = t.len();
    (1..=n)
        .map(|k| {
            subsets(n, k)
                .into_iter()
                .map(|s| s.into_iter().map(|j| t[j].clone()).product::<Rational>())
                .sum()
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `∏ t_j^{y_j}`.
pub fn character_value(t: &[Rational], y: &[i32]) -> Rational {
    t.iter().zip(y).map(|(a, &k)| rat_pow(a, k as i64)).product()
}
