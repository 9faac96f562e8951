//! Brute-force decomposition of matrix modules.
//!
//! Every nonzero submodule contains a joint θ-eigenvector, so a proper
//! submodule is searched for by spinning eigenvectors of a chosen weight, and
//! on the dual side by spinning eigenvectors of the transposed action. When
//! the relevant eigenspaces are lines this is Norton's irreducibility test and
//! is conclusive. Otherwise the algebra generated by the action is computed
//! and compared with the full matrix algebra.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::scalar::{rat, Rational};

use super::gamma::standard_reps;
use super::MatrixModule;

/// Generalized θ-weights with multiplicities.
pub type WeightMultiset = BTreeMap<Vec<Rational>, usize>;

/// Incrementally maintained reduced echelon basis.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<Rational>) -> Option<Vec<Rational>> {
        let mut v = self.reduce(v);
        let p = v.iter().position(|x| !x.is_zero())?;
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        self.rows.push((p, v.clone()));
        Some(v)
    }

    fn len(&self) -> usize {
        self.rows.len()
    }

    fn basis(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Basis of the smallest subspace containing `v` and stable under `gens`.
pub fn spin(gens: &[QMatrix], v: &[Rational]) -> Vec<Vec<Rational>> {
    let mut ech = Echelon::default();
    let mut queue = Vec::new();
    if let Some(b) = ech.insert(v.to_vec()) {
        queue.push(b);
    }
    while let Some(b) = queue.pop() {
        for g in gens {
            if let Some(nb) = ech.insert(g.mul_vec(&b)) {
                queue.push(nb);
            }
        }
    }
    ech.basis()
}

fn stacked_kernel(mats: &[QMatrix]) -> Vec<Vec<Rational>> {
    let rows: Vec<Vec<Rational>> = mats.iter().flat_map(|m| (0..m.rows()).map(|i| m.row(i).to_vec())).collect();
    QMatrix::from_rows(rows).nullspace()
}

fn shifted(m: &QMatrix, c: &Rational) -> QMatrix {
    m - &QMatrix::scalar(m.rows(), c)
}

/// Joint eigenspace `{x : θ_{e_j} x = λ_j x}`.
pub fn joint_eigenspace(m: &MatrixModule, lambda: &[Rational]) -> Vec<Vec<Rational>> {
    let mats: Vec<QMatrix> = (0..m.rank()).map(|j| shifted(m.theta_basis(j + 1), &lambda[j])).collect();
    stacked_kernel(&mats)
}

fn joint_eigenspace_dual(m: &MatrixModule, lambda: &[Rational]) -> Vec<Vec<Rational>> {
    let mats: Vec<QMatrix> = (0..m.rank()).map(|j| shifted(&m.theta_basis(j + 1).transpose(), &lambda[j])).collect();
    stacked_kernel(&mats)
}

/// Decompose the space into joint generalized θ-weight spaces. Fails if some
/// eigenvalue is not among the module's weight candidates.
pub fn generalized_weight_spaces(m: &MatrixModule) -> Result<Vec<(Vec<Rational>, Vec<Vec<Rational>>)>> {
    let d = m.dim();
    let id = QMatrix::identity(d);
    let identity: Vec<Vec<Rational>> = (0..d).map(|i| id.column(i)).collect();
    let mut pieces = vec![(Vec::new(), identity)];
    for j in 0..m.rank() {
        let theta = m.theta_basis(j + 1);
        let mut next = Vec::new();
        for (prefix, space) in pieces {
            let k = space.len();
            let mut found = 0;
            for c in m.weight_candidates() {
                let a = shifted(theta, c);
                let mut img: Vec<Vec<Rational>> = space.clone();
                for _ in 0..k {
                    img = img.iter().map(|v| a.mul_vec(v)).collect();
                }
                let coeffs = QMatrix::from_columns(d, &img).nullspace();
                if coeffs.is_empty() {
                    continue;
                }
                let sub: Vec<Vec<Rational>> = coeffs
                    .iter()
                    .map(|cf| {
                        let mut v = vec![Rational::zero(); d];
                        for (x, b) in cf.iter().zip(&space) {
                            if !x.is_zero() {
                                for (vi, bi) in v.iter_mut().zip(b) {
                                    *vi += x * bi;
                                }
                            }
                        }
                        v
                    })
                    .collect();
                found += sub.len();
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push((p, sub));
            }
            if found != k {
                return Err(Error::OracleUndecided(format!("θ_{} has eigenvalues outside the candidate set", j + 1)));
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

pub fn generalized_weights(m: &MatrixModule) -> Result<WeightMultiset> {
    Ok(generalized_weight_spaces(m)?.into_iter().map(|(w, s)| (w, s.len())).collect())
}

fn combos(basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = basis.to_vec();
    if basis.len() > 1 {
        for shift in 1..=3i64 {
            let mut v = vec![Rational::zero(); basis[0].len()];
            for (i, b) in basis.iter().enumerate() {
                let c = rat(1 + ((i as i64 * shift) % 7));
                for (x, y) in v.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            out.push(v);
        }
    }
    out
}

/// Annihilator of a subspace of the dual.
fn perp(w: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    QMatrix::from_rows(w.to_vec()).nullspace()
}

fn algebra_dimension(gens: &[QMatrix], cap: usize) -> usize {
    let d = gens[0].rows();
    let flat = |m: &QMatrix| -> Vec<Rational> { (0..d).flat_map(|i| m.row(i).to_vec()).collect() };
    let unflat = |v: &[Rational]| QMatrix::from_rows(v.chunks(d).map(|c| c.to_vec()).collect());
    let mut ech = Echelon::default();
    let mut queue = Vec::new();
    if let Some(v) = ech.insert(flat(&QMatrix::identity(d))) {
        queue.push(v);
    }
    while let Some(v) = queue.pop() {
        let a = unflat(&v);
        for g in gens {
            if let Some(nv) = ech.insert(flat(&(g * &a))) {
                queue.push(nv);
            }
            if ech.len() >= cap {
                return ech.len();
            }
        }
    }
    ech.len()
}

/// `γ` on a weight: `λ ↦ (λ_n⁻¹, …, λ_1⁻¹)`.
pub fn gamma_weight(w: &[Rational]) -> Vec<Rational> {
    w.iter().rev().map(|x| x.recip()).collect()
}

/// A basis of a proper nonzero submodule, or `None` if the module is
/// (absolutely) irreducible.
pub fn find_submodule(m: &MatrixModule) -> Result<Option<Vec<Vec<Rational>>>> {
    let d = m.dim();
    if d <= 1 {
        return Ok(None);
    }
    let gens: Vec<QMatrix> = m.generators().into_iter().cloned().collect();
    let gens_t: Vec<QMatrix> = gens.iter().map(|g| g.transpose()).collect();

    // For a γ-stable weight, T_γ preserves the eigenspace and every
    // submodule meets one of its ±1 eigenspaces.
    let split = |space: Vec<Vec<Rational>>, g: Option<QMatrix>, fixed: bool| -> Vec<Vec<Vec<Rational>>> {
        match g {
            Some(g) if fixed && !space.is_empty() => {
                let basis = QMatrix::from_columns(d, &space);
                [Rational::one(), -Rational::one()]
                    .iter()
                    .map(|c| {
                        let a = &(&g * &basis) - &basis.scale(c);
                        a.nullspace().into_iter().map(|cf| basis.mul_vec(&cf)).collect::<Vec<_>>()
                    })
                    .filter(|part| !part.is_empty())
                    .collect()
            }
            _ => vec![space],
        }
    };
    let mut lambdas: Vec<(usize, Vec<Vec<Vec<Rational>>>, Vec<Vec<Vec<Rational>>>)> = generalized_weights(m)?
        .into_keys()
        .map(|l| {
            let fixed = m.has_gamma() && gamma_weight(&l) == l;
            let k = split(joint_eigenspace(m, &l), m.gamma().cloned(), fixed);
            let kt = split(joint_eigenspace_dual(m, &l), m.gamma().map(|g| g.transpose()), fixed);
            let size = k.iter().chain(&kt).map(|p| p.len()).max().unwrap_or(0);
            (size, k, kt)
        })
        .collect();
    lambdas.sort_by(|a, b| a.0.cmp(&b.0));

    let mut certified = false;
    for (size, k, kt) in &lambdas {
        for v in k.iter().flat_map(|p| combos(p)) {
            let s = spin(&gens, &v);
            if s.len() < d {
                return Ok(Some(s));
            }
        }
        for w in kt.iter().flat_map(|p| combos(p)) {
            let s = spin(&gens_t, &w);
            if s.len() < d {
                return Ok(Some(perp(&s)));
            }
        }
        if *size == 1 {
            certified = true;
            break;
        }
    }
    if certified {
        return Ok(None);
    }
    if algebra_dimension(&gens, d * d) == d * d {
        return Ok(None);
    }
    Err(Error::OracleUndecided(format!("no submodule found in a module of dimension {d} with a proper enveloping algebra")))
}

/// One isomorphism class of composition factors.
#[derive(Clone, Debug)]
pub struct Factor {
    pub module: MatrixModule,
    pub weights: WeightMultiset,
    pub multiplicity: usize,
}

impl Factor {
    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub factors: Vec<Factor>,
}

impl Decomposition {
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.multiplicity * f.dim()).sum()
    }

    pub fn length(&self) -> usize {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    fn add(&mut self, module: MatrixModule) -> Result<()> {
        let weights = generalized_weights(&module)?;
        for f in self.factors.iter_mut() {
            if f.weights == weights && f.dim() == module.dim() && (!module.has_gamma() || hom_dim(&module, &f.module) > 0) {
                f.multiplicity += 1;
                return Ok(());
            }
        }
        self.factors.push(Factor { module, weights, multiplicity: 1 });
        Ok(())
    }
}

/// Composition factors with multiplicities. A module carrying `T_γ` is
/// decomposed over the twisted algebra.
pub fn composition_factors(m: &MatrixModule) -> Result<Decomposition> {
    let mut out = Decomposition::default();
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        match find_submodule(&x)? {
            None => out.add(x)?,
            Some(sub) => {
                let (s, q, _) = x.split_along(&sub)?;
                stack.push(s);
                stack.push(q);
            }
        }
    }
    if out.total_dim() != m.dim() {
        return Err(Error::OracleUndecided("factor dimensions do not add up".into()));
    }
    Ok(out)
}

/// A basis of `Hom(a, b)` over the algebra generated by the common
/// generators, as `dim b × dim a` matrices.
pub fn hom_space(a: &MatrixModule, b: &MatrixModule) -> Vec<QMatrix> {
    let (da, db) = (a.dim(), b.dim());
    let ga = a.generators();
    let gb = b.generators();
    if ga.len() != gb.len() {
        return Vec::new();
    }
    // X is db × da with unknown index r * da + c; equations (B X − X A)_{ij} = 0.
    let mut rows = Vec::new();
    for (ma, mb) in ga.iter().zip(&gb) {
        for i in 0..db {
            for j in 0..da {
                let mut row = vec![Rational::zero(); da * db];
                for k in 0..db {
                    if !mb[(i, k)].is_zero() {
                        row[k * da + j] += mb[(i, k)].clone();
                    }
                }
                for k in 0..da {
                    if !ma[(k, j)].is_zero() {
                        row[i * da + k] -= ma[(k, j)].clone();
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..da * db).map(|i| (0..da * db).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
    } else {
        QMatrix::from_rows(rows).nullspace()
    };
    kernel.into_iter().map(|v| QMatrix::from_rows(v.chunks(da).map(|c| c.to_vec()).collect())).collect()
}

pub fn hom_dim(a: &MatrixModule, b: &MatrixModule) -> usize {
    hom_space(a, b).len()
}

/// The presentation data of a standard module: the θ-character of `x₀` and
/// the simple reflections acting on `x₀` by `−1`.
fn standard_presentation(m: &MatrixModule) -> Result<(Vec<Rational>, Vec<usize>)> {
    let d = m.dim();
    let is_multiple = |col: Vec<Rational>| -> Option<Rational> {
        if col[1..].iter().all(|x| x.is_zero()) {
            Some(col[0].clone())
        } else {
            None
        }
    };
    let t = (1..=m.rank())
        .map(|j| is_multiple(m.theta_basis(j).column(0)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::BadInput("x₀ is not a θ-eigenvector".into()))?;
    let levi = (1..m.rank()).filter(|&i| is_multiple(m.t_simple(i).column(0)) == Some(-Rational::one())).collect();
    let mut e0 = vec![Rational::zero(); d];
    e0[0] = Rational::one();
    let gens: Vec<QMatrix> = m.generators().into_iter().cloned().collect();
    if spin(&gens, &e0).len() != d {
        return Err(Error::BadInput("x₀ does not generate the module".into()));
    }
    Ok((t, levi))
}

/// Vectors of `s` on which the standard relations of `x₀` hold; by Frobenius
/// reciprocity this is `Hom(E, s)`.
fn frobenius_space(s: &MatrixModule, t: &[Rational], levi: &[usize]) -> Vec<Vec<Rational>> {
    let mut mats: Vec<QMatrix> = (0..s.rank()).map(|j| shifted(s.theta_basis(j + 1), &t[j])).collect();
    mats.extend(levi.iter().map(|&i| shifted(s.t_simple(i), &-Rational::one())));
    stacked_kernel(&mats)
}

/// The factor of `dec` that is the irreducible quotient of the standard
/// module `e`, with a vector spanning its copy of `Hom(e, ·)`.
pub fn cosocle_factor(e: &MatrixModule, dec: &Decomposition) -> Result<(usize, Vec<Rational>)> {
    let (t, levi) = standard_presentation(&e.without_gamma())?;
    let mut total = 0;
    let mut witness = None;
    for (i, f) in dec.factors.iter().enumerate() {
        let space = frobenius_space(&f.module.without_gamma(), &t, &levi);
        total += space.len();
        if let Some(v) = space.into_iter().next() {
            witness = Some((i, v));
        }
    }
    match (total, witness) {
        (1, Some(w)) => Ok(w),
        _ => Err(Error::NotUniqueQuotient(format!("{total} maps to simple modules"))),
    }
}

/// The unique maximal submodule of a standard module.
pub fn maximal_submodule(e: &MatrixModule) -> Result<Vec<Vec<Rational>>> {
    let plain = e.without_gamma();
    let dec = composition_factors(&plain)?;
    maximal_submodule_with(&plain, &dec)
}

/// As [`maximal_submodule`], reusing a decomposition of `e` over `H`.
pub fn maximal_submodule_with(e: &MatrixModule, dec: &Decomposition) -> Result<Vec<Vec<Rational>>> {
    let (i, v) = cosocle_factor(e, dec)?;
    let s = &dec.factors[i].module;
    let reps = standard_reps(e)?;
    let cols: Vec<Vec<Rational>> = reps.iter().map(|w| s.t_perm(w).mul_vec(&v)).collect();
    Ok(QMatrix::from_columns(s.dim(), &cols).nullspace())
}

/// The unique irreducible quotient together with the projection matrix.
pub fn cosocle(e: &MatrixModule) -> Result<(MatrixModule, QMatrix)> {
    let kernel = maximal_submodule(e)?;
    let (_, quotient, projection) = e.split_along(&kernel)?;
    Ok((quotient, projection))
}

/// Weight supports of the irreducible constituents, as a set for quick lookups.
pub fn factor_labels(dec: &Decomposition) -> BTreeSet<(WeightMultiset, usize)> {
    dec.factors.iter().map(|f| (f.weights.clone(), f.dim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::induced_standard;
    use crate::params::{Multisegment, Segment};
    use crate::scalar::rat_frac;

    fn seg(s: i32, l: u32) -> Segment {
        Segment::new(0, s, l)
    }

    #[test]
    fn principal_series_splits() {
        let m = Multisegment::new(vec![seg(1, 1), seg(-1, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        let dec = composition_factors(&e).unwrap();
        assert_eq!(dec.length(), 2);
        assert_eq!(dec.total_dim(), 2);
        let (q, proj) = cosocle(&e).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(proj.rows(), 1);
        assert_eq!(q.theta_basis(1)[(0, 0)], rat(3));
        assert_eq!(q.theta_basis(2)[(0, 0)], rat_frac(1, 3));
        assert_eq!(q.t_simple(1)[(0, 0)], rat(9));
    }

    #[test]
    fn irreducible_is_its_own_cosocle() {
        let m = Multisegment::new(vec![seg(-1, 2)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        let (q, proj) = cosocle(&e).unwrap();
        assert_eq!(q.dim(), 1);
        assert_eq!(proj, QMatrix::identity(1));
    }

    #[test]
    fn generic_principal_series_is_irreducible() {
        let m = Multisegment::new(vec![seg(4, 1), seg(-1, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        assert!(find_submodule(&e).unwrap().is_none());
    }
}
