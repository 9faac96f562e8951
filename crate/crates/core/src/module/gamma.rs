//! Extending standard modules to the twisted algebra.
//!
//! For a γ-fixed multisegment with inducing character `t`, the vector
//! `y₁ = ι_u x₀` has weight `u·t = γ(t)`, where `u` is the block permutation
//! carrying the segment blocks of `t` onto those of `γ(t)`. Setting
//! `T_γ(T_w x₀) = c · T_{γ(w)} y₁` defines a γ-action for a scalar `c` which is
//! fixed either geometrically (`c = n_u(t)⁻¹`, i.e. the normalized
//! intertwiner) or by requiring the Whittaker functional to be γ-invariant.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::{intertwiner, intertwiner_denominator};
use crate::linalg::QMatrix;
use crate::params::{Multisegment, Rho, Segment};
use crate::scalar::Rational;
use crate::weyl::{gamma_lattice, Perm};

use super::standard::{induced_standard, inducing_character};
use super::MatrixModule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMode {
    Geometric,
    Whittaker,
}

/// The block permutation `u` with `u·t = γ(t)` for segments in `order`,
/// keeping equal blocks in their original relative order.
pub fn gamma_block_permutation(order: &[Segment], modulus: u32) -> Result<Perm> {
    let k = order.len();
    let n: usize = order.iter().map(|s| s.len as usize).sum();
    let starts: Vec<usize> = order
        .iter()
        .scan(0usize, |acc, s| {
            let st = *acc;
            *acc += s.len as usize;
            Some(st)
        })
        .collect();
    let mut used = vec![false; k];
    let mut images = vec![0usize; n];
    let mut pos = 0;
    for i in (0..k).rev() {
        let target = order[i].gamma_dual(modulus);
        let j = (0..k)
            .find(|&j| !used[j] && order[j] == target)
            .ok_or(Error::NotGammaFixed)?;
        used[j] = true;
        for r in 0..order[j].len as usize {
            images[starts[j] + r] = pos + r;
        }
        pos += order[j].len as usize;
    }
    Ok(Perm::from_images(&images))
}

/// `T_γ` up to the scalar `c`, i.e. `T_w x₀ ↦ T_{γ(w)} ι_u x₀`.
fn unscaled_gamma(e: &MatrixModule, u: &Perm) -> Result<QMatrix> {
    let d = e.dim();
    let iota = e.act(&intertwiner(u))?;
    let y1 = iota.column(0);
    if y1.iter().all(|x| x.is_zero()) {
        return Err(Error::SingularDenominator(format!("ι_{u} x₀ = 0")));
    }
    let reps = standard_reps(e)?;
    let mut cols = Vec::with_capacity(d);
    for w in &reps {
        cols.push(e.t_perm(&w.gamma()).mul_vec(&y1));
    }
    Ok(QMatrix::from_columns(d, &cols))
}

/// The coset representatives indexing the basis of a standard module.
pub(crate) fn standard_reps(e: &MatrixModule) -> Result<Vec<Perm>> {
    e.basis_tags()
        .iter()
        .map(|tag| {
            let digits = tag
                .strip_prefix("T[")
                .and_then(|s| s.strip_suffix("]x0"))
                .ok_or_else(|| Error::BadInput(format!("not a standard basis tag: {tag}")))?;
            let one_line: Vec<usize> = digits.chars().map(|c| c.to_digit(10).unwrap_or(0) as usize).collect();
            Ok(Perm::from_one_line(&one_line))
        })
        .collect()
}

/// Everything needed to compare the two normalizations.
#[derive(Clone, Debug)]
pub struct GammaExtension {
    pub module: MatrixModule,
    pub block_permutation: Perm,
    pub scalar: Rational,
}

pub fn extend_by_gamma_detailed(
    e: &MatrixModule,
    m: &Multisegment,
    mode: GammaMode,
    modulus: u32,
) -> Result<GammaExtension> {
    if !m.is_gamma_fixed(modulus) {
        return Err(Error::NotGammaFixed);
    }
    if e.has_gamma() {
        return Err(Error::BadInput("module already carries T_γ".into()));
    }
    let order = m.standard_order();
    let q = e.q().clone();
    let t = inducing_character(&order, modulus, &q);
    let u = gamma_block_permutation(&order, modulus)?;
    let raw = unscaled_gamma(e, &u)?;
    let scalar = match mode {
        GammaMode::Geometric => {
            let n_u = intertwiner_denominator(&u).eval(&q, &t);
            if n_u.is_zero() {
                return Err(Error::SingularDenominator(format!("n_{u}(t) = 0 for {m}")));
            }
            n_u.recip()
        }
        GammaMode::Whittaker => {
            let w = crate::whittaker::functional_on_standard(e, &t)?;
            let base = w[0].clone();
            let image: Rational = raw.column(0).iter().zip(&w).map(|(a, b)| a * b).sum();
            if image.is_zero() {
                return Err(Error::SingularDenominator(format!("Whittaker functional vanishes on T_γ x₀ for {m}")));
            }
            base / image
        }
    };
    let module = e.with_gamma(raw.scale(&scalar));
    if mode == GammaMode::Whittaker {
        let w = crate::whittaker::functional_on_standard(e, &t)?;
        let g = module.gamma().unwrap();
        for j in 0..e.dim() {
            let image: Rational = g.column(j).iter().zip(&w).map(|(a, b)| a * b).sum();
            if image != w[j] {
                return Err(Error::RelationFailure(format!("{m}: W ∘ T_γ ≠ W on basis vector {j}")));
            }
        }
    }
    let bad = module.audit();
    if !bad.is_empty() {
        return Err(Error::RelationFailure(format!("{m} ({mode:?}): {}", bad.join("; "))));
    }
    Ok(GammaExtension { module, block_permutation: u, scalar })
}

pub fn extend_by_gamma(e: &MatrixModule, m: &Multisegment, mode: GammaMode, modulus: u32) -> Result<MatrixModule> {
    extend_by_gamma_detailed(e, m, mode, modulus).map(|x| x.module)
}

/// `Ind` from `H` to `H⁺`: the module `E ⊕ γ*E` with `T_γ` swapping the blocks.
pub fn induce_to_plus(e: &MatrixModule) -> Result<MatrixModule> {
    if e.has_gamma() {
        return Err(Error::BadInput("module already carries T_γ".into()));
    }
    let n = e.rank();
    let d = e.dim();
    let diag = |a: &QMatrix, b: &QMatrix| {
        let mut m = QMatrix::zeros(2 * d, 2 * d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = a[(i, j)].clone();
                m[(d + i, d + j)] = b[(i, j)].clone();
            }
        }
        m
    };
    let t: Vec<QMatrix> = (1..n).map(|i| diag(e.t_simple(i), e.t_simple(n - i))).collect();
    let theta: Vec<QMatrix> = (0..n)
        .map(|j| {
            let mut y = vec![0; n];
            y[j] = 1;
            diag(e.theta_basis(j + 1), &e.theta_of(&gamma_lattice(&y)))
        })
        .collect();
    let mut swap = QMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        swap[(i, d + i)] = Rational::from_integer(1.into());
        swap[(d + i, i)] = Rational::from_integer(1.into());
    }
    let mut tags: Vec<String> = e.basis_tags().to_vec();
    tags.extend(e.basis_tags().iter().map(|s| format!("γ*{s}")));
    let mut cands = e.weight_candidates().clone();
    cands.extend(e.weight_candidates().iter().map(|x| x.recip()).collect::<Vec<_>>());
    MatrixModule::new(e.q().clone(), t, theta, Some(swap), tags, cands)
}

/// `γ*E`: the same space with `T_{s_i}` acting as `T_{s_{n−i}}` and `θ_y` as `θ_{γ(y)}`.
pub fn gamma_pullback(e: &MatrixModule) -> Result<MatrixModule> {
    let n = e.rank();
    let plain = e.without_gamma();
    let t: Vec<QMatrix> = (1..n).map(|i| plain.t_simple(n - i).clone()).collect();
    let theta: Vec<QMatrix> = (0..n)
        .map(|j| {
            let mut y = vec![0; n];
            y[j] = 1;
            plain.theta_of(&gamma_lattice(&y))
        })
        .collect();
    let tags = plain.basis_tags().iter().map(|s| format!("γ*{s}")).collect();
    let cands = plain.weight_candidates().iter().map(|x| x.recip()).collect();
    MatrixModule::new(plain.q().clone(), t, theta, None, tags, cands)
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let (a, b) = (x.numer().sqrt(), x.denom().sqrt());
    (&a * &a == *x.numer() && &b * &b == *x.denom()).then(|| Rational::new(a, b))
}

/// All extensions of an absolutely irreducible `H`-module to the twisted
/// algebra over `Q`. Empty when `γ*L ≇ L`; otherwise the two operators `±A`
/// with `A ∈ Hom(L, γ*L)` normalized by `A² = 1`.
pub fn gamma_extensions(l: &MatrixModule) -> Result<Vec<MatrixModule>> {
    let plain = l.without_gamma();
    let homs = super::oracle::hom_space(&plain, &gamma_pullback(&plain)?);
    match homs.len() {
        0 => Ok(Vec::new()),
        1 => {
            let a = &homs[0];
            let sq = a * a;
            let c = sq[(0, 0)].clone();
            if c.is_zero() || sq != QMatrix::scalar(plain.dim(), &c) {
                return Err(Error::RelationFailure("intertwiner to γ*L does not square to a scalar".into()));
            }
            let r = rational_sqrt(&c).ok_or_else(|| Error::RelationFailure(format!("A² = {c} is not a rational square")))?;
            let g = a.scale(&r.recip());
            let mut out = Vec::new();
            for sign in [1, -1] {
                let m = plain.with_gamma(g.scale(&Rational::from_integer(sign.into())));
                let bad = m.audit();
                if !bad.is_empty() {
                    return Err(Error::RelationFailure(bad.join("; ")));
                }
                out.push(m);
            }
            Ok(out)
        }
        k => Err(Error::BadInput(format!("module is not absolutely irreducible: {k} maps to γ*L"))),
    }
}

/// The twisted standard module `E⁺(ζ, ρ)`: the geometric extension (negated
/// for the sign label) when `ζ` is γ-fixed, the induced module otherwise.
pub fn twisted_standard(m: &Multisegment, rho: Rho, q: &Rational, modulus: u32) -> Result<MatrixModule> {
    let e = induced_standard(m, q, modulus)?;
    match rho {
        Rho::None => {
            if m.is_gamma_fixed(modulus) {
                return Err(Error::BadInput(format!("γ-fixed {m} needs a label")));
            }
            induce_to_plus(&e)
        }
        Rho::Trivial | Rho::Sign => {
            let ext = extend_by_gamma(&e, m, GammaMode::Geometric, modulus)?;
            if rho == Rho::Sign {
                let g = ext.gamma().unwrap().scale(&Rational::from_integer((-1).into()));
                Ok(ext.with_gamma(g))
            } else {
                Ok(ext)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn seg(s: i32, l: u32) -> Segment {
        Segment::new(0, s, l)
    }

    #[test]
    fn rank_one_gamma_is_trivial() {
        let m = Multisegment::new(vec![seg(0, 1)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        for mode in [GammaMode::Geometric, GammaMode::Whittaker] {
            let x = extend_by_gamma(&e, &m, mode, 2).unwrap();
            assert_eq!(x.gamma().unwrap(), &QMatrix::identity(1));
        }
    }

    #[test]
    fn steinberg_modes_agree() {
        let m = Multisegment::new(vec![seg(-1, 2)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        let g = extend_by_gamma(&e, &m, GammaMode::Geometric, 2).unwrap();
        let w = extend_by_gamma(&e, &m, GammaMode::Whittaker, 2).unwrap();
        assert_eq!(g.gamma(), w.gamma());
        let v = &g.gamma().unwrap()[(0, 0)];
        assert!(*v == rat(1) || *v == rat(-1));
    }

    #[test]
    fn induced_module_doubles() {
        let m = Multisegment::new(vec![seg(2, 2)]);
        let e = induced_standard(&m, &rat(3), 2).unwrap();
        let plus = induce_to_plus(&e).unwrap();
        assert_eq!(plus.dim(), 2);
        assert!(plus.audit().is_empty(), "{:?}", plus.audit());
    }

    #[test]
    fn block_permutation_reverses_core() {
        let order = [seg(2, 2), seg(0, 1), seg(-4, 2)];
        let u = gamma_block_permutation(&order, 2).unwrap();
        assert!(u.is_identity());
        let core = [seg(-2, 3), seg(0, 1)];
        let u = gamma_block_permutation(&core, 2).unwrap();
        assert_eq!(u.one_line(), vec![2, 3, 4, 1]);
    }
}
