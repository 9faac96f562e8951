//! Composition multiplicities of irreducibles in standard modules, from
//! Kazhdan–Lusztig polynomials and from the decomposition oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kl::KlEngine;
use crate::module::gamma::{extend_by_gamma, twisted_standard, GammaMode};
use crate::module::oracle::{composition_factors, cosocle_factor, gamma_weight, hom_space, maximal_submodule_with, Decomposition, WeightMultiset};
use crate::module::{induced_standard, MatrixModule};
use crate::params::{enumerate_enhanced, enumerate_multisegments, is_gamma_fixed_lambda, EnhancedParameter, Multisegment, Point, Rho, Segment};
use crate::scalar::Rational;
use crate::weyl::Perm;

/// Largest line size covered by exhaustive validation against the oracle.
pub const VALIDATION_SIZE: usize = 4;

/// Attaches to a multisegment on a single line a permutation such that
/// multiplicities become KL polynomials at `1`.
pub trait Recipe: Send + Sync {
    fn name(&self) -> &str;
    fn permutation(&self, line: &[Segment]) -> Perm;
}

/// Multisegment ↦ longest element of a double coset of `S_d × S_d`.
///
/// With distinct exponents `e_1 < ⋯ < e_k` of multiplicities `d_i`, the table
/// `A` has `A_{ii}` = number of segments `[e_i]`, `A_{i,i+1}` = number of
/// segments containing `e_i, e_{i+1}`, and `A_{ji}` (`j > i`) = number of
/// segments `[e_i, e_j]`. Its row and column sums are `d`.
pub struct ZelevinskyRecipe;

impl ZelevinskyRecipe {
    pub fn table(line: &[Segment]) -> (Vec<usize>, Vec<Vec<usize>>) {
        let mut exps: Vec<i32> = line.iter().flat_map(|s| s.exponents_x2()).collect();
        exps.sort_unstable();
        exps.dedup();
        let k = exps.len();
        let idx = |e: i32| exps.binary_search(&e).unwrap();
        let mut d = vec![0; k];
        let mut a = vec![vec![0; k]; k];
        for s in line {
            let (i, j) = (idx(s.start_x2), idx(s.end_x2()));
            for e in s.exponents_x2() {
                d[idx(e)] += 1;
            }
            if i == j {
                a[i][i] += 1;
            } else {
                a[j][i] += 1;
                for r in i..j {
                    a[r][r + 1] += 1;
                }
            }
        }
        (d, a)
    }
}

impl Recipe for ZelevinskyRecipe {
    fn name(&self) -> &str {
        "zelevinsky-double-coset"
    }

    fn permutation(&self, line: &[Segment]) -> Perm {
        let (d, a) = Self::table(line);
        let k = d.len();
        let offsets: Vec<usize> = d.iter().scan(0, |acc, &x| {
            let o = *acc;
            *acc += x;
            Some(o)
        }).collect();
        // Value block J hands out its values from the top, earlier row blocks first.
        let mut next_top: Vec<usize> = (0..k).map(|j| offsets[j] + d[j]).collect();
        let mut images = Vec::new();
        for i in 0..k {
            let mut vals = Vec::new();
            for j in 0..k {
                for _ in 0..a[i][j] {
                    next_top[j] -= 1;
                    vals.push(next_top[j]);
                }
            }
            vals.sort_unstable_by(|x, y| y.cmp(x));
            images.extend(vals);
        }
        Perm::from_images(&images)
    }
}

/// Segments grouped by cuspidal line: the unit together with the parity of
/// the doubled exponent.
pub fn lines(m: &Multisegment) -> BTreeMap<(u32, i32), Vec<Segment>> {
    let mut out: BTreeMap<(u32, i32), Vec<Segment>> = BTreeMap::new();
    for s in m.segments() {
        out.entry((s.unit, s.start_x2.rem_euclid(2))).or_default().push(*s);
    }
    out
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub lambda: Vec<Point>,
    pub twisted: bool,
    pub params: Vec<EnhancedParameter>,
    pub order: String,
    /// `matrix[i][j]` is the multiplicity of the irreducible of `params[j]`
    /// in the standard module of `params[i]`.
    pub matrix: Vec<Vec<i64>>,
}

impl MultiplicityTable {
    pub fn is_unitriangular(&self) -> bool {
        let n = self.params.len();
        (0..n).all(|i| self.matrix[i][i] == 1 && (i + 1..n).all(|j| self.matrix[i][j] == 0))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("standard\\irreducible");
        for p in &self.params {
            out.push(',');
            out.push_str(&p.to_string());
        }
        out.push('\n');
        for (p, row) in self.params.iter().zip(&self.matrix) {
            out.push_str(&p.to_string());
            for x in row {
                out.push(',');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Oracle data for every standard module over one infinitesimal multiset.
pub struct UntwistedOracle {
    pub params: Vec<Multisegment>,
    pub modules: Vec<MatrixModule>,
    pub decompositions: Vec<Decomposition>,
    pub labels: Vec<(WeightMultiset, usize)>,
    pub irreducibles: Vec<MatrixModule>,
    pub kernels: Vec<Vec<Vec<Rational>>>,
}

impl UntwistedOracle {
    pub fn build(lambda: &[Point], q: &Rational, modulus: u32, threshold: usize) -> Result<Self> {
        let params = enumerate_multisegments(lambda);
        let computed: Vec<_> = params
            .par_iter()
            .map(|m| -> Result<_> {
                let e = induced_standard(m, q, modulus)?;
                if e.dim() > threshold {
                    return Err(Error::OracleRequired { dim: e.dim(), threshold });
                }
                let dec = composition_factors(&e)?;
                let (idx, _) = cosocle_factor(&e, &dec)?;
                let kernel = maximal_submodule_with(&e, &dec)?;
                Ok((e, dec, idx, kernel))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut modules = Vec::new();
        let mut decompositions = Vec::new();
        let mut labels = Vec::new();
        let mut irreducibles = Vec::new();
        let mut kernels = Vec::new();
        for (e, dec, idx, kernel) in computed {
            let f = &dec.factors[idx];
            labels.push((f.weights.clone(), f.dim()));
            irreducibles.push(f.module.clone());
            modules.push(e);
            decompositions.push(dec);
            kernels.push(kernel);
        }
        for i in 0..labels.len() {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(Error::LabelMatchFailure(format!("{} and {} share weight data", params[i], params[j])));
                }
            }
        }
        Ok(UntwistedOracle { params, modules, decompositions, labels, irreducibles, kernels })
    }

    pub fn index_of(&self, m: &Multisegment) -> Option<usize> {
        self.params.iter().position(|x| x == m)
    }

    pub fn label_of(&self, weights: &WeightMultiset, dim: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|(w, d)| w == weights && *d == dim)
            .ok_or_else(|| Error::LabelMatchFailure(format!("no parameter with weights {weights:?} in dimension {dim}")))
    }

    /// Multiplicities of each irreducible in the standard module of `params[i]`.
    pub fn column(&self, i: usize) -> Result<Vec<i64>> {
        let mut out = vec![0; self.params.len()];
        for f in &self.decompositions[i].factors {
            out[self.label_of(&f.weights, f.dim())?] += f.multiplicity as i64;
        }
        Ok(out)
    }

    pub fn table(&self, lambda: &[Point]) -> Result<MultiplicityTable> {
        let matrix = (0..self.params.len()).map(|i| self.column(i)).collect::<Result<Vec<_>>>()?;
        Ok(MultiplicityTable {
            lambda: lambda.to_vec(),
            twisted: false,
            params: self.params.iter().map(|m| EnhancedParameter { m: m.clone(), rho: Rho::None }).collect(),
            order: "closure".into(),
            matrix,
        })
    }
}

pub fn gamma_weights(ws: &WeightMultiset) -> WeightMultiset {
    ws.iter().map(|(w, k)| (gamma_weight(w), *k)).collect()
}

fn union(a: &WeightMultiset, b: &WeightMultiset) -> WeightMultiset {
    let mut out = a.clone();
    for (w, k) in b {
        *out.entry(w.clone()).or_default() += k;
    }
    out
}

/// Oracle data for the twisted algebra over a γ-fixed infinitesimal multiset.
pub struct TwistedOracle {
    pub untwisted: UntwistedOracle,
    pub params: Vec<EnhancedParameter>,
    /// `M⁺(ξ, trivial)` for every γ-fixed `ξ`, keyed by its index in `untwisted`.
    pub references: BTreeMap<usize, MatrixModule>,
    pub decompositions: Vec<Decomposition>,
    modulus: u32,
}

impl TwistedOracle {
    pub fn build(lambda: &[Point], q: &Rational, modulus: u32, threshold: usize) -> Result<Self> {
        if !is_gamma_fixed_lambda(lambda, modulus) {
            return Err(Error::NotGammaFixed);
        }
        let untwisted = UntwistedOracle::build(lambda, q, modulus, threshold)?;
        let params = enumerate_enhanced(lambda, modulus);
        let mut references = BTreeMap::new();
        for (i, m) in untwisted.params.iter().enumerate() {
            if m.is_gamma_fixed(modulus) {
                let ext = extend_by_gamma(&untwisted.modules[i], m, GammaMode::Geometric, modulus)?;
                let (_, quotient, _) = ext.split_along(&untwisted.kernels[i])?;
                references.insert(i, quotient);
            }
        }
        let decompositions = params
            .par_iter()
            .map(|p| -> Result<Decomposition> {
                let dim = untwisted.modules[untwisted.index_of(&p.m).unwrap()].dim() * if p.rho == Rho::None { 2 } else { 1 };
                if dim > threshold {
                    return Err(Error::OracleRequired { dim, threshold });
                }
                composition_factors(&twisted_standard(&p.m, p.rho, q, modulus)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistedOracle { untwisted, params, references, decompositions, modulus })
    }

    /// The enhanced parameter of an irreducible module over the twisted algebra.
    pub fn label(&self, f: &MatrixModule, weights: &WeightMultiset) -> Result<EnhancedParameter> {
        let u = &self.untwisted;
        if let Ok(i) = u.label_of(weights, f.dim()) {
            let m = &u.params[i];
            let reference = self.references.get(&i).ok_or_else(|| {
                Error::LabelMatchFailure(format!("factor restricts to the non-fixed irreducible of {m}"))
            })?;
            let homs = hom_space(&f.without_gamma(), &reference.without_gamma());
            if homs.len() != 1 {
                return Err(Error::LabelMatchFailure(format!("{} homomorphisms to the reference of {m}", homs.len())));
            }
            let x = &homs[0];
            let lhs = x * f.gamma().ok_or(Error::MixedInput)?;
            let rhs = reference.gamma().unwrap() * x;
            let rho = if lhs == rhs {
                Rho::Trivial
            } else if lhs == -&rhs {
                Rho::Sign
            } else {
                return Err(Error::LabelMatchFailure(format!("T_γ on a factor over {m} is not ± the reference")));
            };
            return Ok(EnhancedParameter { m: m.clone(), rho });
        }
        for p in self.params.iter().filter(|p| p.rho == Rho::None) {
            let i = u.index_of(&p.m).unwrap();
            let j = u.index_of(&p.m.gamma_dual(self.modulus)).unwrap();
            let (wi, di) = &u.labels[i];
            let (wj, _) = &u.labels[j];
            if 2 * di == f.dim() && union(wi, wj) == *weights {
                return Ok(p.clone());
            }
        }
        Err(Error::LabelMatchFailure(format!("no twisted parameter with weights {weights:?}")))
    }

    pub fn column(&self, i: usize) -> Result<Vec<i64>> {
        let mut out = vec![0; self.params.len()];
        for f in &self.decompositions[i].factors {
            let p = self.label(&f.module, &f.weights)?;
            let j = self.params.iter().position(|x| *x == p).unwrap();
            out[j] += f.multiplicity as i64;
        }
        Ok(out)
    }

    pub fn table(&self, lambda: &[Point]) -> Result<MultiplicityTable> {
        let matrix = (0..self.params.len()).into_par_iter().map(|i| self.column(i)).collect::<Result<Vec<_>>>()?;
        Ok(MultiplicityTable { lambda: lambda.to_vec(), twisted: true, params: self.params.clone(), order: "closure".into(), matrix })
    }
}

/// Multiplicity computations with a shared KL cache and a configurable recipe.
pub struct Multiplicities {
    pub q: Rational,
    pub modulus: u32,
    pub oracle_threshold: usize,
    kl: Arc<KlEngine>,
    recipe: Box<dyn Recipe>,
}

impl Multiplicities {
    pub fn new(q: Rational, modulus: u32, oracle_threshold: usize, kl: Arc<KlEngine>) -> Self {
        Multiplicities { q, modulus, oracle_threshold, kl, recipe: Box::new(ZelevinskyRecipe) }
    }

    pub fn with_recipe(mut self, recipe: Box<dyn Recipe>) -> Self {
        self.recipe = recipe;
        self
    }

    pub fn kl(&self) -> &KlEngine {
        &self.kl
    }

    pub fn recipe(&self) -> &dyn Recipe {
        self.recipe.as_ref()
    }

    /// The recipe value `∏_lines P_{w(ζ), w(ξ)}(1)`, without the validation gate.
    pub fn kl_multiplicity(&self, xi: &Multisegment, zeta: &Multisegment) -> Result<i64> {
        let (lx, lz) = (lines(xi), lines(zeta));
        if xi.infinitesimal() != zeta.infinitesimal() {
            return Err(Error::DifferentInfinitesimal);
        }
        let mut prod = 1;
        for (key, sx) in &lx {
            let sz = &lz[key];
            let wx = self.recipe.permutation(sx);
            let wz = self.recipe.permutation(sz);
            prod *= self.kl.polynomial(&wz, &wx).at_one();
            if prod == 0 {
                break;
            }
        }
        Ok(prod)
    }

    /// `m(ξ, ζ)`, the multiplicity of `M(ξ)` in `E(ζ)`. Lines longer than the
    /// validation size are served only once the recipe has been validated.
    pub fn mult_untwisted(&self, xi: &Multisegment, zeta: &Multisegment) -> Result<i64> {
        for line in lines(zeta).values() {
            let size: usize = line.iter().map(|s| s.len as usize).sum();
            if size > VALIDATION_SIZE && !self.kl.is_validated(VALIDATION_SIZE) {
                return Err(Error::RecipeUnvalidated(size));
            }
        }
        if !zeta.closure_leq(xi)? {
            return Ok(0);
        }
        self.kl_multiplicity(xi, zeta)
    }

    /// Twisted multiplicity `m(M⁺(ξ⁺), E⁺(ζ⁺))`.
    pub fn mult_twisted(&self, xi: &EnhancedParameter, zeta: &EnhancedParameter) -> Result<i64> {
        self.mult_twisted_with(xi, zeta, None)
    }

    fn mult_twisted_with(&self, xi: &EnhancedParameter, zeta: &EnhancedParameter, oracle: Option<&TwistedOracle>) -> Result<i64> {
        let n = self.modulus;
        let lambda = zeta.m.infinitesimal();
        let lambda_xi = xi.m.infinitesimal();
        if !is_gamma_fixed_lambda(&lambda, n) {
            if lambda_xi == lambda {
                return self.mult_untwisted(&xi.m, &zeta.m);
            }
            let dual = xi.m.gamma_dual(n);
            if dual.infinitesimal() == lambda {
                return self.mult_untwisted(&dual, &zeta.m);
            }
            return Err(Error::DifferentInfinitesimal);
        }
        if lambda_xi != lambda {
            return Err(Error::DifferentInfinitesimal);
        }
        let xi_fixed = xi.m.is_gamma_fixed(n);
        let zeta_fixed = zeta.m.is_gamma_fixed(n);
        match (xi_fixed, zeta_fixed) {
            (false, false) => Ok(self.mult_untwisted(&xi.m, &zeta.m)? + self.mult_untwisted(&xi.m, &zeta.m.gamma_dual(n))?),
            (false, true) | (true, false) => self.mult_untwisted(&xi.m, &zeta.m),
            (true, true) => {
                let total = self.mult_untwisted(&xi.m, &zeta.m)?;
                if total == 0 {
                    return Ok(0);
                }
                let owned;
                let oracle = match oracle {
                    Some(o) => o,
                    None => {
                        owned = TwistedOracle::build(&lambda, &self.q, n, self.oracle_threshold)?;
                        &owned
                    }
                };
                let i = oracle.params.iter().position(|p| p == zeta).ok_or_else(|| Error::BadInput(format!("{zeta} is not a parameter")))?;
                let col = oracle.column(i)?;
                let pos = |rho| oracle.params.iter().position(|p| p.m == xi.m && p.rho == rho).unwrap();
                let (a, b) = (col[pos(Rho::Trivial)], col[pos(Rho::Sign)]);
                if a + b != total {
                    return Err(Error::RelationFailure(format!("sum rule fails for ({xi}, {zeta}): {a} + {b} ≠ {total}")));
                }
                Ok(if xi.rho == Rho::Trivial { a } else { b })
            }
        }
    }

    /// The decomposition matrix over `lambda`, parameters in enumeration order.
    pub fn decomposition_matrix(&self, lambda: &[Point], twisted: bool) -> Result<MultiplicityTable> {
        let params: Vec<EnhancedParameter> = if twisted {
            enumerate_enhanced(lambda, self.modulus)
        } else {
            enumerate_multisegments(lambda).into_iter().map(|m| EnhancedParameter { m, rho: Rho::None }).collect()
        };
        let needs_oracle = twisted
            && is_gamma_fixed_lambda(lambda, self.modulus)
            && params.iter().any(|p| p.rho == Rho::Trivial && params.iter().any(|x| x.rho == Rho::Trivial && x.m != p.m && p.m.closure_leq(&x.m).unwrap_or(false)));
        let oracle = if needs_oracle {
            Some(TwistedOracle::build(lambda, &self.q, self.modulus, self.oracle_threshold)?)
        } else {
            None
        };
        let matrix = params
            .par_iter()
            .map(|zeta| {
                params
                    .iter()
                    .map(|xi| {
                        if twisted {
                            if xi.m == zeta.m && xi.rho != Rho::None {
                                return Ok(if xi.rho == zeta.rho { 1 } else { 0 });
                            }
                            self.mult_twisted_with(xi, zeta, oracle.as_ref())
                        } else {
                            self.mult_untwisted(&xi.m, &zeta.m)
                        }
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let table = MultiplicityTable { lambda: lambda.to_vec(), twisted, params, order: "closure".into(), matrix };
        if !table.is_unitriangular() {
            return Err(Error::RelationFailure("decomposition matrix is not unitriangular".into()));
        }
        Ok(table)
    }

    /// Compare the recipe with the oracle on every window of the given size
    /// and mark the size validated in the cache on success. Returns the
    /// mismatches found.
    pub fn validate_recipe(&self, sizes: std::ops::RangeInclusive<usize>, window: usize) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for n in sizes.clone() {
            for lambda in crate::params::window_lambdas(n, window, 0) {
                let oracle = UntwistedOracle::build(&lambda, &self.q, self.modulus, self.oracle_threshold)?;
                let table = oracle.table(&lambda)?;
                for (i, zeta) in oracle.params.iter().enumerate() {
                    for (j, xi) in oracle.params.iter().enumerate() {
                        let kl = self.kl_multiplicity(xi, zeta)? * i64::from(zeta.closure_leq(xi)?);
                        if kl != table.matrix[i][j] {
                            bad.push(format!("m({xi}, {zeta}): recipe {kl}, oracle {}", table.matrix[i][j]));
                        }
                    }
                }
            }
        }
        if bad.is_empty() && *sizes.end() >= VALIDATION_SIZE && *sizes.start() <= 1 && window >= VALIDATION_SIZE {
            self.kl.mark_validated(VALIDATION_SIZE);
        }
        Ok(bad)
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
    fn recipe_on_two_by_two() {
        let r = ZelevinskyRecipe;
        let zero = [seg(0, 1), seg(0, 1), seg(2, 1), seg(2, 1)];
        let rank_one = [seg(0, 2), seg(0, 1), seg(2, 1)];
        let open = [seg(0, 2), seg(0, 2)];
        assert_eq!(r.permutation(&zero).one_line(), vec![2, 1, 4, 3]);
        assert_eq!(r.permutation(&rank_one).one_line(), vec![4, 2, 3, 1]);
        assert_eq!(r.permutation(&open).one_line(), vec![4, 3, 2, 1]);
    }

    #[test]
    fn rank_two_table() {
        let m = Multiplicities::new(rat(3), 2, 240, Arc::new(KlEngine::in_memory()));
        let lambda = [Point::new(0, -1), Point::new(0, 1)];
        let t = m.decomposition_matrix(&lambda, false).unwrap();
        assert_eq!(t.matrix, vec![vec![1, 0], vec![1, 1]]);
    }
}
