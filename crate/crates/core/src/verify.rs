//! Self-checks grouped into suites, one numbered criterion per check.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::WorkbenchConfig;
use crate::error::Result;
use crate::group_algebra::GroupAlgebraElement;
use crate::hecke::{intertwiner, intertwiner_denominator, intertwiner_from_word, HeckeElement};
use crate::kl::{KlEngine, KlPolynomial};
use crate::module::oracle::{composition_factors, cosocle, find_submodule, generalized_weights, hom_dim};
use crate::module::{gamma_extensions, gamma_pullback, induce_to_plus, induced_standard};
use crate::multiplicity::{Multiplicities, TwistedOracle};
use crate::params::{enumerate_enhanced, enumerate_multisegments, fixed_lambdas, window_lambdas, Multisegment, Point, Rho, Segment};
use crate::scalar::{rat, Rational, Scalar};
use crate::weyl::Perm;
use crate::whittaker::{compare_normalizations, verify_transformation_laws, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Whittaker,
    Multiplicity,
    All,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Algebra => vec![1, 2, 3],
            Suite::Whittaker => vec![4, 7],
            Suite::Multiplicity => vec![5, 6, 8],
            Suite::All => (1..=8).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {}. {} ({} checks", self.criterion, self.name, self.checks)?;
        match self.failures.first() {
            None => write!(f, ")"),
            Some(first) => write!(f, ", {} failures; first: {first})", self.failures.len()),
        }
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", context()));
                None
            }
        }
    }
}

pub const NAMES: [&str; 8] = [
    "algebra laws",
    "center",
    "intertwiners",
    "Whittaker functional",
    "KL multiplicities against the oracle",
    "twisted tables",
    "normalizations agree",
    "extension dichotomy",
];

pub fn run_suite(suite: Suite, config: &WorkbenchConfig) -> Vec<Check> {
    let kl = Arc::new(KlEngine::in_memory());
    suite.criteria().into_iter().map(|k| criterion_with(k, config, kl.clone())).collect()
}

pub fn criterion(k: u8, config: &WorkbenchConfig) -> Check {
    criterion_with(k, config, Arc::new(KlEngine::in_memory()))
}

/// Run one criterion, sharing `kl`. A successful KL check marks the recipe
/// validated in `kl`.
pub fn criterion_with(k: u8, config: &WorkbenchConfig, kl: Arc<KlEngine>) -> Check {
    let (q, modulus, threshold) = (&config.q, config.modulus, config.oracle_threshold);
    let mut t = Tally::default();
    match k {
        1 => algebra_laws(&mut t),
        2 => center(&mut t),
        3 => intertwiners(&mut t),
        4 => whittaker(&mut t),
        5 => kl_against_oracle(&mut t, Multiplicities::new(q.clone(), modulus, threshold, kl)),
        6 => twisted_tables(&mut t, Multiplicities::new(q.clone(), modulus, threshold, kl)),
        7 => normalizations(&mut t, q, modulus),
        8 => dichotomy(&mut t, q, modulus),
        _ => t.check(false, || format!("no criterion {k}")),
    }
    Check {
        criterion: k,
        name: NAMES.get((k as usize).wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: t.failures.is_empty(),
        checks: t.checks,
        failures: t.failures,
    }
}

fn unit(n: usize, j: usize, s: i32) -> Vec<i32> {
    let mut y = vec![0; n];
    y[j] = s;
    y
}

fn monomial_box(n: usize) -> Vec<HeckeElement> {
    let mut ys = vec![vec![0; n]];
    for j in 0..n {
        ys.push(unit(n, j, 1));
        ys.push(unit(n, j, -1));
    }
    let mut out = Vec::new();
    for y in &ys {
        for w in Perm::all(n) {
            for g in [false, true] {
                out.push(HeckeElement::monomial(y.clone(), w.clone(), g, Scalar::one()));
            }
        }
    }
    out
}

fn random_element(n: usize, rng: &mut ChaCha8Rng) -> HeckeElement {
    let perms = Perm::all(n);
    let mut h = HeckeElement::zero(n);
    for _ in 0..rng.gen_range(1..=2) {
        let mut y = vec![0; n];
        y[0] = rng.gen_range(-1..=1);
        y[n - 1] += rng.gen_range(-1..=1);
        let w = perms[rng.gen_range(0..perms.len())].clone();
        let c = Scalar::from_terms([(rng.gen_range(-1..=1), rat(rng.gen_range(-2..=2)))]);
        h = &h + &HeckeElement::monomial(y, w, rng.gen(), c);
    }
    h
}

fn algebra_laws(t: &mut Tally) {
    for n in 2..=4 {
        let one = HeckeElement::one(n);
        let p = HeckeElement::scalar(n, Scalar::p());
        let g = HeckeElement::t_gamma(n);
        t.check(&g * &g == one, || format!("T_γ² ≠ 1 in rank {n}"));
        for i in 1..n {
            let s = HeckeElement::t_simple(n, i);
            t.check((&(&s + &one) * &(&s - &p)).is_zero(), || format!("quadratic relation fails for s_{i}, rank {n}"));
            t.check(&(&g * &s) * &g == HeckeElement::t_simple(n, n - i), || format!("T_γ T_{i} T_γ ≠ T_{}", n - i));
            if i + 1 < n {
                let b = HeckeElement::t_simple(n, i + 1);
                t.check(&(&s * &b) * &s == &(&b * &s) * &b, || format!("braid relation fails at {i}, rank {n}"));
            }
        }
    }
    for n in 1..=3 {
        let basis = monomial_box(n);
        let products: Vec<Vec<HeckeElement>> = basis.par_iter().map(|a| basis.iter().map(|b| a * b).collect()).collect();
        let bad: Vec<String> = (0..basis.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let (basis, products) = (&basis, &products);
                (0..basis.len()).flat_map(move |j| {
                    (0..basis.len()).filter_map(move |k| {
                        (&products[i][j] * &basis[k] != &basis[i] * &products[j][k])
                            .then(|| format!("(ab)c ≠ a(bc) for {} · {} · {}", basis[i], basis[j], basis[k]))
                    })
                })
            })
            .collect();
        t.checks += basis.len().pow(3) - bad.len();
        for b in bad {
            t.check(false, || b);
        }
    }
    let bad: Vec<String> = (0..10_000u64)
        .into_par_iter()
        .filter_map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, c) = (random_element(4, &mut rng), random_element(4, &mut rng), random_element(4, &mut rng));
            (&(&a * &b) * &c != &a * &(&b * &c)).then(|| format!("random triple {seed} in rank 4 is not associative"))
        })
        .collect();
    t.checks += 10_000 - bad.len();
    for b in bad {
        t.check(false, || b);
    }
}

fn power_sum(n: usize, k: i32) -> HeckeElement {
    let mut f = GroupAlgebraElement::zero(n);
    for j in 0..n {
        f = &f + &GroupAlgebraElement::monomial(unit(n, j, k), Scalar::one());
    }
    HeckeElement::from_group_algebra(&f)
}

fn center(t: &mut Tally) {
    for n in 2..=4 {
        for k in [-2, -1, 1, 2] {
            t.check(power_sum(n, k).is_central(), || format!("p_{k} is not central in rank {n}"));
            let sym = &power_sum(n, k) + &power_sum(n, -k);
            t.check(sym.is_central_twisted(), || format!("p_{k} + p_{} is not central in the twisted algebra, rank {n}", -k));
        }
        t.check(!HeckeElement::theta(&unit(n, 0, 1)).is_central(), || format!("θ_(e_1) is central in rank {n}"));
    }
}

fn intertwiners(t: &mut Tally) {
    for n in 1..=4 {
        for w in Perm::all(n) {
            let reference = intertwiner(&w);
            for word in w.all_reduced_words() {
                t.check(intertwiner_from_word(n, &word) == reference, || format!("ι_{w} depends on the word {word:?}"));
            }
        }
    }
    let n = 3;
    let ys: Vec<Vec<i32>> = (0..n).flat_map(|j| [unit(n, j, 1), unit(n, j, -1)]).chain([vec![2, -1, 0], vec![1, 1, 1]]).collect();
    for w in Perm::all(n) {
        let iota = intertwiner(&w);
        for y in &ys {
            let lhs = &iota * &HeckeElement::theta(y);
            let rhs = &HeckeElement::theta(&w.act(y)) * &iota;
            t.check(lhs == rhs, || format!("ι_{w} θ_{y:?} ≠ θ_(w y) ι_{w}"));
        }
    }
    // ι⁰_w = ι_w n_w⁻¹ is multiplicative along reduced products.
    for n in 2..=4 {
        for w in Perm::all(n) {
            for i in 1..n {
                let s = Perm::simple(n, i);
                let ws = w.compose(&s);
                if ws.length() < w.length() {
                    continue;
                }
                t.check(&intertwiner(&w) * &intertwiner(&s) == intertwiner(&ws), || format!("ι_{w} ι_s{i} ≠ ι_{ws}"));
                let lhs = intertwiner_denominator(&ws);
                let rhs = &intertwiner_denominator(&w).act(&s) * &intertwiner_denominator(&s);
                t.check(lhs == rhs, || format!("n_{ws} ≠ s(n_{w}) n_s{i}"));
                let n_w = HeckeElement::from_group_algebra(&intertwiner_denominator(&w));
                let moved = HeckeElement::from_group_algebra(&intertwiner_denominator(&w).act(&s));
                t.check(&n_w * &intertwiner(&s) == &intertwiner(&s) * &moved, || format!("n_{w} ι_s{i} ≠ ι_s{i} s(n_{w})"));
            }
        }
    }
}

fn whittaker(t: &mut Tally) {
    for n in 2..=3 {
        if let Some(r) = t.result(verify_transformation_laws(n), || format!("Whittaker laws in rank {n}")) {
            t.checks += r.checks - r.failures.len();
            for f in r.failures {
                t.check(false, || format!("rank {n}: {f}"));
            }
        }
    }
}

fn kl_against_oracle(t: &mut Tally, engine: Multiplicities) {
    let lambda = [Point::new(0, -1), Point::new(0, 1)];
    if let Some(table) = t.result(engine.decomposition_matrix(&lambda, false), || "rank-two table".into()) {
        t.check(table.matrix == vec![vec![1, 0], vec![1, 1]], || format!("rank-two table is {:?}", table.matrix));
    }
    let p = |s: &str| Perm::from_one_line(&s.bytes().map(|b| (b - b'0') as usize).collect::<Vec<_>>());
    t.check(engine.kl().polynomial(&p("2143"), &p("4231")) == KlPolynomial(vec![1, 1]), || "P_(2143,4231) ≠ 1 + q".into());
    if let Some(bad) = t.result(engine.validate_recipe(1..=4, 4), || "recipe validation".into()) {
        let windows: usize = (1..=4).map(|n| window_lambdas(n, 4, 0).len()).sum();
        t.checks += windows;
        for b in bad {
            t.check(false, || b);
        }
    }
}

fn twisted_tables(t: &mut Tally, m: Multiplicities) {
    let (q, modulus, threshold) = (&m.q.clone(), m.modulus, m.oracle_threshold);
    for n in 2..=3 {
        for lambda in fixed_lambdas(n, modulus) {
            let ctx = || format!("{lambda:?}");
            let Some(oracle) = t.result(TwistedOracle::build(&lambda, q, modulus, threshold), ctx) else { continue };
            let Some(observed) = t.result(oracle.table(&lambda), ctx) else { continue };
            let Some(predicted) = t.result(m.decomposition_matrix(&lambda, true), ctx) else { continue };
            t.check(observed.is_unitriangular(), || format!("{lambda:?}: observed table is not unitriangular"));
            t.check(observed.matrix == predicted.matrix, || format!("{lambda:?}: predicted {:?}, observed {:?}", predicted.matrix, observed.matrix));
            let ps = &observed.params;
            for (i, zeta) in ps.iter().enumerate() {
                for (j, xi) in ps.iter().enumerate() {
                    let got = observed.matrix[i][j];
                    let dual = zeta.m.gamma_dual(modulus);
                    match (xi.rho, zeta.rho) {
                        (Rho::None, Rho::None) => {
                            let Some(a) = t.result(m.mult_untwisted(&xi.m, &zeta.m), ctx) else { continue };
                            let Some(b) = t.result(m.mult_untwisted(&xi.m, &dual), ctx) else { continue };
                            t.check(got == a + b, || format!("m({xi}, {zeta}) = {got}, expected {a} + {b}"));
                        }
                        (Rho::Trivial, _) => {
                            let sign = ps.iter().position(|p| p.m == xi.m && p.rho == Rho::Sign).unwrap();
                            let Some(mut total) = t.result(m.mult_untwisted(&xi.m, &zeta.m), ctx) else { continue };
                            if zeta.rho == Rho::None {
                                let Some(b) = t.result(m.mult_untwisted(&xi.m, &dual), ctx) else { continue };
                                total += b;
                            }
                            let other = observed.matrix[i][sign];
                            t.check(got + other == total, || format!("sum rule at ({xi}, {zeta}): {got} + {other} ≠ {total}"));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
}

fn normalizations(t: &mut Tally, q: &Rational, modulus: u32) {
    let core = Multisegment::new(vec![Segment::new(0, 2, 1), Segment::new(0, 0, 1), Segment::new(0, -2, 1)]);
    let mut ms = vec![core];
    for lambda in (1..=3).flat_map(|n| fixed_lambdas(n, modulus)) {
        ms.extend(enumerate_enhanced(&lambda, modulus).into_iter().filter(|p| p.rho == Rho::Trivial).map(|p| p.m));
    }
    for m in ms {
        if let Some(c) = t.result(compare_normalizations(&m, q, modulus), || m.to_string()) {
            t.check(c.verdict == Verdict::Equal, || format!("{m}: the two normalizations differ"));
        }
    }
}

fn dichotomy(t: &mut Tally, q: &Rational, modulus: u32) {
    for n in 1..=3 {
        let mut lambdas = fixed_lambdas(n, modulus);
        for u in 0..modulus.min(2) {
            lambdas.extend(window_lambdas(n, 3, u));
        }
        lambdas.sort();
        lambdas.dedup();
        for lambda in lambdas {
            for m in enumerate_multisegments(&lambda) {
                let ctx = || m.to_string();
                let Some(e) = t.result(induced_standard(&m, q, modulus), ctx) else { continue };
                let Some((l, _)) = t.result(cosocle(&e), ctx) else { continue };
                let Some(exts) = t.result(gamma_extensions(&l), ctx) else { continue };
                if m.is_gamma_fixed(modulus) {
                    t.check(exts.len() == 2, || format!("{m}: {} extensions", exts.len()));
                    if exts.len() == 2 {
                        let (a, b) = (&exts[0], &exts[1]);
                        t.check(a.gamma().unwrap() == &-b.gamma().unwrap(), || format!("{m}: extensions do not differ by sign"));
                        t.check(hom_dim(a, b) == 0, || format!("{m}: the two extensions are isomorphic"));
                    }
                } else {
                    t.check(exts.is_empty(), || format!("{m}: non-fixed irreducible extends"));
                    let Some(plus) = t.result(induce_to_plus(&l), ctx) else { continue };
                    let irreducible = t.result(find_submodule(&plus), ctx).map(|s| s.is_none());
                    t.check(irreducible == Some(true), || format!("{m}: induced module is reducible"));
                    let Some(res) = t.result(composition_factors(&plus.without_gamma()), ctx) else { continue };
                    let Some(pulled) = t.result(gamma_pullback(&l), ctx) else { continue };
                    let mut got: Vec<_> = res.factors.iter().map(|f| f.weights.clone()).collect();
                    let mut want: Vec<_> = [&l, &pulled].iter().filter_map(|x| generalized_weights(x).ok()).collect();
                    got.sort();
                    want.sort();
                    t.check(res.length() == 2 && got == want, || format!("{m}: restriction is not L ⊕ γ*L"));
                }
            }
        }
    }
}
