//! Test modules for the classical Lie algebras and the checks run on them:
//! fixed spaces, stabilizers, the inequality `dim x^G + dim V^x < dim V`,
//! sampled generic freeness, and the `SL_2` classification.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{class_rep, orbit_dim, AlgebraKind, ClassLabel, ClassicalError, MatrixAlgebra};
use crate::fflinalg::{kernel, LinalgError, PrimeField, PrimeFieldMatrix, Subspace};
use crate::genconj::{bound_b, enumerate_classes, minimal_orbit_dim, Bound, ClassicalSpec, GenError, GroupSpec};
use crate::liealg::{center, derived_subalgebra, ChevalleyAlgebra, Isogeny, LieAlgebra, LieError};
use crate::rootdata::TypeLabel;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("cannot parse module descriptor {0:?}")]
    Parse(String),
    #[error("module {tag} is not available for {algebra}")]
    Unsupported { tag: String, algebra: String },
    #[error("subspace is not invariant under the action")]
    NotInvariant,
}

/// How a module was built. The `Display` form is the CLI descriptor syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ModuleTag {
    Natural,
    Dual(Box<ModuleTag>),
    Tensor(Vec<ModuleTag>),
    Sym2(Box<ModuleTag>),
    Sym2SoFactor,
    AdjointFactor,
    FrobeniusTwist(Box<ModuleTag>),
    Sl2Weight(u32),
}

impl fmt::Display for ModuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |t: &ModuleTag| match t {
            ModuleTag::Tensor(_) => format!("({t})"),
            _ => t.to_string(),
        };
        match self {
            ModuleTag::Natural => f.write_str("natural"),
            ModuleTag::Dual(t) => write!(f, "dual:{}", wrap(t)),
            ModuleTag::Tensor(ts) => {
                let parts: Vec<String> = ts.iter().map(wrap).collect();
                write!(f, "tensor:{}", parts.join(","))
            }
            ModuleTag::Sym2(t) => write!(f, "sym2:{}", wrap(t)),
            ModuleTag::Sym2SoFactor => f.write_str("sym2_so_factor"),
            ModuleTag::AdjointFactor => f.write_str("adjoint_factor"),
            ModuleTag::FrobeniusTwist(t) => write!(f, "ftwist:{}", wrap(t)),
            ModuleTag::Sl2Weight(w) => write!(f, "sl2:w={w}"),
        }
    }
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl FromStr for ModuleTag {
    type Err = RepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || RepError::Parse(s.to_string());
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            return inner.parse();
        }
        let sub = |r: &str| -> Result<Box<ModuleTag>, RepError> { Ok(Box::new(r.parse()?)) };
        Ok(match s {
            "natural" => ModuleTag::Natural,
            "sym2_so_factor" => ModuleTag::Sym2SoFactor,
            "adjoint_factor" => ModuleTag::AdjointFactor,
            _ => {
                let (head, rest) = s.split_once(':').ok_or_else(err)?;
                match head {
                    "dual" => ModuleTag::Dual(sub(rest)?),
                    "sym2" => ModuleTag::Sym2(sub(rest)?),
                    "ftwist" => ModuleTag::FrobeniusTwist(sub(rest)?),
                    "tensor" => {
                        let parts = split_top(rest);
                        if parts.len() < 2 {
                            return Err(err());
                        }
                        ModuleTag::Tensor(parts.into_iter().map(str::parse).collect::<Result<_, _>>()?)
                    }
                    "sl2" => {
                        let w = rest.strip_prefix("w=").ok_or_else(err)?;
                        ModuleTag::Sl2Weight(w.parse().map_err(|_| err())?)
                    }
                    _ => return Err(err()),
                }
            }
        })
    }
}

impl From<ModuleTag> for String {
    fn from(t: ModuleTag) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for ModuleTag {
    type Error = RepError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A module for a Lie algebra given by the action matrix of each basis element.
#[derive(Clone, Debug)]
pub struct GModule {
    tag: ModuleTag,
    field: PrimeField,
    dim: usize,
    action: Vec<PrimeFieldMatrix>,
}

impl GModule {
    pub fn from_action(tag: ModuleTag, field: PrimeField, dim: usize, action: Vec<PrimeFieldMatrix>) -> Self {
        GModule { tag, field, dim, action }
    }

    pub fn tag(&self) -> &ModuleTag {
        &self.tag
    }
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn algebra_dim(&self) -> usize {
        self.action.len()
    }
    pub fn action(&self) -> &[PrimeFieldMatrix] {
        &self.action
    }

    /// `dρ(x)` for `x` in algebra coordinates.
    pub fn rho(&self, x: &[u32]) -> PrimeFieldMatrix {
        let f = self.field;
        let mut m = PrimeFieldMatrix::zeros(f, self.dim, self.dim);
        for (a, &c) in self.action.iter().zip(x) {
            if c != 0 {
                m = m.add(&a.scale(c));
            }
        }
        m
    }

    pub fn dual(&self) -> GModule {
        let f = self.field;
        let action = self.action.iter().map(|a| a.transpose().scale(f.neg(1))).collect();
        GModule { tag: ModuleTag::Dual(Box::new(self.tag.clone())), field: f, dim: self.dim, action }
    }

    pub fn tensor(&self, other: &GModule) -> GModule {
        let f = self.field;
        let ia = PrimeFieldMatrix::identity(f, self.dim);
        let ib = PrimeFieldMatrix::identity(f, other.dim);
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.kron(&ib).add(&ia.kron(b))).collect();
        let tags = match (&self.tag, &other.tag) {
            (ModuleTag::Tensor(a), b) => {
                let mut v = a.clone();
                v.push(b.clone());
                v
            }
            (a, b) => vec![a.clone(), b.clone()],
        };
        GModule { tag: ModuleTag::Tensor(tags), field: f, dim: self.dim * other.dim, action }
    }

    /// `Sym^w` with monomial basis, the algebra acting by derivations.
    pub fn sym_power(&self, w: usize) -> GModule {
        let f = self.field;
        let monos = monomials(self.dim, w);
        let index: std::collections::HashMap<Vec<usize>, usize> =
            monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let d = monos.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = PrimeFieldMatrix::zeros(f, d, d);
                for (col, mono) in monos.iter().enumerate() {
                    // mono is a multiset of basis indices, sorted
                    for pos in 0..mono.len() {
                        if pos > 0 && mono[pos] == mono[pos - 1] {
                            continue;
                        }
                        let k = mono[pos];
                        let mult = mono.iter().filter(|&&i| i == k).count() as i64;
                        for j in 0..self.dim {
                            let c = a.get(j, k);
                            if c == 0 {
                                continue;
                            }
                            let mut target = mono.clone();
                            target[pos] = j;
                            target.sort_unstable();
                            let row = index[&target];
                            m.add_at(row, col, f.mul(c, f.from_i64(mult)));
                        }
                    }
                }
                m
            })
            .collect();
        GModule { tag: ModuleTag::Sym2(Box::new(self.tag.clone())), field: f, dim: d, action }
    }

    pub fn direct_sum(&self, other: &GModule) -> GModule {
        let action = self.action.iter().zip(&other.action).map(|(a, b)| a.direct_sum(b)).collect();
        GModule { tag: self.tag.clone(), field: self.field, dim: self.dim + other.dim, action }
    }

    pub fn frobenius_twist(&self) -> GModule {
        let f = self.field;
        let action = self.action.iter().map(|_| PrimeFieldMatrix::zeros(f, self.dim, self.dim)).collect();
        GModule { tag: ModuleTag::FrobeniusTwist(Box::new(self.tag.clone())), field: f, dim: self.dim, action }
    }

    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|v| self.action.iter().all(|a| s.contains_vector(&a.mul_vec(v))))
    }

    /// The action on `sub / quot` for invariant `quot ⊆ sub`.
    pub fn subquotient(&self, sub: &Subspace, quot: &Subspace) -> Result<GModule, RepError> {
        if !self.is_invariant(sub) || !self.is_invariant(quot) || !quot.basis().iter().all(|v| sub.contains_vector(v)) {
            return Err(RepError::NotInvariant);
        }
        let f = self.field;
        let reps = sub.complement_of(quot)?;
        let full = Subspace::full(f, self.dim);
        let rest = full.complement_of(sub)?;
        // basis Q | R | rest; coordinates of R-part give the quotient
        let mut cols: Vec<Vec<u32>> = quot.basis().to_vec();
        cols.extend(reps.iter().cloned());
        cols.extend(rest);
        let basis = PrimeFieldMatrix::from_columns(f, self.dim, &cols);
        let inv = basis.inverse()?;
        let q = quot.dim();
        let r = reps.len();
        let action = self
            .action
            .iter()
            .map(|a| {
                let cols: Vec<Vec<u32>> = reps
                    .iter()
                    .map(|v| {
                        let c = inv.mul_vec(&a.mul_vec(v));
                        c[q..q + r].to_vec()
                    })
                    .collect();
                PrimeFieldMatrix::from_columns(f, r, &cols)
            })
            .collect();
        Ok(GModule { tag: self.tag.clone(), field: f, dim: r, action })
    }

    fn retag(mut self, tag: ModuleTag) -> Self {
        self.tag = tag;
        self
    }
}

/// Sorted multisets of size `w` from `0..n`.
fn monomials(n: usize, w: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, w, &mut Vec::new(), &mut out);
    out
}

/// `[g, g] / (z ∩ [g, g])` with the adjoint action, for any algebra.
pub fn adjoint_factor<L: LieAlgebra + ?Sized>(alg: &L) -> Result<GModule, RepError> {
    let f = alg.field();
    let n = alg.dim();
    let action: Vec<PrimeFieldMatrix> = (0..n).map(|i| alg.ad(&crate::liealg::unit(n, i, f))).collect();
    let adj = GModule { tag: ModuleTag::AdjointFactor, field: f, dim: n, action };
    let d = derived_subalgebra(alg);
    let z = center(alg).intersect(&d)?;
    Ok(adj.subquotient(&d, &z)?.retag(ModuleTag::AdjointFactor))
}

/// Builds a module for a matrix algebra from its descriptor.
pub fn build_module(tag: &ModuleTag, alg: &MatrixAlgebra) -> Result<GModule, RepError> {
    let f = alg.field();
    let unsupported =
        || RepError::Unsupported { tag: tag.to_string(), algebra: format!("{}_{}", alg.kind(), alg.natural_dim()) };
    Ok(match tag {
        ModuleTag::Natural => {
            GModule { tag: ModuleTag::Natural, field: f, dim: alg.natural_dim(), action: alg.basis_matrices().to_vec() }
        }
        ModuleTag::Dual(t) => build_module(t, alg)?.dual(),
        ModuleTag::Tensor(ts) => {
            let mut it = ts.iter();
            let first = build_module(it.next().ok_or_else(unsupported)?, alg)?;
            it.try_fold(first, |acc, t| Ok::<_, RepError>(acc.tensor(&build_module(t, alg)?)))?
        }
        ModuleTag::Sym2(t) => build_module(t, alg)?.sym_power(2),
        ModuleTag::FrobeniusTwist(t) => build_module(t, alg)?.frobenius_twist(),
        ModuleTag::AdjointFactor => adjoint_factor(alg)?,
        ModuleTag::Sym2SoFactor => sym2_so_factor(alg).ok_or_else(unsupported)??,
        ModuleTag::Sl2Weight(w) => {
            let is_sl2 = matches!(alg.kind(), AlgebraKind::Sl) && alg.natural_dim() == 2;
            if !is_sl2 {
                return Err(unsupported());
            }
            sl2_weight_module(alg, *w)?
        }
    })
}

/// The composition factor of `Sym^2 V` for `so(V)` with `p` odd: the kernel of
/// the contraction with the form, modulo the invariant line when `p | n`.
fn sym2_so_factor(alg: &MatrixAlgebra) -> Option<Result<GModule, RepError>> {
    if alg.kind() != AlgebraKind::So || alg.field().p() == 2 {
        return None;
    }
    let f = alg.field();
    let n = alg.natural_dim();
    let b = alg.form()?.clone();
    let natural = GModule { tag: ModuleTag::Natural, field: f, dim: n, action: alg.basis_matrices().to_vec() };
    let s = natural.sym_power(2);
    let monos = monomials(n, 2);
    let binv = match b.inverse() {
        Ok(m) => m,
        Err(e) => return Some(Err(e.into())),
    };
    // contraction functional e_i e_j ↦ B_ij
    let functional: Vec<u32> = monos.iter().map(|m| b.get(m[0], m[1])).collect();
    let w = kernel(&PrimeFieldMatrix::from_rows(f, monos.len(), &[functional]));
    // the dual form Σ B^{-1}_{ij} e_i e_j
    let c: Vec<u32> = monos
        .iter()
        .map(|m| if m[0] == m[1] { binv.get(m[0], m[0]) } else { f.add(binv.get(m[0], m[1]), binv.get(m[1], m[0])) })
        .collect();
    let line =
        if w.contains_vector(&c) { Subspace::span(f, monos.len(), &[c]) } else { Subspace::zero(f, monos.len()) };
    Some(s.subquotient(&w, &line).map(|m| m.retag(ModuleTag::Sym2SoFactor)))
}

/// `L(w)` as an `sl_2`-module: `c = Π_{i>0} (w_i + 1)` copies of the Weyl
/// module `L(w_0) = Sym^{w_0}` of the natural module, `w = Σ w_i p^i`.
pub fn sl2_weight_module(alg: &MatrixAlgebra, w: u32) -> Result<GModule, RepError> {
    let f = alg.field();
    let (w0, c) = sl2_digits(w, f.p());
    let natural = GModule { tag: ModuleTag::Natural, field: f, dim: 2, action: alg.basis_matrices().to_vec() };
    let one = natural.sym_power(w0 as usize);
    let mut m = one.clone();
    for _ in 1..c {
        m = m.direct_sum(&one);
    }
    Ok(m.retag(ModuleTag::Sl2Weight(w)))
}

/// `(w_0, c)` for the base-`p` digits of `w`.
pub fn sl2_digits(w: u32, p: u32) -> (u32, usize) {
    let w0 = w % p;
    let mut c = 1usize;
    let mut rest = w / p;
    while rest > 0 {
        c *= (rest % p) as usize + 1;
        rest /= p;
    }
    (w0, c)
}

/// First basis pair `(i, j)` with `dρ([b_i, b_j]) ≠ [dρ(b_i), dρ(b_j)]`.
pub fn homomorphism_violation<L: LieAlgebra + ?Sized>(alg: &L, m: &GModule) -> Option<(usize, usize)> {
    let n = alg.dim();
    let f = alg.field();
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).find(|&(i, j)| {
        let br = alg.bracket(&crate::liealg::unit(n, i, f), &crate::liealg::unit(n, j, f));
        m.rho(&br) != m.action[i].commutator(&m.action[j])
    })
}

/// `V^x = ker dρ(x)`.
pub fn fixed_space(m: &GModule, x: &[u32]) -> Subspace {
    kernel(&m.rho(x))
}

/// Vectors fixed by every element of `sub`.
pub fn fixed_points_of(m: &GModule, sub: &Subspace) -> Subspace {
    let Some(first) = sub.basis().first() else { return Subspace::full(m.field, m.dim) };
    let stacked = sub.basis()[1..].iter().fold(m.rho(first), |acc, b| acc.stack(&m.rho(b)));
    kernel(&stacked)
}

/// `g_v = { x : dρ(x) v = 0 }` in algebra coordinates.
pub fn stabilizer(m: &GModule, v: &[u32]) -> Subspace {
    let cols: Vec<Vec<u32>> = m.action.iter().map(|a| a.mul_vec(v)).collect();
    kernel(&PrimeFieldMatrix::from_columns(m.field, m.dim, &cols))
}

/// `ker dρ`.
pub fn action_kernel(m: &GModule) -> Subspace {
    let cols: Vec<Vec<u32>> = m.action.iter().map(|a| a.flatten()).collect();
    kernel(&PrimeFieldMatrix::from_columns(m.field, m.dim * m.dim, &cols))
}

/// `dim x^G + dim V^x` against `dim V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IneqCheck {
    pub orbit_dim: usize,
    pub fixed_dim: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub holds: bool,
}

pub fn check_ineq_mother(m: &GModule, x: &[u32], orbit_dim: usize) -> IneqCheck {
    let fixed_dim = fixed_space(m, x).dim();
    let lhs = orbit_dim + fixed_dim;
    IneqCheck { orbit_dim, fixed_dim, lhs, rhs: m.dim, holds: lhs < m.dim }
}

/// A chain `0 = V_0 ⊆ V_1 ⊆ … ⊆ V_n = V` of submodules.
#[derive(Clone, Debug)]
pub struct ModuleChain {
    levels: Vec<Subspace>,
}

impl ModuleChain {
    /// Checks nesting and invariance; the zero and full ends are added.
    pub fn new(m: &GModule, inner: Vec<Subspace>) -> Result<Self, RepError> {
        let mut levels = vec![Subspace::zero(m.field, m.dim)];
        levels.extend(inner);
        levels.push(Subspace::full(m.field, m.dim));
        for w in levels.windows(2) {
            if !w[0].basis().iter().all(|v| w[1].contains_vector(v)) {
                return Err(RepError::NotInvariant);
            }
        }
        if !levels.iter().all(|s| m.is_invariant(s)) {
            return Err(RepError::NotInvariant);
        }
        Ok(ModuleChain { levels })
    }

    pub fn len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `V_i / V_{i-1}` for `1 ≤ i ≤ len`.
    pub fn factor(&self, m: &GModule, i: usize) -> Result<GModule, RepError> {
        m.subquotient(&self.levels[i], &self.levels[i - 1])
    }

    /// `⊕ V_i / V_{i-1}`.
    pub fn associated_graded(&self, m: &GModule) -> Result<GModule, RepError> {
        let mut out: Option<GModule> = None;
        for i in 1..=self.len() {
            let fi = self.factor(m, i)?;
            if fi.dim == 0 {
                continue;
            }
            out = Some(match out {
                None => fi,
                Some(acc) => acc.direct_sum(&fi),
            });
        }
        Ok(out.unwrap_or_else(|| m.clone()).retag(m.tag.clone()))
    }

    /// The inequality on some factor implies it on `V`.
    pub fn ineq_via_factors(&self, m: &GModule, x: &[u32], orbit_dim: usize) -> Result<Option<usize>, RepError> {
        for i in 1..=self.len() {
            if check_ineq_mother(&self.factor(m, i)?, x, orbit_dim).holds {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

/// Sampled verdict on `g_v = ker dρ` for generic `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreenessVerdict {
    VirtuallyFree,
    Not,
    Inconclusive,
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FreenessVerdict::VirtuallyFree => "virtually_free",
            FreenessVerdict::Not => "not",
            FreenessVerdict::Inconclusive => "inconclusive",
        })
    }
}

impl FromStr for FreenessVerdict {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "virtually_free" => Ok(FreenessVerdict::VirtuallyFree),
            "not" => Ok(FreenessVerdict::Not),
            "inconclusive" => Ok(FreenessVerdict::Inconclusive),
            _ => Err(RepError::Parse(s.to_string())),
        }
    }
}

/// Samples for one seed. Stabilizer dimension is upper semicontinuous, so the
/// minimum over samples bounds the generic value from above; a sample with
/// `g_v = ker dρ` proves virtual freeness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSample {
    pub seed: u64,
    pub samples: usize,
    pub min_stabilizer_dim: usize,
    pub best_vector: Vec<u32>,
    pub stabilizer_basis: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub module: ModuleTag,
    pub module_dim: usize,
    pub kernel_dim: usize,
    pub seeds: Vec<SeedSample>,
    pub verdict: FreenessVerdict,
}

impl FreenessReport {
    /// Generic stabilizer dimension, when every seed agrees.
    pub fn generic_stabilizer_dim(&self) -> Option<usize> {
        let first = self.seeds.first()?.min_stabilizer_dim;
        self.seeds.iter().all(|s| s.min_stabilizer_dim == first).then_some(first)
    }
}

pub fn generic_freeness_sample(m: &GModule, trials: usize, seeds: &[u64]) -> FreenessReport {
    let kernel_dim = action_kernel(m).dim();
    let per_seed: Vec<SeedSample> = seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best: Option<(usize, Vec<u32>, Subspace)> = None;
            for _ in 0..trials.max(1) {
                let v = m.field.random_vector(&mut rng, m.dim);
                let s = stabilizer(m, &v);
                if best.as_ref().is_none_or(|b| s.dim() < b.0) {
                    let d = s.dim();
                    best = Some((d, v, s));
                    if d == kernel_dim {
                        break;
                    }
                }
            }
            let (d, v, s) = best.expect("at least one sample");
            SeedSample {
                seed,
                samples: trials.max(1),
                min_stabilizer_dim: d,
                best_vector: v,
                stabilizer_basis: s.basis().to_vec(),
            }
        })
        .collect();
    let free = per_seed.iter().filter(|s| s.min_stabilizer_dim == kernel_dim).count();
    let verdict = if free == per_seed.len() {
        FreenessVerdict::VirtuallyFree
    } else if free == 0 {
        FreenessVerdict::Not
    } else {
        FreenessVerdict::Inconclusive
    };
    FreenessReport { module: m.tag.clone(), module_dim: m.dim, kernel_dim, seeds: per_seed, verdict }
}

/// The algebra of a simple group used for modules: `sl_n`, `so_n`, `sp_2n`.
pub fn module_algebra(spec: GroupSpec) -> Result<MatrixAlgebra, RepError> {
    let cs = spec
        .classical()
        .ok_or_else(|| RepError::Unsupported { tag: "matrix module".into(), algebra: spec.to_string() })?;
    let kind = if cs.kind == AlgebraKind::Gl { AlgebraKind::Sl } else { cs.kind };
    Ok(MatrixAlgebra::realize(kind, cs.natural_dim, cs.p)?)
}

/// Builds a module for a simple group; exceptional types support
/// `adjoint_factor` on the adjoint Chevalley algebra.
pub fn build_for_group(spec: GroupSpec, tag: &ModuleTag) -> Result<(ModuleHost, GModule), RepError> {
    if spec.is_classical() {
        let alg = module_algebra(spec)?;
        let m = build_module(tag, &alg)?;
        Ok((ModuleHost::Matrix(alg), m))
    } else if *tag == ModuleTag::AdjointFactor {
        let alg = ChevalleyAlgebra::new(spec.ty, spec.rank, spec.p, Isogeny::Adjoint)?;
        let m = adjoint_factor(&alg)?;
        Ok((ModuleHost::Chevalley(alg), m))
    } else {
        Err(RepError::Unsupported { tag: tag.to_string(), algebra: spec.to_string() })
    }
}

/// The algebra a module was built for.
#[derive(Clone, Debug)]
pub enum ModuleHost {
    Matrix(MatrixAlgebra),
    Chevalley(ChevalleyAlgebra),
}

impl ModuleHost {
    pub fn lie(&self) -> &dyn LieAlgebra {
        match self {
            ModuleHost::Matrix(m) => m,
            ModuleHost::Chevalley(c) => c,
        }
    }
}

/// The hypothesis gate: a subquotient `X` with `dim X > b(G)` and
/// `X^{[g,g]} = 0`. The candidates tried are `V` and `V / V^{[g,g]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub module_dim: usize,
    pub bound: Bound,
    /// `dim V^{[g,g]}`.
    pub derived_fixed_dim: usize,
    /// `"V"` or `"V/V^[g,g]"`.
    pub subquotient: String,
    pub subquotient_dim: usize,
    /// `dim X^{[g,g]}` for the chosen `X`.
    pub subquotient_fixed_dim: usize,
    pub met: bool,
}

fn find_hypothesis(m: &GModule, derived: &Subspace, bound: Bound) -> Result<Hypothesis, RepError> {
    let fixed = fixed_points_of(m, derived);
    let big = |d: usize| bound.num < d as u64 * bound.den;
    let (subquotient, x_dim, x_fixed) = if fixed.dim() == 0 {
        ("V", m.dim(), 0)
    } else {
        // V^{[g,g]} is a submodule since [g,g] is an ideal
        let x = m.subquotient(&Subspace::full(m.field, m.dim()), &fixed)?;
        ("V/V^[g,g]", x.dim(), fixed_points_of(&x, derived).dim())
    };
    Ok(Hypothesis {
        module_dim: m.dim(),
        bound,
        derived_fixed_dim: fixed.dim(),
        subquotient: subquotient.into(),
        subquotient_dim: x_dim,
        subquotient_fixed_dim: x_fixed,
        met: big(x_dim) && x_fixed == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIneqRecord {
    pub label: ClassLabel,
    #[serde(flatten)]
    pub check: IneqCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    /// Every noncentral class with `x^[p] ∈ {0, x}`.
    Full,
    /// Root elements only.
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtpReport {
    pub group: GroupSpec,
    pub module: ModuleTag,
    pub hypothesis: Hypothesis,
    pub coverage: Coverage,
    pub records: Vec<ClassIneqRecord>,
    /// `None` when the hypothesis is not met: no claim is made.
    pub all_hold: Option<bool>,
}

/// Noncentral classes of `g` with `x^[p] ∈ {0, x}` for the sweep.
fn restricted_classes(cs: ClassicalSpec) -> Vec<ClassLabel> {
    let p = cs.p as usize;
    enumerate_classes(cs)
        .into_iter()
        .filter(|l| match l {
            ClassLabel::Nilpotent { partition, .. } => partition.parts()[0] <= p,
            ClassLabel::Toral { eigen } => {
                // inside sl_n the trace must vanish
                cs.kind != AlgebraKind::Gl
                    || eigen.iter().map(|&(v, m)| v as u64 * m as u64).sum::<u64>() % cs.p as u64 == 0
            }
            ClassLabel::GoIdempotent => false,
            ClassLabel::RootElement => true,
        })
        .collect()
}

pub fn check_theorem_mtp(spec: GroupSpec, tag: &ModuleTag) -> Result<MtpReport, RepError> {
    let spec = GroupSpec::new(spec.ty, spec.rank, spec.p)?;
    let (host, m) = build_for_group(spec, tag)?;
    let bound = bound_b(spec);
    let derived = derived_subalgebra(host.lie());
    let hypothesis = find_hypothesis(&m, &derived, bound)?;
    let coverage = if spec.is_classical() { Coverage::Full } else { Coverage::Partial };
    if !hypothesis.met {
        return Ok(MtpReport {
            group: spec,
            module: tag.clone(),
            hypothesis,
            coverage,
            records: Vec::new(),
            all_hold: None,
        });
    }
    let records: Vec<ClassIneqRecord> = match &host {
        ModuleHost::Matrix(alg) => {
            let cs = spec.classical().expect("classical");
            let labels = restricted_classes(cs);
            labels
                .par_iter()
                .map(|l| {
                    let x = alg.coords(&class_rep(l, alg)?)?;
                    let od = orbit_dim(l, cs.kind, cs.natural_dim, cs.p)?;
                    Ok(ClassIneqRecord { label: l.clone(), check: check_ineq_mother(&m, &x, od) })
                })
                .collect::<Result<_, RepError>>()?
        }
        ModuleHost::Chevalley(alg) => {
            let od = minimal_orbit_dim(alg.root_system());
            let x = alg.highest_root_vector();
            vec![ClassIneqRecord { label: ClassLabel::RootElement, check: check_ineq_mother(&m, &x, od) }]
        }
    };
    let all_hold = Some(records.iter().all(|r| r.check.holds));
    Ok(MtpReport { group: spec, module: tag.clone(), hypothesis, coverage, records, all_hold })
}

/// The case of the `SL_2` analysis a weight falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl2Case {
    /// `p | w`: the Lie algebra acts as zero.
    ZeroAction,
    /// `w = 1`, or `w = 2` with `p ≠ 2`.
    NotFree,
    /// `w = p^e + 1`: virtually free, inequality fails for nilpotents.
    FreeIneqFails,
    /// Inequality holds for all noncentral `x` with `x^[p] ∈ {0, x}`.
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Row {
    pub w: u32,
    pub w0: u32,
    pub copies: usize,
    pub module_dim: usize,
    pub case: Sl2Case,
    pub expected_free: bool,
    pub verdict: FreenessVerdict,
    pub nilpotent: IneqCheck,
    pub toral: Option<IneqCheck>,
    pub expected_ineq_holds: bool,
    pub ineq_holds: bool,
    pub matches: bool,
}

/// Classification of `L(w)`, `0 ≤ w ≤ w_max`, against the expected verdicts.
pub fn sl2_classification(p: u32, w_max: u32, trials: usize, seeds: &[u64]) -> Result<Vec<Sl2Row>, RepError> {
    let alg = MatrixAlgebra::realize(AlgebraKind::Sl, 2, p)?;
    let f = alg.field();
    let e = alg.coords(&PrimeFieldMatrix::from_i64_rows(f, &[vec![0, 1], vec![0, 0]]))?;
    let h =
        (p != 2).then(|| alg.coords(&PrimeFieldMatrix::from_i64_rows(f, &[vec![1, 0], vec![0, -1]]))).transpose()?;
    (0..=w_max)
        .into_par_iter()
        .map(|w| {
            let m = sl2_weight_module(&alg, w)?;
            let (w0, c) = sl2_digits(w, p);
            let case = if w0 == 0 {
                Sl2Case::ZeroAction
            } else if c * (w0 as usize) <= 2 {
                if c == 1 {
                    Sl2Case::NotFree
                } else {
                    Sl2Case::FreeIneqFails
                }
            } else {
                Sl2Case::Generic
            };
            let expected_free = !(w == 1 || (p != 2 && w == 2));
            let verdict = generic_freeness_sample(&m, trials, seeds).verdict;
            let nilpotent = check_ineq_mother(&m, &e, 2);
            let toral = h.as_ref().map(|h| check_ineq_mother(&m, h, 2));
            let ineq_holds = nilpotent.holds && toral.is_none_or(|t| t.holds);
            let expected_ineq_holds = case == Sl2Case::Generic;
            let verdict_ok = (verdict == FreenessVerdict::VirtuallyFree) == expected_free
                && verdict != FreenessVerdict::Inconclusive;
            // nilpotent x: equality lhs = rhs exactly in the p^e + 1 case
            let equality_ok = case != Sl2Case::FreeIneqFails || nilpotent.lhs == nilpotent.rhs;
            Ok(Sl2Row {
                w,
                w0,
                copies: c,
                module_dim: m.dim(),
                case,
                expected_free,
                verdict,
                nilpotent,
                toral,
                expected_ineq_holds,
                ineq_holds,
                matches: verdict_ok && ineq_holds == expected_ineq_holds && equality_ok,
            })
        })
        .collect()
}

/// Default sampling prime for generic-stabilizer checks.
pub const SAMPLING_PRIME: u32 = 10007;

/// `TypeLabel` and rank of the group whose natural module has dimension `n`
/// for orthogonal algebras.
pub fn so_spec(n: usize, p: u32) -> Result<GroupSpec, RepError> {
    let (ty, rank) = if n % 2 == 1 { (TypeLabel::B, n / 2) } else { (TypeLabel::D, n / 2) };
    Ok(GroupSpec::new(ty, rank, p)?)
}
