//! Chevalley Lie algebras over `F_p` and the generic machinery shared with
//! matrix realizations: brackets, root-group conjugation, closures, derived
//! subalgebra, center, and the quasi-regular / strongly regular predicates.

use std::collections::VecDeque;
use std::fmt;

use num_rational::Rational64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fflinalg::{LinalgError, PrimeField, PrimeFieldMatrix, Subspace};
use crate::rootdata::{RootError, RootSystem, TypeLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("isogeny {0} is not available for type {1}{2}")]
    InvalidIsogeny(Isogeny, TypeLabel, usize),
    #[error("element has components outside the Cartan subalgebra")]
    NotInCartan,
    #[error("vector of length {0} does not match algebra dimension {1}")]
    DimensionMismatch(usize, usize),
    #[error("root group {0} cannot be exponentiated in characteristic {1}")]
    NoRootGroup(usize, u32),
}

/// Which integral form of the Cartan subalgebra to use, i.e. which group in
/// the isogeny class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
    /// `SL_n / μ_m` for `m | n` (type A only).
    SlQuotient {
        m: usize,
    },
    /// `SO_{2n}` (type D only).
    SpecialOrthogonal,
    /// Half-spin group (type D, even rank).
    HalfSpin,
}

impl fmt::Display for Isogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Isogeny::SimplyConnected => f.write_str("simply_connected"),
            Isogeny::Adjoint => f.write_str("adjoint"),
            Isogeny::SlQuotient { m } => write!(f, "sl_quotient_{m}"),
            Isogeny::SpecialOrthogonal => f.write_str("special_orthogonal"),
            Isogeny::HalfSpin => f.write_str("half_spin"),
        }
    }
}

pub type LieElement = Vec<u32>;

/// One root-group automorphism `Ad(x_root(t))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordStep {
    pub root: usize,
    pub t: u32,
}

/// A product of root-group automorphisms, applied left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationWord {
    pub steps: Vec<WordStep>,
}

impl ConjugationWord {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// A finite-dimensional Lie algebra over `F_p` with a distinguished torus and
/// a family of root-group automorphisms.
pub trait LieAlgebra: Send + Sync {
    fn field(&self) -> PrimeField;
    fn dim(&self) -> usize;
    fn bracket(&self, x: &[u32], y: &[u32]) -> Vec<u32>;

    /// Matrix of `ad x` (columns are images of basis vectors).
    fn ad(&self, x: &[u32]) -> PrimeFieldMatrix {
        let n = self.dim();
        let cols: Vec<Vec<u32>> = (0..n).map(|j| self.bracket(x, &unit(n, j, self.field()))).collect();
        PrimeFieldMatrix::from_columns(self.field(), n, &cols)
    }

    /// Number of root groups available for conjugation.
    fn num_root_groups(&self) -> usize;
    fn num_positive_roots(&self) -> usize;
    /// `Ad(x_root(t)) x`.
    fn apply_root_group(&self, root: usize, t: u32, x: &[u32]) -> Vec<u32>;

    /// Number of admissible root-group parameters; `t` ranges over `0..count`.
    fn root_group_parameters(&self) -> u32 {
        self.field().p()
    }

    /// The coefficients `D_1 x, D_2 x, …` of `Ad(x_root(t)) x = x + Σ t^k D_k x`,
    /// when the action is available as a polynomial in `t`.
    fn root_group_terms(&self, _root: usize, _x: &[u32]) -> Option<Vec<Vec<u32>>> {
        None
    }

    /// Degree over `F_p` of the scalar field the algebra is defined over.
    fn scalar_degree(&self) -> usize {
        1
    }

    /// An `F_p`-spanning set of the scalar multiples of `x`.
    fn scalar_multiples(&self, x: &[u32]) -> Vec<Vec<u32>> {
        vec![x.to_vec()]
    }

    /// Cartan subalgebra followed by the root-space components used for
    /// quasi-regularity (opposite roots merged in characteristic 2).
    fn weight_components(&self) -> Vec<Subspace>;

    fn basis_label(&self, i: usize) -> String {
        format!("b{i}")
    }
}

pub(crate) fn unit(n: usize, j: usize, f: PrimeField) -> Vec<u32> {
    let mut v = vec![0; n];
    v[j] = 1 % f.p();
    v
}

/// Derived subalgebra: the span of all brackets of basis elements.
pub fn derived_subalgebra<L: LieAlgebra + ?Sized>(alg: &L) -> Subspace {
    let n = alg.dim();
    let f = alg.field();
    let mut s = Subspace::zero(f, n);
    for i in 0..n {
        let bi = unit(n, i, f);
        for j in i + 1..n {
            s.insert(&alg.bracket(&bi, &unit(n, j, f)));
            if s.is_full() {
                return s;
            }
        }
    }
    s
}

/// Center: the kernel of `x ↦ ad x`.
pub fn center<L: LieAlgebra + ?Sized>(alg: &L) -> Subspace {
    let n = alg.dim();
    let f = alg.field();
    // Rows of the stacked system "[x, b_j] = 0 for all j", viewed as functionals of x.
    let mut rows = Subspace::zero(f, n);
    for j in 0..n {
        let bj = unit(n, j, f);
        let m = alg.ad(&bj);
        // [x, b_j] = -ad(b_j) x, so the rows of ad(b_j) are the functionals.
        for r in 0..n {
            rows.insert(m.row(r));
        }
        if rows.is_full() {
            return Subspace::zero(f, n);
        }
    }
    crate::fflinalg::kernel(&rows.basis_matrix())
}

/// Subalgebra generated by `gens`, by the generic saturation of [`closure_under`].
///
/// [`closure_under`]: crate::fflinalg::closure_under
pub fn generated_subalgebra<L: LieAlgebra + ?Sized>(alg: &L, gens: &[Vec<u32>]) -> Subspace {
    crate::fflinalg::closure_under(alg.field(), alg.dim(), gens, |x, y| alg.bracket(x, y))
}

/// Subalgebra generated by `gens`, computed as the span of right-normed
/// brackets `ad(g_1)…ad(g_k) g`. Stops early once `stop_at` is contained,
/// in which case the result is a subspace of the generated subalgebra that
/// already contains `stop_at`.
pub fn lie_closure<L: LieAlgebra + ?Sized>(alg: &L, gens: &[Vec<u32>], stop_at: Option<&Subspace>) -> Subspace {
    let f = alg.field();
    let n = alg.dim();
    let ads: Vec<PrimeFieldMatrix> = gens.iter().map(|g| alg.ad(g)).collect();
    let mut space = Subspace::zero(f, n);
    let mut queue: VecDeque<Vec<u32>> = VecDeque::new();
    for g in gens {
        if let Some(r) = space.insert(g) {
            queue.push_back(r);
        }
    }
    let reached = |s: &Subspace| match stop_at {
        Some(t) => s.dim() >= t.dim() && t.basis().iter().all(|v| s.contains_vector(v)),
        None => false,
    };
    if reached(&space) {
        return space;
    }
    while let Some(v) = queue.pop_front() {
        let mut grew = false;
        for a in &ads {
            let w = a.mul_vec(&v);
            if let Some(r) = space.insert(&w) {
                queue.push_back(r);
                grew = true;
            }
        }
        if space.is_full() || (grew && reached(&space)) {
            break;
        }
    }
    space
}

/// Applies the word left to right.
pub fn apply_word<L: LieAlgebra + ?Sized>(alg: &L, word: &ConjugationWord, x: &[u32]) -> Vec<u32> {
    word.steps.iter().fold(x.to_vec(), |acc, s| alg.apply_root_group(s.root, s.t, &acc))
}

/// Default word length `2 · #positive roots`.
pub fn default_word_length<L: LieAlgebra + ?Sized>(alg: &L) -> usize {
    2 * alg.num_positive_roots()
}

/// Image of `x` under a random word of root-group automorphisms.
pub fn random_conjugate<L: LieAlgebra + ?Sized, R: Rng + ?Sized>(
    alg: &L,
    x: &[u32],
    word_length: usize,
    rng: &mut R,
) -> (Vec<u32>, ConjugationWord) {
    let f = alg.field();
    let nroots = alg.num_root_groups();
    let params = alg.root_group_parameters();
    let steps: Vec<WordStep> = (0..word_length)
        .map(|_| {
            let root = rng.gen_range(0..nroots);
            let t = if params == f.p() { f.random(rng) } else { rng.gen_range(0..params) };
            WordStep { root, t }
        })
        .collect();
    let word = ConjugationWord { steps };
    (apply_word(alg, &word, x), word)
}

/// True iff `sub` is the direct sum of its intersections with the weight
/// components of the algebra.
pub fn is_quasi_regular<L: LieAlgebra + ?Sized>(alg: &L, sub: &Subspace) -> Result<bool, LieError> {
    let mut total = 0;
    for c in alg.weight_components() {
        total += sub.intersect(&c)?.dim();
    }
    Ok(total == sub.dim())
}

/// Checks antisymmetry, alternation and the Jacobi identity on basis
/// elements with dense arithmetic. Returns the first failing triple.
pub fn jacobi_violation_dense<L: LieAlgebra + ?Sized>(alg: &L) -> Option<(usize, usize, usize)> {
    let n = alg.dim();
    let f = alg.field();
    let basis: Vec<Vec<u32>> = (0..n).map(|i| unit(n, i, f)).collect();
    let br: Vec<Vec<Vec<u32>>> = (0..n).map(|i| (0..n).map(|j| alg.bracket(&basis[i], &basis[j])).collect()).collect();
    for i in 0..n {
        if br[i][i].iter().any(|&v| v != 0) {
            return Some((i, i, i));
        }
        for j in 0..n {
            if br[i][j].iter().zip(&br[j][i]).any(|(&a, &b)| f.add(a, b) != 0) {
                return Some((i, j, j));
            }
        }
    }
    (0..n).into_par_iter().find_map_first(|i| {
        for j in i + 1..n {
            for k in j + 1..n {
                let a = alg.bracket(&br[i][j], &basis[k]);
                let b = alg.bracket(&br[j][k], &basis[i]);
                let c = alg.bracket(&br[k][i], &basis[j]);
                if (0..n).any(|r| f.add(f.add(a[r], b[r]), c[r]) != 0) {
                    return Some((i, j, k));
                }
            }
        }
        None
    })
}

/// Integer coordinate lattice for the Cartan subalgebra: rows are a Z-basis
/// in fundamental-coweight coordinates.
fn cartan_lattice(rs: &RootSystem, iso: Isogeny) -> Result<Vec<Vec<i64>>, LieError> {
    let l = rs.rank();
    let t = rs.type_label();
    // α_i^∨ in ω^∨ coordinates: ⟨α_j, α_i^∨⟩ = cartan[j][i].
    let mut gens: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| rs.cartan()[j][i]).collect()).collect();
    let omega = |k: usize, c: i64| -> Vec<i64> {
        let mut v = vec![0; l];
        v[k] = c;
        v
    };
    match iso {
        Isogeny::SimplyConnected => {}
        Isogeny::Adjoint => gens.extend((0..l).map(|k| omega(k, 1))),
        Isogeny::SlQuotient { m } => {
            let n = l + 1;
            if t != TypeLabel::A || m == 0 || !n.is_multiple_of(m) {
                return Err(LieError::InvalidIsogeny(iso, t, l));
            }
            gens.push(omega(0, (n / m) as i64));
        }
        Isogeny::SpecialOrthogonal => {
            if t != TypeLabel::D {
                return Err(LieError::InvalidIsogeny(iso, t, l));
            }
            gens.push(omega(0, 1));
        }
        Isogeny::HalfSpin => {
            if t != TypeLabel::D || !l.is_multiple_of(2) {
                return Err(LieError::InvalidIsogeny(iso, t, l));
            }
            gens.push(omega(l - 1, 1));
        }
    }
    Ok(hermite_rows(gens, l))
}

/// Row-style Hermite reduction: returns a Z-basis of the row lattice.
fn hermite_rows(mut rows: Vec<Vec<i64>>, cols: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            for &i in &nz {
                if i != piv {
                    let q = rows[i][c] / rows[piv][c];
                    let pr = rows[piv].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pr) {
                        *x -= q * y;
                    }
                }
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
            let mut r = rows.remove(i);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
        rows.retain(|r| r.iter().any(|&x| x != 0));
    }
    out
}

/// Solves `c · lattice = v` over Q and checks integrality.
fn lattice_coords(lattice: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let l = lattice.len();
    // Augmented system L^T c = v.
    let mut a: Vec<Vec<Rational64>> = (0..l)
        .map(|j| {
            let mut row: Vec<Rational64> = (0..l).map(|i| Rational64::from_integer(lattice[i][j])).collect();
            row.push(Rational64::from_integer(v[j]));
            row
        })
        .collect();
    for c in 0..l {
        let piv = (c..l).find(|&r| a[r][c] != Rational64::from_integer(0)).expect("lattice has full rank");
        a.swap(c, piv);
        let inv = Rational64::from_integer(1) / a[c][c];
        for x in a[c].iter_mut() {
            *x *= inv;
        }
        for r in 0..l {
            if r != c {
                let m = a[r][c];
                if m != Rational64::from_integer(0) {
                    let pr = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(&pr) {
                        *x -= m * y;
                    }
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            let x = row[l];
            assert!(x.is_integer(), "coroot not in the chosen lattice");
            x.to_integer()
        })
        .collect()
}

#[derive(Clone, Debug)]
struct SparseColumns {
    cols: Vec<Vec<(u32, i64)>>,
}

/// The Chevalley Lie algebra of a root datum, reduced mod `p`.
///
/// Basis: `h_1, …, h_ℓ` (a Z-basis of the chosen Cartan lattice), then
/// `e_α` for each root in the order of [`RootSystem::roots`].
#[derive(Clone, Debug)]
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    field: PrimeField,
    isogeny: Isogeny,
    lattice: Vec<Vec<i64>>,
    /// `[b_i, b_j]` as integer terms, CSR over `i * dim + j`.
    offsets: Vec<u32>,
    terms: Vec<(u32, i64)>,
    /// Same terms reduced mod p, zeros dropped.
    reduced_offsets: Vec<u32>,
    reduced: Vec<(u32, u32)>,
    /// Per root: divided powers `ad(e_α)^k / k!` for k ≥ 1 reduced mod p,
    /// as (row, col, value).
    divided_powers: Vec<Vec<Vec<(u32, u32, u32)>>>,
}

impl ChevalleyAlgebra {
    pub fn new(t: TypeLabel, rank: usize, p: u32, isogeny: Isogeny) -> Result<Self, LieError> {
        let rs = RootSystem::build(t, rank)?;
        let field = PrimeField::new(p as u64)?;
        Self::from_root_system(rs, field, isogeny)
    }

    pub fn from_root_system(rs: RootSystem, field: PrimeField, isogeny: Isogeny) -> Result<Self, LieError> {
        let l = rs.rank();
        let lattice = cartan_lattice(&rs, isogeny)?;
        let nr = rs.num_roots();
        let dim = l + nr;
        let sc = rs.structure_constants();

        // ⟨β, b_a⟩ for lattice row a.
        let weight =
            |a: usize, beta: usize| -> i64 { lattice[a].iter().zip(rs.root(beta)).map(|(&x, &y)| x * y as i64).sum() };
        let coroots: Vec<Vec<i64>> = (0..nr)
            .map(|r| {
                let v: Vec<i64> = (0..l).map(|j| rs.pairing(rs.root(rs.simple_root_index(j)), r)).collect();
                lattice_coords(&lattice, &v)
            })
            .collect();

        let mut offsets = Vec::with_capacity(dim * dim + 1);
        let mut terms: Vec<(u32, i64)> = Vec::new();
        offsets.push(0u32);
        for i in 0..dim {
            for j in 0..dim {
                match (i < l, j < l) {
                    (true, true) => {}
                    (true, false) => {
                        let w = weight(i, j - l);
                        if w != 0 {
                            terms.push((j as u32, w));
                        }
                    }
                    (false, true) => {
                        let w = weight(j, i - l);
                        if w != 0 {
                            terms.push((i as u32, -w));
                        }
                    }
                    (false, false) => {
                        let (a, b) = (i - l, j - l);
                        if rs.negative(a) == b {
                            for (k, &c) in coroots[a].iter().enumerate() {
                                if c != 0 {
                                    terms.push((k as u32, c));
                                }
                            }
                        } else if let Some(s) = rs.sum_index(a, b) {
                            let n = sc.get(a, b).expect("constant for root sum");
                            terms.push(((s + l) as u32, n));
                        }
                    }
                }
                offsets.push(terms.len() as u32);
            }
        }

        let mut reduced_offsets = Vec::with_capacity(dim * dim + 1);
        let mut reduced = Vec::new();
        reduced_offsets.push(0u32);
        for idx in 0..dim * dim {
            for &(k, c) in &terms[offsets[idx] as usize..offsets[idx + 1] as usize] {
                let v = field.from_i64(c);
                if v != 0 {
                    reduced.push((k, v));
                }
            }
            reduced_offsets.push(reduced.len() as u32);
        }

        let mut alg =
            Self { rs, field, isogeny, lattice, offsets, terms, reduced_offsets, reduced, divided_powers: Vec::new() };
        alg.divided_powers = (0..nr).map(|r| alg.compute_divided_powers(r)).collect();
        Ok(alg)
    }

    fn int_terms(&self, i: usize, j: usize) -> &[(u32, i64)] {
        let idx = i * self.dim() + j;
        &self.terms[self.offsets[idx] as usize..self.offsets[idx + 1] as usize]
    }

    fn red_terms(&self, i: usize, j: usize) -> &[(u32, u32)] {
        let idx = i * self.dim() + j;
        &self.reduced[self.reduced_offsets[idx] as usize..self.reduced_offsets[idx + 1] as usize]
    }

    fn compute_divided_powers(&self, root: usize) -> Vec<Vec<(u32, u32, u32)>> {
        let n = self.dim();
        let e = self.rank() + root;
        let ad = SparseColumns { cols: (0..n).map(|j| self.int_terms(e, j).to_vec()).collect() };
        let mut out = Vec::new();
        let mut cur = ad.clone();
        let mut k = 1i64;
        loop {
            let entries: Vec<(u32, u32, u32)> = cur
                .cols
                .iter()
                .enumerate()
                .flat_map(|(j, col)| {
                    col.iter().filter_map(move |&(r, v)| {
                        let red = self.field.from_i64(v);
                        (red != 0).then_some((r, j as u32, red))
                    })
                })
                .collect();
            if cur.cols.iter().all(|c| c.is_empty()) {
                break;
            }
            out.push(entries);
            k += 1;
            // next = ad · cur / k
            let mut next = Vec::with_capacity(n);
            for col in &cur.cols {
                let mut acc: std::collections::BTreeMap<u32, i64> = Default::default();
                for &(r, v) in col {
                    for &(s, w) in &ad.cols[r as usize] {
                        *acc.entry(s).or_insert(0) += v * w;
                    }
                }
                let c: Vec<(u32, i64)> = acc
                    .into_iter()
                    .filter(|&(_, v)| v != 0)
                    .map(|(s, v)| {
                        assert!(v % k == 0, "divided power not integral");
                        (s, v / k)
                    })
                    .collect();
                next.push(c);
            }
            cur = SparseColumns { cols: next };
        }
        out
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }
    pub fn rank(&self) -> usize {
        self.rs.rank()
    }
    pub fn isogeny(&self) -> Isogeny {
        self.isogeny
    }
    /// Z-basis of the Cartan lattice, rows in fundamental-coweight coordinates.
    pub fn lattice(&self) -> &[Vec<i64>] {
        &self.lattice
    }
    pub fn type_label(&self) -> TypeLabel {
        self.rs.type_label()
    }

    /// Basis index of `e_root`.
    pub fn root_vector_index(&self, root: usize) -> usize {
        self.rank() + root
    }

    pub fn root_vector(&self, root: usize) -> Vec<u32> {
        unit(self.dim(), self.root_vector_index(root), self.field)
    }

    /// `e_θ` for the highest root θ: a long root element.
    pub fn highest_root_vector(&self) -> Vec<u32> {
        self.root_vector(self.rs.highest_root())
    }

    /// Integer coefficients of `[b_i, b_j]`.
    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(u32, i64)] {
        self.int_terms(i, j)
    }

    /// `α(t)` for an element `t` of the Cartan subalgebra.
    pub fn root_value(&self, t: &[u32], root: usize) -> u32 {
        let f = self.field;
        let mut acc = 0;
        for a in 0..self.rank() {
            let w: i64 = self.lattice[a].iter().zip(self.rs.root(root)).map(|(&x, &y)| x * y as i64).sum();
            acc = f.add(acc, f.mul(t[a], f.from_i64(w)));
        }
        acc
    }

    /// True iff the values `0` and `α(t)` for all roots `α` are pairwise
    /// distinct, so that `ad t` separates the root spaces and the torus.
    pub fn is_strongly_regular(&self, t: &[u32]) -> Result<bool, LieError> {
        if t.len() != self.dim() {
            return Err(LieError::DimensionMismatch(t.len(), self.dim()));
        }
        if t[self.rank()..].iter().any(|&v| v != 0) {
            return Err(LieError::NotInCartan);
        }
        let mut vals: Vec<u32> = (0..self.rs.num_roots()).map(|r| self.root_value(t, r)).collect();
        vals.push(0);
        let n = vals.len();
        vals.sort_unstable();
        vals.dedup();
        Ok(vals.len() == n)
    }

    /// Exact Jacobi, antisymmetry and alternation check on basis elements
    /// using the reduced structure table. Returns the first failing triple.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let f = self.field;
        for i in 0..n {
            if !self.red_terms(i, i).is_empty() {
                return Some((i, i, i));
            }
            for j in i + 1..n {
                let mut a = self.red_terms(i, j).to_vec();
                let mut b: Vec<(u32, u32)> = self.red_terms(j, i).iter().map(|&(k, v)| (k, f.neg(v))).collect();
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Some((i, j, j));
                }
            }
        }
        (0..n).into_par_iter().find_map_first(|i| {
            let mut acc: Vec<u32> = vec![0; n];
            let mut touched: Vec<u32> = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    touched.clear();
                    for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for &(m, c) in self.red_terms(x, y) {
                            for &(r, d) in self.red_terms(m as usize, z) {
                                let slot = &mut acc[r as usize];
                                *slot = f.add(*slot, f.mul(c, d));
                                touched.push(r);
                            }
                        }
                    }
                    let mut bad = false;
                    for &r in &touched {
                        if acc[r as usize] != 0 {
                            bad = true;
                        }
                        acc[r as usize] = 0;
                    }
                    if bad {
                        return Some((i, j, k));
                    }
                }
            }
            None
        })
    }
}

impl LieAlgebra for ChevalleyAlgebra {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn dim(&self) -> usize {
        self.rs.rank() + self.rs.num_roots()
    }

    fn bracket(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let p = self.field.p() as u64;
        let xs: Vec<(usize, u64)> =
            x.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v as u64)).collect();
        let ys: Vec<(usize, u64)> =
            y.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v as u64)).collect();
        let mut acc = vec![0u64; n];
        for &(i, a) in &xs {
            for &(j, b) in &ys {
                let ab = a * b % p;
                for &(k, c) in self.red_terms(i, j) {
                    acc[k as usize] = (acc[k as usize] + ab * c as u64) % p;
                }
            }
        }
        acc.into_iter().map(|v| v as u32).collect()
    }

    fn ad(&self, x: &[u32]) -> PrimeFieldMatrix {
        let n = self.dim();
        let f = self.field;
        let mut m = PrimeFieldMatrix::zeros(f, n, n);
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for j in 0..n {
                for &(k, c) in self.red_terms(i, j) {
                    m.add_at(k as usize, j, f.mul(a, c));
                }
            }
        }
        m
    }

    fn num_root_groups(&self) -> usize {
        self.rs.num_roots()
    }

    fn num_positive_roots(&self) -> usize {
        self.rs.num_positive()
    }

    fn apply_root_group(&self, root: usize, t: u32, x: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut y = x.to_vec();
        let mut tk = 1u32;
        for dk in &self.divided_powers[root] {
            tk = f.mul(tk, t);
            if tk == 0 {
                break;
            }
            for &(r, c, v) in dk {
                let xc = x[c as usize];
                if xc != 0 {
                    let add = f.mul(tk, f.mul(v, xc));
                    y[r as usize] = f.add(y[r as usize], add);
                }
            }
        }
        y
    }

    fn root_group_terms(&self, root: usize, x: &[u32]) -> Option<Vec<Vec<u32>>> {
        let f = self.field;
        let terms = self.divided_powers[root]
            .iter()
            .map(|dk| {
                let mut y = vec![0; x.len()];
                for &(r, c, v) in dk {
                    let xc = x[c as usize];
                    if xc != 0 {
                        y[r as usize] = f.add(y[r as usize], f.mul(v, xc));
                    }
                }
                y
            })
            .collect();
        Some(terms)
    }

    fn weight_components(&self) -> Vec<Subspace> {
        let n = self.dim();
        let f = self.field;
        let l = self.rank();
        let mut out = vec![Subspace::span(f, n, &(0..l).map(|i| unit(n, i, f)).collect::<Vec<_>>())];
        let np = self.rs.num_positive();
        for r in 0..np {
            let pos = unit(n, l + r, f);
            let neg = unit(n, l + self.rs.negative(r), f);
            if f.p() == 2 {
                out.push(Subspace::span(f, n, &[pos, neg]));
            } else {
                out.push(Subspace::span(f, n, &[pos]));
                out.push(Subspace::span(f, n, &[neg]));
            }
        }
        out
    }

    fn basis_label(&self, i: usize) -> String {
        let l = self.rank();
        if i < l {
            format!("h{}", i + 1)
        } else {
            let r = self.rs.root(i - l);
            let coords: Vec<String> = r.iter().map(|c| c.to_string()).collect();
            format!("e[{}]", coords.join(","))
        }
    }
}

/// `L ⊗ F_{p^k}` viewed as a Lie algebra over `F_p` of dimension `k · dim L`.
/// Coordinates are `k` blocks, block `i` holding the coefficient of `ω^i`.
/// Root-group parameters `t < p^k` encode `Σ t_i ω^i` by their base-`p` digits.
#[derive(Clone, Debug)]
pub struct ScalarExtension<L> {
    base: L,
    degree: usize,
    /// `ω^i` for `i < 2k - 1` in the basis `1, ω, …, ω^{k-1}`.
    powers: Vec<Vec<u32>>,
    modulus: Vec<u32>,
}

/// Smallest monic irreducible polynomial of degree `k` over `F_p` in
/// lexicographic order, low coefficients first (leading 1 omitted).
pub fn irreducible_polynomial(f: PrimeField, k: usize) -> Vec<u32> {
    let p = f.p() as u64;
    let total = p.pow(k as u32);
    (0..total)
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let d = (code % p) as u32;
                    code /= p;
                    d
                })
                .collect::<Vec<u32>>()
        })
        .find(|c| k == 1 || (c[0] != 0 && has_no_factor(f, c)))
        .expect("irreducible polynomials exist in every degree")
}

/// No monic factor of degree `1..=k/2` divides `x^k + c(x)`.
fn has_no_factor(f: PrimeField, c: &[u32]) -> bool {
    let k = c.len();
    let mut poly = c.to_vec();
    poly.push(1);
    let p = f.p() as u64;
    for d in 1..=k / 2 {
        for mut code in 0..p.pow(d as u32) {
            let mut g: Vec<u32> = (0..d)
                .map(|_| {
                    let v = (code % p) as u32;
                    code /= p;
                    v
                })
                .collect();
            g.push(1);
            if poly_rem(f, &poly, &g).iter().all(|&v| v == 0) {
                return false;
            }
        }
    }
    true
}

/// `ω · v`, reduced with `ω^k = -Σ c_i ω^i`.
fn mul_omega(f: PrimeField, modulus: &[u32], v: &[u32]) -> Vec<u32> {
    let k = v.len();
    let top = v[k - 1];
    let mut next = vec![0; k];
    next[1..k].copy_from_slice(&v[..k - 1]);
    for (i, &ci) in modulus.iter().enumerate() {
        next[i] = f.sub(next[i], f.mul(top, ci));
    }
    next
}

fn poly_rem(f: PrimeField, a: &[u32], g: &[u32]) -> Vec<u32> {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dg;
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(lead, gi));
        }
        r.pop();
    }
    r
}

impl<L: LieAlgebra> ScalarExtension<L> {
    pub fn new(base: L, degree: usize) -> Self {
        assert!(degree >= 1);
        let f = base.field();
        let modulus = irreducible_polynomial(f, degree);
        let mut powers = Vec::with_capacity(2 * degree - 1);
        let mut cur = unit(degree, 0, f);
        for _ in 0..2 * degree - 1 {
            powers.push(cur.clone());
            cur = mul_omega(f, &modulus, &cur);
        }
        ScalarExtension { base, degree, powers, modulus }
    }

    pub fn base(&self) -> &L {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Product in `F_{p^k}` of coefficient vectors.
    pub fn scalar_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.base.field();
        let mut out = vec![0; self.degree];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let c = f.mul(ai, bj);
                if c == 0 {
                    continue;
                }
                for (l, &w) in self.powers[i + j].iter().enumerate() {
                    out[l] = f.add(out[l], f.mul(c, w));
                }
            }
        }
        out
    }

    /// Digits of a root-group parameter.
    pub fn decode(&self, t: u32) -> Vec<u32> {
        let p = self.base.field().p();
        let mut t = t;
        (0..self.degree)
            .map(|_| {
                let d = t % p;
                t /= p;
                d
            })
            .collect()
    }

    /// Embeds a vector of the base algebra as block 0.
    pub fn embed(&self, x: &[u32]) -> Vec<u32> {
        let mut v = x.to_vec();
        v.resize(self.dim(), 0);
        v
    }

    /// `ω^i · x`.
    pub fn times_omega_power(&self, i: usize, x: &[u32]) -> Vec<u32> {
        let f = self.base.field();
        let w = (0..i).fold(unit(self.degree, 0, f), |acc, _| mul_omega(f, &self.modulus, &acc));
        self.scale(&w, x)
    }

    /// `c · x` for a scalar `c ∈ F_{p^k}`.
    pub fn scale(&self, c: &[u32], x: &[u32]) -> Vec<u32> {
        let n = self.base.dim();
        let f = self.base.field();
        let mut out = vec![0; self.dim()];
        for j in 0..self.degree {
            let block = &x[j * n..(j + 1) * n];
            if block.iter().all(|&v| v == 0) {
                continue;
            }
            let cj = self.scalar_mul(c, &unit(self.degree, j, f));
            for (l, &cl) in cj.iter().enumerate() {
                if cl != 0 {
                    for (a, &b) in block.iter().enumerate() {
                        out[l * n + a] = f.add(out[l * n + a], f.mul(cl, b));
                    }
                }
            }
        }
        out
    }

    /// `S ⊗ F_{p^k}` for a subspace of the base algebra.
    pub fn extend_subspace(&self, s: &Subspace) -> Subspace {
        let n = self.base.dim();
        let f = self.base.field();
        let mut vecs = Vec::with_capacity(s.dim() * self.degree);
        for i in 0..self.degree {
            for b in s.basis() {
                let mut v = vec![0; self.dim()];
                v[i * n..(i + 1) * n].copy_from_slice(b);
                vecs.push(v);
            }
        }
        Subspace::span(f, self.dim(), &vecs)
    }
}

impl<L: LieAlgebra> LieAlgebra for ScalarExtension<L> {
    fn field(&self) -> PrimeField {
        self.base.field()
    }

    fn dim(&self) -> usize {
        self.degree * self.base.dim()
    }

    fn bracket(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        if self.degree == 1 {
            return self.base.bracket(x, y);
        }
        let n = self.base.dim();
        let f = self.base.field();
        let mut out = vec![0; self.dim()];
        for i in 0..self.degree {
            let xi = &x[i * n..(i + 1) * n];
            if xi.iter().all(|&v| v == 0) {
                continue;
            }
            for j in 0..self.degree {
                let yj = &y[j * n..(j + 1) * n];
                if yj.iter().all(|&v| v == 0) {
                    continue;
                }
                let b = self.base.bracket(xi, yj);
                for (l, &w) in self.powers[i + j].iter().enumerate() {
                    if w != 0 {
                        for (a, &bv) in b.iter().enumerate() {
                            out[l * n + a] = f.add(out[l * n + a], f.mul(w, bv));
                        }
                    }
                }
            }
        }
        out
    }

    fn num_root_groups(&self) -> usize {
        self.base.num_root_groups()
    }

    fn num_positive_roots(&self) -> usize {
        self.base.num_positive_roots()
    }

    fn root_group_parameters(&self) -> u32 {
        self.base.field().p().pow(self.degree as u32)
    }

    fn apply_root_group(&self, root: usize, t: u32, x: &[u32]) -> Vec<u32> {
        if self.degree == 1 {
            return self.base.apply_root_group(root, t, x);
        }
        let n = self.base.dim();
        let f = self.base.field();
        let tau = self.decode(t);
        let mut out = x.to_vec();
        let mut tau_k = unit(self.degree, 0, f);
        let mut tau_pows = Vec::new();
        for i in 0..self.degree {
            let xi = &x[i * n..(i + 1) * n];
            if xi.iter().all(|&v| v == 0) {
                continue;
            }
            let terms = self.base.root_group_terms(root, xi).expect("base algebra exposes root-group terms");
            while tau_pows.len() < terms.len() {
                tau_k = self.scalar_mul(&tau_k, &tau);
                tau_pows.push(tau_k.clone());
            }
            for (k, d) in terms.iter().enumerate() {
                let c = self.scalar_mul(&tau_pows[k], &unit(self.degree, i, f));
                for (l, &cl) in c.iter().enumerate() {
                    if cl != 0 {
                        for (a, &dv) in d.iter().enumerate() {
                            out[l * n + a] = f.add(out[l * n + a], f.mul(cl, dv));
                        }
                    }
                }
            }
        }
        out
    }

    fn root_group_terms(&self, _root: usize, _x: &[u32]) -> Option<Vec<Vec<u32>>> {
        None
    }

    fn scalar_degree(&self) -> usize {
        self.degree
    }

    fn scalar_multiples(&self, x: &[u32]) -> Vec<Vec<u32>> {
        (0..self.degree).map(|i| self.times_omega_power(i, x)).collect()
    }

    fn weight_components(&self) -> Vec<Subspace> {
        self.base.weight_components().iter().map(|c| self.extend_subspace(c)).collect()
    }

    fn basis_label(&self, i: usize) -> String {
        let n = self.base.dim();
        match i / n {
            0 => self.base.basis_label(i % n),
            k => format!("w^{k}*{}", self.base.basis_label(i % n)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fflinalg::{closure_under, subspace_contains};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(t: TypeLabel, l: usize, p: u32) -> ChevalleyAlgebra {
        ChevalleyAlgebra::new(t, l, p, Isogeny::SimplyConnected).unwrap()
    }

    #[test]
    fn irreducible_polynomials() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(irreducible_polynomial(f2, 2), vec![1, 1]);
        assert_eq!(irreducible_polynomial(f2, 3), vec![1, 1, 0]);
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(irreducible_polynomial(f3, 2), vec![1, 0]);
    }

    #[test]
    fn extension_field_arithmetic() {
        let ext = ScalarExtension::new(alg(TypeLabel::A, 1, 2), 2);
        let one = vec![1, 0];
        let w = vec![0, 1];
        // ω^2 = ω + 1 and ω^3 = 1 in F_4
        let w2 = ext.scalar_mul(&w, &w);
        assert_eq!(w2, vec![1, 1]);
        assert_eq!(ext.scalar_mul(&w2, &w), one);
    }

    #[test]
    fn extension_is_lie_algebra_with_automorphisms() {
        for (t, l, p, k) in [(TypeLabel::A, 2, 2, 2), (TypeLabel::B, 2, 3, 2), (TypeLabel::G, 2, 2, 3)] {
            let ext = ScalarExtension::new(alg(t, l, p), k);
            assert_eq!(jacobi_violation_dense(&ext), None, "{t}{l}");
            let f = ext.field();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..20 {
                let x = f.random_vector(&mut rng, ext.dim());
                let y = f.random_vector(&mut rng, ext.dim());
                let r = rng.gen_range(0..ext.num_root_groups());
                let tt = rng.gen_range(0..ext.root_group_parameters());
                let lhs = ext.bracket(&ext.apply_root_group(r, tt, &x), &ext.apply_root_group(r, tt, &y));
                let rhs = ext.apply_root_group(r, tt, &ext.bracket(&x, &y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn extension_agrees_on_prime_field_parameters() {
        let base = alg(TypeLabel::C, 2, 5);
        let ext = ScalarExtension::new(base.clone(), 2);
        let f = base.field();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = f.random_vector(&mut rng, base.dim());
            let r = rng.gen_range(0..base.num_root_groups());
            let tt = f.random(&mut rng);
            assert_eq!(ext.apply_root_group(r, tt, &ext.embed(&x)), ext.embed(&base.apply_root_group(r, tt, &x)));
        }
    }

    #[test]
    fn sl2_relations() {
        let a = alg(TypeLabel::A, 1, 5);
        // basis: h, e, f
        let (h, e, fv) = (vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]);
        assert_eq!(a.bracket(&e, &fv), h);
        assert_eq!(a.bracket(&h, &e), vec![0, 2, 0]);
        assert_eq!(a.bracket(&e, &e), vec![0, 0, 0]);
        // exp(ad e) f = f + h - e
        assert_eq!(a.apply_root_group(0, 1, &fv), vec![1, 4, 1]);
        assert_eq!(a.apply_root_group(0, 0, &fv), fv);
        assert_eq!(a.apply_root_group(0, 3, &e), e);
    }

    #[test]
    fn a2_bracket_of_simple_roots() {
        let a = alg(TypeLabel::A, 2, 7);
        let x = a.root_vector(0);
        let y = a.root_vector(1);
        let z = a.bracket(&x, &y);
        let s = a.root_vector_index(2);
        assert!(z[s] == 1 || z[s] == 6);
        assert_eq!(z.iter().filter(|&&v| v != 0).count(), 1);
    }

    #[test]
    fn jacobi_small_types() {
        for (t, l) in [
            (TypeLabel::A, 3),
            (TypeLabel::B, 3),
            (TypeLabel::C, 3),
            (TypeLabel::D, 4),
            (TypeLabel::G, 2),
            (TypeLabel::F, 4),
        ] {
            for p in [2, 3, 5] {
                for iso in [Isogeny::SimplyConnected, Isogeny::Adjoint] {
                    let a = ChevalleyAlgebra::new(t, l, p, iso).unwrap();
                    assert_eq!(a.jacobi_violation(), None, "{t}{l} p={p} {iso}");
                }
            }
        }
        let a = alg(TypeLabel::G, 2, 7);
        assert_eq!(jacobi_violation_dense(&a), None);
    }

    #[test]
    fn intermediate_isogenies() {
        let a = ChevalleyAlgebra::new(TypeLabel::A, 3, 2, Isogeny::SlQuotient { m: 2 }).unwrap();
        assert_eq!(a.jacobi_violation(), None);
        assert!(ChevalleyAlgebra::new(TypeLabel::A, 3, 2, Isogeny::SlQuotient { m: 3 }).is_err());
        for iso in [Isogeny::SpecialOrthogonal, Isogeny::HalfSpin] {
            let a = ChevalleyAlgebra::new(TypeLabel::D, 4, 2, iso).unwrap();
            assert_eq!(a.jacobi_violation(), None);
        }
        assert!(ChevalleyAlgebra::new(TypeLabel::D, 5, 2, Isogeny::HalfSpin).is_err());
        assert!(ChevalleyAlgebra::new(TypeLabel::B, 3, 5, Isogeny::SpecialOrthogonal).is_err());
    }

    #[test]
    fn derived_and_center_sl_n() {
        // p ∤ n: perfect and centerless.
        let a = alg(TypeLabel::A, 2, 5);
        assert!(derived_subalgebra(&a).is_full());
        assert!(center(&a).is_zero());
        // p | n: the scalar line is central.
        let a = alg(TypeLabel::A, 2, 3);
        assert_eq!(center(&a).dim(), 1);
        // PGL_2 at p = 2: derived subalgebra is proper.
        let a = ChevalleyAlgebra::new(TypeLabel::A, 1, 2, Isogeny::Adjoint).unwrap();
        assert_eq!(derived_subalgebra(&a).dim(), 2);
    }

    #[test]
    fn derived_is_ideal() {
        let a = ChevalleyAlgebra::new(TypeLabel::A, 3, 2, Isogeny::Adjoint).unwrap();
        let d = derived_subalgebra(&a);
        let n = a.dim();
        for i in 0..n {
            for v in d.basis() {
                assert!(d.contains_vector(&a.bracket(&unit(n, i, a.field()), v)));
            }
        }
    }

    #[test]
    fn strongly_regular_examples() {
        let a = alg(TypeLabel::A, 2, 101);
        let z = vec![0; a.dim()];
        assert!(!a.is_strongly_regular(&z).unwrap());
        // diag(1, 10, -11) = 1·h1 + 11·h2
        let mut t = z.clone();
        t[0] = 1;
        t[1] = 11;
        assert!(a.is_strongly_regular(&t).unwrap());
        let mut bad = t.clone();
        bad[3] = 1;
        assert_eq!(a.is_strongly_regular(&bad), Err(LieError::NotInCartan));
        for iso in [Isogeny::SimplyConnected, Isogeny::Adjoint] {
            let s = ChevalleyAlgebra::new(TypeLabel::A, 1, 2, iso).unwrap();
            assert!(!s.is_strongly_regular(&[1, 0, 0]).unwrap());
        }
    }

    #[test]
    fn quasi_regular_examples() {
        let a = alg(TypeLabel::A, 2, 5);
        let n = a.dim();
        assert!(is_quasi_regular(&a, &Subspace::full(a.field(), n)).unwrap());
        let mut v = a.root_vector(0);
        v[0] = 1;
        assert!(!is_quasi_regular(&a, &Subspace::span(a.field(), n, &[v])).unwrap());
    }

    #[test]
    fn lie_closure_matches_generic_closure() {
        let a = alg(TypeLabel::G, 2, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let x = a.root_vector(0);
            let (y, _) = random_conjugate(&a, &x, 6, &mut rng);
            let s1 = lie_closure(&a, &[x.clone(), y.clone()], None);
            let s2 = closure_under(a.field(), a.dim(), &[x, y], |u, v| a.bracket(u, v));
            assert_eq!(s1, s2);
        }
    }

    #[test]
    fn regular_nilpotent_pair_generates_sl3() {
        let a = alg(TypeLabel::A, 2, 101);
        let x: Vec<u32> = {
            let mut v = a.root_vector(0);
            v[a.root_vector_index(1)] = 1;
            v
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (y, _) = random_conjugate(&a, &x, 20, &mut rng);
        assert!(generated_subalgebra(&a, &[x, y]).is_full());
    }

    #[test]
    fn serde_word_roundtrip() {
        let w = ConjugationWord { steps: vec![WordStep { root: 3, t: 4 }] };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<ConjugationWord>(&s).unwrap(), w);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn root_groups_are_automorphisms(seed in any::<u64>(), which in 0usize..3, p in prop::sample::select(vec![2u32, 3, 5, 7])) {
            let (t, l) = [(TypeLabel::B, 2), (TypeLabel::G, 2), (TypeLabel::A, 3)][which];
            let a = ChevalleyAlgebra::new(t, l, p, Isogeny::SimplyConnected).unwrap();
            let f = a.field();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rng.gen_range(0..a.num_root_groups());
            let s = f.random(&mut rng);
            let x = f.random_vector(&mut rng, a.dim());
            let y = f.random_vector(&mut rng, a.dim());
            let gx = a.apply_root_group(r, s, &x);
            let gy = a.apply_root_group(r, s, &y);
            prop_assert_eq!(a.bracket(&gx, &gy), a.apply_root_group(r, s, &a.bracket(&x, &y)));
            prop_assert_eq!(a.apply_root_group(r, f.neg(s), &gx), x);
        }

        #[test]
        fn conjugation_preserves_nilpotency_degree(seed in any::<u64>()) {
            let a = alg(TypeLabel::C, 2, 5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = a.root_vector(0);
            let (y, w) = random_conjugate(&a, &x, 8, &mut rng);
            prop_assert_eq!(apply_word(&a, &w, &x), y.clone());
            let deg = |v: &[u32]| {
                let m = a.ad(v);
                (1..8).find(|&k| m.pow(k).is_zero()).unwrap()
            };
            prop_assert_eq!(deg(&x), deg(&y));
        }
    }

    #[test]
    fn weight_components_cover_algebra() {
        for p in [2, 5] {
            let a = alg(TypeLabel::B, 2, p);
            let total: usize = a.weight_components().iter().map(|c| c.dim()).sum();
            assert_eq!(total, a.dim());
        }
        let a = alg(TypeLabel::A, 1, 5);
        let s = Subspace::span(a.field(), 3, &[vec![0, 1, 0]]);
        assert!(subspace_contains(&generated_subalgebra(&a, &[vec![0, 1, 0]]), &s).unwrap());
    }
}
