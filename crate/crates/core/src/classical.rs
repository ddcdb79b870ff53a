//! Matrix realizations of the classical Lie algebras, class representatives
//! from partitions and eigenvalue data, orbit dimensions, the semisimple
//! deformation construction and partition specialization rules.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fflinalg::{kernel, LinalgError, PrimeField, PrimeFieldMatrix, Subspace};
use crate::liealg::LieAlgebra;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("cannot parse partition {0:?}")]
    BadPartition(String),
    #[error("partition {0} is not valid for {1}")]
    ParityInvalid(Partition, Family),
    #[error("partition {0} does not have weight {1}")]
    WrongSize(Partition, usize),
    #[error("a class refinement only exists for square-zero classes of so_2n in characteristic 2")]
    RefinementNotApplicable,
    #[error("{0} of natural dimension {1} is not available in characteristic {2}")]
    InvalidKind(AlgebraKind, usize, u32),
    #[error("no orbit-dimension formula for {label} in {kind}_{n} at p = {p}")]
    NoFormula { label: String, kind: AlgebraKind, n: usize, p: u32 },
    #[error("matrix does not lie in the algebra")]
    NotInAlgebra,
    #[error("eigenvalue multiplicities {0} are incompatible with the form")]
    PairingMismatch(String),
    #[error("dominance needs equal weights, got {0} and {1}")]
    WeightMismatch(usize, usize),
    #[error("rule {0:?} does not apply to {1}")]
    RuleNotApplicable(SpecRule, Partition),
    #[error("matrix is not diagonal")]
    NotDiagonal,
    #[error("class label {0} is not supported here")]
    UnsupportedLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Gl,
    Sl,
    Sp,
    So,
    Go,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Gl => "gl",
            AlgebraKind::Sl => "sl",
            AlgebraKind::Sp => "sp",
            AlgebraKind::So => "so",
            AlgebraKind::Go => "go",
        })
    }
}

/// Parity context for nilpotent partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `gl_n` / `sl_n`: every partition.
    A,
    /// `sp_2n`, odd characteristic: odd parts have even multiplicity.
    C,
    /// `so_n`, odd characteristic: even parts have even multiplicity.
    BD,
    /// `so_2n` / `go_2n` in characteristic 2: square-zero classes only.
    D2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "type A",
            Family::C => "type C (p odd)",
            Family::BD => "types B/D (p odd)",
            Family::D2 => "type D (p = 2)",
        })
    }
}

impl Family {
    pub fn of(kind: AlgebraKind, p: u32) -> Family {
        match kind {
            AlgebraKind::Gl | AlgebraKind::Sl => Family::A,
            AlgebraKind::Sp => Family::C,
            AlgebraKind::So | AlgebraKind::Go if p == 2 => Family::D2,
            AlgebraKind::So | AlgebraKind::Go => Family::BD,
        }
    }
}

/// A partition with parts in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self, ClassicalError> {
        if parts.contains(&0) {
            return Err(ClassicalError::BadPartition(format!("{parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiplicity(&self, m: usize) -> usize {
        self.0.iter().filter(|&&x| x == m).count()
    }

    pub fn conjugate(&self) -> Partition {
        let max = self.0.first().copied().unwrap_or(0);
        Partition((1..=max).map(|j| self.0.iter().filter(|&&x| x >= j).count()).collect())
    }

    /// Rank of a nilpotent matrix with this Jordan type.
    pub fn rank(&self) -> usize {
        self.weight() - self.len()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for k in (1..=max.min(n)).rev() {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_valid_for(&self, family: Family) -> bool {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in &self.0 {
            *counts.entry(x).or_default() += 1;
        }
        match family {
            Family::A => true,
            Family::C => counts.iter().all(|(&m, &k)| m % 2 == 0 || k % 2 == 0),
            Family::BD => counts.iter().all(|(&m, &k)| m % 2 == 1 || k % 2 == 0),
            Family::D2 => self.0.iter().all(|&x| x <= 2) && self.multiplicity(2).is_multiple_of(2),
        }
    }

    /// Valid nilpotent partitions of `n` for a family (for `D2`, only the
    /// square-zero ones exist by definition).
    pub fn valid(n: usize, family: Family) -> Vec<Partition> {
        Partition::all(n).into_iter().filter(|p| p.is_valid_for(family)).collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let v = self.0[i];
            let k = self.0[i..].iter().take_while(|&&x| x == v).count();
            if !first {
                f.write_str(",")?;
            }
            first = false;
            if k > 1 {
                write!(f, "{v}^{k}")?;
            } else {
                write!(f, "{v}")?;
            }
            i += k;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = ClassicalError;
    fn from_str(s: &str) -> Result<Self, ClassicalError> {
        let bad = || ClassicalError::BadPartition(s.to_string());
        let mut parts = Vec::new();
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        for tok in trimmed.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(bad());
            }
            let (v, k) = match tok.split_once('^') {
                Some((v, k)) => (v.trim(), k.trim().parse::<usize>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let v: usize = v.parse().map_err(|_| bad())?;
            if v == 0 {
                return Err(bad());
            }
            parts.extend(std::iter::repeat_n(v, k));
        }
        Partition::new(parts)
    }
}

impl TryFrom<String> for Partition {
    type Error = ClassicalError;
    fn try_from(s: String) -> Result<Self, ClassicalError> {
        s.parse()
    }
}

impl From<Partition> for String {
    fn from(p: Partition) -> String {
        p.to_string()
    }
}

/// Dominance order: every prefix sum of `a` is at most that of `b`.
pub fn dominance_leq(a: &Partition, b: &Partition) -> Result<bool, ClassicalError> {
    if a.weight() != b.weight() {
        return Err(ClassicalError::WeightMismatch(a.weight(), b.weight()));
    }
    let (mut sa, mut sb) = (0, 0);
    for i in 0..a.len().max(b.len()) {
        sa += a.0.get(i).copied().unwrap_or(0);
        sb += b.0.get(i).copied().unwrap_or(0);
        if sa > sb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The two square-zero classes of `so_2n` in characteristic 2 with the same
/// Jordan type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refinement {
    /// Image of `x` is not totally singular.
    Larger,
    /// Image of `x` is totally singular.
    Smaller,
}

impl FromStr for Refinement {
    type Err = ClassicalError;
    fn from_str(s: &str) -> Result<Self, ClassicalError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "larger" => Ok(Refinement::Larger),
            "smaller" => Ok(Refinement::Smaller),
            _ => Err(ClassicalError::RefinementNotApplicable),
        }
    }
}

/// A conjugacy-class descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassLabel {
    Nilpotent {
        partition: Partition,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        refinement: Option<Refinement>,
    },
    /// Semisimple with eigenvalues in `F_p`: `(eigenvalue, multiplicity)` on
    /// the natural module.
    Toral { eigen: Vec<(u32, usize)> },
    /// The idempotent `diag(I_n, 0)` of `go_2n \ so_2n` (characteristic 2).
    GoIdempotent,
    /// A long root element.
    RootElement,
}

impl ClassLabel {
    pub fn nilpotent(partition: Partition) -> Self {
        ClassLabel::Nilpotent { partition, refinement: None }
    }

    pub fn toral(eigen: &[(u32, usize)]) -> Self {
        let mut e: Vec<(u32, usize)> = eigen.iter().copied().filter(|&(_, m)| m > 0).collect();
        e.sort_unstable();
        ClassLabel::Toral { eigen: e }
    }

    pub fn is_nilpotent(&self) -> bool {
        matches!(self, ClassLabel::Nilpotent { .. } | ClassLabel::RootElement)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Nilpotent { partition, refinement } => {
                write!(f, "nilpotent({partition})")?;
                if let Some(r) = refinement {
                    write!(f, "[{}]", if *r == Refinement::Larger { "larger" } else { "smaller" })?;
                }
                Ok(())
            }
            ClassLabel::Toral { eigen } => {
                let s: Vec<String> = eigen.iter().map(|(v, m)| format!("{v}:{m}")).collect();
                write!(f, "toral({})", s.join(","))
            }
            ClassLabel::GoIdempotent => f.write_str("go_idempotent"),
            ClassLabel::RootElement => f.write_str("root_element"),
        }
    }
}

/// Accepts the display forms plus `root`, `toral:v^m,…` and bare partitions
/// (optionally followed by `[larger]` or `[smaller]`).
impl FromStr for ClassLabel {
    type Err = ClassicalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ClassicalError::UnsupportedLabel(s.to_string());
        match s {
            "root" | "root_element" => return Ok(ClassLabel::RootElement),
            "go_idempotent" => return Ok(ClassLabel::GoIdempotent),
            _ => {}
        }
        let toral = s.strip_prefix("toral:").or_else(|| s.strip_prefix("toral(").and_then(|r| r.strip_suffix(')')));
        if let Some(body) = toral {
            let eigen = body
                .split(',')
                .map(|e| {
                    let (v, m) = e.trim().split_once([':', '^']).ok_or_else(bad)?;
                    Ok((v.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
                })
                .collect::<Result<Vec<(u32, usize)>, ClassicalError>>()?;
            return Ok(ClassLabel::toral(&eigen));
        }
        let (body, refinement) = match s.strip_suffix(']').and_then(|r| r.rsplit_once('[')) {
            Some((b, r)) => (b, Some(r.parse::<Refinement>()?)),
            None => (s, None),
        };
        let body = body.strip_prefix("nilpotent(").and_then(|r| r.strip_suffix(')')).unwrap_or(body);
        Ok(ClassLabel::Nilpotent { partition: body.parse()?, refinement })
    }
}

/// Number of parts for a nilpotent label, largest eigenvalue multiplicity for
/// a toral one: the dimension of the largest eigenspace.
pub fn alpha_of(label: &ClassLabel, natural_dim: usize) -> Result<usize, ClassicalError> {
    match label {
        ClassLabel::Nilpotent { partition, .. } => Ok(partition.len()),
        ClassLabel::Toral { eigen } => Ok(eigen.iter().map(|&(_, m)| m).max().unwrap_or(0)),
        ClassLabel::GoIdempotent => Ok(natural_dim / 2),
        ClassLabel::RootElement => Err(ClassicalError::UnsupportedLabel(label.to_string())),
    }
}

/// Largest eigenspace dimension of a square matrix whose eigenvalues lie in `F_p`.
pub fn largest_eigenspace(x: &PrimeFieldMatrix) -> usize {
    let f = x.field();
    let n = x.rows();
    (0..f.p().min(4096))
        .map(|a| {
            let m = x.sub(&PrimeFieldMatrix::identity(f, n).scale(a));
            n - m.rank()
        })
        .max()
        .unwrap_or(0)
}

/// Jordan type of a nilpotent matrix (from ranks of powers).
pub fn jordan_type(x: &PrimeFieldMatrix) -> Option<Partition> {
    let n = x.rows();
    let mut ranks = vec![n];
    let mut pw = PrimeFieldMatrix::identity(x.field(), n);
    for _ in 0..n {
        pw = pw.mul(x);
        ranks.push(pw.rank());
        if *ranks.last().unwrap() == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return None;
    }
    // number of blocks of size ≥ j is rank(x^{j-1}) - rank(x^j)
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).filter(|&c| c > 0).collect();
    Some(Partition(conj).conjugate())
}

#[derive(Clone, Debug)]
struct RootGroup {
    /// `X^a / a!` for `a = 1, 2, …` while nonzero.
    powers: Vec<PrimeFieldMatrix>,
}

/// A classical Lie algebra realized inside `gl_N`, with a coordinate basis.
#[derive(Clone, Debug)]
pub struct MatrixAlgebra {
    kind: AlgebraKind,
    natural_dim: usize,
    field: PrimeField,
    form: Option<PrimeFieldMatrix>,
    /// The algebra as a subspace of flattened `N × N` matrices.
    space: Subspace,
    basis_mats: Vec<PrimeFieldMatrix>,
    index_weights: Vec<Vec<i64>>,
    root_groups: Vec<RootGroup>,
    components: Vec<Subspace>,
}

impl MatrixAlgebra {
    /// `kind` of natural dimension `natural_dim` over `F_p`.
    pub fn realize(kind: AlgebraKind, natural_dim: usize, p: u32) -> Result<Self, ClassicalError> {
        let field = PrimeField::new(p as u64)?;
        let big_n = natural_dim;
        let invalid = || ClassicalError::InvalidKind(kind, natural_dim, p);
        if big_n == 0 {
            return Err(invalid());
        }
        let n = big_n / 2;
        let nn = big_n * big_n;
        let (form, mut rows, extra): (Option<PrimeFieldMatrix>, Vec<Vec<u32>>, Vec<Vec<u32>>) = match kind {
            AlgebraKind::Gl => (None, vec![], vec![]),
            AlgebraKind::Sl => {
                let mut r = vec![0u32; nn];
                for i in 0..big_n {
                    r[i * big_n + i] = 1;
                }
                (None, vec![r], vec![])
            }
            AlgebraKind::Sp => {
                if !big_n.is_multiple_of(2) {
                    return Err(invalid());
                }
                let j = symplectic_form(field, n);
                let rows = skew_rows(&j, false);
                (Some(j), rows, vec![])
            }
            AlgebraKind::So => {
                if p == 2 && !big_n.is_multiple_of(2) {
                    return Err(invalid());
                }
                let b = orthogonal_form(field, big_n);
                let rows = skew_rows(&b, p == 2);
                (Some(b), rows, vec![])
            }
            AlgebraKind::Go => {
                if p != 2 || !big_n.is_multiple_of(2) {
                    return Err(invalid());
                }
                let b = orthogonal_form(field, big_n);
                let rows = skew_rows(&b, true);
                let mut d = vec![0u32; nn];
                for i in 0..n {
                    d[i * big_n + i] = 1;
                }
                (Some(b), rows, vec![d])
            }
        };
        let space = if rows.is_empty() {
            Subspace::full(field, nn)
        } else {
            rows.retain(|r| r.iter().any(|&v| v != 0));
            let m = PrimeFieldMatrix::from_rows(field, nn, &rows);
            let mut s = kernel(&m);
            for v in &extra {
                s.insert(v);
            }
            s
        };
        let basis_mats =
            space.basis().iter().map(|v| PrimeFieldMatrix::from_flat(field, big_n, big_n, v.clone())).collect();

        let index_weights: Vec<Vec<i64>> = match kind {
            AlgebraKind::Gl | AlgebraKind::Sl => (0..big_n)
                .map(|i| {
                    let mut w = vec![0; big_n];
                    w[i] = 1;
                    w
                })
                .collect(),
            _ => (0..big_n)
                .map(|i| {
                    let mut w = vec![0; n];
                    if i < n {
                        w[i] = 1;
                    } else if i < 2 * n {
                        w[i - n] = -1;
                    }
                    w
                })
                .collect(),
        };

        let mut alg = Self {
            kind,
            natural_dim,
            field,
            form,
            space,
            basis_mats,
            index_weights,
            root_groups: Vec::new(),
            components: Vec::new(),
        };
        alg.build_weight_data()?;
        Ok(alg)
    }

    fn build_weight_data(&mut self) -> Result<(), ClassicalError> {
        let big_n = self.natural_dim;
        let f = self.field;
        let wt = |i: usize, j: usize| -> Vec<i64> {
            self.index_weights[i].iter().zip(&self.index_weights[j]).map(|(a, b)| a - b).collect()
        };
        let mut by_weight: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
        for i in 0..big_n {
            for j in 0..big_n {
                by_weight.entry(wt(i, j)).or_default().push(i * big_n + j);
            }
        }
        let nn = big_n * big_n;
        let comp_of = |cells: &[usize]| -> Result<Subspace, ClassicalError> {
            let vecs: Vec<Vec<u32>> = cells
                .iter()
                .map(|&c| {
                    let mut v = vec![0u32; nn];
                    v[c] = 1;
                    v
                })
                .collect();
            let s = Subspace::span(f, nn, &vecs);
            Ok(self.space.intersect(&s)?)
        };
        let zero = vec![0i64; self.index_weights[0].len()];
        let mut components = Vec::new();
        let cartan = comp_of(&by_weight[&zero])?;
        components.push(self.flat_to_coords_space(&cartan));

        // Root groups in a fixed order: positive weights (first nonzero entry
        // positive) sorted, then their negatives in the same order.
        let mut pos_weights: Vec<Vec<i64>> = Vec::new();
        for (w, cells) in &by_weight {
            if *w == zero {
                continue;
            }
            let first = w.iter().find(|&&c| c != 0).copied().unwrap_or(0);
            let c = comp_of(cells)?;
            if c.dim() == 1 && first > 0 {
                let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                if comp_of(&by_weight[&neg])?.dim() == 1 {
                    pos_weights.push(w.clone());
                }
            }
        }
        let mut root_groups = Vec::new();
        for sign in [1i64, -1] {
            for w in &pos_weights {
                let w: Vec<i64> = w.iter().map(|x| sign * x).collect();
                let c = comp_of(&by_weight[&w])?;
                let x = PrimeFieldMatrix::from_flat(f, big_n, big_n, c.basis()[0].clone());
                let mut powers = Vec::new();
                let mut cur = x.clone();
                let mut a = 1u32;
                while !cur.is_zero() {
                    powers.push(cur.clone());
                    a += 1;
                    let inv = f.inv(a % f.p()).ok_or(ClassicalError::InvalidKind(self.kind, big_n, f.p()));
                    let next = cur.mul(&x);
                    if next.is_zero() {
                        break;
                    }
                    cur = next.scale(inv?);
                }
                root_groups.push(RootGroup { powers });
            }
        }
        // Quasi-regularity components: each nonzero weight, merged with its
        // negative in characteristic 2.
        let mut done: Vec<Vec<i64>> = Vec::new();
        for (w, cells) in &by_weight {
            if *w == zero || done.contains(w) {
                continue;
            }
            let mut cells = cells.clone();
            done.push(w.clone());
            if f.p() == 2 {
                let neg: Vec<i64> = w.iter().map(|x| -x).collect();
                if let Some(nc) = by_weight.get(&neg) {
                    cells.extend(nc);
                    done.push(neg);
                }
            }
            let c = comp_of(&cells)?;
            if c.dim() > 0 {
                components.push(self.flat_to_coords_space(&c));
            }
        }
        self.root_groups = root_groups;
        self.components = components;
        Ok(())
    }

    fn flat_to_coords_space(&self, s: &Subspace) -> Subspace {
        let vecs: Vec<Vec<u32>> = s.basis().iter().map(|v| self.coords_unchecked_flat(v)).collect();
        Subspace::span(self.field, self.dim(), &vecs)
    }

    fn coords_unchecked_flat(&self, v: &[u32]) -> Vec<u32> {
        self.space.pivots().iter().map(|&c| v[c]).collect()
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }
    pub fn natural_dim(&self) -> usize {
        self.natural_dim
    }
    /// Gram matrix of the form (symplectic or symmetric), if any.
    pub fn form(&self) -> Option<&PrimeFieldMatrix> {
        self.form.as_ref()
    }
    pub fn family(&self) -> Family {
        Family::of(self.kind, self.field.p())
    }
    pub fn space(&self) -> &Subspace {
        &self.space
    }
    pub fn basis_matrices(&self) -> &[PrimeFieldMatrix] {
        &self.basis_mats
    }

    pub fn to_matrix(&self, coords: &[u32]) -> PrimeFieldMatrix {
        let f = self.field;
        let n = self.natural_dim;
        let mut m = PrimeFieldMatrix::zeros(f, n, n);
        let mut data = m.flatten();
        for (c, b) in coords.iter().zip(&self.basis_mats) {
            if *c == 0 {
                continue;
            }
            for (d, &v) in data.iter_mut().zip(b.data()) {
                if v != 0 {
                    *d = f.add(*d, f.mul(*c, v));
                }
            }
        }
        m = PrimeFieldMatrix::from_flat(f, n, n, data);
        m
    }

    /// Coordinates of a matrix known to lie in the algebra.
    pub fn coords_unchecked(&self, m: &PrimeFieldMatrix) -> Vec<u32> {
        self.coords_unchecked_flat(m.data())
    }

    pub fn coords(&self, m: &PrimeFieldMatrix) -> Result<Vec<u32>, ClassicalError> {
        self.space.coordinates(m.data()).ok_or(ClassicalError::NotInAlgebra)
    }

    pub fn contains(&self, m: &PrimeFieldMatrix) -> bool {
        m.rows() == self.natural_dim && m.cols() == self.natural_dim && self.space.contains_vector(m.data())
    }

    /// `x^p` in the natural realization.
    pub fn p_power(&self, x: &PrimeFieldMatrix) -> PrimeFieldMatrix {
        x.pow(self.field.p() as usize)
    }

    /// Matrix of the long root element used as the `RootElement` representative.
    fn long_root_matrix(&self) -> PrimeFieldMatrix {
        let big_n = self.natural_dim;
        let n = big_n / 2;
        let f = self.field;
        let mut x = PrimeFieldMatrix::zeros(f, big_n, big_n);
        match self.kind {
            AlgebraKind::Gl | AlgebraKind::Sl => x.set(0, big_n - 1, 1),
            AlgebraKind::Sp => x.set(0, n, 1),
            AlgebraKind::So | AlgebraKind::Go => {
                x.set(0, n + 1, 1);
                x.set_i64(1, n, -1);
            }
        }
        x
    }
}

fn symplectic_form(f: PrimeField, n: usize) -> PrimeFieldMatrix {
    let mut j = PrimeFieldMatrix::zeros(f, 2 * n, 2 * n);
    for i in 0..n {
        j.set(i, n + i, 1);
        j.set_i64(n + i, i, -1);
    }
    j
}

/// Split symmetric form: hyperbolic pairs `(e_i, f_i) = (i, n+i)`, plus a
/// middle vector of length 2 at the last index for odd dimension.
fn orthogonal_form(f: PrimeField, big_n: usize) -> PrimeFieldMatrix {
    let n = big_n / 2;
    let mut b = PrimeFieldMatrix::zeros(f, big_n, big_n);
    for i in 0..n {
        b.set(i, n + i, 1);
        b.set(n + i, i, 1);
    }
    if big_n % 2 == 1 {
        b.set(2 * n, 2 * n, 2);
    }
    b
}

/// Linear conditions on `X` for `X^T G + G X = 0`; with `alternating`, also
/// a zero diagonal of `G X` (characteristic 2, quadratic form).
fn skew_rows(g: &PrimeFieldMatrix, alternating: bool) -> Vec<Vec<u32>> {
    let f = g.field();
    let n = g.rows();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = vec![0u32; n * n];
            for k in 0..n {
                // (X^T G)_{ij} = Σ_k X_ki G_kj, (G X)_{ij} = Σ_k G_ik X_kj
                row[k * n + i] = f.add(row[k * n + i], g.get(k, j));
                row[k * n + j] = f.add(row[k * n + j], g.get(i, k));
            }
            rows.push(row);
        }
    }
    if alternating {
        for i in 0..n {
            let mut row = vec![0u32; n * n];
            for k in 0..n {
                row[k * n + i] = g.get(i, k);
            }
            rows.push(row);
        }
    }
    rows
}

impl LieAlgebra for MatrixAlgebra {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn bracket(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let a = self.to_matrix(x);
        let b = self.to_matrix(y);
        self.coords_unchecked(&a.commutator(&b))
    }

    fn ad(&self, x: &[u32]) -> PrimeFieldMatrix {
        let a = self.to_matrix(x);
        let cols: Vec<Vec<u32>> = self.basis_mats.iter().map(|b| self.coords_unchecked(&a.commutator(b))).collect();
        PrimeFieldMatrix::from_columns(self.field, self.dim(), &cols)
    }

    fn num_root_groups(&self) -> usize {
        self.root_groups.len()
    }

    fn num_positive_roots(&self) -> usize {
        self.root_groups.len() / 2
    }

    fn apply_root_group(&self, root: usize, t: u32, x: &[u32]) -> Vec<u32> {
        let f = self.field;
        let n = self.natural_dim;
        let mut g = PrimeFieldMatrix::identity(f, n);
        let mut ginv = PrimeFieldMatrix::identity(f, n);
        let mut tk = 1u32;
        let mut sk = 1u32;
        for pw in &self.root_groups[root].powers {
            tk = f.mul(tk, t);
            sk = f.mul(sk, f.neg(t));
            g = g.add(&pw.scale(tk));
            ginv = ginv.add(&pw.scale(sk));
        }
        let y = g.mul(&self.to_matrix(x)).mul(&ginv);
        debug_assert!(self.contains(&y));
        self.coords_unchecked(&y)
    }

    fn root_group_terms(&self, root: usize, x: &[u32]) -> Option<Vec<Vec<u32>>> {
        let f = self.field;
        let m = self.to_matrix(x);
        // g = Σ t^a P_a, g^{-1} = Σ (-t)^b P_b with P_0 = I.
        let mut pw = vec![PrimeFieldMatrix::identity(f, self.natural_dim)];
        pw.extend(self.root_groups[root].powers.iter().cloned());
        let top = 2 * (pw.len() - 1);
        let mut terms = Vec::with_capacity(top);
        for k in 1..=top {
            let mut acc = PrimeFieldMatrix::zeros(f, self.natural_dim, self.natural_dim);
            for a in 0..pw.len() {
                let Some(b) = k.checked_sub(a) else { break };
                if b >= pw.len() {
                    continue;
                }
                let mut term = pw[a].mul(&m).mul(&pw[b]);
                if b % 2 == 1 {
                    term = term.scale(f.neg(1));
                }
                acc = acc.add(&term);
            }
            terms.push(self.coords_unchecked(&acc));
        }
        Some(terms)
    }

    fn weight_components(&self) -> Vec<Subspace> {
        self.components.clone()
    }

    fn basis_label(&self, i: usize) -> String {
        let c = self.space.pivots()[i];
        format!("E{},{}", c / self.natural_dim + 1, c % self.natural_dim + 1)
    }
}

/// `dim { m ∈ alg : [m, x] = 0 }` by a linear solve.
pub fn centralizer_dim_lie(alg: &MatrixAlgebra, x: &PrimeFieldMatrix) -> usize {
    let f = alg.field();
    let nn = alg.natural_dim() * alg.natural_dim();
    // Images of the basis under m ↦ [m, x], as flattened vectors.
    let cols: Vec<Vec<u32>> = alg.basis_matrices().iter().map(|b| b.commutator(x).flatten()).collect();
    let m = PrimeFieldMatrix::from_columns(f, nn, &cols);
    alg.dim() - m.rank()
}

/// Jordan-block matrix of size `sum parts` with blocks in order, acting by
/// `e_{i+1} ↦ e_i` inside each block.
pub fn jordan_matrix(f: PrimeField, parts: &[usize]) -> PrimeFieldMatrix {
    let n: usize = parts.iter().sum();
    let mut x = PrimeFieldMatrix::zeros(f, n, n);
    let mut s = 0;
    for &m in parts {
        for k in 0..m.saturating_sub(1) {
            x.set(s + k, s + k + 1, 1);
        }
        s += m;
    }
    x
}

/// A representative of a nilpotent class (including the long root element).
pub fn nilpotent_rep(label: &ClassLabel, alg: &MatrixAlgebra) -> Result<PrimeFieldMatrix, ClassicalError> {
    let f = alg.field();
    let big_n = alg.natural_dim();
    let family = alg.family();
    let (partition, refinement) = match label {
        ClassLabel::Nilpotent { partition, refinement } => (partition, *refinement),
        ClassLabel::RootElement => return Ok(alg.long_root_matrix()),
        _ => return Err(ClassicalError::UnsupportedLabel(label.to_string())),
    };
    if partition.weight() != big_n {
        return Err(ClassicalError::WrongSize(partition.clone(), big_n));
    }
    if !partition.is_valid_for(family) {
        return Err(ClassicalError::ParityInvalid(partition.clone(), family));
    }
    if refinement.is_some() && family != Family::D2 {
        return Err(ClassicalError::RefinementNotApplicable);
    }
    let x = match family {
        Family::A => jordan_matrix(f, partition.parts()),
        Family::C | Family::BD => form_nilpotent(f, partition, family, big_n),
        Family::D2 => {
            let r = partition.multiplicity(2) / 2;
            d2_square_zero(f, big_n / 2, r, refinement.unwrap_or(Refinement::Larger))
        }
    };
    if !alg.contains(&x) {
        return Err(ClassicalError::NotInAlgebra);
    }
    Ok(x)
}

/// Nilpotent in `sp` or `so` (odd characteristic) with a given Jordan type.
fn form_nilpotent(f: PrimeField, partition: &Partition, family: Family, big_n: usize) -> PrimeFieldMatrix {
    let n = big_n / 2;
    // New basis as columns of P (standard coordinates); X' in the new basis.
    let mut cols: Vec<Vec<u32>> = Vec::new();
    let std = |i: usize| -> Vec<u32> {
        let mut v = vec![0u32; big_n];
        v[i] = 1;
        v
    };
    let mut xp: Vec<(usize, usize, i64)> = Vec::new(); // (target, source, coef) in new basis
    let mut next_pair = 0usize;
    let mut pairs: Vec<usize> = Vec::new(); // parts used in pairs (m,m)
    let mut singles: Vec<usize> = Vec::new();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &m in partition.parts() {
        *counts.entry(m).or_default() += 1;
    }
    for (&m, &k) in counts.iter().rev() {
        for _ in 0..k / 2 {
            pairs.push(m);
        }
        if k % 2 == 1 {
            singles.push(m);
        }
    }
    // Hyperbolic index bookkeeping: each used pair index i gives e = i, f = n + i.
    let push_pair = |cols: &mut Vec<Vec<u32>>, next: &mut usize| -> (usize, usize) {
        let i = *next;
        *next += 1;
        cols.push(std(i));
        cols.push(std(n + i));
        (cols.len() - 2, cols.len() - 1)
    };
    for &m in &pairs {
        let idx: Vec<(usize, usize)> = (0..m).map(|_| push_pair(&mut cols, &mut next_pair)).collect();
        for k in 0..m - 1 {
            // A e_{k+1} = e_k ; -A^T f_k = -f_{k+1}
            xp.push((idx[k].0, idx[k + 1].0, 1));
            xp.push((idx[k + 1].1, idx[k].1, -1));
        }
    }
    match family {
        Family::C => {
            for &m in &singles {
                let k = m / 2;
                let idx: Vec<(usize, usize)> = (0..k).map(|_| push_pair(&mut cols, &mut next_pair)).collect();
                for j in 0..k - 1 {
                    xp.push((idx[j].0, idx[j + 1].0, 1));
                    xp.push((idx[j + 1].1, idx[j].1, -1));
                }
                xp.push((idx[k - 1].0, idx[k - 1].1, 1));
            }
        }
        _ => {
            // Anisotropic vectors: the middle vector (odd N, norm 2) and
            // split pairs u = e + f/2, w = e - f/2 of norms 1 and -1.
            let half = f.inv(2).expect("odd characteristic");
            let mut aniso: Vec<(Vec<u32>, i64)> = Vec::new();
            let need = singles.len();
            if big_n % 2 == 1 {
                aniso.push((std(2 * n), 2));
            }
            while aniso.len() < need {
                let i = next_pair;
                next_pair += 1;
                let mut u = std(i);
                u[n + i] = half;
                let mut w = std(i);
                w[n + i] = f.neg(half);
                aniso.push((u, 1));
                aniso.push((w, -1));
            }
            for (s, &m) in singles.iter().enumerate() {
                let k = (m - 1) / 2;
                let idx: Vec<(usize, usize)> = (0..k).map(|_| push_pair(&mut cols, &mut next_pair)).collect();
                let (z, bzz) = aniso[s].clone();
                cols.push(z);
                let zi = cols.len() - 1;
                for j in 0..k.saturating_sub(1) {
                    xp.push((idx[j].0, idx[j + 1].0, 1));
                    xp.push((idx[j + 1].1, idx[j].1, -1));
                }
                if k > 0 {
                    // X z = e_k, X f_k = -(1/b(z,z)) z
                    xp.push((idx[k - 1].0, zi, 1));
                    let c = f.mul(f.neg(1), f.inv(f.from_i64(bzz)).expect("anisotropic"));
                    xp.push((zi, idx[k - 1].1, f.to_signed(c)));
                }
            }
        }
    }
    // Any remaining basis vectors (unused pairs cannot occur since weights match).
    let mut xprime = PrimeFieldMatrix::zeros(f, big_n, big_n);
    for (t, s, c) in xp {
        xprime.set_i64(t, s, c);
    }
    let p = PrimeFieldMatrix::from_columns(f, big_n, &cols);
    let pinv = p.inverse().expect("adapted basis is a basis");
    p.mul(&xprime).mul(&pinv)
}

/// Square-zero element of `so_2n` in characteristic 2 with rank `2r`.
fn d2_square_zero(f: PrimeField, n: usize, r: usize, refinement: Refinement) -> PrimeFieldMatrix {
    let big_n = 2 * n;
    let mut x = PrimeFieldMatrix::zeros(f, big_n, big_n);
    // x v = Σ_k b(w_k, v) u_k + b(u_k, v) w_k
    let vec_of = |i: usize, larger: bool| -> Vec<u32> {
        let mut v = vec![0u32; big_n];
        v[i] = 1;
        if larger {
            v[n + i] = 1;
        }
        v
    };
    let b = orthogonal_form(f, big_n);
    for k in 0..r {
        let larger = refinement == Refinement::Larger;
        let u = vec_of(2 * k, larger);
        let w = vec_of(2 * k + 1, larger);
        let bu = b.mul_vec(&u);
        let bw = b.mul_vec(&w);
        for i in 0..big_n {
            for j in 0..big_n {
                let add = f.add(f.mul(u[i], bw[j]), f.mul(w[i], bu[j]));
                if add != 0 {
                    x.add_at(i, j, add);
                }
            }
        }
    }
    x
}

/// Orbit dimension of a square-zero class of `so_2n` in characteristic 2 by a
/// parameter count: such `x` is `Σ ω_ij b(w_j, ·) w_i` for its image `W` and a
/// nondegenerate `ω ∈ Λ²W`, so the orbit has dimension
/// `dim(stratum of W) + dim Λ²W`. The stratum is open in the isotropic
/// Grassmannian of `b` (larger class) or is the singular Grassmannian of `q`
/// (smaller class); its dimension is computed as a tangent space.
pub fn d2_square_zero_param_dim(n: usize, r: usize, refinement: Refinement) -> usize {
    let f = PrimeField::new(2).expect("2 is prime");
    let big_n = 2 * n;
    let k = 2 * r;
    let b = orthogonal_form(f, big_n);
    let larger = refinement == Refinement::Larger;
    let w: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut v = vec![0u32; big_n];
            v[i] = 1;
            if larger {
                v[n + i] = 1;
            }
            v
        })
        .collect();
    // Complement of W: coordinate vectors outside the span.
    let mut span = Subspace::span(f, big_n, &w);
    let mut comp = Vec::new();
    for i in 0..big_n {
        let mut e = vec![0u32; big_n];
        e[i] = 1;
        if span.insert(&e).is_some() {
            comp.push(e);
        }
    }
    let c = comp.len();
    let bw: Vec<Vec<u32>> = w.iter().map(|v| b.mul_vec(v)).collect();
    let dot = |a: &[u32], bb: &[u32]| a.iter().zip(bb).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
    // Unknown φ_{a,i}: coefficient of comp[a] in φ(w_i), variable index a * k + i.
    let mut rows = Vec::new();
    for i in 0..k {
        for j in i..k {
            if i == j && larger {
                continue;
            }
            let mut row = vec![0u32; c * k];
            for (a, ca) in comp.iter().enumerate() {
                // b(φ w_i, w_j) + b(w_i, φ w_j); for i == j this is b(w_i, φ w_i).
                row[a * k + i] = f.add(row[a * k + i], dot(ca, &bw[j]));
                if i != j {
                    row[a * k + j] = f.add(row[a * k + j], dot(ca, &bw[i]));
                }
            }
            rows.push(row);
        }
    }
    let rank = if rows.is_empty() { 0 } else { PrimeFieldMatrix::from_rows(f, c * k, &rows).rank() };
    c * k - rank + r * (2 * r - 1)
}

/// A representative of a toral class.
pub fn toral_rep(label: &ClassLabel, alg: &MatrixAlgebra) -> Result<PrimeFieldMatrix, ClassicalError> {
    let f = alg.field();
    let big_n = alg.natural_dim();
    let n = big_n / 2;
    let p = f.p();
    let x = match label {
        ClassLabel::GoIdempotent => {
            if alg.kind() != AlgebraKind::Go {
                return Err(ClassicalError::UnsupportedLabel(label.to_string()));
            }
            let mut x = PrimeFieldMatrix::zeros(f, big_n, big_n);
            for i in 0..n {
                x.set(i, i, 1);
            }
            x
        }
        ClassLabel::Toral { eigen } => {
            let mut mult: BTreeMap<u32, usize> = BTreeMap::new();
            for &(v, m) in eigen {
                *mult.entry(v % p).or_default() += m;
            }
            let total: usize = mult.values().sum();
            if total != big_n {
                return Err(ClassicalError::PairingMismatch(label.to_string()));
            }
            let mut diag = vec![0u32; big_n];
            match alg.kind() {
                AlgebraKind::Gl | AlgebraKind::Sl => {
                    let mut i = 0;
                    for (&v, &m) in &mult {
                        for _ in 0..m {
                            diag[i] = v;
                            i += 1;
                        }
                    }
                }
                AlgebraKind::So | AlgebraKind::Go if p == 2 => {
                    let ones = mult.get(&1).copied().unwrap_or(0);
                    if ones % 2 != 0 {
                        return Err(ClassicalError::PairingMismatch(label.to_string()));
                    }
                    for i in 0..ones / 2 {
                        diag[i] = 1;
                        diag[n + i] = 1;
                    }
                }
                AlgebraKind::Sp | AlgebraKind::So | AlgebraKind::Go => {
                    let mut i = 0;
                    for (&v, &m) in &mult {
                        if v == 0 || v > p - v {
                            continue;
                        }
                        if mult.get(&(p - v)).copied().unwrap_or(0) != m {
                            return Err(ClassicalError::PairingMismatch(label.to_string()));
                        }
                        for _ in 0..m {
                            diag[i] = v;
                            diag[n + i] = p - v;
                            i += 1;
                        }
                    }
                    let zeros = mult.get(&0).copied().unwrap_or(0);
                    if zeros % 2 != big_n % 2 {
                        return Err(ClassicalError::PairingMismatch(label.to_string()));
                    }
                }
            }
            let mut x = PrimeFieldMatrix::zeros(f, big_n, big_n);
            for (i, &d) in diag.iter().enumerate() {
                x.set(i, i, d);
            }
            x
        }
        _ => return Err(ClassicalError::UnsupportedLabel(label.to_string())),
    };
    if !alg.contains(&x) {
        return Err(ClassicalError::NotInAlgebra);
    }
    Ok(x)
}

/// Representative of any supported label.
pub fn class_rep(label: &ClassLabel, alg: &MatrixAlgebra) -> Result<PrimeFieldMatrix, ClassicalError> {
    match label {
        ClassLabel::Nilpotent { .. } | ClassLabel::RootElement => nilpotent_rep(label, alg),
        ClassLabel::Toral { .. } | ClassLabel::GoIdempotent => toral_rep(label, alg),
    }
}

/// Dimension of the group `G` whose orbits are measured.
pub fn group_dim(kind: AlgebraKind, big_n: usize) -> usize {
    let n = big_n / 2;
    match kind {
        AlgebraKind::Gl => big_n * big_n,
        AlgebraKind::Sl => big_n * big_n - 1,
        AlgebraKind::Sp => n * (2 * n + 1),
        AlgebraKind::So => big_n * (big_n - 1) / 2,
        AlgebraKind::Go => big_n * (big_n - 1) / 2 + 1,
    }
}

/// The root element rewritten as a nilpotent label for the family.
pub fn canonical_label(label: &ClassLabel, kind: AlgebraKind, big_n: usize, p: u32) -> ClassLabel {
    match label {
        ClassLabel::RootElement => {
            let fam = Family::of(kind, p);
            let twos = match kind {
                AlgebraKind::Gl | AlgebraKind::Sl | AlgebraKind::Sp => 1,
                AlgebraKind::So | AlgebraKind::Go => 2,
            };
            let mut parts = vec![2; twos];
            parts.extend(std::iter::repeat_n(1, big_n - 2 * twos));
            let refinement = (fam == Family::D2).then_some(Refinement::Smaller);
            ClassLabel::Nilpotent { partition: Partition(parts), refinement }
        }
        other => other.clone(),
    }
}

/// Group orbit dimension `dim x^G` from closed forms.
pub fn orbit_dim(label: &ClassLabel, kind: AlgebraKind, big_n: usize, p: u32) -> Result<usize, ClassicalError> {
    let no = || ClassicalError::NoFormula { label: label.to_string(), kind, n: big_n, p };
    let label = canonical_label(label, kind, big_n, p);
    let fam = Family::of(kind, p);
    let n = big_n / 2;
    let gdim = group_dim(kind, big_n);
    match &label {
        ClassLabel::Nilpotent { partition, refinement } => {
            if partition.weight() != big_n {
                return Err(ClassicalError::WrongSize(partition.clone(), big_n));
            }
            if !partition.is_valid_for(fam) {
                return Err(ClassicalError::ParityInvalid(partition.clone(), fam));
            }
            let sq: usize = partition.conjugate().parts().iter().map(|c| c * c).sum();
            let odd = partition.parts().iter().filter(|&&x| x % 2 == 1).count();
            match (kind, fam) {
                (AlgebraKind::Gl, _) => Ok(big_n * big_n - sq),
                (AlgebraKind::Sl, _) => Ok(big_n * big_n - sq),
                (AlgebraKind::Sp, Family::C) if p != 2 => Ok(gdim - (sq + odd) / 2),
                (AlgebraKind::So, Family::BD) => Ok(gdim - (sq - odd) / 2),
                (AlgebraKind::So | AlgebraKind::Go, Family::D2) => {
                    let r = partition.multiplicity(2) / 2;
                    let base = match refinement.unwrap_or(Refinement::Larger) {
                        Refinement::Larger => 4 * r * (n - r),
                        Refinement::Smaller => 2 * r * (2 * n - 2 * r - 1),
                    };
                    Ok(base)
                }
                _ => Err(no()),
            }
        }
        ClassLabel::Toral { eigen } => {
            let total: usize = eigen.iter().map(|e| e.1).sum();
            if total != big_n {
                return Err(ClassicalError::PairingMismatch(label.to_string()));
            }
            let mut mult: BTreeMap<u32, usize> = BTreeMap::new();
            for &(v, m) in eigen {
                *mult.entry(v % p).or_default() += m;
            }
            match kind {
                AlgebraKind::Gl | AlgebraKind::Sl => {
                    let c: usize = mult.values().map(|m| m * m).sum();
                    Ok(big_n * big_n - c)
                }
                AlgebraKind::Sp | AlgebraKind::So if p != 2 => {
                    let m0 = mult.get(&0).copied().unwrap_or(0);
                    let mut c = if kind == AlgebraKind::Sp { m0 * (m0 + 1) / 2 } else { m0 * m0.saturating_sub(1) / 2 };
                    for (&v, &m) in &mult {
                        if v != 0 && v < p - v {
                            if mult.get(&(p - v)).copied().unwrap_or(0) != m {
                                return Err(ClassicalError::PairingMismatch(label.to_string()));
                            }
                            c += m * m;
                        }
                    }
                    Ok(gdim - c)
                }
                AlgebraKind::So | AlgebraKind::Go if p == 2 => {
                    let ones = mult.get(&1).copied().unwrap_or(0);
                    if ones % 2 != 0 || mult.keys().any(|&v| v > 1) {
                        return Err(ClassicalError::PairingMismatch(label.to_string()));
                    }
                    let r = ones / 2;
                    Ok(4 * r * (n - r))
                }
                _ => Err(no()),
            }
        }
        ClassLabel::GoIdempotent if kind == AlgebraKind::Go => Ok(n * n - n),
        _ => Err(no()),
    }
}

/// Evidence that the constructed nilpotent `y` is a degeneration of `x`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeformCertificate {
    pub distinct_eigenvalues: usize,
    pub orbit_dim_x: usize,
    pub orbit_dim_y: usize,
    pub nilpotency_ok: bool,
    pub rank_y: usize,
    pub largest_eigenspace: usize,
    pub jordan_type: Option<Partition>,
    pub expected_jordan_type: Partition,
    /// Parameters `t` for which a conjugator `g` with `(x + t y) g = g x` was
    /// found and checked.
    pub degeneration_samples: Vec<u32>,
    pub degeneration_ok: bool,
}

impl DeformCertificate {
    pub fn all_hold(&self) -> bool {
        self.orbit_dim_x == self.orbit_dim_y
            && self.nilpotency_ok
            && self.rank_y == self.natural_dim() - self.largest_eigenspace
            && self.jordan_type.as_ref() == Some(&self.expected_jordan_type)
            && self.degeneration_ok
    }

    fn natural_dim(&self) -> usize {
        self.expected_jordan_type.weight()
    }
}

/// For diagonal `x` in `gl_n` or `sl_n`, builds a nilpotent `y` whose Jordan
/// type is conjugate to the eigenvalue multiplicities, with `x + t y`
/// conjugate to `x` for every `t`.
pub fn deform_semisimple(
    x: &PrimeFieldMatrix,
    kind: AlgebraKind,
) -> Result<(PrimeFieldMatrix, DeformCertificate), ClassicalError> {
    let f = x.field();
    let n = x.rows();
    if !matches!(kind, AlgebraKind::Gl | AlgebraKind::Sl) {
        return Err(ClassicalError::InvalidKind(kind, n, f.p()));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && x.get(i, j) != 0 {
                return Err(ClassicalError::NotDiagonal);
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(x.get(i, i)).or_default().push(i);
    }
    let mut classes: Vec<(u32, Vec<usize>)> = groups.into_iter().collect();
    classes.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    let r = classes.len();
    let mut y = PrimeFieldMatrix::zeros(f, n, n);
    for i in 0..r.saturating_sub(1) {
        let (a, b) = (&classes[i].1, &classes[i + 1].1);
        for k in 0..b.len() {
            y.set(a[k], b[k], 1);
        }
    }
    let mults = Partition::new(classes.iter().map(|c| c.1.len()).collect())?;
    let expected = mults.conjugate();

    let gl = MatrixAlgebra::realize(AlgebraKind::Gl, n, f.p())?;
    let orbit_dim_x = n * n - centralizer_dim_lie(&gl, x);
    let orbit_dim_y = n * n - centralizer_dim_lie(&gl, &y);
    let nilpotency_ok = !y.pow(r - 1).is_zero() && y.pow(r).is_zero();
    let rank_y = y.rank();
    let largest = classes[0].1.len();

    let mut samples = Vec::new();
    let mut ok = true;
    for t in [1u32, 2, f.p() - 1] {
        let t = t % f.p();
        if t == 0 || samples.contains(&t) {
            continue;
        }
        samples.push(t);
        ok &= degeneration_conjugator(x, &y, t, kind).is_some();
    }
    let cert = DeformCertificate {
        distinct_eigenvalues: r,
        orbit_dim_x,
        orbit_dim_y,
        nilpotency_ok,
        rank_y,
        largest_eigenspace: largest,
        jordan_type: jordan_type(&y),
        expected_jordan_type: expected,
        degeneration_samples: samples,
        degeneration_ok: ok,
    };
    Ok((y, cert))
}

/// `g` invertible (determinant 1 for `sl`) with `(x + t y) g = g x`, for
/// diagonal `x`.
pub fn degeneration_conjugator(
    x: &PrimeFieldMatrix,
    y: &PrimeFieldMatrix,
    t: u32,
    kind: AlgebraKind,
) -> Option<PrimeFieldMatrix> {
    let f = x.field();
    let n = x.rows();
    let z = x.add(&y.scale(t));
    let mut cols: Vec<Option<Vec<u32>>> = vec![None; n];
    let mut by_val: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        by_val.entry(x.get(i, i)).or_default().push(i);
    }
    for (a, idx) in by_val {
        let k = kernel(&z.sub(&PrimeFieldMatrix::identity(f, n).scale(a)));
        if k.dim() != idx.len() {
            return None;
        }
        for (slot, v) in idx.iter().zip(k.basis()) {
            cols[*slot] = Some(v.clone());
        }
    }
    let cols: Vec<Vec<u32>> = cols.into_iter().collect::<Option<_>>()?;
    let mut g = PrimeFieldMatrix::from_columns(f, n, &cols);
    let d = g.det();
    if d == 0 {
        return None;
    }
    if kind == AlgebraKind::Sl {
        let s = f.inv(d)?;
        for i in 0..n {
            let v = f.mul(g.get(i, 0), s);
            g.set(i, 0, v);
        }
        if g.det() != 1 {
            return None;
        }
    }
    (z.mul(&g) == g.mul(x)).then_some(g)
}

/// Dimension of the associative algebra generated by the identity and `mats`.
pub fn associative_closure_dim(mats: &[PrimeFieldMatrix]) -> usize {
    let Some(first) = mats.first() else { return 1 };
    let f = first.field();
    let n = first.rows();
    let mut space = Subspace::zero(f, n * n);
    let mut queue = std::collections::VecDeque::new();
    let id = PrimeFieldMatrix::identity(f, n);
    if space.insert(id.data()).is_some() {
        queue.push_back(id);
    }
    while let Some(w) = queue.pop_front() {
        for g in mats {
            let m = g.mul(&w);
            if space.insert(m.data()).is_some() {
                queue.push_back(m);
            }
        }
        if space.is_full() {
            break;
        }
    }
    space.dim()
}

/// Absolute irreducibility on the natural module: the matrices together with
/// the identity span all of `M_N` as an associative algebra.
pub fn is_absolutely_irreducible(mats: &[PrimeFieldMatrix]) -> bool {
    match mats.first() {
        Some(m) => associative_closure_dim(mats) == m.rows() * m.rows(),
        None => false,
    }
}

/// Nilpotent of the same rank as a toral `x` of rank at most `n` in `so_2n`
/// (characteristic 2), obtained by deforming inside the Levi `gl_n`.
pub fn deform_so2n_toral(x: &PrimeFieldMatrix) -> Result<PrimeFieldMatrix, ClassicalError> {
    let f = x.field();
    let big_n = x.rows();
    let n = big_n / 2;
    let mut a = PrimeFieldMatrix::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            a.set(i, j, x.get(i, j));
        }
    }
    let (ya, _) = deform_semisimple(&a, AlgebraKind::Gl)?;
    let mut y = PrimeFieldMatrix::zeros(f, big_n, big_n);
    for i in 0..n {
        for j in 0..n {
            y.set(i, j, ya.get(i, j));
            y.set(n + j, n + i, f.neg(ya.get(i, j)));
        }
    }
    Ok(y)
}

/// Degeneration rules for nilpotent partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpecRule {
    /// `(2s+2, 1, 1) ↝ (s+1, s+1, 2)` (type C).
    CEvenOnes { s: usize },
    /// `(2s+1, 2s+1, 1, 1) ↝ (2s, 2s, 2, 2)` (type C).
    COddPairOnes { s: usize },
    /// `(2s+1, 1) ↝ (s+1, s+1)` (types B/D).
    BdOddOne { s: usize },
    /// `(s, s, 1, 1) ↝ (s-1, s-1, 2, 2)` for `s ≥ 4` (types B/D).
    BdPairOnes { s: usize },
    /// `(2s, 2s) ↝ (s, s, s, s)` (types B/D).
    BdDouble { s: usize },
}

impl SpecRule {
    fn pattern(&self) -> Option<(Vec<usize>, Vec<usize>, Family)> {
        Some(match *self {
            SpecRule::CEvenOnes { s } => (vec![2 * s + 2, 1, 1], vec![s + 1, s + 1, 2], Family::C),
            SpecRule::COddPairOnes { s } => (vec![2 * s + 1, 2 * s + 1, 1, 1], vec![2 * s, 2 * s, 2, 2], Family::C),
            SpecRule::BdOddOne { s } => (vec![2 * s + 1, 1], vec![s + 1, s + 1], Family::BD),
            SpecRule::BdPairOnes { s } if s >= 4 => (vec![s, s, 1, 1], vec![s - 1, s - 1, 2, 2], Family::BD),
            SpecRule::BdDouble { s } => (vec![2 * s, 2 * s], vec![s, s, s, s], Family::BD),
            _ => return None,
        })
    }
}

/// Applies a degeneration rule; the output is checked to be dominated by the
/// input and to keep the parity condition.
pub fn specialize(partition: &Partition, rule: SpecRule) -> Result<Partition, ClassicalError> {
    let fail = || ClassicalError::RuleNotApplicable(rule, partition.clone());
    let (from, to, family) = rule.pattern().ok_or_else(fail)?;
    if from.contains(&0) || to.contains(&0) {
        return Err(fail());
    }
    let mut rest = partition.parts().to_vec();
    for v in &from {
        let pos = rest.iter().position(|x| x == v).ok_or_else(fail)?;
        rest.remove(pos);
    }
    rest.extend(to);
    let out = Partition::new(rest)?;
    if !out.is_valid_for(family) || !partition.is_valid_for(family) || !dominance_leq(&out, partition)? {
        return Err(fail());
    }
    Ok(out)
}

/// The generization used for type C: parts `p_i > 2` with `i > 1` are cut
/// down to 2 and their excess added to the first part. The result dominates
/// the input and has the same number of parts.
pub fn c_merge(partition: &Partition) -> Partition {
    let parts = partition.parts();
    if parts.is_empty() {
        return partition.clone();
    }
    let mut out = parts.to_vec();
    for i in 1..out.len() {
        if out[i] > 2 {
            out[0] += out[i] - 2;
            out[i] = 2;
        }
    }
    Partition::new(out).expect("positive parts")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{derived_subalgebra, is_quasi_regular, jacobi_violation_dense};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn class_label_parsing() {
        for l in [
            ClassLabel::RootElement,
            ClassLabel::GoIdempotent,
            ClassLabel::toral(&[(0, 4), (1, 4)]),
            ClassLabel::nilpotent("2^4,1^8".parse().unwrap()),
            ClassLabel::Nilpotent { partition: "2,2,1,1".parse().unwrap(), refinement: Some(Refinement::Smaller) },
        ] {
            assert_eq!(l.to_string().parse::<ClassLabel>().unwrap(), l);
        }
        assert_eq!("toral:0^2,3^1".parse::<ClassLabel>().unwrap(), ClassLabel::toral(&[(0, 2), (3, 1)]));
        assert_eq!(
            "2^2[larger]".parse::<ClassLabel>().unwrap(),
            ClassLabel::Nilpotent { partition: "2,2".parse().unwrap(), refinement: Some(Refinement::Larger) }
        );
        assert!("toral:x".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn partition_parsing_and_display() {
        assert_eq!(part("3,2,2,1").parts(), &[3, 2, 2, 1]);
        assert_eq!(part("2^4,1^8").len(), 12);
        assert_eq!(part("2^4,1^8").to_string(), "2^4,1^8");
        assert_eq!(part("(1,3,2)").parts(), &[3, 2, 1]);
        assert!("3,,1".parse::<Partition>().is_err());
        assert!("0,1".parse::<Partition>().is_err());
        assert_eq!(part("4,2,1").conjugate(), part("3,2,1,1"));
        assert_eq!(Partition::all(6).len(), 11);
        assert_eq!(Partition::all(12).len(), 77);
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&part("2,1,1"), &part("3,1")).unwrap());
        assert!(dominance_leq(&part("3,3,2"), &part("6,1,1")).unwrap());
        assert!(dominance_leq(&part("3,2,1"), &part("3,2,1")).unwrap());
        assert!(!dominance_leq(&part("3,1"), &part("2,2")).unwrap());
        assert!(dominance_leq(&part("3"), &part("2,1,1")).is_err());
        assert_eq!(alpha_of(&ClassLabel::nilpotent(part("3,2,2,1")), 8).unwrap(), 4);
    }

    #[test]
    fn specialize_examples() {
        assert_eq!(specialize(&part("6,1,1"), SpecRule::CEvenOnes { s: 2 }).unwrap(), part("3,3,2"));
        assert_eq!(specialize(&part("5,1"), SpecRule::BdOddOne { s: 2 }).unwrap(), part("3,3"));
        assert_eq!(specialize(&part("4,4"), SpecRule::BdDouble { s: 2 }).unwrap(), part("2,2,2,2"));
        assert!(specialize(&part("5,1"), SpecRule::CEvenOnes { s: 2 }).is_err());
        assert!(specialize(&part("3,3,1,1"), SpecRule::BdPairOnes { s: 3 }).is_err());
        assert_eq!(specialize(&part("5,5,1,1"), SpecRule::BdPairOnes { s: 5 }).unwrap(), part("4,4,2,2"));
        let m = c_merge(&part("4,4,3,3,1,1"));
        assert_eq!(m.len(), 6);
        assert!(dominance_leq(&part("4,4,3,3,1,1"), &m).unwrap());
    }

    #[test]
    fn realize_dimensions() {
        let cases = [
            (AlgebraKind::Gl, 3, 5, 9),
            (AlgebraKind::Sl, 3, 5, 8),
            (AlgebraKind::Sp, 4, 7, 10),
            (AlgebraKind::Sp, 4, 2, 10),
            (AlgebraKind::So, 8, 2, 28),
            (AlgebraKind::Go, 8, 2, 29),
            (AlgebraKind::So, 7, 5, 21),
            (AlgebraKind::So, 6, 3, 15),
        ];
        for (k, n, p, d) in cases {
            let a = MatrixAlgebra::realize(k, n, p).unwrap();
            assert_eq!(a.dim(), d, "{k}_{n} p={p}");
            let total: usize = a.weight_components().iter().map(|c| c.dim()).sum();
            assert_eq!(total, d);
        }
        assert!(MatrixAlgebra::realize(AlgebraKind::Go, 8, 5).is_err());
        assert!(MatrixAlgebra::realize(AlgebraKind::So, 7, 2).is_err());
        assert!(MatrixAlgebra::realize(AlgebraKind::Sp, 5, 3).is_err());
    }

    #[test]
    fn matrix_algebras_are_lie_algebras() {
        for (k, n, p) in
            [(AlgebraKind::Sp, 4, 3), (AlgebraKind::So, 5, 3), (AlgebraKind::Go, 4, 2), (AlgebraKind::Sl, 3, 2)]
        {
            let a = MatrixAlgebra::realize(k, n, p).unwrap();
            assert_eq!(jacobi_violation_dense(&a), None);
        }
    }

    #[test]
    fn root_groups_preserve_algebra() {
        for (k, n, p) in
            [(AlgebraKind::So, 7, 5), (AlgebraKind::Sp, 6, 5), (AlgebraKind::Go, 8, 2), (AlgebraKind::Sl, 4, 2)]
        {
            let a = MatrixAlgebra::realize(k, n, p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            assert_eq!(a.num_root_groups() % 2, 0);
            for r in 0..a.num_root_groups() {
                let x = a.field().random_vector(&mut rng, a.dim());
                let y = a.field().random_vector(&mut rng, a.dim());
                let t = rng.gen_range(0..p);
                let gx = a.apply_root_group(r, t, &x);
                assert!(a.contains(&a.to_matrix(&gx)));
                let gy = a.apply_root_group(r, t, &y);
                assert_eq!(a.bracket(&gx, &gy), a.apply_root_group(r, t, &a.bracket(&x, &y)));
            }
        }
    }

    #[test]
    fn nilpotent_reps_have_requested_jordan_type() {
        for (k, n) in [(AlgebraKind::Sl, 6), (AlgebraKind::Sp, 8), (AlgebraKind::So, 8), (AlgebraKind::So, 9)] {
            let a = MatrixAlgebra::realize(k, n, 7).unwrap();
            for lam in Partition::valid(n, a.family()) {
                let x = nilpotent_rep(&ClassLabel::nilpotent(lam.clone()), &a).unwrap();
                assert_eq!(jordan_type(&x), Some(lam.clone()), "{k}_{n} {lam}");
            }
        }
        let sp6 = MatrixAlgebra::realize(AlgebraKind::Sp, 6, 5).unwrap();
        assert!(matches!(
            nilpotent_rep(&ClassLabel::nilpotent(part("3,2,1")), &sp6),
            Err(ClassicalError::ParityInvalid(..))
        ));
        let sl4 = MatrixAlgebra::realize(AlgebraKind::Sl, 4, 5).unwrap();
        let x = nilpotent_rep(&ClassLabel::nilpotent(part("4")), &sl4).unwrap();
        assert_eq!(x.rank(), 3);
    }

    #[test]
    fn char2_square_zero_classes() {
        let so8 = MatrixAlgebra::realize(AlgebraKind::So, 8, 2).unwrap();
        let lbl = |r| ClassLabel::Nilpotent { partition: part("2,2,1,1,1,1"), refinement: Some(r) };
        let x = nilpotent_rep(&lbl(Refinement::Larger), &so8).unwrap();
        assert_eq!(x.rank(), 2);
        assert!(x.mul(&x).is_zero());
        assert_eq!(orbit_dim(&lbl(Refinement::Larger), AlgebraKind::So, 8, 2).unwrap(), 12);
        let l2 = ClassLabel::Nilpotent { partition: part("2^4"), refinement: Some(Refinement::Larger) };
        assert_eq!(orbit_dim(&l2, AlgebraKind::So, 8, 2).unwrap(), 16);
        let y = nilpotent_rep(&lbl(Refinement::Smaller), &so8).unwrap();
        assert_eq!(y, so8.long_root_matrix());
        assert_eq!(orbit_dim(&ClassLabel::RootElement, AlgebraKind::So, 8, 2).unwrap(), 10);
        for n in 4..=8 {
            for r in 1..=n / 2 {
                for rf in [Refinement::Larger, Refinement::Smaller] {
                    let mut parts = vec![2; 2 * r];
                    parts.extend(vec![1; 2 * n - 4 * r]);
                    let l = ClassLabel::Nilpotent { partition: Partition::new(parts).unwrap(), refinement: Some(rf) };
                    assert_eq!(orbit_dim(&l, AlgebraKind::So, 2 * n, 2).unwrap(), d2_square_zero_param_dim(n, r, rf));
                }
            }
        }
        let sl4 = MatrixAlgebra::realize(AlgebraKind::Sl, 4, 5).unwrap();
        assert_eq!(
            nilpotent_rep(&lbl(Refinement::Larger).clone(), &sl4).err(),
            Some(ClassicalError::WrongSize(part("2,2,1,1,1,1"), 4))
        );
    }

    #[test]
    fn toral_examples() {
        let gl3 = MatrixAlgebra::realize(AlgebraKind::Gl, 3, 5).unwrap();
        let x = toral_rep(&ClassLabel::toral(&[(0, 1), (1, 2)]), &gl3).unwrap();
        assert_eq!((x.get(0, 0), x.get(1, 1), x.get(2, 2)), (0, 1, 1));
        let sp4 = MatrixAlgebra::realize(AlgebraKind::Sp, 4, 5).unwrap();
        assert!(toral_rep(&ClassLabel::toral(&[(1, 1), (4, 1), (2, 1), (3, 1)]), &sp4).is_ok());
        assert!(toral_rep(&ClassLabel::toral(&[(1, 2), (2, 1), (3, 1)]), &sp4).is_err());
        let so8 = MatrixAlgebra::realize(AlgebraKind::So, 8, 2).unwrap();
        let x = toral_rep(&ClassLabel::toral(&[(0, 4), (1, 4)]), &so8).unwrap();
        assert_eq!(so8.p_power(&x), x);
        assert_eq!(x.rank(), 4);
        let go8 = MatrixAlgebra::realize(AlgebraKind::Go, 8, 2).unwrap();
        let g = toral_rep(&ClassLabel::GoIdempotent, &go8).unwrap();
        assert!(!so8.contains(&g));
    }

    #[test]
    fn centralizer_examples() {
        let gl3 = MatrixAlgebra::realize(AlgebraKind::Gl, 3, 5).unwrap();
        let z = PrimeFieldMatrix::zeros(gl3.field(), 3, 3);
        assert_eq!(centralizer_dim_lie(&gl3, &z), 9);
        let x = nilpotent_rep(&ClassLabel::nilpotent(part("2,1")), &gl3).unwrap();
        assert_eq!(centralizer_dim_lie(&gl3, &x), 5);
        let sl2 = MatrixAlgebra::realize(AlgebraKind::Sl, 2, 5).unwrap();
        let e = nilpotent_rep(&ClassLabel::nilpotent(part("2")), &sl2).unwrap();
        assert_eq!(centralizer_dim_lie(&sl2, &e), 1);
    }

    #[test]
    fn orbit_dim_examples() {
        assert_eq!(orbit_dim(&ClassLabel::nilpotent(part("1^5")), AlgebraKind::Gl, 5, 5).unwrap(), 0);
        assert_eq!(orbit_dim(&ClassLabel::nilpotent(part("2,2,2")), AlgebraKind::Sp, 6, 5).unwrap(), 12);
        let sp6 = MatrixAlgebra::realize(AlgebraKind::Sp, 6, 5).unwrap();
        let x = nilpotent_rep(&ClassLabel::nilpotent(part("2,2,2")), &sp6).unwrap();
        assert_eq!(21 - centralizer_dim_lie(&sp6, &x), 12);
        assert!(matches!(
            orbit_dim(&ClassLabel::nilpotent(part("3,3,2")), AlgebraKind::So, 8, 2),
            Err(ClassicalError::ParityInvalid(..))
        ));
        assert!(matches!(
            orbit_dim(&ClassLabel::nilpotent(part("2,2,2")), AlgebraKind::Sp, 6, 2),
            Err(ClassicalError::NoFormula { .. })
        ));
        assert_eq!(orbit_dim(&ClassLabel::GoIdempotent, AlgebraKind::Go, 8, 2).unwrap(), 12);
    }

    #[test]
    fn toral_orbit_formulas_match_lie_oracle() {
        for (k, n, p) in
            [(AlgebraKind::Sp, 6, 5), (AlgebraKind::So, 7, 5), (AlgebraKind::So, 8, 7), (AlgebraKind::Gl, 4, 3)]
        {
            let a = MatrixAlgebra::realize(k, n, p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..10 {
                let half = n / 2;
                let eig: Vec<(u32, usize)> = if k == AlgebraKind::Gl {
                    (0..n).map(|_| (rng.gen_range(0..p), 1)).collect()
                } else {
                    let mut v = Vec::new();
                    for _ in 0..half {
                        let t = rng.gen_range(0..p);
                        v.push((t, 1));
                        v.push(((p - t) % p, 1));
                    }
                    if n % 2 == 1 {
                        v.push((0, 1));
                    }
                    v
                };
                let lbl = ClassLabel::toral(&eig);
                let lbl = match &lbl {
                    ClassLabel::Toral { eigen } => {
                        let mut m: BTreeMap<u32, usize> = BTreeMap::new();
                        for &(v, c) in eigen {
                            *m.entry(v).or_default() += c;
                        }
                        ClassLabel::Toral { eigen: m.into_iter().collect() }
                    }
                    _ => unreachable!(),
                };
                let x = toral_rep(&lbl, &a).unwrap();
                assert_eq!(a.p_power(&x), x);
                let lie = group_dim(k, n) - centralizer_dim_lie(&a, &x);
                assert_eq!(orbit_dim(&lbl, k, n, p).unwrap(), lie, "{k}_{n} {lbl}");
            }
        }
    }

    #[test]
    fn deform_examples() {
        let f = PrimeField::new(7).unwrap();
        let x = PrimeFieldMatrix::zeros(f, 3, 3);
        let (y, c) = deform_semisimple(&x, AlgebraKind::Gl).unwrap();
        assert!(y.is_zero());
        assert!(c.all_hold());
        let mut x = PrimeFieldMatrix::zeros(f, 5, 5);
        for (i, v) in [1, 1, 2, 2, 2].into_iter().enumerate() {
            x.set(i, i, v);
        }
        let (y, c) = deform_semisimple(&x, AlgebraKind::Gl).unwrap();
        assert_eq!(jordan_type(&y), Some(part("2,2,1")));
        assert_eq!(y.rank(), 2);
        assert!(c.all_hold());
        let f5 = PrimeField::new(5).unwrap();
        let mut x = PrimeFieldMatrix::zeros(f5, 5, 5);
        for i in 0..5 {
            x.set(i, i, i as u32);
        }
        let (y, c) = deform_semisimple(&x, AlgebraKind::Sl).unwrap();
        assert!(y.pow(5).is_zero());
        assert!(c.all_hold());
        assert!(deform_semisimple(&y, AlgebraKind::Gl).is_err() || y.is_zero());
    }

    #[test]
    fn symmetric_matrices_char2() {
        let gl = MatrixAlgebra::realize(AlgebraKind::Gl, 4, 2).unwrap();
        let f = gl.field();
        let mut sym = Vec::new();
        for i in 0..4 {
            for j in i..4 {
                let mut m = PrimeFieldMatrix::zeros(f, 4, 4);
                m.set(i, j, 1);
                m.set(j, i, 1);
                sym.push(gl.coords(&m).unwrap());
            }
        }
        let s = Subspace::span(f, gl.dim(), &sym);
        assert!(is_quasi_regular(&gl, &s).unwrap());
        let c = crate::liealg::generated_subalgebra(&gl, s.basis());
        assert_eq!(c, s);
        assert_eq!(derived_subalgebra(&gl).dim(), 15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn specialize_rules_degenerate(s in 1usize..6, which in 0usize..5, extra in prop::collection::vec(1usize..6, 0..4)) {
            let rule = match which {
                0 => SpecRule::CEvenOnes { s },
                1 => SpecRule::COddPairOnes { s },
                2 => SpecRule::BdOddOne { s },
                3 => SpecRule::BdPairOnes { s: s + 3 },
                _ => SpecRule::BdDouble { s },
            };
            let (from, _, family) = rule.pattern().unwrap();
            let mut parts = from.clone();
            // pad with pairs so that parity is kept
            for e in extra {
                parts.push(e);
                parts.push(e);
            }
            let lam = Partition::new(parts).unwrap();
            prop_assume!(lam.is_valid_for(family));
            let out = specialize(&lam, rule).unwrap();
            prop_assert!(dominance_leq(&out, &lam).unwrap());
            prop_assert!(out.is_valid_for(family));
        }

        #[test]
        fn so2n_toral_deformation_keeps_rank(n in 3usize..7, seed in any::<u64>()) {
            let so = MatrixAlgebra::realize(AlgebraKind::So, 2 * n, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = rng.gen_range(1..=n / 2);
            let x = toral_rep(&ClassLabel::toral(&[(0, 2 * n - 2 * r), (1, 2 * r)]), &so).unwrap();
            let y = deform_so2n_toral(&x).unwrap();
            prop_assert!(so.contains(&y));
            prop_assert!(y.mul(&y).is_zero());
            prop_assert_eq!(y.rank(), x.rank());
        }
    }
}
