//! Generation by conjugates: the per-class counts `e(x)`, the bound tables,
//! product-bound records, randomized witness search and closure paths to
//! long root elements.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{
    canonical_label, class_rep, orbit_dim, AlgebraKind, ClassLabel, ClassicalError, Family, MatrixAlgebra, Partition,
    Refinement,
};
use crate::fflinalg::{kernel, PrimeField, PrimeFieldMatrix, Subspace};
use crate::liealg::{
    apply_word, default_word_length, derived_subalgebra, lie_closure, random_conjugate, ChevalleyAlgebra,
    ConjugationWord, Isogeny, LieAlgebra, LieError, ScalarExtension,
};
use crate::rootdata::{is_special_prime, validate_type, RootError, RootSystem, TypeLabel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("special characteristic: p = {p} is special for type {ty}")]
    SpecialCharacteristic { ty: TypeLabel, p: u32 },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("no generation count is established for {label} in {group}")]
    NotCovered { label: String, group: String },
    #[error("{0} is central")]
    Central(String),
    #[error("the number of conjugates must be at least 1")]
    ZeroConjugates,
    #[error("no torus contraction found from support {0:?}")]
    NoContraction(Vec<usize>),
}

/// A simple group named by type, rank and characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub ty: TypeLabel,
    pub rank: usize,
    pub p: u32,
}

impl GroupSpec {
    /// Validates the type and the prime; special characteristic is an error.
    pub fn new(ty: TypeLabel, rank: usize, p: u32) -> Result<Self, GenError> {
        validate_type(ty, rank)?;
        crate::fflinalg::PrimeField::new(p as u64).map_err(|_| GenError::NotPrime(p))?;
        if is_special_prime(ty, p) {
            return Err(GenError::SpecialCharacteristic { ty, p });
        }
        Ok(Self { ty, rank, p })
    }

    pub fn is_classical(&self) -> bool {
        matches!(self.ty, TypeLabel::A | TypeLabel::B | TypeLabel::C | TypeLabel::D)
    }

    /// The natural matrix setting for classical types.
    pub fn classical(&self) -> Option<ClassicalSpec> {
        let l = self.rank;
        let (kind, n) = match self.ty {
            TypeLabel::A => (AlgebraKind::Gl, l + 1),
            TypeLabel::B => (AlgebraKind::So, 2 * l + 1),
            TypeLabel::C => (AlgebraKind::Sp, 2 * l),
            TypeLabel::D => (AlgebraKind::So, 2 * l),
            _ => return None,
        };
        Some(ClassicalSpec { kind, natural_dim: n, p: self.p })
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} (p = {})", self.ty, self.rank, self.p)
    }
}

/// A classical group through its natural module: `GL_N` (type A), `Sp_N` or
/// `SO_N` (with `GO_N` in characteristic 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassicalSpec {
    pub kind: AlgebraKind,
    pub natural_dim: usize,
    pub p: u32,
}

impl ClassicalSpec {
    pub fn new(kind: AlgebraKind, natural_dim: usize, p: u32) -> Result<Self, GenError> {
        crate::fflinalg::PrimeField::new(p as u64).map_err(|_| GenError::NotPrime(p))?;
        let kind = match kind {
            AlgebraKind::Sl => AlgebraKind::Gl,
            AlgebraKind::Go => AlgebraKind::So,
            k => k,
        };
        let special = match kind {
            AlgebraKind::Sp => p == 2,
            AlgebraKind::So => p == 2 && natural_dim % 2 == 1,
            _ => false,
        };
        if special {
            let ty = if kind == AlgebraKind::Sp { TypeLabel::C } else { TypeLabel::B };
            return Err(GenError::SpecialCharacteristic { ty, p });
        }
        let ok = match kind {
            AlgebraKind::Gl => natural_dim >= 2,
            AlgebraKind::Sp => natural_dim >= 2 && natural_dim.is_multiple_of(2),
            _ => natural_dim >= 5,
        };
        if !ok {
            return Err(ClassicalError::InvalidKind(kind, natural_dim, p).into());
        }
        Ok(Self { kind, natural_dim, p })
    }

    pub fn family(&self) -> Family {
        Family::of(self.kind, self.p)
    }

    pub fn name(&self) -> String {
        let k = match (self.kind, self.family()) {
            (AlgebraKind::So, Family::D2) => "go".to_string(),
            (k, _) => k.to_string(),
        };
        format!("{k}_{}", self.natural_dim)
    }

    /// The matrix algebra in which a label lives.
    fn algebra_kind_for(&self, label: &ClassLabel) -> AlgebraKind {
        match label {
            ClassLabel::GoIdempotent => AlgebraKind::Go,
            _ => self.kind,
        }
    }
}

/// An exact nonnegative rational `num / den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    pub num: u64,
    pub den: u64,
}

impl Bound {
    pub fn integer(v: u64) -> Self {
        Bound { num: v, den: 1 }
    }

    pub fn admits(&self, product: u64) -> bool {
        product * self.den <= self.num
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}", self.as_f64())
        }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// `b(G)` from the bound table.
pub fn bound_b(spec: GroupSpec) -> Bound {
    let l = spec.rank as u64;
    match spec.ty {
        TypeLabel::A if spec.p != 2 => Bound { num: 9 * (l + 1) * (l + 1), den: 4 },
        TypeLabel::A => Bound::integer(2 * l * l + 4 * l),
        TypeLabel::B => Bound::integer(8 * l * l),
        TypeLabel::C => Bound::integer(6 * l * l),
        TypeLabel::D if spec.p != 2 => Bound::integer(2 * (2 * l - 1) * (2 * l - 1)),
        TypeLabel::D => Bound::integer(4 * l * l),
        TypeLabel::G => Bound::integer(48),
        TypeLabel::F => Bound::integer(240),
        TypeLabel::E => Bound::integer(match spec.rank {
            6 => 360,
            7 => 630,
            _ => 1200,
        }),
    }
}

/// The product bound for a classical group given by its natural dimension
/// (agrees with [`bound_b`] where both apply).
pub fn bound_classical(cs: ClassicalSpec) -> Bound {
    let n = cs.natural_dim as u64;
    match cs.family() {
        Family::A if cs.p != 2 => Bound { num: 9 * n * n, den: 4 },
        Family::A => Bound::integer(2 * n * n - 2),
        Family::C => Bound::integer(6 * (n / 2) * (n / 2)),
        Family::BD => Bound::integer(2 * (n - 1) * (n - 1)),
        Family::D2 => Bound::integer(4 * (n / 2) * (n / 2)),
    }
}

/// The number `e` of conjugates from the generation table.
pub fn table_e(ty: TypeLabel, rank: usize) -> usize {
    match ty {
        TypeLabel::A | TypeLabel::B => rank + 1,
        TypeLabel::C => 2 * rank,
        TypeLabel::D => rank,
        TypeLabel::G => 4,
        TypeLabel::E | TypeLabel::F => 5,
    }
}

/// One row of the bound table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub group: String,
    pub characteristic: String,
    pub bound: String,
}

/// One row of the generation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRow {
    pub group: String,
    pub e: String,
}

/// Both tables in their published form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTable {
    pub bounds: Vec<BoundRow>,
    pub generation: Vec<GenerationRow>,
}

impl BoundTable {
    pub fn published() -> Self {
        let b = |g: &str, c: &str, v: &str| BoundRow { group: g.into(), characteristic: c.into(), bound: v.into() };
        let e = |g: &str, v: &str| GenerationRow { group: g.into(), e: v.into() };
        BoundTable {
            bounds: vec![
                b("A_l", "!= 2", "2.25(l+1)^2"),
                b("A_l", "= 2", "2l^2 + 4l"),
                b("B_l (l >= 3)", "!= 2", "8l^2"),
                b("C_l (l >= 2)", "!= 2", "6l^2"),
                b("D_l (l >= 4)", "!= 2", "2(2l-1)^2"),
                b("D_l (l >= 4)", "= 2", "4l^2"),
                b("G2", "!= 3", "48"),
                b("F4", "!= 2", "240"),
                b("E6", "any", "360"),
                b("E7", "any", "630"),
                b("E8", "any", "1200"),
            ],
            generation: vec![
                e("A_l (l >= 1) or B_l (l >= 3)", "l+1"),
                e("C_l (l >= 2)", "2l"),
                e("D_l (l >= 4)", "l"),
                e("G2", "4"),
                e("F4, E6, E7, E8", "5"),
            ],
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::from("Table 1: bound b(G)\n");
        s.push_str(&format!("{:<14}{:<8}{}\n", "type", "char k", "b(G)"));
        for r in &self.bounds {
            s.push_str(&format!("{:<14}{:<8}{}\n", r.group, r.characteristic, r.bound));
        }
        s.push_str("\nTable 2: number of conjugates e needed to generate\n");
        s.push_str(&format!("{:<30}{}\n", "type", "e"));
        for r in &self.generation {
            s.push_str(&format!("{:<30}{}\n", r.group, r.e));
        }
        s
    }
}

/// `e(x)` from the per-type case analysis.
pub fn e_of_class(spec: GroupSpec, label: &ClassLabel) -> Result<usize, GenError> {
    match spec.classical() {
        Some(cs) => e_of_class_classical(ClassicalSpec::new(cs.kind, cs.natural_dim, cs.p)?, label),
        None => match label {
            ClassLabel::RootElement => Ok(table_e(spec.ty, spec.rank)),
            _ => Err(GenError::NotCovered { label: label.to_string(), group: spec.to_string() }),
        },
    }
}

/// Type-A count for a nonzero nilpotent with Jordan type `lam`, `p` odd.
fn e_type_a_odd(lam: &Partition) -> usize {
    let n = lam.weight();
    if n == 2 {
        return 2;
    }
    let alpha = lam.len();
    let twos = lam.multiplicity(2);
    let ones = lam.multiplicity(1);
    if twos >= 1 && twos + ones == alpha && ones <= 1 {
        3
    } else if alpha <= ceil_div(n, 2) {
        2
    } else {
        ceil_div(n, n - alpha)
    }
}

pub fn e_of_class_classical(cs: ClassicalSpec, label: &ClassLabel) -> Result<usize, GenError> {
    let n_nat = cs.natural_dim;
    let p = cs.p;
    let label = canonical_label(label, cs.kind, n_nat, p);
    let not_covered = || GenError::NotCovered { label: label.to_string(), group: cs.name() };
    let central = || GenError::Central(label.to_string());
    let mults = |eigen: &[(u32, usize)]| -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &(v, k) in eigen {
            *m.entry(v % p).or_default() += k;
        }
        m.retain(|_, k| *k > 0);
        m
    };
    match (&label, cs.family()) {
        (ClassLabel::Nilpotent { partition, .. }, fam) => {
            if partition.weight() != n_nat {
                return Err(ClassicalError::WrongSize(partition.clone(), n_nat).into());
            }
            if !partition.is_valid_for(fam) {
                if fam == Family::A && p == 2 {
                    return Err(not_covered());
                }
                return Err(ClassicalError::ParityInvalid(partition.clone(), fam).into());
            }
            let rank = partition.rank();
            if rank == 0 {
                return Err(central());
            }
            let alpha = partition.len();
            Ok(match fam {
                Family::A if p != 2 => e_type_a_odd(partition),
                Family::A => {
                    if partition.parts()[0] > 2 {
                        return Err(not_covered());
                    }
                    3.max(ceil_div(n_nat, rank))
                }
                Family::C => {
                    let n = n_nat / 2;
                    if partition.multiplicity(2) == alpha {
                        3
                    } else if rank >= n {
                        2
                    } else {
                        2 * ceil_div(n, rank)
                    }
                }
                Family::BD => 4.max(ceil_div(n_nat, n_nat - alpha)),
                Family::D2 => 4.max(ceil_div(n_nat / 2, rank / 2)),
            })
        }
        (ClassLabel::Toral { eigen }, fam) => {
            let m = mults(eigen);
            if m.len() < 2 {
                return Err(central());
            }
            let m0 = m.get(&0).copied().unwrap_or(0);
            let alpha0 = n_nat - m0;
            Ok(match fam {
                Family::A if p != 2 => {
                    let lam = Partition::new(m.values().copied().collect())?;
                    e_type_a_odd(&lam.conjugate())
                }
                Family::A => {
                    let r = m0.min(n_nat - m0);
                    3.max(ceil_div(n_nat, r))
                }
                Family::C => {
                    let n = n_nat / 2;
                    if alpha0 >= n {
                        3
                    } else {
                        2 * ceil_div(n, alpha0)
                    }
                }
                Family::BD => 4.max(ceil_div(n_nat, alpha0)),
                Family::D2 => {
                    let n = n_nat / 2;
                    let rp = m.get(&1).copied().unwrap_or(0) / 2;
                    let r = rp.min(n - rp);
                    4.max(ceil_div(n, r))
                }
            })
        }
        (ClassLabel::GoIdempotent, Family::D2) => Ok(4),
        _ => Err(not_covered()),
    }
}

/// `e(x) · dim x^G` against the bound for one class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBoundRecord {
    pub group: String,
    pub natural_dim: usize,
    pub p: u32,
    pub label: ClassLabel,
    pub e: usize,
    pub orbit_dim: usize,
    pub product: u64,
    pub bound: Bound,
    pub ok: bool,
}

/// Noncentral classes with `x^[p] ∈ {0, x}` considered for the product bounds:
/// every valid nonzero nilpotent partition and every toral eigenvalue
/// multiplicity vector compatible with the form.
pub fn enumerate_classes(cs: ClassicalSpec) -> Vec<ClassLabel> {
    let n_nat = cs.natural_dim;
    let p = cs.p;
    let mut out = Vec::new();
    let fam = cs.family();
    match fam {
        Family::A if p == 2 => {
            for r in 1..=n_nat / 2 {
                let mut parts = vec![2; r];
                parts.extend(vec![1; n_nat - 2 * r]);
                out.push(ClassLabel::nilpotent(Partition::new(parts).expect("positive")));
            }
            for k in 1..n_nat {
                out.push(ClassLabel::toral(&[(0, k), (1, n_nat - k)]));
            }
        }
        Family::D2 => {
            let n = n_nat / 2;
            for r in 1..=n / 2 {
                let mut parts = vec![2; 2 * r];
                parts.extend(vec![1; n_nat - 4 * r]);
                let partition = Partition::new(parts).expect("positive");
                for rf in [Refinement::Larger, Refinement::Smaller] {
                    out.push(ClassLabel::Nilpotent { partition: partition.clone(), refinement: Some(rf) });
                }
            }
            for rp in 1..n {
                out.push(ClassLabel::toral(&[(0, n_nat - 2 * rp), (1, 2 * rp)]));
            }
            out.push(ClassLabel::GoIdempotent);
        }
        _ => {
            for lam in Partition::valid(n_nat, fam) {
                if lam.rank() > 0 {
                    out.push(ClassLabel::nilpotent(lam));
                }
            }
            if fam == Family::A {
                // Multiplicity vectors (m_0, …, m_{p-1}) with at least two nonzero entries.
                let k = (p as usize).min(4096);
                let mut cur = vec![0usize; k];
                fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<ClassLabel>) {
                    if i + 1 == cur.len() {
                        cur[i] = left;
                        if cur.iter().filter(|&&m| m > 0).count() >= 2 {
                            let e: Vec<(u32, usize)> =
                                cur.iter().enumerate().filter(|(_, &m)| m > 0).map(|(v, &m)| (v as u32, m)).collect();
                            out.push(ClassLabel::toral(&e));
                        }
                        return;
                    }
                    for m in 0..=left {
                        cur[i] = m;
                        rec(i + 1, left - m, cur, out);
                    }
                }
                if k <= n_nat + 8 {
                    rec(0, n_nat, &mut cur, &mut out);
                } else {
                    // Large p: only the multiplicities matter, so eigenvalues 0, 1, 2, …
                    for lam in crate::classical::Partition::all(n_nat) {
                        if lam.len() >= 2 {
                            let e: Vec<(u32, usize)> =
                                lam.parts().iter().enumerate().map(|(v, &m)| (v as u32, m)).collect();
                            out.push(ClassLabel::toral(&e));
                        }
                    }
                }
            } else {
                // Pairs {t, -t}: multiplicities for t = 1, …, (p-1)/2.
                let half = ((p - 1) / 2) as usize;
                let pairs_max = n_nat / 2;
                let mut cur = vec![0usize; half];
                fn rec(i: usize, left: usize, cur: &mut Vec<usize>, sink: &mut Vec<Vec<usize>>) {
                    if i == cur.len() {
                        sink.push(cur.clone());
                        return;
                    }
                    for m in 0..=left {
                        cur[i] = m;
                        rec(i + 1, left - m, cur, sink);
                    }
                }
                let mut vecs = Vec::new();
                if half <= 8 {
                    rec(0, pairs_max, &mut cur, &mut vecs);
                }
                for v in vecs {
                    let used: usize = v.iter().sum();
                    if used == 0 {
                        continue;
                    }
                    let mut e = vec![(0u32, n_nat - 2 * used)];
                    for (i, &m) in v.iter().enumerate() {
                        let t = i as u32 + 1;
                        e.push((t, m));
                        e.push((p - t, m));
                    }
                    out.push(ClassLabel::toral(&e));
                }
            }
        }
    }
    out
}

pub fn class_record(cs: ClassicalSpec, label: &ClassLabel) -> Result<ClassBoundRecord, GenError> {
    let e = e_of_class_classical(cs, label)?;
    let od = orbit_dim(label, cs.algebra_kind_for(label), cs.natural_dim, cs.p)?;
    let product = (e * od) as u64;
    let bound = bound_classical(cs);
    Ok(ClassBoundRecord {
        group: cs.name(),
        natural_dim: cs.natural_dim,
        p: cs.p,
        label: label.clone(),
        e,
        orbit_dim: od,
        product,
        bound,
        ok: bound.admits(product),
    })
}

/// Records for every enumerated class of a classical group.
pub fn verify_product_bound_classical(cs: ClassicalSpec) -> Result<Vec<ClassBoundRecord>, GenError> {
    let labels = enumerate_classes(cs);
    labels.par_iter().map(|l| class_record(cs, l)).collect()
}

/// Records for a simple group. Exceptional types contribute the long root
/// element, whose orbit dimension is computed from the root system.
pub fn verify_product_bound(spec: GroupSpec) -> Result<Vec<ClassBoundRecord>, GenError> {
    if let Some(cs) = spec.classical() {
        let cs = ClassicalSpec::new(cs.kind, cs.natural_dim, cs.p)?;
        return verify_product_bound_classical(cs);
    }
    let rs = RootSystem::build(spec.ty, spec.rank)?;
    let e = table_e(spec.ty, spec.rank);
    let od = minimal_orbit_dim(&rs);
    let bound = bound_b(spec);
    let product = (e * od) as u64;
    Ok(vec![ClassBoundRecord {
        group: format!("{}{}", spec.ty, spec.rank),
        natural_dim: rs.rank() + rs.num_roots(),
        p: spec.p,
        label: ClassLabel::RootElement,
        e,
        orbit_dim: od,
        product,
        bound,
        ok: bound.admits(product),
    }])
}

/// Dimension of the orbit of a long root element: one more than the number of
/// roots pairing positively with the highest root.
pub fn minimal_orbit_dim(rs: &RootSystem) -> usize {
    let theta = rs.highest_root();
    1 + (0..rs.num_roots()).filter(|&b| rs.pairing(rs.root(b), theta) > 0).count()
}

/// A realized algebra: natural matrices for classical types, Chevalley basis
/// otherwise.
#[derive(Clone, Debug)]
pub enum Realized {
    Matrix(MatrixAlgebra),
    Chevalley(ChevalleyAlgebra),
}

impl Realized {
    pub fn lie(&self) -> &dyn LieAlgebra {
        match self {
            Realized::Matrix(m) => m,
            Realized::Chevalley(c) => c,
        }
    }
}

impl LieAlgebra for Realized {
    fn field(&self) -> PrimeField {
        self.lie().field()
    }
    fn dim(&self) -> usize {
        self.lie().dim()
    }
    fn bracket(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        self.lie().bracket(x, y)
    }
    fn num_root_groups(&self) -> usize {
        self.lie().num_root_groups()
    }
    fn num_positive_roots(&self) -> usize {
        self.lie().num_positive_roots()
    }
    fn apply_root_group(&self, root: usize, t: u32, x: &[u32]) -> Vec<u32> {
        self.lie().apply_root_group(root, t, x)
    }
    fn root_group_terms(&self, root: usize, x: &[u32]) -> Option<Vec<Vec<u32>>> {
        self.lie().root_group_terms(root, x)
    }
    fn weight_components(&self) -> Vec<Subspace> {
        self.lie().weight_components()
    }
    fn basis_label(&self, i: usize) -> String {
        self.lie().basis_label(i)
    }
}

/// Everything needed to search for generating conjugates of one element.
/// The search runs over `F_{p^k}` (default `k = 1`): small prime fields can
/// have too few rational points for a generic configuration.
#[derive(Clone, Debug)]
pub struct Problem {
    pub description: String,
    pub label: Option<ClassLabel>,
    algebra: ScalarExtension<Realized>,
    base: Vec<u32>,
    target: Subspace,
    base_target: Subspace,
}

impl Problem {
    fn assemble(description: String, label: ClassLabel, alg: Realized, base: Vec<u32>, target: Subspace) -> Self {
        Problem {
            description,
            label: Some(label),
            algebra: ScalarExtension::new(alg, 1),
            base,
            target: target.clone(),
            base_target: target,
        }
    }

    /// A class in a simple group. Classical types use the natural matrix
    /// algebra and aim for its derived subalgebra (for `go_2n`, that of
    /// `so_2n`); exceptional types use the adjoint Chevalley algebra.
    pub fn for_class(spec: GroupSpec, label: &ClassLabel) -> Result<Self, GenError> {
        match spec.classical() {
            Some(cs) => Self::for_classical(ClassicalSpec::new(cs.kind, cs.natural_dim, cs.p)?, label),
            None => {
                if *label != ClassLabel::RootElement {
                    return Err(GenError::NotCovered { label: label.to_string(), group: spec.to_string() });
                }
                let alg = ChevalleyAlgebra::new(spec.ty, spec.rank, spec.p, Isogeny::Adjoint)?;
                let base = alg.highest_root_vector();
                let target = derived_subalgebra(&alg);
                let desc = format!("{}{} adjoint", spec.ty, spec.rank);
                Ok(Self::assemble(desc, label.clone(), Realized::Chevalley(alg), base, target))
            }
        }
    }

    pub fn for_classical(cs: ClassicalSpec, label: &ClassLabel) -> Result<Self, GenError> {
        let kind = cs.algebra_kind_for(label);
        let alg = MatrixAlgebra::realize(kind, cs.natural_dim, cs.p)?;
        let x = class_rep(label, &alg)?;
        let base = alg.coords(&x)?;
        let target = if kind == AlgebraKind::Go {
            let so = MatrixAlgebra::realize(AlgebraKind::So, cs.natural_dim, cs.p)?;
            let d = derived_subalgebra(&so);
            let vecs: Vec<Vec<u32>> = d.basis().iter().map(|v| alg.coords_unchecked(&so.to_matrix(v))).collect();
            Subspace::span(alg.field(), alg.dim(), &vecs)
        } else {
            derived_subalgebra(&alg)
        };
        let desc = format!("{}_{}", kind, cs.natural_dim);
        Ok(Self::assemble(desc, label.clone(), Realized::Matrix(alg), base, target))
    }

    /// The same problem over `F_{p^k}`.
    pub fn with_field_degree(self, k: usize) -> Self {
        let base = self.base[..self.algebra.base().dim()].to_vec();
        let algebra = ScalarExtension::new(self.algebra.base().clone(), k.max(1));
        let target = algebra.extend_subspace(&self.base_target);
        Problem { base: algebra.embed(&base), target, algebra, ..self }
    }

    pub fn field_degree(&self) -> usize {
        self.algebra.degree()
    }

    /// The algebra searched in (an `F_p`-form of the scalar extension).
    pub fn lie(&self) -> &ScalarExtension<Realized> {
        &self.algebra
    }

    pub fn realized(&self) -> &Realized {
        self.algebra.base()
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn target(&self) -> &Subspace {
        &self.target
    }

    /// Target dimension over the scalar field.
    pub fn target_dim(&self) -> usize {
        self.base_target.dim()
    }

    pub fn search(&self, e: usize, trials: usize, seeds: &[u64]) -> Result<Vec<SeedOutcome>, GenError> {
        find_witness_seeds(&self.algebra, &self.base, &self.target, e, trials, seeds)
    }

    pub fn replay(&self, w: &GenerationWitness) -> (usize, bool) {
        replay_witness(&self.algebra, w, &self.target)
    }
}

/// Field degree used by default: the smallest `k` with `p^k ≥ 4`.
pub fn default_field_degree(p: u32) -> usize {
    let mut k = 1;
    while (p as u64).pow(k as u32) < 4 {
        k += 1;
    }
    k
}

/// `e` conjugates of `base`, given by words, that generate a subalgebra
/// containing the target. Replaying the words reproduces the result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationWitness {
    pub base: Vec<u32>,
    /// Degree of the scalar field over `F_p`; dimensions are over that field.
    pub field_degree: usize,
    pub e: usize,
    pub words: Vec<ConjugationWord>,
    pub generated_dim: usize,
    pub target_dim: usize,
    pub contains_derived: bool,
    pub seed: u64,
    pub trial: usize,
}

/// Outcome of the search for one seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SeedOutcome {
    Found(GenerationWitness),
    /// Inconclusive. `plateaued` means every attempt generated a subalgebra of
    /// dimension below the target; otherwise some attempt reached the target
    /// dimension without containing the target.
    Exhausted {
        seed: u64,
        trials: usize,
        best_dim: usize,
        target_dim: usize,
        plateaued: bool,
    },
}

impl SeedOutcome {
    pub fn witness(&self) -> Option<&GenerationWitness> {
        match self {
            SeedOutcome::Found(w) => Some(w),
            SeedOutcome::Exhausted { .. } => None,
        }
    }
}

pub const DEFAULT_TRIALS: usize = 64;

fn contains(big: &Subspace, small: &Subspace) -> bool {
    big.dim() >= small.dim() && small.basis().iter().all(|v| big.contains_vector(v))
}

/// Searches with one seed: each trial draws `e` random conjugates of `base`
/// (each a word of `word_length` root-group elements) and tests whether they
/// generate a subalgebra containing `target`.
pub fn find_witness<L: LieAlgebra + ?Sized>(
    alg: &L,
    base: &[u32],
    target: &Subspace,
    e: usize,
    trials: usize,
    seed: u64,
    word_length: Option<usize>,
) -> Result<SeedOutcome, GenError> {
    if e == 0 {
        return Err(GenError::ZeroConjugates);
    }
    let len = word_length.unwrap_or_else(|| default_word_length(alg));
    let deg = alg.scalar_degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for trial in 0..trials {
        let (gens, words): (Vec<Vec<u32>>, Vec<ConjugationWord>) =
            (0..e).map(|_| random_conjugate(alg, base, len, &mut rng)).unzip();
        let spanning: Vec<Vec<u32>> = gens.iter().flat_map(|g| alg.scalar_multiples(g)).collect();
        let s = lie_closure(alg, &spanning, Some(target));
        if contains(&s, target) {
            let full = lie_closure(alg, &spanning, None);
            return Ok(SeedOutcome::Found(GenerationWitness {
                base: base.to_vec(),
                field_degree: deg,
                e,
                words,
                generated_dim: full.dim() / deg,
                target_dim: target.dim() / deg,
                contains_derived: true,
                seed,
                trial,
            }));
        }
        best = best.max(s.dim() / deg);
    }
    let target_dim = target.dim() / deg;
    Ok(SeedOutcome::Exhausted { seed, trials, best_dim: best, target_dim, plateaued: best < target_dim })
}

/// [`find_witness`] over several seeds in parallel.
pub fn find_witness_seeds<L: LieAlgebra + ?Sized>(
    alg: &L,
    base: &[u32],
    target: &Subspace,
    e: usize,
    trials: usize,
    seeds: &[u64],
) -> Result<Vec<SeedOutcome>, GenError> {
    seeds.par_iter().map(|&s| find_witness(alg, base, target, e, trials, s, None)).collect()
}

/// Regenerates the subalgebra of a witness: `(dimension, contains target)`.
pub fn replay_witness<L: LieAlgebra + ?Sized>(alg: &L, w: &GenerationWitness, target: &Subspace) -> (usize, bool) {
    let gens: Vec<Vec<u32>> =
        w.words.iter().flat_map(|word| alg.scalar_multiples(&apply_word(alg, word, &w.base))).collect();
    let s = lie_closure(alg, &gens, None);
    let c = contains(&s, target);
    (s.dim() / alg.scalar_degree(), c)
}

/// Subalgebra generated by explicit elements (over the scalar field of `alg`).
pub fn generated_subalgebra<L: LieAlgebra + ?Sized>(alg: &L, elements: &[Vec<u32>]) -> Subspace {
    let spanning: Vec<Vec<u32>> = elements.iter().flat_map(|g| alg.scalar_multiples(g)).collect();
    lie_closure(alg, &spanning, None)
}

/// Dimensions of the common kernel of the matrices and of their transposes:
/// a fixed line and a fixed hyperplane for nilpotent generators.
pub fn common_fixed_dims(mats: &[PrimeFieldMatrix]) -> (usize, usize) {
    let Some(first) = mats.first() else { return (0, 0) };
    let stacked = mats[1..].iter().fold(first.clone(), |acc, m| acc.stack(m));
    let t: Vec<PrimeFieldMatrix> = mats.iter().map(|m| m.transpose()).collect();
    let stacked_t = t[1..].iter().fold(t[0].clone(), |acc, m| acc.stack(m));
    (kernel(&stacked).dim(), kernel(&stacked_t).dim())
}

/// Report of the table-`e` generation check for a long root element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenThmReport {
    pub group: GroupSpec,
    pub algebra: String,
    pub field_degree: usize,
    pub e: usize,
    pub target_dim: usize,
    pub outcomes: Vec<SeedOutcome>,
    pub certified: bool,
}

/// Runs the witness search for a long root element with the table's `e`.
pub fn gen_thm_check(
    spec: GroupSpec,
    trials: usize,
    seeds: &[u64],
    field_degree: usize,
) -> Result<GenThmReport, GenError> {
    let problem = Problem::for_class(spec, &ClassLabel::RootElement)?.with_field_degree(field_degree);
    let e = table_e(spec.ty, spec.rank);
    let outcomes = problem.search(e, trials, seeds)?;
    let certified = outcomes.iter().any(|o| o.witness().is_some());
    Ok(GenThmReport {
        group: spec,
        algebra: problem.description.clone(),
        field_degree: problem.field_degree(),
        e,
        target_dim: problem.target_dim(),
        outcomes,
        certified,
    })
}

/// One step of a degeneration path inside the closure of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum PathStep {
    /// Limit `t → 0` of `Ad(λ(t)) x` for a cocharacter pairing nonnegatively
    /// with the support; the roots with pairing zero remain.
    Contract { lambda: Vec<i64>, kept: Vec<usize> },
    /// `Ad(x_root(t))` applied, with the resulting root support.
    Conjugate { root: usize, t: u32, support: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosurePath {
    pub start: Vec<usize>,
    pub steps: Vec<PathStep>,
    pub end_root: usize,
    pub end_is_long: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootClosureReport {
    pub group: GroupSpec,
    pub paths: Vec<ClosurePath>,
    pub all_long: bool,
}

fn dot(a: &[i64], b: &[i32]) -> i64 {
    a.iter().zip(b).map(|(&x, &y)| x * y as i64).sum()
}

/// A cocharacter (in simple-root coordinates) vanishing on `keep` and
/// strictly positive on the rest of `support`.
fn find_contraction(rs: &RootSystem, support: &[usize], keep: usize, rng: &mut ChaCha8Rng) -> Option<Vec<i64>> {
    let l = rs.rank();
    let c = rs.root(keep);
    let ok =
        |lam: &[i64]| dot(lam, c) == 0 && support.iter().filter(|&&b| b != keep).all(|&b| dot(lam, rs.root(b)) > 0);
    // Coordinates outside the support of the kept root.
    let structured: Vec<i64> = (0..l).map(|i| i64::from(c[i] == 0)).collect();
    if ok(&structured) {
        return Some(structured);
    }
    let cc: i64 = c.iter().map(|&v| (v * v) as i64).sum();
    for _ in 0..20000 {
        let r: Vec<i64> = (0..l).map(|_| rng.gen_range(-6..=6)).collect();
        let rc = dot(&r, c);
        let lam: Vec<i64> = (0..l).map(|i| cc * r[i] - rc * c[i] as i64).collect();
        if ok(&lam) {
            let g = lam.iter().fold(0i64, |a, &b| gcd(a, b.abs()));
            return Some(lam.into_iter().map(|v| v / g.max(1)).collect());
        }
    }
    None
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn root_support(alg: &ChevalleyAlgebra, x: &[u32]) -> Option<Vec<usize>> {
    let l = alg.rank();
    if x[..l].iter().any(|&v| v != 0) {
        return None;
    }
    Some((0..alg.root_system().num_roots()).filter(|&r| x[l + r] != 0).collect())
}

/// Contracts `support` to a single root, preferring a long one.
fn contract_to_root(rs: &RootSystem, support: &[usize], rng: &mut ChaCha8Rng) -> Option<(Vec<PathStep>, usize)> {
    if support.len() == 1 {
        return Some((Vec::new(), support[0]));
    }
    let mut order: Vec<usize> = support.to_vec();
    order.sort_by_key(|&r| (!rs.is_long(r), std::cmp::Reverse(rs.height(r))));
    for &keep in &order {
        if let Some(lambda) = find_contraction(rs, support, keep, rng) {
            return Some((vec![PathStep::Contract { lambda, kept: vec![keep] }], keep));
        }
    }
    None
}

/// Degeneration path from `Σ_{r ∈ start} e_r` to a long root element.
pub fn closure_path(alg: &ChevalleyAlgebra, start: &[usize], seed: u64) -> Result<ClosurePath, GenError> {
    let rs = alg.root_system();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut steps, mut end) =
        contract_to_root(rs, start, &mut rng).ok_or_else(|| GenError::NoContraction(start.to_vec()))?;
    if !rs.is_long(end) {
        let ty = rs.type_label();
        let p = alg.field().p();
        if is_special_prime(ty, p) {
            return Err(GenError::SpecialCharacteristic { ty, p });
        }
        let x = alg.root_vector(end);
        let mut done = false;
        for beta in 0..rs.num_roots() {
            if beta == end || beta == rs.negative(end) {
                continue;
            }
            let y = alg.apply_root_group(beta, 1, &x);
            let Some(sup) = root_support(alg, &y) else { continue };
            if !sup.iter().any(|&r| rs.is_long(r)) {
                continue;
            }
            for &gamma in sup.iter().filter(|&&r| rs.is_long(r)) {
                if let Some(lambda) = find_contraction(rs, &sup, gamma, &mut rng) {
                    steps.push(PathStep::Conjugate { root: beta, t: 1, support: sup.clone() });
                    steps.push(PathStep::Contract { lambda, kept: vec![gamma] });
                    end = gamma;
                    done = true;
                    break;
                }
            }
            if done {
                break;
            }
        }
        if !done {
            return Err(GenError::NoContraction(vec![end]));
        }
    }
    Ok(ClosurePath { start: start.to_vec(), steps, end_root: end, end_is_long: rs.is_long(end) })
}

/// Rechecks every step of a path against the algebra.
pub fn verify_path(alg: &ChevalleyAlgebra, path: &ClosurePath) -> bool {
    let rs = alg.root_system();
    let mut support = path.start.clone();
    for step in &path.steps {
        match step {
            PathStep::Contract { lambda, kept } => {
                if support.iter().any(|&b| dot(lambda, rs.root(b)) < 0) {
                    return false;
                }
                let k: Vec<usize> = support.iter().copied().filter(|&b| dot(lambda, rs.root(b)) == 0).collect();
                if k.is_empty() || &k != kept {
                    return false;
                }
                support = k;
            }
            PathStep::Conjugate { root, t, support: sup } => {
                if support.len() != 1 {
                    return false;
                }
                let y = alg.apply_root_group(*root, *t, &alg.root_vector(support[0]));
                match root_support(alg, &y) {
                    Some(s) if &s == sup => support = s,
                    _ => return false,
                }
            }
        }
    }
    support == vec![path.end_root] && rs.is_long(path.end_root) == path.end_is_long
}

/// Paths from the regular nilpotent, from `e_θ + e_{α_i}` and from each short
/// simple root element down to a long root element.
pub fn root_element_closure_check(spec: GroupSpec) -> Result<RootClosureReport, GenError> {
    let alg = ChevalleyAlgebra::new(spec.ty, spec.rank, spec.p, Isogeny::SimplyConnected)?;
    let rs = alg.root_system();
    let l = rs.rank();
    let simple: Vec<usize> = (0..l).map(|i| rs.simple_root_index(i)).collect();
    let mut starts: Vec<Vec<usize>> = vec![simple.clone()];
    let theta = rs.highest_root();
    for &a in &simple {
        if a != theta {
            let mut s = vec![theta, a];
            s.sort_unstable();
            starts.push(s);
        }
    }
    for &a in &simple {
        if !rs.is_long(a) {
            starts.push(vec![a]);
        }
    }
    let paths: Vec<ClosurePath> =
        starts.iter().enumerate().map(|(i, s)| closure_path(&alg, s, i as u64)).collect::<Result<_, _>>()?;
    let all_long = paths.iter().all(|p| p.end_is_long && verify_path(&alg, p));
    Ok(RootClosureReport { group: spec, paths, all_long })
}
