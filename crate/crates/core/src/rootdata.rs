//! Root systems of the simple types, built by reflection closure in
//! simple-root coordinates, together with signed Chevalley structure
//! constants.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("invalid simple type {0}{1}")]
    InvalidType(TypeLabel, usize),
    #[error("unknown type label {0:?}")]
    UnknownLabel(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::F => "F",
            TypeLabel::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for TypeLabel {
    type Err = RootError;
    fn from_str(s: &str) -> Result<Self, RootError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(TypeLabel::A),
            "B" => Ok(TypeLabel::B),
            "C" => Ok(TypeLabel::C),
            "D" => Ok(TypeLabel::D),
            "E" => Ok(TypeLabel::E),
            "F" => Ok(TypeLabel::F),
            "G" => Ok(TypeLabel::G),
            _ => Err(RootError::UnknownLabel(s.to_string())),
        }
    }
}

/// Checks that `(t, rank)` names a simple type.
pub fn validate_type(t: TypeLabel, rank: usize) -> Result<(), RootError> {
    let ok = match t {
        TypeLabel::A => rank >= 1,
        TypeLabel::B | TypeLabel::C => rank >= 2,
        TypeLabel::D => rank >= 3,
        TypeLabel::E => (6..=8).contains(&rank),
        TypeLabel::F => rank == 4,
        TypeLabel::G => rank == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(RootError::InvalidType(t, rank))
    }
}

/// True exactly when `p` is special for the type: 2 for B, C, F4 and 3 for G2.
pub fn is_special_prime(t: TypeLabel, p: u32) -> bool {
    matches!((t, p), (TypeLabel::B, 2) | (TypeLabel::C, 2) | (TypeLabel::F, 2) | (TypeLabel::G, 3))
}

/// Gram matrix of the invariant form on simple roots, scaled so short roots
/// have squared length 2 (long roots in the simply-laced case).
fn simple_gram(t: TypeLabel, l: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; l]; l];
    let chain = |g: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    match t {
        TypeLabel::A => {
            for i in 0..l {
                g[i][i] = 2;
                if i + 1 < l {
                    chain(&mut g, i, i + 1, -1);
                }
            }
        }
        TypeLabel::B => {
            for i in 0..l {
                g[i][i] = if i + 1 == l { 2 } else { 4 };
                if i + 1 < l {
                    chain(&mut g, i, i + 1, -2);
                }
            }
        }
        TypeLabel::C => {
            for i in 0..l {
                g[i][i] = if i + 1 == l { 4 } else { 2 };
                if i + 1 < l {
                    chain(&mut g, i, i + 1, if i + 2 == l { -2 } else { -1 });
                }
            }
        }
        TypeLabel::D => {
            for i in 0..l {
                g[i][i] = 2;
            }
            for i in 0..l - 2 {
                chain(&mut g, i, i + 1, -1);
            }
            chain(&mut g, l - 3, l - 1, -1);
        }
        TypeLabel::E => {
            for i in 0..l {
                g[i][i] = 2;
            }
            // Bourbaki: 1-3-4-5-..., with 2 attached to 4.
            chain(&mut g, 0, 2, -1);
            chain(&mut g, 1, 3, -1);
            for i in 2..l - 1 {
                chain(&mut g, i, i + 1, -1);
            }
        }
        TypeLabel::F => {
            let d = [4, 4, 2, 2];
            for i in 0..4 {
                g[i][i] = d[i];
            }
            chain(&mut g, 0, 1, -2);
            chain(&mut g, 1, 2, -2);
            chain(&mut g, 2, 3, -1);
        }
        TypeLabel::G => {
            g[0][0] = 2;
            g[1][1] = 6;
            chain(&mut g, 0, 1, -3);
        }
    }
    g
}

/// A reduced irreducible root system in simple-root coordinates.
///
/// Roots are indexed so that positive roots come first, sorted by height and
/// then lexicographically; the negative of positive root `k` has index
/// `num_positive() + k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootSystem {
    type_label: TypeLabel,
    rank: usize,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Vec<i32>>,
    norms: Vec<i64>,
    #[serde(skip)]
    index: HashMap<Vec<i32>, usize>,
}

impl RootSystem {
    pub fn build(t: TypeLabel, rank: usize) -> Result<Self, RootError> {
        validate_type(t, rank)?;
        let l = rank;
        let gram = simple_gram(t, l);
        let cartan: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| 2 * gram[i][j] / gram[j][j]).collect()).collect();

        let pair = |a: &[i32], b: &[i32]| -> i64 {
            let mut s = 0i64;
            for i in 0..l {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..l {
                    s += a[i] as i64 * b[j] as i64 * gram[i][j];
                }
            }
            s
        };

        let mut seen: HashMap<Vec<i32>, ()> = HashMap::new();
        let mut queue: Vec<Vec<i32>> = Vec::new();
        for i in 0..l {
            let mut v = vec![0i32; l];
            v[i] = 1;
            seen.insert(v.clone(), ());
            queue.push(v);
        }
        let mut head = 0;
        while head < queue.len() {
            let beta = queue[head].clone();
            head += 1;
            for i in 0..l {
                let mut ai = vec![0i32; l];
                ai[i] = 1;
                let c = 2 * pair(&beta, &ai) / gram[i][i];
                let mut r = beta.clone();
                r[i] -= c as i32;
                if !seen.contains_key(&r) {
                    seen.insert(r.clone(), ());
                    queue.push(r);
                }
            }
        }
        let mut pos: Vec<Vec<i32>> = queue.into_iter().filter(|r| r.iter().all(|&c| c >= 0)).collect();
        pos.sort_by(|a, b| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|r| r.iter().map(|c| -c).collect::<Vec<i32>>()));
        let norms = roots.iter().map(|r| pair(r, r)).collect();
        let index = roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        Ok(Self { type_label: t, rank, gram, cartan, roots, norms, index })
    }

    pub fn type_label(&self) -> TypeLabel {
        self.type_label
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }
    /// `cartan[i][j] = 2 (α_i, α_j) / (α_j, α_j)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }
    pub fn root(&self, i: usize) -> &[i32] {
        &self.roots[i]
    }
    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }
    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }
    pub fn is_positive(&self, i: usize) -> bool {
        i < self.num_positive()
    }
    pub fn negative(&self, i: usize) -> usize {
        let n = self.num_positive();
        if i < n {
            i + n
        } else {
            i - n
        }
    }
    pub fn height(&self, i: usize) -> i32 {
        self.roots[i].iter().sum()
    }
    pub fn index_of(&self, r: &[i32]) -> Option<usize> {
        if self.index.is_empty() {
            return self.roots.iter().position(|x| x == r);
        }
        self.index.get(r).copied()
    }
    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut v = vec![0i32; self.rank];
        v[i] = 1;
        self.index_of(&v).expect("simple root")
    }

    pub fn inner(&self, a: &[i32], b: &[i32]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += a[i] as i64 * b[j] as i64 * self.gram[i][j];
            }
        }
        s
    }

    pub fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    fn max_norm(&self) -> i64 {
        *self.norms.iter().max().expect("nonempty")
    }

    pub fn is_long(&self, i: usize) -> bool {
        self.norms[i] == self.max_norm()
    }

    /// Index of the highest root (the last positive root).
    pub fn highest_root(&self) -> usize {
        self.num_positive() - 1
    }

    /// `2 (a, b) / (b, b)` for `b` a root.
    pub fn pairing(&self, a: &[i32], b_idx: usize) -> i64 {
        2 * self.inner(a, &self.roots[b_idx]) / self.norms[b_idx]
    }

    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let s: Vec<i32> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index_of(&s)
    }

    /// Coxeter number `#roots / rank`.
    pub fn coxeter_number(&self) -> usize {
        self.num_roots() / self.rank
    }

    pub fn structure_constants(&self) -> StructureConstants {
        StructureConstants::compute(self)
    }

    /// Restores the lookup table after deserialization.
    pub fn reindex(&mut self) {
        self.index = self.roots.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
    }
}

/// Classical root count for a simple type.
pub fn expected_root_count(t: TypeLabel, l: usize) -> usize {
    match t {
        TypeLabel::A => l * (l + 1),
        TypeLabel::B | TypeLabel::C => 2 * l * l,
        TypeLabel::D => 2 * l * (l - 1),
        TypeLabel::E => [72, 126, 240][l - 6],
        TypeLabel::F => 48,
        TypeLabel::G => 12,
    }
}

/// Signed integers `N(α, β)` with `[e_α, e_β] = N(α, β) e_{α+β}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureConstants {
    /// Keyed by root index pairs; present iff the sum is a root.
    #[serde(with = "pair_map")]
    table: HashMap<(usize, usize), i64>,
}

mod pair_map {
    use std::collections::HashMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &HashMap<(usize, usize), i64>, s: S) -> Result<S::Ok, S::Error> {
        let mut v: Vec<(usize, usize, i64)> = m.iter().map(|(&(a, b), &n)| (a, b, n)).collect();
        v.sort_unstable();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<HashMap<(usize, usize), i64>, D::Error> {
        let v: Vec<(usize, usize, i64)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(a, b, n)| ((a, b), n)).collect())
    }
}

impl StructureConstants {
    fn compute(rs: &RootSystem) -> Self {
        let np = rs.num_positive();
        // Constants for pairs of positive roots, filled in order of the sum's height.
        let mut pos: HashMap<(usize, usize), i64> = HashMap::new();

        fn lookup(rs: &RootSystem, pos: &HashMap<(usize, usize), i64>, a: usize, b: usize) -> i64 {
            let Some(c) = rs.sum_index(a, b) else {
                return 0;
            };
            let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
            match (pa, pb) {
                (true, true) => *pos.get(&(a, b)).expect("positive constant computed earlier"),
                (false, false) => -lookup(rs, pos, rs.negative(a), rs.negative(b)),
                (true, false) => {
                    if rs.is_positive(c) {
                        let v = -rs.norm(c) * lookup(rs, pos, rs.negative(b), c);
                        exact_div(v, rs.norm(a))
                    } else {
                        let v = rs.norm(c) * lookup(rs, pos, rs.negative(c), a);
                        exact_div(v, rs.norm(b))
                    }
                }
                (false, true) => -lookup(rs, pos, b, a),
            }
        }

        let string_r = |a: usize, b: usize| -> i64 {
            // largest r with b - r a a root
            let mut r = 0;
            let mut v: Vec<i32> = rs.roots[b].clone();
            loop {
                for (x, y) in v.iter_mut().zip(&rs.roots[a]) {
                    *x -= y;
                }
                if rs.index_of(&v).is_some() {
                    r += 1;
                } else {
                    return r;
                }
            }
        };

        for xi in 0..np {
            if rs.height(xi) < 2 {
                continue;
            }
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for g in 0..np {
                let d: Vec<i32> = rs.roots[xi].iter().zip(&rs.roots[g]).map(|(x, y)| x - y).collect();
                if let Some(di) = rs.index_of(&d) {
                    if rs.is_positive(di) && g < di {
                        pairs.push((g, di));
                    }
                }
            }
            let (al, be) = pairs[0];
            let n_ext = string_r(al, be) + 1;
            pos.insert((al, be), n_ext);
            pos.insert((be, al), -n_ext);
            let xi_norm = rs.norm(xi);
            for &(ga, de) in &pairs[1..] {
                let nga = rs.negative(ga);
                let nde = rs.negative(de);
                let mut acc = 0i64;
                // term: N(β,−γ) N(α,−δ) / (β−γ, β−γ)
                if let Some(bg) = rs.sum_index(be, nga) {
                    acc += lookup(rs, &pos, be, nga) * lookup(rs, &pos, al, nde) * exact_div(xi_norm * 12, rs.norm(bg));
                }
                // term: N(−γ,α) N(β,−δ) / (α−γ, α−γ)
                if let Some(ag) = rs.sum_index(al, nga) {
                    acc += lookup(rs, &pos, nga, al) * lookup(rs, &pos, be, nde) * exact_div(xi_norm * 12, rs.norm(ag));
                }
                let n = exact_div(acc, 12 * n_ext);
                pos.insert((ga, de), n);
                pos.insert((de, ga), -n);
            }
        }

        let nr = rs.num_roots();
        let mut table = HashMap::new();
        for a in 0..nr {
            for b in 0..nr {
                if rs.sum_index(a, b).is_some() {
                    table.insert((a, b), lookup(rs, &pos, a, b));
                }
            }
        }
        Self { table }
    }

    /// `N(a, b)` if `a + b` is a root.
    pub fn get(&self, a: usize, b: usize) -> Option<i64> {
        self.table.get(&(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.table.iter().map(|(&k, &v)| (k, v))
    }
}

fn exact_div(a: i64, b: i64) -> i64 {
    assert!(b != 0 && a % b == 0, "inexact division {a}/{b} in structure constants");
    a / b
}
