//! Dense linear algebra over a prime field `F_p`.
//!
//! Everything downstream (brackets, centralizers, fixed spaces, closures)
//! reduces to ranks and kernels of small dense matrices, so this module keeps
//! a single row-major representation and a canonical reduced-echelon
//! `Subspace`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("modulus {0} is not a prime in [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("field mismatch: p = {0} vs p = {1}")]
    FieldMismatch(u32, u32),
    #[error("matrix is singular")]
    Singular,
}

/// The prime field `F_p`, with `p` checked prime at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    p: u32,
}

impl TryFrom<u32> for PrimeField {
    type Error = LinalgError;
    fn try_from(p: u32) -> Result<Self, LinalgError> {
        PrimeField::new(p as u64)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub const MAX_MODULUS: u64 = (1 << 31) - 1;

    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p > Self::MAX_MODULUS || !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + (self.p - b) as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a as u64 % self.p as u64;
        let mut acc = 1u64 % self.p as u64;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    #[inline]
    pub fn from_i64(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for display.
    pub fn to_signed(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p)
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u32> {
        (0..n).map(|_| self.random(rng)).collect()
    }
}

/// Dense row-major matrix with entries reduced to `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

pub type Matrix = PrimeFieldMatrix;

impl PrimeFieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = field.from_i64(v);
            }
        }
        m
    }

    /// Builds a matrix from already reduced rows.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().map(|&v| v % field.p()));
        }
        Self { field, rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.data[i * cols.len() + j] = v % field.p();
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn set_i64(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = self.field.from_i64(v);
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: u32) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(self.data[k], v);
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let p = self.field.p() as u64;
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (acc_j, &b) in acc.iter_mut().zip(orow) {
                    *acc_j = (*acc_j + a * b as u64) % p;
                }
            }
            for j in 0..other.cols {
                out.data[i * other.cols + j] = acc[j] as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let p = self.field.p() as u64;
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = 0u64;
                for (&a, &b) in row.iter().zip(v) {
                    if a != 0 && b != 0 {
                        acc = (acc + a as u64 * b as u64) % p;
                    }
                }
                acc as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Self { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Self { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// Commutator `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: usize) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> u32 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn rank(&self) -> usize {
        rref(self).1
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let f = self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * c + j * other.cols + l] = f.mul(a, other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Entries flattened in row-major order, as a vector of length `rows * cols`.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_flat(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { field, rows, cols, data }
    }

    pub fn det(&self) -> u32 {
        assert!(self.is_square());
        let f = self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = 1 % f.p();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| a.get(i, c) != 0) else {
                return 0;
            };
            if piv != c {
                for j in 0..n {
                    a.data.swap(piv * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let d = a.get(c, c);
            det = f.mul(det, d);
            let inv = f.inv(d).expect("nonzero pivot");
            let pivot_row: Vec<u32> = a.row(c).to_vec();
            for i in c + 1..n {
                let coef = f.mul(a.get(i, c), inv);
                axpy(f, &mut a.data[i * n..(i + 1) * n], coef, &pivot_row);
            }
        }
        det
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1 % self.field.p();
        }
        let (r, _) = rref(&aug);
        for i in 0..n {
            for j in 0..n {
                let expect = u32::from(i == j);
                if r.get(i, j) != expect {
                    return Err(LinalgError::Singular);
                }
            }
        }
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.get(i, n + j);
            }
        }
        Ok(inv)
    }
}

fn axpy(field: PrimeField, dst: &mut [u32], c: u32, src: &[u32]) {
    // dst <- dst - c * src
    if c == 0 {
        return;
    }
    let p = field.p() as u64;
    let m = (p - c as u64) % p;
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = ((*d as u64 + m * s as u64) % p) as u32;
        }
    }
}

fn scale_in_place(field: PrimeField, v: &mut [u32], c: u32) {
    let p = field.p() as u64;
    for x in v.iter_mut() {
        *x = ((*x as u64 * c as u64) % p) as u32;
    }
}

/// Reduced row echelon form and rank.
pub fn rref(m: &PrimeFieldMatrix) -> (PrimeFieldMatrix, usize) {
    let (out, pivots) = rref_with_pivots(m);
    let rank = pivots.len();
    (out, rank)
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
pub fn rref_with_pivots(m: &PrimeFieldMatrix) -> (PrimeFieldMatrix, Vec<usize>) {
    let f = m.field;
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a.data[i * cols + c] != 0) else {
            continue;
        };
        if piv != r {
            for j in 0..cols {
                a.data.swap(piv * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.data[r * cols + c]).expect("nonzero pivot");
        scale_in_place(f, &mut a.data[r * cols..(r + 1) * cols], inv);
        let pivot_row = a.data[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i != r {
                let coef = a.data[i * cols + c];
                axpy(f, &mut a.data[i * cols..(i + 1) * cols], coef, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Right null space `{ v : m v = 0 }`.
pub fn kernel(m: &PrimeFieldMatrix) -> Subspace {
    let f = m.field;
    let cols = m.cols;
    let (r, pivots) = rref_with_pivots(m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1 % f.p();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    Subspace::span(f, cols, &basis)
}

/// Solves `m x = b`; returns one solution if the system is consistent.
pub fn solve(m: &PrimeFieldMatrix, b: &[u32]) -> Option<Vec<u32>> {
    assert_eq!(m.rows, b.len());
    let f = m.field;
    let mut aug = PrimeFieldMatrix::zeros(f, m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug.data[i * (m.cols + 1) + j] = m.get(i, j);
        }
        aug.data[i * (m.cols + 1) + m.cols] = b[i] % f.p();
    }
    let (r, pivots) = rref_with_pivots(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![0u32; m.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(row, m.cols);
    }
    Some(x)
}

/// A subspace of `F_p^n` stored by its canonical reduced row echelon basis.
///
/// Two subspaces are equal iff their stored bases are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    field: PrimeField,
    ambient_dim: usize,
    /// Rows of the RREF basis, sorted by pivot column.
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient_dim: usize) -> Self {
        Self { field, ambient_dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: PrimeField, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                let mut v = vec![0; ambient_dim];
                v[i] = 1 % field.p();
                v
            })
            .collect();
        Self { field, ambient_dim, basis, pivots: (0..ambient_dim).collect() }
    }

    pub fn span(field: PrimeField, ambient_dim: usize, vectors: &[Vec<u32>]) -> Self {
        let mut s = Self::zero(field, ambient_dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    /// Row space of a matrix.
    pub fn row_space(m: &PrimeFieldMatrix) -> Self {
        let (r, pivots) = rref_with_pivots(m);
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { field: m.field, ambient_dim: m.cols, basis, pivots }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis_matrix(&self) -> PrimeFieldMatrix {
        PrimeFieldMatrix::from_rows(self.field, self.ambient_dim, &self.basis)
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient_dim);
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.field.p()).collect();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            axpy(self.field, &mut w, c, row);
        }
        w
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns the reduced (nonzero) remainder if the
    /// dimension grew, `None` otherwise.
    pub fn insert(&mut self, v: &[u32]) -> Option<Vec<u32>> {
        let mut w = self.reduce(v);
        let pc = w.iter().position(|&x| x != 0)?;
        let inv = self.field.inv(w[pc]).expect("nonzero");
        let remainder = w.clone();
        scale_in_place(self.field, &mut w, inv);
        for row in self.basis.iter_mut() {
            let c = row[pc];
            axpy(self.field, row, c, &w);
        }
        let pos = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(pos, pc);
        self.basis.insert(pos, w);
        Some(remainder)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains_vector(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc] % self.field.p()).collect())
    }

    pub fn from_coordinates(&self, c: &[u32]) -> Vec<u32> {
        assert_eq!(c.len(), self.dim());
        let f = self.field;
        let mut v = vec![0u32; self.ambient_dim];
        for (row, &ci) in self.basis.iter().zip(c) {
            axpy(f, &mut v, f.neg(ci), row);
        }
        v
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for v in &other.basis {
            s.insert(v);
        }
        Ok(s)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        let f = self.field;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Self::zero(f, self.ambient_dim));
        }
        // Solve sum_i x_i a_i = sum_j y_j b_j.
        let mut cols = Vec::with_capacity(a + b);
        cols.extend(self.basis.iter().cloned());
        cols.extend(other.basis.iter().map(|v| v.iter().map(|&x| f.neg(x)).collect()));
        let m = PrimeFieldMatrix::from_columns(f, self.ambient_dim, &cols);
        let k = kernel(&m);
        let vecs: Vec<Vec<u32>> = k.basis.iter().map(|sol| self.from_coordinates(&sol[..a])).collect();
        Ok(Self::span(f, self.ambient_dim, &vecs))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field.p(), other.field.p()));
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::DimensionMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    /// A complement basis: vectors of `self` whose images span `self / sub`.
    pub fn complement_of(&self, sub: &Self) -> Result<Vec<Vec<u32>>, LinalgError> {
        self.check_compatible(sub)?;
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in &self.basis {
            if acc.insert(v).is_some() {
                out.push(v.clone());
            }
        }
        Ok(out)
    }
}

/// True iff every basis row of `b` lies in `a`.
pub fn subspace_contains(a: &Subspace, b: &Subspace) -> Result<bool, LinalgError> {
    a.check_compatible(b)?;
    Ok(b.basis.iter().all(|v| a.contains_vector(v)))
}

/// Smallest subspace containing `seed` and closed under the bilinear map `op`.
///
/// Saturation proceeds in rounds: each round brackets every newly added basis
/// vector with every older vector and with every other new vector, in order.
pub fn closure_under<F>(field: PrimeField, ambient_dim: usize, seed: &[Vec<u32>], op: F) -> Subspace
where
    F: Fn(&[u32], &[u32]) -> Vec<u32>,
{
    let mut space = Subspace::zero(field, ambient_dim);
    let mut old: Vec<Vec<u32>> = Vec::new();
    let mut new: Vec<Vec<u32>> = seed.iter().filter_map(|v| space.insert(v)).collect();
    while !new.is_empty() {
        let mut next = Vec::new();
        for (i, x) in new.iter().enumerate() {
            for y in old.iter().chain(new[..=i].iter()) {
                for w in [op(x, y), op(y, x)] {
                    if let Some(r) = space.insert(&w) {
                        next.push(r);
                    }
                }
            }
        }
        old.extend(new);
        new = next;
    }
    space
}

/// Coordinates relative to an arbitrary basis of a subspace, via a fixed set of
/// pivot columns on which the basis is invertible.
#[derive(Clone, Debug)]
pub struct BasisCoords {
    field: PrimeField,
    basis: Vec<Vec<u32>>,
    cols: Vec<usize>,
    inv: PrimeFieldMatrix,
}

impl BasisCoords {
    /// `basis` must be linearly independent.
    pub fn new(field: PrimeField, ambient_dim: usize, basis: Vec<Vec<u32>>) -> Result<Self, LinalgError> {
        let m = PrimeFieldMatrix::from_rows(field, ambient_dim, &basis);
        let (_, pivots) = rref_with_pivots(&m);
        if pivots.len() != basis.len() {
            return Err(LinalgError::Singular);
        }
        let k = basis.len();
        let mut sq = PrimeFieldMatrix::zeros(field, k, k);
        for (i, v) in basis.iter().enumerate() {
            for (j, &c) in pivots.iter().enumerate() {
                sq.set(i, j, v[c]);
            }
        }
        let inv = sq.inverse()?;
        Ok(Self { field, basis, cols: pivots, inv })
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coefficients `a` with `v = sum a_i basis_i`, assuming `v` lies in the span.
    pub fn coords(&self, v: &[u32]) -> Vec<u32> {
        let restricted: Vec<u32> = self.cols.iter().map(|&c| v[c]).collect();
        // a * sq = restricted  =>  a = restricted * inv
        let f = self.field;
        let k = self.basis.len();
        (0..k).map(|j| (0..k).fold(0u32, |acc, i| f.add(acc, f.mul(restricted[i], self.inv.get(i, j))))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn field_rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new((1 << 31) - 1).is_ok());
        assert!(PrimeField::new(1 << 31).is_err());
    }

    #[test]
    fn rref_examples() {
        let id = PrimeFieldMatrix::identity(f(5), 3);
        assert_eq!(rref(&id), (id.clone(), 3));
        let z = PrimeFieldMatrix::zeros(f(2), 2, 4);
        assert_eq!(rref(&z), (z.clone(), 0));
        let m = PrimeFieldMatrix::from_i64_rows(f(5), &[vec![1, 2], vec![2, 4]]);
        let expect = PrimeFieldMatrix::from_i64_rows(f(5), &[vec![1, 2], vec![0, 0]]);
        assert_eq!(rref(&m), (expect, 1));
    }

    #[test]
    fn kernel_examples() {
        let z = PrimeFieldMatrix::zeros(f(7), 3, 3);
        assert_eq!(kernel(&z).dim(), 3);
        let id = PrimeFieldMatrix::identity(f(7), 3);
        assert!(kernel(&id).is_zero());
        let m = PrimeFieldMatrix::from_i64_rows(f(3), &[vec![1, 1], vec![0, 0]]);
        let k = kernel(&m);
        assert_eq!(k, Subspace::span(f(3), 2, &[vec![1, 2]]));
    }

    #[test]
    fn contains_examples() {
        let fl = f(5);
        let full = Subspace::full(fl, 3);
        let line = Subspace::span(fl, 3, &[vec![1, 1, 0]]);
        assert!(subspace_contains(&full, &line).unwrap());
        assert!(!subspace_contains(&Subspace::zero(fl, 3), &line).unwrap());
        let plane = Subspace::span(fl, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        assert!(subspace_contains(&plane, &line).unwrap());
        assert!(subspace_contains(&plane, &Subspace::zero(fl, 2)).is_err());
    }

    fn gl2_bracket(fl: PrimeField) -> impl Fn(&[u32], &[u32]) -> Vec<u32> {
        move |x, y| {
            let a = PrimeFieldMatrix::from_flat(fl, 2, 2, x.to_vec());
            let b = PrimeFieldMatrix::from_flat(fl, 2, 2, y.to_vec());
            a.commutator(&b).flatten()
        }
    }

    #[test]
    fn closure_examples() {
        let fl = f(5);
        assert!(closure_under(fl, 4, &[], gl2_bracket(fl)).is_zero());
        // e, f in gl_2 generate sl_2.
        let s = closure_under(fl, 4, &[vec![0, 1, 0, 0], vec![0, 0, 1, 0]], gl2_bracket(fl));
        assert_eq!(s.dim(), 3);
        let d = closure_under(fl, 4, &[vec![1, 0, 0, 3]], gl2_bracket(fl));
        assert_eq!(d.dim(), 1);
    }

    #[test]
    fn intersection_and_coords() {
        let fl = f(7);
        let a = Subspace::span(fl, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(fl, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let c = a.intersect(&b).unwrap();
        assert_eq!(c, Subspace::span(fl, 3, &[vec![0, 1, 0]]));
        let bc = BasisCoords::new(fl, 3, vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(bc.coords(&[2, 5, 3]), vec![2, 3]);
    }

    #[test]
    fn inverse_roundtrip() {
        let fl = f(11);
        let m = PrimeFieldMatrix::from_i64_rows(fl, &[vec![2, 1], vec![7, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), PrimeFieldMatrix::identity(fl, 2));
        let s = PrimeFieldMatrix::from_i64_rows(fl, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(s.inverse(), Err(LinalgError::Singular));
        assert_eq!(m.det(), fl.from_i64(-1));
        assert_eq!(s.det(), 0);
        let sw = PrimeFieldMatrix::from_i64_rows(fl, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(sw.det(), fl.from_i64(-1));
    }

    fn arb_matrix() -> impl Strategy<Value = PrimeFieldMatrix> {
        (prop::sample::select(vec![2u64, 3, 5, 101]), 1usize..7, 1usize..7).prop_flat_map(|(p, r, c)| {
            prop::collection::vec(0u32..(p as u32), r * c)
                .prop_map(move |d| PrimeFieldMatrix::from_flat(PrimeField::new(p).unwrap(), r, c, d))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let (r, k) = rref(&m);
            let (rr, kk) = rref(&r);
            prop_assert_eq!(r, rr);
            prop_assert_eq!(k, kk);
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(kernel(&m).dim() + m.rank(), m.cols());
            for v in kernel(&m).basis() {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn canonical_form_ignores_order_and_scaling(m in arb_matrix(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let fl = m.field();
            let mut rows = m.row_vectors();
            rows.shuffle(&mut rng);
            let rows: Vec<Vec<u32>> = rows.into_iter().map(|r| {
                let c = 1 + rng.gen_range(0..fl.p() - 1);
                r.iter().map(|&x| fl.mul(x, c)).collect()
            }).collect();
            let a = Subspace::row_space(&m);
            let b = Subspace::span(fl, m.cols(), &rows);
            prop_assert_eq!(a, b);
        }

        #[test]
        fn closure_is_monotone_and_saturated(seed in any::<u64>(), k in 0usize..3) {
            use rand::SeedableRng;
            let fl = PrimeField::new(3).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let gens: Vec<Vec<u32>> = (0..k + 1).map(|_| fl.random_vector(&mut rng, 4)).collect();
            let small = closure_under(fl, 4, &gens[..k], gl2_bracket(fl));
            let big = closure_under(fl, 4, &gens, gl2_bracket(fl));
            prop_assert!(subspace_contains(&big, &small).unwrap());
            let again = closure_under(fl, 4, big.basis(), gl2_bracket(fl));
            prop_assert_eq!(again, big);
        }
    }
}
