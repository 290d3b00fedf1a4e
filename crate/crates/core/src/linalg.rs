//! Exact linear algebra over the Gaussian rationals.
//!
//! Dense routines serve the seven-dimensional geometry; the sparse echelon
//! basis carries the submodule fixpoints on the tensor spaces, where vectors
//! stay supported on a handful of weight coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Gq;

pub type DenseMatrix = Vec<Vec<Gq>>;

/// Reduced row echelon form of `rows` (each of length `ncols`).
///
/// Returns the nonzero reduced rows and their pivot columns. Pivots are
/// normalised to one, so equal row spaces give identical output.
pub fn rref(rows: &[Vec<Gq>], ncols: usize) -> (DenseMatrix, Vec<usize>) {
    let mut m: DenseMatrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Gq>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}` where `A` is given by its rows.
pub fn nullspace(rows: &[Vec<Gq>], ncols: usize) -> DenseMatrix {
    let (r, pivots) = rref(rows, ncols);
    kernel_from_rref(&r, &pivots, ncols)
}

fn kernel_from_rref(r: &[Vec<Gq>], pivots: &[usize], ncols: usize) -> DenseMatrix {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Gq::zero(); ncols];
        v[free] = Gq::one();
        for (row, &p) in r.iter().zip(pivots) {
            if !row[free].is_zero() {
                v[p] = -&row[free];
            }
        }
        basis.push(v);
    }
    basis
}

pub fn determinant(m: &[Vec<Gq>]) -> Gq {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Gq::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Gq::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= &t;
            }
        }
    }
    det
}

pub fn mat_mul(a: &[Vec<Gq>], b: &[Vec<Gq>]) -> DenseMatrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![Gq::zero(); cols];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(&b[k]) {
                    if !y.is_zero() {
                        *o += &(x * y);
                    }
                }
            }
            out
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<Gq>], v: &[Gq]) -> Vec<Gq> {
    a.iter()
        .map(|row| {
            let mut s = Gq::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    s += &(x * y);
                }
            }
            s
        })
        .collect()
}

pub fn identity(n: usize) -> DenseMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Gq::one() } else { Gq::zero() }).collect())
        .collect()
}

pub fn transpose(a: &[Vec<Gq>]) -> DenseMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &[Vec<Gq>]) -> Option<DenseMatrix> {
    let n = a.len();
    let aug: DenseMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Gq::one() } else { Gq::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coordinates of `v` in the (independent) family `basis`, if `v` lies in its span.
pub fn coordinates(basis: &[Vec<Gq>], v: &[Gq]) -> Option<Vec<Gq>> {
    let n = v.len();
    let k = basis.len();
    // Columns are basis vectors, last column is v.
    let rows: DenseMatrix = (0..n)
        .map(|i| {
            let mut r: Vec<Gq> = basis.iter().map(|b| b[i].clone()).collect();
            r.push(v[i].clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Gq::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

pub fn is_zero_vec(v: &[Gq]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Sparse vector as sorted `(index, value)` pairs with nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: Vec<(usize, Gq)>,
}

impl SparseVec {
    pub fn from_dense(v: &[Gq]) -> Self {
        Self {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn from_map(m: BTreeMap<usize, Gq>) -> Self {
        Self { entries: m.into_iter().filter(|(_, x)| !x.is_zero()).collect() }
    }

    pub fn to_dense(&self, n: usize) -> Vec<Gq> {
        let mut v = vec![Gq::zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Gq> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn dot(&self, dense: &[Gq]) -> Gq {
        let mut s = Gq::zero();
        for (i, x) in &self.entries {
            if !dense[*i].is_zero() {
                s += &(x * &dense[*i]);
            }
        }
        s
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }
}

/// Square sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub n: usize,
    pub rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, rows: vec![SparseVec::default(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            rows: (0..n).map(|i| SparseVec { entries: vec![(i, Gq::one())] }).collect(),
        }
    }

    pub fn from_dense(a: &[Vec<Gq>]) -> Self {
        Self { n: a.len(), rows: a.iter().map(|r| SparseVec::from_dense(r)).collect() }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        self.rows.iter().map(|r| r.to_dense(self.n)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.entries.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Gq {
        self.rows[i].get(j).cloned().unwrap_or_else(Gq::zero)
    }

    /// `self · v` for a dense column vector.
    pub fn apply(&self, v: &[Gq]) -> Vec<Gq> {
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    /// Row vector times matrix: `φ ↦ φ · self`.
    pub fn left_apply(&self, phi: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Gq> = BTreeMap::new();
        for (i, c) in &phi.entries {
            for (j, x) in &self.rows[*i].entries {
                *acc.entry(*j).or_insert_with(Gq::zero) += &(c * x);
            }
        }
        SparseVec::from_map(acc)
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        SparseMatrix { n: self.n, rows: self.rows.iter().map(|r| other.left_apply(r)).collect() }
    }

    pub fn add_scaled(&self, other: &SparseMatrix, c: &Gq) -> SparseMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, Gq> = a.entries.iter().cloned().collect();
                for (j, x) in &b.entries {
                    *acc.entry(*j).or_insert_with(Gq::zero) += &(x * c);
                }
                SparseVec::from_map(acc)
            })
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn scale(&self, c: &Gq) -> SparseMatrix {
        SparseMatrix { n: self.n, rows: self.rows.iter().map(|r| r.scale(c)).collect() }
    }

    pub fn commutator(&self, other: &SparseMatrix) -> SparseMatrix {
        self.mul(other).add_scaled(&other.mul(self), &-Gq::one())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(SparseVec::is_zero)
    }

    pub fn trace(&self) -> Gq {
        let mut t = Gq::zero();
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(x) = r.get(i) {
                t += x;
            }
        }
        t
    }
}

/// Incrementally built row space with sparse rows in echelon form.
///
/// Every stored row has leading coefficient one at its pivot column, and no
/// two rows share a pivot. Rows are not back-reduced until [`Self::reduced`].
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    pub ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl EchelonBasis {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` modulo the current row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Gq> = v.entries.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = acc.range(cursor..).find(|(c, _)| self.rows.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((c, coef)) = next else { break };
            let row = &self.rows[&c];
            for (j, x) in &row.entries {
                let e = acc.entry(*j).or_insert_with(Gq::zero);
                *e -= &(&coef * x);
                if e.is_zero() {
                    acc.remove(j);
                }
            }
            cursor = c + 1;
        }
        SparseVec::from_map(acc)
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.entries.first().cloned() else {
            return false;
        };
        let inv = lead.inv();
        self.rows.insert(pivot, r.scale(&inv));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Fully reduced rows (each pivot column is zero in every other row).
    pub fn reduced(&self) -> Vec<(usize, SparseVec)> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut acc: BTreeMap<usize, Gq> = row.entries.iter().cloned().collect();
            let cols: Vec<usize> = acc.keys().copied().filter(|c| *c > p && done.contains_key(c)).collect();
            for c in cols {
                let Some(coef) = acc.get(&c).cloned() else { continue };
                for (j, x) in &done[&c].entries {
                    let e = acc.entry(*j).or_insert_with(Gq::zero);
                    *e -= &(&coef * x);
                    if e.is_zero() {
                        acc.remove(j);
                    }
                }
            }
            done.insert(p, SparseVec::from_map(acc));
        }
        done.into_iter().collect()
    }

    /// Basis of the common kernel of the stored rows (as linear functionals).
    pub fn kernel(&self) -> Vec<SparseVec> {
        let reduced = self.reduced();
        let mut is_pivot = vec![false; self.ncols];
        for (p, _) in &reduced {
            is_pivot[*p] = true;
        }
        // column -> list of (pivot row, coefficient)
        let mut by_col: BTreeMap<usize, Vec<(usize, Gq)>> = BTreeMap::new();
        for (p, row) in &reduced {
            for (j, x) in &row.entries {
                if *j != *p {
                    by_col.entry(*j).or_default().push((*p, x.clone()));
                }
            }
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut m: BTreeMap<usize, Gq> = BTreeMap::new();
                m.insert(free, Gq::one());
                if let Some(list) = by_col.get(&free) {
                    for (p, x) in list {
                        m.insert(*p, -x);
                    }
                }
                SparseVec::from_map(m)
            })
            .collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }
}
