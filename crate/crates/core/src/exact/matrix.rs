use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{format_scalar, int, Scalar};
use crate::error::{Error, Result};

type Row = Vec<(usize, Scalar)>;

/// Exact rational matrix.
///
/// Rows are stored sparsely as column-sorted `(column, value)` lists without
/// zeros, so derived equality is entry-wise equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Row>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

fn axpy(a: &[(usize, Scalar)], f: &Scalar, b: &[(usize, Scalar)]) -> Row {
    // a - f * b
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn merge_sorted(mut items: Vec<(usize, Scalar)>) -> Row {
    items.sort_by_key(|e| e.0);
    let mut out: Row = Vec::with_capacity(items.len());
    for (c, v) in items {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => {
                if let Some(last) = out.last() {
                    if last.1.is_zero() {
                        out.pop();
                    }
                }
                out.push((c, v));
            }
        }
    }
    if out.last().is_some_and(|l| l.1.is_zero()) {
        out.pop();
    }
    out
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![Scalar::one(); n])
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.iter().enumerate() {
            if !v.is_zero() {
                m.data[i].push((i, v.clone()));
            }
        }
        m
    }

    /// Builds a matrix from dense rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            m.data[i] = row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense = rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect();
        Self::from_rows(dense).expect("ragged integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v.clone()));
                }
            }
        }
        m
    }

    /// Builds a matrix from sparse columns given as `(row, value)` lists.
    pub(crate) fn from_sparse_columns(rows: usize, columns: Vec<Vec<(usize, Scalar)>>) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                if !v.is_zero() {
                    m.data[i].push((j, v));
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry `(i, j)`, or `None` when out of bounds.
    pub fn get(&self, i: usize, j: usize) -> Option<Scalar> {
        if i >= self.rows || j >= self.cols {
            return None;
        }
        let row = &self.data[i];
        Some(match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => row[k].1.clone(),
            Err(_) => Scalar::zero(),
        })
    }

    /// Entry `(i, j)`; panics when out of bounds.
    pub fn at(&self, i: usize, j: usize) -> Scalar {
        self.get(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside {}x{}", self.rows, self.cols))
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) outside {}x{}", self.rows, self.cols);
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    /// Nonzero entries of row `i` as sorted `(column, value)` pairs.
    pub fn row_entries(&self, i: usize) -> &[(usize, Scalar)] {
        &self.data[i]
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.cols];
        for (j, v) in &self.data[i] {
            out[*j] = v.clone();
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.data.iter().enumerate().all(|(i, r)| r.iter().all(|(j, _)| *j == i))
    }

    pub fn diagonal_entries(&self) -> Vec<Scalar> {
        (0..self.rows.min(self.cols)).map(|i| self.at(i, i)).collect()
    }

    pub fn trace(&self) -> Scalar {
        self.diagonal_entries().into_iter().fold(Scalar::zero(), |a, b| a + b)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                t.data[*j].push((i, v.clone()));
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect())
            .collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let minus_one = -Scalar::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &minus_one, b)).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let one = Scalar::one();
        let data = self.data.iter().zip(&other.data).map(|(a, b)| axpy(a, &one, b)).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut items = Vec::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        items.push((*j, a * b));
                    }
                }
                merge_sorted(items)
            })
            .collect();
        Ok(ExactMatrix { rows: self.rows, cols: other.cols, data })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square(), "power of a non-square matrix");
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|row| row.iter().fold(Scalar::zero(), |acc, (j, a)| acc + a * &v[*j]))
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut r = a.clone();
                r.extend(b.iter().map(|(j, v)| (j + self.cols, v.clone())));
                r
            })
            .collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Block diagonal matrix with the given square or rectangular blocks.
    pub fn block_diagonal(blocks: &[ExactMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for (i, row) in b.data.iter().enumerate() {
                m.data[r0 + i] = row.iter().map(|(j, v)| (c0 + j, v.clone())).collect();
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rref(&self) -> Rref {
        let (rows, pivots) = rref_rows(self.cols, self.data.clone());
        let mut data = rows;
        data.resize(self.rows, Vec::new());
        Rref { matrix: ExactMatrix { rows: self.rows, cols: self.cols, data }, pivots }
    }

    pub fn rank(&self) -> usize {
        rref_rows(self.cols, self.data.clone()).1.len()
    }

    /// Canonical nullspace basis: one vector per free column, in ascending
    /// column order, with that free variable set to one.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let (rows, pivots) = rref_rows(self.cols, self.data.clone());
        nullspace_from_rref(self.cols, &rows, &pivots)
    }

    /// Particular solution of `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let mut aug = self.data.clone();
        for (row, v) in aug.iter_mut().zip(b) {
            if !v.is_zero() {
                row.push((self.cols, v.clone()));
            }
        }
        let (rows, pivots) = rref_rows(self.cols + 1, aug);
        if pivots.last() == Some(&self.cols) {
            return Err(Error::Inconsistent);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in rows.iter().zip(&pivots) {
            if let Some((c, v)) = row.last() {
                if *c == self.cols {
                    x[p] = v.clone();
                }
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).ok()?;
        let (rows, pivots) = rref_rows(2 * n, aug.data);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = rows
            .into_iter()
            .take(n)
            .map(|r| r.into_iter().filter(|(j, _)| *j >= n).map(|(j, v)| (j - n, v)).collect())
            .collect();
        Some(ExactMatrix { rows: n, cols: n, data })
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }
}

/// Reduces sparse rows to RREF; returns the nonzero rows ordered by pivot.
fn rref_rows(cols: usize, rows: Vec<Row>) -> (Vec<Row>, Vec<usize>) {
    let mut buckets: Vec<Vec<Row>> = vec![Vec::new(); cols];
    for r in rows {
        if let Some(&(c, _)) = r.first() {
            buckets[c].push(r);
        }
    }
    let mut echelon: Vec<Row> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        if bucket.is_empty() {
            continue;
        }
        let best = (0..bucket.len()).min_by_key(|&k| bucket[k].len()).unwrap_or(0);
        let mut pivot = bucket.swap_remove(best);
        let lead = pivot[0].1.clone();
        if !lead.is_one() {
            for e in pivot.iter_mut() {
                e.1 /= &lead;
            }
        }
        for r in bucket {
            let f = r[0].1.clone();
            let reduced = axpy(&r, &f, &pivot);
            if let Some(&(c2, _)) = reduced.first() {
                buckets[c2].push(reduced);
            }
        }
        echelon.push(pivot);
        pivots.push(c);
    }
    let mut pivot_pos = vec![usize::MAX; cols];
    for (k, &c) in pivots.iter().enumerate() {
        pivot_pos[c] = k;
    }
    for k in (0..echelon.len()).rev() {
        let targets: Vec<(usize, Scalar)> = echelon[k][1..]
            .iter()
            .filter(|(c, _)| pivot_pos[*c] != usize::MAX)
            .cloned()
            .collect();
        for (c, f) in targets {
            let other = pivot_pos[c];
            let reduced = axpy(&echelon[k], &f, &echelon[other]);
            echelon[k] = reduced;
        }
    }
    (echelon, pivots)
}

fn nullspace_from_rref(cols: usize, rows: &[Row], pivots: &[usize]) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut free_index = vec![usize::MAX; cols];
    let mut basis = Vec::new();
    for c in 0..cols {
        if !is_pivot[c] {
            free_index[c] = basis.len();
            let mut v = vec![Scalar::zero(); cols];
            v[c] = Scalar::one();
            basis.push(v);
        }
    }
    for (row, &p) in rows.iter().zip(pivots) {
        for (c, v) in &row[1..] {
            basis[free_index[*c]][p] = -v.clone();
        }
    }
    basis
}

impl<'a> Add<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl<'a> Sub<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("matrix subtraction shape mismatch")
    }
}

impl<'a> Mul<&'a ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            self.to_dense().iter().map(|r| r.iter().map(format_scalar).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[{}]", line.join(" "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}
