//! Sparse matrices over Q or Q[x]: only nonzero entries are stored.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{PolyScalar, RingTag};

/// A sparse matrix with exact entries. Rows and columns are 0-indexed;
/// matrices act on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    ring: RingTag,
    entries: BTreeMap<(usize, usize), PolyScalar>,
}

impl SparseMatrix {
    pub fn zero(ring: RingTag, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, ring, entries: BTreeMap::new() }
    }

    pub fn identity(ring: RingTag, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.entries.insert((i, i), PolyScalar::one(ring));
        }
        m
    }

    pub fn from_entries<I>(ring: RingTag, rows: usize, cols: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, PolyScalar)>,
    {
        let mut m = Self::zero(ring, rows, cols);
        for (i, j, v) in it {
            m.set(i, j, v);
        }
        m
    }

    /// Convenience constructor from a dense row-major integer grid.
    pub fn from_dense_i64(ring: RingTag, grid: &[&[i64]]) -> Self {
        let rows = grid.len();
        let cols = grid.first().map_or(0, |r| r.len());
        let mut m = Self::zero(ring, rows, cols);
        for (i, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense grid");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, PolyScalar::from_int(ring, v));
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

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> PolyScalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| PolyScalar::zero(self.ring))
    }

    pub fn set(&mut self, i: usize, j: usize, v: PolyScalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        assert_eq!(v.ring(), self.ring, "mixed coefficient rings");
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &PolyScalar) {
        let cur = self.get(i, j);
        self.set(i, j, cur.add(v));
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &PolyScalar)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.ring, self.cols, self.rows);
        for (i, j, v) in self.iter() {
            m.entries.insert((j, i), v.clone());
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        assert_eq!(self.ring, other.ring, "mixed coefficient rings");
        let mut m = self.clone();
        for (i, j, v) in other.iter() {
            m.add_to(i, j, v);
        }
        m
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        for v in m.entries.values_mut() {
            *v = v.neg();
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &PolyScalar) -> Self {
        let mut m = Self::zero(self.ring, self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m.set(i, j, v.mul(c));
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.ring, other.ring, "mixed coefficient rings");
        // Group the right factor by row for the sparse product.
        let mut by_row: BTreeMap<usize, Vec<(usize, &PolyScalar)>> = BTreeMap::new();
        for (i, j, v) in other.iter() {
            by_row.entry(i).or_default().push((j, v));
        }
        let mut m = Self::zero(self.ring, self.rows, other.cols);
        for (i, k, a) in self.iter() {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    m.add_to(i, j, &a.mul(b));
                }
            }
        }
        m
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[PolyScalar]) -> Vec<PolyScalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![PolyScalar::zero(self.ring); self.rows];
        for (i, j, a) in self.iter() {
            if !v[j].is_zero() {
                out[i] = out[i].add(&a.mul(&v[j]));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<PolyScalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[PolyScalar]) {
        assert_eq!(v.len(), self.rows);
        for (i, x) in v.iter().enumerate() {
            self.set(i, j, x.clone());
        }
    }

    /// Keep columns listed in `keep` (in order) as a new matrix.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let mut m = Self::zero(self.ring, self.rows, keep.len());
        for (new_j, &j) in keep.iter().enumerate() {
            for i in 0..self.rows {
                let v = self.get(i, j);
                if !v.is_zero() {
                    m.set(i, new_j, v);
                }
            }
        }
        m
    }

    /// Stack horizontally: [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        assert_eq!(self.ring, other.ring);
        let mut m = Self::zero(self.ring, self.rows, self.cols + other.cols);
        for (i, j, v) in self.iter() {
            m.set(i, j, v.clone());
        }
        for (i, j, v) in other.iter() {
            m.set(i, j + self.cols, v.clone());
        }
        m
    }

    /// Evaluate all entries at a rational point, returning a matrix over Q.
    pub fn eval(&self, at: &num_rational::BigRational) -> SparseMatrix {
        let mut m = SparseMatrix::zero(RingTag::Q, self.rows, self.cols);
        for (i, j, v) in self.iter() {
            m.set(i, j, PolyScalar::from_rational(RingTag::Q, v.eval(at)));
        }
        m
    }

    // Elementary operations (used by the elimination routines).

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let mut moved: Vec<(usize, usize, PolyScalar)> = Vec::new();
        let keys: Vec<(usize, usize)> = self
            .entries
            .range((a.min(b), 0)..)
            .map(|(&k, _)| k)
            .filter(|&(i, _)| i == a || i == b)
            .collect();
        for k in keys {
            let v = self.entries.remove(&k).unwrap();
            let (i, j) = k;
            let ni = if i == a { b } else { a };
            moved.push((ni, j, v));
        }
        for (i, j, v) in moved {
            self.entries.insert((i, j), v);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let keys: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|&&(_, j)| j == a || j == b)
            .cloned()
            .collect();
        let mut moved = Vec::new();
        for k in keys {
            let v = self.entries.remove(&k).unwrap();
            let (i, j) = k;
            let nj = if j == a { b } else { a };
            moved.push((i, nj, v));
        }
        for (i, j, v) in moved {
            self.entries.insert((i, j), v);
        }
    }

    /// row[target] += c * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &PolyScalar) {
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, PolyScalar)> = self
            .entries
            .range((source, 0)..=(source, self.cols.saturating_sub(1)))
            .map(|(&(_, j), v)| (j, v.clone()))
            .collect();
        for (j, v) in src {
            self.add_to(target, j, &c.mul(&v));
        }
    }

    /// col[target] += c * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &PolyScalar) {
        if c.is_zero() {
            return;
        }
        let src: Vec<(usize, PolyScalar)> = self
            .entries
            .iter()
            .filter(|(&(_, j), _)| j == source)
            .map(|(&(i, _), v)| (i, v.clone()))
            .collect();
        for (i, v) in src {
            self.add_to(i, target, &c.mul(&v));
        }
    }

    /// row[i] *= c (c must be a unit for invertible transforms)
    pub fn scale_row(&mut self, i: usize, c: &PolyScalar) {
        let keys: Vec<(usize, usize)> = self
            .entries
            .range((i, 0)..=(i, self.cols.saturating_sub(1)))
            .map(|(&k, _)| k)
            .collect();
        for k in keys {
            let v = self.entries.get(&k).unwrap().mul(c);
            if v.is_zero() {
                self.entries.remove(&k);
            } else {
                self.entries.insert(k, v);
            }
        }
    }

    /// col[j] *= c
    pub fn scale_col(&mut self, j: usize, c: &PolyScalar) {
        let keys: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter(|&&(_, jj)| jj == j)
            .cloned()
            .collect();
        for k in keys {
            let v = self.entries.get(&k).unwrap().mul(c);
            if v.is_zero() {
                self.entries.remove(&k);
            } else {
                self.entries.insert(k, v);
            }
        }
    }

    /// Entries of row i as (col, value) pairs.
    pub fn row_entries(&self, i: usize) -> Vec<(usize, PolyScalar)> {
        if self.cols == 0 {
            return vec![];
        }
        self.entries
            .range((i, 0)..=(i, self.cols - 1))
            .map(|(&(_, j), v)| (j, v.clone()))
            .collect()
    }

    /// Entries of column j as (row, value) pairs.
    pub fn col_entries(&self, j: usize) -> Vec<(usize, PolyScalar)> {
        self.entries
            .iter()
            .filter(|(&(_, jj), _)| jj == j)
            .map(|(&(i, _), v)| (i, v.clone()))
            .collect()
    }
}

impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let a = SparseMatrix::from_dense_i64(RingTag::Q, &[&[1, 2], &[3, 4]]);
        let id = SparseMatrix::identity(RingTag::Q, 2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
        let b = SparseMatrix::from_dense_i64(RingTag::Q, &[&[0, 1], &[1, 0]]);
        let ab = a.mul(&b);
        assert_eq!(ab, SparseMatrix::from_dense_i64(RingTag::Q, &[&[2, 1], &[4, 3]]));
    }

    #[test]
    fn elementary_ops_match_dense() {
        let mut a = SparseMatrix::from_dense_i64(RingTag::Qx, &[&[1, 2, 0], &[0, 3, 4]]);
        a.swap_rows(0, 1);
        assert_eq!(a, SparseMatrix::from_dense_i64(RingTag::Qx, &[&[0, 3, 4], &[1, 2, 0]]));
        a.add_row_multiple(0, 1, &PolyScalar::from_int(RingTag::Qx, 2));
        assert_eq!(a, SparseMatrix::from_dense_i64(RingTag::Qx, &[&[2, 7, 4], &[1, 2, 0]]));
        a.swap_cols(0, 2);
        assert_eq!(a, SparseMatrix::from_dense_i64(RingTag::Qx, &[&[4, 7, 2], &[0, 2, 1]]));
        a.add_col_multiple(1, 2, &PolyScalar::from_int(RingTag::Qx, -1));
        assert_eq!(a, SparseMatrix::from_dense_i64(RingTag::Qx, &[&[4, 5, 2], &[0, 1, 1]]));
    }

    #[test]
    fn transpose_involution() {
        let a = SparseMatrix::from_dense_i64(RingTag::Q, &[&[1, 0, 5], &[2, 3, 0]]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.transpose().rows(), 3);
    }
}
