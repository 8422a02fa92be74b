//! Dense linear algebra over Z_p.

use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Row-major matrix of residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<u8>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// In-place reduced row echelon form restricted to the first `pivot_cols`
    /// columns. Returns the pivot column of each pivot row.
    fn rref(&mut self, pivot_cols: usize, field: &FieldSpec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.inverse(self.get(r, c)).expect("nonzero pivot");
            for j in 0..self.cols {
                let v = field.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                let factor = self.get(i, c);
                if i != r && factor != 0 {
                    for j in 0..self.cols {
                        let v = field.sub(self.get(i, j), field.mul(factor, self.get(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut m = self.clone();
        m.rref(self.cols, field).len()
    }

    /// Solves `self * X = rhs` for square, invertible `self`; `rhs` has one
    /// column per right-hand side.
    pub fn solve(&self, rhs: &Matrix, field: &FieldSpec) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::invalid(format!(
                "system matrix is {}x{}, not square",
                self.rows, self.cols
            )));
        }
        if rhs.rows != self.rows {
            return Err(Error::invalid(
                "right-hand side has the wrong number of rows",
            ));
        }
        let n = self.cols;
        let k = rhs.cols;
        let mut aug = Matrix::zeros(n, n + k);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            for c in 0..k {
                aug.set(r, n + c, rhs.get(r, c));
            }
        }
        let pivots = aug.rref(n, field);
        if pivots.len() < n {
            return Err(Error::SingularSystem(format!(
                "matrix has rank {} < {n}",
                pivots.len()
            )));
        }
        let mut out = Matrix::zeros(n, k);
        for r in 0..n {
            for c in 0..k {
                out.set(r, c, aug.get(r, n + c));
            }
        }
        Ok(out)
    }
}

/// Incrementally maintained echelon basis that reports, for each rejected
/// vector, its coordinates in terms of the accepted vectors.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    dim: usize,
    // (pivot column, reduced row, combination of accepted inputs giving that row)
    rows: Vec<(usize, Vec<u8>, Vec<u8>)>,
    accepted: usize,
}

impl IncrementalBasis {
    pub fn new(dim: usize) -> Self {
        IncrementalBasis {
            dim,
            rows: Vec::new(),
            accepted: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.accepted
    }

    pub fn is_empty(&self) -> bool {
        self.accepted == 0
    }

    /// Offers a vector. Returns `None` when it is independent (it is then
    /// accepted as input number `len()`), or `Some(c)` with
    /// `v = Σ c[i] * accepted[i]` when it is dependent.
    pub fn offer(&mut self, v: &[u8], field: &FieldSpec) -> Option<Vec<u8>> {
        debug_assert_eq!(v.len(), self.dim);
        let mut work = v.to_vec();
        // combination expressing (v - work) in accepted inputs
        let mut combo = vec![0u8; self.accepted + 1];
        for (pc, row, row_combo) in &self.rows {
            let f = work[*pc];
            if f != 0 {
                for j in 0..self.dim {
                    work[j] = field.sub(work[j], field.mul(f, row[j]));
                }
                for (i, &rc) in row_combo.iter().enumerate() {
                    combo[i] = field.add(combo[i], field.mul(f, rc));
                }
            }
        }
        match work.iter().position(|&x| x != 0) {
            None => {
                combo.truncate(self.accepted);
                Some(combo)
            }
            Some(pc) => {
                // new row = (v - Σ combo·accepted) / work[pc]
                let inv = field.inverse(work[pc]).expect("nonzero");
                let row: Vec<u8> = work.iter().map(|&x| field.mul(x, inv)).collect();
                let mut row_combo: Vec<u8> = combo
                    .iter()
                    .map(|&c| field.mul(field.neg(c), inv))
                    .collect();
                row_combo[self.accepted] = inv;
                self.rows.push((pc, row, row_combo));
                self.accepted += 1;
                None
            }
        }
    }
}
