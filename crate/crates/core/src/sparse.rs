//! Compressed-row sparse matrices assembled from triplets.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Structural hint carried alongside a matrix. `Symmetric` means
/// `A = Aᴴ` (symmetric for real, Hermitian for complex entries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Symmetric,
    General,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    order: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
    structure: Structure,
}

pub type SparseOperator = CsrMatrix<f64>;
pub type ComplexSparseOperator = CsrMatrix<Complex64>;

/// Collects `(row, col, value)` entries. Exact zeros are dropped.
#[derive(Debug, Clone)]
pub struct TripletBuilder<T> {
    order: usize,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> TripletBuilder<T> {
    pub fn new(order: usize) -> Self {
        TripletBuilder {
            order,
            entries: Vec::new(),
        }
    }

    pub fn with_capacity(order: usize, cap: usize) -> Self {
        TripletBuilder {
            order,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: T) {
        if value != T::ZERO {
            self.entries.push((row, col, value));
        }
    }

    pub fn build(mut self, structure: Structure) -> Result<CsrMatrix<T>> {
        let n = self.order;
        for &(r, c, _) in &self.entries {
            let bad = if r >= n { r } else { c };
            if r >= n || c >= n {
                return Err(Error::IndexOutOfRange { index: bad, len: n });
            }
        }
        self.entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in self.entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEntry {
                    row: w[0].0,
                    col: w[0].1,
                });
            }
        }
        let mut row_ptr = vec![0usize; n + 1];
        for &(r, _, _) in &self.entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx = self.entries.iter().map(|e| e.1).collect();
        let values = self.entries.iter().map(|e| e.2).collect();
        Ok(CsrMatrix {
            order: n,
            row_ptr,
            col_idx,
            values,
            structure,
        })
    }
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(order: usize, structure: Structure) -> Self {
        CsrMatrix {
            order,
            row_ptr: vec![0; order + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
            structure,
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diagonal(&vec![T::ONE; order])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut b = TripletBuilder::with_capacity(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            b.push(i, i, d);
        }
        b.build(Structure::Symmetric)
            .expect("diagonal entries are in range and unique")
    }

    /// Keeps entries with `|a_ij| > 0`.
    pub fn from_dense(a: &DenseMatrix<T>, structure: Structure) -> Self {
        let n = a.order();
        let mut b = TripletBuilder::new(n);
        for i in 0..n {
            for j in 0..n {
                b.push(i, j, a[(i, j)]);
            }
        }
        b.build(structure).expect("dense indices are in range and unique")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn structure(&self) -> Structure {
        self.structure
    }

    pub fn with_structure(mut self, structure: Structure) -> Self {
        self.structure = structure;
        self
    }

    /// Entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.order).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => T::ZERO,
        }
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::scalar::norm2(&self.values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    /// Lower and upper bandwidth `(kl, ku)` of the stored pattern.
    pub fn bandwidths(&self) -> (usize, usize) {
        self.triplets().fold((0, 0), |(kl, ku), (r, c, _)| {
            if r > c {
                (kl.max(r - c), ku)
            } else {
                (kl, ku.max(c - r))
            }
        })
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.order);
        assert_eq!(y.len(), self.order);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = T::ZERO;
            for (c, v) in self.row(r) {
                acc += v * x[c];
            }
            *yr = acc;
        }
    }

    /// `y = A x` for a complex vector, whatever the entry field.
    pub fn matvec_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.order);
        assert_eq!(y.len(), self.order);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in self.row(r) {
                acc += v.to_complex() * x[c];
            }
            *yr = acc;
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut b = TripletBuilder::with_capacity(self.order, self.nnz());
        for (r, c, v) in self.triplets() {
            b.push(r, c, v * s);
        }
        b.build(self.structure).expect("pattern inherited from a valid matrix")
    }

    /// `self + other`; the result is symmetric only if both inputs are.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        let mut b = TripletBuilder::with_capacity(self.order, self.nnz() + other.nnz());
        for r in 0..self.order {
            let mut a = self.row(r).peekable();
            let mut o = other.row(r).peekable();
            loop {
                match (a.peek().copied(), o.peek().copied()) {
                    (Some((ca, va)), Some((co, vo))) => {
                        if ca == co {
                            b.push(r, ca, va + vo);
                            a.next();
                            o.next();
                        } else if ca < co {
                            b.push(r, ca, va);
                            a.next();
                        } else {
                            b.push(r, co, vo);
                            o.next();
                        }
                    }
                    (Some((ca, va)), None) => {
                        b.push(r, ca, va);
                        a.next();
                    }
                    (None, Some((co, vo))) => {
                        b.push(r, co, vo);
                        o.next();
                    }
                    (None, None) => break,
                }
            }
        }
        let structure = match (self.structure, other.structure) {
            (Structure::Symmetric, Structure::Symmetric) => Structure::Symmetric,
            _ => Structure::General,
        };
        b.build(structure)
    }

    pub fn to_complex(&self) -> ComplexSparseOperator {
        CsrMatrix {
            order: self.order,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|v| v.to_complex()).collect(),
            structure: self.structure,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut a = DenseMatrix::zeros(self.order);
        for (r, c, v) in self.triplets() {
            a[(r, c)] = v;
        }
        a
    }

    /// Largest `|a_ij - conj(a_ji)|` over the stored pattern.
    pub fn hermitian_defect(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).modulus())
            .fold(0.0, f64::max)
    }
}
