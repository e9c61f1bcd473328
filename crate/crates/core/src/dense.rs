//! Square row-major dense matrices and a partial-pivoting LU.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![T::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n);
        for i in 0..n {
            a[(i, i)] = T::ONE;
        }
        a
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    /// Row-major data of length `n²`.
    pub fn from_row_major(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        let mut a = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            a[(i, i)] = v;
        }
        a
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        crate::scalar::norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn trace(&self) -> T {
        (0..self.n).fold(T::ZERO, |acc, i| acc + self[(i, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        DenseMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v.to_complex()).collect(),
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut c = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == T::ZERO {
                    continue;
                }
                let brow = other.row(k);
                let crow = &mut c.data[i * n..(i + 1) * n];
                for (cij, &bkj) in crow.iter_mut().zip(brow) {
                    *cij += a * bkj;
                }
            }
        }
        c
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        DenseMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    /// `A - s I`.
    pub fn shifted(&self, s: T) -> Self {
        let mut a = self.clone();
        for i in 0..self.n {
            a[(i, i)] -= s;
        }
        a
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.n + j]
    }
}

/// `PA = LU` with row partial pivoting, packed in place.
#[derive(Debug, Clone)]
pub struct DenseLu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
    swaps: usize,
}

impl<T: Scalar> DenseLu<T> {
    /// Fails with [`Error::NearSingular`] when a pivot falls below
    /// `rel_tol * max|a_ij|`.
    pub fn factor(mut a: DenseMatrix<T>, rel_tol: f64) -> Result<Self> {
        let n = a.order();
        let threshold = rel_tol * a.max_abs();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (p, pmag) = (k..n)
                .map(|i| (i, a[(i, k)].abs1()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmag <= threshold || pmag == 0.0 {
                return Err(Error::NearSingular {
                    shift: Complex64::new(0.0, 0.0),
                    pivot: k,
                });
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let inv = T::ONE / a[(k, k)];
            for i in k + 1..n {
                let l = a[(i, k)] * inv;
                a[(i, k)] = l;
                if l == T::ZERO {
                    continue;
                }
                let (upper, lower) = a.data.split_at_mut(i * n);
                let krow = &upper[k * n + k + 1..k * n + n];
                let irow = &mut lower[k + 1..n];
                for (aij, &akj) in irow.iter_mut().zip(krow) {
                    *aij -= l * akj;
                }
            }
        }
        Ok(DenseLu { lu: a, perm, swaps })
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.order();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    pub fn determinant(&self) -> T {
        let mut d = (0..self.lu.order()).fold(T::ONE, |acc, i| acc * self.lu[(i, i)]);
        if self.swaps % 2 == 1 {
            d = -d;
        }
        d
    }
}

/// Determinant by LU; zero when the factorization hits an exact zero pivot.
pub fn determinant<T: Scalar>(a: &DenseMatrix<T>) -> T {
    match DenseLu::factor(a.clone(), 0.0) {
        Ok(lu) => lu.determinant(),
        Err(_) => T::ZERO,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_and_determinant() {
        let a = DenseMatrix::from_row_major(3, vec![2.0, 1.0, 1.0, 4.0, -6.0, 0.0, -2.0, 7.0, 2.0])
            .unwrap();
        let lu = DenseLu::factor(a.clone(), 1e-14).unwrap();
        let x = lu.solve(&[5.0, -2.0, 9.0]);
        let r = a.matvec(&x);
        for (ri, bi) in r.iter().zip([5.0, -2.0, 9.0]) {
            assert!((ri - bi).abs() < 1e-12);
        }
        assert!((lu.determinant() - -16.0).abs() < 1e-12);
    }

    #[test]
    fn singular_is_reported() {
        let a = DenseMatrix::from_row_major(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(
            DenseLu::factor(a, 1e-13),
            Err(Error::NearSingular { pivot: 1, .. })
        ));
    }
}
