//! Band storage and LU with partial pivoting (the unblocked `gbtf2`
//! scheme: `kl` extra superdiagonals are reserved for pivoting fill-in).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column-major band storage. Entry `(i, j)` with `j - ku <= i <= j + kl`
/// lives at row `kl + ku + i - j` of column `j`.
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            ldab,
            ab: vec![T::ZERO; ldab * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kl + self.ku + i - j
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i + self.ku >= j && j + self.kl >= i
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if self.in_band(i, j) {
            self.ab[self.slot(i, j)]
        } else {
            T::ZERO
        }
    }

    /// Panics if `(i, j)` is outside the declared band.
    pub fn add_to(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.ab[s] += v;
    }

    pub fn max_abs(&self) -> f64 {
        self.ab.iter().fold(0.0, |m, v| m.max(v.modulus()))
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::ZERO; self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for (i, yi) in y.iter_mut().enumerate().take(hi + 1).skip(lo) {
                *yi += self.ab[self.slot(i, j)] * x[j];
            }
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct BandLu<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<T>,
    ipiv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    /// Factors in place. A pivot with `|p| < rel_tol * max|a_ij|` (taken
    /// over the original band) aborts with [`Error::NearSingular`].
    pub fn factor(a: BandMatrix<T>, rel_tol: f64) -> Result<Self> {
        let threshold = rel_tol * a.max_abs();
        let BandMatrix {
            n,
            kl,
            ku,
            ldab,
            mut ab,
        } = a;
        let kv = kl + ku;
        let idx = |i: usize, j: usize| j * ldab + kv + i - j;
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = -1.0;
            for p in 0..=km {
                let m = ab[idx(j + p, j)].abs1();
                if m > best {
                    best = m;
                    jp = p;
                }
            }
            ipiv[j] = j + jp;
            let pivot_mag = ab[idx(j + jp, j)].modulus();
            if pivot_mag == 0.0 || pivot_mag < threshold {
                return Err(Error::NearSingular {
                    shift: Complex64::new(0.0, 0.0),
                    pivot: j,
                });
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    ab.swap(idx(j + jp, c), idx(j, c));
                }
            }
            let inv = T::ONE / ab[idx(j, j)];
            for r in j + 1..=j + km {
                let s = idx(r, j);
                ab[s] *= inv;
            }
            for c in j + 1..=ju {
                let ujc = ab[idx(j, c)];
                if ujc == T::ZERO {
                    continue;
                }
                // Rows j+1..=j+km of column c are contiguous in storage.
                let col_base = idx(j + 1, c);
                let l_base = idx(j + 1, j);
                for p in 0..km {
                    let l = ab[l_base + p];
                    ab[col_base + p] -= l * ujc;
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            ku,
            ldab,
            ab,
            ipiv,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> T {
        self.ab[j * self.ldab + self.kl + self.ku + i - j]
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        let kv = self.kl + self.ku;
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(p, j);
            }
            let bj = b[j];
            if bj != T::ZERO {
                let km = self.kl.min(n - 1 - j);
                for r in j + 1..=j + km {
                    b[r] -= self.at(r, j) * bj;
                }
            }
        }
        for j in (0..n).rev() {
            let xj = b[j] / self.at(j, j);
            b[j] = xj;
            if xj != T::ZERO {
                for i in j.saturating_sub(kv)..j {
                    b[i] -= self.at(i, j) * xj;
                }
            }
        }
    }

    /// Solves `Aᴴ x = b` in place with the same factors.
    pub fn solve_adjoint_in_place(&self, b: &mut [T]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        let kv = self.kl + self.ku;
        // Uᴴ y = b
        for j in 0..n {
            let mut acc = b[j];
            for i in j.saturating_sub(kv)..j {
                acc -= self.at(i, j).conj() * b[i];
            }
            b[j] = acc / self.at(j, j).conj();
        }
        // Lᴴ with the row interchanges undone in reverse.
        for j in (0..n).rev() {
            let km = self.kl.min(n - 1 - j);
            let mut acc = b[j];
            for r in j + 1..=j + km {
                acc -= self.at(r, j).conj() * b[r];
            }
            b[j] = acc;
            let p = self.ipiv[j];
            if p != j {
                b.swap(p, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::DenseMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_band(n: usize, kl: usize, ku: usize, seed: u64) -> (BandMatrix<Complex64>, DenseMatrix<Complex64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if band.in_band(i, j) {
                    // Weak diagonal so pivoting actually happens.
                    let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let v = if i == j { v * 0.01 } else { v };
                    band.add_to(i, j, v);
                    dense[(i, j)] = v;
                }
            }
        }
        (band, dense)
    }

    #[test]
    fn solve_matches_dense_product() {
        for &(n, kl, ku) in &[(1, 0, 0), (7, 2, 1), (20, 3, 5), (15, 14, 14)] {
            let (band, dense) = random_band(n, kl, ku, 7 + n as u64);
            let lu = BandLu::factor(band.clone(), 1e-14).unwrap();
            let x: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, 1.0)).collect();
            let mut b = dense.matvec(&x);
            assert_eq!(b, band.matvec(&x));
            lu.solve_in_place(&mut b);
            for (got, want) in b.iter().zip(&x) {
                assert!((got - want).norm() < 1e-9 * (1.0 + want.norm()), "{n} {kl} {ku}");
            }
            let mut c = dense.conj_transpose().matvec(&x);
            lu.solve_adjoint_in_place(&mut c);
            for (got, want) in c.iter().zip(&x) {
                assert!((got - want).norm() < 1e-9 * (1.0 + want.norm()), "adjoint {n} {kl} {ku}");
            }
        }
    }

    #[test]
    fn tridiagonal_real() {
        let n = 5;
        let mut band = BandMatrix::<f64>::zeros(n, 1, 1);
        for i in 0..n {
            band.add_to(i, i, 2.0);
            if i + 1 < n {
                band.add_to(i, i + 1, -1.0);
                band.add_to(i + 1, i, -1.0);
            }
        }
        let lu = BandLu::factor(band, 1e-13).unwrap();
        let mut b = vec![1.0; n];
        lu.solve_in_place(&mut b);
        // -u'' = 1 discrete solution: u_i = (i+1)(n-i)/2
        for (i, v) in b.iter().enumerate() {
            let want = ((i + 1) * (n - i)) as f64 / 2.0;
            assert!((v - want).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_band_detected() {
        let mut band = BandMatrix::<f64>::zeros(3, 1, 1);
        band.add_to(0, 0, 1.0);
        band.add_to(1, 1, 1.0);
        assert!(matches!(
            BandLu::factor(band, 1e-13),
            Err(Error::NearSingular { pivot: 2, .. })
        ));
    }
}
