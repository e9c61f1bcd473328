//! The quadratic pencil `L(λ) = H0 + λ H1 + λ² I`, its companion
//! linearization `A = [[0, I], [-H0, -H1]]`, and the structured solve
//! with `A - zI` that only ever factors the banded `L(z)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::banded::{BandLu, BandMatrix};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::ordering::{adjacency, bandwidths_under, invert, reverse_cuthill_mckee};
use crate::scalar::{norm2, Scalar};
use crate::sparse::CsrMatrix;

/// Default cap on the pencil order `M` for dense materialization
/// (companion order `2M`).
pub const DEFAULT_DENSE_CAP: usize = 6000;

/// `|pivot| < PIVOT_TOL * max|L(z)_ij|` declares `L(z)` singular.
pub const PIVOT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticPencil<T> {
    h0: CsrMatrix<T>,
    h1: CsrMatrix<T>,
    /// `(perm, inverse)` used when factoring `L(z)`, if it narrows the band.
    ordering: Option<(Vec<usize>, Vec<usize>)>,
}

/// Keeps natural order unless the reordered band is clearly narrower.
fn choose_ordering<T: Scalar>(h0: &CsrMatrix<T>, h1: &CsrMatrix<T>) -> Option<(Vec<usize>, Vec<usize>)> {
    let pattern = || h0.triplets().chain(h1.triplets()).map(|(r, c, _)| (r, c));
    let (kl, ku) = bandwidths_under(pattern(), None);
    let perm = reverse_cuthill_mckee(&adjacency(h0.order(), pattern()));
    let inverse = invert(&perm);
    let (pl, pu) = bandwidths_under(pattern(), Some(&inverse));
    (2 * (pl + pu) < kl + ku).then_some((perm, inverse))
}

impl<T: Scalar> QuadraticPencil<T> {
    pub fn new(h0: CsrMatrix<T>, h1: CsrMatrix<T>) -> Result<Self> {
        if h0.order() != h1.order() {
            return Err(Error::DimensionMismatch {
                expected: h0.order(),
                found: h1.order(),
            });
        }
        let ordering = choose_ordering(&h0, &h1);
        Ok(QuadraticPencil { h0, h1, ordering })
    }

    /// Order `M` of `H0` and `H1`.
    pub fn order(&self) -> usize {
        self.h0.order()
    }

    pub fn h0(&self) -> &CsrMatrix<T> {
        &self.h0
    }

    pub fn h1(&self) -> &CsrMatrix<T> {
        &self.h1
    }

    pub fn is_complex(&self) -> bool {
        T::IS_COMPLEX
    }

    pub fn to_complex(&self) -> QuadraticPencil<Complex64> {
        QuadraticPencil {
            h0: self.h0.to_complex(),
            h1: self.h1.to_complex(),
            ordering: self.ordering.clone(),
        }
    }

    /// `L(λ) u`.
    pub fn apply(&self, lambda: Complex64, u: &[Complex64]) -> Vec<Complex64> {
        let m = self.order();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        let mut tmp = vec![Complex64::new(0.0, 0.0); m];
        self.h0.matvec_complex(u, &mut out);
        self.h1.matvec_complex(u, &mut tmp);
        let l2 = lambda * lambda;
        for i in 0..m {
            out[i] += lambda * tmp[i] + l2 * u[i];
        }
        out
    }

    /// Normalized backward error
    /// `‖L(λ)u‖ / (‖u‖ (‖H0‖_F + |λ|‖H1‖_F + |λ|²))`.
    pub fn residual(&self, lambda: Complex64, u: &[Complex64]) -> Result<f64> {
        if u.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: u.len(),
            });
        }
        let unorm = norm2(u);
        if unorm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let r = norm2(&self.apply(lambda, u));
        let a = lambda.norm();
        let scale = self.h0.frobenius_norm() + a * self.h1.frobenius_norm() + a * a;
        Ok(r / (unorm * scale))
    }

    pub fn linearize(&self, mode: CompanionMode) -> Result<Companion<'_, T>> {
        Companion::new(self, mode, DEFAULT_DENSE_CAP)
    }

    /// Symmetric permutation applied before banding, as `perm[new] = old`;
    /// `None` means natural order.
    pub fn ordering(&self) -> Option<&[usize]> {
        self.ordering.as_ref().map(|(p, _)| p.as_slice())
    }

    /// Band storage of `L(z) = H0 + z H1 + z² I` covering the union of the
    /// patterns of `H0` and `H1`, rows and columns in [`Self::ordering`].
    pub fn band_at(&self, z: Complex64) -> BandMatrix<Complex64> {
        let inv = self.ordering.as_ref().map(|(_, i)| i.as_slice());
        let map = |i: usize| inv.map_or(i, |v| v[i]);
        let pattern = self.h0.triplets().chain(self.h1.triplets()).map(|(r, c, _)| (r, c));
        let (kl, ku) = bandwidths_under(pattern, inv);
        let m = self.order();
        let mut band = BandMatrix::zeros(m, kl, ku);
        for (r, c, v) in self.h0.triplets() {
            band.add_to(map(r), map(c), v.to_complex());
        }
        for (r, c, v) in self.h1.triplets() {
            band.add_to(map(r), map(c), z * v.to_complex());
        }
        let z2 = z * z;
        for i in 0..m {
            band.add_to(i, i, z2);
        }
        band
    }

    fn factor_at(&self, z: Complex64, rel_tol: f64) -> Result<PencilLu> {
        Ok(PencilLu {
            lu: BandLu::factor(self.band_at(z), rel_tol)?,
            ordering: self.ordering.clone(),
        })
    }

    /// Factors `L(z)` once so repeated solves with `A - zI` are cheap.
    pub fn shifted_solver(&self, z: Complex64) -> Result<ShiftedSolver<'_, T>> {
        let lu = self.factor_at(z, PIVOT_TOL).map_err(|e| match e {
            Error::NearSingular { pivot, .. } => Error::NearSingular { shift: z, pivot },
            other => other,
        })?;
        Ok(ShiftedSolver {
            pencil: self,
            z,
            lu,
        })
    }

    /// Solves `(A - zI)(u; v) = (f; g)`.
    pub fn shifted_solve(
        &self,
        z: Complex64,
        f: &[Complex64],
        g: &[Complex64],
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        self.shifted_solver(z)?.solve(f, g)
    }

    /// Eigenvector of `L` for an approximate eigenvalue by inverse
    /// iteration on `L(λ̃)ᴴ L(λ̃)` with `λ̃ = λ + δ`, `δ = 1e-10 (1 + |λ|)`,
    /// retried with larger `δ` if `L(λ̃)` is still singular. The residual
    /// is certified at `λ` itself and the best iterate is kept.
    ///
    /// Plain inverse iteration would converge to an eigenvector of the
    /// matrix `L(λ̃)`; when that matrix is far from normal (clustered
    /// eigenvalues of variable-coefficient problems) its residual can be
    /// orders of magnitude above `σ_min(L(λ))`.
    pub fn eigenpair(&self, lambda: Complex64) -> Result<EigenPair> {
        let m = self.order();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_e16e);
        let start: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let dir = Complex64::new(Float::sqrt(0.5), Float::sqrt(0.5));
        let mut last_err = Error::ZeroVector;
        for attempt in 0..4 {
            let delta = 1e-10 * 100f64.powi(attempt) * (1.0 + lambda.norm());
            let shifted = lambda + dir * delta;
            let lu = match self.factor_at(shifted, 0.0) {
                Ok(lu) => lu,
                Err(e) => {
                    last_err = e;
                    continue;
                }
            };
            let usable = |u: &mut Vec<Complex64>| {
                crate::scalar::normalize(u) > 0.0 && u.iter().all(|v| v.is_finite())
            };
            let mut best: Option<(f64, Vec<Complex64>)> = None;
            let mut u = start.clone();
            crate::scalar::normalize(&mut u);
            lu.solve_in_place(&mut u);
            for step in 0..4 {
                if step > 0 {
                    lu.solve_adjoint_in_place(&mut u);
                    if !usable(&mut u) {
                        break;
                    }
                    lu.solve_in_place(&mut u);
                }
                if !usable(&mut u) {
                    break;
                }
                let r = self.residual(lambda, &u)?;
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, u.clone()));
                }
            }
            if let Some((residual, vector)) = best {
                return Ok(EigenPair {
                    lambda,
                    vector,
                    residual,
                });
            }
        }
        Err(match last_err {
            Error::NearSingular { pivot, .. } => Error::NearSingular { shift: lambda, pivot },
            e => e,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompanionMode {
    /// Only the pencil is stored; products are formed blockwise.
    Implicit,
    /// The `2M x 2M` matrix is materialized.
    Dense,
}

/// `A = [[0, I], [-H0, -H1]]`.
#[derive(Debug, Clone)]
pub struct Companion<'a, T> {
    pencil: &'a QuadraticPencil<T>,
    dense: Option<DenseMatrix<T>>,
}

impl<'a, T: Scalar> Companion<'a, T> {
    /// `dense_cap` bounds the pencil order `M` in dense mode.
    pub fn new(pencil: &'a QuadraticPencil<T>, mode: CompanionMode, dense_cap: usize) -> Result<Self> {
        let dense = match mode {
            CompanionMode::Implicit => None,
            CompanionMode::Dense => {
                let m = pencil.order();
                if m > dense_cap {
                    return Err(Error::TooLarge {
                        order: 2 * m,
                        cap: 2 * dense_cap,
                    });
                }
                let mut a = DenseMatrix::zeros(2 * m);
                for i in 0..m {
                    a[(i, m + i)] = T::ONE;
                }
                for (r, c, v) in pencil.h0.triplets() {
                    a[(m + r, c)] = -v;
                }
                for (r, c, v) in pencil.h1.triplets() {
                    a[(m + r, m + c)] = -v;
                }
                Some(a)
            }
        };
        Ok(Companion { pencil, dense })
    }

    pub fn pencil(&self) -> &QuadraticPencil<T> {
        self.pencil
    }

    /// `2M`.
    pub fn order(&self) -> usize {
        2 * self.pencil.order()
    }

    pub fn dense(&self) -> Option<&DenseMatrix<T>> {
        self.dense.as_ref()
    }

    pub fn into_dense(self) -> Option<DenseMatrix<T>> {
        self.dense
    }

    /// `A (u; v) = (v; -H0 u - H1 v)`, always computed blockwise.
    pub fn apply(&self, w: &[Complex64]) -> Vec<Complex64> {
        let m = self.pencil.order();
        assert_eq!(w.len(), 2 * m);
        let (u, v) = w.split_at(m);
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * m];
        out[..m].copy_from_slice(v);
        let mut t0 = vec![Complex64::new(0.0, 0.0); m];
        let mut t1 = vec![Complex64::new(0.0, 0.0); m];
        self.pencil.h0.matvec_complex(u, &mut t0);
        self.pencil.h1.matvec_complex(v, &mut t1);
        for i in 0..m {
            out[m + i] = -t0[i] - t1[i];
        }
        out
    }

    /// `‖A‖_F = sqrt(M + ‖H0‖_F² + ‖H1‖_F²)`.
    pub fn frobenius_norm(&self) -> f64 {
        let a = self.pencil.h0.frobenius_norm();
        let b = self.pencil.h1.frobenius_norm();
        Float::sqrt(self.pencil.order() as f64 + a * a + b * b)
    }
}

/// Banded LU of the permuted `L(z)`; solves take and return vectors in
/// natural order.
#[derive(Debug, Clone)]
struct PencilLu {
    lu: BandLu<Complex64>,
    ordering: Option<(Vec<usize>, Vec<usize>)>,
}

impl PencilLu {
    fn apply(&self, b: &mut [Complex64], adjoint: bool) {
        let solve = |x: &mut [Complex64]| {
            if adjoint {
                self.lu.solve_adjoint_in_place(x)
            } else {
                self.lu.solve_in_place(x)
            }
        };
        match &self.ordering {
            None => solve(b),
            Some((perm, _)) => {
                let mut x: Vec<Complex64> = perm.iter().map(|&old| b[old]).collect();
                solve(&mut x);
                for (new, &old) in perm.iter().enumerate() {
                    b[old] = x[new];
                }
            }
        }
    }

    fn solve_in_place(&self, b: &mut [Complex64]) {
        self.apply(b, false)
    }

    fn solve_adjoint_in_place(&self, b: &mut [Complex64]) {
        self.apply(b, true)
    }
}

/// A factorization of `L(z)` reused across solves with `A - zI` and its
/// adjoint.
#[derive(Debug, Clone)]
pub struct ShiftedSolver<'a, T> {
    pencil: &'a QuadraticPencil<T>,
    z: Complex64,
    lu: PencilLu,
}

impl<T: Scalar> ShiftedSolver<'_, T> {
    pub fn shift(&self) -> Complex64 {
        self.z
    }

    fn check(&self, f: &[Complex64], g: &[Complex64]) -> Result<usize> {
        let m = self.pencil.order();
        for len in [f.len(), g.len()] {
            if len != m {
                return Err(Error::DimensionMismatch { expected: m, found: len });
            }
        }
        Ok(m)
    }

    /// `(A - zI)(u; v) = (f; g)`: `L(z) u = -(g + (H1 + z) f)`, `v = f + z u`.
    pub fn solve(&self, f: &[Complex64], g: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let m = self.check(f, g)?;
        let z = self.z;
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        self.pencil.h1.matvec_complex(f, &mut rhs);
        for i in 0..m {
            rhs[i] = -(g[i] + rhs[i] + z * f[i]);
        }
        self.lu.solve_in_place(&mut rhs);
        let u = rhs;
        let v = f.iter().zip(&u).map(|(&fi, &ui)| fi + z * ui).collect();
        Ok((u, v))
    }

    /// `(A - zI)ᴴ (u; v) = (f; g)`: `L(z)ᴴ v = -(f + z̄ g)`,
    /// `u = g + (H1ᴴ + z̄) v`.
    pub fn solve_adjoint(
        &self,
        f: &[Complex64],
        g: &[Complex64],
    ) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let m = self.check(f, g)?;
        let zc = self.z.conj();
        let mut v: Vec<Complex64> = f.iter().zip(g).map(|(&fi, &gi)| -(fi + zc * gi)).collect();
        self.lu.solve_adjoint_in_place(&mut v);
        let mut u: Vec<Complex64> = (0..m).map(|i| g[i] + zc * v[i]).collect();
        for (r, c, a) in self.pencil.h1.triplets() {
            u[c] += a.to_complex().conj() * v[r];
        }
        Ok((u, v))
    }

    /// Solve on a stacked `2M` vector.
    pub fn solve_stacked(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.pencil.order();
        let (u, v) = self.solve(&w[..m], &w[m..])?;
        Ok(u.into_iter().chain(v).collect())
    }

    pub fn solve_adjoint_stacked(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.pencil.order();
        let (u, v) = self.solve_adjoint(&w[..m], &w[m..])?;
        Ok(u.into_iter().chain(v).collect())
    }
}

/// An eigenvalue with its unit `u`-block eigenvector and backward error.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda: Complex64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}
