//! Smallest singular values `s_min(A - zI)` of the shifted companion.
//!
//! Pointwise values come from inverse power iteration on
//! `((A - zI)ᴴ (A - zI))⁻¹`, one structured solve with `A - zI` and one with
//! its adjoint per step, so `A` is never formed. For small pencils a dense
//! path through a Hermitian eigenproblem serves as a cross-check.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::pencil::{CompanionMode, QuadraticPencil};
use crate::scalar::{normalize, norm2, Scalar};
use crate::symmetric::symmetric_eigenvalues;

/// Largest pencil order accepted by [`smin_dense`].
pub const DENSE_SMIN_CAP: usize = 500;

/// Rectangular mesh of shifts, endpoints included on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZGrid {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl ZGrid {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if !finite || !(re_min < re_max) || !(im_min < im_max) {
            return Err(Error::InvalidArgument(format!(
                "z-grid bounds must be finite and strictly ordered, got re [{re_min}, {re_max}], im [{im_min}, {im_max}]"
            )));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidArgument(format!(
                "z-grid needs at least 2 nodes per axis, got {nx} x {ny}"
            )));
        }
        Ok(ZGrid {
            re_min,
            re_max,
            im_min,
            im_max,
            nx,
            ny,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node `(i, j)`: `re_min + i (re_max - re_min)/(nx - 1)`, likewise in
    /// `im`. Written so that node `2i` of a grid with `2nx - 1` points is
    /// bit-identical to node `i` here.
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let re = self.re_min + (i as f64 * (self.re_max - self.re_min)) / (self.nx - 1) as f64;
        let im = self.im_min + (j as f64 * (self.im_max - self.im_min)) / (self.ny - 1) as f64;
        Complex64::new(re, im)
    }

    /// Row-major by `im`: point `j * nx + i`.
    pub fn point(&self, flat: usize) -> Complex64 {
        self.node(flat % self.nx, flat / self.nx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SminStatus {
    Converged,
    /// Iteration cap hit; the value is the last estimate.
    Approximate,
    /// `L(z)` factorization broke down; the value is exactly 0.
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SminOptions {
    pub rel_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SminOptions {
    fn default() -> Self {
        SminOptions {
            rel_tol: 1e-8,
            max_iter: 200,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SminPoint {
    pub value: f64,
    pub iterations: usize,
    pub status: SminStatus,
}

pub fn smin_at<T: Scalar>(p: &QuadraticPencil<T>, z: Complex64, opts: &SminOptions) -> Result<SminPoint> {
    let solver = match p.shifted_solver(z) {
        Ok(s) => s,
        Err(Error::NearSingular { .. }) => {
            return Ok(SminPoint {
                value: 0.0,
                iterations: 0,
                status: SminStatus::Singular,
            })
        }
        Err(e) => return Err(e),
    };
    let n = 2 * p.order();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    // A real start vector keeps the iteration for z̄ the exact conjugate of
    // the one for z when the pencil is real.
    let mut x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
        .collect();
    normalize(&mut x);
    let mut prev = f64::INFINITY;
    for it in 1..=opts.max_iter {
        let y = solver.solve_adjoint_stacked(&x)?;
        let ny = norm2(&y);
        if !(ny.is_finite()) || ny == 0.0 {
            return Ok(SminPoint {
                value: 0.0,
                iterations: it,
                status: SminStatus::Singular,
            });
        }
        let sigma = 1.0 / ny;
        let mut t = solver.solve_stacked(&y)?;
        if normalize(&mut t) == 0.0 || !t.iter().all(|v| v.is_finite()) {
            return Ok(SminPoint {
                value: 0.0,
                iterations: it,
                status: SminStatus::Singular,
            });
        }
        x = t;
        if Float::abs(sigma - prev) <= opts.rel_tol * sigma {
            return Ok(SminPoint {
                value: sigma,
                iterations: it,
                status: SminStatus::Converged,
            });
        }
        prev = sigma;
    }
    Ok(SminPoint {
        value: prev,
        iterations: opts.max_iter,
        status: SminStatus::Approximate,
    })
}

/// `s_min(A - zI)` from the real symmetric embedding of
/// `[[0, B], [Bᴴ, 0]]`, whose eigenvalues are `±σ_i(B)` (each twice).
pub fn smin_dense<T: Scalar>(p: &QuadraticPencil<T>, z: Complex64) -> Result<f64> {
    if p.order() > DENSE_SMIN_CAP {
        return Err(Error::TooLarge {
            order: p.order(),
            cap: DENSE_SMIN_CAP,
        });
    }
    let a = p.linearize(CompanionMode::Dense)?.into_dense().expect("dense mode");
    let b = a.to_complex().shifted(z);
    let n = b.order();
    // Hermitian K = [[0, B], [Bᴴ, 0]] (order 2n) embedded as [[Re K, -Im K], [Im K, Re K]].
    let k = |i: usize, j: usize| -> Complex64 {
        match (i < n, j < n) {
            (true, false) => b[(i, j - n)],
            (false, true) => b[(j, i - n)].conj(),
            _ => Complex64::new(0.0, 0.0),
        }
    };
    let big = DenseMatrix::from_fn(4 * n, |i, j| {
        let (bi, ri) = (i / (2 * n), i % (2 * n));
        let (bj, rj) = (j / (2 * n), j % (2 * n));
        let v = k(ri, rj);
        match (bi, bj) {
            (0, 0) | (1, 1) => v.re,
            (0, 1) => -v.im,
            _ => v.im,
        }
    });
    let ev = symmetric_eigenvalues(&big);
    Ok(ev.iter().map(|v| Float::abs(*v)).fold(f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudospectrumField {
    pub grid: ZGrid,
    /// `values[j * nx + i]` at `grid.node(i, j)`.
    pub values: Vec<f64>,
    pub iterations: Vec<usize>,
    pub status: Vec<SminStatus>,
    pub seed: u64,
}

impl PseudospectrumField {
    /// Assembles a field from per-point results in grid order.
    pub fn from_points(grid: ZGrid, points: &[SminPoint], seed: u64) -> Result<Self> {
        if points.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: points.len(),
            });
        }
        Ok(PseudospectrumField {
            grid,
            values: points.iter().map(|q| q.value).collect(),
            iterations: points.iter().map(|q| q.iterations).collect(),
            status: points.iter().map(|q| q.status).collect(),
            seed,
        })
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }
}

/// Sequential scan. A point whose solve fails outright is recorded as
/// singular rather than aborting the scan.
pub fn scan<T: Scalar>(p: &QuadraticPencil<T>, grid: &ZGrid, opts: &SminOptions) -> PseudospectrumField {
    let points: Vec<SminPoint> = (0..grid.len())
        .map(|f| {
            smin_at(p, grid.point(f), opts).unwrap_or(SminPoint {
                value: 0.0,
                iterations: 0,
                status: SminStatus::Singular,
            })
        })
        .collect();
    PseudospectrumField::from_points(*grid, &points, opts.seed).expect("one point per node")
}
