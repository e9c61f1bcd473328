//! Shift-invert Arnoldi for eigenvalues of the companion matrix near a
//! target `z0`, driven by the structured solve with `A - z0 I`.
//!
//! Each cycle extends an orthonormal basis `V` (locked vectors first) by
//! Krylov steps of `(A - z0 I)⁻¹`, keeps `W = (A - z0 I)⁻¹ V` alongside, and
//! takes Ritz pairs of `G = Vᴴ W`. A Ritz pair `(θ, x)` maps to
//! `λ = z0 + 1/θ` and counts as converged once `‖A x - λ x‖ ≤ tol ‖A‖_F`,
//! checked with the companion itself. Converged Ritz vectors are locked;
//! the next cycle starts from the remaining wanted Ritz vectors plus a
//! small random component, which is what lets a second copy of a double
//! eigenvalue appear.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{DenseLu, DenseMatrix};
use crate::eig::{dense_eigenvalues, SpectrumResult};
use crate::error::{Error, Result};
use crate::pencil::{Companion, CompanionMode, QuadraticPencil, ShiftedSolver};
use crate::scalar::{axpy_c, dot_c, norm2, normalize, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArnoldiConfig {
    pub shift: Complex64,
    /// Maximum basis size `m`.
    pub subspace: usize,
    /// Number of eigenvalues wanted, `k ≤ m/2`.
    pub wanted: usize,
    /// Relative residual tolerance against `‖A‖_F`.
    pub tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl ArnoldiConfig {
    pub fn new(shift: Complex64, wanted: usize) -> Self {
        ArnoldiConfig {
            shift,
            subspace: 80,
            wanted,
            tol: 1e-10,
            max_restarts: 50,
            seed: 0x5eed,
        }
    }

    /// Checks the config against a companion of order `n = 2M`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.shift.re.is_finite() && self.shift.im.is_finite()) {
            return Err(Error::InvalidArgument("shift must be finite".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.subspace > n {
            return Err(Error::InvalidArgument(format!(
                "subspace {} exceeds companion order {n}",
                self.subspace
            )));
        }
        if self.wanted == 0 || 2 * self.wanted > self.subspace {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= k <= m/2, got k = {}, m = {}",
                self.wanted, self.subspace
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ArnoldiOutcome {
    /// Eigenvalues nearest the shift, nearest first; eigenvectors are the
    /// unit `2M` companion vectors.
    pub spectrum: SpectrumResult,
    /// `‖A x - λ x‖` per returned pair.
    pub residuals: Vec<f64>,
    pub companion_norm: f64,
    /// Differs from the requested shift only when that shift was
    /// numerically an eigenvalue.
    pub shift_used: Complex64,
    pub restarts: usize,
    pub solves: usize,
    /// Worst `max |VᴴV - I|` seen over all cycles.
    pub basis_defect: f64,
}

impl ArnoldiOutcome {
    pub fn converged_count(&self) -> usize {
        self.spectrum.converged.iter().filter(|&&c| c).count()
    }
}

/// Orthogonalizes `w` against `basis` twice (modified Gram-Schmidt) and
/// returns the remaining norm; `w` is left normalized when that is > 0.
fn orthonormalize_against(basis: &[Vec<Complex64>], w: &mut [Complex64]) -> f64 {
    let before = norm2(w);
    for _ in 0..2 {
        for q in basis {
            let c = dot_c(q, w);
            axpy_c(-c, q, w);
        }
    }
    let after = normalize(w);
    if after <= 1e-12 * before {
        0.0
    } else {
        after
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    v
}

/// Eigenvector of the small matrix `g` for `theta` by inverse iteration
/// from `start`.
fn small_eigenvector(g: &DenseMatrix<Complex64>, theta: Complex64, start: &[Complex64]) -> Vec<Complex64> {
    let scale = g.frobenius_norm().max(f64::MIN_POSITIVE);
    let dir = Complex64::new(Float::sqrt(0.5), Float::sqrt(0.5));
    let mut x = start.to_vec();
    normalize(&mut x);
    for attempt in 0..4 {
        let shifted = theta + dir * (1e-12 * scale * 100f64.powi(attempt));
        let Ok(lu) = DenseLu::factor(g.shifted(shifted), 0.0) else {
            continue;
        };
        for _ in 0..3 {
            let mut y = lu.solve(&x);
            if normalize(&mut y) == 0.0 || !y.iter().all(|v| v.is_finite()) {
                break;
            }
            x = y;
        }
        break;
    }
    x
}

fn combine(cols: &[Vec<Complex64>], y: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); cols[0].len()];
    for (c, &w) in cols.iter().zip(y) {
        axpy_c(w, c, &mut out);
    }
    out
}

fn basis_defect(v: &[Vec<Complex64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..v.len() {
        for j in i..v.len() {
            let d = dot_c(&v[i], &v[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((d - target).norm());
        }
    }
    worst
}

/// Amplification `‖(A - zI)⁻¹ v‖ ‖A‖_F` above which a shift counts as an
/// eigenvalue: Ritz values other than the one at the shift would then be
/// polluted by rounding in the huge component.
const SHIFT_AMPLIFICATION_LIMIT: f64 = 1e10;

/// Factors `L(z)`, moving `z` off the spectrum by `1e-6 ‖A‖_F` steps (at
/// most three) when it is singular or numerically an eigenvalue.
fn guarded_solver<'a, T: Scalar>(
    p: &'a QuadraticPencil<T>,
    z0: Complex64,
    anorm: f64,
    rng: &mut ChaCha8Rng,
) -> Result<(ShiftedSolver<'a, T>, Complex64)> {
    let n = 2 * p.order();
    let dir = Complex64::new(Float::sqrt(0.5), Float::sqrt(0.5));
    let mut z = z0;
    let mut last = None;
    for attempt in 0..4 {
        if attempt > 0 {
            z = z0 + dir * (1e-6 * anorm * attempt as f64);
        }
        let solver = match p.shifted_solver(z) {
            Ok(s) => s,
            Err(e @ Error::NearSingular { .. }) => {
                last = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let probe = random_unit(n, rng);
        let amp = norm2(&solver.solve_stacked(&probe)?);
        if amp.is_finite() && amp * anorm <= SHIFT_AMPLIFICATION_LIMIT {
            return Ok((solver, z));
        }
        last = Some(Error::NearSingular { shift: z, pivot: 0 });
    }
    Err(last.expect("at least one attempt"))
}

struct RitzPair {
    theta: Complex64,
    y: Vec<Complex64>,
    lambda: Complex64,
    x: Vec<Complex64>,
    residual: f64,
}

pub fn arnoldi_shift_invert<T: Scalar>(p: &QuadraticPencil<T>, cfg: &ArnoldiConfig) -> Result<ArnoldiOutcome> {
    let n = 2 * p.order();
    cfg.validate(n)?;
    let companion = Companion::new(p, CompanionMode::Implicit, 0)?;
    let anorm = companion.frobenius_norm();
    let threshold = cfg.tol * anorm;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (solver, shift) = guarded_solver(p, cfg.shift, anorm, &mut rng)?;
    let m = cfg.subspace;
    let k = cfg.wanted;

    let mut locked_v: Vec<Vec<Complex64>> = Vec::new();
    let mut locked_w: Vec<Vec<Complex64>> = Vec::new();
    let mut start = random_unit(n, &mut rng);
    let mut solves = 0usize;
    let mut worst_defect: f64 = 0.0;
    let mut restarts = 0usize;
    let best = loop {
        let mut v = locked_v.clone();
        let mut w = locked_w.clone();
        if orthonormalize_against(&v, &mut start) == 0.0 {
            start = random_unit(n, &mut rng);
            orthonormalize_against(&v, &mut start);
        }
        v.push(start.clone());
        while v.len() <= m {
            let last = v.last().expect("nonempty basis");
            let y = solver.solve_stacked(last)?;
            solves += 1;
            w.push(y.clone());
            if v.len() == m {
                break;
            }
            let mut next = y;
            if orthonormalize_against(&v, &mut next) == 0.0 {
                // Invariant subspace reached; continue from fresh noise.
                next = random_unit(n, &mut rng);
                if orthonormalize_against(&v, &mut next) == 0.0 {
                    break;
                }
            }
            v.push(next);
        }
        let dim = w.len();
        v.truncate(dim);
        worst_defect = worst_defect.max(basis_defect(&v));

        let g = DenseMatrix::from_fn(dim, |i, j| dot_c(&v[i], &w[j]));
        let mut thetas = dense_eigenvalues(&g).eigenvalues;
        thetas.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        thetas.truncate(k.min(dim));

        let mut pairs: Vec<RitzPair> = Vec::with_capacity(thetas.len());
        for (idx, &theta) in thetas.iter().enumerate() {
            // Start orthogonal to earlier Ritz vectors of the same cluster so
            // a repeated θ yields a second independent direction.
            let mut s = random_unit(dim, &mut rng);
            let cluster: Vec<Vec<Complex64>> = pairs[..idx]
                .iter()
                .filter(|q| (q.theta - theta).norm() <= 1e-6 * theta.norm())
                .map(|q| q.y.clone())
                .collect();
            orthonormalize_against(&cluster, &mut s);
            let y = small_eigenvector(&g, theta, &s);
            let mut x = combine(&v, &y);
            normalize(&mut x);
            let lambda = shift + Complex64::new(1.0, 0.0) / theta;
            let ax = companion.apply(&x);
            let r: Vec<Complex64> = ax.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
            pairs.push(RitzPair {
                theta,
                y,
                lambda,
                x,
                residual: norm2(&r),
            });
        }

        let done = pairs.len() >= k && pairs.iter().all(|q| q.residual <= threshold);
        if done || restarts >= cfg.max_restarts || dim < k {
            break pairs;
        }
        restarts += 1;

        // Lock converged Ritz vectors (orthonormalized in coefficient space).
        let mut lock_y: Vec<Vec<Complex64>> = Vec::new();
        for q in pairs.iter().filter(|q| q.residual <= threshold) {
            let mut y = q.y.clone();
            if orthonormalize_against(&lock_y, &mut y) > 0.0 {
                lock_y.push(y);
            }
        }
        locked_v = lock_y.iter().map(|y| combine(&v, y)).collect();
        locked_w = lock_y.iter().map(|y| combine(&w, y)).collect();

        let mut restart_y = vec![Complex64::new(0.0, 0.0); dim];
        for q in pairs.iter().filter(|q| q.residual > threshold) {
            axpy_c(Complex64::new(1.0, 0.0), &q.y, &mut restart_y);
        }
        normalize(&mut restart_y);
        start = combine(&v, &restart_y);
        let noise = random_unit(n, &mut rng);
        axpy_c(Complex64::new(1e-3, 0.0), &noise, &mut start);
    };

    let converged = best.iter().map(|q| q.residual <= threshold).collect();
    Ok(ArnoldiOutcome {
        spectrum: SpectrumResult {
            eigenvalues: best.iter().map(|q| q.lambda).collect(),
            converged,
            iterations: solves,
            eigenvectors: Some(best.iter().map(|q| q.x.clone()).collect()),
        },
        residuals: best.iter().map(|q| q.residual).collect(),
        companion_norm: anorm,
        shift_used: shift,
        restarts,
        solves,
        basis_defect: worst_defect,
    })
}
