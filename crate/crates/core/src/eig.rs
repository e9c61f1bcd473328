//! Dense nonsymmetric eigenvalues.
//!
//! Pipeline: radix-2 balancing, Householder reduction to upper Hessenberg
//! form, then QR iteration on the Hessenberg matrix. Real matrices use the
//! Francis implicit double shift and never leave real arithmetic; 2x2
//! blocks are split into conjugate pairs at extraction. Complex matrices
//! use a Wilkinson-shifted single-shift QR with Givens rotations.
//!
//! Only eigenvalues are produced here; eigenvectors come from inverse
//! iteration ([`eigenvector`]).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{DenseLu, DenseMatrix};
use crate::error::{Error, Result};
use crate::scalar::{norm2, normalize, Scalar};

/// Relative deflation threshold on subdiagonal entries.
pub const DEFLATION_EPS: f64 = 1e-14;
/// Iterations on one block before an exceptional shift.
pub const EXCEPTIONAL_SHIFT_EVERY: usize = 10;
/// Total QR iterations allowed per unit of matrix order.
pub const MAX_ITERATIONS_PER_ORDER: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<Complex64>,
    /// `converged[k]` is false if eigenvalue `k` came out of a block the
    /// iteration gave up on.
    pub converged: Vec<bool>,
    pub iterations: usize,
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
}

impl SpectrumResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}

/// Total order by imaginary part, then real part.
pub fn canonical_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re))
}

pub fn canonical_sort(values: &mut [Complex64]) {
    values.sort_by(canonical_cmp);
}

/// Reorders eigenvalues (and the matching flags/vectors) canonically.
pub fn sort_spectrum(result: &mut SpectrumResult) {
    let mut order: Vec<usize> = (0..result.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| canonical_cmp(&result.eigenvalues[i], &result.eigenvalues[j]));
    result.eigenvalues = order.iter().map(|&i| result.eigenvalues[i]).collect();
    result.converged = order.iter().map(|&i| result.converged[i]).collect();
    if let Some(vecs) = result.eigenvectors.take() {
        result.eigenvectors = Some(order.iter().map(|&i| vecs[i].clone()).collect());
    }
}

/// Diagonal similarity `D⁻¹ A D` with powers of two, equalizing the
/// off-diagonal row and column 1-norms. Returns the balanced matrix and
/// the diagonal of `D`.
pub fn balance<T: Scalar>(a: &DenseMatrix<T>) -> (DenseMatrix<T>, Vec<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.order();
    let mut b = a.clone();
    let mut scale = vec![1.0; n];
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].abs1();
                    r += b[(i, j)].abs1();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                changed = true;
                scale[i] *= f;
                let inv = 1.0 / f;
                for v in b.row_mut(i) {
                    *v = v.scale(inv);
                }
                for j in 0..n {
                    b[(j, i)] = b[(j, i)].scale(f);
                }
            }
        }
        if !changed {
            return (b, scale);
        }
    }
}

/// Householder reduction. Returns `H` and the unitary `Q` with `A = Q H Qᴴ`.
pub fn hessenberg<T: Scalar>(a: &DenseMatrix<T>) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let mut h = a.clone();
    let q = reduce_to_hessenberg(&mut h, true).expect("accumulation requested");
    (h, q)
}

/// In-place Householder reduction; accumulates `Q` only on request.
pub fn reduce_to_hessenberg<T: Scalar>(a: &mut DenseMatrix<T>, accumulate: bool) -> Option<DenseMatrix<T>> {
    let n = a.order();
    let mut q = if accumulate { Some(DenseMatrix::identity(n)) } else { None };
    if n < 3 {
        return q;
    }
    let mut v = vec![T::ZERO; n];
    let mut w = vec![T::ZERO; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let tail_norm = norm2(&(k + 2..n).map(|i| a[(i, k)]).collect::<Vec<_>>());
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = Float::hypot(x0.modulus(), tail_norm);
        let phase = if x0.modulus() == 0.0 {
            T::ONE
        } else {
            x0.scale(1.0 / x0.modulus())
        };
        let beta = -phase.scale(alpha);
        let v = &mut v[..len];
        v[0] = x0 - beta;
        for i in 1..len {
            v[i] = a[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // Left: rows k+1.., columns k+1.. ; w_j = Σ_i conj(v_i) a_ij.
        let w = &mut w[..n];
        for wj in w[k + 1..].iter_mut() {
            *wj = T::ZERO;
        }
        for (i, &vi) in v.iter().enumerate() {
            let vc = vi.conj();
            let row = &a.row(k + 1 + i)[k + 1..];
            for (wj, &aij) in w[k + 1..].iter_mut().zip(row) {
                *wj += vc * aij;
            }
        }
        for (i, &vi) in v.iter().enumerate() {
            let f = vi.scale(tau);
            let row = &mut a.row_mut(k + 1 + i)[k + 1..];
            for (aij, &wj) in row.iter_mut().zip(&w[k + 1..]) {
                *aij -= f * wj;
            }
        }
        a[(k + 1, k)] = beta;
        for i in k + 2..n {
            a[(i, k)] = T::ZERO;
        }

        // Right: all rows, columns k+1.. .
        let apply_right = |m: &mut DenseMatrix<T>| {
            for i in 0..n {
                let row = &mut m.row_mut(i)[k + 1..];
                let s = row
                    .iter()
                    .zip(v.iter())
                    .fold(T::ZERO, |acc, (&x, &y)| acc + x * y)
                    .scale(tau);
                for (x, &y) in row.iter_mut().zip(v.iter()) {
                    *x -= s * y.conj();
                }
            }
        };
        apply_right(a);
        if let Some(q) = q.as_mut() {
            apply_right(q);
        }
    }
    q
}

/// Field-specific QR iteration on a Hessenberg matrix.
pub trait EigenField: Scalar {
    fn hessenberg_qr(h: DenseMatrix<Self>) -> SpectrumResult;
}

impl EigenField for f64 {
    fn hessenberg_qr(h: DenseMatrix<f64>) -> SpectrumResult {
        francis_double_shift(h)
    }
}

impl EigenField for Complex64 {
    fn hessenberg_qr(h: DenseMatrix<Complex64>) -> SpectrumResult {
        complex_single_shift(h)
    }
}

/// All eigenvalues of an upper Hessenberg matrix (unsorted, in deflation
/// order).
pub fn qr_eigenvalues<T: EigenField>(h: DenseMatrix<T>) -> SpectrumResult {
    T::hessenberg_qr(h)
}

/// Balance, reduce, iterate; eigenvalues come back canonically sorted.
pub fn dense_eigenvalues<T: EigenField>(a: &DenseMatrix<T>) -> SpectrumResult {
    let (mut b, _) = balance(a);
    reduce_to_hessenberg(&mut b, false);
    let mut result = T::hessenberg_qr(b);
    sort_spectrum(&mut result);
    result
}

fn francis_double_shift(mut a: DenseMatrix<f64>) -> SpectrumResult {
    let n = a.order();
    let mut wr = vec![0.0; n];
    let mut wi = vec![0.0; n];
    let mut converged = vec![true; n];
    let mut anorm = 0.0;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[(i, j)].abs();
        }
    }
    let max_total = MAX_ITERATIONS_PER_ORDER * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut t = 0.0;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let nu = nn as usize;
        let mut l = nu;
        while l >= 1 {
            let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
            if s == 0.0 {
                s = anorm;
            }
            if a[(l, l - 1)].abs() <= DEFLATION_EPS * s {
                a[(l, l - 1)] = 0.0;
                break;
            }
            l -= 1;
        }
        let mut x = a[(nu, nu)];
        if l == nu {
            wr[nu] = x + t;
            wi[nu] = 0.0;
            nn -= 1;
            its = 0;
            continue;
        }
        let mut y = a[(nu - 1, nu - 1)];
        let mut w = a[(nu, nu - 1)] * a[(nu - 1, nu)];
        if l + 1 == nu {
            let p = 0.5 * (y - x);
            let q = p * p + w;
            let z = q.abs().sqrt();
            x += t;
            if q >= 0.0 {
                let z = p + z.copysign(p);
                wr[nu - 1] = x + z;
                wr[nu] = if z != 0.0 { x - w / z } else { x + z };
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = z;
                wi[nu] = -z;
            }
            nn -= 2;
            its = 0;
            continue;
        }
        if total >= max_total {
            // Give up on rows 0..=nu: report the diagonal, flagged.
            for i in 0..=nu {
                wr[i] = a[(i, i)] + t;
                wi[i] = 0.0;
                converged[i] = false;
            }
            break;
        }
        if its > 0 && its % EXCEPTIONAL_SHIFT_EVERY == 0 {
            t += x;
            for i in 0..=nu {
                a[(i, i)] -= x;
            }
            let s = a[(nu, nu - 1)].abs() + a[(nu - 1, nu - 2)].abs();
            x = 0.75 * s;
            y = x;
            w = -0.4375 * s * s;
        }
        its += 1;
        total += 1;

        // Look for two consecutive small subdiagonals.
        let mut m = nu - 2;
        let (mut p, mut q, mut r);
        loop {
            let z = a[(m, m)];
            let rr = x - z;
            let s = y - z;
            p = (rr * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
            q = a[(m + 1, m + 1)] - z - rr - s;
            r = a[(m + 2, m + 1)];
            let s = p.abs() + q.abs() + r.abs();
            p /= s;
            q /= s;
            r /= s;
            if m == l {
                break;
            }
            let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
            let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
            if u <= DEFLATION_EPS * v {
                break;
            }
            m -= 1;
        }
        for i in m + 2..=nu {
            a[(i, i - 2)] = 0.0;
            if i != m + 2 {
                a[(i, i - 3)] = 0.0;
            }
        }
        // Double-shift QR sweep on rows l..=nu, columns m..=nu.
        let mut k = m;
        while k < nu {
            let mut xk = 0.0;
            if k != m {
                p = a[(k, k - 1)];
                q = a[(k + 1, k - 1)];
                r = if k + 1 != nu { a[(k + 2, k - 1)] } else { 0.0 };
                xk = p.abs() + q.abs() + r.abs();
                if xk != 0.0 {
                    p /= xk;
                    q /= xk;
                    r /= xk;
                }
            }
            let s = (p * p + q * q + r * r).sqrt().copysign(p);
            if s != 0.0 {
                if k == m {
                    if l != m {
                        a[(k, k - 1)] = -a[(k, k - 1)];
                    }
                } else {
                    a[(k, k - 1)] = -s * xk;
                }
                p += s;
                let xx = p / s;
                let yy = q / s;
                let zz = r / s;
                q /= p;
                r /= p;
                let three = k + 1 != nu;
                {
                    let (head, tail) = a.as_mut_slice().split_at_mut((k + 1) * n);
                    let row_k = &mut head[k * n + k..k * n + nu + 1];
                    let (row_k1, rest) = tail.split_at_mut(n);
                    let row_k1 = &mut row_k1[k..nu + 1];
                    if three {
                        let row_k2 = &mut rest[k..nu + 1];
                        for ((ak, ak1), ak2) in row_k.iter_mut().zip(row_k1.iter_mut()).zip(row_k2.iter_mut()) {
                            let pp = *ak + q * *ak1 + r * *ak2;
                            *ak2 -= pp * zz;
                            *ak1 -= pp * yy;
                            *ak -= pp * xx;
                        }
                    } else {
                        for (ak, ak1) in row_k.iter_mut().zip(row_k1.iter_mut()) {
                            let pp = *ak + q * *ak1;
                            *ak1 -= pp * yy;
                            *ak -= pp * xx;
                        }
                    }
                }
                let mmin = nu.min(k + 3);
                for i in l..=mmin {
                    let row = a.row_mut(i);
                    let mut pp = xx * row[k] + yy * row[k + 1];
                    if three {
                        pp += zz * row[k + 2];
                        row[k + 2] -= pp * r;
                    }
                    row[k + 1] -= pp * q;
                    row[k] -= pp;
                }
            }
            k += 1;
        }
    }
    SpectrumResult {
        eigenvalues: wr.iter().zip(&wi).map(|(&re, &im)| Complex64::new(re, im)).collect(),
        converged,
        iterations: total,
        eigenvectors: None,
    }
}

fn complex_single_shift(mut a: DenseMatrix<Complex64>) -> SpectrumResult {
    let n = a.order();
    let zero = Complex64::new(0.0, 0.0);
    let mut ev = vec![zero; n];
    let mut converged = vec![true; n];
    let max_total = MAX_ITERATIONS_PER_ORDER * n.max(1);
    let mut total = 0usize;
    let mut its = 0usize;
    let mut hi = n as isize - 1;
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    while hi >= 0 {
        let h = hi as usize;
        let mut l = h;
        while l >= 1 {
            let s = a[(l - 1, l - 1)].norm() + a[(l, l)].norm();
            if a[(l, l - 1)].norm() <= DEFLATION_EPS * s {
                a[(l, l - 1)] = zero;
                break;
            }
            l -= 1;
        }
        if l == h {
            ev[h] = a[(h, h)];
            hi -= 1;
            its = 0;
            continue;
        }
        if total >= max_total {
            for i in 0..=h {
                ev[i] = a[(i, i)];
                converged[i] = false;
            }
            break;
        }
        let shift = if its > 0 && its % EXCEPTIONAL_SHIFT_EVERY == 0 {
            let mut s = a[(h, h - 1)].re.abs();
            if h >= l + 2 {
                s += a[(h - 1, h - 2)].re.abs();
            }
            a[(h, h)] + s
        } else {
            wilkinson_shift(
                a[(h - 1, h - 1)],
                a[(h - 1, h)],
                a[(h, h - 1)],
                a[(h, h)],
            )
        };
        its += 1;
        total += 1;

        for i in l..=h {
            a[(i, i)] -= shift;
        }
        rots.clear();
        for k in l..h {
            let x = a[(k, k)];
            let y = a[(k + 1, k)];
            let r = Float::hypot(x.norm(), y.norm());
            let (c, s) = if r == 0.0 {
                (1.0, zero)
            } else if x.norm() == 0.0 {
                (0.0, Complex64::new(1.0, 0.0))
            } else {
                let c = x.norm() / r;
                (c, (x / x.norm()) * y.conj() / r)
            };
            rots.push((c, s));
            let (head, tail) = a.as_mut_slice().split_at_mut((k + 1) * n);
            let rk = &mut head[k * n + k..k * n + h + 1];
            let rk1 = &mut tail[k..h + 1];
            for (p, q) in rk.iter_mut().zip(rk1.iter_mut()) {
                let (pv, qv) = (*p, *q);
                *p = pv * c + s * qv;
                *q = -s.conj() * pv + qv * c;
            }
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in l..=(k + 1).min(h) {
                let row = a.row_mut(i);
                let (pv, qv) = (row[k], row[k + 1]);
                row[k] = pv * c + s.conj() * qv;
                row[k + 1] = -s * pv + qv * c;
            }
        }
        for i in l..=h {
            a[(i, i)] += shift;
        }
    }
    SpectrumResult {
        eigenvalues: ev,
        converged,
        iterations: total,
        eigenvectors: None,
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let diff = (a - d) * 0.5;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Inverse iteration on `A - λ̃ I`, `λ̃ = λ + 1e-10 ‖A‖_F` (perturbation
/// grown 100x per retry, up to 3 retries). At most 5 steps. Returns the
/// unit iterate and `‖A x - λ x‖`.
pub fn eigenvector<T: Scalar>(a: &DenseMatrix<T>, lambda: Complex64) -> Result<(Vec<Complex64>, f64)> {
    let n = a.order();
    let ac = a.to_complex();
    let anorm = ac.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(0xe16e_7ec7);
    let start: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let dir = Complex64::new(Float::sqrt(0.5), Float::sqrt(0.5));
    let mut last = Error::ZeroVector;
    for attempt in 0..4 {
        let shifted = lambda + dir * (1e-10 * anorm * 100f64.powi(attempt));
        let lu = match DenseLu::factor(ac.shifted(shifted), 0.0) {
            Ok(lu) => lu,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let mut x = start.clone();
        normalize(&mut x);
        for _ in 0..5 {
            let mut y = lu.solve(&x);
            if normalize(&mut y) == 0.0 || !y.iter().all(|v| v.is_finite()) {
                break;
            }
            x = y;
        }
        let ax = ac.matvec(&x);
        let r: Vec<Complex64> = ax.iter().zip(&x).map(|(p, q)| p - lambda * q).collect();
        return Ok((x, norm2(&r)));
    }
    Err(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::determinant;
    use crate::metrics::{hausdorff, nearest_matching_distance};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_real(n: usize, seed: u64) -> DenseMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    fn random_complex(n: usize, seed: u64) -> DenseMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DenseMatrix::from_fn(n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn balanced_input_untouched() {
        let a = DenseMatrix::from_row_major(2, alloc::vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        let (b, s) = balance(&a);
        assert_eq!(b, a);
        assert_eq!(s, [1.0, 1.0]);
    }

    #[test]
    fn balance_recovers_known_scaling() {
        // Symmetric matrices are balanced; conjugate by D = diag(2^10, 1, ...).
        let n = 6;
        let r = random_real(n, 5);
        let sym = DenseMatrix::from_fn(n, |i, j| r[(i, j)] + r[(j, i)] + 0.5);
        let d: Vec<f64> = (0..n).map(|i| if i == 0 { 1024.0 } else { 1.0 }).collect();
        let a = DenseMatrix::from_fn(n, |i, j| d[i] * sym[(i, j)] / d[j]);
        let (_, s) = balance(&a);
        let base = s[1] / d[1];
        for i in 0..n {
            let ratio = (s[i] / d[i]) / base;
            assert!((0.5..=2.0).contains(&ratio), "axis {i}: {ratio}");
        }
    }

    #[test]
    fn balance_preserves_spectrum() {
        let a = random_real(20, 9);
        let plain = {
            let mut h = a.clone();
            reduce_to_hessenberg(&mut h, false);
            francis_double_shift(h).eigenvalues
        };
        let scale = a.frobenius_norm();
        assert!(nearest_matching_distance(&plain, &dense_eigenvalues(&a).eigenvalues) <= 1e-12 * scale);

        let skewed = DenseMatrix::from_fn(20, |i, j| a[(i, j)] * 2f64.powi(i as i32 - j as i32));
        let (b, s) = balance(&skewed);
        for i in 0..20 {
            for j in 0..20 {
                let back = b[(i, j)] * s[i] / s[j];
                assert!((back - skewed[(i, j)]).abs() <= 1e-15 * skewed[(i, j)].abs());
            }
        }
        assert!(nearest_matching_distance(&plain, &dense_eigenvalues(&skewed).eigenvalues) <= 1e-12 * scale);
    }

    #[test]
    fn hessenberg_of_hessenberg_is_identity_map() {
        let mut a = random_real(8, 1);
        for i in 0..8 {
            for j in 0..8 {
                if i > j + 1 {
                    a[(i, j)] = 0.0;
                }
            }
        }
        let (h, q) = hessenberg(&a);
        assert_eq!(h, a);
        assert_eq!(q, DenseMatrix::identity(8));
    }

    fn check_hessenberg<T: Scalar>(a: &DenseMatrix<T>) {
        let n = a.order();
        let (h, q) = hessenberg(a);
        for i in 0..n {
            for j in 0..n {
                if i > j + 1 {
                    assert_eq!(h[(i, j)], T::ZERO);
                }
            }
        }
        let qhq = q.conj_transpose().matmul(&q).sub(&DenseMatrix::identity(n));
        assert!(qhq.max_abs() <= 1e-13, "orthogonality {}", qhq.max_abs());
        let back = q.matmul(&h).matmul(&q.conj_transpose()).sub(a);
        assert!(back.frobenius_norm() <= 1e-12 * a.frobenius_norm());
    }

    #[test]
    fn hessenberg_factorization_real_and_complex() {
        check_hessenberg(&random_real(30, 2));
        check_hessenberg(&random_complex(30, 3));
    }

    #[test]
    fn triangular_input_zero_iterations() {
        let a = DenseMatrix::from_row_major(3, alloc::vec![1.0, 2.0, 3.0, 0.0, 4.0, 5.0, 0.0, 0.0, 6.0]).unwrap();
        let r = qr_eigenvalues(a);
        assert_eq!(r.iterations, 0);
        let mut ev = r.eigenvalues;
        canonical_sort(&mut ev);
        assert_eq!(ev, [c(1.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)]);
        let ac = DenseMatrix::from_row_major(2, alloc::vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, 0.0), c(-3.0, 0.5)]).unwrap();
        let r = qr_eigenvalues(ac);
        assert_eq!(r.iterations, 0);
        assert!(r.eigenvalues.contains(&c(1.0, 1.0)) && r.eigenvalues.contains(&c(-3.0, 0.5)));
    }

    #[test]
    fn rotation_matrix() {
        let a = DenseMatrix::from_row_major(2, alloc::vec![0.0, -1.0, 1.0, 0.0]).unwrap();
        let ev = dense_eigenvalues(&a).eigenvalues;
        assert_eq!(ev, [c(0.0, -1.0), c(0.0, 1.0)]);
        let ev = dense_eigenvalues(&a.to_complex()).eigenvalues;
        assert!(hausdorff(&ev, &[c(0.0, 1.0), c(0.0, -1.0)]) < 1e-15);
    }

    /// Real X diag-block(d) X⁻¹ with 2x2 rotation blocks for complex pairs.
    fn similar_to_known(n_pairs: usize, n_real: usize, seed: u64) -> (DenseMatrix<f64>, Vec<Complex64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 * n_pairs + n_real;
        let mut d = DenseMatrix::zeros(n);
        let mut want = Vec::new();
        for p in 0..n_pairs {
            let (re, im) = (rng.gen_range(-3.0..3.0), rng.gen_range(0.5..3.0));
            let k = 2 * p;
            d[(k, k)] = re;
            d[(k + 1, k + 1)] = re;
            d[(k, k + 1)] = im;
            d[(k + 1, k)] = -im;
            want.push(c(re, im));
            want.push(c(re, -im));
        }
        for r in 0..n_real {
            let v = rng.gen_range(-3.0..3.0);
            d[(2 * n_pairs + r, 2 * n_pairs + r)] = v;
            want.push(c(v, 0.0));
        }
        // Well-conditioned X = I + small random.
        let x = DenseMatrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 } + 0.3 * rng.gen_range(-1.0..1.0) / (n as f64).sqrt());
        let lu = DenseLu::factor(x.clone(), 1e-14).unwrap();
        let mut xinv = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = lu.solve(&e);
            for i in 0..n {
                xinv[(i, j)] = col[i];
            }
        }
        (x.matmul(&d).matmul(&xinv), want)
    }

    #[test]
    fn construct_and_recover_real() {
        let (a, want) = similar_to_known(7, 6, 42);
        assert_eq!(want.len(), 20);
        let r = dense_eigenvalues(&a);
        assert!(r.all_converged());
        for w in &want {
            let best = r.eigenvalues.iter().map(|z| (z - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(best <= 1e-9 * w.norm().max(1.0), "{w}: {best}");
        }
        assert!(nearest_matching_distance(&r.eigenvalues, &want) <= 1e-9 * 3.0);
    }

    #[test]
    fn construct_and_recover_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 20;
        let want: Vec<Complex64> = (0..n).map(|_| c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))).collect();
        let x = DenseMatrix::from_fn(n, |i, j| {
            let d = if i == j { 1.0 } else { 0.0 };
            c(d + 0.2 * rng.gen_range(-1.0..1.0) / 4.5, 0.2 * rng.gen_range(-1.0..1.0) / 4.5)
        });
        let lu = DenseLu::factor(x.clone(), 1e-14).unwrap();
        let mut xinv = DenseMatrix::zeros(n);
        for j in 0..n {
            let mut e = vec![c(0.0, 0.0); n];
            e[j] = c(1.0, 0.0);
            let col = lu.solve(&e);
            for i in 0..n {
                xinv[(i, j)] = col[i];
            }
        }
        let a = x.matmul(&DenseMatrix::from_diagonal(&want)).matmul(&xinv);
        let r = dense_eigenvalues(&a);
        assert!(r.all_converged());
        assert!(nearest_matching_distance(&r.eigenvalues, &want) <= 1e-9 * 3.0);
    }

    #[test]
    fn trace_and_determinant_conservation() {
        for n in 1..=8 {
            let a = random_real(n, 100 + n as u64);
            let ev = dense_eigenvalues(&a).eigenvalues;
            let sum = ev.iter().fold(c(0.0, 0.0), |s, z| s + z);
            let scale = n as f64 * a.max_abs();
            assert!((sum - c(a.trace(), 0.0)).norm() <= 1e-10 * scale);
            let prod = ev.iter().fold(c(1.0, 0.0), |p, z| p * z);
            let det = determinant(&a);
            assert!((prod - c(det, 0.0)).norm() <= 1e-8 * det.abs().max(1e-300), "n={n}");

            let ac = random_complex(n, 200 + n as u64);
            let ev = dense_eigenvalues(&ac).eigenvalues;
            let sum = ev.iter().fold(c(0.0, 0.0), |s, z| s + z);
            assert!((sum - ac.trace()).norm() <= 1e-10 * n as f64 * ac.max_abs());
            let prod = ev.iter().fold(c(1.0, 0.0), |p, z| p * z);
            let det = determinant(&ac);
            assert!((prod - det).norm() <= 1e-8 * det.norm());
        }
    }

    #[test]
    fn real_input_pairs_exactly_conjugate() {
        let a = random_real(40, 8);
        let ev = dense_eigenvalues(&a).eigenvalues;
        for z in ev.iter().filter(|z| z.im != 0.0) {
            assert!(ev.contains(&z.conj()));
        }
    }

    #[test]
    fn eigenvector_examples() {
        let a = DenseMatrix::from_diagonal(&[1.0, 2.0, 5.0]);
        let (x, r) = eigenvector(&a, c(2.0, 0.0)).unwrap();
        assert!(r < 1e-8);
        assert!((x[1].norm() - 1.0).abs() < 1e-9);

        let j = DenseMatrix::from_row_major(2, alloc::vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let (x, r) = eigenvector(&j, c(0.0, 0.0)).unwrap();
        assert!(r < 1e-8, "{r}");
        assert!((x[0].norm() - 1.0).abs() < 1e-8);

        let comp = DenseMatrix::from_row_major(2, alloc::vec![0.0, 1.0, -2.0, -3.0]).unwrap();
        let (x, r) = eigenvector(&comp, c(-1.0, 0.0)).unwrap();
        assert!(r < 1e-8);
        let ratio = x[1] / x[0];
        assert!((ratio - c(-1.0, 0.0)).norm() < 1e-8);
    }
}
