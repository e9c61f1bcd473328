//! Real symmetric eigenvalues: Householder tridiagonalization followed by
//! implicit QL with Wilkinson-type shifts. Kept free of the nonsymmetric
//! machinery so it can serve as an independent check on it.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::dense::DenseMatrix;

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric part of `a` (only the lower triangle is
/// read), ascending.
pub fn symmetric_eigenvalues(a: &DenseMatrix<f64>) -> Vec<f64> {
    let n = a.order();
    let mut w: Vec<Vec<f64>> = (0..n).map(|i| a.row(i)[..=i].to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        if l == 0 {
            e[i] = w[i][l];
            continue;
        }
        let scale: f64 = w[i][..=l].iter().map(|v| Float::abs(*v)).sum();
        if scale == 0.0 {
            e[i] = w[i][l];
            continue;
        }
        let mut h = 0.0;
        for v in w[i][..=l].iter_mut() {
            *v /= scale;
            h += *v * *v;
        }
        let f = w[i][l];
        let g = if f >= 0.0 { -Float::sqrt(h) } else { Float::sqrt(h) };
        e[i] = scale * g;
        h -= f * g;
        w[i][l] = f - g;
        let u: Vec<f64> = w[i][..=l].to_vec();
        // p = A u / h over the leading (l+1) block, stored in e[0..=l].
        let mut f = 0.0;
        for j in 0..=l {
            let mut g = 0.0;
            for k in 0..=j {
                g += w[j][k] * u[k];
            }
            for k in j + 1..=l {
                g += w[k][j] * u[k];
            }
            e[j] = g / h;
            f += e[j] * u[j];
        }
        let hh = f / (h + h);
        for j in 0..=l {
            e[j] -= hh * u[j];
        }
        for j in 0..=l {
            let (fj, gj) = (u[j], e[j]);
            for k in 0..=j {
                w[j][k] -= fj * e[k] + gj * u[k];
            }
        }
    }
    for i in 0..n {
        d[i] = w[i][i];
    }
    // e[i] holds the (i, i-1) entry; shift to e[i] = (i+1, i).
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[0..n-1]`, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = Float::abs(d[m]) + Float::abs(d[m + 1]);
                if Float::abs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l || sweeps >= MAX_QL_SWEEPS {
                break;
            }
            sweeps += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = Float::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = Float::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Number of eigenvalues of the tridiagonal matrix below `x` (Sturm count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let b2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
        if q == 0.0 {
            q = -f64::EPSILON * (Float::abs(diag[i]) + Float::abs(x)).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest (0-based) tridiagonal eigenvalue by bisection.
pub fn bisect_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { Float::abs(off[i - 1]) } else { 0.0 } + if i + 1 < n { Float::abs(off[i]) } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
