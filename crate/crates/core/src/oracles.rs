//! Closed-form spectra used as ground truth. Nothing in here touches the
//! assembled matrices: each formula is evaluated directly so agreement with
//! the solvers means something.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, GridSpec};
use crate::periodic::CoefficientSpec;

/// Roots of `λ² + σ1 λ + σ2 = 0`. The first root uses the square root of
/// the discriminant with nonnegative imaginary part (nonnegative real part
/// when the discriminant is a positive real).
pub fn quadratic_roots(sigma1: f64, sigma2: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(sigma1 * sigma1 - 4.0 * sigma2, 0.0);
    let mut w = disc.sqrt();
    if w.im < 0.0 || (w.im == 0.0 && w.re < 0.0) {
        w = -w;
    }
    let plus = (w - sigma1) * 0.5;
    let minus = (-w - sigma1) * 0.5;
    // Recover the smaller root from the product to avoid cancellation.
    if sigma2 != 0.0 && w.im == 0.0 {
        if plus.norm() >= minus.norm() {
            return (plus, Complex64::new(sigma2, 0.0) / plus);
        }
        return (Complex64::new(sigma2, 0.0) / minus, minus);
    }
    (plus, minus)
}

/// Roots of `λ² + λ Σ a_j k_j + |k|² = 0` for a (real) wave vector `k`.
pub fn continuous_dispersion_roots(a: &[f64], k: &[f64]) -> Result<(Complex64, Complex64)> {
    if a.len() != k.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: k.len(),
        });
    }
    let s: f64 = a.iter().zip(k).map(|(x, y)| x * y).sum();
    let k2: f64 = k.iter().map(|y| y * y).sum();
    Ok(quadratic_roots(s, k2))
}

fn constant_values(coeffs: &[CoefficientSpec]) -> Result<Vec<f64>> {
    coeffs
        .iter()
        .map(|c| match c {
            CoefficientSpec::Constant(v) => Ok(*v),
            _ => Err(Error::NonConstantCoefficient),
        })
        .collect()
}

/// The two eigenvalues carried by Fourier mode `m` of the assembled
/// constant-coefficient periodic pencil:
/// `σ1 = Σ a_j sin(2π m_j/N)/h`, `σ2 = Σ (2 - 2cos(2π m_j/N))/h²`.
pub fn discrete_dispersion_roots(
    g: &GridSpec,
    coeffs: &[CoefficientSpec],
    m: &[usize],
) -> Result<(Complex64, Complex64)> {
    if g.kind() != BoundaryKind::PeriodicTorus {
        return Err(Error::WrongGridKind {
            expected: BoundaryKind::PeriodicTorus.name(),
            found: g.kind().name(),
        });
    }
    let a = constant_values(coeffs)?;
    if a.len() != g.dim() || m.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: if a.len() != g.dim() { a.len() } else { m.len() },
        });
    }
    let n = g.n_points();
    if let Some(&bad) = m.iter().find(|&&mj| mj >= n) {
        return Err(Error::IndexOutOfRange { index: bad, len: n });
    }
    let h = g.spacing();
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    for (aj, &mj) in a.iter().zip(m) {
        let theta = 2.0 * PI * mj as f64 / n as f64;
        s1 += aj * Float::sin(theta) / h;
        s2 += (2.0 - 2.0 * Float::cos(theta)) / (h * h);
    }
    Ok(quadratic_roots(s1, s2))
}

/// Union of [`discrete_dispersion_roots`] over all `N^dim` modes.
pub fn discrete_dispersion_spectrum(g: &GridSpec, coeffs: &[CoefficientSpec]) -> Result<Vec<Complex64>> {
    let n = g.n_points();
    let dim = g.dim();
    let total = n.pow(dim as u32);
    let mut out = Vec::with_capacity(2 * total);
    let mut m = [0usize; 3];
    for flat in 0..total {
        let mut rest = flat;
        for mj in m.iter_mut().take(dim) {
            *mj = rest % n;
            rest /= n;
        }
        let (p, q) = discrete_dispersion_roots(g, coeffs, &m[..dim])?;
        out.push(p);
        out.push(q);
    }
    Ok(out)
}

/// `{+i√μ, -i√μ}` for each `μ`.
pub fn c0_spectrum(h0_eigs: &[f64]) -> Result<Vec<Complex64>> {
    let mut out = Vec::with_capacity(2 * h0_eigs.len());
    for &mu in h0_eigs {
        if !(mu >= 0.0) {
            return Err(Error::InvalidArgument(alloc::format!(
                "H0 eigenvalue {mu} is negative"
            )));
        }
        let r = Float::sqrt(mu);
        out.push(Complex64::new(0.0, r));
        out.push(Complex64::new(0.0, -r));
    }
    Ok(out)
}

/// Eigenvalues of the ghost-zero `-Δ` on `n^dim` nodes with spacing `h`,
/// ascending.
pub fn laplacian_eigs(dim: usize, n: usize, h: f64) -> Vec<f64> {
    let one_d: Vec<f64> = (1..=n)
        .map(|p| {
            // 4 sin²(pπ/(2(N+1))) written as 2 - 2cos(pπ/(N+1)).
            (2.0 - 2.0 * Float::cos(p as f64 * PI / (n + 1) as f64)) / (h * h)
        })
        .collect();
    let mut out = alloc::vec![0.0];
    for _ in 0..dim {
        out = out
            .iter()
            .flat_map(|base| one_d.iter().map(move |v| base + v))
            .collect();
    }
    out.sort_by(f64::total_cmp);
    out
}

pub fn dirichlet_laplacian_eigs(g: &GridSpec) -> Result<Vec<f64>> {
    if g.kind() != BoundaryKind::DirichletBox {
        return Err(Error::WrongGridKind {
            expected: BoundaryKind::DirichletBox.name(),
            found: g.kind().name(),
        });
    }
    Ok(laplacian_eigs(g.dim(), g.n_points(), g.spacing()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn continuous_examples() {
        let (p, q) = continuous_dispersion_roots(&[1.0, 1.0], &[1.0, 0.0]).unwrap();
        let r3 = 3f64.sqrt() / 2.0;
        assert!((p - c(-0.5, r3)).norm() < 1e-15);
        assert!((q - c(-0.5, -r3)).norm() < 1e-15);
        assert_eq!(continuous_dispersion_roots(&[7.0, -2.0], &[0.0, 0.0]).unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));
        let (p, q) = continuous_dispersion_roots(&[2.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((p - c(-1.0, 0.0)).norm() < 1e-15 && (q - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(continuous_dispersion_roots(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn vieta_relations() {
        for &(s1, s2) in &[(1.0, 1.0), (1e8, 1.0), (-3.0, 2.0), (0.0, 5.0), (1e-3, 1e6), (5.0, 0.0)] {
            let (p, q) = quadratic_roots(s1, s2);
            let scale = s1.abs().max(1.0);
            assert!((p + q + c(s1, 0.0)).norm() <= 4.0 * f64::EPSILON * scale, "{s1} {s2}");
            assert!((p * q - c(s2, 0.0)).norm() <= 4.0 * f64::EPSILON * s2.abs().max(1.0), "{s1} {s2}");
        }
    }

    #[test]
    fn discrete_examples() {
        let g = make_grid(1, BoundaryKind::PeriodicTorus, 2.0 * PI, 4).unwrap();
        let a = [CoefficientSpec::Constant(1.0)];
        assert_eq!(discrete_dispersion_roots(&g, &a, &[0]).unwrap(), (c(0.0, 0.0), c(0.0, 0.0)));
        let (p, q) = discrete_dispersion_roots(&g, &a, &[1]).unwrap();
        let s1 = 2.0 / PI;
        let s2 = 8.0 / (PI * PI);
        let w = (4.0 * s2 - s1 * s1).sqrt();
        assert!((p - c(-s1 / 2.0, w / 2.0)).norm() < 1e-14);
        assert!((q - c(-s1 / 2.0, -w / 2.0)).norm() < 1e-14);
        assert!(matches!(
            discrete_dispersion_roots(&g, &[CoefficientSpec::sin()], &[1]),
            Err(Error::NonConstantCoefficient)
        ));
        assert!(discrete_dispersion_roots(&g, &a, &[4]).is_err());
        let d = make_grid(1, BoundaryKind::DirichletBox, 1.0, 4).unwrap();
        assert!(discrete_dispersion_roots(&d, &a, &[1]).is_err());
    }

    #[test]
    fn discrete_converges_to_continuous() {
        let l = 2.0 * PI;
        let a = [CoefficientSpec::Constant(1.0), CoefficientSpec::Constant(2f64.sqrt())];
        let m = [1usize, 2];
        let k: Vec<f64> = m.iter().map(|&mj| 2.0 * PI * mj as f64 / l).collect();
        let (cp, cq) = continuous_dispersion_roots(&[1.0, 2f64.sqrt()], &k).unwrap();
        let mut gaps = vec![];
        for n in [8usize, 16, 32, 64] {
            let g = make_grid(2, BoundaryKind::PeriodicTorus, l, n).unwrap();
            let (p, q) = discrete_dispersion_roots(&g, &a, &m).unwrap();
            gaps.push((p - cp).norm().max((q - cq).norm()));
        }
        for w in gaps.windows(2) {
            assert!(w[1] < w[0]);
            // Second order: each halving of h cuts the gap by close to 4.
            assert!(w[0] / w[1] > 3.0 && w[0] / w[1] < 4.5, "{gaps:?}");
        }
    }

    #[test]
    fn spectrum_covers_all_modes() {
        let g = make_grid(3, BoundaryKind::PeriodicTorus, 1.0, 4).unwrap();
        let a = [CoefficientSpec::Constant(1.0); 3];
        assert_eq!(discrete_dispersion_spectrum(&g, &a).unwrap().len(), 128);
    }

    #[test]
    fn c0_examples() {
        assert_eq!(
            c0_spectrum(&[1.0, 4.0]).unwrap(),
            [c(0.0, 1.0), c(0.0, -1.0), c(0.0, 2.0), c(0.0, -2.0)]
        );
        assert_eq!(c0_spectrum(&[0.0]).unwrap(), [c(0.0, 0.0), c(0.0, -0.0)]);
        assert!(c0_spectrum(&[-1e-3]).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let one = laplacian_eigs(1, 1, 1.0);
        assert!(one.len() == 1 && (one[0] - 2.0).abs() < 1e-15);
        let g = make_grid(1, BoundaryKind::DirichletBox, 1.0, 3).unwrap();
        let got = dirichlet_laplacian_eigs(&g).unwrap();
        let r2 = 2f64.sqrt();
        for (x, y) in got.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((x - y).abs() < 1e-14);
        }
        let g2 = make_grid(2, BoundaryKind::DirichletBox, 1.0, 3).unwrap();
        let two = dirichlet_laplacian_eigs(&g2).unwrap();
        assert_eq!(two.len(), 9);
        let mut want: Vec<f64> = got.iter().flat_map(|a| got.iter().map(move |b| a + b)).collect();
        want.sort_by(f64::total_cmp);
        for (x, y) in two.iter().zip(&want) {
            assert!((x - y).abs() < 1e-14);
        }
        let p = make_grid(1, BoundaryKind::PeriodicTorus, 1.0, 3).unwrap();
        assert!(dirichlet_laplacian_eigs(&p).is_err());
    }
}
