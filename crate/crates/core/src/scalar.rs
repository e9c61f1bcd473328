//! The two scalar fields the crate works over: `f64` for the Dirichlet
//! path and `Complex64` for the periodic path.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::Float;

pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Default
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const ZERO: Self;
    const ONE: Self;
    const IS_COMPLEX: bool;

    fn from_real(x: f64) -> Self;
    /// Narrowing conversion; the imaginary part is dropped for `f64`.
    fn from_complex(z: Complex64) -> Self;
    fn to_complex(self) -> Complex64;
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn norm_sqr(self) -> f64;
    /// `|re| + |im|`, a cheap magnitude used for pivoting and deflation.
    fn abs1(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    const IS_COMPLEX: bool = false;

    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_complex(z: Complex64) -> Self {
        z.re
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        Float::abs(self)
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn abs1(self) -> f64 {
        Float::abs(self)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    const ONE: Self = Complex64::new(1.0, 0.0);
    const IS_COMPLEX: bool = true;

    #[inline]
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn from_complex(z: Complex64) -> Self {
        z
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn norm_sqr(self) -> f64 {
        Complex64::norm_sqr(&self)
    }
    #[inline]
    fn abs1(self) -> f64 {
        Float::abs(self.re) + Float::abs(self.im)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
}

/// Euclidean norm with scaling against overflow.
pub fn norm2<T: Scalar>(x: &[T]) -> f64 {
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.modulus()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let inv = 1.0 / scale;
    let sum: f64 = x.iter().map(|v| v.scale(inv).norm_sqr()).sum();
    scale * sum.sqrt()
}

/// `Σ conj(x_i) y_i`.
pub fn dot_c(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter()
        .zip(y)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

/// `y += alpha * x`.
pub fn axpy_c(alpha: Complex64, x: &[Complex64], y: &mut [Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Normalizes `x` in place and returns its original norm.
pub fn normalize<T: Scalar>(x: &mut [T]) -> f64 {
    let nrm = norm2(x);
    if nrm > 0.0 {
        let inv = 1.0 / nrm;
        for v in x.iter_mut() {
            *v = v.scale(inv);
        }
    }
    nrm
}
