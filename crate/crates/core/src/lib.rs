//! Finite-difference discretizations of the quadratic operator pencil
//! `L(λ) = H0 + λ H1 + λ² I` on Dirichlet boxes and periodic tori, its
//! companion linearization, and the numerical machinery to locate its
//! spectrum and pseudospectrum.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel sweeps live in the `quadspec` companion crate.
//!
//! Module map:
//!
//! * [`grid`]: box and torus grids, flat-index convention (x fastest).
//! * [`dirichlet`]: `H0 = -Δ + diag(|x|⁴)`, `H1 = -2c diag(|x|²)`.
//! * [`periodic`]: wrap-around `-Δ` and the advection operator
//!   `(1/i) Σ a_j(x_j) ∂_j`.
//! * [`pencil`]: pencils, the companion matrix, residuals and the
//!   structured shifted solve through a banded factorization of `L(z)`.
//! * [`eig`]: balancing, Hessenberg reduction, Francis double-shift and
//!   complex single-shift QR, inverse-iteration eigenvectors.
//! * [`arnoldi`]: shift-invert Arnoldi with explicit restarts and locking.
//! * [`pseudospectra`]: `s_min(A - zI)` pointwise and on a grid.
//! * [`oracles`]: closed-form spectra used to check everything above.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arnoldi;
pub mod banded;
pub mod dense;
pub mod dirichlet;
pub mod eig;
mod error;
pub mod grid;
pub mod metrics;
pub mod oracles;
pub mod ordering;
pub mod pencil;
pub mod periodic;
pub mod pseudospectra;
pub mod scalar;
pub mod sparse;
pub mod symmetric;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use grid::{BoundaryKind, GridSpec};
pub use pencil::{Companion, EigenPair, QuadraticPencil};
pub use scalar::Scalar;
pub use sparse::{ComplexSparseOperator, CsrMatrix, SparseOperator, Structure};
