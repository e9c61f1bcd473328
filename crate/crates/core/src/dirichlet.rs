//! Finite-difference operators on the box `[-L, L]^n` with homogeneous
//! Dirichlet closure: every grid node is an unknown and stencil neighbors
//! outside the box read as zero.
//!
//! The pencil is `L(λ) = -Δ + |x|⁴ - 2cλ|x|² + λ²`, i.e.
//! `H0 = -Δ + diag(|x|⁴)` and `H1 = -2c diag(|x|²)`.

use alloc::format;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, GridSpec};
use crate::pencil::QuadraticPencil;
use crate::sparse::{SparseOperator, Structure, TripletBuilder};

/// Grid plus the coupling `c` in front of `λ|x|²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletPencilConfig {
    pub grid: GridSpec,
    pub c: f64,
}

impl DirichletPencilConfig {
    pub fn new(grid: GridSpec, c: f64) -> Result<Self> {
        grid.require(BoundaryKind::DirichletBox)?;
        if !c.is_finite() {
            return Err(Error::InvalidArgument(format!("c must be finite, got {c}")));
        }
        Ok(DirichletPencilConfig { grid, c })
    }
}

/// The discrete Laplacian `Δ` (with the `1/h²` applied): diagonal
/// `-2 dim / h²`, `1/h²` towards each in-box neighbor.
pub fn assemble_laplacian(g: &GridSpec) -> Result<SparseOperator> {
    g.require(BoundaryKind::DirichletBox)?;
    let n = g.n_points();
    let m = g.len();
    let inv_h2 = 1.0 / (g.spacing() * g.spacing());
    let diag = -2.0 * g.dim() as f64 * inv_h2;
    let mut b = TripletBuilder::with_capacity(m, m * (2 * g.dim() + 1));
    for row in 0..m {
        let idx = g.split(row);
        for axis in (0..g.dim()).rev() {
            let s = g.stride(axis);
            if idx[axis] > 0 {
                b.push(row, row - s, inv_h2);
            }
        }
        b.push(row, row, diag);
        for axis in 0..g.dim() {
            let s = g.stride(axis);
            if idx[axis] + 1 < n {
                b.push(row, row + s, inv_h2);
            }
        }
    }
    b.build(Structure::Symmetric)
}

/// `diag(|x|^power)` for `power` in {2, 4}, ordered by flat index.
pub fn assemble_potential(g: &GridSpec, power: u32) -> Result<SparseOperator> {
    g.require(BoundaryKind::DirichletBox)?;
    if power != 2 && power != 4 {
        return Err(Error::InvalidArgument(format!(
            "potential power must be 2 or 4, got {power}"
        )));
    }
    let diag: alloc::vec::Vec<f64> = (0..g.len())
        .map(|f| {
            let r2 = g.radius_sq(f);
            if power == 2 {
                r2
            } else {
                r2 * r2
            }
        })
        .collect();
    Ok(SparseOperator::from_diagonal(&diag))
}

pub fn assemble_dirichlet_pencil(cfg: &DirichletPencilConfig) -> Result<QuadraticPencil<f64>> {
    let g = &cfg.grid;
    let neg_lap = assemble_laplacian(g)?.scaled(-1.0);
    let h0 = neg_lap.add(&assemble_potential(g, 4)?)?;
    let h1 = assemble_potential(g, 2)?.scaled(-2.0 * cfg.c);
    QuadraticPencil::new(h0, h1)
}
