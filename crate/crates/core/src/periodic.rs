//! Operators on the periodic torus for
//! `-Δu + λ²u + (λ/i) Σ_j a_j(x_j) ∂u/∂x_j = 0`.
//!
//! `H0` is the wrap-around second difference and `H1` applies centered
//! differences `(u_{+} - u_{-}) / (2ih)` along each axis, scaled row by
//! row by `a_j` evaluated at the row node's own `j`-th coordinate.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::{BoundaryKind, GridSpec};
use crate::pencil::QuadraticPencil;
use crate::sparse::{ComplexSparseOperator, SparseOperator, Structure, TripletBuilder};

/// Tolerance on `frequency * L / 2π` being an integer.
const PERIODICITY_TOL: f64 = 1e-12;

/// A one-variable advection coefficient `a_j(x_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientSpec {
    Constant(f64),
    /// `amplitude * sin(frequency * t)`.
    Sinusoid { amplitude: f64, frequency: f64 },
}

impl CoefficientSpec {
    pub fn sin() -> Self {
        CoefficientSpec::Sinusoid {
            amplitude: 1.0,
            frequency: 1.0,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            CoefficientSpec::Constant(v) => v,
            CoefficientSpec::Sinusoid {
                amplitude,
                frequency,
            } => amplitude * Float::sin(frequency * t),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, CoefficientSpec::Constant(_))
    }

    /// Checks finiteness and, for a sinusoid, that it is `period`-periodic.
    pub fn validate(&self, period: f64) -> Result<()> {
        match *self {
            CoefficientSpec::Constant(v) if v.is_finite() => Ok(()),
            CoefficientSpec::Constant(v) => Err(Error::InvalidArgument(format!(
                "coefficient must be finite, got {v}"
            ))),
            CoefficientSpec::Sinusoid {
                amplitude,
                frequency,
            } => {
                if !amplitude.is_finite() || !frequency.is_finite() {
                    return Err(Error::InvalidArgument(
                        "sinusoid amplitude and frequency must be finite".into(),
                    ));
                }
                let turns = frequency * period / (2.0 * PI);
                if Float::abs(turns - Float::round(turns)) > PERIODICITY_TOL * Float::max(1.0, Float::abs(turns)) {
                    return Err(Error::InvalidArgument(format!(
                        "sin({frequency} t) is not periodic with period {period}"
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPencilConfig {
    pub grid: GridSpec,
    pub coefficients: Vec<CoefficientSpec>,
}

impl PeriodicPencilConfig {
    pub fn new(grid: GridSpec, coefficients: Vec<CoefficientSpec>) -> Result<Self> {
        grid.require(BoundaryKind::PeriodicTorus)?;
        if coefficients.len() != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: grid.dim(),
                found: coefficients.len(),
            });
        }
        for c in &coefficients {
            c.validate(grid.extent())?;
        }
        Ok(PeriodicPencilConfig { grid, coefficients })
    }

    pub fn constant_coefficients(&self) -> Option<Vec<f64>> {
        self.coefficients
            .iter()
            .map(|c| match c {
                CoefficientSpec::Constant(v) => Some(*v),
                _ => None,
            })
            .collect()
    }
}

#[inline]
fn forward(g: &GridSpec, flat: usize, idx: &[usize; 3], axis: usize) -> usize {
    let s = g.stride(axis);
    if idx[axis] + 1 == g.n_points() {
        flat + s - g.n_points() * s
    } else {
        flat + s
    }
}

#[inline]
fn backward(g: &GridSpec, flat: usize, idx: &[usize; 3], axis: usize) -> usize {
    let s = g.stride(axis);
    if idx[axis] == 0 {
        flat + (g.n_points() - 1) * s
    } else {
        flat - s
    }
}

/// `H0 = -Δ` with circulant closure: diagonal `2 dim/h²`, `-1/h²` at each
/// periodic neighbor.
pub fn assemble_periodic_laplacian(g: &GridSpec) -> Result<SparseOperator> {
    g.require(BoundaryKind::PeriodicTorus)?;
    let m = g.len();
    let inv_h2 = 1.0 / (g.spacing() * g.spacing());
    let mut b = TripletBuilder::with_capacity(m, m * (2 * g.dim() + 1));
    for row in 0..m {
        let idx = g.split(row);
        b.push(row, row, 2.0 * g.dim() as f64 * inv_h2);
        for axis in 0..g.dim() {
            b.push(row, forward(g, row, &idx, axis), -inv_h2);
            b.push(row, backward(g, row, &idx, axis), -inv_h2);
        }
    }
    b.build(Structure::Symmetric)
}

/// `H1 = (1/(2ih)) Σ_j A_j`, the centered advection operator.
pub fn assemble_advection(g: &GridSpec, coeffs: &[CoefficientSpec]) -> Result<ComplexSparseOperator> {
    g.require(BoundaryKind::PeriodicTorus)?;
    if coeffs.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: coeffs.len(),
        });
    }
    // 1/(2ih) = -i/(2h)
    let factor = Complex64::new(0.0, -1.0 / (2.0 * g.spacing()));
    let m = g.len();
    let mut b = TripletBuilder::with_capacity(m, m * 2 * g.dim());
    for row in 0..m {
        let idx = g.split(row);
        for (axis, coeff) in coeffs.iter().enumerate() {
            let a = coeff.eval(g.axis_coord(idx[axis]));
            b.push(row, forward(g, row, &idx, axis), factor * a);
            b.push(row, backward(g, row, &idx, axis), -factor * a);
        }
    }
    let structure = if coeffs.iter().all(CoefficientSpec::is_constant) {
        Structure::Symmetric
    } else {
        Structure::General
    };
    b.build(structure)
}

pub fn assemble_periodic_pencil(cfg: &PeriodicPencilConfig) -> Result<QuadraticPencil<Complex64>> {
    let h0 = assemble_periodic_laplacian(&cfg.grid)?.to_complex();
    let h1 = assemble_advection(&cfg.grid, &cfg.coefficients)?;
    QuadraticPencil::new(h0, h1)
}
