//! Uniform grids on the box `[-L, L]^n` and the torus `[0, L)^n`.
//!
//! Unknowns are stacked with x fastest: the flat index of `(i, j, k)` is
//! `k N² + j N + i` (all indices 0-based here).

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// Homogeneous Dirichlet box `[-L, L]^n`, ghost nodes outside read as 0.
    DirichletBox,
    /// Periodic torus of period `L` in every direction.
    PeriodicTorus,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::DirichletBox => "dirichlet-box",
            BoundaryKind::PeriodicTorus => "periodic-torus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dim: usize,
    kind: BoundaryKind,
    extent: f64,
    n_points: usize,
    spacing: f64,
    origin: f64,
}

impl GridSpec {
    /// Builds a grid. For a box, `extent` is the half-width `L` and the
    /// spacing is `2L/(N-1)`; for a torus it is the period and the spacing
    /// is `L/N` (node `N` is identified with node 0).
    pub fn new(dim: usize, kind: BoundaryKind, extent: f64, n_points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "dimension must be 1, 2 or 3, got {dim}"
            )));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "extent must be positive and finite, got {extent}"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidArgument(format!(
                "need at least 3 points per axis, got {n_points}"
            )));
        }
        let (spacing, origin) = match kind {
            BoundaryKind::DirichletBox => (2.0 * extent / (n_points - 1) as f64, -extent),
            BoundaryKind::PeriodicTorus => (extent / n_points as f64, 0.0),
        };
        Ok(GridSpec {
            dim,
            kind,
            extent,
            n_points,
            spacing,
            origin,
        })
    }

    /// Shifts a periodic grid so that axis nodes start at `origin`
    /// (e.g. `-π` for the torus `[-π, π)`). Boxes are always centered.
    pub fn with_origin(mut self, origin: f64) -> Result<Self> {
        if self.kind != BoundaryKind::PeriodicTorus {
            return Err(Error::WrongGridKind {
                expected: BoundaryKind::PeriodicTorus.name(),
                found: self.kind.name(),
            });
        }
        if !origin.is_finite() {
            return Err(Error::InvalidArgument(format!("origin must be finite, got {origin}")));
        }
        self.origin = origin;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// Number of unknowns, `N^dim`.
    pub fn len(&self) -> usize {
        self.n_points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of node `i` along any axis.
    #[inline]
    pub fn axis_coord(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    pub fn axis_nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.axis_coord(i)).collect()
    }

    /// Stride of `axis` in the flat ordering.
    #[inline]
    pub fn stride(&self, axis: usize) -> usize {
        self.n_points.pow(axis as u32)
    }

    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: idx.len(),
            });
        }
        let mut flat = 0;
        for (axis, &i) in idx.iter().enumerate() {
            if i >= self.n_points {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.n_points,
                });
            }
            flat += i * self.stride(axis);
        }
        Ok(flat)
    }

    /// Per-axis indices of a flat index; entries past `dim` are zero.
    pub fn multi_index(&self, flat: usize) -> Result<[usize; 3]> {
        if flat >= self.len() {
            return Err(Error::IndexOutOfRange {
                index: flat,
                len: self.len(),
            });
        }
        Ok(self.split(flat))
    }

    #[inline]
    pub(crate) fn split(&self, flat: usize) -> [usize; 3] {
        let n = self.n_points;
        let mut out = [0; 3];
        let mut rest = flat;
        for slot in out.iter_mut().take(self.dim) {
            *slot = rest % n;
            rest /= n;
        }
        out
    }

    pub fn node_coords(&self, flat: usize) -> Result<Vec<f64>> {
        let idx = self.multi_index(flat)?;
        Ok(idx[..self.dim].iter().map(|&i| self.axis_coord(i)).collect())
    }

    /// `|x|²` at a flat node.
    #[inline]
    pub(crate) fn radius_sq(&self, flat: usize) -> f64 {
        let idx = self.split(flat);
        idx[..self.dim]
            .iter()
            .map(|&i| {
                let x = self.axis_coord(i);
                x * x
            })
            .sum()
    }

    pub(crate) fn require(&self, kind: BoundaryKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongGridKind {
                expected: kind.name(),
                found: self.kind.name(),
            })
        }
    }
}

/// Free-function form of [`GridSpec::new`].
pub fn make_grid(dim: usize, kind: BoundaryKind, extent: f64, n_points: usize) -> Result<GridSpec> {
    GridSpec::new(dim, kind, extent, n_points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn dirichlet_spacing_and_nodes() {
        let g = make_grid(2, BoundaryKind::DirichletBox, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.axis_nodes(), [-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(g.len(), 25);
    }

    #[test]
    fn periodic_spacing_and_nodes() {
        let g = make_grid(2, BoundaryKind::PeriodicTorus, 2.0 * PI, 4).unwrap();
        assert!((g.spacing() - PI / 2.0).abs() < 1e-15);
        let nodes = g.axis_nodes();
        for (got, want) in nodes.iter().zip([0.0, PI / 2.0, PI, 1.5 * PI]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn flat_index_3d() {
        // 1-based (2, 1, 3) is 0-based (1, 0, 2): 2*9 + 0*3 + 1 = 19 (20 one-based).
        let g = make_grid(3, BoundaryKind::DirichletBox, 1.0, 3).unwrap();
        assert_eq!(g.spacing(), 1.0);
        assert_eq!(g.flat_index(&[1, 0, 2]).unwrap(), 19);
    }

    #[test]
    fn node_coords_examples() {
        let g = make_grid(2, BoundaryKind::DirichletBox, 1.0, 3).unwrap();
        assert_eq!(g.node_coords(4).unwrap(), [0.0, 0.0]);
        assert_eq!(g.node_coords(0).unwrap(), [-1.0, -1.0]);
        let g = make_grid(3, BoundaryKind::PeriodicTorus, 2.0 * PI, 4).unwrap();
        for c in g.node_coords(63).unwrap() {
            assert!((c - 1.5 * PI).abs() < 1e-14);
        }
        assert!(matches!(
            g.node_coords(64),
            Err(Error::IndexOutOfRange { index: 64, len: 64 })
        ));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(0, BoundaryKind::DirichletBox, 1.0, 5).is_err());
        assert!(make_grid(4, BoundaryKind::DirichletBox, 1.0, 5).is_err());
        assert!(make_grid(2, BoundaryKind::DirichletBox, 0.0, 5).is_err());
        assert!(make_grid(2, BoundaryKind::DirichletBox, -1.0, 5).is_err());
        assert!(make_grid(2, BoundaryKind::PeriodicTorus, 1.0, 2).is_err());
        assert!(make_grid(2, BoundaryKind::DirichletBox, 1.0, 5)
            .unwrap()
            .with_origin(0.0)
            .is_err());
    }

    #[test]
    fn coordinate_span() {
        let g = make_grid(1, BoundaryKind::DirichletBox, 0.7, 11).unwrap();
        assert_eq!(g.axis_coord(0), -0.7);
        assert!((g.axis_coord(10) - 0.7).abs() < 1e-15);
        let g = make_grid(1, BoundaryKind::PeriodicTorus, 3.0, 6).unwrap();
        assert_eq!(g.axis_coord(0), 0.0);
        assert!((g.axis_coord(5) - (3.0 - g.spacing())).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn flat_multi_round_trip(dim in 1usize..=3, n in 3usize..9, periodic: bool, seed in 0usize..10_000) {
            let kind = if periodic { BoundaryKind::PeriodicTorus } else { BoundaryKind::DirichletBox };
            let g = make_grid(dim, kind, 1.3, n).unwrap();
            prop_assert!(g.spacing() > 0.0);
            let f = seed % g.len();
            let idx = g.multi_index(f).unwrap();
            prop_assert_eq!(g.flat_index(&idx[..dim]).unwrap(), f);
        }
    }
}
