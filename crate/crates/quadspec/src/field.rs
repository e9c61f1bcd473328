//! Parallel pseudospectrum scan. Each node is solved independently with
//! the same seeded start vector, so the field does not depend on how the
//! work is split between threads.

use rayon::prelude::*;

use quadspec_core::pseudospectra::{smin_at, PseudospectrumField, SminOptions, SminPoint, SminStatus, ZGrid};
use quadspec_core::{QuadraticPencil, Scalar};

use crate::run::Assembled;

fn scan_parallel<T: Scalar>(p: &QuadraticPencil<T>, grid: &ZGrid, opts: &SminOptions) -> PseudospectrumField {
    let points: Vec<SminPoint> = (0..grid.len())
        .into_par_iter()
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

pub fn scan(pencil: &Assembled, grid: &ZGrid, opts: &SminOptions) -> PseudospectrumField {
    match pencil {
        Assembled::Real(p) => scan_parallel(p, grid, opts),
        Assembled::Complex(p) => scan_parallel(p, grid, opts),
    }
}
