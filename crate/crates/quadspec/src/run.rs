//! One experiment end to end: assemble, solve, certify, compare.

use std::time::Instant;

use rayon::prelude::*;

use quadspec_core::arnoldi::{arnoldi_shift_invert, ArnoldiConfig};
use quadspec_core::dirichlet::{assemble_dirichlet_pencil, DirichletPencilConfig};
use quadspec_core::eig::{canonical_cmp, dense_eigenvalues, EigenField};
use quadspec_core::metrics::{distance_to_set, hausdorff};
use quadspec_core::oracles::{c0_spectrum, discrete_dispersion_spectrum};
use quadspec_core::pencil::{Companion, CompanionMode, DEFAULT_DENSE_CAP};
use quadspec_core::periodic::{assemble_periodic_pencil, PeriodicPencilConfig};
use quadspec_core::symmetric::symmetric_eigenvalues;
use quadspec_core::{BoundaryKind, Complex64, GridSpec, QuadraticPencil};

use crate::config::{ExperimentConfig, Problem, SolverKind};
use crate::error::AppError;
use crate::record::{
    tool_version, EigenRow, OracleDelta, RunStatus, SolverStats, SpectrumRecord, SCHEMA_VERSION,
};

/// Above this pencil order the symmetric reference solve for `c = 0` is
/// skipped.
const C0_ORACLE_MAX_ORDER: usize = 2500;

/// Two Arnoldi values closer than this (relative) are the same eigenvalue
/// found from two shifts.
const MERGE_TOL: f64 = 1e-8;

pub enum Assembled {
    Real(QuadraticPencil<f64>),
    Complex(QuadraticPencil<Complex64>),
}

pub fn grid_of(cfg: &ExperimentConfig) -> Result<GridSpec, AppError> {
    let kind = match cfg.problem {
        Problem::Dirichlet => BoundaryKind::DirichletBox,
        Problem::Periodic => BoundaryKind::PeriodicTorus,
    };
    let mut g = GridSpec::new(cfg.dim, kind, cfg.extent, cfg.n_points)?;
    if let Some(o) = cfg.origin {
        g = g.with_origin(o)?;
    }
    Ok(g)
}

pub fn assemble(cfg: &ExperimentConfig) -> Result<Assembled, AppError> {
    let g = grid_of(cfg)?;
    Ok(match cfg.problem {
        Problem::Dirichlet => {
            let c = cfg.c.ok_or_else(|| AppError::Config("dirichlet problem needs `c`".into()))?;
            Assembled::Real(assemble_dirichlet_pencil(&DirichletPencilConfig::new(g, c)?)?)
        }
        Problem::Periodic => Assembled::Complex(assemble_periodic_pencil(&PeriodicPencilConfig::new(
            g,
            cfg.coefficients.clone(),
        )?)?),
    })
}

struct Solved {
    values: Vec<Complex64>,
    rows: Vec<EigenRow>,
    stats: SolverStats,
    /// The whole spectrum, as opposed to an Arnoldi window.
    complete: bool,
}

fn solve_dense<T: EigenField>(p: &QuadraticPencil<T>, force: bool) -> Result<Solved, AppError> {
    let cap = if force { usize::MAX / 4 } else { DEFAULT_DENSE_CAP };
    let comp = Companion::new(p, CompanionMode::Dense, cap)?;
    let res = dense_eigenvalues(comp.dense().expect("dense mode"));
    let residuals: Vec<f64> = res
        .eigenvalues
        .par_iter()
        .map(|&l| p.eigenpair(l).map(|e| e.residual))
        .collect::<Result<_, _>>()?;
    let rows = rows_from(&res.eigenvalues, &residuals)?;
    Ok(Solved {
        stats: SolverStats {
            companion_order: comp.order(),
            iterations: res.iterations,
            unconverged: res.converged.iter().filter(|c| !**c).count(),
            max_residual: residuals.iter().copied().fold(0.0, f64::max),
            shifts_used: Vec::new(),
        },
        values: res.eigenvalues,
        rows,
        complete: true,
    })
}

fn solve_arnoldi<T: EigenField>(p: &QuadraticPencil<T>, cfg: &ExperimentConfig) -> Result<Solved, AppError> {
    let m = p.order();
    let mut found: Vec<(Complex64, f64, bool)> = Vec::new();
    let mut iterations = 0;
    let mut shifts_used = Vec::new();
    for &shift in &cfg.arnoldi.shifts {
        let ac = ArnoldiConfig {
            shift,
            subspace: cfg.arnoldi.subspace.min(2 * m),
            wanted: cfg.arnoldi.want,
            tol: cfg.arnoldi.tol,
            max_restarts: cfg.arnoldi.max_restarts,
            seed: cfg.seed,
        };
        let out = arnoldi_shift_invert(p, &ac)?;
        iterations += out.restarts;
        shifts_used.push([out.shift_used.re, out.shift_used.im]);
        let vectors = out.spectrum.eigenvectors.as_ref().expect("arnoldi returns vectors");
        // Values from earlier windows can each absorb one value from this
        // window; repeats inside a window are genuine multiplicities.
        let earlier = found.len();
        let mut claimed = vec![false; earlier];
        for (k, &l) in out.spectrum.eigenvalues.iter().enumerate() {
            let dup = (0..earlier).find(|&j| !claimed[j] && (found[j].0 - l).norm() <= MERGE_TOL * (1.0 + l.norm()));
            if let Some(j) = dup {
                claimed[j] = true;
                continue;
            }
            let residual = p.residual(l, &vectors[k][..m])?;
            found.push((l, residual, out.spectrum.converged[k]));
        }
    }
    found.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    let values: Vec<Complex64> = found.iter().map(|f| f.0).collect();
    let residuals: Vec<f64> = found.iter().map(|f| f.1).collect();
    Ok(Solved {
        rows: rows_from(&values, &residuals)?,
        stats: SolverStats {
            companion_order: 2 * m,
            iterations,
            unconverged: found.iter().filter(|f| !f.2).count(),
            max_residual: residuals.iter().copied().fold(0.0, f64::max),
            shifts_used,
        },
        values,
        complete: false,
    })
}

fn rows_from(values: &[Complex64], residuals: &[f64]) -> Result<Vec<EigenRow>, AppError> {
    values
        .iter()
        .zip(residuals)
        .map(|(l, &r)| {
            if l.re.is_finite() && l.im.is_finite() && r.is_finite() {
                Ok(EigenRow { re: l.re, im: l.im, residual: r })
            } else {
                Err(AppError::Solver(format!("non-finite eigenvalue or residual at {l}")))
            }
        })
        .collect()
}

fn compare(name: &str, computed: &[Complex64], reference: &[Complex64], complete: bool) -> OracleDelta {
    let distance = if complete {
        hausdorff(computed, reference)
    } else {
        computed
            .iter()
            .map(|&z| distance_to_set(z, reference))
            .fold(0.0, f64::max)
    };
    OracleDelta {
        oracle: name.into(),
        distance,
        reference_size: reference.len(),
    }
}

fn oracles(cfg: &ExperimentConfig, pencil: &Assembled, solved: &Solved) -> Result<Vec<OracleDelta>, AppError> {
    let mut out = Vec::new();
    match (cfg.problem, pencil) {
        (Problem::Dirichlet, Assembled::Real(p)) if cfg.c == Some(0.0) && p.order() <= C0_ORACLE_MAX_ORDER => {
            let mu = symmetric_eigenvalues(&p.h0().to_dense());
            let reference = c0_spectrum(&mu)?;
            out.push(compare("c0_symmetric_h0", &solved.values, &reference, solved.complete));
        }
        (Problem::Periodic, _) if cfg.coefficients.iter().all(|c| c.is_constant()) => {
            let reference = discrete_dispersion_spectrum(&grid_of(cfg)?, &cfg.coefficients)?;
            out.push(compare("discrete_dispersion", &solved.values, &reference, solved.complete));
        }
        _ => {}
    }
    Ok(out)
}

/// Runs one configuration. Errors are returned, not recorded; callers that
/// want a failure record use [`SpectrumRecord::failed`].
pub fn run(cfg: &ExperimentConfig) -> Result<SpectrumRecord, AppError> {
    let start = Instant::now();
    let pencil = assemble(cfg)?;
    let solved = match (&pencil, cfg.solver) {
        (Assembled::Real(p), SolverKind::Dense) => solve_dense(p, cfg.force)?,
        (Assembled::Complex(p), SolverKind::Dense) => solve_dense(p, cfg.force)?,
        (Assembled::Real(p), SolverKind::Arnoldi) => solve_arnoldi(p, cfg)?,
        (Assembled::Complex(p), SolverKind::Arnoldi) => solve_arnoldi(p, cfg)?,
    };
    let oracles = oracles(cfg, &pencil, &solved)?;
    Ok(SpectrumRecord {
        schema_version: SCHEMA_VERSION,
        tool: tool_version(),
        tag: cfg.tag(),
        config: cfg.into(),
        status: RunStatus::Ok,
        error: None,
        eigenvalues: solved.rows,
        stats: Some(solved.stats),
        oracles,
        wall_time_s: cfg.timing.then(|| start.elapsed().as_secs_f64()),
    })
}

pub fn eigenvalues(record: &SpectrumRecord) -> Vec<Complex64> {
    record.eigenvalues.iter().map(|r| Complex64::new(r.re, r.im)).collect()
}
