//! Parameter sweeps: a bounded worker pool runs each configuration and
//! writes `<tag>.csv`, `<tag>.json` and `<tag>.svg` into one directory,
//! then an `index.json` listing every run in input order.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use quadspec_core::periodic::CoefficientSpec;
use quadspec_core::Complex64;

use crate::config::{ArnoldiOptions, ExperimentConfig, Outputs, Problem, SolverKind};
use crate::emit::{record_json, spectrum_csv, spectrum_svg, write_file};
use crate::error::AppError;
use crate::record::{tool_version, RunStatus, SpectrumRecord, SCHEMA_VERSION};
use crate::run::run;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub tag: String,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepIndex {
    pub schema_version: u32,
    pub tool: String,
    pub runs: Vec<IndexEntry>,
}

impl SweepIndex {
    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.status == RunStatus::Failed).count()
    }
}

/// Runs one configuration and writes its files. A solver or config
/// failure yields a JSON failure record and no CSV/SVG; only IO errors
/// propagate.
fn run_one(cfg: &ExperimentConfig, dir: &Path) -> Result<IndexEntry, AppError> {
    let tag = cfg.tag();
    let json = format!("{tag}.json");
    match run(cfg) {
        Ok(record) => {
            let csv = format!("{tag}.csv");
            let svg = format!("{tag}.svg");
            write_file(&dir.join(&csv), &spectrum_csv(&record.eigenvalues))?;
            write_file(&dir.join(&json), &record_json(&record))?;
            write_file(&dir.join(&svg), &spectrum_svg(&tag, &record.eigenvalues))?;
            Ok(IndexEntry { tag, status: RunStatus::Ok, error: None, files: vec![csv, json, svg] })
        }
        Err(AppError::Io(e)) => Err(AppError::Io(e)),
        Err(e) => {
            let record = SpectrumRecord::failed(cfg, &e);
            write_file(&dir.join(&json), &record_json(&record))?;
            Ok(IndexEntry { tag, status: RunStatus::Failed, error: Some(e.to_string()), files: vec![json] })
        }
    }
}

/// Runs every configuration on at most `workers` threads.
pub fn run_sweep(configs: &[ExperimentConfig], dir: &Path, workers: usize) -> Result<SweepIndex, AppError> {
    let mut tags: Vec<String> = configs.iter().map(|c| c.tag()).collect();
    tags.sort();
    if let Some(w) = tags.windows(2).find(|w| w[0] == w[1]) {
        return Err(AppError::Config(format!("sweep produces duplicate run `{}`", w[0])));
    }
    std::fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| AppError::Config(format!("cannot start worker pool: {e}")))?;
    let runs = pool.install(|| {
        configs
            .par_iter()
            .map(|cfg| run_one(cfg, dir))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let index = SweepIndex { schema_version: SCHEMA_VERSION, tool: tool_version(), runs };
    let text = serde_json::to_string_pretty(&index).expect("index is serializable") + "\n";
    write_file(&dir.join("index.json"), &text)?;
    Ok(index)
}

/// Full figure mesh sizes and their desk-sized stand-ins.
#[derive(Debug, Clone, Copy)]
struct Scale {
    n2: usize,
    n2_coarse: usize,
    n3: usize,
    n3_coarse: usize,
}

const DESK: Scale = Scale { n2: 40, n2_coarse: 20, n3: 12, n3_coarse: 8 };
const FULL: Scale = Scale { n2: 100, n2_coarse: 50, n3: 25, n3_coarse: 15 };

/// Shift windows used at full size, where the dense path is out of reach.
fn window_shifts() -> Vec<Complex64> {
    [10.0, 40.0, 80.0].iter().map(|&y| Complex64::new(0.0, y)).collect()
}

fn base(problem: Problem, dim: usize, n: usize, extent: f64, full: bool) -> ExperimentConfig {
    ExperimentConfig {
        problem,
        dim,
        extent,
        origin: (problem == Problem::Periodic).then_some(-extent / 2.0),
        n_points: n,
        c: None,
        coefficients: Vec::new(),
        solver: if full { SolverKind::Arnoldi } else { SolverKind::Dense },
        arnoldi: ArnoldiOptions {
            shifts: if full { window_shifts() } else { Vec::new() },
            want: 50,
            subspace: 120,
            tol: 1e-10,
            max_restarts: 50,
        },
        seed: 0x5eed,
        force: false,
        timing: false,
        outputs: Outputs::default(),
    }
}

/// The figure matrix: Dirichlet spectra over `c`, mesh and box-size
/// comparisons, and periodic spectra for several advection fields, in 2D
/// and 3D. Runs shared between panels appear once.
pub fn figure_preset(full_scale: bool) -> Vec<ExperimentConfig> {
    let s = if full_scale { FULL } else { DESK };
    let mut out: Vec<ExperimentConfig> = Vec::new();
    let mut push = |cfg: ExperimentConfig| {
        if !out.iter().any(|o| o.tag() == cfg.tag()) {
            out.push(cfg);
        }
    };
    let dirichlet = |dim: usize, n: usize, extent: f64, c: f64| ExperimentConfig {
        c: Some(c),
        ..base(Problem::Dirichlet, dim, n, extent, full_scale)
    };
    for (dim, n, coarse) in [(2, s.n2, s.n2_coarse), (3, s.n3, s.n3_coarse)] {
        for c in [0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
            push(dirichlet(dim, n, 1.0, c));
        }
        push(dirichlet(dim, coarse, 1.0, 1.0));
        for extent in [0.5, 2.0] {
            push(dirichlet(dim, n, extent, 1.0));
        }
    }
    let r2 = 2f64.sqrt();
    let k = CoefficientSpec::Constant;
    let periodic_sets: [(usize, Vec<CoefficientSpec>); 7] = [
        (2, vec![k(1.0), k(1.0)]),
        (2, vec![k(1.0), k(r2)]),
        (2, vec![k(1.0), k(5.0 * r2)]),
        (2, vec![CoefficientSpec::sin(); 2]),
        (3, vec![k(1.0), k(1.0), k(1.0)]),
        (3, vec![k(1.0), k(r2), k(5.0 * r2)]),
        (3, vec![CoefficientSpec::sin(); 3]),
    ];
    for (dim, coefficients) in periodic_sets {
        let n = if dim == 2 { s.n2 } else { s.n3 };
        push(ExperimentConfig {
            coefficients,
            ..base(Problem::Periodic, dim, n, 2.0 * PI, full_scale)
        });
    }
    out
}

pub fn preset(name: &str, full_scale: bool) -> Result<Vec<ExperimentConfig>, AppError> {
    match name {
        "figures" => Ok(figure_preset(full_scale)),
        other => Err(AppError::Config(format!("unknown preset `{other}` (known: figures)"))),
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

pub fn index_path(dir: &Path) -> PathBuf {
    dir.join("index.json")
}
