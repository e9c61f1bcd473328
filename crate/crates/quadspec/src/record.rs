//! The on-disk spectrum record. Field order is fixed by the struct layout
//! so identical runs serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::config::{coefficient_tag, ExperimentConfig, Problem, SolverKind};

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> String {
    format!("quadspec {}", env!("CARGO_PKG_VERSION"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub problem: Problem,
    pub dim: usize,
    pub extent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<f64>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<String>,
    pub solver: SolverKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shifts: Vec<[f64; 2]>,
    pub want: usize,
    pub subspace: usize,
    pub tol: f64,
    pub seed: u64,
}

impl From<&ExperimentConfig> for ConfigEcho {
    fn from(cfg: &ExperimentConfig) -> Self {
        let arnoldi = cfg.solver == SolverKind::Arnoldi;
        ConfigEcho {
            problem: cfg.problem,
            dim: cfg.dim,
            extent: cfg.extent,
            origin: cfg.origin,
            n: cfg.n_points,
            c: cfg.c,
            coefficients: cfg.coefficients.iter().map(coefficient_tag).collect(),
            solver: cfg.solver,
            shifts: if arnoldi {
                cfg.arnoldi.shifts.iter().map(|z| [z.re, z.im]).collect()
            } else {
                Vec::new()
            },
            want: cfg.arnoldi.want,
            subspace: cfg.arnoldi.subspace,
            tol: cfg.arnoldi.tol,
            seed: cfg.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub re: f64,
    pub im: f64,
    /// Normalized backward error of the pencil eigenpair.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub companion_order: usize,
    /// QR sweeps (dense) or restarts summed over shifts (Arnoldi).
    pub iterations: usize,
    pub unconverged: usize,
    pub max_residual: f64,
    /// Shifts actually factored; one differs from the request when the
    /// requested shift sat on an eigenvalue.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shifts_used: Vec<[f64; 2]>,
}

/// Distance between the computed spectrum and a closed-form reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDelta {
    pub oracle: String,
    /// Hausdorff distance for a full spectrum, otherwise the largest
    /// distance from a computed value to the reference set.
    pub distance: f64,
    pub reference_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub schema_version: u32,
    pub tool: String,
    pub tag: String,
    pub config: ConfigEcho,
    pub status: RunStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub eigenvalues: Vec<EigenRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<SolverStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub oracles: Vec<OracleDelta>,
    /// Only present with `--timing`; left out by default so reruns are
    /// byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl SpectrumRecord {
    pub fn failed(cfg: &ExperimentConfig, error: impl std::fmt::Display) -> Self {
        SpectrumRecord {
            schema_version: SCHEMA_VERSION,
            tool: tool_version(),
            tag: cfg.tag(),
            config: cfg.into(),
            status: RunStatus::Failed,
            error: Some(error.to_string()),
            eigenvalues: Vec::new(),
            stats: None,
            oracles: Vec::new(),
            wall_time_s: None,
        }
    }
}
