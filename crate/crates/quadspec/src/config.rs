//! Experiment configuration: a flat `key = value` file plus command-line
//! overrides, resolved into one [`ExperimentConfig`] per sweep point.
//!
//! ```text
//! # 2D Dirichlet sweep over c
//! problem = dirichlet
//! dim = 2
//! extent = 1
//! n = 40
//! c = [0, 0.5, 1, 2]
//! solver = dense
//! ```
//!
//! `n`, `extent` and `c` may hold lists (`[a, b]` or `a, b`); the sweep is
//! their cartesian product. `coeff` takes one spec per axis separated by
//! commas, `shift` takes `re,im` pairs separated by `;`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use quadspec_core::periodic::CoefficientSpec;
use quadspec_core::pseudospectra::ZGrid;
use quadspec_core::Complex64;

use crate::error::AppError;

pub const KNOWN_KEYS: &[&str] = &[
    "problem",
    "dim",
    "extent",
    "origin",
    "n",
    "c",
    "coeff",
    "solver",
    "shift",
    "want",
    "subspace",
    "tol",
    "max_restarts",
    "seed",
    "force",
    "timing",
    "out_csv",
    "out_json",
    "out_svg",
    "out_mtx",
    "grid",
];

/// Raw settings with the place each value came from.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    entries: BTreeMap<String, (String, String)>,
}

impl Settings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_file(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> Result<Self, AppError> {
        let mut s = Settings::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let origin = format!("{source}:{}", lineno + 1);
            let Some((key, value)) = line.split_once('=') else {
                return Err(AppError::Config(format!("{origin}: expected `key = value`, got `{line}`")));
            };
            let key = key.trim().replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(AppError::Config(format!("{origin}: unknown key `{key}`")));
            }
            if s.entries.contains_key(&key) {
                return Err(AppError::Config(format!("{origin}: key `{key}` given twice")));
            }
            s.entries.insert(key, (value.trim().to_string(), origin));
        }
        Ok(s)
    }

    /// Sets (or overrides) `key`; `origin` names the flag for diagnostics.
    pub fn set(&mut self, key: &str, value: impl Into<String>, origin: impl Into<String>) {
        debug_assert!(KNOWN_KEYS.contains(&key), "{key}");
        self.entries.insert(key.to_string(), (value.into(), origin.into()));
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn origin(&self, key: &str) -> String {
        self.entries
            .get(key)
            .map(|(_, o)| o.clone())
            .unwrap_or_else(|| "defaults".into())
    }

    fn err(&self, key: &str, msg: impl std::fmt::Display) -> AppError {
        AppError::Config(format!("{}: `{key}`: {msg}", self.origin(key)))
    }

    fn scalar<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, AppError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| self.err(key, format!("expected {what}, got `{v}`"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<Vec<T>>, AppError> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
        let items: Vec<&str> = inner.split(',').map(str::trim).collect();
        if items.iter().any(|s| s.is_empty()) {
            return Err(self.err(key, format!("empty entry in list `{v}`")));
        }
        items
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|_| self.err(key, format!("expected {what}, got `{s}`")))
            })
            .collect::<Result<Vec<T>, _>>()
            .map(Some)
    }

    fn flag(&self, key: &str) -> Result<bool, AppError> {
        match self.get(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(self.err(key, format!("expected true/false, got `{v}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Dirichlet,
    Periodic,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Dirichlet => "dirichlet",
            Problem::Periodic => "periodic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dense,
    Arnoldi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArnoldiOptions {
    pub shifts: Vec<Complex64>,
    pub want: usize,
    pub subspace: usize,
    pub tol: f64,
    pub max_restarts: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    /// Prefix for `<prefix>_H0.mtx` and `<prefix>_H1.mtx`.
    pub mtx: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub dim: usize,
    pub extent: f64,
    /// Torus origin (periodic only).
    pub origin: Option<f64>,
    pub n_points: usize,
    /// Dirichlet only.
    pub c: Option<f64>,
    /// Periodic only, one per axis.
    pub coefficients: Vec<CoefficientSpec>,
    pub solver: SolverKind,
    pub arnoldi: ArnoldiOptions,
    pub seed: u64,
    pub force: bool,
    pub timing: bool,
    pub outputs: Outputs,
}

/// Largest companion order the dense path accepts without `--force`.
pub const DENSE_ORDER_LIMIT: usize = 12000;

impl ExperimentConfig {
    pub fn companion_order(&self) -> usize {
        2 * self.n_points.pow(self.dim as u32)
    }

    /// Deterministic file stem, e.g. `dirichlet_2d_N40_L1_c0.5`.
    pub fn tag(&self) -> String {
        let base = format!("{}_{}d_N{}_L{}", self.problem.name(), self.dim, self.n_points, self.extent);
        match self.problem {
            Problem::Dirichlet => format!("{base}_c{}", self.c.unwrap_or(0.0)),
            Problem::Periodic => {
                let a: Vec<String> = self.coefficients.iter().map(coefficient_tag).collect();
                format!("{base}_a{}", a.join("-"))
            }
        }
    }
}

pub fn coefficient_tag(c: &CoefficientSpec) -> String {
    match *c {
        CoefficientSpec::Constant(v) => format!("{v}"),
        CoefficientSpec::Sinusoid { amplitude, frequency } if amplitude == 1.0 && frequency == 1.0 => "sin".into(),
        CoefficientSpec::Sinusoid { amplitude, frequency } => format!("sin{amplitude}x{frequency}"),
    }
}

/// `const:V`, a bare number, or `sin[:amp[:freq]]`.
pub fn parse_coefficient(s: &str) -> Result<CoefficientSpec, String> {
    let s = s.trim();
    let mut parts = s.split(':');
    let head = parts.next().unwrap_or("");
    let nums: Vec<&str> = parts.collect();
    let num = |t: &str| -> Result<f64, String> {
        parse_real(t).ok_or_else(|| format!("bad number `{t}` in coefficient `{s}`"))
    };
    match head {
        "const" if nums.len() == 1 => Ok(CoefficientSpec::Constant(num(nums[0])?)),
        "sin" if nums.len() <= 2 => Ok(CoefficientSpec::Sinusoid {
            amplitude: nums.first().map(|t| num(t)).transpose()?.unwrap_or(1.0),
            frequency: nums.get(1).map(|t| num(t)).transpose()?.unwrap_or(1.0),
        }),
        _ if nums.is_empty() => parse_real(head)
            .map(CoefficientSpec::Constant)
            .ok_or_else(|| format!("expected const:V or sin[:amp[:freq]], got `{s}`")),
        _ => Err(format!("expected const:V or sin[:amp[:freq]], got `{s}`")),
    }
}

/// A real number, also accepting `pi`, `sqrt(x)` and `k*...` products
/// such as `5*sqrt(2)` or `2*pi`.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('*') {
        return Some(parse_real(a)? * parse_real(b)?);
    }
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
            return parse_real(rest).map(|v| -v);
        }
    }
    if s == "pi" {
        return Some(PI);
    }
    if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        return parse_real(inner).map(f64::sqrt);
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub fn parse_shift(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("shift must be `RE,IM`, got `{s}`"))?;
    match (parse_real(re), parse_real(im)) {
        (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
        _ => Err(format!("shift must be `RE,IM`, got `{s}`")),
    }
}

pub fn parse_grid(s: &str) -> Result<ZGrid, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("grid must be `re0,re1,im0,im1,nx,ny`, got `{s}`"));
    }
    let r: Vec<f64> = parts[..4]
        .iter()
        .map(|t| parse_real(t).ok_or_else(|| format!("bad number `{t}` in grid")))
        .collect::<Result<_, _>>()?;
    let nx: usize = parts[4].parse().map_err(|_| format!("bad nx `{}`", parts[4]))?;
    let ny: usize = parts[5].parse().map_err(|_| format!("bad ny `{}`", parts[5]))?;
    ZGrid::new(r[0], r[1], r[2], r[3], nx, ny).map_err(|e| e.to_string())
}

/// Resolves settings into one config per point of the sweep product
/// `n × extent × c` (in that nesting order).
pub fn resolve(s: &Settings) -> Result<Vec<ExperimentConfig>, AppError> {
    let problem = match s.get("problem") {
        Some("dirichlet") => Problem::Dirichlet,
        Some("periodic") => Problem::Periodic,
        Some(v) => return Err(s.err("problem", format!("expected dirichlet or periodic, got `{v}`"))),
        None => return Err(AppError::Config("`problem` is required (dirichlet or periodic)".into())),
    };
    let dim: usize = s
        .scalar("dim", "integer")?
        .ok_or_else(|| AppError::Config("`dim` is required".into()))?;
    if !(1..=3).contains(&dim) {
        return Err(s.err("dim", format!("must be 1, 2 or 3, got {dim}")));
    }
    let ns: Vec<usize> = s
        .list("n", "integer")?
        .ok_or_else(|| AppError::Config("`n` is required".into()))?;
    if let Some(bad) = ns.iter().find(|&&n| n < 3) {
        return Err(s.err("n", format!("need at least 3 points per axis, got {bad}")));
    }
    let extents: Vec<f64> = match s.get("extent") {
        None => vec![match problem {
            Problem::Dirichlet => 1.0,
            Problem::Periodic => 2.0 * PI,
        }],
        Some(_) => {
            let raw: Vec<String> = s.list("extent", "number")?.unwrap_or_default();
            raw.iter()
                .map(|t| parse_real(t).filter(|v| *v > 0.0).ok_or_else(|| s.err("extent", format!("expected a positive number, got `{t}`"))))
                .collect::<Result<_, _>>()?
        }
    };
    let origin = match s.get("origin") {
        None => None,
        Some(v) => Some(parse_real(v).ok_or_else(|| s.err("origin", format!("expected a number, got `{v}`")))?),
    };

    let cs: Vec<Option<f64>>;
    let mut coefficients = Vec::new();
    match problem {
        Problem::Dirichlet => {
            if s.get("coeff").is_some() {
                return Err(s.err("coeff", "only valid for the periodic problem"));
            }
            if s.get("origin").is_some() {
                return Err(s.err("origin", "only valid for the periodic problem"));
            }
            let raw: Vec<String> = s
                .list("c", "number")?
                .ok_or_else(|| AppError::Config("`c` is required for the dirichlet problem".into()))?;
            cs = raw
                .iter()
                .map(|t| parse_real(t).map(Some).ok_or_else(|| s.err("c", format!("expected a number, got `{t}`"))))
                .collect::<Result<_, _>>()?;
        }
        Problem::Periodic => {
            if s.get("c").is_some() {
                return Err(s.err("c", "only valid for the dirichlet problem"));
            }
            let raw = s
                .get("coeff")
                .ok_or_else(|| AppError::Config("`coeff` is required for the periodic problem".into()))?;
            for item in raw.trim_start_matches('[').trim_end_matches(']').split(',') {
                coefficients.push(parse_coefficient(item).map_err(|e| s.err("coeff", e))?);
            }
            if coefficients.len() == 1 && dim > 1 {
                coefficients = vec![coefficients[0]; dim];
            }
            if coefficients.len() != dim {
                return Err(s.err("coeff", format!("need one coefficient per axis ({dim}), got {}", coefficients.len())));
            }
            cs = vec![None];
        }
    }

    let solver = match s.get("solver") {
        None | Some("dense") => SolverKind::Dense,
        Some("arnoldi") => SolverKind::Arnoldi,
        Some(v) => return Err(s.err("solver", format!("expected dense or arnoldi, got `{v}`"))),
    };
    let shifts = match s.get("shift") {
        None => Vec::new(),
        Some(v) => v
            .split(';')
            .map(|t| parse_shift(t.trim()).map_err(|e| s.err("shift", e)))
            .collect::<Result<_, _>>()?,
    };
    let want = s.scalar("want", "integer")?.unwrap_or(20usize);
    let subspace = s.scalar("subspace", "integer")?.unwrap_or((2 * want).max(80));
    let tol = s.scalar("tol", "number")?.unwrap_or(1e-10);
    let max_restarts = s.scalar("max_restarts", "integer")?.unwrap_or(50usize);
    if solver == SolverKind::Arnoldi {
        if shifts.is_empty() {
            return Err(AppError::Config("the arnoldi solver needs at least one `shift`".into()));
        }
        if want == 0 || 2 * want > subspace {
            return Err(s.err("want", format!("need 1 <= want <= subspace/2, got want = {want}, subspace = {subspace}")));
        }
        if !(tol > 0.0) {
            return Err(s.err("tol", "must be positive"));
        }
    }
    let seed = s.scalar("seed", "unsigned integer")?.unwrap_or(0x5eed_u64);
    let force = s.flag("force")?;
    let timing = s.flag("timing")?;
    let outputs = Outputs {
        csv: s.get("out_csv").map(PathBuf::from),
        json: s.get("out_json").map(PathBuf::from),
        svg: s.get("out_svg").map(PathBuf::from),
        mtx: s.get("out_mtx").map(PathBuf::from),
    };

    let mut out = Vec::new();
    for &n in &ns {
        for &extent in &extents {
            for &c in &cs {
                let cfg = ExperimentConfig {
                    problem,
                    dim,
                    extent,
                    origin: match problem {
                        Problem::Periodic => Some(origin.unwrap_or(-extent / 2.0)),
                        Problem::Dirichlet => None,
                    },
                    n_points: n,
                    c,
                    coefficients: coefficients.clone(),
                    solver,
                    arnoldi: ArnoldiOptions {
                        shifts: shifts.clone(),
                        want,
                        subspace,
                        tol,
                        max_restarts,
                    },
                    seed,
                    force,
                    timing,
                    outputs: outputs.clone(),
                };
                if cfg.solver == SolverKind::Dense && !cfg.force && cfg.companion_order() > DENSE_ORDER_LIMIT {
                    return Err(AppError::Config(format!(
                        "{}: dense companion of order {} exceeds {DENSE_ORDER_LIMIT}; use `--solver arnoldi` with `--shift`, or pass `--force`",
                        cfg.tag(),
                        cfg.companion_order()
                    )));
                }
                out.push(cfg);
            }
        }
    }
    Ok(out)
}

/// Like [`resolve`] but insists on a single configuration.
pub fn resolve_single(s: &Settings) -> Result<ExperimentConfig, AppError> {
    let mut all = resolve(s)?;
    if all.len() != 1 {
        return Err(AppError::Config(format!(
            "lists in `n`, `extent` or `c` describe {} runs; use the `sweep` subcommand",
            all.len()
        )));
    }
    Ok(all.remove(0))
}
