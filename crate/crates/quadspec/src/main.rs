use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quadspec::config::{self, parse_grid, Settings};
use quadspec::emit::{field_csv, field_json, field_record, field_svg, record_json, spectrum_csv, spectrum_svg, write_file};
use quadspec::error::AppError;
use quadspec::record::RunStatus;
use quadspec::{field, mtx, run, sweep};
use quadspec_core::pseudospectra::SminOptions;

/// Spectra and pseudospectra of finite-difference quadratic pencils.
#[derive(Parser)]
#[command(name = "quadspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Box with zero boundary values: H0 = -Δ + |x|⁴, H1 = -2c|x|².
    Dirichlet(RunArgs),
    /// Torus: H0 = -Δ, H1 = (1/i) Σ a_j(x_j) ∂_j.
    Periodic(RunArgs),
    /// s_min(A - zI) on a rectangle of shifts.
    Pseudospectrum(PseudoArgs),
    /// Cartesian product over n, extent and c, or a named preset.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<String>,
    /// Box side (Dirichlet) or period (periodic).
    #[arg(long, allow_hyphen_values = true)]
    extent: Option<String>,
    /// Grid points per axis.
    #[arg(long = "n")]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Per-axis advection coefficient: `const:V`, `V` or `sin[:amp[:freq]]`.
    #[arg(long, allow_hyphen_values = true)]
    coeff: Vec<String>,
    /// First torus node on every axis (default: -extent/2).
    #[arg(long, allow_hyphen_values = true)]
    origin: Option<String>,
    /// dense or arnoldi.
    #[arg(long)]
    solver: Option<String>,
    /// Arnoldi shift `RE,IM`; repeat for several windows.
    #[arg(long, allow_hyphen_values = true)]
    shift: Vec<String>,
    #[arg(long)]
    want: Option<String>,
    #[arg(long)]
    subspace: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_restarts: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Allow dense companions beyond order 12000.
    #[arg(long)]
    force: bool,
    /// Record wall time (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl ProblemArgs {
    fn settings(&self, problem: Option<&str>) -> Result<Settings, AppError> {
        let mut s = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::new(),
        };
        if let Some(p) = problem {
            if let Some(prev) = s.get("problem") {
                if prev != p {
                    return Err(AppError::Config(format!(
                        "config file sets `problem = {prev}` but the `{p}` subcommand was used"
                    )));
                }
            }
            s.set("problem", p, "subcommand");
        }
        let scalars = [
            ("dim", &self.dim),
            ("extent", &self.extent),
            ("n", &self.n),
            ("c", &self.c),
            ("origin", &self.origin),
            ("solver", &self.solver),
            ("want", &self.want),
            ("subspace", &self.subspace),
            ("tol", &self.tol),
            ("max_restarts", &self.max_restarts),
            ("seed", &self.seed),
        ];
        for (key, value) in scalars {
            if let Some(v) = value {
                s.set(key, v.clone(), format!("--{}", key.replace('_', "-")));
            }
        }
        if !self.coeff.is_empty() {
            s.set("coeff", self.coeff.join(","), "--coeff");
        }
        if !self.shift.is_empty() {
            s.set("shift", self.shift.join(";"), "--shift");
        }
        if self.force {
            s.set("force", "true", "--force");
        }
        if self.timing {
            s.set("timing", "true", "--timing");
        }
        Ok(s)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Without any of --out-csv/--out-json/--out-svg the CSV goes to stdout.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    /// Writes `<PREFIX>_H0.mtx` and `<PREFIX>_H1.mtx`.
    #[arg(long)]
    out_mtx: Option<PathBuf>,
}

#[derive(Args)]
struct PseudoArgs {
    /// dirichlet or periodic.
    #[arg(long)]
    problem: Option<String>,
    #[command(flatten)]
    args: ProblemArgs,
    /// `re0,re1,im0,im1,nx,ny`, endpoints included.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Threads for the scan (default: available cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// dirichlet or periodic (or `problem` in the config file).
    #[arg(long)]
    problem: Option<String>,
    #[command(flatten)]
    args: ProblemArgs,
    /// Named run matrix instead of a config; `figures` reproduces the
    /// figure set at desk size.
    #[arg(long)]
    preset: Option<String>,
    /// Use the full figure mesh sizes with Arnoldi windows.
    #[arg(long)]
    paper_scale: bool,
    #[arg(long)]
    out_dir: PathBuf,
    /// Concurrent runs (default: available cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn single(problem: &str, a: RunArgs) -> Result<u8, AppError> {
    let mut s = a.problem.settings(Some(problem))?;
    for (key, v) in [("out_csv", &a.out_csv), ("out_json", &a.out_json), ("out_svg", &a.out_svg), ("out_mtx", &a.out_mtx)] {
        if let Some(p) = v {
            s.set(key, p.display().to_string(), format!("--{}", key.replace('_', "-")));
        }
    }
    let cfg = config::resolve_single(&s)?;
    if let Some(prefix) = &cfg.outputs.mtx {
        mtx::export(prefix, &run::assemble(&cfg)?)?;
    }
    let record = run::run(&cfg)?;
    let o = &cfg.outputs;
    if let Some(p) = &o.csv {
        write_file(p, &spectrum_csv(&record.eigenvalues))?;
    }
    if let Some(p) = &o.json {
        write_file(p, &record_json(&record))?;
    }
    if let Some(p) = &o.svg {
        write_file(p, &spectrum_svg(&record.tag, &record.eigenvalues))?;
    }
    if o.csv.is_none() && o.json.is_none() && o.svg.is_none() {
        std::io::stdout()
            .write_all(spectrum_csv(&record.eigenvalues).as_bytes())
            .map_err(|e| AppError::Io(format!("stdout: {e}")))?;
    }
    if let Some(st) = &record.stats {
        eprintln!(
            "{}: {} eigenvalues, max residual {:.2e}, {} unconverged",
            record.tag,
            record.eigenvalues.len(),
            st.max_residual,
            st.unconverged
        );
    }
    for d in &record.oracles {
        eprintln!("{}: oracle {} distance {:.3e}", record.tag, d.oracle, d.distance);
    }
    Ok(0)
}

fn pseudospectrum(a: PseudoArgs) -> Result<u8, AppError> {
    let mut s = a.args.settings(a.problem.as_deref())?;
    if let Some(g) = &a.grid {
        s.set("grid", g.clone(), "--grid");
    }
    let cfg = config::resolve_single(&s)?;
    let grid_text = s
        .get("grid")
        .ok_or_else(|| AppError::Config("pseudospectrum needs `--grid re0,re1,im0,im1,nx,ny`".into()))?;
    let grid = parse_grid(grid_text).map_err(|e| AppError::Config(format!("grid: {e}")))?;
    if !(a.rel_tol > 0.0) || a.max_iter == 0 {
        return Err(AppError::Config("--rel-tol must be positive and --max-iter at least 1".into()));
    }
    let opts = SminOptions { rel_tol: a.rel_tol, max_iter: a.max_iter, seed: cfg.seed };
    let pencil = run::assemble(&cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.workers.unwrap_or_else(sweep::default_workers).max(1))
        .build()
        .map_err(|e| AppError::Config(format!("cannot start worker pool: {e}")))?;
    let f = pool.install(|| field::scan(&pencil, &grid, &opts));
    let tag = format!("{}_smin", cfg.tag());
    if let Some(p) = &a.out_csv {
        write_file(p, &field_csv(&f))?;
    }
    if let Some(p) = &a.out_json {
        write_file(p, &field_json(&field_record(tag.clone(), (&cfg).into(), &f)))?;
    }
    if let Some(p) = &a.out_svg {
        write_file(p, &field_svg(&tag, &f))?;
    }
    if a.out_csv.is_none() && a.out_json.is_none() && a.out_svg.is_none() {
        std::io::stdout()
            .write_all(field_csv(&f).as_bytes())
            .map_err(|e| AppError::Io(format!("stdout: {e}")))?;
    }
    let (lo, hi) = f.min_max();
    eprintln!("{tag}: {} points, smin in [{lo:.3e}, {hi:.3e}]", f.values.len());
    Ok(0)
}

fn sweep_cmd(a: SweepArgs) -> Result<u8, AppError> {
    let configs = match &a.preset {
        Some(name) => {
            if !a.args.settings(a.problem.as_deref())?.is_empty() {
                return Err(AppError::Config("--preset cannot be combined with problem settings".into()));
            }
            sweep::preset(name, a.paper_scale)?
        }
        None => {
            if a.paper_scale {
                return Err(AppError::Config("--paper-scale only applies to --preset".into()));
            }
            config::resolve(&a.args.settings(a.problem.as_deref())?)?
        }
    };
    let workers = a.workers.unwrap_or_else(sweep::default_workers);
    let index = sweep::run_sweep(&configs, &a.out_dir, workers)?;
    for r in &index.runs {
        match r.status {
            RunStatus::Ok => eprintln!("ok      {}", r.tag),
            RunStatus::Failed => eprintln!("FAILED  {}: {}", r.tag, r.error.as_deref().unwrap_or("")),
        }
    }
    eprintln!("{} runs, {} failed; index at {}", index.runs.len(), index.failures(), a.out_dir.join("index.json").display());
    Ok(if index.failures() > 0 { 2 } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dirichlet(a) => single("dirichlet", a),
        Command::Periodic(a) => single("periodic", a),
        Command::Pseudospectrum(a) => pseudospectrum(a),
        Command::Sweep(a) => sweep_cmd(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
