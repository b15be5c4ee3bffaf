//! Command-line front end. The `srvreg` binary only forwards to [`main_with_args`].

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{run_convergence, total_value, ConvergenceConfig};
use crate::error::{Error, Result};
use crate::geodesic::{geodesic, shape_distance, tau_grid};
use crate::hjb::{solve, FSource, GridSpec, Problem, Scheme, SchemeConfig, Solution};
use crate::io::{read_curve_csv, write_geodesic, write_grid_binary, write_grid_csv, write_path_csv, ParamColumn};
use crate::registration::{backtrack, eval_jh, ReparamPath};

/// Exit code for unreadable or malformed input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for numerical failures.
pub const EXIT_NUMERIC: i32 = 3;
/// Exit code for invalid options.
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "srvreg", version, about = "Elastic distances, registration and geodesics between open curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the shape distance of two curves as JSON.
    Distance(PairArgs),
    /// Write the optimal reparametrisation path as CSV (t, phi1, phi2).
    Register(PairArgs),
    /// Write geodesic curves, one CSV per tau, plus manifest.json.
    Geodesic(PairArgs),
    /// Convergence study against a fine reference solve.
    Converge(ConvergeArgs),
    /// Local maxima of the total value function as JSON.
    Localmax(PairArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    Exact,
    Fd,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Scheme: u1, uinf, v1, vinf, ddp, filtered-u, filtered-uinf, filtered-v1, filtered-v.
    #[arg(long, default_value = "vinf")]
    pub scheme: Scheme,
    /// Grid size N (the grid has (N+1)² nodes).
    #[arg(long, default_value_t = 320)]
    pub grid_n: usize,
    /// DDP radius constant k in R = k·N^r.
    #[arg(long, default_value_t = 0.75)]
    pub ddp_k: f64,
    /// DDP radius exponent r in R = k·N^r.
    #[arg(long, default_value_t = 0.5)]
    pub ddp_r: f64,
    /// Filter constant of the filtered schemes.
    #[arg(long, default_value_t = 1.0)]
    pub filter_k: f64,
    /// Forcing from finite differences of the curves or from exact SRV inner products.
    #[arg(long, value_enum, default_value_t = SourceArg::Fd)]
    pub f_source: SourceArg,
    /// Worker threads for the wavefront sweep.
    #[arg(long, env = "SRVREG_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Dump the value grid; `.bin` selects the binary format, anything else CSV.
    #[arg(long)]
    pub dump_grid: Option<PathBuf>,
    /// Curve files start with a `t` column holding the parameters.
    #[arg(long)]
    pub t_column: bool,
}

impl SolverArgs {
    pub fn config(&self) -> SchemeConfig {
        SchemeConfig {
            scheme: self.scheme,
            ddp_k: self.ddp_k,
            ddp_r: self.ddp_r,
            ddp_radius: None,
            filter_k: self.filter_k,
            f_source: match self.f_source {
                SourceArg::Exact => FSource::Exact,
                SourceArg::Fd => FSource::FiniteDifference,
            },
            threads: self.threads,
        }
    }

    fn params(&self) -> ParamColumn {
        if self.t_column {
            ParamColumn::Leading
        } else {
            ParamColumn::Implicit
        }
    }
}

#[derive(Debug, Args)]
pub struct PairArgs {
    pub curve1: PathBuf,
    pub curve2: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Output file (directory for `geodesic`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of tau values on the geodesic.
    #[arg(long, default_value_t = 7)]
    pub tau: usize,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    pub curve1: PathBuf,
    pub curve2: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated grid sizes, each dividing the reference size.
    #[arg(long, value_delimiter = ',', default_value = "20,40,80,160")]
    pub n_list: Vec<usize>,
    /// Schemes to study.
    #[arg(long, value_delimiter = ',', default_value = "u1,uinf,v1,vinf")]
    pub schemes: Vec<Scheme>,
    #[arg(long, default_value_t = 320)]
    pub reference_n: usize,
    #[arg(long, default_value = "filtered-v")]
    pub reference_scheme: Scheme,
    /// CSV report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional JSON copy of the report.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Output of `distance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub u_at_one: f64,
    #[serde(rename = "J_h")]
    pub jh: f64,
    pub distance_from_u: f64,
    #[serde(rename = "distance_from_J")]
    pub distance_from_j: f64,
    pub wall_ms: f64,
}

/// Output of `localmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMaxReport {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub u_fwd_at_one: f64,
    pub max_u_tot: f64,
    pub maxima: Vec<LocalMaxEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMaxEntry {
    pub i: usize,
    pub j: usize,
    pub x1: f64,
    pub x2: f64,
    pub u_tot: f64,
    pub plateau: usize,
}

/// Stable exit code of an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } | Error::Io(_) | Error::InvalidCurve(_) | Error::DegenerateSegment { .. } => EXIT_INPUT,
        Error::Config(_) | Error::NonNestedGrids { .. } => EXIT_CONFIG,
        Error::OutOfDomain { .. }
        | Error::Precondition(_)
        | Error::Backtrack(_)
        | Error::Antipodal(_)
        | Error::Json(_) => EXIT_NUMERIC,
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    match run(&cli, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Executes a parsed command, writing stdout output to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<()> {
    match &cli.command {
        Command::Distance(a) => cmd_distance(a, out),
        Command::Register(a) => cmd_register(a, out),
        Command::Geodesic(a) => cmd_geodesic(a, out),
        Command::Converge(a) => cmd_converge(a, out),
        Command::Localmax(a) => cmd_localmax(a, out),
    }
}

fn load_pair(c1: &Path, c2: &Path, solver: &SolverArgs) -> Result<Problem> {
    let a = read_curve_csv(c1, solver.params())?;
    let b = read_curve_csv(c2, solver.params())?;
    if a.dim() != b.dim() {
        return Err(Error::InvalidCurve(format!(
            "curves have different dimensions ({} and {})",
            a.dim(),
            b.dim()
        )));
    }
    Ok(Problem::curves(a, b))
}

fn solve_pair(a: &PairArgs) -> Result<(Problem, Solution, SchemeConfig)> {
    let cfg = a.solver.config();
    cfg.validate()?;
    let grid = GridSpec::new(a.solver.grid_n).map_err(|e| Error::Config(e.to_string()))?;
    let problem = load_pair(&a.curve1, &a.curve2, &a.solver)?;
    let solution = solve(&problem, grid, &cfg)?;
    if solution.stats.degenerate_hf > 0 {
        eprintln!(
            "warning: {} degenerate finite differences replaced by hf = 0",
            solution.stats.degenerate_hf
        );
    }
    if let Some(path) = &a.solver.dump_grid {
        dump_grid(&solution, path)?;
    }
    Ok((problem, solution, cfg))
}

fn dump_grid(solution: &Solution, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    if path.extension().is_some_and(|e| e == "bin") {
        write_grid_binary(&solution.value, file)
    } else {
        write_grid_csv(&solution.value, &solution.policy, file)
    }
}

fn registered(problem: &Problem, solution: &Solution) -> Result<(ReparamPath, f64)> {
    let (q1, q2) = problem
        .srv_fields()?
        .ok_or_else(|| Error::precondition("curve input required"))?;
    let path = backtrack(&solution.policy)?;
    let jh = eval_jh(&path, &q1, &q2);
    Ok((path, jh))
}

fn emit<W: Write>(text: &str, path: Option<&PathBuf>, out: &mut W) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn cmd_distance<W: Write>(a: &PairArgs, out: &mut W) -> Result<()> {
    let start = Instant::now();
    let (problem, solution, cfg) = solve_pair(a)?;
    let (_, jh) = registered(&problem, &solution)?;
    let u = solution.u_at_one();
    let report = DistanceReport {
        scheme: cfg.scheme.name().to_string(),
        n: solution.n(),
        u_at_one: u,
        jh,
        distance_from_u: shape_distance(u),
        distance_from_j: shape_distance(jh),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    emit(&(serde_json::to_string_pretty(&report)? + "\n"), a.out.as_ref(), out)
}

pub fn cmd_register<W: Write>(a: &PairArgs, out: &mut W) -> Result<()> {
    let (problem, solution, _) = solve_pair(a)?;
    let (path, _) = registered(&problem, &solution)?;
    match &a.out {
        Some(p) => write_path_csv(&path, File::create(p)?),
        None => write_path_csv(&path, out),
    }
}

pub fn cmd_geodesic<W: Write>(a: &PairArgs, out: &mut W) -> Result<()> {
    if a.tau == 0 {
        return Err(Error::Config("--tau must be at least 1".into()));
    }
    let (problem, solution, _) = solve_pair(a)?;
    let (q1, q2) = problem.srv_fields()?.expect("curve problem");
    let path = backtrack(&solution.policy)?;
    let result = geodesic(&path, &q1, &q2, &tau_grid(a.tau))?;
    let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("geodesic"));
    let manifest = write_geodesic(&result, &dir)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&manifest)?)?;
    Ok(())
}

pub fn cmd_converge<W: Write>(a: &ConvergeArgs, out: &mut W) -> Result<()> {
    let base = a.solver.config();
    base.validate()?;
    let problem = load_pair(&a.curve1, &a.curve2, &a.solver)?;
    let cfg = ConvergenceConfig {
        schemes: a.schemes.clone(),
        n_list: a.n_list.clone(),
        reference_n: a.reference_n,
        reference_scheme: a.reference_scheme,
        base,
    };
    let report = run_convergence(&problem, &cfg)?;
    match &a.out {
        Some(p) => report.write_csv(File::create(p)?)?,
        None => report.write_csv(&mut *out)?,
    }
    if let Some(p) = &a.json {
        std::fs::write(p, report.to_json()?)?;
    }
    Ok(())
}

pub fn cmd_localmax<W: Write>(a: &PairArgs, out: &mut W) -> Result<()> {
    let cfg = a.solver.config();
    cfg.validate()?;
    let grid = GridSpec::new(a.solver.grid_n).map_err(|e| Error::Config(e.to_string()))?;
    let problem = load_pair(&a.curve1, &a.curve2, &a.solver)?;
    let total = total_value(&problem, grid, &cfg)?;
    let n = total.n();
    let report = LocalMaxReport {
        scheme: cfg.scheme.name().to_string(),
        n,
        u_fwd_at_one: total.forward.u_at_one(),
        max_u_tot: total.max(),
        maxima: total
            .maxima()
            .into_iter()
            .map(|m| LocalMaxEntry {
                i: m.i,
                j: m.j,
                x1: m.i as f64 / n as f64,
                x2: m.j as f64 / n as f64,
                u_tot: m.value,
                plateau: m.plateau,
            })
            .collect(),
    };
    emit(&(serde_json::to_string_pretty(&report)? + "\n"), a.out.as_ref(), out)
}
