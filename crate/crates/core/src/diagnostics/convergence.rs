use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::errors::{geodesic_error_bound, linf_error};
use crate::error::{Error, Result};
use crate::geodesic::{registered_srv, shape_distance, RegisteredSrv};
use crate::hjb::{solve, GridSpec, Monotone, Problem, Scheme, SchemeConfig, Solution};
use crate::registration::{backtrack, eval_jh};
use crate::srv::SrvField;

/// One `(scheme, N)` cell of a convergence study. Errors that cannot be computed (no SRV
/// fields for a prescribed forcing) are NaN.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub scheme: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub wall_time: f64,
    pub linf_u_error: f64,
    pub dist_u_error: f64,
    #[serde(rename = "dist_J_error")]
    pub dist_j_error: f64,
    pub geodesic_error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub reference_scheme: String,
    pub reference_n: usize,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn rows_for(&self, scheme: Scheme) -> impl Iterator<Item = &ConvergenceRow> {
        let name = scheme.name();
        self.rows.iter().filter(move |r| r.scheme == name)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wr.serialize(row).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::precondition(format!("CSV serialisation failed: {other:?}")),
    }
}

/// Settings of [`run_convergence`].
#[derive(Debug, Clone)]
pub struct ConvergenceConfig {
    pub schemes: Vec<Scheme>,
    pub n_list: Vec<usize>,
    pub reference_n: usize,
    pub reference_scheme: Scheme,
    /// Shared solver settings; the scheme field is overwritten per row.
    pub base: SchemeConfig,
}

impl ConvergenceConfig {
    pub fn new(schemes: Vec<Scheme>, n_list: Vec<usize>, reference_n: usize) -> Self {
        ConvergenceConfig {
            schemes,
            n_list,
            reference_n,
            reference_scheme: Scheme::Filtered(Monotone::VInf),
            base: SchemeConfig::default(),
        }
    }
}

struct Run {
    solution: Solution,
    jh: Option<f64>,
    registered: Option<RegisteredSrv>,
}

fn run_one(problem: &Problem, fields: Option<&(SrvField, SrvField)>, n: usize, cfg: &SchemeConfig) -> Result<Run> {
    let solution = solve(problem, GridSpec::new(n)?, cfg)?;
    let (jh, registered) = match fields {
        Some((q1, q2)) => {
            let path = backtrack(&solution.policy)?;
            (Some(eval_jh(&path, q1, q2)), Some(registered_srv(&path, q1, q2)))
        }
        None => (None, None),
    };
    Ok(Run {
        solution,
        jh,
        registered,
    })
}

/// Solves `problem` for every scheme and grid size and compares against a reference solve
/// at `reference_n`.
pub fn run_convergence(problem: &Problem, cfg: &ConvergenceConfig) -> Result<ConvergenceReport> {
    for &n in &cfg.n_list {
        if n == 0 || cfg.reference_n % n != 0 {
            return Err(Error::NonNestedGrids {
                coarse: n,
                fine: cfg.reference_n,
            });
        }
    }
    if cfg.n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("grid sizes must increase strictly"));
    }
    let fields = problem.srv_fields()?;
    let ref_cfg = SchemeConfig {
        scheme: cfg.reference_scheme,
        ..cfg.base.clone()
    };
    let reference = run_one(problem, fields.as_ref(), cfg.reference_n, &ref_cfg)?;
    let ref_u = reference.solution.u_at_one();

    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        let scfg = SchemeConfig {
            scheme,
            ..cfg.base.clone()
        };
        for &n in &cfg.n_list {
            let start = Instant::now();
            let run = run_one(problem, fields.as_ref(), n, &scfg)?;
            let wall_time = start.elapsed().as_secs_f64();
            let dist_j_error = match (run.jh, reference.jh) {
                (Some(a), Some(b)) => (shape_distance(a) - shape_distance(b)).abs(),
                _ => f64::NAN,
            };
            let geo = match (&run.registered, &reference.registered) {
                (Some(a), Some(b)) => geodesic_error_bound(a, b),
                _ => f64::NAN,
            };
            rows.push(ConvergenceRow {
                scheme: scheme.name().to_string(),
                n,
                wall_time,
                linf_u_error: linf_error(&run.solution.value, &reference.solution.value)?,
                dist_u_error: (shape_distance(run.solution.u_at_one()) - shape_distance(ref_u)).abs(),
                dist_j_error,
                geodesic_error_bound: geo,
            });
        }
    }
    Ok(ConvergenceReport {
        reference_scheme: cfg.reference_scheme.name().to_string(),
        reference_n: cfg.reference_n,
        rows,
    })
}
