//! Value-function solvers on the square grid `[0, 1]²_h`.
//!
//! Every scheme is causal: node `(i, j)` only reads nodes with both indices no larger and
//! at least one strictly smaller. One lexicographic sweep (or one pass over anti-diagonal
//! wavefronts) therefore produces the discrete solution exactly.

pub mod ddp;
pub mod forcing;
pub mod oracle;
pub mod updates;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
pub use forcing::{ExactForcing, FSource, FdForcing, FieldFn, Forcing, GridForcing, Problem};
pub use oracle::{brute_force_update, local_functional, Admissible, Repr};
pub use updates::{update_filtered, update_u1, update_uinf, update_v1, update_vinf, Monotone, Update};

/// Uniform grid with `N` cells per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::config(format!("grid needs N ≥ 2, got {n}")));
        }
        Ok(GridSpec { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            1.0
        } else {
            i as f64 / self.n as f64
        }
    }
}

/// Scheme selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    U1,
    UInf,
    V1,
    VInf,
    Ddp,
    /// Central candidate filtered against a monotone companion.
    Filtered(Monotone),
}

impl Scheme {
    pub const SEMI_DISCRETE: [Scheme; 4] = [Scheme::U1, Scheme::UInf, Scheme::V1, Scheme::VInf];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::U1 => "u1",
            Scheme::UInf => "uinf",
            Scheme::V1 => "v1",
            Scheme::VInf => "vinf",
            Scheme::Ddp => "ddp",
            Scheme::Filtered(Monotone::U1) => "filtered-u",
            Scheme::Filtered(Monotone::UInf) => "filtered-uinf",
            Scheme::Filtered(Monotone::V1) => "filtered-v1",
            Scheme::Filtered(Monotone::VInf) => "filtered-v",
        }
    }

    pub fn repr(&self) -> Repr {
        match self {
            Scheme::V1 | Scheme::VInf => Repr::V,
            Scheme::Filtered(m) if m.is_v() => Repr::V,
            _ => Repr::U,
        }
    }

    /// Monotone update rule for the semi-discrete schemes.
    fn monotone(&self) -> Option<Monotone> {
        match self {
            Scheme::U1 => Some(Monotone::U1),
            Scheme::UInf => Some(Monotone::UInf),
            Scheme::V1 => Some(Monotone::V1),
            Scheme::VInf => Some(Monotone::VInf),
            _ => None,
        }
    }

    /// `max √(α₁α₂)` over the admissible set; `None` for DDP.
    pub fn a_max(&self) -> Option<f64> {
        match self {
            Scheme::U1 | Scheme::V1 | Scheme::Filtered(Monotone::U1 | Monotone::V1) => Some(0.5),
            Scheme::Ddp => None,
            _ => Some(1.0),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "u1" => Scheme::U1,
            "uinf" => Scheme::UInf,
            "v1" => Scheme::V1,
            "vinf" => Scheme::VInf,
            "ddp" => Scheme::Ddp,
            "filtered-u" | "filtered-u1" => Scheme::Filtered(Monotone::U1),
            "filtered-uinf" => Scheme::Filtered(Monotone::UInf),
            "filtered-v1" => Scheme::Filtered(Monotone::V1),
            "filtered-v" | "filtered-vinf" => Scheme::Filtered(Monotone::VInf),
            other => {
                return Err(Error::config(format!(
                    "unknown scheme '{other}' (expected u1, uinf, v1, vinf, ddp, filtered-u, filtered-v, \
                     filtered-uinf or filtered-v1)"
                )))
            }
        })
    }
}

/// Solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub ddp_k: f64,
    pub ddp_r: f64,
    /// Overrides `ddp_k · N^ddp_r` when set.
    pub ddp_radius: Option<f64>,
    pub filter_k: f64,
    pub f_source: FSource,
    /// Worker threads for the wavefront sweep; 1 runs sequentially.
    pub threads: usize,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig {
            scheme: Scheme::VInf,
            ddp_k: 0.75,
            ddp_r: 0.5,
            ddp_radius: None,
            filter_k: 1.0,
            f_source: FSource::FiniteDifference,
            threads: 1,
        }
    }
}

impl SchemeConfig {
    pub fn new(scheme: Scheme) -> Self {
        SchemeConfig {
            scheme,
            ..Default::default()
        }
    }

    pub fn with_source(mut self, source: FSource) -> Self {
        self.f_source = source;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn with_ddp_radius(mut self, radius: f64) -> Self {
        self.ddp_radius = Some(radius);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ddp_k > 0.0 && self.ddp_k.is_finite()) {
            return Err(Error::config(format!("ddp_k must be positive, got {}", self.ddp_k)));
        }
        if !(self.ddp_r > 0.0 && self.ddp_r < 1.0) {
            return Err(Error::config(format!("ddp_r must lie in (0, 1), got {}", self.ddp_r)));
        }
        if let Some(r) = self.ddp_radius {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(Error::config(format!("ddp radius must be at least 1, got {r}")));
            }
        }
        if !(self.filter_k > 0.0 && self.filter_k.is_finite()) {
            return Err(Error::config(format!("filter_k must be positive, got {}", self.filter_k)));
        }
        if self.threads == 0 {
            return Err(Error::config("threads must be at least 1"));
        }
        Ok(())
    }

    pub fn ddp_radius_for(&self, n: usize) -> f64 {
        self.ddp_radius
            .unwrap_or_else(|| ddp::default_radius(n, self.ddp_k, self.ddp_r))
    }
}

/// Node values of `u_h` (or `v_h = u_h²`), row-major with index `i·(N+1) + j`, where `i`
/// runs along `x₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueField {
    n: usize,
    repr: Repr,
    data: Vec<f64>,
}

impl ValueField {
    pub fn new(n: usize, repr: Repr, data: Vec<f64>) -> Result<Self> {
        if data.len() != (n + 1) * (n + 1) {
            return Err(Error::precondition("value field has the wrong size"));
        }
        Ok(ValueField { n, repr, data })
    }

    pub fn zeros(n: usize, repr: Repr) -> Self {
        ValueField {
            n,
            repr,
            data: vec![0.0; (n + 1) * (n + 1)],
        }
    }

    /// A u-representation field from `u(x₁, x₂)` sampled at the nodes.
    pub fn from_fn<F: Fn(f64, f64) -> f64>(n: usize, f: F) -> Self {
        let h = 1.0 / n as f64;
        let mut data = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                data.push(f(i as f64 * h, j as f64 * h));
            }
        }
        ValueField { n, repr: Repr::U, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn repr(&self) -> Repr {
        self.repr
    }

    /// Stored value (`v` for the v-representation).
    pub fn raw(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.n + 1) + j]
    }

    pub fn raw_data(&self) -> &[f64] {
        &self.data
    }

    /// `u_h` at node `(i, j)`.
    pub fn u(&self, i: usize, j: usize) -> f64 {
        let r = self.raw(i, j);
        match self.repr {
            Repr::U => r,
            Repr::V => r.sqrt(),
        }
    }

    pub fn u_at_one(&self) -> f64 {
        self.u(self.n, self.n)
    }

    /// The field converted to the u-representation.
    pub fn to_u(&self) -> ValueField {
        match self.repr {
            Repr::U => self.clone(),
            Repr::V => ValueField {
                n: self.n,
                repr: Repr::U,
                data: self.data.iter().map(|v| v.sqrt()).collect(),
            },
        }
    }

    pub fn max_u(&self) -> f64 {
        self.to_u().data.iter().copied().fold(0.0, f64::max)
    }

    /// `(i, j) ↦ (N − i, N − j)`.
    pub fn reflected(&self) -> ValueField {
        let mut data = self.data.clone();
        data.reverse();
        ValueField {
            n: self.n,
            repr: self.repr,
            data,
        }
    }
}

/// Per-cell maximising directions for the semi-discrete schemes.
///
/// Cell `(i, j)`, `1 ≤ i, j ≤ N`, is `(x_{i−1}, x_i] × (x_{j−1}, x_j]`; its direction was
/// produced by the update of node `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyField {
    n: usize,
    alpha: Vec<[f64; 2]>,
}

impl PolicyField {
    pub fn new(n: usize, alpha: Vec<[f64; 2]>) -> Result<Self> {
        if alpha.len() != n * n {
            return Err(Error::precondition("policy field has the wrong size"));
        }
        Ok(PolicyField { n, alpha })
    }

    /// Constant policy, mostly for tests.
    pub fn constant(n: usize, alpha: [f64; 2]) -> Self {
        PolicyField {
            n,
            alpha: vec![alpha; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self, i: usize, j: usize) -> [f64; 2] {
        self.alpha[(i - 1) * self.n + (j - 1)]
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), [f64; 2])> + '_ {
        let n = self.n;
        self.alpha
            .iter()
            .enumerate()
            .map(move |(k, a)| ((k / n + 1, k % n + 1), *a))
    }
}

/// Per-node jumps chosen by DDP; `(0, 0)` on the axes.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpField {
    n: usize,
    jumps: Vec<(u32, u32)>,
}

impl JumpField {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jump(&self, i: usize, j: usize) -> (usize, usize) {
        let (k, l) = self.jumps[i * (self.n + 1) + j];
        (k as usize, l as usize)
    }
}

/// What backtracking follows.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    Directions(PolicyField),
    Jumps(JumpField),
}

impl Policy {
    pub fn n(&self) -> usize {
        match self {
            Policy::Directions(p) => p.n(),
            Policy::Jumps(j) => j.n(),
        }
    }
}

/// Counters gathered during a solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Nodes where the filtered scheme kept the central candidate.
    pub filter_accepted: usize,
    /// Nodes updated by a filtered scheme.
    pub filter_total: usize,
    /// Vanishing finite differences replaced by zero forcing.
    pub degenerate_hf: usize,
}

impl SolveStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.filter_total == 0 {
            0.0
        } else {
            self.filter_accepted as f64 / self.filter_total as f64
        }
    }
}

/// Output of [`solve`].
#[derive(Debug, Clone)]
pub struct Solution {
    pub scheme: Scheme,
    pub value: ValueField,
    pub policy: Policy,
    pub stats: SolveStats,
}

impl Solution {
    pub fn n(&self) -> usize {
        self.value.n()
    }

    pub fn u_at_one(&self) -> f64 {
        self.value.u_at_one()
    }
}

/// Solves the discrete HJB problem for `problem` on `grid`.
pub fn solve(problem: &Problem, grid: GridSpec, cfg: &SchemeConfig) -> Result<Solution> {
    cfg.validate()?;
    let forcing = problem.forcing(grid.n(), cfg.f_source)?;
    solve_with_forcing(forcing.as_ref(), cfg)
}

/// Solves with a prepared forcing; the grid size is taken from the forcing.
pub fn solve_with_forcing(forcing: &dyn Forcing, cfg: &SchemeConfig) -> Result<Solution> {
    cfg.validate()?;
    let n = GridSpec::new(forcing.n())?.n();
    let stride = n + 1;
    let h = 1.0 / n as f64;
    let repr = cfg.scheme.repr();
    let mut data = vec![0.0; stride * stride];
    let is_ddp = cfg.scheme == Scheme::Ddp;
    let mut alpha = if is_ddp { Vec::new() } else { vec![[0.0; 2]; n * n] };
    let mut jumps = if is_ddp { vec![(0u32, 0u32); stride * stride] } else { Vec::new() };
    let mut stats = SolveStats {
        degenerate_hf: forcing.degenerate_count(),
        ..Default::default()
    };
    let jump_set = match cfg.scheme {
        Scheme::Ddp => ddp::admissible_jumps(cfg.ddp_radius_for(n)),
        _ => Vec::new(),
    };

    let node = |data: &[f64], i: usize, j: usize| -> NodeResult {
        match cfg.scheme {
            Scheme::Ddp => {
                let (v, (k, l)) = ddp::update_ddp(data, n, i, j, &jump_set, forcing);
                NodeResult {
                    value: v,
                    alpha: [0.0; 2],
                    jump: (k as u32, l as u32),
                    accepted: None,
                }
            }
            Scheme::Filtered(base) => {
                let (n00, n01, n10) = stencil(data, stride, i, j);
                let r = update_filtered(base, n00, n01, n10, forcing.hf(i, j), h, cfg.filter_k);
                NodeResult {
                    value: r.update.value,
                    alpha: r.update.alpha,
                    jump: (0, 0),
                    accepted: Some(r.accepted),
                }
            }
            s => {
                let (n00, n01, n10) = stencil(data, stride, i, j);
                let u = s.monotone().unwrap().update(n00, n01, n10, forcing.hf(i, j));
                NodeResult {
                    value: u.value,
                    alpha: u.alpha,
                    jump: (0, 0),
                    accepted: None,
                }
            }
        }
    };

    let mut store = |data: &mut [f64], i: usize, j: usize, r: NodeResult| {
        data[i * stride + j] = r.value;
        if is_ddp {
            jumps[i * stride + j] = r.jump;
        } else {
            alpha[(i - 1) * n + (j - 1)] = r.alpha;
        }
        if let Some(acc) = r.accepted {
            stats.filter_total += 1;
            stats.filter_accepted += acc as usize;
        }
    };

    if cfg.threads <= 1 {
        for i in 1..=n {
            for j in 1..=n {
                let r = node(&data, i, j);
                store(&mut data, i, j, r);
            }
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::config(format!("cannot start thread pool: {e}")))?;
        pool.install(|| {
            let mut buf = Vec::with_capacity(n);
            for d in 2..=2 * n {
                let lo = d.saturating_sub(n).max(1);
                let hi = (d - 1).min(n);
                (lo..hi + 1)
                    .into_par_iter()
                    .map(|i| node(&data, i, d - i))
                    .collect_into_vec(&mut buf);
                for (i, r) in (lo..=hi).zip(buf.drain(..)) {
                    store(&mut data, i, d - i, r);
                }
            }
        });
    }

    let value = ValueField { n, repr, data };
    let policy = match cfg.scheme {
        Scheme::Ddp => Policy::Jumps(JumpField { n, jumps }),
        _ => Policy::Directions(PolicyField { n, alpha }),
    };
    Ok(Solution {
        scheme: cfg.scheme,
        value,
        policy,
        stats,
    })
}

struct NodeResult {
    value: f64,
    alpha: [f64; 2],
    jump: (u32, u32),
    accepted: Option<bool>,
}

#[inline]
fn stencil(data: &[f64], stride: usize, i: usize, j: usize) -> (f64, f64, f64) {
    (
        data[(i - 1) * stride + j - 1],
        data[(i - 1) * stride + j],
        data[i * stride + j - 1],
    )
}
