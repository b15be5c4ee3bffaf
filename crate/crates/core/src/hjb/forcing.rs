//! Forcing term `h·f` on grid nodes.

use std::sync::Arc;

use crate::curve::{dot, SampledCurve};
use crate::error::{Error, Result};
use crate::srv::{inverse_srvt, scaled_difference, srvt_native, SrvField};

/// Where the forcing values come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FSource {
    /// `f = max{⟨q₁, q₂⟩, 0}` from SRV samples.
    Exact,
    /// Backward differences of the curve samples.
    #[default]
    FiniteDifference,
}

/// `h·f(x_i, x_j)` and its DDP variant `≈ h·f·√(kl)` on an `(N+1)²` grid.
pub trait Forcing: Sync {
    fn n(&self) -> usize;

    /// `h·f` at node `(i, j)`; only called with `i, j ≥ 1`.
    fn hf(&self, i: usize, j: usize) -> f64;

    /// `h·f·√(kl)` at node `(i, j)` for spans `1 ≤ k ≤ i`, `1 ≤ l ≤ j`.
    fn hf_span(&self, i: usize, j: usize, k: usize, l: usize) -> f64;

    /// Number of vanishing backward differences replaced by zero forcing.
    fn degenerate_count(&self) -> usize {
        0
    }
}

fn span_factor(k: usize, l: usize) -> f64 {
    ((k * l) as f64).sqrt()
}

/// Forcing from SRV fields evaluated at the grid nodes.
#[derive(Debug, Clone)]
pub struct ExactForcing {
    n: usize,
    dim: usize,
    q1: Vec<f64>,
    q2: Vec<f64>,
}

impl ExactForcing {
    pub fn new(q1: &SrvField, q2: &SrvField, n: usize) -> Result<Self> {
        if q1.dim() != q2.dim() {
            return Err(Error::precondition("SRV fields have different dimensions"));
        }
        let sample = |q: &SrvField| {
            let mut out = vec![0.0; (n + 1) * q.dim()];
            for (i, chunk) in out.chunks_exact_mut(q.dim()).enumerate() {
                q.eval_into(i as f64 / n as f64, chunk);
            }
            out
        };
        Ok(ExactForcing {
            n,
            dim: q1.dim(),
            q1: sample(q1),
            q2: sample(q2),
        })
    }
}

impl Forcing for ExactForcing {
    fn n(&self) -> usize {
        self.n
    }

    fn hf(&self, i: usize, j: usize) -> f64 {
        let d = self.dim;
        let f = dot(&self.q1[i * d..(i + 1) * d], &self.q2[j * d..(j + 1) * d]).max(0.0);
        f / self.n as f64
    }

    fn hf_span(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.hf(i, j) * span_factor(k, l)
    }
}

/// Backward-difference forcing from curve samples.
#[derive(Debug, Clone)]
pub struct FdForcing {
    n: usize,
    dim: usize,
    nodes1: Vec<f64>,
    nodes2: Vec<f64>,
    len1: f64,
    len2: f64,
    // unit-span scaled differences; all-NaN entries mark degenerate differences
    a1: Vec<f64>,
    a2: Vec<f64>,
    degenerate: usize,
}

impl FdForcing {
    pub fn new(c1: &SampledCurve, c2: &SampledCurve, n: usize) -> Result<Self> {
        if c1.dim() != c2.dim() {
            return Err(Error::precondition("curves have different dimensions"));
        }
        let dim = c1.dim();
        let nodes = |c: &SampledCurve| {
            let mut out = vec![0.0; (n + 1) * dim];
            for (i, chunk) in out.chunks_exact_mut(dim).enumerate() {
                c.eval_into(i as f64 / n as f64, chunk);
            }
            out
        };
        let nodes1 = nodes(c1);
        let nodes2 = nodes(c2);
        let (len1, len2) = (c1.length(), c2.length());
        let mut degenerate = 0;
        let mut diffs = |nodes: &[f64], len: f64| {
            let mut out = vec![0.0; (n + 1) * dim];
            for i in 1..=n {
                let b = &nodes[i * dim..(i + 1) * dim];
                let a = &nodes[(i - 1) * dim..i * dim];
                match scaled_difference(b, a, len) {
                    Some(v) => out[i * dim..(i + 1) * dim].copy_from_slice(&v),
                    None => {
                        degenerate += 1;
                        out[i * dim..(i + 1) * dim].fill(f64::NAN);
                    }
                }
            }
            out
        };
        let a1 = diffs(&nodes1, len1);
        let a2 = diffs(&nodes2, len2);
        Ok(FdForcing {
            n,
            dim,
            nodes1,
            nodes2,
            len1,
            len2,
            a1,
            a2,
            degenerate,
        })
    }
}

impl Forcing for FdForcing {
    fn n(&self) -> usize {
        self.n
    }

    fn hf(&self, i: usize, j: usize) -> f64 {
        let d = self.dim;
        let v = dot(&self.a1[i * d..(i + 1) * d], &self.a2[j * d..(j + 1) * d]);
        if v.is_nan() {
            0.0
        } else {
            v.max(0.0)
        }
    }

    fn hf_span(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        if k == 1 && l == 1 {
            return self.hf(i, j);
        }
        let d = self.dim;
        let mut n1 = 0.0;
        let mut n2 = 0.0;
        let mut ip = 0.0;
        for m in 0..d {
            let x = self.nodes1[i * d + m] - self.nodes1[(i - k) * d + m];
            let y = self.nodes2[j * d + m] - self.nodes2[(j - l) * d + m];
            n1 += x * x;
            n2 += y * y;
            ip += x * y;
        }
        if n1 == 0.0 || n2 == 0.0 {
            return 0.0;
        }
        (ip / (n1.sqrt() * self.len1 * n2.sqrt() * self.len2).sqrt()).max(0.0)
    }

    fn degenerate_count(&self) -> usize {
        self.degenerate
    }
}

/// Forcing sampled from a function `f(x₁, x₂)` at the nodes.
#[derive(Debug, Clone)]
pub struct GridForcing {
    n: usize,
    values: Vec<f64>,
}

impl GridForcing {
    /// `values` holds `f` at node `(i, j)` at index `i·(N+1) + j`.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != (n + 1) * (n + 1) {
            return Err(Error::precondition("forcing grid has the wrong size"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::precondition("forcing values must be finite and non-negative"));
        }
        Ok(GridForcing { n, values })
    }

    pub fn from_fn<F: Fn(f64, f64) -> f64>(n: usize, f: F) -> Result<Self> {
        let h = 1.0 / n as f64;
        let mut values = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..=n {
            for j in 0..=n {
                values.push(f(i as f64 * h, j as f64 * h));
            }
        }
        Self::new(n, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_f(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

impl Forcing for GridForcing {
    fn n(&self) -> usize {
        self.n
    }

    fn hf(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.n + 1) + j] / self.n as f64
    }

    fn hf_span(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.hf(i, j) * span_factor(k, l)
    }
}

/// Shared scalar field `f(x₁, x₂) ≥ 0`.
pub type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Input of a registration problem.
#[derive(Clone)]
pub enum Problem {
    Curves { c1: SampledCurve, c2: SampledCurve },
    Fields { q1: SrvField, q2: SrvField },
    /// A prescribed forcing `f`; no curves are attached.
    Function(FieldFn),
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Problem::Curves { c1, c2 } => f
                .debug_struct("Curves")
                .field("m1", &c1.segments())
                .field("m2", &c2.segments())
                .finish(),
            Problem::Fields { q1, q2 } => f
                .debug_struct("Fields")
                .field("m1", &(q1.len() - 1))
                .field("m2", &(q2.len() - 1))
                .finish(),
            Problem::Function(_) => f.write_str("Function"),
        }
    }
}

impl Problem {
    pub fn curves(c1: SampledCurve, c2: SampledCurve) -> Self {
        Problem::Curves { c1, c2 }
    }

    pub fn fields(q1: SrvField, q2: SrvField) -> Self {
        Problem::Fields { q1, q2 }
    }

    pub fn function<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Problem::Function(Arc::new(f))
    }

    /// `f ≡ 1`, the problem of two identical straight segments.
    pub fn constant_one() -> Self {
        Problem::function(|_, _| 1.0)
    }

    /// SRV fields, computing them from curves when needed.
    pub fn srv_fields(&self) -> Result<Option<(SrvField, SrvField)>> {
        match self {
            Problem::Curves { c1, c2 } => Ok(Some((srvt_native(c1)?, srvt_native(c2)?))),
            Problem::Fields { q1, q2 } => Ok(Some((q1.clone(), q2.clone()))),
            Problem::Function(_) => Ok(None),
        }
    }

    /// Builds the forcing on an `(N+1)²` grid.
    ///
    /// Finite differences need curves; for SRV input the curves are reconstructed with
    /// the inverse transform. Function problems ignore the source.
    pub fn forcing(&self, n: usize, source: FSource) -> Result<Box<dyn Forcing>> {
        Ok(match (self, source) {
            (Problem::Curves { c1, c2 }, FSource::FiniteDifference) => Box::new(FdForcing::new(c1, c2, n)?),
            (Problem::Curves { c1, c2 }, FSource::Exact) => {
                Box::new(ExactForcing::new(&srvt_native(c1)?, &srvt_native(c2)?, n)?)
            }
            (Problem::Fields { q1, q2 }, FSource::Exact) => Box::new(ExactForcing::new(q1, q2, n)?),
            (Problem::Fields { q1, q2 }, FSource::FiniteDifference) => {
                Box::new(FdForcing::new(&inverse_srvt(q1)?, &inverse_srvt(q2)?, n)?)
            }
            (Problem::Function(f), _) => Box::new(GridForcing::from_fn(n, |a, b| f(a, b))?),
        })
    }

    /// The problem with both curves traversed backwards, whose forcing is
    /// `f(1 − x₁, 1 − x₂)`.
    pub fn reversed(&self) -> Self {
        match self {
            Problem::Curves { c1, c2 } => Problem::Curves {
                c1: c1.reversed(),
                c2: c2.reversed(),
            },
            Problem::Fields { q1, q2 } => Problem::Fields {
                q1: reverse_field(q1),
                q2: reverse_field(q2),
            },
            Problem::Function(f) => {
                let f = Arc::clone(f);
                Problem::Function(Arc::new(move |a, b| f(1.0 - a, 1.0 - b)))
            }
        }
    }
}

/// SRVT of `t ↦ c(1 − t)`: `−q(1 − t)`.
fn reverse_field(q: &SrvField) -> SrvField {
    let m = q.len() - 1;
    let mut grid: Vec<f64> = q.grid().iter().rev().map(|t| 1.0 - t).collect();
    grid[0] = 0.0;
    grid[m] = 1.0;
    let samples = (0..=m)
        .rev()
        .map(|k| q.sample(k).iter().map(|v| -v).collect())
        .collect();
    SrvField::new(grid, samples).expect("reversal preserves grid validity")
}
