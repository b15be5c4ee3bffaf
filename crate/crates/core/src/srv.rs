//! Square-root-velocity representation of sampled curves.
//!
//! `q = ċ / (√len(c) · √|ċ|)`. Derivatives are forward differences on the target grid, so
//! each sample `q_k` belongs to the interval `[t_k, t_{k+1}]` and the discrete norm
//! `Σ_{k<M} |q_k|² Δt_k` equals 1 up to round-off.

use crate::curve::{distance, dot, locate, norm, SampledCurve};
use crate::error::{Error, Result};

/// Samples of an SRV function `q: [0, 1] → ℝᵈ` on a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SrvField {
    dim: usize,
    grid: Vec<f64>,
    samples: Vec<f64>,
}

impl SrvField {
    pub fn new(grid: Vec<f64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != samples.len() {
            return Err(Error::precondition(
                "an SRV field needs a grid of length ≥ 2 and one sample per grid point",
            ));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::precondition("SRV grid must increase strictly from 0 to 1"));
        }
        let dim = samples[0].len();
        if dim == 0 || samples.iter().any(|s| s.len() != dim) {
            return Err(Error::precondition("SRV samples must share a positive dimension"));
        }
        Ok(SrvField {
            dim,
            grid,
            samples: samples.concat(),
        })
    }

    /// A constant field `q ≡ value` on a uniform grid with `m` intervals.
    pub fn constant(m: usize, value: &[f64]) -> Result<Self> {
        let grid = crate::curve::uniform_grid(m.max(1));
        let samples = vec![value.to_vec(); grid.len()];
        SrvField::new(grid, samples)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn sample(&self, k: usize) -> &[f64] {
        &self.samples[k * self.dim..(k + 1) * self.dim]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Piecewise-linear interpolation of the samples; clamps `t` to `[0, 1]`.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let (k, w) = locate(&self.grid, t);
        let a = self.sample(k);
        let b = self.sample(k + 1);
        for ((o, &ai), &bi) in out.iter_mut().zip(a).zip(b) {
            *o = (1.0 - w) * ai + w * bi;
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    /// Discrete `‖q‖²_{L²}` with the left-endpoint rule used by [`srvt`].
    pub fn l2_norm_sq(&self) -> f64 {
        (0..self.grid.len() - 1)
            .map(|k| {
                let s = self.sample(k);
                dot(s, s) * (self.grid[k + 1] - self.grid[k])
            })
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples
            .chunks_exact(self.dim)
            .map(norm)
            .fold(0.0, f64::max)
    }
}

/// Scaled SRVT of `c` sampled on `grid`.
///
/// The curve is evaluated at the grid parameters by linear interpolation; `len` is the length
/// of the resulting polygon, which makes the transform exactly scale invariant.
pub fn srvt(c: &SampledCurve, grid: &[f64]) -> Result<SrvField> {
    if grid.len() < 2 || grid[0] != 0.0 || *grid.last().unwrap() != 1.0 {
        return Err(Error::precondition("SRVT grid must run from 0 to 1 with at least two points"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::precondition("SRVT grid must increase strictly"));
    }
    let pts: Vec<Vec<f64>> = grid.iter().map(|&t| c.eval(t)).collect();
    let m = grid.len() - 1;
    let mut seg_len = Vec::with_capacity(m);
    for k in 0..m {
        let l = distance(&pts[k], &pts[k + 1]);
        if l == 0.0 {
            return Err(Error::DegenerateSegment { index: k });
        }
        seg_len.push(l);
    }
    let len: f64 = seg_len.iter().sum();
    let mut samples = Vec::with_capacity(m + 1);
    for k in 0..m {
        let dt = grid[k + 1] - grid[k];
        let scale = 1.0 / (len * seg_len[k] * dt).sqrt();
        samples.push(
            pts[k + 1]
                .iter()
                .zip(&pts[k])
                .map(|(b, a)| (b - a) * scale)
                .collect::<Vec<_>>(),
        );
    }
    samples.push(samples[m - 1].clone());
    SrvField::new(grid.to_vec(), samples)
}

/// SRVT on the curve's own parameter grid.
pub fn srvt_native(c: &SampledCurve) -> Result<SrvField> {
    srvt(c, c.params())
}

/// `Q⁻¹(q)(t) = ∫₀ᵗ |q| q`, left-endpoint rule, starting at the origin.
pub fn inverse_srvt(q: &SrvField) -> Result<SampledCurve> {
    let d = q.dim();
    let mut cur = vec![0.0; d];
    let mut points = Vec::with_capacity(q.len());
    points.push(cur.clone());
    for k in 0..q.len() - 1 {
        let s = q.sample(k);
        let w = norm(s) * (q.grid[k + 1] - q.grid[k]);
        for (c, &si) in cur.iter_mut().zip(s) {
            *c += w * si;
        }
        points.push(cur.clone());
    }
    SampledCurve::from_parts(points, q.grid.clone())
}

/// Relaxed integrand `f(x) = max{⟨q₁(x₁), q₂(x₂)⟩, 0}`.
pub fn eval_f(q1: &SrvField, q2: &SrvField, x: [f64; 2]) -> Result<f64> {
    check_unit_square(x)?;
    if q1.dim() != q2.dim() {
        return Err(Error::precondition("SRV fields have different dimensions"));
    }
    let a = q1.eval(x[0]);
    let b = q2.eval(x[1]);
    Ok(dot(&a, &b).max(0.0))
}

pub(crate) fn check_unit_square(x: [f64; 2]) -> Result<()> {
    let inside = |v: f64| (0.0..=1.0).contains(&v);
    if inside(x[0]) && inside(x[1]) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { x1: x[0], x2: x[1] })
    }
}

/// Result of a finite-difference estimate of `hf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfEstimate {
    pub hf: f64,
    /// Set when one of the backward differences vanished and the estimate was forced to 0.
    pub degenerate: bool,
}

/// Backward-difference estimate of `h·f(x)` from curve samples.
pub fn approx_hf(c1: &SampledCurve, c2: &SampledCurve, x: [f64; 2], h: f64) -> Result<HfEstimate> {
    approx_hf_ddp(c1, c2, x, h, 1, 1)
}

/// Backward-difference estimate of `h·f(x)·√(kl)` over spans `kh` and `lh`.
pub fn approx_hf_ddp(
    c1: &SampledCurve,
    c2: &SampledCurve,
    x: [f64; 2],
    h: f64,
    k: usize,
    l: usize,
) -> Result<HfEstimate> {
    if k == 0 || l == 0 {
        return Err(Error::precondition("difference spans k and l must be at least 1"));
    }
    if !(h > 0.0) {
        return Err(Error::precondition("step h must be positive"));
    }
    if c1.dim() != c2.dim() {
        return Err(Error::precondition("curves have different dimensions"));
    }
    check_unit_square(x)?;
    let tol = 1e-12;
    let s1 = x[0] - k as f64 * h;
    let s2 = x[1] - l as f64 * h;
    if s1 < -tol || s2 < -tol {
        return Err(Error::precondition(format!(
            "backward difference leaves the domain: x = ({}, {}), spans ({}, {})",
            x[0],
            x[1],
            k as f64 * h,
            l as f64 * h
        )));
    }
    let a1 = scaled_difference(&c1.eval(x[0]), &c1.eval(s1.max(0.0)), c1.length());
    let a2 = scaled_difference(&c2.eval(x[1]), &c2.eval(s2.max(0.0)), c2.length());
    Ok(match (a1, a2) {
        (Some(a), Some(b)) => HfEstimate {
            hf: dot(&a, &b).max(0.0),
            degenerate: false,
        },
        _ => HfEstimate {
            hf: 0.0,
            degenerate: true,
        },
    })
}

/// `(b − a) / √(|b − a| · len)`, or `None` when `a = b`.
pub(crate) fn scaled_difference(b: &[f64], a: &[f64], len: f64) -> Option<Vec<f64>> {
    let diff: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let n = norm(&diff);
    if n == 0.0 {
        return None;
    }
    let s = 1.0 / (n * len).sqrt();
    Some(diff.into_iter().map(|v| v * s).collect())
}
