//! Sampled open curves in ℝᵈ and their reparametrisations.
//!
//! A [`SampledCurve`] is a polyline with one parameter value per vertex. Off-grid
//! evaluation is piecewise linear in the parameter, so the curve is the polygon through
//! its samples traversed at piecewise-constant speed.

use crate::error::{Error, Result};

/// An immersed open curve `c: [0, 1] → ℝᵈ` stored as samples `c(t_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    dim: usize,
    coords: Vec<f64>,
    params: Vec<f64>,
}

impl SampledCurve {
    /// Builds a curve from points with explicit parameters.
    ///
    /// The parameters must start at 0, end at 1 and increase strictly. Consecutive
    /// points must differ (a discrete stand-in for `|ċ| > 0`).
    pub fn new(points: Vec<Vec<f64>>, params: Vec<f64>) -> Result<Self> {
        let curve = Self::from_parts(points, params)?;
        curve.check_immersed()?;
        Ok(curve)
    }

    /// Builds a curve with uniform parameters `t_k = k / M`.
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let m = points.len().saturating_sub(1);
        if m == 0 {
            return Err(Error::invalid_curve("a curve needs at least two samples"));
        }
        let params = uniform_grid(m);
        Self::new(points, params)
    }

    /// Samples `f` at `m + 1` uniform parameters.
    pub fn from_fn<F>(m: usize, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Vec<f64>,
    {
        if m == 0 {
            return Err(Error::invalid_curve("a curve needs at least two samples"));
        }
        let params = uniform_grid(m);
        let points = params.iter().map(|&t| f(t)).collect();
        Self::new(points, params)
    }

    /// Same validation as [`SampledCurve::new`] except the immersion check.
    ///
    /// Reconstructed curves (inverse SRVT, geodesic pre-shapes) are allowed to stall
    /// where the SRV samples vanish.
    pub(crate) fn from_parts(points: Vec<Vec<f64>>, params: Vec<f64>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid_curve("a curve needs at least two samples"));
        }
        if points.len() != params.len() {
            return Err(Error::invalid_curve(format!(
                "{} points but {} parameters",
                points.len(),
                params.len()
            )));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::invalid_curve("points must have at least one coordinate"));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (k, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::invalid_curve(format!(
                    "sample {k} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid_curve(format!("sample {k} is not finite")));
            }
            coords.extend_from_slice(p);
        }
        if params[0] != 0.0 || *params.last().unwrap() != 1.0 {
            return Err(Error::invalid_curve("parameters must start at 0 and end at 1"));
        }
        if let Some(k) = params.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid_curve(format!(
                "parameters must increase strictly (t[{}] = {}, t[{}] = {})",
                k,
                params[k],
                k + 1,
                params[k + 1]
            )));
        }
        Ok(SampledCurve {
            dim,
            coords,
            params,
        })
    }

    fn check_immersed(&self) -> Result<()> {
        match self.first_degenerate_segment() {
            Some(index) => Err(Error::DegenerateSegment { index }),
            None => Ok(()),
        }
    }

    /// Index of the first segment whose end points coincide.
    pub fn first_degenerate_segment(&self) -> Option<usize> {
        (0..self.segments()).find(|&k| self.point(k) == self.point(k + 1))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of segments `M`.
    pub fn segments(&self) -> usize {
        self.params.len() - 1
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn point(&self, k: usize) -> &[f64] {
        &self.coords[k * self.dim..(k + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    /// Polygonal length `Σ |c(t_{k+1}) − c(t_k)|`.
    pub fn length(&self) -> f64 {
        (0..self.segments())
            .map(|k| distance(self.point(k), self.point(k + 1)))
            .sum()
    }

    /// Writes `c(t)` into `out` using linear interpolation between samples.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        let (k, w) = locate(&self.params, t);
        let a = self.point(k);
        let b = self.point(k + 1);
        for ((o, &ai), &bi) in out.iter_mut().zip(a).zip(b) {
            *o = (1.0 - w) * ai + w * bi;
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    /// Applies `x ↦ λx + b` to every sample.
    pub fn affine(&self, scale: f64, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.dim {
            return Err(Error::precondition("shift dimension differs from curve dimension"));
        }
        let points = self
            .points()
            .map(|p| p.iter().zip(shift).map(|(x, b)| scale * x + b).collect())
            .collect();
        SampledCurve::new(points, self.params.clone())
    }

    /// The same trace traversed backwards: `t ↦ c(1 − t)`.
    pub fn reversed(&self) -> Self {
        let points: Vec<Vec<f64>> = self.points().rev().map(<[f64]>::to_vec).collect();
        let mut params: Vec<f64> = self.params.iter().rev().map(|t| 1.0 - t).collect();
        params[0] = 0.0;
        *params.last_mut().unwrap() = 1.0;
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in &points {
            coords.extend_from_slice(p);
        }
        SampledCurve {
            dim: self.dim,
            coords,
            params,
        }
    }
}

/// `[0, 1/m, …, 1]` with exact end points.
pub fn uniform_grid(m: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
    grid[m] = 1.0;
    grid
}

/// Finds the segment `k` with `grid[k] ≤ t ≤ grid[k+1]` and the local weight of `t` in it.
/// Values outside the grid are clamped to its end points.
pub(crate) fn locate(grid: &[f64], t: f64) -> (usize, f64) {
    let last = grid.len() - 1;
    if t <= grid[0] {
        return (0, 0.0);
    }
    if t >= grid[last] {
        return (last - 1, 1.0);
    }
    let k = grid.partition_point(|&g| g <= t) - 1;
    let k = k.min(last - 1);
    let w = (t - grid[k]) / (grid[k + 1] - grid[k]);
    (k, w)
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A monotone map of `[0, 1]` onto itself fixing both end points.
#[derive(Debug, Clone, PartialEq)]
pub enum Reparam {
    Identity,
    /// `t ↦ a·t / (1 + (a − 1)·t)` for `a > 0`.
    Mobius(f64),
    /// Piecewise-linear interpolation of `(params[k], values[k])`.
    Sampled { params: Vec<f64>, values: Vec<f64> },
}

impl Reparam {
    /// `ψ₁(t) = 3t / (1 + 2t)`.
    pub fn psi1() -> Self {
        Reparam::Mobius(3.0)
    }

    /// `ψ₂(t) = t / (3 − 2t)`, the inverse of [`Reparam::psi1`].
    pub fn psi2() -> Self {
        Reparam::Mobius(1.0 / 3.0)
    }

    pub fn mobius(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::precondition(format!("Möbius coefficient must be positive, got {a}")));
        }
        Ok(Reparam::Mobius(a))
    }

    pub fn sampled(params: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if params.len() < 2 || params.len() != values.len() {
            return Err(Error::precondition(
                "a sampled reparametrisation needs matching parameter and value lists of length ≥ 2",
            ));
        }
        if params[0] != 0.0 || *params.last().unwrap() != 1.0 {
            return Err(Error::precondition("reparametrisation parameters must span [0, 1]"));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::precondition("reparametrisation parameters must increase strictly"));
        }
        if values[0] != 0.0 || *values.last().unwrap() != 1.0 {
            return Err(Error::precondition("a reparametrisation must map 0 ↦ 0 and 1 ↦ 1"));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::precondition("a reparametrisation must be non-decreasing"));
        }
        Ok(Reparam::Sampled { params, values })
    }

    pub fn apply(&self, t: f64) -> f64 {
        match self {
            Reparam::Identity => t,
            Reparam::Mobius(a) => {
                if t >= 1.0 {
                    1.0
                } else {
                    a * t / (1.0 + (a - 1.0) * t)
                }
            }
            Reparam::Sampled { params, values } => {
                let (k, w) = locate(params, t);
                values[k] + w * (values[k + 1] - values[k])
            }
        }
    }

    /// `φ′(t)`; for sampled maps, the slope of the segment containing `t`.
    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            Reparam::Identity => 1.0,
            Reparam::Mobius(a) => {
                let d = 1.0 + (a - 1.0) * t;
                a / (d * d)
            }
            Reparam::Sampled { params, values } => {
                let (k, _) = locate(params, t);
                (values[k + 1] - values[k]) / (params[k + 1] - params[k])
            }
        }
    }
}

/// Samples `c ∘ φ` on the parameter grid of `c`.
///
/// Fails only if `φ` is flat somewhere and the composition repeats a point.
pub fn apply_reparam(curve: &SampledCurve, phi: &Reparam) -> Result<SampledCurve> {
    let points = curve.params().iter().map(|&t| curve.eval(phi.apply(t))).collect();
    SampledCurve::new(points, curve.params().to_vec())
}

/// Resamples `curve` with the same number of samples so that consecutive samples are
/// equidistant, then assigns uniform parameters.
pub fn arc_length_parametrise(curve: &SampledCurve) -> SampledCurve {
    arc_length_resample(curve, curve.segments())
}

/// Resamples `curve` with `m + 1` samples at constant chord length.
///
/// Samples lie on the polygon of `curve`. The common chord length is found by bisection
/// so that the last sample lands on the end point.
pub fn arc_length_resample(curve: &SampledCurve, m: usize) -> SampledCurve {
    let m = m.max(1);
    let total = curve.length();
    let end = curve.point(curve.segments()).to_vec();

    let mut lo = 0.0;
    let mut hi = total / m as f64;
    let mut best = march_chords(curve, hi, m);
    if best.reach < total {
        // Chords never exceed arcs, so total / m always overshoots; this is only reached
        // through round-off on straight curves.
        best.points.truncate(m);
        best.points.push(end.clone());
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let trial = march_chords(curve, mid, m);
            if trial.reach >= total {
                hi = mid;
                best = trial;
            } else {
                lo = mid;
            }
        }
    }

    let mut points = best.points;
    points.truncate(m);
    points.push(end);
    SampledCurve {
        dim: curve.dim(),
        coords: points.concat(),
        params: uniform_grid(m),
    }
}

struct ChordMarch {
    points: Vec<Vec<f64>>,
    /// Arc-length position of the last sample, extended linearly past the end point when
    /// the march runs off the polygon.
    reach: f64,
}

fn march_chords(curve: &SampledCurve, chord: f64, m: usize) -> ChordMarch {
    let d = curve.dim();
    let segs = curve.segments();
    let mut points = Vec::with_capacity(m + 1);
    let mut cur = curve.point(0).to_vec();
    points.push(cur.clone());
    let mut seg = 0;
    let mut local = 0.0;
    let mut arc_before = 0.0;
    let mut seg_len = distance(curve.point(0), curve.point(1));
    let mut diff = vec![0.0; d];
    let mut dir = vec![0.0; d];

    for step in 0..m {
        let mut hit = None;
        while seg < segs {
            let a = curve.point(seg);
            let b = curve.point(seg + 1);
            for i in 0..d {
                diff[i] = a[i] - cur[i];
                dir[i] = b[i] - a[i];
            }
            // |diff + s·dir| = chord, s ∈ [local, 1]
            let qa = dot(&dir, &dir);
            let qb = 2.0 * dot(&diff, &dir);
            let qc = dot(&diff, &diff) - chord * chord;
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let roots = [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)];
                if let Some(&s) = roots.iter().find(|&&s| s >= local && s <= 1.0) {
                    hit = Some(s);
                    break;
                }
            }
            arc_before += seg_len;
            seg += 1;
            local = 0.0;
            if seg < segs {
                seg_len = distance(curve.point(seg), curve.point(seg + 1));
            }
        }
        match hit {
            Some(s) => {
                let a = curve.point(seg);
                let b = curve.point(seg + 1);
                for i in 0..d {
                    cur[i] = a[i] + s * (b[i] - a[i]);
                }
                local = s;
                points.push(cur.clone());
            }
            None => {
                let remaining = (m - step) as f64;
                return ChordMarch {
                    points,
                    reach: arc_before + remaining * chord,
                };
            }
        }
    }
    ChordMarch {
        points,
        reach: arc_before + local * seg_len,
    }
}
