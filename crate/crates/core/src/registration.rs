//! Optimal reparametrisation paths recovered from a solved policy.

use crate::curve::dot;
use crate::error::{Error, Result};
use crate::hjb::{Forcing, JumpField, Policy, PolicyField};
use crate::srv::SrvField;

/// Monotone piecewise-linear path `{φ_k}` from `𝟘` to `𝟙` with step weights `Δt_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReparamPath {
    points: Vec<[f64; 2]>,
    dts: Vec<f64>,
}

impl ReparamPath {
    /// Validates monotonicity and end points, then attaches `Δt_k = ½(Δφ₁ + Δφ₂)`.
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Backtrack("a path needs at least two points".into()));
        }
        if points[0] != [0.0, 0.0] || *points.last().unwrap() != [1.0, 1.0] {
            return Err(Error::Backtrack(format!(
                "path must run from (0, 0) to (1, 1), got {:?} → {:?}",
                points[0],
                points.last().unwrap()
            )));
        }
        for (k, w) in points.windows(2).enumerate() {
            if w[1][0] < w[0][0] || w[1][1] < w[0][1] || w[1] == w[0] {
                return Err(Error::Backtrack(format!(
                    "path is not strictly progressing at segment {k}: {:?} → {:?}",
                    w[0], w[1]
                )));
            }
        }
        let dts = compute_dts(&points);
        Ok(ReparamPath { points, dts })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn dts(&self) -> &[f64] {
        &self.dts
    }

    /// Number of segments.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Cumulative `t_k = Σ_{l ≤ k} Δt_l`, with `t_0 = 0` and `t_K = 1`.
    pub fn times(&self) -> Vec<f64> {
        let mut t = Vec::with_capacity(self.points.len());
        let mut acc = 0.0;
        t.push(0.0);
        for dt in &self.dts {
            acc += dt;
            t.push(acc);
        }
        *t.last_mut().unwrap() = 1.0;
        t
    }

    /// Maximum distance of the path from the diagonal `x₁ = x₂`, measured along the axes.
    pub fn max_diagonal_offset(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (p[0] - p[1]).abs())
            .fold(0.0, f64::max)
    }

    /// Whether every interior point lies on a grid line of an `N`-grid.
    pub fn on_grid_lines(&self, n: usize) -> bool {
        let on = |v: f64| {
            let s = v * n as f64;
            (s - s.round()).abs() < 1e-9
        };
        self.points.iter().all(|p| on(p[0]) || on(p[1]))
    }
}

/// `Δt_k = ½(Δφ₁,k + Δφ₂,k)`.
pub fn compute_dts(points: &[[f64; 2]]) -> Vec<f64> {
    points
        .windows(2)
        .map(|w| 0.5 * ((w[1][0] - w[0][0]) + (w[1][1] - w[0][1])))
        .collect()
}

/// Backtracks from `𝟙` to `𝟘`.
pub fn backtrack(policy: &Policy) -> Result<ReparamPath> {
    let points = backtrack_from(policy, [1.0, 1.0])?;
    ReparamPath::new(points)
}

/// Backtracks from `start` to `𝟘`; the points are returned in forward order.
pub fn backtrack_from(policy: &Policy, start: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    if !(0.0..=1.0).contains(&start[0]) || !(0.0..=1.0).contains(&start[1]) {
        return Err(Error::OutOfDomain {
            x1: start[0],
            x2: start[1],
        });
    }
    let mut pts = match policy {
        Policy::Directions(p) => trace_directions(p, start)?,
        Policy::Jumps(j) => trace_jumps(j, start)?,
    };
    pts.reverse();
    Ok(pts)
}

const SNAP: f64 = 1e-12;
const MIN_STEP: f64 = 1e-15;

fn snap(v: f64, n: usize) -> f64 {
    let s = v * n as f64;
    let r = s.round();
    if (s - r).abs() < SNAP * n as f64 {
        r / n as f64
    } else {
        v
    }
}

/// Index of the half-open cell `(x_{i−1}, x_i]` containing `v > 0`.
fn cell_index(v: f64, n: usize) -> usize {
    ((v * n as f64 - SNAP).ceil() as usize).clamp(1, n)
}

fn trace_directions(policy: &PolicyField, start: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    let n = policy.n();
    let line = |i: usize| i as f64 / n as f64;
    let mut p = [snap(start[0], n), snap(start[1], n)];
    let mut out = vec![p];
    while p != [0.0, 0.0] {
        if out.len() > 2 * n + 1 {
            return Err(Error::Backtrack(format!("path exceeds {} points", 2 * n + 1)));
        }
        let next = if p[1] == 0.0 {
            [line(cell_index(p[0], n) - 1), 0.0]
        } else if p[0] == 0.0 {
            [0.0, line(cell_index(p[1], n) - 1)]
        } else {
            let (i, j) = (cell_index(p[0], n), cell_index(p[1], n));
            let a = policy.alpha(i, j);
            let (left, bottom) = (line(i - 1), line(j - 1));
            if !(a[0] > 0.0 || a[1] > 0.0) {
                return Err(Error::Backtrack(format!("zero direction in cell ({i}, {j})")));
            }
            let hit_left = (a[0] > 0.0).then(|| {
                let t = (p[0] - left) / a[0];
                [left, snap((p[1] - t * a[1]).max(bottom), n)]
            });
            let hit_bottom = (a[1] > 0.0).then(|| {
                let t = (p[1] - bottom) / a[1];
                [snap((p[0] - t * a[0]).max(left), n), bottom]
            });
            match (hit_left, hit_bottom) {
                (Some(l), Some(b)) => [l[0].max(b[0]), l[1].max(b[1])],
                (Some(l), None) => l,
                (None, Some(b)) => b,
                (None, None) => unreachable!(),
            }
        };
        if p[0] - next[0] < MIN_STEP && p[1] - next[1] < MIN_STEP {
            return Err(Error::Backtrack(format!("no progress at {p:?}")));
        }
        p = next;
        out.push(p);
    }
    Ok(out)
}

fn trace_jumps(jumps: &JumpField, start: [f64; 2]) -> Result<Vec<[f64; 2]>> {
    let n = jumps.n();
    let to_index = |v: f64| {
        let s = v * n as f64;
        let r = s.round();
        if (s - r).abs() > 1e-9 {
            Err(Error::Backtrack(format!("DDP backtracking must start on a node, got {v}")))
        } else {
            Ok(r as usize)
        }
    };
    let (mut i, mut j) = (to_index(start[0])?, to_index(start[1])?);
    let node = |i: usize, j: usize| [i as f64 / n as f64, j as f64 / n as f64];
    let mut out = vec![node(i, j)];
    while (i, j) != (0, 0) {
        let (k, l) = if i == 0 || j == 0 { (i, j) } else { jumps.jump(i, j) };
        if k == 0 && l == 0 {
            return Err(Error::Backtrack(format!("empty jump at node ({i}, {j})")));
        }
        i -= k;
        j -= l;
        out.push(node(i, j));
    }
    Ok(out)
}

/// `J_h = Σ_k ⟨q₁(φ₁,k), q₂(φ₂,k)⟩ · √(Δφ₁,k Δφ₂,k)`, evaluated at segment end points.
pub fn eval_jh(path: &ReparamPath, q1: &SrvField, q2: &SrvField) -> f64 {
    let mut a = vec![0.0; q1.dim()];
    let mut b = vec![0.0; q2.dim()];
    path.points
        .windows(2)
        .map(|w| {
            let (d1, d2) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
            if d1 == 0.0 || d2 == 0.0 {
                return 0.0;
            }
            q1.eval_into(w[1][0], &mut a);
            q2.eval_into(w[1][1], &mut b);
            dot(&a, &b) * (d1 * d2).sqrt()
        })
        .sum()
}

/// `J_h` computed through registered samples `q_{i,k} = q_i(φ_{i,k})·√(Δφ_{i,k}/Δt_k)` for
/// an arbitrary positive step convention `dts`.
pub fn eval_jh_with_dts(path: &ReparamPath, dts: &[f64], q1: &SrvField, q2: &SrvField) -> Result<f64> {
    if dts.len() != path.segments() || dts.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::precondition("one positive Δt per path segment is required"));
    }
    let mut a = vec![0.0; q1.dim()];
    let mut b = vec![0.0; q2.dim()];
    Ok(path
        .points
        .windows(2)
        .zip(dts)
        .map(|(w, &dt)| {
            q1.eval_into(w[1][0], &mut a);
            q2.eval_into(w[1][1], &mut b);
            let s1 = ((w[1][0] - w[0][0]) / dt).sqrt();
            let s2 = ((w[1][1] - w[0][1]) / dt).sqrt();
            dot(&a, &b) * s1 * s2 * dt
        })
        .sum())
}

/// `Σ hf_span` along a lattice path, reusing the solver's forcing values.
pub fn lattice_objective(path: &ReparamPath, forcing: &dyn Forcing) -> Result<f64> {
    let n = forcing.n();
    let idx = |v: f64| {
        let s = v * n as f64;
        let r = s.round();
        if (s - r).abs() > 1e-9 {
            Err(Error::precondition("lattice objective needs a path through grid nodes"))
        } else {
            Ok(r as usize)
        }
    };
    let mut total = 0.0;
    for w in path.points.windows(2) {
        let (i0, j0, i1, j1) = (idx(w[0][0])?, idx(w[0][1])?, idx(w[1][0])?, idx(w[1][1])?);
        let (k, l) = (i1 - i0, j1 - j0);
        if k > 0 && l > 0 {
            total += forcing.hf_span(i1, j1, k, l);
        }
    }
    Ok(total)
}
