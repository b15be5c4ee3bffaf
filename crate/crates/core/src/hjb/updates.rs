//! Closed-form local updates.
//!
//! Neighbour naming follows the stencil of node `(i, j)`:
//! `n01 = u[i-1][j]`, `n10 = u[i][j-1]`, `n00 = u[i-1][j-1]`. A direction `α = (α₁, α₂)`
//! points from `x − hα` to `x`, so `α = (1, 0)` reads `n01` and `α = (0, 1)` reads `n10`.
//!
//! The monotone interpolant is `g(α) = (α₁ + α₂ − 1)·n00 + (1 − α₁)·n10 + (1 − α₂)·n01`.
//! U-schemes maximise `g(α) + hf·√(α₁α₂)`; V-schemes work with `v = u²` and maximise
//! `(hf·√(α₁α₂) + √((hf)²α₁α₂ + g_v(α)))²`.

/// Value produced by a local update together with the maximising direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Update {
    pub value: f64,
    pub alpha: [f64; 2],
}

impl Update {
    const fn new(value: f64, alpha: [f64; 2]) -> Self {
        Update { value, alpha }
    }
}

/// U-scheme with `A₁ = {α ≥ 0 : α₁ + α₂ = 1}`.
pub fn update_u1(u01: f64, u10: f64, hf: f64) -> Update {
    let d = u01 - u10;
    let r = (d * d + hf * hf).sqrt();
    // exact arithmetic never drops below the larger neighbour; guard the last ulp
    let value = (0.5 * (u01 + u10 + r)).max(u01.max(u10));
    if r == 0.0 {
        return Update::new(value, [0.5, 0.5]);
    }
    let a1 = 0.5 * (1.0 + d / r);
    Update::new(value, [a1, 1.0 - a1])
}

/// U-scheme with `A∞ = {α ≥ 0 : max(α₁, α₂) = 1}`.
pub fn update_uinf(u00: f64, u01: f64, u10: f64, hf: f64) -> Update {
    let (v1, a1) = uinf_branch(u00, u01, hf);
    let (v2, a2) = uinf_branch(u00, u10, hf);
    if v2 > v1 {
        Update::new(v2, [a2, 1.0])
    } else {
        Update::new(v1, [1.0, a1])
    }
}

/// Maximises `a·u00 + (1 − a)·us + hf·√a` over `a ∈ [0, 1]`.
fn uinf_branch(u00: f64, us: f64, hf: f64) -> (f64, f64) {
    let delta = us - u00;
    if 2.0 * delta > hf {
        let a = hf * hf / (4.0 * delta * delta);
        (us + hf * hf / (4.0 * delta), a)
    } else {
        ((u00 + hf).max(us), 1.0)
    }
}

/// V-scheme with `A₁`; the largest root of `v² − v(v01 + v10 + (hf)²) + v01·v10 = 0`.
pub fn update_v1(v01: f64, v10: f64, hf: f64) -> Update {
    let s = v01 + v10;
    let d = v01 - v10;
    let h2 = hf * hf;
    let disc = d * d + 2.0 * s * h2 + h2 * h2;
    let value = (0.5 * (s + h2 + disc.sqrt())).max(v01.max(v10));
    let r = (d * d + 4.0 * value * h2).sqrt();
    if r == 0.0 {
        return Update::new(value, [0.5, 0.5]);
    }
    let a1 = 0.5 * (1.0 + d / r);
    Update::new(value, [a1, 1.0 - a1])
}

/// V-scheme with `A∞`.
pub fn update_vinf(v00: f64, v01: f64, v10: f64, hf: f64) -> Update {
    let (w1, a1) = vinf_branch(v00, v01, hf);
    let (w2, a2) = vinf_branch(v00, v10, hf);
    if w2 > w1 {
        Update::new(w2, [a2, 1.0])
    } else {
        Update::new(w1, [1.0, a1])
    }
}

fn vinf_branch(v00: f64, vs: f64, hf: f64) -> (f64, f64) {
    let h2 = hf * hf;
    let delta = vs - v00;
    if delta > h2 && vs * h2 <= delta * (delta - h2) {
        let v = vs * (delta / (delta - h2));
        (v, v * h2 / (delta * delta))
    } else {
        let r = hf + (h2 + v00).sqrt();
        ((r * r).max(vs), 1.0)
    }
}

/// Outcome of a filtered update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredUpdate {
    pub update: Update,
    pub accepted: bool,
}

/// Central-difference candidate in the u-representation.
pub fn central_u(u00: f64, u01: f64, u10: f64, hf: f64) -> Update {
    let d = u01 - u10;
    let r = (d * d + hf * hf).sqrt();
    let alpha = if r == 0.0 {
        [0.5, 0.5]
    } else {
        let a1 = 0.5 * (1.0 + d / r);
        [a1, 1.0 - a1]
    };
    Update::new(u00 + r, alpha)
}

/// Central-difference candidate in the v-representation.
pub fn central_v(v00: f64, v01: f64, v10: f64, hf: f64) -> Update {
    let d = v01 - v10;
    let h2 = hf * hf;
    let value = v00 + 0.5 * h2 + (d * d + (2.0 * v00 + v01 + v10) * h2 + 0.25 * h2 * h2).sqrt();
    let r = (d * d + 4.0 * value * h2).sqrt();
    let alpha = if r == 0.0 {
        [0.5, 0.5]
    } else {
        let a1 = 0.5 * (1.0 + d / r);
        [a1, 1.0 - a1]
    };
    Update::new(value, alpha)
}

/// Monotone companions of the filtered schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotone {
    U1,
    UInf,
    V1,
    VInf,
}

impl Monotone {
    pub fn is_v(self) -> bool {
        matches!(self, Monotone::V1 | Monotone::VInf)
    }

    pub fn is_a1(self) -> bool {
        matches!(self, Monotone::U1 | Monotone::V1)
    }

    /// Runs the closed-form update on `(n00, n01, n10)`.
    pub fn update(self, n00: f64, n01: f64, n10: f64, hf: f64) -> Update {
        match self {
            Monotone::U1 => update_u1(n01, n10, hf),
            Monotone::UInf => update_uinf(n00, n01, n10, hf),
            Monotone::V1 => update_v1(n01, n10, hf),
            Monotone::VInf => update_vinf(n00, n01, n10, hf),
        }
    }

    /// Residual of the monotone scheme at a trial node value `t` (in the scheme's own
    /// representation). `mono` is the scheme's solution on the same stencil; the U-form
    /// residual is linear in it.
    pub fn residual(self, n00: f64, n01: f64, n10: f64, hf: f64, h: f64, t: f64, mono: f64) -> f64 {
        match self {
            Monotone::U1 | Monotone::UInf => (mono - t) / h,
            Monotone::V1 | Monotone::VInf => {
                // t is a v-value; with u = √t the residual is
                // (max_α [g_v(α) + 2u·hf·√(α₁α₂)] − u²) / (2uh)
                let t = t.max(0.0).sqrt();
                let c = 2.0 * t * hf;
                let best = match self {
                    Monotone::V1 => 0.5 * (n01 + n10 + ((n01 - n10).powi(2) + c * c).sqrt()),
                    _ => vinf_residual_branch(n00, n01, c).max(vinf_residual_branch(n00, n10, c)),
                };
                let num = best - t * t;
                if t > 0.0 {
                    num / (2.0 * t * h)
                } else if num == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// `max_a a·v00 + (1 − a)·vs + c·√a`.
fn vinf_residual_branch(v00: f64, vs: f64, c: f64) -> f64 {
    let delta = vs - v00;
    if delta > 0.0 && c <= 2.0 * delta {
        vs + c * c / (4.0 * delta)
    } else {
        v00 + c
    }
}

/// Filtered update: the central candidate is kept when the monotone residual at it is at
/// most `filter_k·√h`, otherwise the monotone update is returned.
///
/// The returned direction is normalised into the companion's admissible set.
pub fn update_filtered(
    base: Monotone,
    n00: f64,
    n01: f64,
    n10: f64,
    hf: f64,
    h: f64,
    filter_k: f64,
) -> FilteredUpdate {
    let mono = base.update(n00, n01, n10, hf);
    let cand = if base.is_v() {
        central_v(n00, n01, n10, hf)
    } else {
        central_u(n00, n01, n10, hf)
    };
    let res = base.residual(n00, n01, n10, hf, h, cand.value, mono.value);
    if res.abs() <= filter_k * h.sqrt() {
        let alpha = if base.is_a1() {
            cand.alpha
        } else {
            let m = cand.alpha[0].max(cand.alpha[1]);
            [cand.alpha[0] / m, cand.alpha[1] / m]
        };
        FilteredUpdate {
            update: Update::new(cand.value, alpha),
            accepted: true,
        }
    } else {
        FilteredUpdate {
            update: mono,
            accepted: false,
        }
    }
}
