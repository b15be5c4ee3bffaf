//! Shape distance and discrete geodesics between registered SRV fields.

use crate::curve::{norm, SampledCurve};
use crate::error::{Error, Result};
use crate::registration::{eval_jh, ReparamPath};
use crate::srv::SrvField;

/// Below this angle the sine ratio is replaced by its linear limit.
pub const THETA_TOL: f64 = 1e-6;
/// Angles this close to `π` have no unique geodesic.
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// `arccos` of `J_h` clamped to `[−1, 1]`.
pub fn shape_distance(jh: f64) -> f64 {
    jh.clamp(-1.0, 1.0).acos()
}

/// `w(τ) = sin(τθ) / sin θ`.
pub fn geodesic_weights(theta: f64, tau: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::precondition(format!("τ must lie in [0, 1], got {tau}")));
    }
    if !(theta >= 0.0) {
        return Err(Error::precondition(format!("θ must be non-negative, got {theta}")));
    }
    if theta >= std::f64::consts::PI - ANTIPODAL_TOL {
        return Err(Error::Antipodal(theta));
    }
    if theta < THETA_TOL {
        return Ok(tau);
    }
    Ok((tau * theta).sin() / theta.sin())
}

/// Per-segment SRV samples of both curves along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisteredSrv {
    pub q1: Vec<Vec<f64>>,
    pub q2: Vec<Vec<f64>>,
    pub dts: Vec<f64>,
}

impl RegisteredSrv {
    pub fn segments(&self) -> usize {
        self.dts.len()
    }
}

/// `q_{i,k} = q_i(φ_{i,k}) · √(Δφ_{i,k} / Δt_k)`.
pub fn registered_srv(path: &ReparamPath, q1: &SrvField, q2: &SrvField) -> RegisteredSrv {
    registered_srv_with_dts(path, path.dts(), q1, q2)
}

/// As [`registered_srv`] with a caller-supplied step convention.
pub fn registered_srv_with_dts(path: &ReparamPath, dts: &[f64], q1: &SrvField, q2: &SrvField) -> RegisteredSrv {
    let mut r = RegisteredSrv {
        q1: Vec::with_capacity(dts.len()),
        q2: Vec::with_capacity(dts.len()),
        dts: Vec::with_capacity(dts.len()),
    };
    for (w, &dt) in path.points().windows(2).zip(dts) {
        if dt <= 0.0 {
            continue;
        }
        let s1 = ((w[1][0] - w[0][0]) / dt).sqrt();
        let s2 = ((w[1][1] - w[0][1]) / dt).sqrt();
        r.q1.push(q1.eval(w[1][0]).into_iter().map(|v| v * s1).collect());
        r.q2.push(q2.eval(w[1][1]).into_iter().map(|v| v * s2).collect());
        r.dts.push(dt);
    }
    r
}

/// `γ_k(τ) = w(1 − τ)·q_{1,k} + w(τ)·q_{2,k}` for each `τ`, with `θ = arccos J_h`.
pub fn geodesic_points(reg: &RegisteredSrv, jh: f64, taus: &[f64]) -> Result<Vec<Vec<Vec<f64>>>> {
    let theta = shape_distance(jh);
    taus.iter()
        .map(|&tau| {
            let a = geodesic_weights(theta, 1.0 - tau)?;
            let b = geodesic_weights(theta, tau)?;
            Ok(reg
                .q1
                .iter()
                .zip(&reg.q2)
                .map(|(x, y)| x.iter().zip(y).map(|(u, v)| a * u + b * v).collect())
                .collect())
        })
        .collect()
}

/// Discrete inverse transform `Σ_{l ≤ k} γ_l |γ_l| Δt_l`, starting at the origin.
///
/// Parameters are the cumulative `Δt`; the result may stall where `γ` vanishes.
pub fn preshape_curve(gamma: &[Vec<f64>], dts: &[f64]) -> Result<SampledCurve> {
    if gamma.is_empty() || gamma.len() != dts.len() {
        return Err(Error::precondition("need one γ sample per Δt"));
    }
    let d = gamma[0].len();
    let total: f64 = dts.iter().sum();
    let mut cur = vec![0.0; d];
    let mut points = vec![cur.clone()];
    let mut params = vec![0.0];
    let mut t = 0.0;
    for (g, &dt) in gamma.iter().zip(dts) {
        let w = norm(g) * dt;
        for (c, gi) in cur.iter_mut().zip(g) {
            *c += w * gi;
        }
        points.push(cur.clone());
        t += dt;
        params.push(t / total);
    }
    *params.last_mut().unwrap() = 1.0;
    SampledCurve::from_parts(points, params)
}

/// Default `τ` grid: `count` uniform values in `[0, 1]`.
pub fn tau_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5],
        c => (0..c).map(|k| k as f64 / (c - 1) as f64).collect(),
    }
}

/// Distance, objective and geodesic representatives for a registered pair.
#[derive(Debug, Clone)]
pub struct GeodesicResult {
    pub distance: f64,
    pub jh: f64,
    pub registered: RegisteredSrv,
    pub tau_grid: Vec<f64>,
    pub curves: Vec<SampledCurve>,
}

/// Builds the geodesic between `q1` and `q2` along `path`.
pub fn geodesic(path: &ReparamPath, q1: &SrvField, q2: &SrvField, taus: &[f64]) -> Result<GeodesicResult> {
    let jh = eval_jh(path, q1, q2);
    let registered = registered_srv(path, q1, q2);
    let points = geodesic_points(&registered, jh, taus)?;
    let curves = points
        .iter()
        .map(|g| preshape_curve(g, &registered.dts))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeodesicResult {
        distance: shape_distance(jh),
        jh,
        registered,
        tau_grid: taus.to_vec(),
        curves,
    })
}
