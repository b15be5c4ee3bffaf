//! Synthetic test curves.
//!
//! Straight segments give `f ≡ 1` (identical) or `f ≡ 0` (perpendicular). The semicircle
//! has constant speed. The S-curve is a sine arc resampled to arc length. Möbius pairs
//! share one trace but start from different parametrisations, so their shape distance
//! is zero.

use std::f64::consts::PI;

use crate::curve::{arc_length_resample, Reparam, SampledCurve};
use crate::hjb::Problem;

/// `c(t) = (t, 0)`.
pub fn segment(m: usize) -> SampledCurve {
    SampledCurve::from_fn(m, |t| vec![t, 0.0]).expect("segment samples are distinct")
}

/// `c(t) = (0, t)`.
pub fn perpendicular_segment(m: usize) -> SampledCurve {
    SampledCurve::from_fn(m, |t| vec![0.0, t]).expect("segment samples are distinct")
}

/// `c(t) = (cos πt, sin πt)`.
pub fn semicircle(m: usize) -> SampledCurve {
    SampledCurve::from_fn(m, |t| vec![(PI * t).cos(), (PI * t).sin()]).expect("semicircle samples are distinct")
}

/// `(s, 0.3 sin 2πs)` resampled to constant speed.
pub fn s_curve(m: usize) -> SampledCurve {
    let fine = SampledCurve::from_fn(8 * m.max(1), |s| vec![s, 0.3 * (2.0 * PI * s).sin()])
        .expect("S-curve samples are distinct");
    arc_length_resample(&fine, m)
}

/// `t ↦ (cos πψ(t), sin πψ(t))`, sampled from the closed form.
pub fn semicircle_reparam(m: usize, psi: &Reparam) -> SampledCurve {
    SampledCurve::from_fn(m, |t| {
        let s = psi.apply(t);
        vec![(PI * s).cos(), (PI * s).sin()]
    })
    .expect("reparametrised semicircle samples are distinct")
}

/// `t ↦ (ψ(t), 0)`.
pub fn segment_reparam(m: usize, psi: &Reparam) -> SampledCurve {
    SampledCurve::from_fn(m, |t| vec![psi.apply(t), 0.0]).expect("segment samples are distinct")
}

/// Two identical unit segments; `f ≡ 1` and `u(x) = √(x₁x₂)`.
pub fn segment_pair(m: usize) -> Problem {
    Problem::curves(segment(m), segment(m))
}

/// Semicircle composed with `ψ₁` and with `ψ₂`; the exact shape distance is 0.
pub fn semicircle_mobius_pair(m: usize) -> Problem {
    Problem::curves(
        semicircle_reparam(m, &Reparam::psi1()),
        semicircle_reparam(m, &Reparam::psi2()),
    )
}

/// Semicircle against the S-curve, a pair without a closed-form answer.
pub fn semicircle_s_pair(m: usize) -> Problem {
    Problem::curves(semicircle(m), s_curve(m))
}
