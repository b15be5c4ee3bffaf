//! Brute-force maximisation of the local scheme functionals.
//!
//! Used as ground truth for the closed forms in [`super::updates`].

use super::updates::Update;
use crate::error::{Error, Result};

/// Admissible direction set of a semi-discrete scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Admissible {
    /// `α₁ + α₂ = 1`
    A1,
    /// `max(α₁, α₂) = 1`
    AInf,
}

/// Representation the scheme works in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Repr {
    U,
    V,
}

/// Local scheme functional at direction `alpha` for the stencil `(n00, n01, n10)`.
pub fn local_functional(n00: f64, n01: f64, n10: f64, hf: f64, repr: Repr, alpha: [f64; 2]) -> f64 {
    let g = (alpha[0] + alpha[1] - 1.0) * n00 + (1.0 - alpha[0]) * n10 + (1.0 - alpha[1]) * n01;
    let s = (alpha[0] * alpha[1]).sqrt();
    match repr {
        Repr::U => g + hf * s,
        Repr::V => {
            let r = hf * s + (hf * hf * s * s + g.max(0.0)).sqrt();
            r * r
        }
    }
}

/// Maximises the scheme functional over the admissible set by dense sampling followed by
/// golden-section refinement around the best sample of every branch.
///
/// `samples` is the number of points per branch and must be at least 1000.
pub fn brute_force_update(
    n00: f64,
    n01: f64,
    n10: f64,
    hf: f64,
    set: Admissible,
    repr: Repr,
    samples: usize,
) -> Result<Update> {
    if samples < 1000 {
        return Err(Error::precondition("brute force needs at least 1000 samples"));
    }
    let n = [n00, n01, n10];
    // Each branch maps a ∈ [0, 1] to a direction.
    let branches: Vec<Box<dyn Fn(f64) -> [f64; 2]>> = match set {
        Admissible::A1 => vec![Box::new(|a| [a, 1.0 - a])],
        Admissible::AInf => vec![Box::new(|a| [1.0, a]), Box::new(|a| [a, 1.0])],
    };
    let mut best = Update {
        value: f64::NEG_INFINITY,
        alpha: [0.0, 0.0],
    };
    for dir in &branches {
        let eval = |a: f64| local_functional(n[0], n[1], n[2], hf, repr, dir(a));
        let step = 1.0 / (samples - 1) as f64;
        let (mut k_best, mut v_best) = (0, f64::NEG_INFINITY);
        for k in 0..samples {
            let v = eval(k as f64 * step);
            if v > v_best {
                v_best = v;
                k_best = k;
            }
        }
        let lo = (k_best as f64 - 1.0).max(0.0) * step;
        let hi = ((k_best as f64 + 1.0) * step).min(1.0);
        let (a, v) = golden_max(&eval, lo, hi);
        let (a, v) = if v >= v_best { (a, v) } else { (k_best as f64 * step, v_best) };
        if v > best.value {
            best = Update { value: v, alpha: dir(a) };
        }
    }
    Ok(best)
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..100 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    // Include the bracket ends: maximisers often sit on a = 0 or a = 1.
    [(lo, f(lo)), (hi, f(hi)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((lo, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc })
}
