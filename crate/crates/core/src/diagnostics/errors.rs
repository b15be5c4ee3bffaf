use crate::error::{Error, Result};
use crate::geodesic::RegisteredSrv;
use crate::hjb::ValueField;

/// `max |u_h − u_ε|` over the nodes of the coarse grid; `u_ε` must live on a refinement.
pub fn linf_error(u_h: &ValueField, u_eps: &ValueField) -> Result<f64> {
    let (coarse, fine) = (u_h.n(), u_eps.n());
    if fine < coarse || fine % coarse != 0 {
        return Err(Error::NonNestedGrids { coarse, fine });
    }
    let r = fine / coarse;
    let mut err: f64 = 0.0;
    for i in 0..=coarse {
        for j in 0..=coarse {
            err = err.max((u_h.u(i, j) - u_eps.u(i * r, j * r)).abs());
        }
    }
    Ok(err)
}

/// `L²` distance between two piecewise-constant functions on `[0, 1]`, each given by its
/// values on consecutive intervals of lengths `dts`.
pub fn l2_distance_piecewise(a: &[Vec<f64>], a_dts: &[f64], b: &[Vec<f64>], b_dts: &[f64]) -> f64 {
    let (mut ia, mut ib) = (0, 0);
    let (mut ta, mut tb) = (a_dts.first().copied().unwrap_or(0.0), b_dts.first().copied().unwrap_or(0.0));
    let mut t = 0.0;
    let mut acc = 0.0;
    while ia < a.len() && ib < b.len() {
        let end = ta.min(tb);
        let w = end - t;
        if w > 0.0 {
            let d2: f64 = a[ia].iter().zip(&b[ib]).map(|(x, y)| (x - y) * (x - y)).sum();
            acc += d2 * w;
        }
        t = end;
        // advance whichever interval ended; both on a shared breakpoint
        if ta <= end {
            ia += 1;
            if ia < a.len() {
                ta += a_dts[ia];
            }
        }
        if tb <= end {
            ib += 1;
            if ib < b.len() {
                tb += b_dts[ib];
            }
        }
    }
    acc.sqrt()
}

/// `π · max(‖q_{1,h} − q_{1,ε}‖, ‖q_{2,h} − q_{2,ε}‖)`, an upper bound on the distance
/// between the two discrete geodesics for every `τ`.
pub fn geodesic_error_bound(h: &RegisteredSrv, eps: &RegisteredSrv) -> f64 {
    let e1 = l2_distance_piecewise(&h.q1, &h.dts, &eps.q1, &eps.dts);
    let e2 = l2_distance_piecewise(&h.q2, &h.dts, &eps.q2, &eps.dts);
    std::f64::consts::PI * e1.max(e2)
}
