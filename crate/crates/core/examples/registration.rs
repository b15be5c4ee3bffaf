//! Registers a semicircle against a Möbius reparametrisation of itself and compares the
//! recovered path with the exact relative reparametrisation.

use srvreg::curve::Reparam;
use srvreg::registration::{backtrack, eval_jh};
use srvreg::{samples, solve, GridSpec, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_mobius_pair(1000);
    let (q1, q2) = problem.srv_fields()?.expect("curve problem");
    // c∘ψ1∘φ1 = c∘ψ2∘φ2 along the optimal path, i.e. ψ1(φ1) = ψ2(φ2)
    let (psi1, psi2) = (Reparam::psi1(), Reparam::psi2());
    for n in [20, 40, 80, 160, 320] {
        let sol = solve(&problem, GridSpec::new(n)?, &SchemeConfig::default())?;
        let path = backtrack(&sol.policy)?;
        let mismatch = path
            .points()
            .iter()
            .map(|p| (psi1.apply(p[0]) - psi2.apply(p[1])).abs())
            .fold(0.0, f64::max);
        println!(
            "N={n:<4} vertices={:<4} J_h={:.6}  max |psi1(phi1) - psi2(phi2)| = {mismatch:.4}",
            path.points().len(),
            eval_jh(&path, &q1, &q2)
        );
    }
    Ok(())
}
