//! Elastic shape distance between the bundled semicircle and S-curve for every scheme.

use srvreg::registration::{backtrack, eval_jh};
use srvreg::{samples, shape_distance, solve, GridSpec, Scheme, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_s_pair(400);
    let (q1, q2) = problem.srv_fields()?.expect("curve problem");
    let grid = GridSpec::new(160)?;
    println!("{:<12} {:>10} {:>10} {:>12} {:>12}", "scheme", "u_h(1)", "J_h", "arccos u", "arccos J");
    for scheme in [Scheme::U1, Scheme::UInf, Scheme::V1, Scheme::VInf, Scheme::Ddp] {
        let sol = solve(&problem, grid, &SchemeConfig::new(scheme))?;
        let jh = eval_jh(&backtrack(&sol.policy)?, &q1, &q2);
        println!(
            "{:<12} {:>10.6} {:>10.6} {:>12.6} {:>12.6}",
            scheme.name(),
            sol.u_at_one(),
            jh,
            shape_distance(sol.u_at_one()),
            shape_distance(jh)
        );
    }
    Ok(())
}
