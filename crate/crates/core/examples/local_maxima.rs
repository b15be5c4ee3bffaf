//! Local maxima of the total value field and the optimal path through each of them.

use srvreg::diagnostics::total_value;
use srvreg::registration::eval_jh;
use srvreg::{samples, GridSpec, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_s_pair(400);
    let (q1, q2) = problem.srv_fields()?.expect("curve problem");
    let n = 96;
    let total = total_value(&problem, GridSpec::new(n)?, &SchemeConfig::default())?;
    println!("u_h(1) = {:.6}  max u_tot = {:.6}", total.forward.u_at_one(), total.max());
    for m in total.maxima() {
        let path = total.path_through(m.i, m.j)?;
        println!(
            "({:.3}, {:.3}) u_tot={:.6} plateau={} J_h through it={:.6}",
            m.i as f64 / n as f64,
            m.j as f64 / n as f64,
            m.value,
            m.plateau,
            eval_jh(&path, &q1, &q2)
        );
    }
    Ok(())
}
