//! How often the filtered schemes keep the central-difference candidate.

use srvreg::hjb::Monotone;
use srvreg::{samples, solve, GridSpec, Scheme, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_s_pair(400);
    let grid = GridSpec::new(160)?;
    let companions = [Monotone::U1, Monotone::UInf, Monotone::V1, Monotone::VInf];
    for (m, plain) in companions.into_iter().zip(Scheme::SEMI_DISCRETE) {
        let mono = solve(&problem, grid, &SchemeConfig::new(plain))?;
        let filt = solve(&problem, grid, &SchemeConfig::new(Scheme::Filtered(m)))?;
        println!(
            "{:<14} accepted {:>5.1}%  u_h(1) monotone {:.6} filtered {:.6}",
            Scheme::Filtered(m).name(),
            100.0 * filt.stats.acceptance_rate(),
            mono.u_at_one(),
            filt.u_at_one()
        );
    }
    Ok(())
}
