//! Convergence table for the Möbius semicircle pair against the default fine reference.

use srvreg::diagnostics::{run_convergence, ConvergenceConfig};
use srvreg::{samples, Scheme};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_mobius_pair(1000);
    let cfg = ConvergenceConfig::new(
        vec![Scheme::U1, Scheme::UInf, Scheme::V1, Scheme::VInf, Scheme::Ddp],
        vec![20, 40, 80, 160],
        320,
    );
    let report = run_convergence(&problem, &cfg)?;
    report.write_csv(std::io::stdout())?;
    Ok(())
}
