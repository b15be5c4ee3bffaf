//! Wall time of the anti-diagonal wavefront sweep for several thread counts.

use std::time::Instant;

use srvreg::{samples, solve, GridSpec, Scheme, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let problem = samples::semicircle_mobius_pair(1000);
    let grid = GridSpec::new(1280)?;
    let reference = solve(&problem, grid, &SchemeConfig::new(Scheme::VInf))?;
    for threads in [1, 2, 4, 8] {
        let t = Instant::now();
        let sol = solve(&problem, grid, &SchemeConfig::new(Scheme::VInf).with_threads(threads))?;
        let ms = t.elapsed().as_secs_f64() * 1e3;
        println!("threads={threads} {ms:>8.1} ms  identical={}", sol.value == reference.value);
    }
    Ok(())
}
