//! Lattice dynamic programming against brute-force enumeration of all lattice paths.

use srvreg::hjb::ddp::{admissible_jumps, enumerate_lattice_max};
use srvreg::hjb::{solve_with_forcing, GridForcing};
use srvreg::{Scheme, SchemeConfig};

fn main() -> srvreg::Result<()> {
    let n = 5;
    let forcing = GridForcing::from_fn(n, |x, y| 1.0 + 0.5 * (4.0 * x).sin() * (3.0 * y).cos())?;
    for radius in [1.5, 2.5, n as f64] {
        let cfg = SchemeConfig::new(Scheme::Ddp).with_ddp_radius(radius);
        let ddp = solve_with_forcing(&forcing, &cfg)?.u_at_one();
        let jumps = admissible_jumps(radius);
        let brute = enumerate_lattice_max(n, &jumps, &forcing);
        println!("R={radius:<4} jumps={:<3} ddp={ddp:.12} enumeration={brute:.12}", jumps.len());
    }
    Ok(())
}
