//! Geodesic between the semicircle and the S-curve, exported as CSV plus a JSON manifest.
//!
//! Usage: `cargo run --example geodesic [-- OUT_DIR]` (default: a temporary directory).

use srvreg::io::write_geodesic;
use srvreg::registration::backtrack;
use srvreg::{geodesic, samples, solve, GridSpec, SchemeConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let problem = samples::semicircle_s_pair(400);
    let (q1, q2) = problem.srv_fields()?.expect("curve problem");
    let sol = solve(&problem, GridSpec::new(160)?, &SchemeConfig::default())?;
    let path = backtrack(&sol.policy)?;
    let tau: Vec<f64> = (0..=6).map(|k| k as f64 / 6.0).collect();
    let geo = geodesic(&path, &q1, &q2, &tau)?;

    let tmp;
    let dir = match std::env::args().nth(1) {
        Some(d) => std::path::PathBuf::from(d),
        None => {
            tmp = tempfile::tempdir()?;
            tmp.path().to_path_buf()
        }
    };
    std::fs::create_dir_all(&dir)?;
    let manifest = write_geodesic(&geo, &dir)?;
    println!("distance {:.6}  J_h {:.6}", geo.distance, geo.jh);
    for (t, c) in tau.iter().zip(&geo.curves) {
        let end = c.point(c.len() - 1);
        println!("tau={t:.3} length {:.4} endpoint ({:.4}, {:.4})", c.length(), end[0], end[1]);
    }
    println!("wrote {} files to {}", manifest.files.len() + 1, dir.display());
    Ok(())
}
