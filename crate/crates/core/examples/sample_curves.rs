//! Builds the bundled sample curves, checks the SRV round trip and writes them as CSV.
//!
//! Usage: `cargo run --example sample_curves [-- OUT_DIR]` (default `data/`).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use srvreg::curve::{apply_reparam, Reparam, SampledCurve};
use srvreg::{inverse_srvt, samples, srvt};

const M: usize = 200;

fn write(dir: &PathBuf, name: &str, c: &SampledCurve, comment: &str) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(dir.join(name))?);
    writeln!(w, "# {comment}")?;
    writeln!(w, "x,y")?;
    for p in c.points() {
        writeln!(w, "{},{}", p[0], p[1])?;
    }
    w.flush()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;

    let s_curve = samples::s_curve(M);
    let curves = [
        ("segment.csv", samples::segment(M), "c(t) = (t, 0)"),
        ("perpendicular_segment.csv", samples::perpendicular_segment(M), "c(t) = (0, t)"),
        ("semicircle.csv", samples::semicircle(M), "c(t) = (cos pi t, sin pi t)"),
        ("s_curve.csv", s_curve.clone(), "(s, 0.3 sin 2 pi s) at constant speed"),
        ("segment_psi1.csv", samples::segment_reparam(M, &Reparam::psi1()), "segment composed with psi1"),
        ("segment_psi2.csv", samples::segment_reparam(M, &Reparam::psi2()), "segment composed with psi2"),
        ("semicircle_psi1.csv", samples::semicircle_reparam(M, &Reparam::psi1()), "semicircle composed with psi1"),
        ("semicircle_psi2.csv", samples::semicircle_reparam(M, &Reparam::psi2()), "semicircle composed with psi2"),
        ("s_curve_psi1.csv", apply_reparam(&s_curve, &Reparam::psi1())?, "S-curve composed with psi1"),
        ("s_curve_psi2.csv", apply_reparam(&s_curve, &Reparam::psi2())?, "S-curve composed with psi2"),
    ];
    for (name, c, comment) in &curves {
        let q = srvt(c, c.params())?;
        let back = inverse_srvt(&q)?;
        let scale = c.length();
        let err = c
            .points()
            .zip(back.points())
            .map(|(p, r)| ((p[0] - c.point(0)[0]) / scale - r[0]).abs().max(((p[1] - c.point(0)[1]) / scale - r[1]).abs()))
            .fold(0.0, f64::max);
        println!("{name:<28} length {:.6}  |q|^2 mass {:.12}  round trip {err:.1e}", scale, q.l2_norm_sq());
        write(&dir, name, c, comment)?;
    }
    println!("wrote {} curves to {}", curves.len(), dir.display());
    Ok(())
}
