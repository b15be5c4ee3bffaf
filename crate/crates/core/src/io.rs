//! File formats: curve CSV, path CSV, grid dumps and geodesic exports.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::geodesic::GeodesicResult;
use crate::hjb::{Policy, Repr, ValueField};
use crate::registration::ReparamPath;

/// Magic bytes of the binary value dump.
pub const GRID_MAGIC: &[u8; 8] = b"SRVGRID1";

/// How the parameter column of a curve file is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParamColumn {
    /// Uniform parameters; every column is a coordinate.
    #[default]
    Implicit,
    /// The first column holds `t`; it must be named `t` if a header is present.
    Leading,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Reads a curve from CSV. An optional `#` line and an optional non-numeric header are
/// skipped; parameters come from a leading `t` column when `params` says so.
pub fn read_curve_csv(path: &Path, params: ParamColumn) -> Result<SampledCurve> {
    let file = File::open(path).map_err(|e| parse_err(path, 0, e.to_string()))?;
    read_curve_from(BufReader::new(file), path, params)
}

/// As [`read_curve_csv`] from any reader; `origin` is used in diagnostics only.
pub fn read_curve_from<R: Read>(reader: R, origin: &Path, params: ParamColumn) -> Result<SampledCurve> {
    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut ts = Vec::new();
    let mut width = None;
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| parse_err(origin, lineno, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || (idx == 0 && trimmed.starts_with('#')) {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if points.is_empty() && width.is_none() => {
                // header row
                if params == ParamColumn::Leading && fields[0] != "t" {
                    return Err(parse_err(origin, lineno, format!("expected leading column `t`, found `{}`", fields[0])));
                }
                width = Some(fields.len());
                continue;
            }
            Err(e) => return Err(parse_err(origin, lineno, format!("invalid number: {e}"))),
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(parse_err(origin, lineno, "non-finite value"));
        }
        match width {
            None => width = Some(values.len()),
            Some(w) if w != values.len() => {
                return Err(parse_err(origin, lineno, format!("expected {w} columns, found {}", values.len())))
            }
            _ => {}
        }
        match params {
            ParamColumn::Implicit => points.push(values),
            ParamColumn::Leading => {
                if values.len() < 2 {
                    return Err(parse_err(origin, lineno, "need a `t` column and at least one coordinate"));
                }
                ts.push(values[0]);
                points.push(values[1..].to_vec());
            }
        }
    }
    if points.len() < 2 {
        return Err(parse_err(origin, 0, format!("need at least 2 samples, found {}", points.len())));
    }
    match params {
        ParamColumn::Implicit => SampledCurve::uniform(points),
        ParamColumn::Leading => SampledCurve::new(points, ts),
    }
}

/// Writes a curve with a `t,x1,..,xd` header.
pub fn write_curve_csv<W: Write>(curve: &SampledCurve, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=curve.dim()).map(|k| format!("x{k}")))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for (p, t) in curve.points().zip(curve.params()) {
        write!(w, "{t}")?;
        for x in p {
            write!(w, ",{x}")?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t, phi1, phi2` rows with `t` the cumulative `Δt`.
pub fn write_path_csv<W: Write>(path: &ReparamPath, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    writeln!(w, "t,phi1,phi2")?;
    for (t, p) in path.times().iter().zip(path.points()) {
        writeln!(w, "{t},{},{}", p[0], p[1])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the output of [`write_path_csv`].
pub fn read_path_csv(path: &Path) -> Result<ReparamPath> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| parse_err(path, 0, e.to_string()))?;
    let mut points = Vec::new();
    for (k, rec) in rdr.deserialize::<(f64, f64, f64)>().enumerate() {
        let (_, a, b) = rec.map_err(|e| parse_err(path, k + 2, e.to_string()))?;
        points.push([a, b]);
    }
    ReparamPath::new(points)
}

/// CSV dump of `(i, j, u, alpha1, alpha2)`. Boundary nodes have no policy and leave the
/// last two fields empty. For lattice policies the columns hold the jump `(k, l)`.
pub fn write_grid_csv<W: Write>(value: &ValueField, policy: &Policy, w: W) -> Result<()> {
    let n = value.n();
    if policy.n() != n {
        return Err(Error::precondition("value and policy grids differ"));
    }
    let mut w = BufWriter::new(w);
    match policy {
        Policy::Directions(_) => writeln!(w, "i,j,u,alpha1,alpha2")?,
        Policy::Jumps(_) => writeln!(w, "i,j,u,k,l")?,
    }
    for i in 0..=n {
        for j in 0..=n {
            let u = value.u(i, j);
            if i == 0 || j == 0 {
                writeln!(w, "{i},{j},{u},,")?;
                continue;
            }
            match policy {
                Policy::Directions(p) => {
                    let a = p.alpha(i, j);
                    writeln!(w, "{i},{j},{u},{},{}", a[0], a[1])?;
                }
                Policy::Jumps(p) => {
                    let (k, l) = p.jump(i, j);
                    writeln!(w, "{i},{j},{u},{k},{l}")?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Binary dump of `u`: 8 magic bytes, `N` as little-endian `u64`, then `(N+1)²`
/// little-endian `f64` in row-major order.
pub fn write_grid_binary<W: Write>(value: &ValueField, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    let n = value.n();
    w.write_all(GRID_MAGIC)?;
    w.write_all(&(n as u64).to_le_bytes())?;
    for i in 0..=n {
        for j in 0..=n {
            w.write_all(&value.u(i, j).to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a binary dump back as a `u` field.
pub fn read_grid_binary<R: Read>(mut r: R) -> Result<ValueField> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..8] != GRID_MAGIC {
        return Err(Error::precondition("not a value-grid dump (bad magic)"));
    }
    let n = u64::from_le_bytes(header[8..].try_into().expect("8 bytes")) as usize;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let expected = (n + 1) * (n + 1) * 8;
    if bytes.len() != expected {
        return Err(Error::precondition(format!(
            "grid dump for N = {n} needs {expected} data bytes, found {}",
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    ValueField::new(n, Repr::U, data)
}

/// `manifest.json` of a geodesic export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicManifest {
    pub distance: f64,
    #[serde(rename = "J_h")]
    pub jh: f64,
    pub tau: Vec<f64>,
    pub files: Vec<String>,
}

/// Writes `gamma_XX.csv` per `τ` and `manifest.json` into `dir`.
pub fn write_geodesic(result: &GeodesicResult, dir: &Path) -> Result<GeodesicManifest> {
    fs::create_dir_all(dir)?;
    let width = result.curves.len().saturating_sub(1).to_string().len().max(2);
    let mut files = Vec::with_capacity(result.curves.len());
    for (k, curve) in result.curves.iter().enumerate() {
        let name = format!("gamma_{k:0width$}.csv");
        write_curve_csv(curve, File::create(dir.join(&name))?)?;
        files.push(name);
    }
    let manifest = GeodesicManifest {
        distance: result.distance,
        jh: result.jh,
        tau: result.tau_grid.clone(),
        files,
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}

/// `dir/manifest.json`.
pub fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hjb::{solve, GridSpec, Problem, Scheme, SchemeConfig};
    use std::io::Cursor;

    fn read(text: &str, params: ParamColumn) -> Result<SampledCurve> {
        read_curve_from(Cursor::new(text), Path::new("mem.csv"), params)
    }

    #[test]
    fn curve_variants() {
        let c = read("# comment\n0,0\n1,0\n2,1\n", ParamColumn::Implicit).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.params(), &[0.0, 0.5, 1.0]);
        let c = read("x,y\n0,0\n1,0\n", ParamColumn::Implicit).unwrap();
        assert_eq!(c.dim(), 2);
        let c = read("t,x,y\n0,0,0\n0.2,1,0\n1,2,1\n", ParamColumn::Leading).unwrap();
        assert_eq!(c.params(), &[0.0, 0.2, 1.0]);
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn curve_errors_carry_line() {
        match read("0,0\n1,zz\n", ParamColumn::Implicit) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match read("0,0\n1,0\n2\n", ParamColumn::Implicit) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(read("s,x\n0,0\n1,1\n", ParamColumn::Leading).is_err());
        assert!(read("0,0\n", ParamColumn::Implicit).is_err());
    }

    #[test]
    fn curve_round_trip() {
        let c = crate::samples::semicircle(20);
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        let back = read(std::str::from_utf8(&buf).unwrap(), ParamColumn::Leading).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn binary_round_trip() {
        let sol = solve(&Problem::constant_one(), GridSpec::new(8).unwrap(), &SchemeConfig::new(Scheme::V1)).unwrap();
        let mut buf = Vec::new();
        write_grid_binary(&sol.value, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 81 * 8);
        let back = read_grid_binary(Cursor::new(buf)).unwrap();
        assert_eq!(back, sol.value.to_u());
    }

    #[test]
    fn grid_csv_rows() {
        let sol = solve(&Problem::constant_one(), GridSpec::new(4).unwrap(), &SchemeConfig::new(Scheme::U1)).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&sol.value, &sol.policy, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + 25);
        assert!(text.lines().any(|l| l.starts_with("4,4,") && l.ends_with(",0.5,0.5")));
    }
}
