//! File formats.
//!
//! Sample files are CSV preceded by one metadata line:
//!
//! ```text
//! # kind=far k=6.283185307179586 incident_deg=45 epsilon=0 seed=0
//! theta_deg,re,im
//! 0.0000000000000000e0,1.2345678901234567e-2,-3.4567890123456789e-3
//! ```
//!
//! Near-field files carry `radius=` in the metadata and rows `x,y,re,im`.
//! Values are written with 17 significant digits.
//!
//! Indicator grids are CSV with header `x,y,value`, one row per node with
//! `x` running fastest and `y` increasing.
//!
//! Heatmaps are binary PPM (P6), one pixel per node, top row at the lowest
//! `y`. A value `v ∈ [0, 1]` maps to
//! `r = c(4v − 3)`, `g = c(4v − 2)`, `b = c(4v − 1)` with
//! `c(t) = clamp(1.5 − |t|, 0, 1)`, each channel scaled by 255 and rounded:
//! dark blue at 0, cyan, yellow, dark red at 1.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use dsm::indicator::IndicatorGrid;
use dsm::measurement::{FieldSamples, Geometry, SampleKind};
use dsm::{Direction, Point};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

/// Metadata written with every sample file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleMeta {
    pub k: f64,
    pub epsilon: f64,
    pub seed: u64,
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn format_samples(s: &FieldSamples, meta: &SampleMeta) -> String {
    let mut out = String::new();
    let inc = s.incident().angle().to_degrees();
    match s.geometry() {
        Geometry::Far { directions } => {
            let _ = writeln!(
                out,
                "# kind=far k={} incident_deg={} epsilon={} seed={}",
                meta.k, inc, meta.epsilon, meta.seed
            );
            out.push_str("theta_deg,re,im\n");
            for (d, v) in directions.iter().zip(s.values()) {
                let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", d.angle().to_degrees(), v.re, v.im);
            }
        }
        Geometry::Near { radius, points } => {
            let _ = writeln!(
                out,
                "# kind=near k={} incident_deg={} radius={} epsilon={} seed={}",
                meta.k, inc, radius, meta.epsilon, meta.seed
            );
            out.push_str("x,y,re,im\n");
            for (p, v) in points.iter().zip(s.values()) {
                let _ = writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", p.x(), p.y(), v.re, v.im);
            }
        }
    }
    out
}

pub fn write_samples(path: &Path, s: &FieldSamples, meta: &SampleMeta) -> CliResult<()> {
    write_atomic(path, format_samples(s, meta).as_bytes())
}

/// A parsed sample file.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleFile {
    pub k: f64,
    pub samples: FieldSamples,
}

pub fn parse_samples(path: &Path, text: &str) -> CliResult<SampleFile> {
    let err = |m: String| CliError::data(path, m);
    let mut lines = text.lines().enumerate();
    let meta_line = lines
        .next()
        .and_then(|(_, l)| l.strip_prefix('#'))
        .ok_or_else(|| err("missing `#` metadata line".into()))?;
    let mut kind = None;
    let mut k = None;
    let mut inc = None;
    let mut radius = None;
    for tok in meta_line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| err(format!("bad metadata token `{tok}`")))?;
        let number = || val.parse::<f64>().map_err(|_| err(format!("bad value for `{key}`")));
        match key {
            "kind" => {
                kind = Some(match val {
                    "far" => SampleKind::Far,
                    "near" => SampleKind::Near,
                    _ => return Err(err(format!("unknown kind `{val}`"))),
                })
            }
            "k" => k = Some(number()?),
            "incident_deg" => inc = Some(number()?),
            "radius" => radius = Some(number()?),
            _ => {}
        }
    }
    let kind = kind.ok_or_else(|| err("metadata lacks `kind`".into()))?;
    let k = k.ok_or_else(|| err("metadata lacks `k`".into()))?;
    let incident = Direction::from_angle(
        inc.ok_or_else(|| err("metadata lacks `incident_deg`".into()))?
            .to_radians(),
    );
    let columns = if kind == SampleKind::Far { 3 } else { 4 };
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_ascii_alphabetic()) {
            continue;
        }
        let f = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err(format!("line {}: not a number", i + 1)))?;
        if f.len() != columns {
            return Err(err(format!("line {}: expected {columns} columns", i + 1)));
        }
        values.push(Complex64::new(f[columns - 2], f[columns - 1]));
        coords.push((f[0], if columns == 4 { f[1] } else { 0.0 }));
    }
    let samples = match kind {
        SampleKind::Far => FieldSamples::far(
            coords
                .iter()
                .map(|(t, _)| Direction::from_angle(t.to_radians()))
                .collect(),
            values,
            incident,
        ),
        SampleKind::Near => {
            let r = radius.ok_or_else(|| err("near-field metadata lacks `radius`".into()))?;
            FieldSamples::near(
                r,
                coords.iter().map(|&(x, y)| Point::new2(x, y)).collect(),
                values,
                incident,
            )
        }
    }
    .map_err(|e| err(e.to_string()))?;
    Ok(SampleFile { k, samples })
}

pub fn read_samples(path: &Path) -> CliResult<SampleFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_samples(path, &text)
}

pub fn format_grid_csv(g: &IndicatorGrid) -> String {
    let grid = g.grid();
    let mut out = String::with_capacity(g.values().len() * 72);
    out.push_str("x,y,value\n");
    for (idx, v) in g.values().iter().enumerate() {
        let p = grid.node(idx);
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", p.x(), p.y(), v);
    }
    out
}

/// Color of a normalized value under the documented map.
pub fn colormap(v: f64) -> [u8; 3] {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    let c = |t: f64| ((1.5 - t.abs()).clamp(0.0, 1.0) * 255.0).round() as u8;
    [c(4.0 * v - 3.0), c(4.0 * v - 2.0), c(4.0 * v - 1.0)]
}

pub fn heatmap_ppm(g: &IndicatorGrid) -> Vec<u8> {
    let grid = g.grid();
    let mut out = format!("P6\n{} {}\n255\n", grid.nx(), grid.ny()).into_bytes();
    out.reserve(3 * g.values().len());
    for v in g.values() {
        out.extend_from_slice(&colormap(*v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsm::indicator::SamplingGrid;
    use dsm::measurement::{far_angles, near_circle_geometry};
    use dsm::{Dim, WaveContext};

    fn meta() -> SampleMeta {
        SampleMeta {
            k: 2.0 * std::f64::consts::PI,
            epsilon: 0.2,
            seed: 3,
        }
    }

    fn values(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin() / 3.0, 1e-7 * (j as f64).cos()))
            .collect()
    }

    #[test]
    fn far_round_trip_is_lossless_in_values() {
        let s = FieldSamples::far(far_angles(50).unwrap(), values(50), Direction::from_angle(0.3)).unwrap();
        let text = format_samples(&s, &meta());
        assert!(text.starts_with("# kind=far k=6.283185307179586 incident_deg="));
        assert_eq!(text.lines().count(), 52);
        let back = parse_samples(Path::new("x.csv"), &text).unwrap();
        assert_eq!(back.k, meta().k);
        assert_eq!(back.samples.values(), s.values());
        assert!((back.samples.incident().angle() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn near_round_trip() {
        let ctx = WaveContext::unit_wavelength(Dim::Two);
        let pts = near_circle_geometry(&ctx, 4.0, 20).unwrap();
        let s = FieldSamples::near(4.0, pts, values(20), Direction::from_angle(1.0)).unwrap();
        let back = parse_samples(Path::new("x.csv"), &format_samples(&s, &meta())).unwrap();
        assert_eq!(back.samples, s);
    }

    #[test]
    fn malformed_files() {
        let p = Path::new("bad.csv");
        for text in [
            "theta_deg,re,im\n0,1,1\n",
            "# kind=mid k=1 incident_deg=0\n",
            "# kind=far incident_deg=0\n",
            "# kind=far k=1 incident_deg=0\n0,1\n",
            "# kind=far k=1 incident_deg=0\n0,a,1\n",
            "# kind=near k=1 incident_deg=0\n1,0,1,1\n",
        ] {
            assert!(matches!(parse_samples(p, text), Err(CliError::Data { .. })), "{text}");
        }
    }

    #[test]
    fn colormap_endpoints() {
        assert_eq!(colormap(0.0), [0, 0, 128]);
        assert_eq!(colormap(1.0), [128, 0, 0]);
        assert_eq!(colormap(0.5), [128, 255, 128]);
        assert_eq!(colormap(f64::NAN), colormap(0.0));
    }

    #[test]
    fn one_node_heatmap() {
        let g = IndicatorGrid::new(SamplingGrid::new(0.0, 0.0, 0.0, 0.0, 0.1).unwrap(), vec![1.0]).unwrap();
        let ppm = heatmap_ppm(&g);
        assert_eq!(ppm, b"P6\n1 1\n255\n\x80\x00\x00".to_vec());
        assert_eq!(format_grid_csv(&g).lines().count(), 2);
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1);
    }
}
