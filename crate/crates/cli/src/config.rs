//! Run configuration: a flat `key = value` text file.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `scenario` | preset id (`ex1` … `ex7-both`) | none |
//! | `shape` | explicit shape, repeatable (see below) | none |
//! | `k` | wave number | `2π` |
//! | `incidents` | incident angles in degrees, comma separated | preset's |
//! | `grid.min`, `grid.max` | sampling square bounds | `∓2λ` |
//! | `grid.h` | sampling pitch | `0.01λ` |
//! | `near.radius`, `near.count` | measurement circle | `4λ`, `50` |
//! | `far.count` | far-field directions | `50` |
//! | `noise.epsilon` | noise levels, comma separated | `0` |
//! | `noise.seed` | base seed | `0` |
//! | `data` | `near`, `far` or `both` | `both` |
//! | `cutoff` | superlevel cutoff for reports | `0.75` |
//! | `forward.h` | fixed forward pitch (disables refinement) | adaptive |
//! | `forward.tolerance` | refinement tolerance | `1e-3` |
//! | `forward.max_cells` | refinement cell cap | `2000` |
//!
//! A shape line is `kind x y params... [eta=re,im | n2=re,im]` with kinds
//! `square side`, `ring outer inner`, `bar length thickness angle_deg` and
//! `disk radius`. The material defaults to `eta=1,0`.
//!
//! Lengths are absolute; the presets are laid out for `λ = 1`.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::path::Path;

use dsm::forward_model::{Material, RefinementPolicy, ShapeSpec};
use dsm::indicator::SamplingGrid;
use dsm::pipeline::SynthesisParams;
use dsm::scenarios;
use dsm::{Dim, Direction, Point, WaveContext};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

/// Which measurement geometries to produce or image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataSelection {
    Near,
    Far,
    Both,
}

impl DataSelection {
    pub fn near(self) -> bool {
        self != DataSelection::Far
    }

    pub fn far(self) -> bool {
        self != DataSelection::Near
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub scenario: Option<String>,
    pub shapes: Vec<ShapeSpec>,
    pub k: f64,
    pub incidents_deg: Option<Vec<f64>>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_h: Option<f64>,
    pub near_radius: Option<f64>,
    pub near_count: usize,
    pub far_count: usize,
    pub epsilons: Vec<f64>,
    pub seed: u64,
    pub data: DataSelection,
    pub cutoff: f64,
    pub forward_h: Option<f64>,
    pub forward_tolerance: Option<f64>,
    pub forward_max_cells: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            scenario: None,
            shapes: Vec::new(),
            k: 2.0 * PI,
            incidents_deg: None,
            grid_min: None,
            grid_max: None,
            grid_h: None,
            near_radius: None,
            near_count: 50,
            far_count: 50,
            epsilons: vec![0.0],
            seed: 0,
            data: DataSelection::Both,
            cutoff: 0.75,
            forward_h: None,
            forward_tolerance: None,
            forward_max_cells: None,
        }
    }
}

fn bad(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Config(format!("line {line}: {}", msg.into()))
}

fn num(line: usize, s: &str) -> CliResult<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| bad(line, format!("`{s}` is not a number")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(line, format!("`{s}` is not finite")))
    }
}

fn count(line: usize, s: &str) -> CliResult<usize> {
    s.trim()
        .parse()
        .map_err(|_| bad(line, format!("`{s}` is not a non-negative integer")))
}

fn list(line: usize, s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(|t| num(line, t)).collect()
}

fn complex(line: usize, s: &str) -> CliResult<Complex64> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(line, re)?, num(line, im)?)),
        None => Ok(Complex64::new(num(line, s)?, 0.0)),
    }
}

fn shape(line: usize, value: &str) -> CliResult<ShapeSpec> {
    let mut tokens: Vec<&str> = value.split_whitespace().collect();
    let mut material = Material::Eta(Complex64::new(1.0, 0.0));
    if let Some(last) = tokens.last() {
        if let Some(v) = last.strip_prefix("eta=") {
            material = Material::Eta(complex(line, v)?);
            tokens.pop();
        } else if let Some(v) = last.strip_prefix("n2=") {
            material = Material::IndexSquared(complex(line, v)?);
            tokens.pop();
        }
    }
    let (kind, rest) = tokens.split_first().ok_or_else(|| bad(line, "empty shape"))?;
    let p = rest.iter().map(|t| num(line, t)).collect::<CliResult<Vec<f64>>>()?;
    let need = match *kind {
        "square" | "disk" => 3,
        "ring" => 4,
        "bar" => 5,
        other => return Err(bad(line, format!("unknown shape kind `{other}`"))),
    };
    if p.len() != need {
        return Err(bad(
            line,
            format!("shape `{kind}` takes {need} numbers, got {}", p.len()),
        ));
    }
    let c = Point::new2(p[0], p[1]);
    let s = match *kind {
        "square" => ShapeSpec::square(c, p[2], material),
        "disk" => ShapeSpec::disk(c, p[2], material),
        "ring" => ShapeSpec::ring_square(c, p[2], p[3], material),
        _ => ShapeSpec::bar(c, p[2], p[3], p[4].to_radians(), material),
    };
    s.map_err(|e| bad(line, e.to_string()))
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Config::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| bad(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key != "shape" && !seen.insert(key.to_string()) {
                return Err(bad(line, format!("duplicate key `{key}`")));
            }
            match key {
                "scenario" => cfg.scenario = Some(value.to_string()),
                "shape" => cfg.shapes.push(shape(line, value)?),
                "k" => cfg.k = num(line, value)?,
                "incidents" => cfg.incidents_deg = Some(list(line, value)?),
                "grid.min" => cfg.grid_min = Some(num(line, value)?),
                "grid.max" => cfg.grid_max = Some(num(line, value)?),
                "grid.h" => cfg.grid_h = Some(num(line, value)?),
                "near.radius" => cfg.near_radius = Some(num(line, value)?),
                "near.count" => cfg.near_count = count(line, value)?,
                "far.count" => cfg.far_count = count(line, value)?,
                "noise.epsilon" => cfg.epsilons = list(line, value)?,
                "noise.seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| bad(line, format!("`{value}` is not a seed")))?
                }
                "data" => {
                    cfg.data = match value {
                        "near" => DataSelection::Near,
                        "far" => DataSelection::Far,
                        "both" => DataSelection::Both,
                        _ => return Err(bad(line, "data must be near, far or both")),
                    }
                }
                "cutoff" => cfg.cutoff = num(line, value)?,
                "forward.h" => cfg.forward_h = Some(num(line, value)?),
                "forward.tolerance" => cfg.forward_tolerance = Some(num(line, value)?),
                "forward.max_cells" => cfg.forward_max_cells = Some(count(line, value)?),
                other => return Err(bad(line, format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    fn validate(&self) -> CliResult<()> {
        if !(self.k > 0.0) {
            return Err(CliError::Config("k must be positive".into()));
        }
        if !(self.cutoff > 0.0 && self.cutoff <= 1.0) {
            return Err(CliError::Config("cutoff must lie in (0, 1]".into()));
        }
        if self.epsilons.iter().any(|e| *e < 0.0) {
            return Err(CliError::Config("noise levels must be non-negative".into()));
        }
        if let Some(id) = &self.scenario {
            scenarios::build(id).map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn context(&self) -> CliResult<WaveContext> {
        WaveContext::new(self.k, Dim::Two).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Shapes and incidents from the preset and/or the explicit entries.
    pub fn problem(&self) -> CliResult<(Vec<ShapeSpec>, Vec<Direction>)> {
        let preset = match &self.scenario {
            Some(id) => Some(scenarios::build(id).map_err(|e| CliError::Config(e.to_string()))?),
            None => None,
        };
        let mut shapes = preset.as_ref().map(|s| s.shapes.clone()).unwrap_or_default();
        shapes.extend(self.shapes.iter().cloned());
        if shapes.is_empty() {
            return Err(CliError::Config("no scenario or shape given".into()));
        }
        let incidents = match (&self.incidents_deg, &preset) {
            (Some(deg), _) => deg.iter().map(|a| Direction::from_angle(a.to_radians())).collect(),
            (None, Some(p)) => p.incidents.clone(),
            (None, None) => vec![scenarios::d1()],
        };
        if incidents.is_empty() {
            return Err(CliError::Config("at least one incident direction is required".into()));
        }
        Ok((shapes, incidents))
    }

    pub fn grid(&self, ctx: &WaveContext) -> CliResult<SamplingGrid> {
        let l = ctx.lambda();
        let lo = self.grid_min.unwrap_or(-2.0 * l);
        let hi = self.grid_max.unwrap_or(2.0 * l);
        let h = self.grid_h.unwrap_or(0.01 * l);
        SamplingGrid::new(lo, hi, lo, hi, h).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn synthesis(&self, ctx: &WaveContext) -> SynthesisParams {
        let mut p = SynthesisParams::standard(ctx);
        if let Some(h) = self.forward_h {
            p.policy = RefinementPolicy::fixed(h);
        }
        if let Some(t) = self.forward_tolerance {
            p.policy.tolerance = t;
        }
        if let Some(m) = self.forward_max_cells {
            p.policy.max_cells = m;
        }
        if let Some(r) = self.near_radius {
            p.near_radius = r;
        }
        p.near_count = self.near_count;
        p.far_count = self.far_count;
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsm::forward_model::ShapeKind;

    #[test]
    fn parses_documented_keys() {
        let c = Config::parse(
            "# demo\nscenario = ex2\nk = 6.283185307179586\nincidents = 45, -45\n\
             grid.min = -1\ngrid.max = 1\ngrid.h = 0.05\nnear.radius = 3\nnear.count = 40\n\
             far.count = 30\nnoise.epsilon = 0, 0.2 # two levels\nnoise.seed = 7\ndata = far\n\
             cutoff = 0.7\nforward.h = 0.02\n",
        )
        .unwrap();
        assert_eq!(c.scenario.as_deref(), Some("ex2"));
        assert_eq!(c.incidents_deg, Some(vec![45.0, -45.0]));
        assert_eq!(c.epsilons, vec![0.0, 0.2]);
        assert_eq!(c.seed, 7);
        assert_eq!(c.data, DataSelection::Far);
        let ctx = c.context().unwrap();
        let g = c.grid(&ctx).unwrap();
        assert_eq!((g.nx(), g.ny()), (41, 41));
        let p = c.synthesis(&ctx);
        assert_eq!(p.policy.initial_h, 0.02);
        assert_eq!((p.near_radius, p.near_count, p.far_count), (3.0, 40, 30));
        let (shapes, incidents) = c.problem().unwrap();
        assert_eq!(shapes.len(), 2);
        assert_eq!(incidents.len(), 2);
    }

    #[test]
    fn explicit_shapes() {
        let c = Config::parse("shape = square 0 0 0.3 n2=1,50\nshape = bar 0.1 0 1 0.1 90\n").unwrap();
        let (shapes, incidents) = c.problem().unwrap();
        assert_eq!(shapes[0].material, Material::IndexSquared(Complex64::new(1.0, 50.0)));
        assert!(matches!(shapes[1].kind, ShapeKind::Bar { length, .. } if length == 1.0));
        assert_eq!(incidents, vec![scenarios::d1()]);
    }

    #[test]
    fn defaults_follow_the_wavelength() {
        let c = Config::parse("scenario = ex1").unwrap();
        let ctx = c.context().unwrap();
        let g = c.grid(&ctx).unwrap();
        assert_eq!(g.len(), 401 * 401);
        assert_eq!(c.synthesis(&ctx).near_radius, 4.0);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "scenario = ex9",
            "k = -1",
            "bogus = 1",
            "k = 1\nk = 2",
            "noise.epsilon = 0.1, x",
            "shape = triangle 0 0 1",
            "shape = square 0 0",
            "just text",
            "cutoff = 0",
            "data = all",
        ] {
            assert!(matches!(Config::parse(text), Err(CliError::Config(_))), "{text}");
        }
        assert!(matches!(Config::parse("").unwrap().problem(), Err(CliError::Config(_))));
    }
}
