//! Measurement geometries, sampled fields, and the relative noise model.
//!
//! Noise generator: for sample index `j` the generator is ChaCha8 seeded
//! with the user seed and switched to stream `(kind << 32) | j`, where
//! `kind` is 0 for near-field and 1 for far-field data. Two uniforms
//! `u1, u2` in `[0, 1)` feed Box–Muller,
//! `g1 = √(-2 ln(1-u1)) cos(2π u2)`, `g2 = √(-2 ln(1-u1)) sin(2π u2)`,
//! and `ζ_j = g1 + i g2`. The draw attached to a slot depends only on
//! `(seed, kind, j)`, so results are reproducible across platforms and
//! independent of how many samples precede it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{DsmError, Result};
use crate::green_kernel::{Dim, Direction, Point, WaveContext};
use crate::special_fn::ComplexScalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    /// Points on a circle of the given radius centered at the origin.
    Near { radius: f64, points: Vec<Point> },
    /// Observation directions on the unit circle.
    Far { directions: Vec<Direction> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleKind {
    Near,
    Far,
}

impl SampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleKind::Near => "near",
            SampleKind::Far => "far",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            SampleKind::Near => 0,
            SampleKind::Far => 1,
        }
    }
}

/// Complex field samples on a measurement geometry for one incident wave.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSamples {
    geometry: Geometry,
    values: Vec<ComplexScalar>,
    incident: Direction,
}

impl FieldSamples {
    pub fn near(radius: f64, points: Vec<Point>, values: Vec<ComplexScalar>, incident: Direction) -> Result<Self> {
        if points.len() != values.len() {
            return Err(DsmError::SampleCount {
                expected: points.len(),
                got: values.len(),
            });
        }
        let tol = 1e-12 * radius.max(1.0);
        if let Some(p) = points.iter().find(|p| (p.norm() - radius).abs() > tol) {
            return Err(DsmError::InvalidArgument(format!(
                "near-field point ({}, {}) is not on the circle of radius {radius}",
                p.x(),
                p.y()
            )));
        }
        Ok(Self {
            geometry: Geometry::Near { radius, points },
            values,
            incident,
        })
    }

    pub fn far(directions: Vec<Direction>, values: Vec<ComplexScalar>, incident: Direction) -> Result<Self> {
        if directions.len() != values.len() {
            return Err(DsmError::SampleCount {
                expected: directions.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            geometry: Geometry::Far { directions },
            values,
            incident,
        })
    }

    pub fn kind(&self) -> SampleKind {
        match self.geometry {
            Geometry::Near { .. } => SampleKind::Near,
            Geometry::Far { .. } => SampleKind::Far,
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    pub fn incident(&self) -> Direction {
        self.incident
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same geometry with replaced values.
    pub fn with_values(&self, values: Vec<ComplexScalar>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(DsmError::SampleCount {
                expected: self.values.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            geometry: self.geometry.clone(),
            values,
            incident: self.incident,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Relative noise level and generator seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    epsilon: f64,
    seed: u64,
}

impl NoiseSpec {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(DsmError::InvalidArgument(format!(
                "noise level must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(Self { epsilon, seed })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `count` points `radius·(cos, sin)(2πj/count)`.
pub fn near_circle_geometry(ctx: &WaveContext, radius: f64, count: usize) -> Result<Vec<Point>> {
    if ctx.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: ctx.dim().count(),
        });
    }
    if !(radius > 0.0) || count == 0 {
        return Err(DsmError::InvalidArgument(
            "near-field circle needs a positive radius and at least one point".into(),
        ));
    }
    Ok((0..count)
        .map(|j| {
            let (s, c) = (2.0 * PI * j as f64 / count as f64).sin_cos();
            Point::new2(radius * c, radius * s)
        })
        .collect())
}

/// `count` unit directions at angles `2πj/count`.
pub fn far_angles(count: usize) -> Result<Vec<Direction>> {
    if count == 0 {
        return Err(DsmError::InvalidArgument(
            "at least one observation direction is required".into(),
        ));
    }
    Ok((0..count)
        .map(|j| Direction::from_angle(2.0 * PI * j as f64 / count as f64))
        .collect())
}

/// Standard complex normal draw `g1 + i g2` for one sample slot.
pub fn noise_draw(seed: u64, kind: SampleKind, index: usize) -> ComplexScalar {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((kind.stream_tag() << 32) | index as u64);
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let (s, c) = (2.0 * PI * u2).sin_cos();
    Complex64::new(r * c, r * s)
}

/// Adds `ε ζ_j max|u|` to every sample; the input is left untouched.
pub fn add_noise(samples: &FieldSamples, spec: &NoiseSpec) -> Result<FieldSamples> {
    if samples.is_empty() {
        return Err(DsmError::InvalidArgument("cannot add noise to empty data".into()));
    }
    if spec.epsilon == 0.0 {
        return Ok(samples.clone());
    }
    let scale = spec.epsilon * samples.max_abs();
    let kind = samples.kind();
    let values = samples
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v + noise_draw(spec.seed, kind, j) * scale)
        .collect();
    samples.with_values(values)
}
