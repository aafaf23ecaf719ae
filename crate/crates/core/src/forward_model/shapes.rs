//! Scatterer shapes and their point-membership predicates.

use num_complex::Complex64;

use crate::error::{DsmError, Result};
use crate::green_kernel::{Point, WaveContext};
use crate::special_fn::ComplexScalar;

/// Slack applied to edge tests so lattice points that land on an edge up to
/// rounding are classified the same way on every platform.
const EDGE_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShapeKind {
    /// Axis-aligned square.
    Square {
        side: f64,
    },
    /// Axis-aligned square with a concentric square hole.
    RingSquare {
        outer: f64,
        inner: f64,
    },
    /// Rectangle of the given length and thickness rotated by `angle`
    /// radians about its center; used for cracks.
    Bar {
        length: f64,
        thickness: f64,
        angle: f64,
    },
    Disk {
        radius: f64,
    },
}

/// Contrast of a shape against the background.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Material {
    /// `η = (n² - 1) k²`.
    Eta(ComplexScalar),
    /// Squared refractive index `n²`.
    IndexSquared(ComplexScalar),
}

impl Material {
    pub fn eta(&self, ctx: &WaveContext) -> ComplexScalar {
        match *self {
            Material::Eta(e) => e,
            Material::IndexSquared(n2) => (n2 - 1.0) * ctx.k() * ctx.k(),
        }
    }

    pub fn index_squared(&self, ctx: &WaveContext) -> ComplexScalar {
        match *self {
            Material::Eta(e) => Complex64::new(1.0, 0.0) + e / (ctx.k() * ctx.k()),
            Material::IndexSquared(n2) => n2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub center: Point,
    pub material: Material,
}

fn half_open(v: f64, half: f64) -> bool {
    v >= -half - EDGE_EPS && v < half - EDGE_EPS
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, center: Point, material: Material) -> Result<Self> {
        let ok = match kind {
            ShapeKind::Square { side } => side > 0.0,
            ShapeKind::RingSquare { outer, inner } => inner > 0.0 && inner < outer,
            ShapeKind::Bar { length, thickness, .. } => thickness > 0.0 && thickness < length,
            ShapeKind::Disk { radius } => radius > 0.0,
        };
        if !ok {
            return Err(DsmError::InvalidArgument(format!("invalid shape parameters {kind:?}")));
        }
        if center.dim() != crate::green_kernel::Dim::Two {
            return Err(DsmError::DimensionMismatch {
                expected: 2,
                got: center.dim().count(),
            });
        }
        Ok(Self { kind, center, material })
    }

    pub fn square(center: Point, side: f64, material: Material) -> Result<Self> {
        Self::new(ShapeKind::Square { side }, center, material)
    }

    pub fn ring_square(center: Point, outer: f64, inner: f64, material: Material) -> Result<Self> {
        Self::new(ShapeKind::RingSquare { outer, inner }, center, material)
    }

    pub fn bar(center: Point, length: f64, thickness: f64, angle: f64, material: Material) -> Result<Self> {
        Self::new(
            ShapeKind::Bar {
                length,
                thickness,
                angle,
            },
            center,
            material,
        )
    }

    pub fn disk(center: Point, radius: f64, material: Material) -> Result<Self> {
        Self::new(ShapeKind::Disk { radius }, center, material)
    }

    /// Point membership. Edges are half-open (closed on the low side, open
    /// on the high side) so adjacent lattice cells are never double counted.
    pub fn contains(&self, p: &Point) -> bool {
        let dx = p.x() - self.center.x();
        let dy = p.y() - self.center.y();
        match self.kind {
            ShapeKind::Square { side } => half_open(dx, 0.5 * side) && half_open(dy, 0.5 * side),
            ShapeKind::RingSquare { outer, inner } => {
                let in_outer = half_open(dx, 0.5 * outer) && half_open(dy, 0.5 * outer);
                let in_inner = half_open(dx, 0.5 * inner) && half_open(dy, 0.5 * inner);
                in_outer && !in_inner
            }
            ShapeKind::Bar {
                length,
                thickness,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let u = dx * c + dy * s;
                let v = -dx * s + dy * c;
                half_open(u, 0.5 * length) && half_open(v, 0.5 * thickness)
            }
            ShapeKind::Disk { radius } => dx * dx + dy * dy < radius * radius - EDGE_EPS,
        }
    }

    pub fn area(&self) -> f64 {
        match self.kind {
            ShapeKind::Square { side } => side * side,
            ShapeKind::RingSquare { outer, inner } => outer * outer - inner * inner,
            ShapeKind::Bar { length, thickness, .. } => length * thickness,
            ShapeKind::Disk { radius } => std::f64::consts::PI * radius * radius,
        }
    }

    /// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let (hx, hy) = match self.kind {
            ShapeKind::Square { side } => (0.5 * side, 0.5 * side),
            ShapeKind::RingSquare { outer, .. } => (0.5 * outer, 0.5 * outer),
            ShapeKind::Bar {
                length,
                thickness,
                angle,
            } => {
                let (s, c) = angle.sin_cos();
                let (a, b) = (0.5 * length, 0.5 * thickness);
                (a * c.abs() + b * s.abs(), a * s.abs() + b * c.abs())
            }
            ShapeKind::Disk { radius } => (radius, radius),
        };
        (
            self.center.x() - hx,
            self.center.y() - hy,
            self.center.x() + hx,
            self.center.y() + hy,
        )
    }
}
