//! Far field from near-field samples on a circle via the Kirchhoff–Helmholtz
//! representation and composite Simpson quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{scattered_near_with_derivative, CellGrid, InducedCurrent};
use crate::error::{DsmError, Result};
use crate::green_kernel::{farfield_prefactor, Dim, Direction, Point, WaveContext};
use crate::special_fn::ComplexScalar;

/// Nodes `θ_j = 2πj/50`, `j = 0..=50`; the first and last coincide.
pub const SIMPSON_NODES: usize = 51;
pub const SIMPSON_RADIUS: f64 = 5.0;

/// Scattered field and its outward normal derivative on a circle centered at
/// the origin, sampled at `θ_j = 2πj/(n-1)`, `j = 0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RingSamples {
    radius: f64,
    values: Vec<ComplexScalar>,
    normal_derivatives: Vec<ComplexScalar>,
}

impl RingSamples {
    pub fn new(radius: f64, values: Vec<ComplexScalar>, normal_derivatives: Vec<ComplexScalar>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(DsmError::InvalidArgument("ring radius must be positive".into()));
        }
        if values.len() != normal_derivatives.len() {
            return Err(DsmError::SampleCount {
                expected: values.len(),
                got: normal_derivatives.len(),
            });
        }
        Ok(Self {
            radius,
            values,
            normal_derivatives,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    pub fn normal_derivatives(&self) -> &[ComplexScalar] {
        &self.normal_derivatives
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / (self.len() - 1) as f64
    }
}

/// Composite Simpson weights `(R h/3) [1, 4, 2, …, 2, 4, 1]` for `count`
/// nodes on a closed circle of radius `radius`, `h = 2π/(count-1)`.
pub fn simpson_ring_weights(count: usize, radius: f64) -> Result<Vec<f64>> {
    if count < 3 || count % 2 == 0 {
        return Err(DsmError::InvalidArgument(format!(
            "Simpson's rule needs an odd node count of at least 3, got {count}"
        )));
    }
    let h = 2.0 * PI / (count - 1) as f64;
    let scale = radius * h / 3.0;
    Ok((0..count)
        .map(|j| {
            let c = if j == 0 || j == count - 1 {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * scale
        })
        .collect())
}

/// `∫_Γ f ds` by composite Simpson on node values `f_j`.
pub fn simpson_ring_integral(values: &[ComplexScalar], radius: f64) -> Result<ComplexScalar> {
    let w = simpson_ring_weights(values.len(), radius)?;
    Ok(values.iter().zip(&w).map(|(v, w)| v * *w).sum())
}

/// Quadrature used to integrate the Kirchhoff–Helmholtz integrand around the
/// ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingRule {
    /// Composite Simpson on all nodes, first and last node coincident.
    Simpson,
    /// Periodic trapezoid on all nodes but the last.
    Trapezoid,
}

/// Samples the scattered field of a discretized scatterer at `count` nodes
/// `θ_j = 2πj/(count-1)` on a circle of radius `radius`.
pub fn ring_samples_with(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    radius: f64,
    count: usize,
) -> Result<RingSamples> {
    if count < 2 {
        return Err(DsmError::InvalidArgument("a ring needs at least two nodes".into()));
    }
    let mut values = Vec::with_capacity(count);
    let mut derivs = Vec::with_capacity(count);
    for j in 0..count {
        let theta = 2.0 * PI * j as f64 / (count - 1) as f64;
        let nu = Direction::from_angle(theta);
        let y = Point::new2(radius * theta.cos(), radius * theta.sin());
        let (u, du) = scattered_near_with_derivative(ctx, grid, current, &y, &nu)?;
        values.push(u);
        derivs.push(du);
    }
    RingSamples::new(radius, values, derivs)
}

/// Samples on the standard 51-node circle of radius 5.
pub fn ring_samples(ctx: &WaveContext, grid: &CellGrid, current: &InducedCurrent) -> Result<RingSamples> {
    ring_samples_with(ctx, grid, current, SIMPSON_RADIUS, SIMPSON_NODES)
}

/// Node values of `u^s ∂_ν e^{-ik x̂·y} - ∂_ν u^s e^{-ik x̂·y}`.
fn kirchhoff_integrand(ctx: &WaveContext, ring: &RingSamples, xhat: &Direction) -> Result<Vec<ComplexScalar>> {
    if ctx.dim() != Dim::Two || xhat.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: xhat.dim().count(),
        });
    }
    let k = ctx.k();
    let r = ring.radius();
    Ok((0..ring.len())
        .map(|j| {
            let theta = ring.angle(j);
            let nu = Direction::from_angle(theta);
            let y = Point::new2(r * theta.cos(), r * theta.sin());
            let phase = Complex64::from_polar(1.0, -k * y.dot(xhat));
            let dphase = Complex64::new(0.0, -k * xhat.dot(&nu)) * phase;
            ring.values[j] * dphase - ring.normal_derivatives[j] * phase
        })
        .collect())
}

/// `u∞(x̂) = γ ∫_Γ [u^s ∂_ν e^{-ik x̂·y} - ∂_ν u^s e^{-ik x̂·y}] ds(y)` with
/// `γ = e^{iπ/4}/√(8πk)`, integrated by `rule` over any number of ring nodes
/// the rule accepts.
pub fn near_to_far(ctx: &WaveContext, ring: &RingSamples, xhat: &Direction, rule: RingRule) -> Result<ComplexScalar> {
    let f = kirchhoff_integrand(ctx, ring, xhat)?;
    let integral = match rule {
        RingRule::Simpson => simpson_ring_integral(&f, ring.radius())?,
        RingRule::Trapezoid => {
            if f.len() < 2 {
                return Err(DsmError::InvalidArgument("trapezoid needs at least two nodes".into()));
            }
            let m = f.len() - 1;
            f[..m].iter().sum::<ComplexScalar>() * (2.0 * PI * ring.radius() / m as f64)
        }
    };
    Ok(farfield_prefactor(ctx) * integral)
}

/// The fixed 51-node Simpson transform on the radius-5 circle.
pub fn near_to_far_simpson(ctx: &WaveContext, ring: &RingSamples, xhat: &Direction) -> Result<ComplexScalar> {
    if ring.len() != SIMPSON_NODES {
        return Err(DsmError::SampleCount {
            expected: SIMPSON_NODES,
            got: ring.len(),
        });
    }
    near_to_far(ctx, ring, xhat, RingRule::Simpson)
}
