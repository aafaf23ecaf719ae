//! Synthetic scattering data.
//!
//! Scatterers are discretized on an origin-anchored square lattice and the
//! volume integral equation `u = u_inc + ∫ G η u` is solved by collocation
//! at the cell centers. The scattered field then follows from the induced
//! current `I = η u` by the rectangle rule, both in the near field and in the
//! far field. Impenetrable obstacles are represented as strongly absorbing
//! media.

mod disk;
mod near_to_far;
mod refine;
mod shapes;
mod solver;

pub use disk::{disk_series_coefficients, disk_series_farfield, disk_series_tail};
pub use near_to_far::{
    near_to_far, near_to_far_simpson, ring_samples, ring_samples_with, simpson_ring_integral, simpson_ring_weights,
    RingRule, RingSamples, SIMPSON_NODES, SIMPSON_RADIUS,
};
pub use refine::{solve_with_refinement, ForwardSolution, RefinementPolicy};
pub use shapes::{Material, ShapeKind, ShapeSpec};
pub use solver::{self_cell_integral, solve_lippmann_schwinger, LippmannSchwinger, MAX_DENSE_CELLS};

use num_complex::Complex64;

use crate::error::{DsmError, Result};
use crate::green_kernel::{farfield_prefactor, green_2d, Dim, Direction, Point, WaveContext};
use crate::measurement::FieldSamples;
use crate::special_fn::{hankel1_01, ComplexScalar};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub center: Point,
    pub area: f64,
    pub eta: ComplexScalar,
}

/// Collocation cells of a discretized scatterer.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGrid {
    cells: Vec<Cell>,
    h: f64,
}

impl CellGrid {
    /// Builds a grid from explicit cells of width `h`.
    pub fn from_cells(cells: Vec<Cell>, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(DsmError::InvalidArgument("cell width must be positive".into()));
        }
        if cells.iter().any(|c| c.center.dim() != Dim::Two) {
            return Err(DsmError::DimensionMismatch { expected: 2, got: 3 });
        }
        Ok(Self { cells, h })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Induced current `I_j = η_j u(y_j)` together with the total field.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedCurrent {
    values: Vec<ComplexScalar>,
    total: Vec<ComplexScalar>,
}

impl InducedCurrent {
    pub fn new(values: Vec<ComplexScalar>, total: Vec<ComplexScalar>) -> Self {
        Self { values, total }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); n],
            total: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn values(&self) -> &[ComplexScalar] {
        &self.values
    }

    /// Total field `u` at the cell centers.
    pub fn total_field(&self) -> &[ComplexScalar] {
        &self.total
    }
}

/// `exp(i k x·d)`.
pub fn incident_plane_wave(ctx: &WaveContext, d: &Direction, x: &Point) -> ComplexScalar {
    Complex64::from_polar(1.0, ctx.k() * x.dot(d))
}

/// Sub-samples per cell side used to measure how much of a cell a shape
/// covers.
const COVERAGE_SAMPLES: usize = 8;

/// Cells of an origin-anchored lattice of pitch `h` that overlap a shape with
/// nonzero contrast. Each cell's area is the covered fraction of `h²`,
/// measured on a `COVERAGE_SAMPLES²` sub-grid, and its contrast is the
/// average over the covered part. Where shapes overlap, the smallest
/// containing shape wins; ties go to the later shape in the list.
pub fn discretize(ctx: &WaveContext, shapes: &[ShapeSpec], h: f64) -> Result<CellGrid> {
    if ctx.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: ctx.dim().count(),
        });
    }
    if !(h > 0.0 && h <= ctx.lambda() / 10.0 + 1e-15) {
        return Err(DsmError::InvalidArgument(format!(
            "cell width {h} must lie in (0, λ/10]"
        )));
    }
    if shapes.is_empty() {
        return Err(DsmError::EmptyDiscretization);
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for s in shapes {
        let b = s.bounding_box();
        x0 = x0.min(b.0);
        y0 = y0.min(b.1);
        x1 = x1.max(b.2);
        y1 = y1.max(b.3);
    }
    let (i0, i1) = ((x0 / h).floor() as i64 - 1, (x1 / h).ceil() as i64 + 1);
    let (j0, j1) = ((y0 / h).floor() as i64 - 1, (y1 / h).ceil() as i64 + 1);
    let etas: Vec<ComplexScalar> = shapes.iter().map(|s| s.material.eta(ctx)).collect();
    let n = COVERAGE_SAMPLES;
    let offsets: Vec<f64> = (0..n).map(|a| ((a as f64 + 0.5) / n as f64 - 0.5) * h).collect();
    let mut cells = Vec::new();
    for j in j0..=j1 {
        for i in i0..=i1 {
            let (cx, cy) = (i as f64 * h, j as f64 * h);
            let mut covered = 0usize;
            let mut eta_sum = Complex64::new(0.0, 0.0);
            for oy in &offsets {
                for ox in &offsets {
                    let p = Point::new2(cx + ox, cy + oy);
                    let owner = shapes.iter().enumerate().filter(|(_, s)| s.contains(&p)).fold(
                        None::<(usize, &ShapeSpec)>,
                        |best, (k, s)| match best {
                            Some((_, b)) if b.area() < s.area() => best,
                            _ => Some((k, s)),
                        },
                    );
                    if let Some((k, _)) = owner {
                        if etas[k] != Complex64::new(0.0, 0.0) {
                            covered += 1;
                            eta_sum += etas[k];
                        }
                    }
                }
            }
            if covered > 0 {
                cells.push(Cell {
                    center: Point::new2(cx, cy),
                    area: h * h * covered as f64 / (n * n) as f64,
                    eta: eta_sum / covered as f64,
                });
            }
        }
    }
    if cells.is_empty() {
        return Err(DsmError::EmptyDiscretization);
    }
    Ok(CellGrid { cells, h })
}

fn check_current(grid: &CellGrid, current: &InducedCurrent) -> Result<()> {
    if current.values.len() != grid.len() {
        return Err(DsmError::SampleCount {
            expected: grid.len(),
            got: current.values.len(),
        });
    }
    Ok(())
}

fn check_outside(grid: &CellGrid, x: &Point) -> Result<()> {
    let limit = 0.5 * grid.h;
    if grid.cells.iter().any(|c| c.center.distance(x) <= limit) {
        return Err(DsmError::EvaluationPoint { x: x.x(), y: x.y() });
    }
    Ok(())
}

/// `u^s(x) = Σ_j G(x, y_j) I_j |τ_j|` for `x` away from every cell.
pub fn scattered_near(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    x: &Point,
) -> Result<ComplexScalar> {
    check_current(grid, current)?;
    if x.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: x.dim().count(),
        });
    }
    check_outside(grid, x)?;
    let k = ctx.k();
    Ok(grid
        .cells
        .iter()
        .zip(&current.values)
        .map(|(c, i)| green_2d(k, c.center.distance(x)) * i * c.area)
        .sum())
}

/// Scattered field and its derivative along the unit vector `nu` at `x`.
pub fn scattered_near_with_derivative(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    x: &Point,
    nu: &Direction,
) -> Result<(ComplexScalar, ComplexScalar)> {
    check_current(grid, current)?;
    check_outside(grid, x)?;
    let k = ctx.k();
    let mut u = Complex64::new(0.0, 0.0);
    let mut du = Complex64::new(0.0, 0.0);
    for (c, i) in grid.cells.iter().zip(&current.values) {
        let r = c.center.distance(x);
        let (h0, h1) = hankel1_01(k * r);
        let w = i * c.area;
        u += Complex64::new(0.0, 0.25) * h0 * w;
        // ∇_x G = -(i k / 4) H1(k r) (x - y) / r
        let proj = ((x.x() - c.center.x()) * nu.as_point().x() + (x.y() - c.center.y()) * nu.as_point().y()) / r;
        du += Complex64::new(0.0, -0.25 * k) * h1 * proj * w;
    }
    Ok((u, du))
}

/// `u∞(x̂) ≈ Σ_j G∞(x̂, y_j) I_j |τ_j|`.
pub fn scattered_far(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    xhat: &Direction,
) -> Result<ComplexScalar> {
    check_current(grid, current)?;
    if xhat.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: xhat.dim().count(),
        });
    }
    let k = ctx.k();
    let sum: ComplexScalar = grid
        .cells
        .iter()
        .zip(&current.values)
        .map(|(c, i)| Complex64::from_polar(c.area, -k * c.center.dot(xhat)) * i)
        .sum();
    Ok(farfield_prefactor(ctx) * sum)
}

/// Far-field samples at the given observation directions.
pub fn far_field_samples(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    directions: &[Direction],
    incident: Direction,
) -> Result<FieldSamples> {
    let values = directions
        .iter()
        .map(|d| scattered_far(ctx, grid, current, d))
        .collect::<Result<Vec<_>>>()?;
    FieldSamples::far(directions.to_vec(), values, incident)
}

/// Near-field samples on a circle of radius `radius`.
pub fn near_field_samples(
    ctx: &WaveContext,
    grid: &CellGrid,
    current: &InducedCurrent,
    radius: f64,
    points: &[Point],
    incident: Direction,
) -> Result<FieldSamples> {
    let values = points
        .iter()
        .map(|p| scattered_near(ctx, grid, current, p))
        .collect::<Result<Vec<_>>>()?;
    FieldSamples::near(radius, points.to_vec(), values, incident)
}
