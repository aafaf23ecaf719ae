//! Dense collocation solver for the volume integral equation.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use num_complex::Complex64;

use super::{incident_plane_wave, CellGrid, InducedCurrent};
use crate::error::{DsmError, Result};
use crate::green_kernel::{green_2d, Dim, Direction, Point, WaveContext};
use crate::special_fn::{hankel1_01, ComplexScalar};

/// Largest system the dense solver accepts.
pub const MAX_DENSE_CELLS: usize = 5000;

/// Smallest acceptable ratio between the extreme pivots of the factorization.
const PIVOT_RATIO_FLOOR: f64 = 1e-13;

/// `∫_τ G(0, y) dy` over a cell of area `area`, with the cell replaced by the
/// disk of equal area: `(i/4) [(2πR/k) H1(kR) + 4i/k²]`, `R = √(area/π)`.
pub fn self_cell_integral(k: f64, area: f64) -> ComplexScalar {
    let r = (area / PI).sqrt();
    let (_, h1) = hankel1_01(k * r);
    Complex64::new(0.0, 0.25) * (h1 * (2.0 * PI * r / k) + Complex64::new(0.0, 4.0 / (k * k)))
}

/// Factored system `(I - A diag(η)) u = u_inc`, reusable across incident
/// directions.
pub struct LippmannSchwinger {
    ctx: WaveContext,
    centers: Vec<Point>,
    eta: Vec<ComplexScalar>,
    lu: LU<ComplexScalar, Dyn, Dyn>,
    pivot_ratio: f64,
}

/// Integer lattice coordinates of every center, if all lie on the lattice.
fn lattice_indices(grid: &CellGrid) -> Option<Vec<(i64, i64)>> {
    let h = grid.h();
    grid.cells()
        .iter()
        .map(|c| {
            let (fx, fy) = (c.center.x() / h, c.center.y() / h);
            let (ix, iy) = (fx.round(), fy.round());
            ((fx - ix).abs() < 1e-6 && (fy - iy).abs() < 1e-6).then_some((ix as i64, iy as i64))
        })
        .collect()
}

fn assemble(k: f64, grid: &CellGrid) -> DMatrix<ComplexScalar> {
    let cells = grid.cells();
    let n = cells.len();
    let mut m = DMatrix::<ComplexScalar>::identity(n, n);
    // On the lattice the kernel only depends on the squared index offset, so
    // each distinct distance is evaluated once.
    let lattice = lattice_indices(grid);
    let mut cache: HashMap<i64, ComplexScalar> = HashMap::new();
    let h = grid.h();
    for j in 0..n {
        for i in 0..j {
            let g = match &lattice {
                Some(idx) => {
                    let (dx, dy) = (idx[i].0 - idx[j].0, idx[i].1 - idx[j].1);
                    let key = dx * dx + dy * dy;
                    *cache.entry(key).or_insert_with(|| green_2d(k, h * (key as f64).sqrt()))
                }
                None => green_2d(k, cells[i].center.distance(&cells[j].center)),
            };
            m[(i, j)] -= g * cells[j].area * cells[j].eta;
            m[(j, i)] -= g * cells[i].area * cells[i].eta;
        }
        m[(j, j)] -= self_cell_integral(k, cells[j].area) * cells[j].eta;
    }
    m
}

impl LippmannSchwinger {
    pub fn new(ctx: &WaveContext, grid: &CellGrid) -> Result<Self> {
        if ctx.dim() != Dim::Two {
            return Err(DsmError::DimensionMismatch {
                expected: 2,
                got: ctx.dim().count(),
            });
        }
        if grid.is_empty() {
            return Err(DsmError::EmptyDiscretization);
        }
        if grid.len() > MAX_DENSE_CELLS {
            return Err(DsmError::InvalidArgument(format!(
                "{} cells exceed the dense solver limit of {MAX_DENSE_CELLS}",
                grid.len()
            )));
        }
        let lu = assemble(ctx.k(), grid).lu();
        let diag = lu.u().diagonal();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for d in diag.iter() {
            lo = lo.min(d.norm());
            hi = hi.max(d.norm());
        }
        let pivot_ratio = lo / hi;
        if !pivot_ratio.is_finite() || pivot_ratio < PIVOT_RATIO_FLOOR {
            return Err(DsmError::SingularSystem { pivot_ratio });
        }
        Ok(Self {
            ctx: *ctx,
            centers: grid.cells().iter().map(|c| c.center).collect(),
            eta: grid.cells().iter().map(|c| c.eta).collect(),
            lu,
            pivot_ratio,
        })
    }

    /// Smallest over largest pivot modulus of the LU factorization.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    /// Induced current for an arbitrary incident field sampled at the
    /// cell centers.
    pub fn solve_field(&self, incident: &[ComplexScalar]) -> Result<InducedCurrent> {
        if incident.len() != self.centers.len() {
            return Err(DsmError::SampleCount {
                expected: self.centers.len(),
                got: incident.len(),
            });
        }
        let rhs = DVector::from_column_slice(incident);
        let u = self
            .lu
            .solve(&rhs)
            .ok_or(DsmError::SingularSystem { pivot_ratio: 0.0 })?;
        let total: Vec<_> = u.iter().copied().collect();
        let values = total.iter().zip(&self.eta).map(|(u, e)| u * e).collect();
        Ok(InducedCurrent::new(values, total))
    }

    pub fn solve(&self, d: &Direction) -> Result<InducedCurrent> {
        if d.dim() != Dim::Two {
            return Err(DsmError::DimensionMismatch {
                expected: 2,
                got: d.dim().count(),
            });
        }
        let uinc: Vec<_> = self
            .centers
            .iter()
            .map(|x| incident_plane_wave(&self.ctx, d, x))
            .collect();
        self.solve_field(&uinc)
    }
}

/// Induced current for a single incident plane wave.
pub fn solve_lippmann_schwinger(ctx: &WaveContext, grid: &CellGrid, d: &Direction) -> Result<InducedCurrent> {
    LippmannSchwinger::new(ctx, grid)?.solve(d)
}
