//! Direct sampling indicators on a lattice of sampling points.
//!
//! For far-field data the indicator at `x_p` is the normalized correlation
//! `|⟨u∞, G∞(·, x_p)⟩| / (‖u∞‖ ‖G∞(·, x_p)‖)` over the observation
//! directions; for near-field data the measurement circle and `G(·, x_p)`
//! take their place. Discrete inner products carry uniform weights.

use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{DsmError, Result};
use crate::green_kernel::{farfield_prefactor, green, green_2d, Dim, Direction, Point, WaveContext};
use crate::measurement::{FieldSamples, Geometry};
use crate::special_fn::ComplexScalar;

/// Axis-aligned rectangle of sampling points with pitch `h`, stored row by
/// row from the lowest `y`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingGrid {
    xmin: f64,
    ymin: f64,
    h: f64,
    nx: usize,
    ny: usize,
}

impl SamplingGrid {
    /// Lattice `x = xmin + i h`, `y = ymin + j h` inside `[xmin, xmax] × [ymin, ymax]`.
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, h: f64) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax, h].iter().all(|v| v.is_finite());
        if !finite || !(h > 0.0) || xmax < xmin || ymax < ymin {
            return Err(DsmError::InvalidArgument(format!(
                "invalid sampling grid [{xmin}, {xmax}] × [{ymin}, {ymax}] with pitch {h}"
            )));
        }
        // nudge so that exact multiples are not lost to rounding
        let count = |w: f64| (w / h * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
        Ok(Self {
            xmin,
            ymin,
            h,
            nx: count(xmax - xmin),
            ny: count(ymax - ymin),
        })
    }

    /// Square `[-half, half]²`.
    pub fn square(half: f64, h: f64) -> Result<Self> {
        Self::new(-half, half, -half, half, h)
    }

    /// `[-2λ, 2λ]²` with pitch `0.01λ`: 401 × 401 nodes.
    pub fn standard(ctx: &WaveContext) -> Self {
        let l = ctx.lambda();
        Self::square(2.0 * l, 0.01 * l).expect("standard grid is valid")
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, i: usize) -> f64 {
        self.xmin + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.ymin + j as f64 * self.h
    }

    /// Node at row-major index `idx`.
    pub fn node(&self, idx: usize) -> Point {
        Point::new2(self.x(idx % self.nx), self.y(idx / self.nx))
    }

    pub fn nodes(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(|i| self.node(i))
    }

    /// `(xmin, ymin, xmax, ymax)` of the nodes.
    pub fn extent(&self) -> (f64, f64, f64, f64) {
        (self.xmin, self.ymin, self.x(self.nx - 1), self.y(self.ny - 1))
    }
}

/// Indicator values at every node of a sampling grid, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorGrid {
    grid: SamplingGrid,
    values: Vec<f64>,
}

impl IndicatorGrid {
    pub fn new(grid: SamplingGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(DsmError::SampleCount {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SamplingGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row-major index and location of the largest value; ties go to the
    /// lowest index.
    pub fn argmax(&self) -> (usize, Point) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (best, self.grid.node(best))
    }

    /// Divides by the grid maximum so the peak equals one.
    pub fn normalized(mut self) -> Result<Self> {
        let m = self.max();
        if !(m > 0.0 && m.is_finite()) {
            return Err(DsmError::DegenerateData);
        }
        if m != 1.0 {
            for v in &mut self.values {
                *v /= m;
            }
        }
        Ok(self)
    }
}

fn data_norm(data: &FieldSamples) -> Result<f64> {
    if data.is_empty() {
        return Err(DsmError::InvalidArgument("no measurement samples".into()));
    }
    let n = data.values().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if !(n > 0.0) {
        return Err(DsmError::DegenerateData);
    }
    Ok(n)
}

fn check_point(ctx: &WaveContext, xp: &Point) -> Result<()> {
    if xp.dim() != ctx.dim() {
        return Err(DsmError::DimensionMismatch {
            expected: ctx.dim().count(),
            got: xp.dim().count(),
        });
    }
    Ok(())
}

/// Quadrature weight of one observation direction (uniform on the sphere).
fn far_weight(ctx: &WaveContext, count: usize) -> f64 {
    ctx.dim().sphere_measure() / count as f64
}

/// `‖G∞(·, x_p)‖` over the measured directions, evaluated directly.
pub fn far_kernel_norm(ctx: &WaveContext, directions: &[Direction], xp: &Point) -> Result<f64> {
    check_point(ctx, xp)?;
    let w = far_weight(ctx, directions.len());
    let pre = farfield_prefactor(ctx);
    Ok(directions
        .iter()
        .map(|d| (pre * Complex64::from_polar(1.0, -ctx.k() * xp.dot(d))).norm_sqr() * w)
        .sum::<f64>()
        .sqrt())
}

fn far_directions(data: &FieldSamples) -> Result<&[Direction]> {
    match data.geometry() {
        Geometry::Far { directions } => Ok(directions),
        Geometry::Near { .. } => Err(DsmError::InvalidArgument("expected far-field samples".into())),
    }
}

fn near_geometry(data: &FieldSamples) -> Result<(f64, &[Point])> {
    match data.geometry() {
        Geometry::Near { radius, points } => Ok((*radius, points)),
        Geometry::Far { .. } => Err(DsmError::InvalidArgument("expected near-field samples".into())),
    }
}

/// Far-field indicator at one sampling point.
pub fn indicator_far(ctx: &WaveContext, data: &FieldSamples, xp: &Point) -> Result<f64> {
    let dirs = far_directions(data)?;
    let unorm = data_norm(data)?;
    check_point(ctx, xp)?;
    let w = far_weight(ctx, dirs.len());
    let pre = farfield_prefactor(ctx).conj();
    let inner: ComplexScalar = dirs
        .iter()
        .zip(data.values())
        .map(|(d, u)| u * pre * Complex64::from_polar(w, ctx.k() * xp.dot(d)))
        .sum();
    // ‖G∞(·, x_p)‖ does not depend on x_p: |G∞| is constant on the sphere
    let gnorm = pre.norm() * (w * dirs.len() as f64).sqrt();
    // clamp rounding above the Cauchy–Schwarz bound
    Ok((inner.norm() / (unorm * w.sqrt() * gnorm)).min(1.0))
}

fn check_inside(radius: f64, xp: &Point) -> Result<()> {
    if !(xp.norm() < radius) {
        return Err(DsmError::Domain {
            func: "indicator_near",
            value: xp.norm(),
        });
    }
    Ok(())
}

fn kernel(ctx: &WaveContext, x: &Point, y: &Point) -> Result<ComplexScalar> {
    match ctx.dim() {
        Dim::Two => Ok(green_2d(ctx.k(), x.distance(y))),
        Dim::Three => green(ctx, x, y),
    }
}

/// Near-field indicator at a sampling point strictly inside the measurement
/// circle.
pub fn indicator_near(ctx: &WaveContext, data: &FieldSamples, xp: &Point) -> Result<f64> {
    let (radius, points) = near_geometry(data)?;
    let unorm = data_norm(data)?;
    check_point(ctx, xp)?;
    check_inside(radius, xp)?;
    let mut inner = Complex64::new(0.0, 0.0);
    let mut gnorm = 0.0;
    for (p, u) in points.iter().zip(data.values()) {
        let g = kernel(ctx, p, xp)?;
        inner += u * g.conj();
        gnorm += g.norm_sqr();
    }
    // uniform arc-length weights cancel in the quotient
    Ok((inner.norm() / (unorm * gnorm.sqrt())).min(1.0))
}

/// Indicator of either kind at one point.
pub fn indicator(ctx: &WaveContext, data: &FieldSamples, xp: &Point) -> Result<f64> {
    match data.geometry() {
        Geometry::Far { .. } => indicator_far(ctx, data, xp),
        Geometry::Near { .. } => indicator_near(ctx, data, xp),
    }
}

fn check_same_geometry(datasets: &[FieldSamples]) -> Result<()> {
    let first = datasets
        .first()
        .ok_or_else(|| DsmError::InvalidArgument("no datasets".into()))?;
    if datasets.iter().any(|d| d.geometry() != first.geometry()) {
        return Err(DsmError::InvalidArgument(
            "datasets must share one measurement geometry".into(),
        ));
    }
    Ok(())
}

fn far_grids(ctx: &WaveContext, datasets: &[FieldSamples], grid: &SamplingGrid) -> Result<Vec<Vec<f64>>> {
    let dirs = far_directions(&datasets[0])?;
    let k = ctx.k();
    let n = dirs.len();
    // e^{ik x̂·x_p} = e^{ik x̂_1 x} e^{ik x̂_2 y}, tabulated per column and row
    let col: Vec<Vec<ComplexScalar>> = (0..grid.nx())
        .map(|i| {
            dirs.iter()
                .map(|d| Complex64::from_polar(1.0, k * d.as_point().x() * grid.x(i)))
                .collect()
        })
        .collect();
    let row: Vec<Vec<ComplexScalar>> = (0..grid.ny())
        .map(|j| {
            dirs.iter()
                .map(|d| Complex64::from_polar(1.0, k * d.as_point().y() * grid.y(j)))
                .collect()
        })
        .collect();
    // the weights and |G∞| cancel: Φ∞ = |Σ u_j e^{ik x̂_j·x_p}| / (‖u‖₂ √n)
    let scales: Vec<f64> = datasets
        .iter()
        .map(|d| data_norm(d).map(|u| 1.0 / (u * (n as f64).sqrt())))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<Vec<f64>>> = (0..grid.ny())
        .into_par_iter()
        .map(|j| {
            let r = &row[j];
            let mut out = vec![Vec::with_capacity(grid.nx()); datasets.len()];
            let mut phase = vec![Complex64::new(0.0, 0.0); n];
            for c in &col {
                for m in 0..n {
                    phase[m] = c[m] * r[m];
                }
                for (s, data) in datasets.iter().enumerate() {
                    let inner: ComplexScalar = data.values().iter().zip(&phase).map(|(u, p)| u * p).sum();
                    out[s].push((inner.norm() * scales[s]).min(1.0));
                }
            }
            out
        })
        .collect();
    Ok(gather(rows, datasets.len()))
}

fn near_grids(ctx: &WaveContext, datasets: &[FieldSamples], grid: &SamplingGrid) -> Result<Vec<Vec<f64>>> {
    let (radius, points) = near_geometry(&datasets[0])?;
    let (x0, y0, x1, y1) = grid.extent();
    for corner in [(x0, y0), (x0, y1), (x1, y0), (x1, y1)] {
        check_inside(radius, &Point::new2(corner.0, corner.1))?;
    }
    let unorms: Vec<f64> = datasets.iter().map(data_norm).collect::<Result<_>>()?;
    let k = ctx.k();
    let rows: Vec<Vec<Vec<f64>>> = (0..grid.ny())
        .into_par_iter()
        .map(|j| {
            let mut out = vec![Vec::with_capacity(grid.nx()); datasets.len()];
            let mut g = vec![Complex64::new(0.0, 0.0); points.len()];
            for i in 0..grid.nx() {
                let xp = Point::new2(grid.x(i), grid.y(j));
                let mut gnorm = 0.0;
                for (gm, p) in g.iter_mut().zip(points) {
                    *gm = green_2d(k, p.distance(&xp)).conj();
                    gnorm += gm.norm_sqr();
                }
                let gnorm = gnorm.sqrt();
                for (s, data) in datasets.iter().enumerate() {
                    let inner: ComplexScalar = data.values().iter().zip(&g).map(|(u, g)| u * g).sum();
                    out[s].push((inner.norm() / (unorms[s] * gnorm)).min(1.0));
                }
            }
            out
        })
        .collect();
    Ok(gather(rows, datasets.len()))
}

fn gather(rows: Vec<Vec<Vec<f64>>>, count: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new(); count];
    for row in rows {
        for (dst, src) in out.iter_mut().zip(row) {
            dst.extend(src);
        }
    }
    out
}

/// Indicator values before normalization for several datasets that share a
/// measurement geometry; the kernel is evaluated once per node.
pub fn raw_indicator_grids(
    ctx: &WaveContext,
    datasets: &[FieldSamples],
    grid: &SamplingGrid,
) -> Result<Vec<IndicatorGrid>> {
    if ctx.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: ctx.dim().count(),
        });
    }
    if grid.is_empty() {
        return Err(DsmError::InvalidArgument("empty sampling grid".into()));
    }
    check_same_geometry(datasets)?;
    let values = match datasets[0].geometry() {
        Geometry::Far { .. } => far_grids(ctx, datasets, grid)?,
        Geometry::Near { .. } => near_grids(ctx, datasets, grid)?,
    };
    values.into_iter().map(|v| IndicatorGrid::new(*grid, v)).collect()
}

/// Indicator over the grid, scaled so the largest node value is one.
pub fn indicator_grid(ctx: &WaveContext, data: &FieldSamples, grid: &SamplingGrid) -> Result<IndicatorGrid> {
    raw_indicator_grids(ctx, std::slice::from_ref(data), grid)?
        .pop()
        .expect("one dataset in, one grid out")
        .normalized()
}

/// Node-wise maximum of several indicator grids on the same lattice.
pub fn combine_max(grids: &[IndicatorGrid]) -> Result<IndicatorGrid> {
    let first = grids
        .first()
        .ok_or_else(|| DsmError::InvalidArgument("no indicator grids to combine".into()))?;
    if grids.iter().any(|g| g.grid != first.grid) {
        return Err(DsmError::GridMismatch);
    }
    let mut values = first.values.clone();
    for g in &grids[1..] {
        for (v, w) in values.iter_mut().zip(&g.values) {
            *v = v.max(*w);
        }
    }
    Ok(IndicatorGrid {
        grid: first.grid,
        values,
    })
}

/// One incident direction per dataset: normalized grids combined by the
/// node-wise maximum.
pub fn multi_incident_indicator(
    ctx: &WaveContext,
    datasets: &[FieldSamples],
    grid: &SamplingGrid,
) -> Result<IndicatorGrid> {
    let grids = raw_indicator_grids(ctx, datasets, grid)?
        .into_iter()
        .map(IndicatorGrid::normalized)
        .collect::<Result<Vec<_>>>()?;
    combine_max(&grids)
}

/// 4-connected set of nodes at or above a cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    /// Row-major node indices, ascending.
    pub nodes: Vec<usize>,
    pub centroid: Point,
    /// `(xmin, ymin, xmax, ymax)` of the node centers.
    pub bbox: (f64, f64, f64, f64),
    h: f64,
}

impl Component {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Width and height of the region covered by the component's pixels,
    /// one pitch wider than the spread of the node centers.
    pub fn extent(&self) -> (f64, f64) {
        (self.bbox.2 - self.bbox.0 + self.h, self.bbox.3 - self.bbox.1 + self.h)
    }

    /// Long side over short side of [`Component::extent`].
    pub fn aspect_ratio(&self) -> f64 {
        let (w, h) = self.extent();
        w.max(h) / w.min(h)
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.nodes.binary_search(&idx).is_ok()
    }
}

/// Connected components of `{value ≥ cutoff}` under 4-neighbour adjacency,
/// largest first; equal sizes keep row-major discovery order.
pub fn superlevel_components(grid: &IndicatorGrid, cutoff: f64) -> Result<Vec<Component>> {
    if !(cutoff > 0.0 && cutoff <= 1.0) {
        return Err(DsmError::InvalidArgument(format!("cutoff {cutoff} must lie in (0, 1]")));
    }
    let (nx, ny) = (grid.grid.nx, grid.grid.ny);
    let above: Vec<bool> = grid.values.iter().map(|&v| v >= cutoff).collect();
    let mut seen = vec![false; above.len()];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..above.len() {
        if !above[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut nodes = Vec::new();
        while let Some(idx) = queue.pop_front() {
            nodes.push(idx);
            let (i, j) = (idx % nx, idx / nx);
            let mut visit = |n: usize| {
                if above[n] && !seen[n] {
                    seen[n] = true;
                    queue.push_back(n);
                }
            };
            if i > 0 {
                visit(idx - 1);
            }
            if i + 1 < nx {
                visit(idx + 1);
            }
            if j > 0 {
                visit(idx - nx);
            }
            if j + 1 < ny {
                visit(idx + nx);
            }
        }
        nodes.sort_unstable();
        let (mut sx, mut sy) = (0.0, 0.0);
        let mut bbox = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for &n in &nodes {
            let p = grid.grid.node(n);
            sx += p.x();
            sy += p.y();
            bbox = (
                bbox.0.min(p.x()),
                bbox.1.min(p.y()),
                bbox.2.max(p.x()),
                bbox.3.max(p.y()),
            );
        }
        let m = nodes.len() as f64;
        comps.push(Component {
            centroid: Point::new2(sx / m, sy / m),
            nodes,
            bbox,
            h: grid.grid.h,
        });
    }
    comps.sort_by(|a, b| b.len().cmp(&a.len()));
    Ok(comps)
}

/// Distance of every node from `z` paired with its value, for radial
/// profiles.
pub fn radial_profile(grid: &IndicatorGrid, z: &Point) -> Vec<(f64, f64)> {
    grid.grid
        .nodes()
        .zip(&grid.values)
        .map(|(p, &v)| (p.distance(z), v))
        .collect()
}
