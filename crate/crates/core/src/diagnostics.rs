//! Numerical checks behind the sampling method: the far-field correlation
//! identity, the decay of `Im G`, and point-wise field ratios.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{DsmError, Result};
use crate::forward_model::{
    discretize, disk_series_farfield, scattered_far, solve_lippmann_schwinger, Material, ShapeSpec,
};
use crate::green_kernel::{
    farfield_correlation, green, green_farfield, im_green, lemma_constant, scaled_im_green, Dim, Point, WaveContext,
};
use crate::measurement::{far_angles, FieldSamples, Geometry};
use crate::special_fn::ComplexScalar;

/// Denominators smaller than this make a ratio meaningless.
pub const RATIO_FLOOR: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq)]
pub struct PairError {
    pub xj: Point,
    pub xp: Point,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    pub dim: Dim,
    pub nquad: usize,
    pub pairs: Vec<PairError>,
    pub max_error: f64,
}

fn random_pair(ctx: &WaveContext, rng: &mut ChaCha8Rng, rmax: f64) -> (Point, Point) {
    let r = rmax * rng.random::<f64>();
    match ctx.dim() {
        Dim::Two => {
            let xp = Point::new2(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let t = 2.0 * PI * rng.random::<f64>();
            (Point::new2(xp.x() + r * t.cos(), xp.y() + r * t.sin()), xp)
        }
        Dim::Three => {
            let xp = Point::new3(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            );
            let cos_t: f64 = rng.random_range(-1.0..1.0);
            let phi = 2.0 * PI * rng.random::<f64>();
            let sin_t = (1.0 - cos_t * cos_t).sqrt();
            let v = [sin_t * phi.cos(), sin_t * phi.sin(), cos_t];
            (Point::new3(xp.x() + r * v[0], xp.y() + r * v[1], xp.z() + r * v[2]), xp)
        }
    }
}

/// Compares the quadrature of `∫ G∞(x̂, x_j) conj(G∞(x̂, x_p))` with
/// `C Im G(x_j, x_p)` on `npairs` seeded random pairs at distance at most
/// `rmax`.
pub fn lemma_sweep(ctx: &WaveContext, rmax: f64, npairs: usize, nquad: usize, seed: u64) -> Result<LemmaReport> {
    if npairs == 0 {
        return Err(DsmError::InvalidArgument("at least one pair is required".into()));
    }
    if !(rmax >= 0.0) {
        return Err(DsmError::InvalidArgument("rmax must be non-negative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Point, Point)> = (0..npairs).map(|_| random_pair(ctx, &mut rng, rmax)).collect();
    let c = lemma_constant(ctx);
    let pairs = pairs
        .into_par_iter()
        .map(|(xj, xp)| {
            let corr = farfield_correlation(ctx, &xj, &xp, nquad)?;
            let rhs = c * im_green(ctx, &xj, &xp)?;
            Ok(PairError {
                xj,
                xp,
                error: (corr - Complex64::new(rhs, 0.0)).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_error = pairs.iter().map(|p| p.error).fold(0.0, f64::max);
    Ok(LemmaReport {
        dim: ctx.dim(),
        nquad,
        pairs,
        max_error,
    })
}

/// `(r, C_N Im G)` at `nr` equispaced radii in `[0, rmax]`.
pub fn decay_curve(ctx: &WaveContext, rmax: f64, nr: usize) -> Result<Vec<(f64, f64)>> {
    if nr < 2 || !(rmax > 0.0) {
        return Err(DsmError::InvalidArgument(
            "decay curve needs rmax > 0 and at least two radii".into(),
        ));
    }
    let origin = Point::origin(ctx.dim());
    (0..nr)
        .map(|i| {
            let r = rmax * i as f64 / (nr - 1) as f64;
            let mut c = [0.0; 3];
            c[0] = r;
            let x = Point::from_slice(&c[..ctx.dim().count()])?;
            Ok((r, scaled_im_green(ctx, &x, &origin)?))
        })
        .collect()
}

/// Relative L² distance between `a` and the reference `b`.
pub fn relative_l2(a: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

/// Relative L² error of the volume solver's far field for a penetrable disk
/// at the origin against the partial-wave series, over `nangles` directions
/// and incidence along the x-axis.
pub fn disk_oracle_error(ctx: &WaveContext, radius: f64, n2: f64, h: f64, nangles: usize) -> Result<f64> {
    let disk = ShapeSpec::disk(
        Point::origin(Dim::Two),
        radius,
        Material::IndexSquared(Complex64::new(n2, 0.0)),
    )?;
    let grid = discretize(ctx, &[disk], h)?;
    let d = crate::green_kernel::Direction::from_angle(0.0);
    let cur = solve_lippmann_schwinger(ctx, &grid, &d)?;
    let dirs = far_angles(nangles)?;
    let num = dirs
        .iter()
        .map(|x| scattered_far(ctx, &grid, &cur, x))
        .collect::<Result<Vec<_>>>()?;
    let exact = disk_series_farfield(ctx, radius, n2, &d, &dirs)?;
    Ok(relative_l2(&num, &exact))
}

/// One complex quotient in polar form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioRow {
    pub angle_deg: f64,
    pub modulus: f64,
    pub phase: f64,
    /// The denominator was below [`RATIO_FLOOR`]; modulus and phase are NaN.
    pub flagged: bool,
}

fn ratio_rows(angles: &[f64], num: &[ComplexScalar], den: &[ComplexScalar]) -> Vec<RatioRow> {
    angles
        .iter()
        .zip(num.iter().zip(den))
        .map(|(&a, (n, d))| {
            let angle_deg = a.to_degrees();
            if d.norm() < RATIO_FLOOR {
                RatioRow {
                    angle_deg,
                    modulus: f64::NAN,
                    phase: f64::NAN,
                    flagged: true,
                }
            } else {
                let q = n / d;
                RatioRow {
                    angle_deg,
                    modulus: q.norm(),
                    phase: q.arg(),
                    flagged: false,
                }
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioTables {
    /// `u∞(x̂) / G∞(x̂, x_p)`.
    pub far_over_kernel: Vec<RatioRow>,
    /// `u^s(R x̂) / u∞(x̂)`.
    pub near_over_far: Vec<RatioRow>,
    /// `G(R x̂, x_p) / G∞(x̂, x_p)`.
    pub kernel_near_over_far: Vec<RatioRow>,
}

/// Point-wise ratios for near samples on a circle and far samples at the
/// matching angles.
pub fn ratio_diagnostics(
    ctx: &WaveContext,
    near: &FieldSamples,
    far: &FieldSamples,
    xp: &Point,
) -> Result<RatioTables> {
    let (points, dirs) = match (near.geometry(), far.geometry()) {
        (Geometry::Near { points, .. }, Geometry::Far { directions }) => (points, directions),
        _ => {
            return Err(DsmError::InvalidArgument(
                "expected near-field and far-field samples".into(),
            ))
        }
    };
    if points.len() != dirs.len() {
        return Err(DsmError::SampleCount {
            expected: dirs.len(),
            got: points.len(),
        });
    }
    for (p, d) in points.iter().zip(dirs) {
        let a = p.x().atan2(p.y()) - d.as_point().x().atan2(d.as_point().y());
        if a.sin().abs() > 1e-9 || a.cos() < 0.0 {
            return Err(DsmError::InvalidArgument(
                "near-field points and far-field directions are not at matching angles".into(),
            ));
        }
    }
    let angles: Vec<f64> = dirs.iter().map(|d| d.angle()).collect();
    let g_far = dirs
        .iter()
        .map(|d| green_farfield(ctx, d, xp))
        .collect::<Result<Vec<_>>>()?;
    let g_near = points.iter().map(|p| green(ctx, p, xp)).collect::<Result<Vec<_>>>()?;
    Ok(RatioTables {
        far_over_kernel: ratio_rows(&angles, far.values(), &g_far),
        near_over_far: ratio_rows(&angles, near.values(), far.values()),
        kernel_near_over_far: ratio_rows(&angles, &g_near, &g_far),
    })
}

/// Mean and population standard deviation of the unflagged moduli.
pub fn modulus_stats(rows: &[RatioRow]) -> (f64, f64) {
    let m: Vec<f64> = rows.iter().filter(|r| !r.flagged).map(|r| r.modulus).collect();
    let n = m.len() as f64;
    let mean = m.iter().sum::<f64>() / n;
    let var = m.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
