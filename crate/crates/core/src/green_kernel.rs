//! Free-space fundamental solution of the Helmholtz operator, its far-field
//! pattern, and the far-field monopole correlation.
//!
//! The 3D kernel carries an extra `1/k`:
//! `G(x, y) = exp(ik|x-y|) / (4π k |x-y|)`. With that normalization the
//! correlation constant `C` in
//! `∫ G∞(x̂, xj) conj(G∞(x̂, xp)) ds = C · Im G(xp, xj)`
//! is `1/k` in 2D and exactly `1` in 3D.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{DsmError, Result};
use crate::quadrature::{periodic_trapezoid, sphere_product_rule};
use crate::special_fn::{hankel1_0, j0, spherical_j0, ComplexScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn count(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_count(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(DsmError::InvalidArgument(format!(
                "spatial dimension must be 2 or 3, got {other}"
            ))),
        }
    }

    /// Surface measure of the unit sphere `S^{N-1}`.
    pub fn sphere_measure(self) -> f64 {
        match self {
            Dim::Two => 2.0 * PI,
            Dim::Three => 4.0 * PI,
        }
    }

    /// `C_N` such that `C_N · Im G(xp, xj)` is `J0(kr)` (2D) or
    /// `sin(kr)/(kr)` (3D).
    pub fn im_green_scale(self) -> f64 {
        match self {
            Dim::Two => 4.0,
            Dim::Three => 4.0 * PI,
        }
    }
}

/// Wavenumber and spatial dimension of a time-harmonic problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveContext {
    k: f64,
    dim: Dim,
}

impl WaveContext {
    pub fn new(k: f64, dim: Dim) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(DsmError::InvalidArgument(format!(
                "wavenumber must be positive and finite, got {k}"
            )));
        }
        Ok(Self { k, dim })
    }

    /// Unit wavelength, `k = 2π`.
    pub fn unit_wavelength(dim: Dim) -> Self {
        Self { k: 2.0 * PI, dim }
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        2.0 * PI / self.k
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    fn check(&self, d: Dim) -> Result<()> {
        if d == self.dim {
            Ok(())
        } else {
            Err(DsmError::DimensionMismatch {
                expected: self.dim.count(),
                got: d.count(),
            })
        }
    }
}

/// A point in the plane or in space; unused trailing coordinates are zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    coords: [f64; 3],
    dim: Dim,
}

impl Point {
    pub const ORIGIN_2D: Point = Point {
        coords: [0.0; 3],
        dim: Dim::Two,
    };

    pub fn new2(x: f64, y: f64) -> Self {
        Self {
            coords: [x, y, 0.0],
            dim: Dim::Two,
        }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        Self {
            coords: [x, y, z],
            dim: Dim::Three,
        }
    }

    pub fn origin(dim: Dim) -> Self {
        Self { coords: [0.0; 3], dim }
    }

    pub fn from_slice(c: &[f64]) -> Result<Self> {
        match *c {
            [x, y] => Ok(Self::new2(x, y)),
            [x, y, z] => Ok(Self::new3(x, y, z)),
            _ => Err(DsmError::InvalidArgument(format!(
                "a point needs 2 or 3 coordinates, got {}",
                c.len()
            ))),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn z(&self) -> f64 {
        self.coords[2]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim.count()]
    }

    pub fn norm(&self) -> f64 {
        let [a, b, c] = self.coords;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        let dx = self.coords[0] - other.coords[0];
        let dy = self.coords[1] - other.coords[1];
        let dz = self.coords[2] - other.coords[2];
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn translate(&self, t: &Point) -> Point {
        Point {
            coords: [
                self.coords[0] + t.coords[0],
                self.coords[1] + t.coords[1],
                self.coords[2] + t.coords[2],
            ],
            dim: self.dim,
        }
    }

    pub fn dot(&self, d: &Direction) -> f64 {
        let a = self.coords;
        let b = d.0.coords;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }
}

/// A unit vector on `S^{N-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction(Point);

impl Direction {
    /// Planar direction at angle `theta` (radians) from the x axis.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Direction(Point::new2(c, s))
    }

    /// Normalizes `v`; fails on the zero vector.
    pub fn normalize(v: Point) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(DsmError::InvalidArgument(
                "direction must be a nonzero finite vector".into(),
            ));
        }
        let c = v.coords;
        Ok(Direction(Point {
            coords: [c[0] / n, c[1] / n, c[2] / n],
            dim: v.dim,
        }))
    }

    pub fn new2(x: f64, y: f64) -> Result<Self> {
        Self::normalize(Point::new2(x, y))
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::normalize(Point::new3(x, y, z))
    }

    pub fn as_point(&self) -> &Point {
        &self.0
    }

    pub fn dim(&self) -> Dim {
        self.0.dim
    }

    /// Polar angle in `(-π, π]` (planar directions).
    pub fn angle(&self) -> f64 {
        self.0.y().atan2(self.0.x())
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.dot(other)
    }
}

/// Prefactor of `G∞`: `e^{iπ/4}/√(8kπ)` in 2D, `1/(4π)` in 3D.
pub fn farfield_prefactor(ctx: &WaveContext) -> ComplexScalar {
    match ctx.dim {
        Dim::Two => Complex64::from_polar(1.0 / (8.0 * ctx.k * PI).sqrt(), FRAC_PI_4),
        Dim::Three => Complex64::new(1.0 / (4.0 * PI), 0.0),
    }
}

/// 2D kernel at distance `r > 0` without argument checks.
pub(crate) fn green_2d(k: f64, r: f64) -> ComplexScalar {
    let (j0, _, y0, _) = crate::special_fn::jy01(k * r);
    // (i/4)(J0 + i Y0)
    Complex64::new(-0.25 * y0, 0.25 * j0)
}

/// Fundamental solution `G(x, y)`.
pub fn green(ctx: &WaveContext, x: &Point, y: &Point) -> Result<ComplexScalar> {
    ctx.check(x.dim)?;
    ctx.check(y.dim)?;
    let r = x.distance(y);
    if r == 0.0 {
        return Err(DsmError::Singularity);
    }
    let kr = ctx.k * r;
    Ok(match ctx.dim {
        Dim::Two => Complex64::new(0.0, 0.25) * hankel1_0(kr)?,
        Dim::Three => Complex64::from_polar(1.0 / (4.0 * PI * kr), kr),
    })
}

/// Far-field pattern `G∞(x̂, y)` of the fundamental solution.
pub fn green_farfield(ctx: &WaveContext, xhat: &Direction, y: &Point) -> Result<ComplexScalar> {
    ctx.check(xhat.dim())?;
    ctx.check(y.dim)?;
    let phase = Complex64::from_polar(1.0, -ctx.k * y.dot(xhat));
    Ok(farfield_prefactor(ctx) * phase)
}

/// `C_N · Im G(xp, xj)`: `J0(k r)` in 2D, `sin(kr)/(kr)` in 3D, `1` at
/// coincidence.
pub fn scaled_im_green(ctx: &WaveContext, xp: &Point, xj: &Point) -> Result<f64> {
    ctx.check(xp.dim)?;
    ctx.check(xj.dim)?;
    let kr = ctx.k * xp.distance(xj);
    Ok(match ctx.dim {
        Dim::Two => j0(kr),
        Dim::Three => spherical_j0(kr),
    })
}

/// `Im G(xp, xj)`, finite at coincidence.
pub fn im_green(ctx: &WaveContext, xp: &Point, xj: &Point) -> Result<f64> {
    Ok(scaled_im_green(ctx, xp, xj)? / ctx.dim.im_green_scale())
}

/// `∫_{S^{N-1}} G∞(x̂, xj) conj(G∞(x̂, xp)) ds(x̂)` by quadrature: the
/// `nquad`-point periodic trapezoid on the circle, or an `nquad × nquad`
/// Gauss–Legendre × trapezoid product rule on the sphere.
pub fn farfield_correlation(ctx: &WaveContext, xj: &Point, xp: &Point, nquad: usize) -> Result<ComplexScalar> {
    ctx.check(xj.dim)?;
    ctx.check(xp.dim)?;
    if nquad == 0 {
        return Err(DsmError::InvalidArgument("nquad must be positive".into()));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    match ctx.dim {
        Dim::Two => {
            let (angles, w) = periodic_trapezoid(nquad);
            for theta in angles {
                let xhat = Direction::from_angle(theta);
                acc += green_farfield(ctx, &xhat, xj)? * green_farfield(ctx, &xhat, xp)?.conj();
            }
            acc *= w;
        }
        Dim::Three => {
            for (v, w) in sphere_product_rule(nquad) {
                let xhat = Direction(Point::new3(v[0], v[1], v[2]));
                acc += w * green_farfield(ctx, &xhat, xj)? * green_farfield(ctx, &xhat, xp)?.conj();
            }
        }
    }
    Ok(acc)
}

/// Correlation constant `C` from the coincidence limit: the correlation of a
/// monopole with itself is `|S^{N-1}| · |G∞ prefactor|²`, and
/// `Im G(x, x) = 1/C_N`.
pub fn lemma_constant(ctx: &WaveContext) -> f64 {
    let self_correlation = ctx.dim.sphere_measure() * farfield_prefactor(ctx).norm_sqr();
    let im_green_at_coincidence = 1.0 / ctx.dim.im_green_scale();
    self_correlation / im_green_at_coincidence
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::bessel_j;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const J0_ZERO: f64 = 2.404825557695773;

    fn ctx2() -> WaveContext {
        WaveContext::unit_wavelength(Dim::Two)
    }

    fn ctx3() -> WaveContext {
        WaveContext::unit_wavelength(Dim::Three)
    }

    #[test]
    fn wavelength_relation() {
        for k in [0.3, 2.0 * PI, 17.0] {
            let c = WaveContext::new(k, Dim::Two).unwrap();
            assert!((c.k() * c.lambda() - 2.0 * PI).abs() < 1e-14);
        }
        assert!(WaveContext::new(-1.0, Dim::Two).is_err());
        assert!(Dim::from_count(4).is_err());
    }

    #[test]
    fn direction_is_unit() {
        let d = Direction::new2(3.0, -4.0).unwrap();
        assert!((d.as_point().norm() - 1.0).abs() < 1e-15);
        assert!(Direction::new2(0.0, 0.0).is_err());
    }

    #[test]
    fn green_imaginary_part_2d() {
        let c = ctx2();
        for r in [0.05, 0.3, 1.0, 2.7] {
            let g = green(&c, &Point::new2(r, 0.0), &Point::ORIGIN_2D).unwrap();
            let want = bessel_j(0, 2.0 * PI * r).unwrap() / 4.0;
            assert!((g.im - want).abs() < 1e-15);
        }
    }

    #[test]
    fn green_3d_normalization() {
        let c = ctx3();
        let g = green(&c, &Point::new3(1e-7, 0.0, 0.0), &Point::origin(Dim::Three)).unwrap();
        assert!((g.im - 1.0 / (4.0 * PI)).abs() < 1e-10);
        assert!((1.0 / (4.0 * PI) - 0.0795775).abs() < 1e-7);
    }

    #[test]
    fn green_coincident_points_fail() {
        let p = Point::new2(0.1, 0.2);
        assert_eq!(green(&ctx2(), &p, &p), Err(DsmError::Singularity));
        let q = Point::new3(0.1, 0.2, 0.3);
        assert_eq!(green(&ctx3(), &q, &q), Err(DsmError::Singularity));
    }

    #[test]
    fn green_dimension_mismatch() {
        let err = green(&ctx2(), &Point::new3(1.0, 0.0, 0.0), &Point::ORIGIN_2D);
        assert!(matches!(err, Err(DsmError::DimensionMismatch { .. })));
    }

    #[test]
    fn green_reciprocity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for c in [ctx2(), ctx3()] {
            for _ in 0..1000 {
                let mut p = || {
                    let v: [f64; 3] = [
                        rng.random_range(-3.0..3.0),
                        rng.random_range(-3.0..3.0),
                        rng.random_range(-3.0..3.0),
                    ];
                    match c.dim() {
                        Dim::Two => Point::new2(v[0], v[1]),
                        Dim::Three => Point::new3(v[0], v[1], v[2]),
                    }
                };
                let (x, y) = (p(), p());
                assert_eq!(green(&c, &x, &y).unwrap(), green(&c, &y, &x).unwrap());
            }
        }
    }

    #[test]
    fn farfield_modulus() {
        let c = ctx2();
        let xhat = Direction::from_angle(0.7);
        let g = green_farfield(&c, &xhat, &Point::new2(0.3, -1.2)).unwrap();
        assert!((g.norm() - 1.0 / (4.0 * PI)).abs() < 1e-15);
        let g0 = green_farfield(&c, &xhat, &Point::ORIGIN_2D).unwrap();
        let want = Complex64::from_polar(1.0, FRAC_PI_4) / (8.0 * c.k() * PI).sqrt();
        assert!((g0 - want).norm() < 1e-16);
        let c3 = ctx3();
        let xhat3 = Direction::new3(1.0, 2.0, -0.5).unwrap();
        let g3 = green_farfield(&c3, &xhat3, &Point::new3(0.2, 0.1, 0.9)).unwrap();
        assert!((g3.norm() - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn farfield_matches_near_asymptotics() {
        // G(R x̂, y) sqrt(R) e^{-ikR} -> G∞(x̂, y)
        let c = ctx2();
        let xhat = Direction::from_angle(1.1);
        let y = Point::new2(0.2, -0.4);
        let r = 2000.0;
        let x = Point::new2(r * xhat.as_point().x(), r * xhat.as_point().y());
        let scaled = green(&c, &x, &y).unwrap() * r.sqrt() * Complex64::from_polar(1.0, -c.k() * r);
        let g = green_farfield(&c, &xhat, &y).unwrap();
        assert!((scaled - g).norm() < 1e-3 * g.norm());
    }

    #[test]
    fn scaled_im_green_values() {
        let c = ctx2();
        let p = Point::new2(0.4, 0.4);
        assert_eq!(scaled_im_green(&c, &p, &p).unwrap(), 1.0);
        let q = Point::new2(0.4 + J0_ZERO / (2.0 * PI), 0.4);
        assert!(scaled_im_green(&c, &p, &q).unwrap().abs() < 1e-9);
        let c3 = ctx3();
        let a = Point::new3(0.0, 0.0, 0.0);
        let b = Point::new3(0.0, 0.5, 0.0);
        assert!(scaled_im_green(&c3, &a, &b).unwrap().abs() < 1e-15);
        assert_eq!(scaled_im_green(&c3, &a, &a).unwrap(), 1.0);
    }

    #[test]
    fn scaled_im_green_bounded() {
        let c = ctx2();
        for i in 1..2000 {
            let r = i as f64 * 0.002;
            let v = scaled_im_green(&c, &Point::new2(r, 0.0), &Point::ORIGIN_2D).unwrap();
            assert!(v.abs() < 1.0);
        }
    }

    #[test]
    fn correlation_at_coincidence() {
        let c = ctx2();
        let p = Point::new2(0.3, -0.1);
        let v = farfield_correlation(&c, &p, &p, 256).unwrap();
        assert!((v.re - 1.0 / (8.0 * PI)).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
        let c3 = ctx3();
        let q = Point::new3(0.3, -0.1, 0.4);
        let v3 = farfield_correlation(&c3, &q, &q, 64).unwrap();
        assert!((v3.re - 1.0 / (4.0 * PI)).abs() < 1e-10);
    }

    #[test]
    fn correlation_vanishes_at_j0_zero() {
        let c = ctx2();
        let a = Point::new2(0.0, 0.0);
        let b = Point::new2(0.38274 * 0.6, 0.38274 * 0.8);
        // 0.38274 approximates the zero; use the exact distance for the bound.
        let exact = Point::new2(J0_ZERO / (2.0 * PI), 0.0);
        assert!(farfield_correlation(&c, &a, &exact, 512).unwrap().norm() < 1e-8);
        assert!(farfield_correlation(&c, &a, &b, 512).unwrap().norm() < 1e-5);
    }

    #[test]
    fn lemma_constant_closed_forms() {
        assert!((lemma_constant(&ctx2()) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((lemma_constant(&ctx3()) - 1.0).abs() < 1e-15);
        let c = WaveContext::new(4.0 * PI, Dim::Two).unwrap();
        assert!((lemma_constant(&c) - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn lemma_identity_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (c, nquad) in [(ctx2(), 512usize), (ctx3(), 64)] {
            let cst = lemma_constant(&c);
            for _ in 0..40 {
                let xj = match c.dim() {
                    Dim::Two => Point::new2(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    Dim::Three => Point::new3(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    ),
                };
                let xp = match c.dim() {
                    Dim::Two => Point::new2(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                    Dim::Three => Point::new3(
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                        rng.random_range(-1.0..1.0),
                    ),
                };
                let lhs = farfield_correlation(&c, &xj, &xp, nquad).unwrap();
                let rhs = cst * im_green(&c, &xp, &xj).unwrap();
                assert!((lhs - rhs).norm() < 1e-8);
            }
        }
    }
}
