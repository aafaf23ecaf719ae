//! Partial-wave series for a homogeneous penetrable disk centered at the
//! origin, used as a reference solution.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{DsmError, Result};
use crate::green_kernel::{Dim, Direction, WaveContext};
use crate::special_fn::{bessel_jy_sequences, ComplexScalar};

/// Relative size of the discarded tail below which the series is considered
/// converged.
const TAIL_TOLERANCE: f64 = 1e-12;

/// `(Z_0..=Z_n, Z'_0..=Z'_n)` from `Z_0..=Z_{n+1}` via `Z'_m = Z_{m-1} - (m/x) Z_m`.
fn with_derivatives<T>(z: &[T], x: f64) -> Vec<T>
where
    T: Copy + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Neg<Output = T>,
{
    let n = z.len();
    let mut d = Vec::with_capacity(n);
    d.push(-z[1]);
    for m in 1..n {
        d.push(z[m - 1] - z[m] * (m as f64 / x));
    }
    d
}

/// Extra orders evaluated beyond the truncation to bound the discarded tail.
const TAIL_ORDERS: usize = 15;

fn coefficients_to(ctx: &WaveContext, radius: f64, n2: f64) -> Result<(usize, Vec<ComplexScalar>)> {
    if ctx.dim() != Dim::Two {
        return Err(DsmError::DimensionMismatch {
            expected: 2,
            got: ctx.dim().count(),
        });
    }
    if !(radius > 0.0 && n2 > 0.0 && n2.is_finite()) {
        return Err(DsmError::InvalidArgument(
            "disk series needs a positive radius and a positive real n²".into(),
        ));
    }
    let k = ctx.k();
    let k1 = k * n2.sqrt();
    let (x, x1) = (k * radius, k1 * radius);
    let m_max = x.max(x1).ceil() as usize + 20;
    let top = m_max + TAIL_ORDERS;
    let (j, y) = bessel_jy_sequences(top + 1, x)?;
    let (j1, _) = bessel_jy_sequences(top + 1, x1)?;
    let h: Vec<ComplexScalar> = j.iter().zip(&y).map(|(&a, &b)| Complex64::new(a, b)).collect();
    let dj = with_derivatives(&j, x);
    let dh = with_derivatives(&h, x);
    let dj1 = with_derivatives(&j1, x1);
    let mut out = Vec::with_capacity(top + 1);
    for m in 0..=top {
        let num = k1 * dj1[m] * j[m] - k * j1[m] * dj[m];
        let den = dh[m] * (k * j1[m]) - h[m] * (k1 * dj1[m]);
        let b = num / den;
        // Far beyond k·a the Hankel functions overflow and the coefficient
        // underflows to zero, which is the correct limit.
        let b = if den.re.is_infinite() || den.im.is_infinite() {
            Complex64::new(0.0, 0.0)
        } else {
            b
        };
        if !(b.re.is_finite() && b.im.is_finite()) {
            return Err(DsmError::SeriesDivergence(format!(
                "non-finite coefficient at order {m}"
            )));
        }
        out.push(b);
    }
    Ok((m_max, out))
}

/// Scattering coefficients `b_0..=b_M` for a disk of radius `radius` and real
/// squared index `n2 > 0`, truncated at `M = ceil(max(k, k n) a) + 20`.
pub fn disk_series_coefficients(ctx: &WaveContext, radius: f64, n2: f64) -> Result<Vec<ComplexScalar>> {
    let (m_max, mut b) = coefficients_to(ctx, radius, n2)?;
    let peak = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tail: f64 = b[m_max + 1..].iter().map(|v| 2.0 * v.norm()).sum();
    if tail > TAIL_TOLERANCE * peak.max(1.0) {
        return Err(DsmError::SeriesDivergence(format!(
            "discarded tail {tail:e} relative to {peak:e}"
        )));
    }
    b.truncate(m_max + 1);
    Ok(b)
}

/// Bound on the far-field series terms discarded by the truncation:
/// `2 Σ_{m>M} |b_m|` over the next few orders.
pub fn disk_series_tail(ctx: &WaveContext, radius: f64, n2: f64) -> Result<f64> {
    let (m_max, b) = coefficients_to(ctx, radius, n2)?;
    Ok(b[m_max + 1..].iter().map(|v| 2.0 * v.norm()).sum())
}

/// Far field `u∞(x̂)` of a disk at the origin for incident direction `d`:
/// `√(2/(πk)) e^{-iπ/4} [b_0 + 2 Σ_{m≥1} b_m cos(m φ)]` with `φ` the angle
/// between `x̂` and `d`, at every requested direction.
pub fn disk_series_farfield(
    ctx: &WaveContext,
    radius: f64,
    n2: f64,
    d: &Direction,
    directions: &[Direction],
) -> Result<Vec<ComplexScalar>> {
    let b = disk_series_coefficients(ctx, radius, n2)?;
    let pre = Complex64::from_polar((2.0 / (PI * ctx.k())).sqrt(), -PI / 4.0);
    Ok(directions
        .iter()
        .map(|xhat| {
            let phi = xhat.angle() - d.angle();
            let mut sum = b[0];
            for (m, bm) in b.iter().enumerate().skip(1) {
                sum += bm * (2.0 * (m as f64 * phi).cos());
            }
            pre * sum
        })
        .collect())
}
