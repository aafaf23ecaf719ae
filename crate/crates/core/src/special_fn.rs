//! Real-argument Bessel functions of integer order and the complex helpers
//! built on them.
//!
//! `J_n` comes from Miller's backward recurrence normalized with
//! `1 = J_0 + 2 Σ J_2k`; for small arguments a short power series is used
//! and above [`ASYMPTOTIC_CROSSOVER`] the Hankel asymptotic expansion gives
//! `J_0, J_1, Y_0, Y_1`. Below the crossover `Y_0` and `Y_1` come from the
//! Neumann series over the same backward-recurrence sequence, so a single
//! pass yields all four values. Higher-order `Y_n` use forward recurrence,
//! which is stable for the second-kind functions.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use crate::error::{DsmError, Result};

/// Complex field value. `norm`, `arg` and `conj` come from `num_complex`.
pub type ComplexScalar = Complex64;

/// Highest order accepted by the public scalar evaluators.
pub const MAX_ORDER: u32 = 60;

/// Arguments above this use the Hankel asymptotic expansion. The smallest
/// term of the expansion is roughly `exp(-2x)`, so 25 keeps it below 1e-21.
pub const ASYMPTOTIC_CROSSOVER: f64 = 25.0;

const SMALL_ARG: f64 = 1e-3;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const RESCALE_AT: f64 = 1e250;

fn check_order(order: u32) -> Result<()> {
    if order > MAX_ORDER {
        Err(DsmError::OrderTooLarge { order, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Power series for `J_n(x)`; only used for `|x| < SMALL_ARG`.
fn j_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
    }
    let q = -half * half;
    let mut term = lead;
    let mut sum = lead;
    for k in 1..20 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller_start(top: f64) -> usize {
    let m = (top + 20.0 + 4.0 * top.sqrt()).ceil() as usize;
    m + (m % 2)
}

/// `J_0..=J_m` for `x > 0` by backward recurrence. The returned vector may be
/// longer than `nmax + 1`; the tail is what the Neumann series consumes.
fn miller(nmax: usize, x: f64) -> Vec<f64> {
    let m = miller_start(nmax.max(x.ceil() as usize) as f64);
    let mut f = vec![0.0; m + 2];
    f[m] = 1e-30;
    for j in (1..=m).rev() {
        let next = 2.0 * j as f64 / x * f[j] - f[j + 1];
        f[j - 1] = next;
        if next.abs() > RESCALE_AT {
            for v in &mut f[j - 1..=m] {
                *v /= RESCALE_AT;
            }
        }
    }
    let norm = f[0] + 2.0 * f[2..=m].iter().step_by(2).sum::<f64>();
    f.truncate(m + 1);
    for v in &mut f {
        *v /= norm;
    }
    f
}

/// Sequence `J_0(x)..=J_nmax(x)` for `x >= 0`.
fn j_sequence(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    if x < SMALL_ARG {
        return (0..=nmax).map(|n| j_series(n, x)).collect();
    }
    if x > ASYMPTOTIC_CROSSOVER && nmax as f64 <= x {
        // Forward recurrence is stable while n < x.
        let (j0, j1, _, _) = asymptotic01(x);
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(j0);
        if nmax >= 1 {
            out.push(j1);
        }
        for n in 1..nmax {
            let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
            out.push(next);
        }
        return out;
    }
    let mut f = miller(nmax, x);
    f.truncate(nmax + 1);
    f
}

/// Hankel asymptotic expansion for orders 0 and 1: `(J0, J1, Y0, Y1)`.
fn asymptotic01(x: f64) -> (f64, f64, f64, f64) {
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let amp = (FRAC_2_PI / x).sqrt();
    let chi0 = x - 0.25 * PI;
    let chi1 = x - 0.75 * PI;
    let (s0, c0) = chi0.sin_cos();
    let (s1, c1) = chi1.sin_cos();
    (
        amp * (p0 * c0 - q0 * s0),
        amp * (p1 * c1 - q1 * s1),
        amp * (p0 * s0 + q0 * c0),
        amp * (p1 * s1 + q1 * c1),
    )
}

fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() >= last || term == 0.0 {
            break;
        }
        last = term.abs();
        // a_k / x^k enters P with sign (-1)^{k/2} for even k and Q with
        // (-1)^{(k-1)/2} for odd k.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if last < 1e-18 {
            break;
        }
    }
    (p, q)
}

/// `(J0, J1, Y0, Y1)` for `x > 0`.
pub(crate) fn jy01(x: f64) -> (f64, f64, f64, f64) {
    if x > ASYMPTOTIC_CROSSOVER {
        return asymptotic01(x);
    }
    let js = if x < SMALL_ARG {
        (0..=8).map(|n| j_series(n, x)).collect()
    } else {
        miller(1, x)
    };
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut sign = -1.0;
    let mut k = 1;
    while 2 * k + 1 < js.len() {
        let kf = k as f64;
        s0 += sign * js[2 * k] / kf;
        s1 += sign * (js[2 * k - 1] - js[2 * k + 1]) / kf;
        sign = -sign;
        k += 1;
    }
    let y0 = FRAC_2_PI * (log_term * js[0] - 2.0 * s0);
    let y1 = FRAC_2_PI * (log_term * js[1] - js[0] / x + s1);
    (js[0], js[1], y0, y1)
}

/// Bessel function of the first kind `J_order(x)`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !x.is_finite() {
        return Err(DsmError::Domain {
            func: "bessel_j",
            value: x,
        });
    }
    let n = order as usize;
    let v = if n <= 1 && x.abs() > ASYMPTOTIC_CROSSOVER {
        let (j0, j1, _, _) = asymptotic01(x.abs());
        if n == 0 {
            j0
        } else {
            j1
        }
    } else {
        j_sequence(n, x.abs())[n]
    };
    Ok(if x < 0.0 && n % 2 == 1 { -v } else { v })
}

/// Bessel function of the second kind `Y_order(x)`, `x > 0`.
pub fn bessel_y(order: u32, x: f64) -> Result<f64> {
    check_order(order)?;
    if !(x.is_finite() && x > 0.0) {
        return Err(DsmError::Domain {
            func: "bessel_y",
            value: x,
        });
    }
    Ok(y_sequence(order as usize, x)[order as usize])
}

fn y_sequence(nmax: usize, x: f64) -> Vec<f64> {
    let (_, _, y0, y1) = jy01(x);
    let mut out = Vec::with_capacity(nmax + 2);
    out.push(y0);
    out.push(y1);
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        out.push(next);
    }
    out.truncate(nmax + 1);
    out
}

/// `(J_0..=J_nmax, Y_0..=Y_nmax)` at `x > 0`, used by partial-wave sums.
pub fn bessel_jy_sequences(nmax: usize, x: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(x.is_finite() && x > 0.0) {
        return Err(DsmError::Domain {
            func: "bessel_jy_sequences",
            value: x,
        });
    }
    Ok((j_sequence(nmax, x), y_sequence(nmax, x)))
}

/// `H0^(1)(x) = J0(x) + i Y0(x)`.
pub fn hankel1_0(x: f64) -> Result<ComplexScalar> {
    if !(x.is_finite() && x > 0.0) {
        return Err(DsmError::Domain {
            func: "hankel1_0",
            value: x,
        });
    }
    let (j0, _, y0, _) = jy01(x);
    Ok(Complex64::new(j0, y0))
}

/// `H1^(1)(x) = J1(x) + i Y1(x)`.
pub fn hankel1_1(x: f64) -> Result<ComplexScalar> {
    if !(x.is_finite() && x > 0.0) {
        return Err(DsmError::Domain {
            func: "hankel1_1",
            value: x,
        });
    }
    let (_, j1, _, y1) = jy01(x);
    Ok(Complex64::new(j1, y1))
}

/// Both first-kind Hankel functions of orders 0 and 1 from one evaluation.
pub(crate) fn hankel1_01(x: f64) -> (ComplexScalar, ComplexScalar) {
    let (j0, j1, y0, y1) = jy01(x);
    (Complex64::new(j0, y0), Complex64::new(j1, y1))
}

/// `J0(x)` without argument checks, `x >= 0`.
pub(crate) fn j0(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x > ASYMPTOTIC_CROSSOVER {
        asymptotic01(x).0
    } else if x < SMALL_ARG {
        j_series(0, x)
    } else {
        miller(0, x)[0]
    }
}

/// Spherical Bessel function `j0(x) = sin(x)/x`.
pub fn spherical_j0(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}
