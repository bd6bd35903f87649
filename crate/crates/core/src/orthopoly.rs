//! Associated Laguerre and Hermite polynomials and their zeros.
//!
//! Zeros are the eigenvalues of the symmetric Jacobi matrix of each family's
//! three-term recurrence, followed by one Newton step on the recurrence
//! itself. Polynomial values always come from the forward recurrence; the
//! expanded coefficients are only exposed for Vieta-type identities.

use serde::{Deserialize, Serialize};

use crate::linalg::symmetric_tridiagonal_eigenvalues;
use crate::spectrum::BipartitionDims;
use crate::{Error, Result};

/// Largest natural log representable as a finite, normal `f64`.
const LN_MAX: f64 = 709.782_712_893_384;
const LN_MIN_NORMAL: f64 = -708.396_418_532_264_1;

/// Rescaling threshold for the recurrences; keeps `p_N` and `p_N'` finite at
/// any degree while preserving their ratio.
const RESCALE_AT: f64 = 1e150;

/// `L_N^{(a)}(ξx)` with zeros reported in the variable `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreSpec {
    pub degree: usize,
    pub order: f64,
    pub scale: f64,
}

impl LaguerreSpec {
    pub fn new(degree: usize, order: f64, scale: f64) -> Result<Self> {
        if !(order > -1.0) || !order.is_finite() {
            return Err(Error::InvalidOrder(order));
        }
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!(
                "Laguerre scale must be positive, got {scale}"
            )));
        }
        Ok(Self {
            degree,
            order,
            scale,
        })
    }

    /// The polynomial whose zeros are the most probable spectrum for `M > N`:
    /// degree `N`, order `M − N − 1`, scale `N(M − 1)`.
    pub fn typical(dims: BipartitionDims) -> Result<Self> {
        if dims.is_balanced() {
            return Err(Error::InvalidOrder(-1.0));
        }
        let (n, m) = (dims.n(), dims.m());
        Self::new(n, (m - n) as f64 - 1.0, (n * (m - 1)) as f64)
    }
}

/// `H_N(s·(x − b))` with zeros reported in the variable `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermiteSpec {
    pub degree: usize,
    pub shift: f64,
    pub scale: f64,
}

impl HermiteSpec {
    pub fn new(degree: usize, shift: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::Domain(format!(
                "Hermite map needs finite shift and positive scale, got ({shift}, {scale})"
            )));
        }
        Ok(Self {
            degree,
            shift,
            scale,
        })
    }
}

/// `L_n^{(a)}(t)` by the forward recurrence.
pub fn laguerre(n: usize, a: f64, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + a - t) * cur - (k + a) * prev) / (k + 1.0);
        (prev, cur) = (cur, next);
    }
    cur
}

/// Physicists' Hermite polynomial `H_n(y)` by the forward recurrence.
pub fn hermite(n: usize, y: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = 2.0 * y * cur - 2.0 * k as f64 * prev;
        (prev, cur) = (cur, next);
    }
    cur
}

/// `(L_n^{(a)}(t), d/dt L_n^{(a)}(t))` up to a common positive factor.
fn laguerre_with_derivative(n: usize, a: f64, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for k in 0..n {
        let k = k as f64;
        let c = 2.0 * k + 1.0 + a - t;
        let p2 = (c * p1 - (k + a) * p0) / (k + 1.0);
        let d2 = (c * d1 - p1 - (k + a) * d0) / (k + 1.0);
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
        if p1.abs() > RESCALE_AT || d1.abs() > RESCALE_AT {
            let s = 1.0 / RESCALE_AT;
            (p0, p1, d0, d1) = (p0 * s, p1 * s, d0 * s, d1 * s);
        }
    }
    (p1, d1)
}

/// `(H_n(y), H_n'(y))` up to a common positive factor.
fn hermite_with_derivative(n: usize, y: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (0.0, 1.0);
    let (mut d0, mut d1) = (0.0, 0.0);
    for k in 0..n {
        let k = k as f64;
        let p2 = 2.0 * y * p1 - 2.0 * k * p0;
        let d2 = 2.0 * p1 + 2.0 * y * d1 - 2.0 * k * d0;
        (p0, p1, d0, d1) = (p1, p2, d1, d2);
        if p1.abs() > RESCALE_AT || d1.abs() > RESCALE_AT {
            let s = 1.0 / RESCALE_AT;
            (p0, p1, d0, d1) = (p0 * s, p1 * s, d0 * s, d1 * s);
        }
    }
    (p1, d1)
}

/// Zeros of `L_N^{(a)}(ξx)` in `x`, ascending.
pub fn laguerre_zeros(spec: &LaguerreSpec) -> Result<Vec<f64>> {
    let LaguerreSpec {
        degree: n,
        order: a,
        scale: xi,
    } = *spec;
    if !(a > -1.0) {
        return Err(Error::InvalidOrder(a));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + a)).sqrt()).collect();
    let mut t = symmetric_tridiagonal_eigenvalues(&diag, &off)?;
    for ti in t.iter_mut() {
        let (p, dp) = laguerre_with_derivative(n, a, *ti);
        if dp != 0.0 && dp.is_finite() {
            let step = p / dp;
            // The eigensolver is already close; a step larger than the
            // local spacing would mean a bad derivative, not a better root.
            if step.abs() < 1e-6 * ti.abs().max(1.0) {
                *ti -= step;
            }
        }
    }
    t.sort_by(f64::total_cmp);
    Ok(t.into_iter().map(|ti| ti / xi).collect())
}

/// `|L(ξx)| / |L'(ξx)·ξx|` at each supplied point.
pub fn laguerre_residuals(spec: &LaguerreSpec, zeros: &[f64]) -> Vec<f64> {
    zeros
        .iter()
        .map(|&x| {
            let t = spec.scale * x;
            let (p, dp) = laguerre_with_derivative(spec.degree, spec.order, t);
            (p / (dp * t)).abs()
        })
        .collect()
}

/// Zeros of `H_N(s(x − b))` in `x`, ascending and symmetric about `b`.
pub fn hermite_zeros(spec: &HermiteSpec) -> Vec<f64> {
    let n = spec.degree;
    let z = standard_hermite_zeros(n);
    z.into_iter()
        .map(|zi| spec.shift + zi / spec.scale)
        .collect()
}

/// Zeros of `H_n(y)`, ascending, exactly antisymmetric.
pub fn standard_hermite_zeros(n: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let mut z = symmetric_tridiagonal_eigenvalues(&diag, &off)
        .expect("QL iteration on a Hermite Jacobi matrix converges");
    for zi in z.iter_mut() {
        let (p, dp) = hermite_with_derivative(n, *zi);
        if dp != 0.0 && dp.is_finite() {
            let step = p / dp;
            if step.abs() < 1e-6 * zi.abs().max(1.0) {
                *zi -= step;
            }
        }
    }
    z.sort_by(f64::total_cmp);
    // Impose z_i = −z_{n−1−i}; the middle zero of odd degree is exactly 0.
    for i in 0..n / 2 {
        let r = 0.5 * (z[n - 1 - i] - z[i]);
        z[i] = -r;
        z[n - 1 - i] = r;
    }
    if n % 2 == 1 {
        z[n / 2] = 0.0;
    }
    z
}

/// `|H(s(x−b))| / |H'(s(x−b))·s(x−b)|` at each supplied point (absolute
/// ratio `|H/H'|` at the centre, where the denominator vanishes).
pub fn hermite_residuals(spec: &HermiteSpec, zeros: &[f64]) -> Vec<f64> {
    zeros
        .iter()
        .map(|&x| {
            let y = spec.scale * (x - spec.shift);
            let (p, dp) = hermite_with_derivative(spec.degree, y);
            let denom = if y == 0.0 { dp } else { dp * y };
            (p / denom).abs()
        })
        .collect()
}

/// `ln c_ν` for `ν = 0..=N`, where
/// `L_N^{(a)}(ξx) = Σ c_ν (−x)^ν` and `c_ν = ξ^ν/ν! · C(N + a, N − ν)`.
pub fn laguerre_log_coefficients(spec: &LaguerreSpec) -> Result<Vec<f64>> {
    let LaguerreSpec {
        degree: n,
        order: a,
        scale: xi,
    } = *spec;
    if !(a > -1.0) {
        return Err(Error::InvalidOrder(a));
    }
    let nf = n as f64;
    let ln_c0 = libm::lgamma(nf + a + 1.0) - libm::lgamma(nf + 1.0) - libm::lgamma(a + 1.0);
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = ln_c0;
    out.push(acc);
    for nu in 1..=n {
        let nu = nu as f64;
        // c_ν / c_{ν−1} = ξ (N − ν + 1) / (ν (a + ν))
        acc += (xi * (nf - nu + 1.0) / (nu * (a + nu))).ln();
        out.push(acc);
    }
    Ok(out)
}

/// `c_0, …, c_N` as plain floats. Fails with [`Error::Magnitude`] when any
/// coefficient would overflow or underflow.
pub fn laguerre_coefficients(spec: &LaguerreSpec) -> Result<Vec<f64>> {
    let logs = laguerre_log_coefficients(spec)?;
    if let Some(&bad) = logs
        .iter()
        .find(|&&l| !(LN_MIN_NORMAL..=LN_MAX).contains(&l))
    {
        return Err(Error::Magnitude { log_magnitude: bad });
    }
    Ok(logs.into_iter().map(f64::exp).collect())
}

/// `c_{N−1}/c_N`, which by Vieta equals the sum of the zeros in `x`.
pub fn laguerre_vieta_sum(spec: &LaguerreSpec) -> Result<f64> {
    let logs = laguerre_log_coefficients(spec)?;
    let n = spec.degree;
    if n == 0 {
        return Ok(0.0);
    }
    Ok((logs[n - 1] - logs[n]).exp())
}
