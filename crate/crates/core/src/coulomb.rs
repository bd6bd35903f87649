//! The log-gas energy landscape on the simplex and its stationary points.
//!
//! Eigenvalues are unit charges on the half-line with pairwise repulsion
//! `−2 ln|λ_i − λ_j|`, a charge `α = M − N` at the origin, and Lagrange
//! multipliers `ξ` (unit trace) and `η` (fixed purity):
//!
//! ```text
//! E(λ) = −2 Σ_{i<j} ln|λ_i − λ_j| − α Σ ln λ_i + ξ (Σ λ_i − 1) + η (Σ λ_i² − π)
//! ```
//!
//! The minimizer here is independent of the polynomial-zero solutions and is
//! used to check them.

use serde::{Deserialize, Serialize};

use crate::linalg::{cholesky, cholesky_solve, Matrix};
use crate::orthopoly::{laguerre_zeros, LaguerreSpec};
use crate::spectrum::{BipartitionDims, Spectrum};
use crate::{Error, Result};

const MAX_ITERATIONS: usize = 500;
const RESIDUAL_TOL: f64 = 1e-10;
const INIT_SPREAD: f64 = 1e-3;

/// Parameters of the energy: dimensions and Lagrange multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    pub dims: BipartitionDims,
    pub xi: f64,
    /// Purity multiplier; zero for the unbiased ensemble.
    pub eta: f64,
    /// Target purity paired with `eta`; ignored when `eta == 0`.
    pub purity: f64,
}

impl EnergyParams {
    pub fn unbiased(dims: BipartitionDims, xi: f64) -> Self {
        Self {
            dims,
            xi,
            eta: 0.0,
            purity: 0.0,
        }
    }

    pub fn constrained(dims: BipartitionDims, xi: f64, eta: f64, purity: f64) -> Self {
        Self {
            dims,
            xi,
            eta,
            purity,
        }
    }

    fn alpha(&self) -> f64 {
        self.dims.alpha() as f64
    }
}

/// Distinct entries, and strictly positive ones when the origin carries charge.
fn is_interior(lambda: &[f64], alpha: f64) -> bool {
    if lambda
        .iter()
        .any(|l| !l.is_finite() || (alpha > 0.0 && *l <= 0.0))
    {
        return false;
    }
    let mut sorted = lambda.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).all(|w| w[1] > w[0])
}

/// The Coulomb part `−2 Σ_{i<j} ln|λ_i − λ_j| − α Σ ln λ_i`, or `+∞` at a
/// coincidence or at a charged origin.
pub fn coulomb_energy(lambda: &[f64], alpha: f64) -> f64 {
    if !is_interior(lambda, alpha) {
        return f64::INFINITY;
    }
    let mut e = 0.0;
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            e -= 2.0 * (lambda[i] - lambda[j]).abs().ln();
        }
        if alpha != 0.0 {
            e -= alpha * lambda[i].ln();
        }
    }
    e
}

/// Total energy including both multiplier terms; `+∞` off the interior.
pub fn energy(lambda: &[f64], params: &EnergyParams) -> f64 {
    let f = coulomb_energy(lambda, params.alpha());
    if !f.is_finite() {
        return f;
    }
    let s: f64 = lambda.iter().sum();
    let mut e = f + params.xi * (s - 1.0);
    if params.eta != 0.0 {
        let p: f64 = lambda.iter().map(|l| l * l).sum();
        e += params.eta * (p - params.purity);
    }
    e
}

fn coulomb_gradient(lambda: &[f64], alpha: f64) -> Vec<f64> {
    let n = lambda.len();
    let mut g = vec![0.0; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = 2.0 / (lambda[i] - lambda[j]);
            g[i] -= w;
            g[j] += w;
        }
        if alpha != 0.0 {
            g[i] -= alpha / lambda[i];
        }
    }
    g
}

/// `∂E/∂λ_i`. Every entry is `+∞` off the interior.
pub fn gradient(lambda: &[f64], params: &EnergyParams) -> Vec<f64> {
    if !is_interior(lambda, params.alpha()) {
        return vec![f64::INFINITY; lambda.len()];
    }
    let mut g = coulomb_gradient(lambda, params.alpha());
    for (gi, li) in g.iter_mut().zip(lambda) {
        *gi += params.xi + 2.0 * params.eta * li;
    }
    g
}

/// Forces `−∂E/∂λ_i`; these vanish at a stationary point.
pub fn forces(lambda: &[f64], params: &EnergyParams) -> Vec<f64> {
    gradient(lambda, params).into_iter().map(|g| -g).collect()
}

fn coulomb_hessian(lambda: &[f64], alpha: f64) -> Matrix {
    let n = lambda.len();
    let mut h = Matrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = lambda[i] - lambda[j];
            let w = 2.0 / (d * d);
            h[(i, j)] = -w;
            h[(j, i)] = -w;
            h[(i, i)] += w;
            h[(j, j)] += w;
        }
        if alpha != 0.0 {
            h[(i, i)] += alpha / (lambda[i] * lambda[i]);
        }
    }
    h
}

/// `∂²E/∂λ_i∂λ_j`: `H_ii = 2Σ_{j≠i}(λ_i−λ_j)^{−2} + α/λ_i² + 2η`,
/// `H_ij = −2(λ_i−λ_j)^{−2}`. Every entry is `+∞` off the interior.
pub fn hessian(lambda: &[f64], params: &EnergyParams) -> Matrix {
    let n = lambda.len();
    if !is_interior(lambda, params.alpha()) {
        let mut h = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                h[(i, j)] = f64::INFINITY;
            }
        }
        return h;
    }
    let mut h = coulomb_hessian(lambda, params.alpha());
    for i in 0..n {
        h[(i, i)] += 2.0 * params.eta;
    }
    h
}

/// `Σ_i λ_i F_i` for the forces `F_i`; on the simplex this equals
/// `N(N−1) + Nα − ξ − 2ηΣλ²` identically.
pub fn virial(lambda: &[f64], params: &EnergyParams) -> f64 {
    forces(lambda, params)
        .iter()
        .zip(lambda)
        .map(|(f, l)| f * l)
        .sum()
}

/// `ξ = N(M − 1)` for the unbiased problem.
pub fn multiplier_xi(dims: BipartitionDims) -> f64 {
    (dims.n() * (dims.m() - 1)) as f64
}

/// `tr ρ^{−1} = N²(M − 1)/(M − N)` at the typical spectrum.
pub fn trace_inverse(dims: BipartitionDims) -> Result<f64> {
    if dims.is_balanced() {
        return Err(Error::Divergent(format!(
            "tr ρ^-1 diverges for a balanced bipartition ({dims}): one eigenvalue sits at 0"
        )));
    }
    let (n, m) = (dims.n(), dims.m());
    Ok((n * n * (m - 1)) as f64 / (m - n) as f64)
}

/// A stationary point of the energy with its multipliers and diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleSolution {
    pub n: usize,
    pub m: usize,
    pub eta: f64,
    pub xi: f64,
    pub spectrum: Spectrum,
    /// Infinity norm of the stationarity equations.
    #[serde(rename = "force_residual")]
    pub max_force_residual: f64,
    /// `|Σλ − 1|`, followed by `|Σλ² − π|` when purity is constrained.
    pub constraint_residuals: Vec<f64>,
    pub hessian_definite: bool,
}

impl SaddleSolution {
    pub fn dims(&self) -> BipartitionDims {
        BipartitionDims::new(self.n, self.m).expect("solutions carry validated dimensions")
    }
}

/// Orthonormal basis of the tangent space `{d : Aᵀd = 0}`, columns of `A`
/// given as rows of `normals`.
fn tangent_basis(normals: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    let push = |mut v: Vec<f64>, q: &mut Vec<Vec<f64>>| {
        for _ in 0..2 {
            for b in q.iter() {
                let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
            true
        } else {
            false
        }
    };
    let mut rank = 0;
    for a in normals {
        if push(a.clone(), &mut q) {
            rank += 1;
        }
    }
    for k in 0..n {
        if q.len() == n {
            break;
        }
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        push(e, &mut q);
    }
    q.split_off(rank)
}

/// Least-squares multipliers and the remaining residual `g + A m`.
fn fit_multipliers(g: &[f64], normals: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let p = normals.len();
    let mut gram = Matrix::zeros(p);
    let mut rhs = vec![0.0; p];
    for a in 0..p {
        for b in 0..p {
            gram[(a, b)] = normals[a].iter().zip(&normals[b]).map(|(x, y)| x * y).sum();
        }
        rhs[a] = -normals[a].iter().zip(g).map(|(x, y)| x * y).sum::<f64>();
    }
    let m = match cholesky(&gram) {
        Some(l) => cholesky_solve(&l, &rhs),
        None => vec![0.0; p],
    };
    let mut r = g.to_vec();
    for (a, ma) in normals.iter().zip(&m) {
        r.iter_mut().zip(a).for_each(|(ri, ai)| *ri += ma * ai);
    }
    (m, r)
}

fn reduced_hessian(h: &Matrix, basis: &[Vec<f64>]) -> Matrix {
    let k = basis.len();
    let hz: Vec<Vec<f64>> = basis.iter().map(|z| h.mul_vec(z)).collect();
    let mut r = Matrix::zeros(k);
    for a in 0..k {
        for b in 0..k {
            r[(a, b)] = basis[a].iter().zip(&hz[b]).map(|(x, y)| x * y).sum();
        }
    }
    r
}

/// Constraint geometry of the problem being minimized.
#[derive(Clone, Copy)]
struct Manifold {
    n: usize,
    purity: Option<f64>,
}

impl Manifold {
    fn normals(&self, lambda: &[f64]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![1.0; self.n]];
        if self.purity.is_some() {
            out.push(lambda.iter().map(|l| 2.0 * l).collect());
        }
        out
    }

    /// Nearest point with unit trace and, if constrained, the target purity.
    fn project(&self, lambda: &mut [f64]) {
        let nf = self.n as f64;
        let shift = (1.0 - lambda.iter().sum::<f64>()) / nf;
        lambda.iter_mut().for_each(|l| *l += shift);
        if let Some(p) = self.purity {
            let c = 1.0 / nf;
            let radius = (p - c).max(0.0).sqrt();
            let norm = lambda.iter().map(|l| (l - c) * (l - c)).sum::<f64>().sqrt();
            if norm > 0.0 {
                lambda
                    .iter_mut()
                    .for_each(|l| *l = c + (*l - c) * radius / norm);
            }
        }
    }

    fn constraint_residuals(&self, lambda: &[f64]) -> Vec<f64> {
        let mut out = vec![(lambda.iter().sum::<f64>() - 1.0).abs()];
        if let Some(p) = self.purity {
            out.push((lambda.iter().map(|l| l * l).sum::<f64>() - p).abs());
        }
        out
    }
}

struct Iterate {
    lambda: Vec<f64>,
    multipliers: Vec<f64>,
    residual: Vec<f64>,
    energy: f64,
}

impl Iterate {
    fn at(lambda: Vec<f64>, alpha: f64, manifold: &Manifold) -> Option<Self> {
        let energy = coulomb_energy(&lambda, alpha);
        if !energy.is_finite() || lambda.iter().any(|l| *l <= 0.0) {
            return None;
        }
        let g = coulomb_gradient(&lambda, alpha);
        let (multipliers, residual) = fit_multipliers(&g, &manifold.normals(&lambda));
        Some(Self {
            lambda,
            multipliers,
            residual,
            energy,
        })
    }

    fn norm(&self) -> f64 {
        self.residual.iter().fold(0.0, |a, r| a.max(r.abs()))
    }
}

struct Minimum {
    lambda: Vec<f64>,
    xi: f64,
    eta: f64,
    residual: f64,
    definite: bool,
}

/// Projected Newton on the constraint manifold with the multipliers
/// eliminated by a least-squares fit at every step.
fn minimize(alpha: f64, manifold: Manifold, start: Vec<f64>) -> Result<Minimum> {
    let n = manifold.n;
    let mut lambda = start;
    manifold.project(&mut lambda);
    lambda.sort_by(f64::total_cmp);
    let mut cur = Iterate::at(lambda, alpha, &manifold).ok_or_else(|| {
        Error::Domain("starting point must have distinct positive eigenvalues".into())
    })?;

    for _ in 0..MAX_ITERATIONS {
        let scale = cur.multipliers[0].abs().max(1.0);
        if cur.norm() <= RESIDUAL_TOL * scale {
            break;
        }
        let normals = manifold.normals(&cur.lambda);
        let basis = tangent_basis(&normals, n);
        let mut h = coulomb_hessian(&cur.lambda, alpha);
        if let Some(&eta) = cur.multipliers.get(1) {
            for i in 0..n {
                h[(i, i)] += 2.0 * eta;
            }
        }
        let mut reduced = reduced_hessian(&h, &basis);
        let k = basis.len();
        let rhs: Vec<f64> = basis
            .iter()
            .map(|z| -z.iter().zip(&cur.residual).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        let diag_scale = (0..k).map(|i| reduced[(i, i)].abs()).fold(1e-300, f64::max);
        let mut shift = 0.0;
        let l = loop {
            if let Some(l) = cholesky(&reduced) {
                break l;
            }
            let next = if shift == 0.0 {
                1e-10 * diag_scale
            } else {
                shift * 10.0
            };
            for i in 0..k {
                reduced[(i, i)] += next - shift;
            }
            shift = next;
        };
        let y = cholesky_solve(&l, &rhs);
        let mut d = vec![0.0; n];
        for (z, yi) in basis.iter().zip(&y) {
            d.iter_mut().zip(z).for_each(|(di, zi)| *di += yi * zi);
        }
        let slope: f64 = d.iter().zip(&cur.residual).map(|(a, b)| a * b).sum();

        let mut t = 1.0;
        let mut next = None;
        while t > 1e-14 {
            let mut cand: Vec<f64> = cur
                .lambda
                .iter()
                .zip(&d)
                .map(|(l, di)| l + t * di)
                .collect();
            manifold.project(&mut cand);
            cand.sort_by(f64::total_cmp);
            if let Some(it) = Iterate::at(cand, alpha, &manifold) {
                let armijo = it.energy <= cur.energy + 1e-4 * t * slope;
                if armijo || it.norm() < cur.norm() {
                    next = Some(it);
                    break;
                }
            }
            t *= 0.5;
        }
        match next {
            Some(it) => cur = it,
            None => break,
        }
    }

    let scale = cur.multipliers[0].abs().max(1.0);
    let residual = cur.norm();
    if residual > RESIDUAL_TOL * scale {
        return Err(Error::Convergence {
            iterations: MAX_ITERATIONS,
            residual,
        });
    }
    let definite = tangent_definite(
        &cur.lambda,
        alpha,
        cur.multipliers.get(1).copied(),
        &manifold,
    );
    Ok(Minimum {
        xi: cur.multipliers[0],
        eta: cur.multipliers.get(1).copied().unwrap_or(0.0),
        lambda: cur.lambda,
        residual,
        definite,
    })
}

fn tangent_definite(lambda: &[f64], alpha: f64, eta: Option<f64>, manifold: &Manifold) -> bool {
    let mut h = coulomb_hessian(lambda, alpha);
    if let Some(eta) = eta {
        for i in 0..lambda.len() {
            h[(i, i)] += 2.0 * eta;
        }
    }
    let basis = tangent_basis(&manifold.normals(lambda), lambda.len());
    basis.is_empty() || cholesky(&reduced_hessian(&h, &basis)).is_some()
}

fn graded_start(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (0..n)
        .map(|i| 1.0 / nf + INIT_SPREAD * ((nf - 1.0) / 2.0 - i as f64) / nf)
        .collect()
}

/// Spectrum from numerically computed values that already lie on the simplex
/// up to rounding.
fn spectrum_from(values: Vec<f64>) -> Result<Spectrum> {
    Spectrum::with_clamp(values, 1e-14)
}

/// Minimizes the energy numerically, optionally on an isopurity manifold.
///
/// Balanced unconstrained problems are reduced to `(N−1, N+1)` with one
/// eigenvalue pinned at 0.
pub fn solve_saddle_numeric(
    dims: BipartitionDims,
    purity_target: Option<f64>,
    init: Option<&Spectrum>,
) -> Result<SaddleSolution> {
    let (n, m) = (dims.n(), dims.m());
    let nf = n as f64;

    if let Some(p) = purity_target {
        let upper = if dims.is_balanced() { 1.25 / nf } else { 1.0 };
        let closed = dims.is_balanced();
        let ok = p.is_finite() && p > 1.0 / nf && if closed { p <= upper } else { p < upper };
        if !ok {
            return Err(Error::Feasibility(format!(
                "purity {p} admits no interior stationary point for {dims}; \
                 need 1/N < π {} {upper}",
                if closed { "≤" } else { "<" }
            )));
        }
    }

    if purity_target.is_none() && dims.is_balanced() {
        if n == 1 {
            return Ok(SaddleSolution {
                n,
                m,
                eta: 0.0,
                xi: 0.0,
                spectrum: Spectrum::pure(1)?,
                max_force_residual: 0.0,
                constraint_residuals: vec![0.0],
                hessian_definite: true,
            });
        }
        let reduced = BipartitionDims::new(n - 1, n + 1)?;
        let init = init.map(|s| s.values()[..n - 1].to_vec());
        let inner = solve_unbiased(reduced, init)?;
        let mut values = inner.lambda;
        values.push(0.0);
        let constraint = (values.iter().sum::<f64>() - 1.0).abs();
        return Ok(SaddleSolution {
            n,
            m,
            eta: 0.0,
            xi: inner.xi,
            spectrum: spectrum_from(values)?,
            max_force_residual: inner.residual,
            constraint_residuals: vec![constraint],
            hessian_definite: inner.definite,
        });
    }

    let alpha = dims.alpha() as f64;
    let manifold = Manifold {
        n,
        purity: purity_target,
    };
    if n == 1 {
        let lambda = vec![1.0];
        let g = coulomb_gradient(&lambda, alpha);
        let (mult, r) = fit_multipliers(&g, &manifold.normals(&lambda));
        return Ok(SaddleSolution {
            n,
            m,
            eta: 0.0,
            xi: mult[0],
            spectrum: Spectrum::pure(1)?,
            max_force_residual: r[0].abs(),
            constraint_residuals: vec![0.0],
            hessian_definite: true,
        });
    }
    let start = match init {
        Some(s) => {
            let mut v = s.values().to_vec();
            v.sort_by(f64::total_cmp);
            v
        }
        None => graded_start(n),
    };
    let min = minimize(alpha, manifold, start)?;
    let constraint_residuals = manifold.constraint_residuals(&min.lambda);
    Ok(SaddleSolution {
        n,
        m,
        eta: min.eta,
        xi: min.xi,
        spectrum: spectrum_from(min.lambda)?,
        max_force_residual: min.residual,
        constraint_residuals,
        hessian_definite: min.definite,
    })
}

fn solve_unbiased(dims: BipartitionDims, init: Option<Vec<f64>>) -> Result<Minimum> {
    let n = dims.n();
    let alpha = dims.alpha() as f64;
    if n == 1 {
        return Ok(Minimum {
            lambda: vec![1.0],
            xi: alpha,
            eta: 0.0,
            residual: 0.0,
            definite: true,
        });
    }
    let start = init.unwrap_or_else(|| graded_start(n));
    minimize(alpha, Manifold { n, purity: None }, start)
}

/// The typical spectrum from the zeros of `L_N^{(M−N−1)}(N(M−1)x)`, with the
/// balanced case reduced to `(N−1, N+1)` plus a zero eigenvalue.
pub fn typical_solution(dims: BipartitionDims) -> Result<SaddleSolution> {
    let (n, m) = (dims.n(), dims.m());
    let xi = multiplier_xi(dims);
    let (active, values) = if dims.is_balanced() {
        if n == 1 {
            (BipartitionDims::new(1, 1)?, vec![1.0])
        } else {
            let reduced = BipartitionDims::new(n - 1, n + 1)?;
            let mut v = laguerre_zeros(&LaguerreSpec::typical(reduced)?)?;
            v.push(0.0);
            (reduced, v)
        }
    } else {
        (dims, laguerre_zeros(&LaguerreSpec::typical(dims)?)?)
    };
    let k = active.n();
    let inner = &values[..k];
    let params = EnergyParams::unbiased(active, multiplier_xi(active));
    let (residual, definite) = if active.alpha() == 0 {
        (0.0, true)
    } else {
        let f = forces(inner, &params);
        let manifold = Manifold { n: k, purity: None };
        (
            f.iter().fold(0.0, |a: f64, x| a.max(x.abs())),
            tangent_definite(inner, active.alpha() as f64, None, &manifold),
        )
    };
    let constraint = (values.iter().sum::<f64>() - 1.0).abs();
    Ok(SaddleSolution {
        n,
        m,
        eta: 0.0,
        xi,
        spectrum: spectrum_from(values)?,
        max_force_residual: residual,
        constraint_residuals: vec![constraint],
        hessian_definite: definite,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(n: usize, m: usize) -> BipartitionDims {
        BipartitionDims::new(n, m).unwrap()
    }

    #[test]
    fn energy_examples() {
        let p = EnergyParams::unbiased(dims(2, 3), 4.0);
        let e = energy(&[0.75, 0.25], &p);
        let want = -2.0 * 0.5f64.ln() - (0.75f64.ln() + 0.25f64.ln());
        assert!((e - want).abs() < 1e-14);
        assert!((e - 3.060270).abs() < 1e-6);

        let b = EnergyParams::unbiased(dims(2, 2), 2.0);
        assert_eq!(energy(&[1.0, 0.0], &b), 0.0);
        assert_eq!(energy(&[0.5, 0.5], &b), f64::INFINITY);
        assert_eq!(energy(&[1.0, 0.0], &p), f64::INFINITY);
    }

    #[test]
    fn balanced_boundary_reduces_to_smaller_problem() {
        let lam = [0.5, 0.3, 0.2];
        let big = coulomb_energy(&[lam[0], lam[1], lam[2], 0.0], 0.0);
        let small = coulomb_energy(&lam, 2.0);
        assert!((big - small).abs() < 1e-13);
    }

    #[test]
    fn gradient_examples() {
        let p = EnergyParams::unbiased(dims(1, 4), 5.0);
        assert!((gradient(&[1.0], &p)[0] - (5.0 - 3.0)).abs() < 1e-15);

        let d = dims(2, 3);
        let z = laguerre_zeros(&LaguerreSpec::typical(d).unwrap()).unwrap();
        let g = gradient(&z, &EnergyParams::unbiased(d, 4.0));
        assert!(g.iter().all(|x| x.abs() <= 1e-10), "{g:?}");

        let delta = 1e-7;
        let g = gradient(&[0.5, 0.5 + delta], &EnergyParams::unbiased(d, 4.0));
        assert!((g[0].abs() * delta - 2.0).abs() < 1e-5);
    }

    #[test]
    fn hessian_is_diagonally_dominant_at_solution() {
        let d = dims(2, 3);
        let z = laguerre_zeros(&LaguerreSpec::typical(d).unwrap()).unwrap();
        let h = hessian(&z, &EnergyParams::unbiased(d, 4.0));
        assert!(h.is_symmetric(0.0));
        let diff = z[0] - z[1];
        assert!((h[(0, 0)] - (2.0 / (diff * diff) + 1.0 / (z[0] * z[0]))).abs() < 1e-10);
        assert!(h[(0, 0)] - h[(0, 1)].abs() > 0.0);
        assert!(h[(1, 1)] - h[(1, 0)].abs() > 0.0);
    }

    #[test]
    fn numeric_solver_small_case() {
        let s = solve_saddle_numeric(dims(2, 3), None, None).unwrap();
        let v = s.spectrum.values();
        assert!((v[0] - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-10);
        assert!((v[1] - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-10);
        assert!((s.xi - 4.0).abs() < 1e-9);
        assert!(s.hessian_definite);
    }

    #[test]
    fn numeric_solver_four_charges() {
        for m in [5, 6, 9, 20] {
            let s = solve_saddle_numeric(dims(4, m), None, None).unwrap();
            let want = 4.0 * (m as f64 - 1.0);
            assert!((s.xi - want).abs() < 1e-8 * want, "M = {m}: {}", s.xi);
        }
    }

    #[test]
    fn balanced_numeric_has_zero_eigenvalue() {
        for n in 1..6 {
            let s = solve_saddle_numeric(dims(n, n), None, None).unwrap();
            assert_eq!(
                *s.spectrum.values().last().unwrap(),
                if n == 1 { 1.0 } else { 0.0 }
            );
            let t = typical_solution(dims(n, n)).unwrap();
            for (a, b) in s.spectrum.values().iter().zip(t.spectrum.values()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_xi(dims(2, 2)), 2.0);
        assert_eq!(multiplier_xi(dims(4, 8)), 28.0);
        assert_eq!(multiplier_xi(dims(1, 7)), 6.0);
    }

    #[test]
    fn trace_inverse_examples() {
        assert_eq!(trace_inverse(dims(1, 2)).unwrap(), 1.0);
        assert_eq!(trace_inverse(dims(2, 3)).unwrap(), 8.0);
        assert_eq!(trace_inverse(dims(2, 4)).unwrap(), 6.0);
        assert!(matches!(
            trace_inverse(dims(3, 3)),
            Err(Error::Divergent(_))
        ));
        let z = laguerre_zeros(&LaguerreSpec::typical(dims(2, 3)).unwrap()).unwrap();
        let s: f64 = z.iter().map(|x| 1.0 / x).sum();
        assert!((s - 8.0).abs() < 1e-10);
    }

    #[test]
    fn constrained_balanced_matches_two_level_formula() {
        let s = solve_saddle_numeric(dims(2, 2), Some(0.625), None).unwrap();
        let v = s.spectrum.values();
        assert!((v[0] - 0.75).abs() < 1e-12 && (v[1] - 0.25).abs() < 1e-12);
        assert!((s.eta - 8.0).abs() < 1e-8);
        assert!((s.xi + 8.0).abs() < 1e-8);
    }

    #[test]
    fn infeasible_purity_is_rejected() {
        for p in [0.5, 0.7, f64::NAN] {
            assert!(matches!(
                solve_saddle_numeric(dims(2, 2), Some(p), None),
                Err(Error::Feasibility(_))
            ));
        }
    }

    #[test]
    fn solution_json_fields() {
        let s = typical_solution(dims(2, 3)).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        for key in [
            "n",
            "m",
            "eta",
            "xi",
            "spectrum",
            "force_residual",
            "constraint_residuals",
            "hessian_definite",
        ] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let back: SaddleSolution = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
    }
}
