//! Most probable spectra on isopurity manifolds of a balanced bipartition.
//!
//! With `M = N` and a harmonic multiplier `η`, the stationary spectrum is the
//! zero set of `H_N(√η (x − 1/N))`. It is physical only while every zero is
//! positive, which fails below a threshold `η₊(N)`; asymptotically
//! `η₊ ≈ 2N³` and the purity there is `5/(4N)`.

use serde::{Deserialize, Serialize};

use crate::coulomb::{forces, EnergyParams};
use crate::orthopoly::{hermite_zeros, HermiteSpec};
use crate::spectrum::{BipartitionDims, Spectrum};
use crate::{Error, Result};

/// Asymptotic critical inverse temperature.
pub const BETA_PLUS: f64 = 2.0;

const BISECTION_REL_WIDTH: f64 = 1e-10;

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!(
            "isopurity manifolds need N ≥ 2, got N = {n}"
        )));
    }
    Ok(())
}

/// `η = N²(N−1) / (2(Nπ − 1))`.
pub fn eta_from_purity(n: usize, purity: f64) -> Result<f64> {
    check_n(n)?;
    let nf = n as f64;
    if !(purity > 1.0 / nf && purity <= 1.0) {
        return Err(Error::Domain(format!(
            "purity must lie in (1/N, 1] = ({}, 1], got {purity}",
            1.0 / nf
        )));
    }
    Ok(nf * nf * (nf - 1.0) / (2.0 * (nf * purity - 1.0)))
}

/// `π = 1/N + N(N−1)/(2η)`.
pub fn purity_from_eta(n: usize, eta: f64) -> Result<f64> {
    check_n(n)?;
    if !(eta > 0.0) || !eta.is_finite() {
        return Err(Error::Domain(format!(
            "η must be positive and finite, got {eta}"
        )));
    }
    let nf = n as f64;
    Ok(1.0 / nf + nf * (nf - 1.0) / (2.0 * eta))
}

/// A balanced isopurity problem with its multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsopurityProblem {
    pub n: usize,
    pub purity_target: f64,
    pub eta: f64,
    /// `η/N³`.
    pub beta: f64,
    /// `−2η/N`.
    pub xi: f64,
}

impl IsopurityProblem {
    pub fn from_purity(n: usize, purity: f64) -> Result<Self> {
        let eta = eta_from_purity(n, purity)?;
        Ok(Self::assemble(n, purity, eta))
    }

    pub fn from_eta(n: usize, eta: f64) -> Result<Self> {
        let purity = purity_from_eta(n, eta)?;
        Ok(Self::assemble(n, purity, eta))
    }

    pub fn from_beta(n: usize, beta: f64) -> Result<Self> {
        Self::from_eta(n, beta * (n as f64).powi(3))
    }

    fn assemble(n: usize, purity_target: f64, eta: f64) -> Self {
        let nf = n as f64;
        Self {
            n,
            purity_target,
            eta,
            beta: eta / nf.powi(3),
            xi: -2.0 * eta / nf,
        }
    }

    pub fn dims(&self) -> BipartitionDims {
        BipartitionDims::balanced(self.n).expect("N ≥ 2 checked on construction")
    }
}

/// Hermite-zero spectrum of an isopurity problem, physical or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPuritySolution {
    /// Zeros in non-increasing order; the last one may be negative.
    pub eigenvalues: Vec<f64>,
    pub feasible: bool,
    pub min_eigenvalue: f64,
    /// `|Σλ − 1|`.
    pub trace_residual: f64,
    /// `|Σλ² − π_target|`.
    pub purity_residual: f64,
}

impl FixedPuritySolution {
    pub fn spectrum(&self) -> Result<Spectrum> {
        if !self.feasible {
            return Err(Error::Feasibility(format!(
                "smallest zero {} is not positive",
                self.min_eigenvalue
            )));
        }
        Spectrum::new(self.eigenvalues.clone())
    }

    pub fn purity(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l * l).sum()
    }
}

fn zeros(n: usize, eta: f64) -> Result<Vec<f64>> {
    let spec = HermiteSpec::new(n, 1.0 / n as f64, eta.sqrt())?;
    Ok(hermite_zeros(&spec))
}

/// Zeros of `H_N(√η(x − 1/N))`, reported even when some are negative.
pub fn solve_isopurity(problem: &IsopurityProblem) -> Result<FixedPuritySolution> {
    if !(problem.eta > 0.0) {
        return Err(Error::Domain(format!(
            "η must be positive, got {}",
            problem.eta
        )));
    }
    let mut eigenvalues = zeros(problem.n, problem.eta)?;
    let min_eigenvalue = eigenvalues[0];
    eigenvalues.reverse();
    let trace_residual = (eigenvalues.iter().sum::<f64>() - 1.0).abs();
    let purity: f64 = eigenvalues.iter().map(|l| l * l).sum();
    Ok(FixedPuritySolution {
        feasible: min_eigenvalue > 0.0,
        min_eigenvalue,
        trace_residual,
        purity_residual: (purity - problem.purity_target).abs(),
        eigenvalues,
    })
}

/// Asymptotic and exact finite-N feasibility thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalThreshold {
    pub n: usize,
    pub beta_plus: f64,
    pub purity_critical: f64,
    /// Smallest `η` at which every zero is still positive, from bisection.
    pub eta_plus: f64,
    pub beta_plus_exact: f64,
    pub purity_at_eta_plus: f64,
}

fn min_zero(n: usize, eta: f64) -> Result<f64> {
    Ok(zeros(n, eta)?[0])
}

/// Locates `η₊(N)` by bisection on the sign of the smallest zero.
pub fn critical_threshold(n: usize) -> Result<CriticalThreshold> {
    check_n(n)?;
    let nf = n as f64;
    let mut hi = nf * nf / 2.0;
    while min_zero(n, hi)? <= 0.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while min_zero(n, lo)? > 0.0 {
        lo /= 2.0;
    }
    while hi - lo > BISECTION_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if min_zero(n, mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalThreshold {
        n,
        beta_plus: BETA_PLUS,
        purity_critical: 5.0 / (4.0 * nf),
        eta_plus: hi,
        beta_plus_exact: hi / nf.powi(3),
        purity_at_eta_plus: purity_from_eta(n, hi)?,
    })
}

/// Residuals of the multiplier sum rule and of the stationarity equations,
/// both relative to `|ξ|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    /// `|ξ + 2ηπ − N(N−1)| / |ξ|` with `π` recomputed from the spectrum.
    pub multiplier_residual: f64,
    pub max_force_residual: f64,
}

pub fn multiplier_relation_check(
    problem: &IsopurityProblem,
    solution: &FixedPuritySolution,
) -> MultiplierReport {
    let nf = problem.n as f64;
    let purity = solution.purity();
    let scale = problem.xi.abs().max(f64::MIN_POSITIVE);
    let relation = problem.xi + 2.0 * problem.eta * purity - nf * (nf - 1.0);
    let params = EnergyParams::constrained(problem.dims(), problem.xi, problem.eta, purity);
    let worst = forces(&solution.eigenvalues, &params)
        .into_iter()
        .fold(0.0, |a: f64, f| a.max(f.abs()));
    MultiplierReport {
        multiplier_residual: relation.abs() / scale,
        max_force_residual: worst / scale,
    }
}

/// One row of a threshold scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub eta: f64,
    pub beta: f64,
    pub purity: f64,
    pub min_eigenvalue: f64,
    pub feasible: bool,
}

/// Geometric grid of `points` values of `η` over `[η₊/2, 2η₊]`, crossing the
/// feasibility threshold at its midpoint.
pub fn threshold_scan(n: usize, points: usize) -> Result<Vec<ScanRow>> {
    let threshold = critical_threshold(n)?;
    let (lo, hi) = (threshold.eta_plus / 2.0, threshold.eta_plus * 2.0);
    let steps = points.max(2) - 1;
    (0..=steps)
        .map(|i| {
            let eta = lo * (hi / lo).powf(i as f64 / steps as f64);
            let problem = IsopurityProblem::from_eta(n, eta)?;
            let sol = solve_isopurity(&problem)?;
            Ok(ScanRow {
                n,
                eta,
                beta: problem.beta,
                purity: problem.purity_target,
                min_eigenvalue: sol.min_eigenvalue,
                feasible: sol.feasible,
            })
        })
        .collect()
}
