//! Large-N limits of the rescaled eigenvalue distribution `σ(μ)`, `μ = Nλ`.
//!
//! Two closed forms are covered: Wigner's semicircle for an isopurity
//! ensemble at inverse temperature `β ≥ 2`, and the Marčenko–Pastur law of the
//! unbiased balanced ensemble.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coulomb::coulomb_energy;
use crate::fixedpurity::{solve_isopurity, IsopurityProblem, BETA_PLUS};
use crate::quadrature::integrate;
use crate::stats::ks_distance_sorted;
use crate::{Error, Result};

const MOMENT_TOL: f64 = 1e-12;
const PV_TOL: f64 = 1e-11;

/// Number of rows in an exported density curve.
pub const CURVE_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Semicircle,
    MarchenkoPastur,
}

/// A limiting density with its support and second moment `π̃ = Nπ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuumDensity {
    pub kind: DensityKind,
    pub beta: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub rescaled_purity: f64,
}

impl ContinuumDensity {
    /// `σ(λ) = (β/π)√((λ−λ₋)(λ₊−λ))` with `λ± = 1 ± √(2/β)`.
    pub fn semicircle(beta: f64) -> Result<Self> {
        if !(beta >= BETA_PLUS) || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "the semicircle law needs finite β ≥ {BETA_PLUS}, got {beta}"
            )));
        }
        let r = (BETA_PLUS / beta).sqrt();
        Ok(Self {
            kind: DensityKind::Semicircle,
            beta,
            lambda_minus: 1.0 - r,
            lambda_plus: 1.0 + r,
            rescaled_purity: 1.0 + 1.0 / (2.0 * beta),
        })
    }

    /// `σ(λ) = (1/2π)√((4−λ)/λ)` on `(0, 4)`.
    pub fn marchenko_pastur() -> Self {
        Self {
            kind: DensityKind::MarchenkoPastur,
            beta: 0.0,
            lambda_minus: 0.0,
            lambda_plus: 4.0,
            rescaled_purity: 2.0,
        }
    }

    fn centre(&self) -> f64 {
        0.5 * (self.lambda_minus + self.lambda_plus)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.lambda_plus - self.lambda_minus)
    }

    /// Density at `lambda`; zero outside the support, `+∞` at the
    /// Marčenko–Pastur hard edge.
    pub fn density_value(&self, lambda: f64) -> f64 {
        if lambda < self.lambda_minus || lambda > self.lambda_plus {
            return 0.0;
        }
        match self.kind {
            DensityKind::Semicircle => {
                let q = (lambda - self.lambda_minus) * (self.lambda_plus - lambda);
                self.beta / PI * q.max(0.0).sqrt()
            }
            DensityKind::MarchenkoPastur => {
                if lambda == 0.0 {
                    f64::INFINITY
                } else {
                    ((4.0 - lambda) / lambda).sqrt() / (2.0 * PI)
                }
            }
        }
    }

    pub fn cdf(&self, lambda: f64) -> f64 {
        if lambda <= self.lambda_minus {
            return 0.0;
        }
        if lambda >= self.lambda_plus {
            return 1.0;
        }
        match self.kind {
            DensityKind::Semicircle => {
                let t = ((lambda - self.centre()) / self.half_width()).clamp(-1.0, 1.0);
                0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI
            }
            DensityKind::MarchenkoPastur => {
                let theta = (lambda / 4.0).sqrt().min(1.0).asin();
                (2.0 * theta + (2.0 * theta).sin()) / PI
            }
        }
    }

    /// `σ(λ(θ)) dλ/dθ` for `λ = c − h cos θ`, written so that the edge
    /// behaviour of both laws cancels analytically.
    fn angular_weight(&self, theta: f64) -> f64 {
        let h = self.half_width();
        match self.kind {
            DensityKind::Semicircle => self.beta / PI * (h * theta.sin()).powi(2),
            DensityKind::MarchenkoPastur => 2.0 / PI * (0.5 * theta).cos().powi(2),
        }
    }

    fn lambda_at(&self, theta: f64) -> f64 {
        self.centre() - self.half_width() * theta.cos()
    }

    /// `(∫σ, ∫λσ, ∫λ²σ)` by adaptive Gauss–Kronrod in the angle variable.
    pub fn moments(&self) -> Result<(f64, f64, f64)> {
        let m = |p: i32| {
            integrate(
                |t| self.angular_weight(t) * self.lambda_at(t).powi(p),
                0.0,
                PI,
                MOMENT_TOL,
                MOMENT_TOL,
            )
            .map(|r| r.value)
        };
        Ok((m(0)?, m(1)?, m(2)?))
    }

    /// `⨍ σ(λ)/(λ − μ) dλ` for `μ` strictly inside the support, by subtracting
    /// `σ(μ)` and adding its logarithmic integral back analytically.
    pub fn principal_value(&self, mu: f64) -> Result<f64> {
        let (a, b) = (self.lambda_minus, self.lambda_plus);
        if !(mu > a && mu < b) {
            return Err(Error::Domain(format!(
                "μ = {mu} is not inside the support ({a}, {b})"
            )));
        }
        let s_mu = self.density_value(mu);
        let h = self.half_width();
        let theta_mu = ((self.centre() - mu) / h).clamp(-1.0, 1.0).acos();
        let f = |t: f64| {
            let lam = self.lambda_at(t);
            let d = lam - mu;
            if d == 0.0 {
                return 0.0;
            }
            let jac = h * t.sin();
            (self.angular_weight(t) - s_mu * jac) / d
        };
        let left = integrate(f, 0.0, theta_mu, PV_TOL, PV_TOL)?;
        let right = integrate(f, theta_mu, PI, PV_TOL, PV_TOL)?;
        Ok(left.value + right.value + s_mu * ((b - mu) / (mu - a)).ln())
    }

    /// Maximal violation of `βμ + ⨍σ(λ)/(λ−μ)dλ + ζ/2 = 0` over `grid`.
    ///
    /// For the semicircle `ζ` is fixed at the centre of the support; for
    /// Marčenko–Pastur (`β = 0`) the principal value must equal `−1/2`.
    pub fn tricomi_residual(&self, grid: &[f64]) -> Result<f64> {
        let offset = match self.kind {
            DensityKind::Semicircle => {
                let c = self.centre();
                -(self.beta * c + self.principal_value(c)?)
            }
            DensityKind::MarchenkoPastur => 0.5,
        };
        grid.iter().try_fold(0.0f64, |worst, &mu| {
            let r = self.beta * mu + self.principal_value(mu)? + offset;
            Ok(worst.max(r.abs()))
        })
    }

    /// The trace multiplier `ζ` implied at the centre of the support.
    pub fn implied_zeta(&self) -> Result<f64> {
        let c = self.centre();
        Ok(-2.0 * (self.beta * c + self.principal_value(c)?))
    }

    /// `(λ, σ(λ))` on [`CURVE_POINTS`] points. The semicircle grid includes
    /// both edges; the Marčenko–Pastur grid is `λ_k = 4(k+1)/512`, skipping
    /// the singular edge.
    pub fn density_curve(&self) -> Vec<(f64, f64)> {
        let n = CURVE_POINTS;
        (0..n)
            .map(|k| {
                let lambda = match self.kind {
                    DensityKind::Semicircle => {
                        if k == n - 1 {
                            self.lambda_plus
                        } else {
                            self.lambda_minus
                                + (self.lambda_plus - self.lambda_minus) * k as f64 / (n - 1) as f64
                        }
                    }
                    DensityKind::MarchenkoPastur => 4.0 * (k + 1) as f64 / n as f64,
                };
                (lambda, self.density_value(lambda))
            })
            .collect()
    }

    /// Kolmogorov distance between the equal-weight atomic measure on `values`
    /// and this law.
    pub fn ks_distance(&self, values: &[f64]) -> f64 {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        ks_distance_sorted(&sorted, |x| self.cdf(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub ks_distance: f64,
}

/// KS distance between the rescaled Hermite-zero spectrum at `η = βn³` and
/// the semicircle, for each `n`.
pub fn finite_n_convergence(n_list: &[usize], beta: f64) -> Result<Vec<ConvergenceRow>> {
    let law = ContinuumDensity::semicircle(beta)?;
    n_list
        .par_iter()
        .map(|&n| {
            let problem = IsopurityProblem::from_beta(n, beta)?;
            let sol = solve_isopurity(&problem)?;
            if !sol.feasible {
                return Err(Error::Feasibility(format!(
                    "β = {beta} is below the finite-size threshold at n = {n}"
                )));
            }
            let rescaled: Vec<f64> = sol.eigenvalues.iter().map(|l| n as f64 * l).collect();
            Ok(ConvergenceRow {
                n,
                ks_distance: law.ks_distance(&rescaled),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n: usize,
    pub beta: f64,
    /// `N³π` of the Hermite-zero spectrum.
    pub energy: f64,
    /// `N³π / N² = Nπ`.
    pub rescaled: f64,
    /// `Nπ / (1 + 1/(2β))`.
    pub ratio_to_continuum: f64,
    pub within_bounds: bool,
}

/// Checks that `N³π` grows like `N²(1 + 1/(2β))`, within a factor of 2.
pub fn canonical_energy_scaling_check(n: usize, beta: f64) -> Result<ScalingReport> {
    let problem = IsopurityProblem::from_beta(n, beta)?;
    let sol = solve_isopurity(&problem)?;
    if !sol.feasible {
        return Err(Error::Feasibility(format!(
            "β = {beta} is infeasible at n = {n}"
        )));
    }
    let nf = n as f64;
    let pi = sol.purity();
    let rescaled = nf * pi;
    let ratio = rescaled / (1.0 + 1.0 / (2.0 * beta));
    Ok(ScalingReport {
        n,
        beta,
        energy: nf.powi(3) * pi,
        rescaled,
        ratio_to_continuum: ratio,
        within_bounds: (0.5..=2.0).contains(&ratio),
    })
}

/// `N²V = Ẽ + ηπ` for a balanced bipartition with `η = βN³`, `ξ = ζN²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPotential {
    pub beta: f64,
    pub zeta: f64,
    pub n: usize,
}

impl CanonicalPotential {
    pub fn from_multipliers(n: usize, eta: f64, xi: f64) -> Self {
        let nf = n as f64;
        Self {
            beta: eta / nf.powi(3),
            zeta: xi / (nf * nf),
            n,
        }
    }

    pub fn eta(&self) -> f64 {
        self.beta * (self.n as f64).powi(3)
    }

    pub fn xi(&self) -> f64 {
        self.zeta * (self.n as f64).powi(2)
    }

    /// `V(λ) = [−2Σ_{i<j} ln|λ_i−λ_j| + ξ(Σλ − 1) + ηΣλ²] / N²`.
    pub fn value(&self, lambda: &[f64]) -> f64 {
        let nf = self.n as f64;
        let s: f64 = lambda.iter().sum();
        let p: f64 = lambda.iter().map(|l| l * l).sum();
        (coulomb_energy(lambda, 0.0) + self.xi() * (s - 1.0) + self.eta() * p) / (nf * nf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coulomb::{energy, EnergyParams};
    use crate::spectrum::BipartitionDims;

    #[test]
    fn density_examples() {
        let s = ContinuumDensity::semicircle(2.0).unwrap();
        assert_eq!((s.lambda_minus, s.lambda_plus), (0.0, 2.0));
        assert!((s.density_value(1.0) - 2.0 / PI).abs() < 1e-15);
        for beta in [2.0, 3.0, 10.0] {
            let d = ContinuumDensity::semicircle(beta).unwrap();
            assert_eq!(d.density_value(d.lambda_minus), 0.0);
            assert_eq!(d.density_value(d.lambda_plus), 0.0);
            assert_eq!(d.density_value(d.lambda_plus + 0.1), 0.0);
        }
        let mp = ContinuumDensity::marchenko_pastur();
        assert!((mp.density_value(2.0) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(mp.density_value(0.0), f64::INFINITY);
        assert!(ContinuumDensity::semicircle(1.5).is_err());
    }

    #[test]
    fn moment_examples() {
        let (m0, m1, m2) = ContinuumDensity::semicircle(4.0)
            .unwrap()
            .moments()
            .unwrap();
        assert!((m0 - 1.0).abs() < 1e-10 && (m1 - 1.0).abs() < 1e-10 && (m2 - 1.125).abs() < 1e-10);
        let (_, _, m2) = ContinuumDensity::semicircle(2.0)
            .unwrap()
            .moments()
            .unwrap();
        assert!((m2 - 1.25).abs() < 1e-10);
        let (m0, m1, m2) = ContinuumDensity::marchenko_pastur().moments().unwrap();
        assert!((m0 - 1.0).abs() < 1e-10 && (m1 - 1.0).abs() < 1e-10 && (m2 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn cdf_matches_quadrature() {
        for d in [
            ContinuumDensity::semicircle(3.0).unwrap(),
            ContinuumDensity::marchenko_pastur(),
        ] {
            for &x in &[0.3, 0.9, 1.4, 2.5] {
                let lo = d.lambda_minus;
                let want = if x <= lo {
                    0.0
                } else {
                    let top = x.min(d.lambda_plus);
                    integrate(|l| d.density_value(l), lo, top, 1e-11, 1e-11)
                        .unwrap()
                        .value
                };
                assert!((d.cdf(x) - want).abs() < 1e-8, "{:?} at {x}", d.kind);
            }
        }
    }

    #[test]
    fn tricomi_examples() {
        let s = ContinuumDensity::semicircle(2.0).unwrap();
        let grid: Vec<f64> = (1..=21).map(|k| 2.0 * k as f64 / 22.0).collect();
        assert!(s.tricomi_residual(&grid).unwrap() <= 1e-6);
        assert!((s.implied_zeta().unwrap() + 4.0).abs() < 1e-8);
        let mp = ContinuumDensity::marchenko_pastur();
        let grid: Vec<f64> = (0..21).map(|k| 0.1 + 3.8 * k as f64 / 20.0).collect();
        assert!(mp.tricomi_residual(&grid).unwrap() <= 1e-6);
        assert!(matches!(s.tricomi_residual(&[2.5]), Err(Error::Domain(_))));
    }

    #[test]
    fn curve_shapes() {
        let c = ContinuumDensity::semicircle(2.0).unwrap().density_curve();
        assert_eq!(c.len(), 512);
        assert_eq!(c[0].1, 0.0);
        assert_eq!(c[511].1, 0.0);
        let mp = ContinuumDensity::marchenko_pastur().density_curve();
        assert!(mp.iter().all(|(_, d)| d.is_finite()));
        assert_eq!(mp[511], (4.0, 0.0));
    }

    #[test]
    fn convergence_small_sizes() {
        let rows = finite_n_convergence(&[4, 64], 2.0).unwrap();
        assert!(rows[0].ks_distance > rows[1].ks_distance);
    }

    #[test]
    fn scaling_examples() {
        let r = canonical_energy_scaling_check(64, 2.0).unwrap();
        assert!(r.within_bounds && (0.6..=1.9).contains(&r.rescaled));
        let r = canonical_energy_scaling_check(128, 4.0).unwrap();
        assert!((r.rescaled - 1.125).abs() < 0.01, "{r:?}");
        let r = canonical_energy_scaling_check(64, 1e9).unwrap();
        assert!((r.rescaled - 1.0).abs() < 1e-6);
    }

    #[test]
    fn canonical_potential_matches_total_energy() {
        let n = 4;
        let (eta, xi, pi) = (300.0, -150.0, 0.3);
        let v = CanonicalPotential::from_multipliers(n, eta, xi);
        assert!((v.eta() - eta).abs() < 1e-12 && (v.xi() - xi).abs() < 1e-12);
        let lam = [0.4, 0.3, 0.2, 0.1];
        let params = EnergyParams::constrained(BipartitionDims::balanced(n).unwrap(), xi, eta, pi);
        let want = (energy(&lam, &params) + eta * pi) / 16.0;
        assert!((v.value(&lam) - want).abs() < 1e-12);
    }
}
