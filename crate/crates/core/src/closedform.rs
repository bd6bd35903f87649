//! Closed-form ensemble averages and typical (most probable) quantities.
//!
//! Every factorial goes through `lgamma`, so the formulas stay finite for
//! dimensions in the thousands.

use serde::{Deserialize, Serialize};

use crate::coulomb::{multiplier_xi, trace_inverse};
use crate::spectrum::BipartitionDims;
use crate::{Error, Result};

fn ln_factorial(k: usize) -> f64 {
    libm::lgamma(k as f64 + 1.0)
}

/// `ln C_{N,M} = ln(NM−1)! − Σ_{j=1}^{N} [ln(M−j)! + ln(N−j+1)!]`, the log of
/// the normalization of the joint eigenvalue density.
pub fn log_normalization(dims: BipartitionDims) -> f64 {
    let (n, m) = (dims.n(), dims.m());
    let mut out = ln_factorial(n * m - 1);
    for j in 1..=n {
        out -= ln_factorial(m - j) + ln_factorial(n - j + 1);
    }
    out
}

/// `ln⟨det ρ^k⟩ = ln C_{N,M} − ln C_{N,M+k}`.
pub fn det_moment_log(dims: BipartitionDims, k: usize) -> f64 {
    let shifted = BipartitionDims::new(dims.n(), dims.m() + k).expect("M + k ≥ M ≥ N");
    log_normalization(dims) - log_normalization(shifted)
}

/// `⟨det ρ^k⟩ = C_{N,M} / C_{N,M+k}`.
pub fn det_moment(dims: BipartitionDims, k: usize) -> f64 {
    det_moment_log(dims, k).exp()
}

/// Averages over the unitarily invariant ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMoments {
    pub n: usize,
    pub m: usize,
    pub mean_lambda: f64,
    /// Root-mean-square deviation of a single eigenvalue from `1/N`.
    pub sigma_rms: f64,
    pub mean_purity: f64,
    pub mean_entropy: f64,
    pub normalization_log: f64,
}

impl EnsembleMoments {
    pub fn dims(&self) -> BipartitionDims {
        BipartitionDims::new(self.n, self.m).expect("moments carry validated dimensions")
    }

    pub fn det_moment(&self, k: usize) -> f64 {
        det_moment(self.dims(), k)
    }

    /// Large-N form `1/(N√(1+μ))` of `sigma_rms` at fixed `μ = (M−N)/N`.
    pub fn sigma_rms_asymptotic(&self) -> f64 {
        1.0 / (self.n as f64 * (1.0 + self.dims().mu_ratio()).sqrt())
    }

    /// Large-N form `(2+μ)/((1+μ)N)` of `mean_purity`.
    pub fn mean_purity_asymptotic(&self) -> f64 {
        let mu = self.dims().mu_ratio();
        (2.0 + mu) / ((1.0 + mu) * self.n as f64)
    }
}

/// Mean eigenvalue, Lubkin's spread, mean purity and Page's mean entropy.
pub fn mean_moments(dims: BipartitionDims) -> EnsembleMoments {
    let (n, m) = (dims.n(), dims.m());
    let (nf, mf) = (n as f64, m as f64);
    let harmonic: f64 = (m + 1..=n * m).rev().map(|k| 1.0 / k as f64).sum();
    EnsembleMoments {
        n,
        m,
        mean_lambda: 1.0 / nf,
        sigma_rms: ((1.0 - 1.0 / (nf * nf)) / (mf * nf + 1.0)).sqrt(),
        mean_purity: (nf + mf) / (mf * nf + 1.0),
        mean_entropy: harmonic - (nf - 1.0) / (2.0 * mf),
        normalization_log: log_normalization(dims),
    }
}

/// `(N+M−2)/(N(M−1))`, the purity of the most probable spectrum.
pub fn typical_purity(dims: BipartitionDims) -> f64 {
    let (n, m) = (dims.n(), dims.m());
    if n == 1 {
        return 1.0;
    }
    (n + m - 2) as f64 / (n * (m - 1)) as f64
}

/// The same purity from summing `λ_i` times the stationarity equations:
/// `2(N−1) + (M−N) − ξπ = 0`.
pub fn typical_purity_from_multiplier(dims: BipartitionDims) -> f64 {
    let (n, m) = (dims.n(), dims.m());
    if n == 1 {
        return 1.0;
    }
    (2 * (n - 1) + (m - n)) as f64 / multiplier_xi(dims)
}

/// `ln s_k` of the typical spectrum, `−∞` when `s_k = 0`.
pub fn typical_invariant_log(dims: BipartitionDims, k: usize) -> Result<f64> {
    let (n, m) = (dims.n(), dims.m());
    if k > n {
        return Err(Error::Domain(format!(
            "invariant s_{k} does not exist for N = {n}"
        )));
    }
    if n == 1 || k == 0 {
        return Ok(0.0);
    }
    if m < k + 1 {
        return Ok(f64::NEG_INFINITY);
    }
    let xi = multiplier_xi(dims);
    Ok(ln_factorial(n) + ln_factorial(m - 1)
        - ln_factorial(k)
        - ln_factorial(n - k)
        - ln_factorial(m - k - 1)
        - k as f64 * xi.ln())
}

/// `s_k = N!(M−1)! / (k!(N−k)!(M−k−1)!) · [N(M−1)]^{−k}`.
pub fn typical_invariant(dims: BipartitionDims, k: usize) -> Result<f64> {
    typical_invariant_log(dims, k).map(f64::exp)
}

/// `ln det` of the typical spectrum: `ln(M−1)! − ln(M−N−1)! − N ln(N(M−1))`,
/// and `−∞` for a balanced bipartition with `N ≥ 2`.
pub fn typical_determinant_log(dims: BipartitionDims) -> f64 {
    typical_invariant_log(dims, dims.n()).expect("k = N is always admissible")
}

/// Leading coefficient of `tr ρ^k` in powers of `N^{1−k}` for `k = 2..=5` at
/// fixed `μ = (M−N)/N`.
pub fn asymptotic_traces(k: u32, mu: f64) -> Result<f64> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::Domain(format!(
            "ratio μ must be a nonnegative number, got {mu}"
        )));
    }
    let p = 1.0 + mu;
    let v = match k {
        2 => (2.0 + mu) / p,
        3 => (5.0 + 5.0 * mu + mu * mu) / (p * p),
        4 => (14.0 + 21.0 * mu + 9.0 * mu * mu + mu.powi(3)) / p.powi(3),
        5 => (42.0 + 84.0 * mu + 56.0 * mu * mu + 14.0 * mu.powi(3) + mu.powi(4)) / p.powi(4),
        _ => {
            return Err(Error::Domain(format!(
                "asymptotic traces cover k = 2..=5, got {k}"
            )))
        }
    };
    Ok(v)
}

/// `ln(N!/N^{2N})`, the large-N typical determinant of a balanced bipartition.
pub fn balanced_det_asymptotic(n: usize) -> f64 {
    ln_factorial(n) - 2.0 * n as f64 * (n as f64).ln()
}

/// Leading large-M behaviour of the Hessian trace at the typical spectrum:
/// `N³(M−N) + M N³(N−1)/2`.
///
/// The charge at the origin contributes `α/λ_i² ≈ αN²` per eigenvalue. For
/// `M ≫ N` the spectrum is `1/N + √2 h_i/(N√M)` with `h_i` the zeros of
/// `H_N`, and `Σ_{i≠j}(h_i−h_j)^{−2} = N(N−1)/2` gives the pair term.
pub fn hessian_trace_leading(dims: BipartitionDims) -> f64 {
    let (n, m) = (dims.n() as f64, dims.m() as f64);
    n.powi(3) * (m - n) + m * n.powi(3) * (n - 1.0) / 2.0
}

/// Closed-form quantities of the most probable spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalQuantities {
    pub n: usize,
    pub m: usize,
    pub purity: f64,
    /// The purity again, through the trace multiplier.
    pub purity_from_multiplier: f64,
    /// `s_1, …, s_{k_max}`.
    pub invariants: Vec<f64>,
    pub determinant_log: f64,
}

impl TypicalQuantities {
    pub fn invariant_s(&self, k: usize) -> Result<f64> {
        let dims = BipartitionDims::new(self.n, self.m)?;
        typical_invariant(dims, k)
    }

    pub fn traces_asymptotic(&self, k: u32) -> Result<f64> {
        asymptotic_traces(k, BipartitionDims::new(self.n, self.m)?.mu_ratio())
    }
}

pub fn typical_quantities(dims: BipartitionDims, k_max: usize) -> Result<TypicalQuantities> {
    let invariants = (1..=k_max)
        .map(|k| typical_invariant(dims, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TypicalQuantities {
        n: dims.n(),
        m: dims.m(),
        purity: typical_purity(dims),
        purity_from_multiplier: typical_purity_from_multiplier(dims),
        invariants,
        determinant_log: typical_determinant_log(dims),
    })
}

/// One line of the formula table export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormulaRow {
    pub quantity: String,
    pub n: usize,
    pub m: usize,
    pub value: f64,
    pub formula_id: String,
}

/// Every closed form evaluated at one bipartition.
pub fn formula_table(dims: BipartitionDims) -> Vec<FormulaRow> {
    let (n, m) = (dims.n(), dims.m());
    let moments = mean_moments(dims);
    let row = |quantity: &str, value: f64, id: &str| FormulaRow {
        quantity: quantity.into(),
        n,
        m,
        value,
        formula_id: id.into(),
    };
    let mut rows = vec![
        row(
            "log_normalization",
            moments.normalization_log,
            "normalization_factorials",
        ),
        row("mean_lambda", moments.mean_lambda, "mean_eigenvalue"),
        row("sigma_rms", moments.sigma_rms, "lubkin_spread"),
        row("mean_purity", moments.mean_purity, "mean_purity"),
        row("mean_entropy", moments.mean_entropy, "page_mean_entropy"),
        row("mean_det", det_moment(dims, 1), "det_moment_ratio"),
        row("xi", multiplier_xi(dims), "trace_multiplier"),
        row("typical_purity", typical_purity(dims), "typical_purity"),
        row(
            "typical_purity_multiplier",
            typical_purity_from_multiplier(dims),
            "multiplier_purity",
        ),
        row(
            "typical_det_log",
            typical_determinant_log(dims),
            "typical_determinant",
        ),
    ];
    if let Ok(t) = trace_inverse(dims) {
        rows.push(row("trace_inverse", t, "trace_inverse"));
    }
    for k in 1..=n {
        let value = typical_invariant(dims, k).expect("k ≤ N");
        rows.push(row(&format!("typical_s{k}"), value, "typical_invariants"));
    }
    if dims.is_balanced() {
        rows.push(row(
            "balanced_det_asymptotic_log",
            balanced_det_asymptotic(n),
            "balanced_det_asymptotic",
        ));
    }
    for k in 2..=5 {
        let value = asymptotic_traces(k, dims.mu_ratio()).expect("k in range");
        rows.push(row(
            &format!("asymptotic_trace{k}"),
            value,
            "thermodynamic_traces",
        ));
    }
    rows
}
