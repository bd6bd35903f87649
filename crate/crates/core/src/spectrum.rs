//! Bipartitions, spectra of reduced states, and the quantifiers evaluated on
//! them.
//!
//! A [`Spectrum`] is the eigenvalue vector of an `N×N` reduced density
//! matrix. It is a probability vector and is always stored in non-increasing
//! order so that two spectra compare equal exactly when they describe the same
//! state up to local unitaries.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{format_f64, Error, Result};

/// Absolute tolerance on `Σλ = 1`.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Eigenvalues at or below this fraction of the largest one do not count
/// towards the Schmidt number.
pub const RANK_TOL: f64 = 1e-10;

/// Slack allowed on each majorization partial-sum comparison.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Dimensions `(N, M)` of `H_A ⊗ H_B` with `N ≤ M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct BipartitionDims {
    n: usize,
    m: usize,
}

#[derive(Deserialize)]
struct RawDims {
    n: usize,
    m: usize,
}

impl TryFrom<RawDims> for BipartitionDims {
    type Error = Error;

    fn try_from(raw: RawDims) -> Result<Self> {
        Self::new(raw.n, raw.m)
    }
}

impl BipartitionDims {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension(
                "subsystem dimension N must be at least 1".into(),
            ));
        }
        if m < n {
            return Err(Error::Dimension(format!(
                "need N <= M, got N = {n}, M = {m}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn balanced(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// `α = M − N`, the charge sitting at the origin of the log-gas.
    #[inline]
    pub fn alpha(&self) -> usize {
        self.m - self.n
    }

    /// `(M − N)/N` as a float.
    pub fn mu_ratio(&self) -> f64 {
        self.alpha() as f64 / self.n as f64
    }

    /// `(M − N)/N` as a reduced fraction `(numerator, denominator)`.
    pub fn mu_ratio_exact(&self) -> (usize, usize) {
        let (p, q) = (self.alpha(), self.n);
        let g = gcd(p, q);
        (p / g, q / g)
    }

    pub fn is_balanced(&self) -> bool {
        self.n == self.m
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for BipartitionDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.m)
    }
}

/// Eigenvalues of a reduced density matrix, sorted non-increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spectrum {
    values: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Spectrum> for Vec<f64> {
    fn from(s: Spectrum) -> Self {
        s.values
    }
}

impl AsRef<[f64]> for Spectrum {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

impl Spectrum {
    /// Validates and sorts a probability vector. Negative entries are rejected
    /// outright; the sum must be 1 within [`SIMPLEX_TOL`].
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Dimension(
                "a spectrum needs at least one eigenvalue".into(),
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::Domain(format!(
                "eigenvalue {bad} is not a nonnegative number"
            )));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::Domain(format!(
                "eigenvalues sum to {total}, not 1 (tolerance {SIMPLEX_TOL:e})"
            )));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    /// Like [`Spectrum::new`], but entries in `[-clamp, 0)` are first set to
    /// zero. Used for eigenvalues coming out of a floating-point eigensolver.
    pub fn with_clamp(mut values: Vec<f64>, clamp: f64) -> Result<Self> {
        for v in values.iter_mut() {
            if *v < 0.0 && *v >= -clamp {
                *v = 0.0;
            }
        }
        Self::new(values)
    }

    /// `(1/N, …, 1/N)`.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    /// `(1, 0, …, 0)`.
    pub fn pure(n: usize) -> Result<Self> {
        let mut v = vec![0.0; n];
        if let Some(first) = v.first_mut() {
            *first = 1.0;
        }
        Self::new(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `π = Σλ²`.
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// `tr ρ^k = Σλ^k`.
    pub fn trace_power(&self, k: u32) -> f64 {
        self.values.iter().map(|v| v.powi(k as i32)).sum()
    }

    /// Elementary symmetric polynomials `(s_1, …, s_N)`, read off the
    /// coefficients of `∏(x + λ_i)` built one factor at a time.
    pub fn elementary_invariants(&self) -> Vec<f64> {
        elementary_symmetric(&self.values)
    }

    /// `det ρ = s_N = ∏λ_i`.
    pub fn determinant(&self) -> f64 {
        self.values.iter().product()
    }

    /// `S = −Σ λ ln λ`, with `0 ln 0 = 0`.
    pub fn von_neumann_entropy(&self) -> f64 {
        let s: f64 = self
            .values
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| -v * v.ln())
            .sum();
        // A pure spectrum gives −1·ln 1 = −0.0.
        s.max(0.0)
    }

    /// Number of eigenvalues above `RANK_TOL · λ_1`.
    pub fn schmidt_number(&self) -> usize {
        let cut = RANK_TOL * self.values[0];
        self.values.iter().filter(|&&v| v > cut).count()
    }

    /// All quantifiers at once, with Rényi traces `tr ρ^k` for `k = 2..=k_max`.
    pub fn quantifiers(&self, k_max: u32) -> Quantifiers {
        let elementary_invariants = self.elementary_invariants();
        let determinant = *elementary_invariants.last().unwrap_or(&1.0);
        Quantifiers {
            purity: self.purity(),
            renyi_traces: (2..=k_max).map(|k| self.trace_power(k)).collect(),
            von_neumann_entropy: self.von_neumann_entropy(),
            schmidt_number: self.schmidt_number(),
            elementary_invariants,
            determinant,
        }
    }

    /// Comma-separated row, shortest round-trip formatting.
    pub fn to_csv_row(&self) -> String {
        self.values
            .iter()
            .map(|&v| format_f64(v))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let values = row
            .split(',')
            .map(|cell| {
                cell.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Domain(format!("bad CSV cell {cell:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// `(s_1, …, s_n)` of arbitrary reals, by expanding `∏(x + v_i)`.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &v) in values.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += v * e[k - 1];
        }
    }
    e.split_off(1)
}

/// Entanglement quantifiers of one spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantifiers {
    pub purity: f64,
    /// `tr ρ^k` for `k = 2, 3, …`.
    pub renyi_traces: Vec<f64>,
    pub von_neumann_entropy: f64,
    pub schmidt_number: usize,
    /// `s_1, …, s_N`.
    pub elementary_invariants: Vec<f64>,
    pub determinant: f64,
}

/// Outcome of comparing two spectra in the majorization preorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Majorization {
    /// `a ≺ b`: `a` is more mixed.
    AMajorizedByB,
    /// `b ≺ a`.
    BMajorizedByA,
    Equal,
    Incomparable,
}

/// Compares sorted partial sums of `a` and `b` for every `k`.
pub fn majorization_compare(a: &Spectrum, b: &Spectrum) -> Result<Majorization> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "cannot compare spectra of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (mut sa, mut sb) = (0.0, 0.0);
    let (mut a_le_b, mut b_le_a) = (true, true);
    for (x, y) in a.values().iter().zip(b.values()) {
        sa += x;
        sb += y;
        match (sa - sb).partial_cmp(&0.0) {
            Some(Ordering::Greater) if sa - sb > MAJORIZATION_TOL => a_le_b = false,
            Some(Ordering::Less) if sb - sa > MAJORIZATION_TOL => b_le_a = false,
            _ => {}
        }
    }
    Ok(match (a_le_b, b_le_a) {
        (true, true) => Majorization::Equal,
        (true, false) => Majorization::AMajorizedByB,
        (false, true) => Majorization::BMajorizedByA,
        (false, false) => Majorization::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn dims_invariants() {
        let d = BipartitionDims::new(4, 10).unwrap();
        assert_eq!(d.alpha(), 6);
        assert_eq!(d.mu_ratio_exact(), (3, 2));
        assert!((d.mu_ratio() * 4.0 - 6.0).abs() < 1e-15);
        assert_eq!(BipartitionDims::new(3, 3).unwrap().mu_ratio_exact(), (0, 1));
        assert!(BipartitionDims::new(0, 3).is_err());
        assert!(BipartitionDims::new(4, 3).is_err());
    }

    #[test]
    fn spectrum_is_sorted_and_validated() {
        let s = spec(&[0.25, 0.75]);
        assert_eq!(s.values(), &[0.75, 0.25]);
        assert!(Spectrum::new(vec![0.5, 0.6]).is_err());
        assert!(Spectrum::new(vec![1.1, -0.1]).is_err());
        assert!(Spectrum::new(vec![]).is_err());
        assert!(Spectrum::new(vec![f64::NAN, 1.0]).is_err());
        let c = Spectrum::with_clamp(vec![1.0, -1e-15], 1e-14).unwrap();
        assert_eq!(c.values(), &[1.0, 0.0]);
        assert!(Spectrum::with_clamp(vec![1.0 + 1e-9, -1e-9], 1e-14).is_err());
    }

    #[test]
    fn purity_examples() {
        assert_eq!(spec(&[1.0, 0.0]).purity(), 1.0);
        assert_eq!(spec(&[0.5, 0.5]).purity(), 0.5);
        let r = 2f64.sqrt();
        let s = spec(&[(2.0 + r) / 4.0, (2.0 - r) / 4.0]);
        assert!((s.purity() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn elementary_invariant_examples() {
        assert_eq!(spec(&[0.5, 0.5]).elementary_invariants(), vec![1.0, 0.25]);
        assert_eq!(
            spec(&[1.0, 0.0, 0.0]).elementary_invariants(),
            vec![1.0, 0.0, 0.0]
        );
        let e = spec(&[0.5, 1.0 / 3.0, 1.0 / 6.0]).elementary_invariants();
        assert!((e[0] - 1.0).abs() < 1e-15);
        assert!((e[1] - 11.0 / 36.0).abs() < 1e-15);
        assert!((e[2] - 1.0 / 36.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(spec(&[1.0, 0.0]).von_neumann_entropy(), 0.0);
        assert!((spec(&[0.5, 0.5]).von_neumann_entropy() - 2f64.ln()).abs() < 1e-15);
        let s = spec(&[0.75, 0.25]).von_neumann_entropy();
        assert!((s - 0.562335).abs() < 1e-6);
        assert!((s - (-(0.75f64) * 0.75f64.ln() - 0.25 * 0.25f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn schmidt_number_and_entropy_zero_together() {
        let pure = spec(&[1.0, 0.0, 0.0]);
        assert_eq!(pure.schmidt_number(), 1);
        assert_eq!(pure.von_neumann_entropy(), 0.0);
        let tiny = spec(&[1.0 - 1e-12, 1e-12]);
        assert_eq!(tiny.schmidt_number(), 1);
        let two = spec(&[0.9, 0.1]);
        assert_eq!(two.schmidt_number(), 2);
        assert!(two.von_neumann_entropy() > 0.0);
    }

    #[test]
    fn majorization_examples() {
        let mixed = spec(&[0.5, 0.5]);
        let pure = spec(&[1.0, 0.0]);
        assert_eq!(
            majorization_compare(&mixed, &pure).unwrap(),
            Majorization::AMajorizedByB
        );
        assert_eq!(
            majorization_compare(&pure, &mixed).unwrap(),
            Majorization::BMajorizedByA
        );
        assert_eq!(
            majorization_compare(&mixed, &mixed).unwrap(),
            Majorization::Equal
        );
        let a = spec(&[0.5, 0.3, 0.2]);
        let b = spec(&[0.6, 0.2, 0.2]);
        assert_eq!(
            majorization_compare(&a, &b).unwrap(),
            Majorization::AMajorizedByB
        );
        let c = spec(&[0.4, 0.4, 0.2]);
        let d = spec(&[0.5, 0.25, 0.25]);
        assert_eq!(
            majorization_compare(&c, &d).unwrap(),
            Majorization::Incomparable
        );
        assert!(matches!(
            majorization_compare(&a, &mixed),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn quantifiers_bundle() {
        let q = spec(&[0.5, 1.0 / 3.0, 1.0 / 6.0]).quantifiers(4);
        assert_eq!(q.renyi_traces.len(), 3);
        assert!((q.renyi_traces[0] - q.purity).abs() < 1e-16);
        assert!((q.determinant - 1.0 / 36.0).abs() < 1e-16);
        assert!((q.purity - (1.0 - 2.0 * q.elementary_invariants[1])).abs() < 1e-15);
        assert_eq!(q.schmidt_number, 3);
    }

    #[test]
    fn csv_and_json_round_trip() {
        let s = spec(&[0.1, 0.2, 0.7]);
        assert_eq!(Spectrum::from_csv_row(&s.to_csv_row()).unwrap(), s);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Spectrum>(&json).unwrap(), s);
        assert!(serde_json::from_str::<Spectrum>("[0.5, 0.6]").is_err());
        let d: BipartitionDims = serde_json::from_str(r#"{"n": 2, "m": 3}"#).unwrap();
        assert_eq!(d, BipartitionDims::new(2, 3).unwrap());
        assert!(serde_json::from_str::<BipartitionDims>(r#"{"n": 3, "m": 2}"#).is_err());
    }
}
