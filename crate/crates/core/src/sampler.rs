//! Monte Carlo over reduced states of uniformly random pure states.
//!
//! A pure state on `C^N ⊗ C^M` drawn from the unitarily invariant measure has
//! coefficient matrix `W / ‖W‖` with `W` an `N×M` matrix of i.i.d. complex
//! Gaussians, so its reduced state is `WW† / tr(WW†)`.
//!
//! Sample `i` of a run with seed `s` always uses ChaCha8 stream `i` of key
//! `s`. Samples are grouped into fixed leaves whose accumulators are merged by
//! a fixed tree, so results are bit-identical for any chunk size or thread
//! count.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::hermitian_eigenvalues;
use crate::spectrum::{BipartitionDims, Spectrum};
use crate::stats::{tree_merge, Welford};
use crate::{Error, Result};

/// Samples per accumulation leaf; part of the reduction tree's shape.
const LEAF: usize = 256;

/// Eigenvalues in `[-CLAMP, 0)` are rounding noise and are set to zero.
const CLAMP: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub dims: BipartitionDims,
    pub sample_count: usize,
    pub seed: u64,
    /// Samples per unit of parallel work. Affects scheduling only.
    pub chunk_size: usize,
}

impl SamplerConfig {
    pub fn new(dims: BipartitionDims, sample_count: usize, seed: u64) -> Result<Self> {
        Self::with_chunk_size(dims, sample_count, seed, 4 * LEAF)
    }

    pub fn with_chunk_size(
        dims: BipartitionDims,
        sample_count: usize,
        seed: u64,
        chunk_size: usize,
    ) -> Result<Self> {
        if sample_count == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        if chunk_size == 0 {
            return Err(Error::Domain("chunk size must be at least 1".into()));
        }
        Ok(Self {
            dims,
            sample_count,
            seed,
            chunk_size,
        })
    }
}

/// The random stream assigned to sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A pair of independent standard normals by Box–Muller.
fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    (r * c, r * s)
}

/// Eigenvalues of `WW†/tr(WW†)` for a fresh Gaussian `W`, ascending and not
/// yet clamped.
fn raw_eigenvalues<R: Rng>(dims: BipartitionDims, rng: &mut R) -> Vec<f64> {
    let (n, m) = (dims.n(), dims.m());
    let w: Vec<Complex64> = (0..n * m)
        .map(|_| {
            let (re, im) = normal_pair(rng);
            Complex64::new(re, im)
        })
        .collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
    let mut trace = 0.0;
    for i in 0..n {
        let wi = &w[i * m..(i + 1) * m];
        for j in 0..=i {
            let wj = &w[j * m..(j + 1) * m];
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, b) in wi.iter().zip(wj) {
                acc += a * b.conj();
            }
            rho[i * n + j] = acc;
            rho[j * n + i] = acc.conj();
        }
        trace += rho[i * n + i].re;
    }
    rho.iter_mut().for_each(|x| *x /= trace);
    hermitian_eigenvalues(&mut rho, n).expect("QL converges on Hermitian input")
}

/// One reduced-state spectrum drawn with `rng`.
pub fn sample_spectrum<R: Rng>(dims: BipartitionDims, rng: &mut R) -> Spectrum {
    if dims.n() == 1 {
        // Consume the draws anyway so streams line up across dimensions.
        let _ = raw_eigenvalues(dims, rng);
        return Spectrum::pure(1).expect("N = 1");
    }
    Spectrum::with_clamp(raw_eigenvalues(dims, rng), CLAMP)
        .expect("normalized Hermitian spectra lie on the simplex")
}

/// Scalar functionals of a spectrum that can be averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    Purity,
    Entropy,
    Det,
    DetPower(u32),
    /// `(1/N) Σ (λ_i − 1/N)²`.
    LambdaVariance,
    TracePower(u32),
}

impl Functional {
    pub fn evaluate(&self, s: &Spectrum) -> f64 {
        match *self {
            Self::Purity => s.purity(),
            Self::Entropy => s.von_neumann_entropy(),
            Self::Det => s.determinant(),
            Self::DetPower(k) => s.determinant().powi(k as i32),
            Self::LambdaVariance => {
                let n = s.len() as f64;
                s.values()
                    .iter()
                    .map(|l| (l - 1.0 / n).powi(2))
                    .sum::<f64>()
                    / n
            }
            Self::TracePower(k) => s.trace_power(k),
        }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Purity => write!(f, "purity"),
            Self::Entropy => write!(f, "entropy"),
            Self::Det => write!(f, "det"),
            Self::DetPower(k) => write!(f, "det_power({k})"),
            Self::LambdaVariance => write!(f, "lambda_variance"),
            Self::TracePower(k) => write!(f, "trace_power({k})"),
        }
    }
}

impl FromStr for Functional {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let arg = |prefix: &str| -> Option<Result<u32>> {
            let inner = s
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?;
            Some(
                inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad power in functional {s:?}"))),
            )
        };
        match s {
            "purity" => Ok(Self::Purity),
            "entropy" => Ok(Self::Entropy),
            "det" => Ok(Self::Det),
            "lambda_variance" => Ok(Self::LambdaVariance),
            _ => {
                if let Some(k) = arg("det_power") {
                    return k.map(Self::DetPower);
                }
                if let Some(k) = arg("trace_power") {
                    return k.map(Self::TracePower);
                }
                Err(Error::Domain(format!(
                    "unknown functional {s:?}; expected purity, entropy, det, det_power(k), \
                     lambda_variance or trace_power(k)"
                )))
            }
        }
    }
}

impl Serialize for Functional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Monte Carlo mean of one functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleEstimate {
    pub functional: Functional,
    pub n: usize,
    pub m: usize,
    pub count: u64,
    pub seed: u64,
    pub mean: f64,
    pub std_error: f64,
}

/// Estimates of several functionals from one pass, plus optionally every
/// rescaled eigenvalue `Nλ` in sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub estimates: Vec<EnsembleEstimate>,
    pub rescaled_eigenvalues: Vec<f64>,
}

struct Leaf {
    acc: Vec<Welford>,
    rescaled: Vec<f64>,
}

fn leaf_ranges(count: usize) -> Vec<(usize, usize)> {
    (0..count.div_ceil(LEAF))
        .map(|l| (l * LEAF, ((l + 1) * LEAF).min(count)))
        .collect()
}

/// Draws `config.sample_count` spectra and accumulates every functional.
pub fn run_ensemble(
    config: &SamplerConfig,
    functionals: &[Functional],
    keep_eigenvalues: bool,
) -> EnsembleRun {
    let dims = config.dims;
    let nf = dims.n() as f64;
    let leaves: Vec<Leaf> = leaf_ranges(config.sample_count)
        .into_par_iter()
        .with_min_len((config.chunk_size / LEAF).max(1))
        .map(|(start, end)| {
            let mut acc = vec![Welford::default(); functionals.len()];
            let mut rescaled = Vec::new();
            for i in start..end {
                let s = sample_spectrum(dims, &mut sample_rng(config.seed, i as u64));
                for (a, f) in acc.iter_mut().zip(functionals) {
                    a.push(f.evaluate(&s));
                }
                if keep_eigenvalues {
                    rescaled.extend(s.values().iter().map(|l| nf * l));
                }
            }
            Leaf { acc, rescaled }
        })
        .collect();

    let estimates = functionals
        .iter()
        .enumerate()
        .map(|(k, f)| {
            let parts: Vec<Welford> = leaves.iter().map(|l| l.acc[k]).collect();
            let w = tree_merge(&parts);
            EnsembleEstimate {
                functional: *f,
                n: dims.n(),
                m: dims.m(),
                count: w.count,
                seed: config.seed,
                mean: w.mean,
                std_error: w.std_error(),
            }
        })
        .collect();
    let rescaled_eigenvalues = leaves.into_iter().flat_map(|l| l.rescaled).collect();
    EnsembleRun {
        estimates,
        rescaled_eigenvalues,
    }
}

pub fn estimate(config: &SamplerConfig, functional: Functional) -> EnsembleEstimate {
    estimate_many(config, &[functional]).remove(0)
}

pub fn estimate_many(config: &SamplerConfig, functionals: &[Functional]) -> Vec<EnsembleEstimate> {
    run_ensemble(config, functionals, false).estimates
}

/// Every rescaled eigenvalue `Nλ` of every sample.
pub fn rescaled_eigenvalues(config: &SamplerConfig) -> Vec<f64> {
    run_ensemble(config, &[], true).rescaled_eigenvalues
}

/// `(mean, std_error)` of the `i`-th entry of each spectrum after shuffling
/// it with the sample's own stream.
pub fn position_means(config: &SamplerConfig) -> Vec<(f64, f64)> {
    let dims = config.dims;
    let n = dims.n();
    let leaves: Vec<Vec<Welford>> = leaf_ranges(config.sample_count)
        .into_par_iter()
        .with_min_len((config.chunk_size / LEAF).max(1))
        .map(|(start, end)| {
            let mut acc = vec![Welford::default(); n];
            for i in start..end {
                let mut rng = sample_rng(config.seed, i as u64);
                let mut v = sample_spectrum(dims, &mut rng).values().to_vec();
                v.shuffle(&mut rng);
                for (a, x) in acc.iter_mut().zip(v) {
                    a.push(x);
                }
            }
            acc
        })
        .collect();
    (0..n)
        .map(|k| {
            let parts: Vec<Welford> = leaves.iter().map(|l| l[k]).collect();
            let w = tree_merge(&parts);
            (w.mean, w.std_error())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub density: f64,
}

/// Unit-area histogram on `bins` uniform bins over `[0, max(4, max value)]`.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<HistogramBin>> {
    if bins < 10 {
        return Err(Error::Domain(format!(
            "histograms need at least 10 bins, got {bins}"
        )));
    }
    let top = values.iter().copied().fold(4.0, f64::max);
    let width = top / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in values {
        let b = ((v / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = values.len().max(1) as f64;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(b, c)| HistogramBin {
            bin_left: b as f64 * width,
            bin_right: if b + 1 == bins {
                top
            } else {
                (b + 1) as f64 * width
            },
            density: c as f64 / (total * width),
        })
        .collect())
}

/// Histogram of the rescaled eigenvalues `Nλ` over all samples.
pub fn histogram_rescaled(config: &SamplerConfig, bins: usize) -> Result<Vec<HistogramBin>> {
    if bins < 10 {
        return Err(Error::Domain(format!(
            "histograms need at least 10 bins, got {bins}"
        )));
    }
    histogram(&rescaled_eigenvalues(config), bins)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(n: usize, m: usize) -> BipartitionDims {
        BipartitionDims::new(n, m).unwrap()
    }

    #[test]
    fn single_level_is_always_pure() {
        let mut rng = sample_rng(3, 0);
        for _ in 0..10 {
            assert_eq!(sample_spectrum(dims(1, 5), &mut rng).values(), &[1.0]);
        }
    }

    #[test]
    fn raw_spectra_have_unit_trace() {
        for (n, m) in [(2, 2), (3, 7), (16, 16)] {
            for i in 0..50 {
                let ev = raw_eigenvalues(dims(n, m), &mut sample_rng(11, i));
                assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn functional_names_round_trip() {
        for f in [
            Functional::Purity,
            Functional::Entropy,
            Functional::Det,
            Functional::DetPower(3),
            Functional::LambdaVariance,
            Functional::TracePower(4),
        ] {
            assert_eq!(f.to_string().parse::<Functional>().unwrap(), f);
        }
        assert!(matches!(
            "energy".parse::<Functional>(),
            Err(Error::Domain(_))
        ));
        assert!("det_power(x)".parse::<Functional>().is_err());
    }

    #[test]
    fn chunking_does_not_change_results() {
        let d = dims(3, 4);
        let fs = [Functional::Purity, Functional::Entropy];
        let a = estimate_many(&SamplerConfig::with_chunk_size(d, 1000, 9, 1).unwrap(), &fs);
        let b = estimate_many(
            &SamplerConfig::with_chunk_size(d, 1000, 9, 10_000).unwrap(),
            &fs,
        );
        assert_eq!(a, b);
    }

    #[test]
    fn histogram_of_single_level() {
        let h = histogram_rescaled(&SamplerConfig::new(dims(1, 3), 50, 1).unwrap(), 10).unwrap();
        let area: f64 = h
            .iter()
            .map(|b| b.density * (b.bin_right - b.bin_left))
            .sum();
        assert!((area - 1.0).abs() < 1e-12);
        let hit: Vec<_> = h.iter().filter(|b| b.density > 0.0).collect();
        assert_eq!(hit.len(), 1);
        assert!(hit[0].bin_left <= 1.0 && 1.0 < hit[0].bin_right);
        assert!(histogram(&[1.0], 9).is_err());
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(SamplerConfig::new(dims(2, 2), 0, 1).is_err());
        assert!(SamplerConfig::with_chunk_size(dims(2, 2), 5, 1, 0).is_err());
    }
}
