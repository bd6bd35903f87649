//! Streaming moments and empirical-distribution distances.

use serde::{Deserialize, Serialize};

/// Welford running mean/variance that can be merged (Chan et al.).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Welford {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Self {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    /// Sample standard deviation over `√count`.
    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

/// Merges accumulators with a balanced binary tree whose shape depends only
/// on `parts.len()`.
pub fn tree_merge(parts: &[Welford]) -> Welford {
    match parts.len() {
        0 => Welford::default(),
        1 => parts[0],
        n => {
            let (l, r) = parts.split_at(n / 2);
            tree_merge(l).merge(&tree_merge(r))
        }
    }
}

/// Kolmogorov (sup-CDF) distance between the equal-weight atomic measure on
/// `sorted` and a continuous CDF.
pub fn ks_distance_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut worst: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        // Ties form a single jump.
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let f = cdf(sorted[i]);
        worst = worst
            .max((f - i as f64 / n).abs())
            .max((f - (j + 1) as f64 / n).abs());
        i = j + 1;
    }
    worst
}
