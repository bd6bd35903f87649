use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use typent::closedform::{
    det_moment, log_normalization, mean_moments, typical_invariant, typical_purity,
    typical_purity_from_multiplier,
};
use typent::coulomb::trace_inverse;
use typent::orthopoly::{laguerre_zeros, LaguerreSpec};
use typent::quadrature::integrate;
use typent::{BipartitionDims, Spectrum};

fn int(k: usize) -> BigInt {
    BigInt::from(k)
}

fn rat(p: usize, q: usize) -> BigRational {
    BigRational::new(int(p), int(q))
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * int(j))
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `c_ν = ξ^ν/ν! · C(M−1, N−ν)` with `ξ = N(M−1)`.
fn coefficient(n: usize, m: usize, nu: usize) -> BigRational {
    let xi = int(n * (m - 1));
    BigRational::new(
        num_traits::pow(xi, nu) * binomial(m - 1, n - nu),
        factorial(nu),
    )
}

#[test]
fn purity_identities_hold_exactly() {
    for m in 2..=50 {
        for n in 2..m {
            let closed = rat(n + m - 2, n * (m - 1));
            let multiplier = rat(2 * (n - 1) + (m - n), n * (m - 1));
            assert_eq!(closed, multiplier, "({n}, {m})");

            let ratio = coefficient(n, m, n - 2) / coefficient(n, m, n);
            let vieta = BigRational::one() - ratio * BigRational::from_integer(int(2));
            assert_eq!(vieta, closed, "({n}, {m})");

            // s_2 from the closed form for the invariants.
            let s2 = BigRational::new(
                factorial(n) * factorial(m - 1),
                int(2) * factorial(n - 2) * factorial(m - 3) * num_traits::pow(int(n * (m - 1)), 2),
            );
            assert_eq!(
                BigRational::one() - s2 * BigRational::from_integer(int(2)),
                closed
            );

            let dims = BipartitionDims::new(n, m).unwrap();
            assert_eq!(typical_purity(dims), closed.to_f64().unwrap());
            assert_eq!(typical_purity(dims), typical_purity_from_multiplier(dims));
        }
    }
}

#[test]
fn trace_inverse_holds_exactly() {
    for m in 2..=50 {
        for n in 1..m {
            // Σ 1/λ_i = c_1 / c_0 for a polynomial Σ c_ν (−x)^ν.
            let vieta = coefficient(n, m, 1) / coefficient(n, m, 0);
            let closed = rat(n * n * (m - 1), m - n);
            assert_eq!(vieta, closed, "({n}, {m})");
            let dims = BipartitionDims::new(n, m).unwrap();
            assert_eq!(trace_inverse(dims).unwrap(), closed.to_f64().unwrap());
        }
    }
}

#[test]
fn trace_inverse_over_zeros() {
    for m in 2..=50 {
        for n in 1..m {
            let dims = BipartitionDims::new(n, m).unwrap();
            let z = laguerre_zeros(&LaguerreSpec::typical(dims).unwrap()).unwrap();
            let s: f64 = z.iter().map(|x| 1.0 / x).sum();
            let want = trace_inverse(dims).unwrap();
            assert!((s - want).abs() <= 1e-8 * want, "({n}, {m}): {s} vs {want}");
        }
    }
}

#[test]
fn invariants_match_laguerre_spectrum() {
    for n in 1..=12 {
        for m in n + 1..=n + 15 {
            let dims = BipartitionDims::new(n, m).unwrap();
            let z = laguerre_zeros(&LaguerreSpec::typical(dims).unwrap()).unwrap();
            let e = Spectrum::new(z).unwrap().elementary_invariants();
            for k in 1..=n {
                let want = typical_invariant(dims, k).unwrap();
                assert!(
                    (e[k - 1] - want).abs() <= 1e-8 * want,
                    "({n}, {m}) s_{k}: {} vs {want}",
                    e[k - 1]
                );
            }
        }
    }
}

#[test]
fn balanced_invariants_match_reduced_spectrum() {
    for n in 2..=10 {
        let dims = BipartitionDims::balanced(n).unwrap();
        let reduced = BipartitionDims::new(n - 1, n + 1).unwrap();
        let mut z = laguerre_zeros(&LaguerreSpec::typical(reduced).unwrap()).unwrap();
        z.push(0.0);
        let e = Spectrum::new(z).unwrap().elementary_invariants();
        for k in 1..=n {
            let want = typical_invariant(dims, k).unwrap();
            assert!(
                (e[k - 1] - want).abs() <= 1e-8 * want.max(1e-300),
                "N = {n}, s_{k}"
            );
        }
    }
}

#[test]
fn mean_and_mode_differ_by_order_one_over_nm() {
    for n in 1..=100 {
        for m in n..=100 {
            let dims = BipartitionDims::new(n, m).unwrap();
            let diff = typical_purity(dims) - mean_moments(dims).mean_purity;
            assert!(diff.abs() * (n * m) as f64 <= 4.0, "({n}, {m}): {diff}");
        }
    }
}

#[test]
fn normalization_matches_exact_factorials() {
    for m in 1..=20 {
        for n in 1..=m {
            let mut den = BigInt::one();
            for j in 1..=n {
                den *= factorial(m - j) * factorial(n - j + 1);
            }
            let c = BigRational::new(factorial(n * m - 1), den);
            let exact = c.to_f64().unwrap().ln();
            let dims = BipartitionDims::new(n, m).unwrap();
            assert!((log_normalization(dims) - exact).abs() <= 1e-10 * exact.abs().max(1.0));
        }
    }
}

#[test]
fn det_moment_matches_simplex_integral() {
    // N = 2, M = 2: λ = (x, 1−x) with density 3(2x−1)² on [0, 1].
    let dims = BipartitionDims::new(2, 2).unwrap();
    let pdf_mass = integrate(|x| 3.0 * (2.0 * x - 1.0).powi(2), 0.0, 1.0, 1e-14, 1e-14).unwrap();
    assert!((pdf_mass.value - 1.0).abs() < 1e-13);
    for k in 1..=4 {
        let exact = integrate(
            |x| 3.0 * (2.0 * x - 1.0).powi(2) * (x * (1.0 - x)).powi(k as i32),
            0.0,
            1.0,
            1e-15,
            1e-14,
        )
        .unwrap();
        assert!((det_moment(dims, k) - exact.value).abs() < 1e-12, "k = {k}");
    }
    let purity = integrate(
        |x| 3.0 * (2.0 * x - 1.0).powi(2) * (x * x + (1.0 - x) * (1.0 - x)),
        0.0,
        1.0,
        1e-15,
        1e-14,
    )
    .unwrap();
    assert!((purity.value - mean_moments(dims).mean_purity).abs() < 1e-13);
}
