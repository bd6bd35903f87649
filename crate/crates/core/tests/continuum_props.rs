use proptest::prelude::*;
use typent::continuum::{canonical_energy_scaling_check, finite_n_convergence, ContinuumDensity};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semicircle_mass_and_mean(beta in 2.0f64..200.0) {
        let d = ContinuumDensity::semicircle(beta).unwrap();
        let (m0, m1, m2) = d.moments().unwrap();
        prop_assert!((m0 - 1.0).abs() <= 1e-8);
        prop_assert!((m1 - 1.0).abs() <= 1e-8);
        prop_assert!((m2 - d.rescaled_purity).abs() <= 1e-8);
    }

    #[test]
    fn semicircle_is_symmetric_about_one(beta in 2.0f64..200.0, t in 0.0f64..1.0) {
        let d = ContinuumDensity::semicircle(beta).unwrap();
        let x = t * (d.lambda_plus - 1.0);
        let (a, b) = (d.density_value(1.0 + x), d.density_value(1.0 - x));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert!((d.cdf(1.0 + x) + d.cdf(1.0 - x) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn tricomi_holds_across_beta(beta in 2.0f64..100.0) {
        let d = ContinuumDensity::semicircle(beta).unwrap();
        let w = d.lambda_plus - d.lambda_minus;
        let grid: Vec<f64> = (1..=21).map(|k| d.lambda_minus + w * k as f64 / 22.0).collect();
        prop_assert!(d.tricomi_residual(&grid).unwrap() <= 1e-6);
        prop_assert!((d.implied_zeta().unwrap() + 2.0 * beta).abs() <= 1e-6 * beta);
    }
}

#[test]
fn support_touches_origin_at_critical_beta() {
    let d = ContinuumDensity::semicircle(2.0).unwrap();
    assert_eq!(d.lambda_minus, 0.0);
    assert!(
        ContinuumDensity::semicircle(2.0 + 1e-9)
            .unwrap()
            .lambda_minus
            > 0.0
    );
}

#[test]
fn convergence_is_monotone_at_beta_ten() {
    let rows = finite_n_convergence(&[32, 64, 128], 10.0).unwrap();
    assert!(
        rows.windows(2).all(|w| w[1].ks_distance < w[0].ks_distance),
        "{rows:?}"
    );
}

#[test]
fn convergence_refines_from_small_sizes() {
    let rows = finite_n_convergence(&[4, 64], 2.0).unwrap();
    assert!(rows[0].ks_distance > rows[1].ks_distance);
}

#[test]
fn extensive_energy_scaling() {
    for n in [64, 128, 256] {
        for beta in [2.0, 4.0, 10.0] {
            let r = canonical_energy_scaling_check(n, beta).unwrap();
            assert!(r.within_bounds, "{r:?}");
        }
    }
    let r = canonical_energy_scaling_check(128, 4.0).unwrap();
    assert!((r.ratio_to_continuum - 1.0).abs() < 0.01);
}
