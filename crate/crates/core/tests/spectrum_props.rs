use proptest::prelude::*;
use typent::spectrum::majorization_compare;
use typent::{Majorization, Spectrum};

fn spectrum_of(n: usize) -> impl Strategy<Value = Spectrum> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("needs positive mass", |raw| {
        let s: f64 = raw.iter().sum();
        (s > 0.0).then(|| {
            let mut v: Vec<f64> = raw.iter().map(|x| x / s).collect();
            // Put rounding drift on the largest entry so the sum is 1.
            let drift = 1.0 - v.iter().sum::<f64>();
            let i = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
            v[i] += drift;
            Spectrum::new(v).unwrap()
        })
    })
}

fn pair() -> impl Strategy<Value = (Spectrum, Spectrum)> {
    (1usize..=12).prop_flat_map(|n| (spectrum_of(n), spectrum_of(n)))
}

proptest! {
    #[test]
    fn ordering_and_bounds(s in (1usize..=30).prop_flat_map(spectrum_of)) {
        let v = s.values();
        prop_assert!(v.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((v.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let n = v.len() as f64;
        let p = s.purity();
        prop_assert!(p >= 1.0 / n - 1e-12 && p <= 1.0 + 1e-12);
        prop_assert!(s.determinant() >= 0.0);
    }

    #[test]
    fn purity_from_second_invariant(s in (1usize..=30).prop_flat_map(spectrum_of)) {
        let e = s.elementary_invariants();
        prop_assert!((e[0] - 1.0).abs() <= 1e-12);
        let s2 = e.get(1).copied().unwrap_or(0.0);
        prop_assert!((s.purity() - (1.0 - 2.0 * s2)).abs() <= 1e-12);
        prop_assert!((e[e.len() - 1] - s.values().iter().product::<f64>()).abs() <= 1e-15);
    }

    #[test]
    fn purity_respects_majorization((a, b) in pair()) {
        match majorization_compare(&a, &b).unwrap() {
            Majorization::AMajorizedByB => prop_assert!(a.purity() <= b.purity() + 1e-12),
            Majorization::BMajorizedByA => prop_assert!(b.purity() <= a.purity() + 1e-12),
            Majorization::Equal => prop_assert!((a.purity() - b.purity()).abs() <= 1e-12),
            Majorization::Incomparable => {}
        }
    }

    #[test]
    fn extremes_bracket_every_spectrum(s in (1usize..=20).prop_flat_map(spectrum_of)) {
        let n = s.len();
        let mixed = Spectrum::maximally_mixed(n).unwrap();
        let pure = Spectrum::pure(n).unwrap();
        prop_assert!(matches!(
            majorization_compare(&mixed, &s).unwrap(),
            Majorization::AMajorizedByB | Majorization::Equal
        ));
        prop_assert!(matches!(
            majorization_compare(&s, &pure).unwrap(),
            Majorization::AMajorizedByB | Majorization::Equal
        ));
    }

    #[test]
    fn entropy_vanishes_only_for_rank_one(s in (1usize..=20).prop_flat_map(spectrum_of)) {
        let zero = s.von_neumann_entropy() <= 1e-12;
        prop_assert_eq!(zero, s.schmidt_number() == 1);
    }

    #[test]
    fn json_round_trip_is_exact(s in (1usize..=20).prop_flat_map(spectrum_of)) {
        let json = serde_json::to_string(&s).unwrap();
        let back: Spectrum = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(Spectrum::from_csv_row(&s.to_csv_row()).unwrap(), s);
    }
}
