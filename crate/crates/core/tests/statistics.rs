use approx::assert_abs_diff_eq;
use pmatch_core::evaluation::{
    aggregate_runs, standard_error, t_cdf, t_ppf, ConfusionCounts, Metrics,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

#[test]
fn quantiles_agree_with_statrs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let p: f64 = rng.gen_range(0.001..0.999);
        let df: usize = rng.gen_range(1..200);
        let oracle = StudentsT::new(0.0, 1.0, df as f64).unwrap().inverse_cdf(p);
        let ours = t_ppf(p, df).unwrap();
        assert_abs_diff_eq!(ours, oracle, epsilon = 1e-6 * oracle.abs().max(1.0));
        let cdf_oracle = StudentsT::new(0.0, 1.0, df as f64).unwrap().cdf(ours);
        assert_abs_diff_eq!(t_cdf(ours, df as f64), cdf_oracle, epsilon = 1e-10);
    }
}

#[test]
fn normal_limit() {
    let z = Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.975);
    assert_abs_diff_eq!(z, 1.959_963_984_540_054, epsilon = 1e-9);
    let t = t_ppf(0.975, 100_000).unwrap();
    assert_abs_diff_eq!(t, 1.9600, epsilon = 1e-4);
    assert!(t > z);
    assert_abs_diff_eq!(t, 1.959_987_707_534_609_3, epsilon = 1e-8);
}

#[test]
fn decreasing_toward_normal_quantile() {
    let z = 1.959_963_984_540_054;
    let mut prev = f64::INFINITY;
    for df in [1, 2, 3, 5, 10, 19, 50, 100, 1000, 10_000] {
        let t = t_ppf(0.975, df).unwrap();
        assert!(t < prev && t > z, "df {df}: {t}");
        prev = t;
    }
}

proptest! {
    #[test]
    fn ppf_symmetric_and_monotone(p in 0.0005f64..0.9995, dp in 1e-4f64..0.1, df in 1usize..500) {
        let x = t_ppf(p, df).unwrap();
        prop_assert!((x + t_ppf(1.0 - p, df).unwrap()).abs() <= 1e-9 * x.abs().max(1.0));
        let q = (p + dp).min(0.9999);
        if q > p {
            prop_assert!(t_ppf(q, df).unwrap() > x);
        }
    }

    #[test]
    fn cdf_roundtrip(p in 1e-6f64..(1.0 - 1e-6), df in 1usize..10_000) {
        let x = t_ppf(p, df).unwrap();
        prop_assert!((t_cdf(x, df as f64) - p).abs() < 1e-6);
    }

    #[test]
    fn standard_error_linear(sigma in 0.0f64..10.0, c in 0.0f64..100.0, n in 2usize..50, conf in 0.5f64..0.999) {
        let base = standard_error(sigma, n, conf).unwrap();
        let scaled = standard_error(c * sigma, n, conf).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-9 * scaled.abs().max(1.0));
        prop_assert!(base >= 0.0);
    }

    #[test]
    fn metric_identities(tp in 0usize..1000, fp in 0usize..1000, tn in 0usize..1000, fn_ in 0usize..1000) {
        let m = Metrics::<f64>::from_counts(&ConfusionCounts { tp, fp, tn, fn_ });
        for v in [m.accuracy, m.precision, m.recall, m.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        if m.precision + m.recall > 0.0 {
            let f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
            prop_assert!((m.f1 - f1).abs() < 1e-15);
        } else {
            prop_assert_eq!(m.f1, 0.0);
        }
    }

    #[test]
    fn identical_runs_zero_error(f1 in 0.0f64..1.0, n in 2usize..10) {
        let run = Metrics { accuracy: f1, precision: f1, recall: f1, f1 };
        let agg = aggregate_runs(&vec![run; n], 0.95).unwrap();
        prop_assert_eq!(agg.std_err_f1, 0.0);
        prop_assert_eq!(agg.n, n);
    }
}

#[test]
fn f32_path_matches_f64() {
    let a = t_ppf(0.975_f32, 19).unwrap();
    assert_abs_diff_eq!(a as f64, 2.093_024_054_408_263, epsilon = 1e-4);
    let agg = aggregate_runs(
        &[0.80_f32, 0.82, 0.84, 0.86].map(|f1| Metrics { accuracy: f1, precision: f1, recall: f1, f1 }),
        0.95,
    )
    .unwrap();
    assert_abs_diff_eq!(agg.std_err_f1 as f64, 0.082_170_410_270_435_1, epsilon = 1e-5);
}
