use asnr_lab::experiments::{amplitude_sweep, SweepConfig};
use asnr_lab::lineshape::measure_fwhm;
use asnr_lab::roc::{auc, roc_curve, tau_grid};
use asnr_lab::table::{Cell, ResultTable};
use asnr_lab::{
    asnr, extract_roi, extract_roi_2d, psnr, Dim, Family, LineshapeSpec, NoiseModel, RoiMask, SpectralGrid,
    VoigtConfig,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Gaussian), Just(Family::Lorentzian), Just(Family::Voigt)]
}

fn template(f: Family, bins: f64) -> Vec<f64> {
    let grid = SpectralGrid::default_1d();
    LineshapeSpec::from_bins(f, 1.0, bins, &grid)
        .evaluate(&grid, &VoigtConfig::default())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roi_is_scale_invariant(f in family(), bins in 1.0f64..80.0, scale in 1e-3f64..1e3, eta in 0.05f64..0.95) {
        let s = template(f, bins);
        let scaled: Vec<f64> = s.iter().map(|v| v * scale).collect();
        prop_assert_eq!(extract_roi(&s, eta).unwrap().indices, extract_roi(&scaled, eta).unwrap().indices);
    }

    #[test]
    fn roi_shrinks_with_eta(f in family(), bins in 1.0f64..80.0, a in 0.05f64..0.95, b in 0.05f64..0.95) {
        let s = template(f, bins);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let big = extract_roi(&s, lo).unwrap();
        let small = extract_roi(&s, hi).unwrap();
        prop_assert!(small.indices.iter().all(|i| big.contains(*i)));
    }

    #[test]
    fn roi_2d_is_scale_invariant(f in family(), px in 1.0f64..20.0, scale in 0.01f64..100.0) {
        let g = SpectralGrid::default_2d();
        let s = asnr_lab::lineshape::eval_2d(&g, &LineshapeSpec::from_bins(f, 1.0, px, &g), &VoigtConfig::default()).unwrap();
        let scaled: Vec<f64> = s.iter().map(|v| v * scale).collect();
        let n = g.points_per_axis();
        prop_assert_eq!(extract_roi_2d(&s, n, 0.5).unwrap().indices, extract_roi_2d(&scaled, n, 0.5).unwrap().indices);
    }

    #[test]
    fn asnr_is_linear(seed in any::<u64>(), a in -5.0f64..5.0, b in -5.0f64..5.0, bins in 2.0f64..60.0) {
        let grid = SpectralGrid::default_1d();
        let s = template(Family::Gaussian, bins);
        let roi = extract_roi(&s, 0.5).unwrap();
        let n = NoiseModel::unit(seed);
        let (x, y) = (n.sample(&grid, 0), n.sample(&grid, 1));
        let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let lhs = asnr(&z, &roi, 1.0).unwrap();
        let rhs = a * asnr(&x, &roi, 1.0).unwrap() + b * asnr(&y, &roi, 1.0).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn one_bin_roi_gives_signed_peak(v in -100.0f64..100.0, sigma in 0.1f64..10.0) {
        let y = [0.0, v, 0.0];
        let m = RoiMask::single(1, Dim::One, 3);
        prop_assert_eq!(asnr(&y, &m, sigma).unwrap(), v / sigma);
        prop_assert_eq!(psnr(&y, 1, sigma).unwrap(), v.abs() / sigma);
    }

    #[test]
    fn templates_are_symmetric(f in family(), bins in 1.0f64..100.0) {
        let s = template(f, bins);
        let n = s.len();
        for i in 0..n / 2 {
            prop_assert!((s[i] - s[n - 1 - i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn auc_matches_pairwise_rank(h0 in prop::collection::vec(0.0f64..8.0, 20..200), h1 in prop::collection::vec(0.0f64..8.0, 20..200)) {
        let c = roc_curve(&h0, &h1, &tau_grid(0.0, 10.0, 0.05)).unwrap();
        let mut wins = 0.0;
        for a in &h1 {
            for b in &h0 {
                wins += if a > b { 1.0 } else if a == b { 0.5 } else { 0.0 };
            }
        }
        let rank = wins / (h0.len() * h1.len()) as f64;
        prop_assert!((c.auc - rank).abs() <= 0.01, "{} vs {}", c.auc, rank);
        prop_assert!(c.fpr.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(c.tpr.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn auc_in_unit_interval(pts in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0), 2..50)) {
        let mut pts = pts;
        pts.push((0.0, 0.0));
        pts.push((1.0, 1.0));
        let a = auc(&pts).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn table_csv_round_trip(vals in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..40), text in "[a-z ,\"]{0,12}") {
        let mut t = ResultTable::new("prop", &["label", "value"]);
        for v in &vals {
            let label = if text.is_empty() { Cell::Missing } else { Cell::Text(format!("x{text}")) };
            t.push(vec![label, Cell::Num(*v)]);
        }
        t.set_meta("seed", 1);
        let back = ResultTable::parse_csv(&t.to_csv_string().unwrap()).unwrap();
        prop_assert_eq!(&back, &t);
        let back = ResultTable::parse_json(&t.to_json_string().unwrap()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn noise_windows_are_consistent(seed in any::<u64>(), trial in 0u64..1000, a in 0usize..4000, len in 1usize..200) {
        let n = NoiseModel::unit(seed);
        let full = n.window(trial, 0..4001);
        let b = (a + len).min(4001);
        prop_assert_eq!(n.window(trial, a..b), full[a..b].to_vec());
    }
}

#[test]
fn fwhm_round_trip_all_families() {
    let grid = SpectralGrid::default_1d();
    for f in Family::ALL {
        for fwhm in [0.03, 0.1, 0.5] {
            let s = LineshapeSpec::new(f, 1.0, fwhm).evaluate(&grid, &VoigtConfig::default()).unwrap();
            let m = measure_fwhm(&s, grid.spacing()).unwrap();
            assert!((m - fwhm).abs() <= 0.5 * grid.spacing(), "{f} {fwhm}: {m}");
        }
    }
}

#[test]
fn sweep_is_thread_count_independent() {
    let cfg = SweepConfig {
        n_mc: 200,
        n_repeats: 2,
        ..SweepConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| serde_json::to_string(&amplitude_sweep(&cfg).unwrap()).unwrap())
    };
    assert_eq!(run(1), run(3));
}
