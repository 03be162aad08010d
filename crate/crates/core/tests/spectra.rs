use ier_spectra::eigen::eigenvalues_symmetric;
use ier_spectra::ensembles::{sample_adjacency, EnsembleConfig};
use ier_spectra::linalg::SymMatrix;
use ier_spectra::spectra::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn moments_over_seeds(n: usize, lambda: f64, k: usize, seeds: std::ops::Range<u64>) -> Vec<f64> {
    seeds
        .map(|s| {
            let cfg = EnsembleConfig::homogeneous(n, lambda, s);
            let adj = sample_adjacency(&cfg).unwrap();
            normalized_trace_power(&adj, cfg.realize().unwrap().scale, k)
        })
        .collect()
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64)
}

#[test]
fn odd_sample_moments_shrink_with_n() {
    // only loops and cycles feed odd traces, both O(1/N) per vertex
    let small = mean_var(&moments_over_seeds(300, 4.0, 3, 0..40)).0.abs();
    let large = mean_var(&moments_over_seeds(2400, 4.0, 3, 0..40)).0.abs();
    assert!(large < 0.02, "{large}");
    assert!(large < small, "{large} vs {small}");
}

#[test]
fn fourth_trace_variance_decays() {
    let (_, v1) = mean_var(&moments_over_seeds(300, 5.0, 4, 0..60));
    let (_, v2) = mean_var(&moments_over_seeds(1200, 5.0, 4, 0..60));
    assert!(v1 / v2 >= 2.0, "{v1} / {v2}");
}

#[test]
fn sample_fourth_moment_decreases_along_lambda() {
    // closed 4-walks: two-edge trees give 2, one edge walked four times 1/λ,
    // and 4-cycles add λ²/N at finite size
    let n = 3000;
    let lambdas = [1.5, 3.0, 6.0];
    let m: Vec<f64> = lambdas.iter().map(|&l| mean_var(&moments_over_seeds(n, l, 4, 0..8)).0).collect();
    assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");
    for (l, got) in lambdas.iter().zip(&m) {
        let want = 2.0 + 1.0 / l + l * l / n as f64;
        assert!((got - want).abs() < 0.05, "λ = {l}: {got} vs {want}");
    }
}

#[test]
fn walk_traces_match_eigenvalue_moments() {
    let cfg = EnsembleConfig::homogeneous(700, 3.0, 4);
    let r = sample_spectrum(&cfg, &Binning::Bins(20)).unwrap();
    let adj = sample_adjacency(&cfg).unwrap();
    for k in 0..=6 {
        let a = empirical_moment(&r, k);
        let b = normalized_trace_power(&adj, r.metadata.scale, k);
        assert!((a - b).abs() < 1e-9 * b.abs().max(1.0), "k = {k}: {a} vs {b}");
    }
    assert_eq!(r.histogram.counts.iter().sum::<u64>(), 700);
}

#[test]
fn empirical_stieltjes_is_the_resolvent_trace() {
    let cfg = EnsembleConfig::homogeneous(300, 5.0, 2);
    let adj = sample_adjacency(&cfg).unwrap();
    let scale = cfg.realize().unwrap().scale;
    let r = SpectralReport::new(adjacency_eigenvalues(&adj, scale).unwrap(), &Binning::default(), Metadata::default()).unwrap();
    let res = Resolvent::from_adjacency(&adj, scale).unwrap();
    for z in [Complex64::new(0.0, 1.0), Complex64::new(-1.3, 0.2)] {
        let tr: Complex64 = res.diagonal(z).unwrap().iter().sum::<Complex64>() / 300.0;
        assert!((tr - empirical_stieltjes(&r, z).unwrap()).norm() < 1e-10);
    }
    assert!(empirical_stieltjes(&r, Complex64::new(0.0, -1.0)).is_err());
}

fn small_symmetric() -> impl Strategy<Value = SymMatrix> {
    (2usize..12).prop_flat_map(|n| {
        proptest::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| SymMatrix::from_lower(n, |i, j| v[i * n + j]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn levy_distance_is_a_bounded_symmetric_gap(
        a in proptest::collection::vec(-3.0f64..3.0, 1..40),
        b in proptest::collection::vec(-3.0f64..3.0, 1..40),
        c in -0.5f64..0.5,
    ) {
        let mut a = a;
        let mut b = b;
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let d = levy_distance_sorted(&a, &b);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - levy_distance_sorted(&b, &a)).abs() < 1e-12);
        prop_assert_eq!(levy_distance_sorted(&a, &a), 0.0);
        let shifted: Vec<f64> = a.iter().map(|x| x + c).collect();
        prop_assert!(levy_distance_sorted(&a, &shifted) <= c.abs() + 1e-9);
    }

    #[test]
    fn cubed_levy_distance_is_below_hoffman_wielandt(a in small_symmetric(), seed in any::<u64>()) {
        let n = a.n();
        let mut s = seed | 1;
        let b = SymMatrix::from_lower(n, |i, j| {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            a.get(i, j) + ((s >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 0.4
        });
        let d = levy_distance_sorted(&eigenvalues_symmetric(&a).unwrap(), &eigenvalues_symmetric(&b).unwrap());
        prop_assert!(d.powi(3) <= hw_bound(&a, &b).unwrap() + 1e-12);
    }

    #[test]
    fn sparse_bound_matches_dense_bound(n in 2usize..40, seed in any::<u64>()) {
        let a = sample_adjacency(&EnsembleConfig::homogeneous(n, 3.0, seed)).unwrap();
        let b = sample_adjacency(&EnsembleConfig::homogeneous(n, 3.0, seed ^ 0x55)).unwrap();
        let dense = hw_bound(&a.to_dense(1.5), &b.to_dense(2.5)).unwrap();
        let sparse = hw_bound_adjacency(&a, 1.5, &b, 2.5).unwrap();
        prop_assert!((dense - sparse).abs() < 1e-12 * dense.max(1.0));
    }

    #[test]
    fn histograms_cover_every_value(v in proptest::collection::vec(-10.0f64..10.0, 1..300), bins in 1usize..50) {
        let mut v = v;
        v.sort_by(f64::total_cmp);
        for binning in [Binning::Bins(bins), Binning::FreedmanDiaconis, Binning::Width(0.7)] {
            let h = Histogram::new(&v, &binning).unwrap();
            prop_assert_eq!(h.counts.iter().sum::<u64>() as usize, v.len());
            prop_assert!(h.edges.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(h.edges.len(), h.counts.len() + 1);
        }
    }
}
