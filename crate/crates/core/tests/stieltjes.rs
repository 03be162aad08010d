use ier_spectra::ensembles::{sample_adjacency, EnsembleConfig};
use ier_spectra::kernels::{Kernel, Profile, WeightModel};
use ier_spectra::moments::limiting_moment;
use ier_spectra::spectra::{adjacency_eigenvalues, empirical_stieltjes, Binning, Metadata, SpectralReport};
use ier_spectra::stieltjes::*;
use num_complex::Complex64;
use proptest::prelude::*;

/// `-Σ_k m_k z^{-k-1}` from the partition moments, truncated at order 12.
fn moment_series(z: Complex64, lambda: f64, f: &Kernel, mu: &WeightModel) -> Complex64 {
    (0..=12)
        .step_by(2)
        .map(|k| {
            let m = if k == 0 { 1.0 } else { limiting_moment(k, lambda, f, mu).unwrap().value };
            -m / z.powu(k as u32 + 1)
        })
        .sum()
}

#[test]
fn fixed_point_matches_the_moment_series_far_from_the_axis() {
    let z = Complex64::new(0.0, 6.0);
    let cases = [
        (Kernel::Constant(1.0), WeightModel::dirac(1.0).unwrap(), 2.0),
        (Kernel::Rank1(Profile::Saturating), WeightModel::discrete(vec![0.5, 2.0], vec![0.5, 0.5]).unwrap(), 3.0),
        (Kernel::ChungLu, WeightModel::discrete(vec![0.2, 0.6, 1.0], vec![0.3, 0.3, 0.4]).unwrap(), 8.0),
    ];
    for (f, mu, lambda) in cases {
        let sparse = stieltjes_sparse(&SolverConfig::new(z, lambda), &f, &mu).unwrap();
        let series = moment_series(z, lambda, &f, &mu);
        assert!((sparse - series).norm() < 1e-6, "{f:?}: {sparse} vs {series}");
    }
}

#[test]
fn sparse_transform_matches_sampled_spectra() {
    let (n, lambda) = (3000, 4.0);
    let z = Complex64::new(0.3, 0.5);
    let mut mean = Complex64::new(0.0, 0.0);
    let seeds = 4;
    for s in 0..seeds {
        let cfg = EnsembleConfig::homogeneous(n, lambda, s);
        let vals = adjacency_eigenvalues(&sample_adjacency(&cfg).unwrap(), cfg.realize().unwrap().scale).unwrap();
        let r = SpectralReport::new(vals, &Binning::Bins(10), Metadata::default()).unwrap();
        mean += empirical_stieltjes(&r, z).unwrap();
    }
    mean /= seeds as f64;
    let limit = stieltjes_sparse(&SolverConfig::new(z, lambda), &Kernel::Constant(1.0), &WeightModel::dirac(1.0).unwrap()).unwrap();
    assert!((mean - limit).norm() < 0.02, "{mean} vs {limit}");
}

#[test]
fn sparse_transform_tends_to_dense_at_rate_one_over_lambda() {
    let f = Kernel::Rank1(Profile::Linear(1.0));
    let mu = WeightModel::discrete(vec![0.5, 1.0, 1.5], vec![0.25, 0.5, 0.25]).unwrap();
    let z = Complex64::new(0.4, 1.5);
    let dense = stieltjes_dense(z, &f, &mu).unwrap().stieltjes;
    let gaps: Vec<f64> = [5.0, 50.0, 500.0]
        .iter()
        .map(|&l| (stieltjes_sparse(&SolverConfig::new(z, l), &f, &mu).unwrap() - dense).norm())
        .collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(gaps[2] * 500.0 < 2.0 * gaps[0] * 5.0, "{gaps:?}");
}

#[test]
fn sparse_density_has_unit_mass() {
    let eta = 0.1;
    let xs: Vec<f64> = (0..=80).map(|i| -8.0 + 0.2 * i as f64).collect();
    let f = Kernel::Constant(1.0);
    let mu = WeightModel::dirac(1.0).unwrap();
    let d = density_from_stieltjes(|z| stieltjes_sparse(&SolverConfig::new(z, 6.0), &f, &mu), &xs, eta).unwrap();
    // Simpson's rule; the Cauchy smoothing leaves about 2η/(8π) outside [-8, 8]
    let h = 0.2;
    let mass: f64 = d
        .iter()
        .enumerate()
        .map(|(i, v)| v * if i == 0 || i == d.len() - 1 { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum::<f64>()
        * h
        / 3.0;
    assert!((mass - 1.0).abs() < 0.02, "{mass}");
}

#[test]
fn dense_semicircle_and_density() {
    let (f, mu) = (Kernel::Constant(1.0), WeightModel::dirac(1.0).unwrap());
    for z in [Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.5), Complex64::new(-2.5, 0.1)] {
        let s = stieltjes_dense(z, &f, &mu).unwrap().stieltjes;
        assert!((s - semicircle_stieltjes(z)).norm() < 1e-9, "{z}");
    }
    let m = moments_from_stieltjes(|z| Ok(semicircle_stieltjes(z)), 3.0, 200, 8).unwrap();
    for (k, want) in [(0, 1.0), (2, 1.0), (4, 2.0), (6, 5.0), (8, 14.0)] {
        assert!((m[k] - want).abs() < 1e-9, "m{k} = {}", m[k]);
    }
}

#[test]
fn limit_resolvent_functional_edges() {
    let cfg = SolverConfig::new(Complex64::new(0.0, 1.0), 5.0);
    let sol = SparseSolution::solve(&cfg, &Kernel::Constant(1.0), &WeightModel::dirac(1.0).unwrap()).unwrap();
    assert_eq!(sol.limit_gn(0.0).unwrap(), Complex64::new(1.0, 0.0));
    assert!(sol.limit_gn(1.5).is_err());
    // d/du G(u) at 0 is ι St
    let h = 1e-6;
    let slope = (sol.limit_gn(h).unwrap() - 1.0) / h;
    assert!((slope - Complex64::i() * sol.stieltjes()).norm() < 1e-3);
    assert!(sol.max_exponential() <= 1.0 + 1e-9);
}

#[test]
fn bad_inputs_are_rejected() {
    let (f, mu) = (Kernel::Constant(1.0), WeightModel::dirac(1.0).unwrap());
    assert!(stieltjes_sparse(&SolverConfig::new(Complex64::new(0.0, -1.0), 2.0), &f, &mu).is_err());
    assert!(stieltjes_sparse(&SolverConfig::new(Complex64::new(0.0, 1.0), -2.0), &f, &mu).is_err());
    let mut short = SolverConfig::new(Complex64::new(0.0, 1.0), 2.0);
    short.max_iter = 2;
    assert!(matches!(stieltjes_sparse(&short, &f, &mu), Err(ier_spectra::Error::Convergence { .. })));
    assert!(density_from_stieltjes(|z| Ok(semicircle_stieltjes(z)), &[0.0], 0.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sparse_transform_is_a_stieltjes_transform(x in -3.0f64..3.0, eta in 0.5f64..3.0, lambda in 0.5f64..40.0) {
        let z = Complex64::new(x, eta);
        let s = stieltjes_sparse(&SolverConfig::new(z, lambda), &Kernel::Grg, &WeightModel::discrete(vec![0.5, 1.5], vec![0.5, 0.5]).unwrap()).unwrap();
        prop_assert!(s.im > 0.0);
        prop_assert!(s.norm() <= 1.0 / eta + 1e-9);
        // symmetric spectrum: St(-z̄) = -conj St(z)
        let m = stieltjes_sparse(&SolverConfig::new(Complex64::new(-x, eta), lambda), &Kernel::Grg, &WeightModel::discrete(vec![0.5, 1.5], vec![0.5, 0.5]).unwrap()).unwrap();
        prop_assert!((m + s.conj()).norm() < 1e-8);
    }

    #[test]
    fn exponential_identity_holds(u in 0.01f64..1.0, x in -3.0f64..3.0, eta in 0.5f64..3.0) {
        prop_assert!(verify_exponential_identity(u, Complex64::new(x, eta)).unwrap() < 1e-6);
    }
}
