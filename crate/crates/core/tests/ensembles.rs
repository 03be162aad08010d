use ier_spectra::ensembles::*;
use ier_spectra::kernels::{Kernel, Profile, WeightModel};
use proptest::prelude::*;

#[test]
fn homogeneous_edge_counts_are_binomial() {
    let (n, lambda) = (1500usize, 4.0);
    let pairs = (n * (n + 1) / 2) as f64;
    let p = lambda / n as f64;
    let (mean, sd) = (pairs * p, (pairs * p * (1.0 - p)).sqrt());
    let counts: Vec<f64> = (0..30)
        .map(|s| sample_adjacency(&EnsembleConfig::homogeneous(n, lambda, s)).unwrap().num_edges() as f64)
        .collect();
    let avg = counts.iter().sum::<f64>() / counts.len() as f64;
    let var = counts.iter().map(|c| (c - avg).powi(2)).sum::<f64>() / (counts.len() - 1) as f64;
    assert!((avg - mean).abs() < 4.0 * sd / (counts.len() as f64).sqrt(), "{avg} vs {mean}");
    // sample variance of 30 draws lies within a factor 2 of the truth with overwhelming probability
    assert!(var > sd * sd / 2.0 && var < sd * sd * 2.0, "{var} vs {}", sd * sd);
}

#[test]
fn expected_edges_match_the_probability_sum() {
    let f = Kernel::FiniteRank(vec![Profile::Saturating, Profile::Linear(1.0)]);
    let cfg = EnsembleConfig::generic(1200, 6.0, f, WeightModel::uniform01(), 3);
    let e = cfg.realize().unwrap();
    let (mut mean, mut var) = (0.0, 0.0);
    for i in 0..e.n {
        for j in i..e.n {
            let p = e.p(i, j);
            mean += p;
            var += p * (1.0 - p);
        }
    }
    let got: f64 = (0..20)
        .map(|r| sample_adjacency(&cfg.clone().with_replicate(r)).unwrap().num_edges() as f64)
        .sum::<f64>()
        / 20.0;
    assert!((got - mean).abs() < 4.0 * (var / 20.0).sqrt(), "{got} vs {mean}");
}

#[test]
fn coupled_disagreement_matches_probability_gap() {
    let n = 1500;
    let cl = EnsembleConfig::degree_model(n, Variant::ChungLu { degrees: None }, 0);
    let nr = EnsembleConfig::degree_model(n, Variant::NorrosRiettu { degrees: None }, 0);
    let mut seen = 0.0;
    let mut expected = 0.0;
    for seed in 1..=10 {
        let (a, b) = coupled_sample(&cl, &nr, seed).unwrap();
        let (ea, eb) = coupled_realizations(&cl, &nr, seed).unwrap();
        seen += a.edges.iter().filter(|x| b.edges.binary_search(x).is_err()).count() as f64;
        seen += b.edges.iter().filter(|x| a.edges.binary_search(x).is_err()).count() as f64;
        for i in 0..n {
            for j in i..n {
                expected += (ea.p(i, j) - eb.p(i, j)).abs();
            }
        }
        // NR never exceeds CL, so the coupling nests the edge sets
        assert!(b.edges.iter().all(|x| a.edges.binary_search(x).is_ok()));
    }
    assert!((seen - expected).abs() < 4.0 * expected.sqrt() + 1.0, "{seen} vs {expected}");
}

#[test]
fn zero_diagonal_removes_exactly_the_loops() {
    let cfg = EnsembleConfig::homogeneous(400, 30.0, 9);
    let with = sample_adjacency(&cfg).unwrap();
    let without = sample_adjacency(&cfg.clone().with_zero_diagonal(true)).unwrap();
    assert!(with.num_loops() > 0);
    assert_eq!(without.num_loops(), 0);
    let off: Vec<_> = with.edges.iter().filter(|e| e.0 != e.1).copied().collect();
    assert_eq!(off, without.edges);
}

#[test]
fn degree_models_report_realised_lambda() {
    let d: Vec<f64> = (0..1000).map(|i| 1.0 + (i % 5) as f64).collect();
    let cfg = EnsembleConfig::degree_model(1000, Variant::Grg { degrees: Some(d) }, 1);
    let e = cfg.realize().unwrap();
    assert!((e.lambda() - 1000.0 * 25.0 / 3000.0).abs() < 1e-12);
    assert!((e.scale - e.lambda().sqrt()).abs() < 1e-12);
    assert_eq!(e.weights.iter().cloned().fold(0.0, f64::max), 1.0);
}

#[test]
fn bad_degree_vectors_are_config_errors() {
    let cfg = EnsembleConfig::degree_model(10, Variant::ChungLu { degrees: Some(vec![1.0; 9]) }, 1);
    assert!(matches!(cfg.realize(), Err(ier_spectra::Error::Config(_))));
    let cfg = EnsembleConfig::degree_model(3, Variant::ChungLu { degrees: Some(vec![0.0; 3]) }, 1);
    assert!(matches!(cfg.realize(), Err(ier_spectra::Error::Config(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn samples_are_sorted_upper_triangular_and_reproducible(n in 1usize..120, l in 0.1f64..20.0, seed in any::<u64>()) {
        let cfg = EnsembleConfig::homogeneous(n, l, seed);
        let a = sample_adjacency(&cfg).unwrap();
        prop_assert!(a.edges.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.edges.iter().all(|&(i, j)| i <= j && (j as usize) < n));
        prop_assert_eq!(&a, &sample_adjacency(&cfg).unwrap());
    }

    #[test]
    fn probabilities_are_clipped_and_symmetric(seed in any::<u64>(), l in 0.1f64..500.0) {
        let f = Kernel::FiniteRank(vec![Profile::Linear(3.0), Profile::Saturating]);
        let cfg = EnsembleConfig::generic(60, l, f, WeightModel::uniform01(), seed);
        for i in 1..=60 {
            for j in 1..=60 {
                let p = edge_probability(&cfg, i, j).unwrap();
                prop_assert!((0.0..=1.0).contains(&p));
                prop_assert_eq!(p, edge_probability(&cfg, j, i).unwrap());
            }
        }
    }
}
