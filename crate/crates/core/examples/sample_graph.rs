//! Sampling inhomogeneous graphs and a maximally coupled pair.
//!
//! cargo run --example sample_graph

use ier_spectra::ensembles::{coupled_sample, sample_adjacency, EnsembleConfig, Variant};
use ier_spectra::kernels::{Kernel, Profile, WeightModel};

pub fn run_example() -> ier_spectra::Result<()> {
    let kernel = Kernel::FiniteRank(vec![Profile::Saturating, Profile::Linear(1.0)]);
    let cfg = EnsembleConfig::generic(2000, 5.0, kernel, WeightModel::uniform01(), 42);
    let e = cfg.realize()?;
    let adj = sample_adjacency(&cfg)?;
    let expected: f64 = (0..e.n).flat_map(|i| (i..e.n).map(move |j| (i, j))).map(|(i, j)| e.p(i, j)).sum();
    println!("N = {}, λ = {}, scale = {:.4}", e.n, e.lambda(), e.scale);
    println!("edges: {} sampled, {expected:.1} expected", adj.num_edges());

    let mut deg = vec![0usize; adj.n];
    for &(i, j) in &adj.edges {
        deg[i as usize] += 1;
        if i != j {
            deg[j as usize] += 1;
        }
    }
    let mut order: Vec<usize> = (0..adj.n).collect();
    order.sort_by(|&a, &b| e.weights[a].total_cmp(&e.weights[b]));
    for q in [0, 1, 2, 3] {
        let part = &order[q * adj.n / 4..(q + 1) * adj.n / 4];
        let mean = part.iter().map(|&i| deg[i] as f64).sum::<f64>() / part.len() as f64;
        println!("  weight quartile {}: mean degree {mean:.3}", q + 1);
    }

    let cl = EnsembleConfig::degree_model(2000, Variant::ChungLu { degrees: None }, 7);
    let grg = EnsembleConfig::degree_model(2000, Variant::Grg { degrees: None }, 7);
    let (a, b) = coupled_sample(&cl, &grg, 7)?;
    let only_a = a.edges.iter().filter(|x| b.edges.binary_search(x).is_err()).count();
    let only_b = b.edges.iter().filter(|x| a.edges.binary_search(x).is_err()).count();
    println!("\ncoupled Chung-Lu / GRG: {} and {} edges, {only_a} + {only_b} disagree", a.num_edges(), b.num_edges());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
