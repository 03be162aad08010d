//! Homomorphism densities `t(H, f, μ_w)` of small trees: exact summation
//! against a Monte Carlo estimate.
//!
//! cargo run --example homomorphism_density

use ier_spectra::kernels::{homomorphism_density, homomorphism_density_mc, mean_degree_function, Kernel, WeightModel};
use ier_spectra::partitions::PartitionGraph;

pub fn run_example() -> ier_spectra::Result<()> {
    let mu = WeightModel::uniform01();
    let graphs = [
        ("edge", PartitionGraph::from_edges(2, &[(0, 1)])),
        ("path of 3 edges", PartitionGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])),
        ("star with 3 leaves", PartitionGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])),
    ];
    for (kname, f) in [("chung_lu", Kernel::ChungLu), ("grg", Kernel::Grg), ("norros_riettu", Kernel::NorrosRiettu)] {
        println!("{kname}: d_f(1) = {:.6}", mean_degree_function(&f, &mu, 1.0)?);
        for (gname, g) in &graphs {
            let exact = homomorphism_density(g, &f, &mu)?;
            let (mc, se) = homomorphism_density_mc(g, &f, &mu, 200_000, 1)?;
            println!("  {gname:20} exact {exact:.6}  monte carlo {mc:.6} ± {se:.6}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
