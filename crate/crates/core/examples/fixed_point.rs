//! The sparse Stieltjes transform from the Bessel-kernel fixed point,
//! approaching the semicircle as λ grows.
//!
//! cargo run --release --example fixed_point

use ier_spectra::kernels::{Kernel, Profile, WeightModel};
use ier_spectra::stieltjes::{semicircle_stieltjes, SolverConfig, SparseSolution};
use num_complex::Complex64;

pub fn run_example() -> ier_spectra::Result<()> {
    let z = Complex64::new(0.0, 2.0);
    let (one, dirac) = (Kernel::Constant(1.0), WeightModel::dirac(1.0)?);
    println!("f = 1, z = {z}; semicircle value {}", semicircle_stieltjes(z));
    for lambda in [1.0, 2.0, 10.0, 50.0, 250.0] {
        let cfg = SolverConfig::new(z, lambda);
        let sol = SparseSolution::solve(&cfg, &one, &dirac)?;
        println!(
            "  λ = {lambda:5}: St = {:.8}  residual {:.1e} after {} iterations, G(1/2) = {:.6}",
            sol.stieltjes(),
            sol.phi.residual,
            sol.phi.iterations,
            sol.limit_gn(0.5)?
        );
    }

    let f = Kernel::FiniteRank(vec![Profile::Saturating, Profile::Linear(1.0)]);
    let mu = WeightModel::Uniform01 { nodes: 16 };
    println!("\nf = x y/((1+x)(1+y)) + x y, uniform weights, λ = 5:");
    for x in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0] {
        let cfg = SolverConfig::new(Complex64::new(x, 0.2), 5.0);
        let sol = SparseSolution::solve(&cfg, &f, &mu)?;
        println!(
            "  x = {x:4}: density {:.5}, spread across weights {:.2e}",
            sol.stieltjes().im / std::f64::consts::PI,
            sol.x_variation()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
