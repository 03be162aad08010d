//! The resolvent functional `G_N(u, z)` of sampled graphs next to its limit
//! from the fixed point.
//!
//! cargo run --release --example resolvent

use ier_spectra::ensembles::{sample_adjacency, EnsembleConfig};
use ier_spectra::kernels::{Kernel, WeightModel};
use ier_spectra::spectra::Resolvent;
use ier_spectra::stieltjes::{SolverConfig, SparseSolution};
use num_complex::Complex64;

pub fn run_example() -> ier_spectra::Result<()> {
    let (n, lambda, z) = (1500, 6.0, Complex64::new(0.5, 1.0));
    let sol = SparseSolution::solve(&SolverConfig::new(z, lambda), &Kernel::Constant(1.0), &WeightModel::dirac(1.0)?)?;
    let resolvents = (1..=4u64)
        .map(|s| {
            let cfg = EnsembleConfig::homogeneous(n, lambda, s);
            Resolvent::from_adjacency(&sample_adjacency(&cfg)?, cfg.realize()?.scale)
        })
        .collect::<ier_spectra::Result<Vec<_>>>()?;
    println!("N = {n}, λ = {lambda}, z = {z}");
    println!("    u   sample mean G_N              limit");
    for u in [0.1, 0.25, 0.5, 0.75, 1.0] {
        let mut g = Complex64::new(0.0, 0.0);
        for r in &resolvents {
            g += r.g_n(u, z)?;
        }
        g /= resolvents.len() as f64;
        println!("{u:5}   {g:.5}   {:.5}", sol.limit_gn(u)?);
    }
    let h = 1e-5;
    let slope = (resolvents[0].g_n(h, z)? - 1.0) / h;
    let trace: Complex64 = resolvents[0].diagonal(z)?.iter().sum::<Complex64>() / n as f64;
    println!("\n∂u G_N at 0: {slope:.6}; ι St_N: {:.6}", Complex64::i() * trace);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
