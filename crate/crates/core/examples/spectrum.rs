//! Monte Carlo eigenvalue moments of sampled graphs against the limiting
//! moments.
//!
//! cargo run --release --example spectrum

use ier_spectra::ensembles::EnsembleConfig;
use ier_spectra::kernels::{Kernel, WeightModel};
use ier_spectra::moments::limiting_moment;
use ier_spectra::spectra::{empirical_moment, sample_spectrum, Binning};

pub fn run_example() -> ier_spectra::Result<()> {
    let (n, lambda, seeds) = (1000, 4.0, 8u64);
    let reports = (1..=seeds)
        .map(|s| sample_spectrum(&EnsembleConfig::homogeneous(n, lambda, s), &Binning::Bins(30)))
        .collect::<ier_spectra::Result<Vec<_>>>()?;
    let (one, dirac) = (Kernel::Constant(1.0), WeightModel::dirac(1.0)?);
    println!("N = {n}, λ = {lambda}, {seeds} seeds");
    for k in [2, 4, 6] {
        let xs: Vec<f64> = reports.iter().map(|r| empirical_moment(r, k)).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt();
        let limit = limiting_moment(k, lambda, &one, &dirac)?.value;
        println!("  m{k}: sample {mean:.4} ± {:.4}, limit {limit:.4}", sd / (xs.len() as f64).sqrt());
    }

    let h = &reports[0].histogram;
    let peak = *h.counts.iter().max().unwrap_or(&1) as f64;
    println!("\nhistogram of seed 1:");
    for (i, c) in h.counts.iter().enumerate() {
        let bar = "#".repeat((50.0 * *c as f64 / peak).round() as usize);
        println!("{:7.3} {bar}", 0.5 * (h.edges[i] + h.edges[i + 1]));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
