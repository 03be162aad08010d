//! Limiting moments from Special Symmetric partitions, their dense limit,
//! and the free multiplicative convolution with the semicircle.
//!
//! cargo run --example moments

use ier_spectra::kernels::{Kernel, Profile, WeightModel};
use ier_spectra::moments::{dense_moment, free_mult_semicircle_moment, limiting_moment};

pub fn run_example() -> ier_spectra::Result<()> {
    let one = Kernel::Constant(1.0);
    let dirac = WeightModel::dirac(1.0)?;
    println!("homogeneous graph, m_k(λ):");
    println!("   λ        m2        m4        m6        m8");
    for lambda in [1.0, 2.0, 10.0, 100.0, 1000.0] {
        let m: Vec<f64> = [2, 4, 6, 8]
            .iter()
            .map(|&k| limiting_moment(k, lambda, &one, &dirac).map(|r| r.value))
            .collect::<ier_spectra::Result<_>>()?;
        println!("{lambda:6}  {:8.5}  {:8.5}  {:8.5}  {:8.5}", m[0], m[1], m[2], m[3]);
    }
    let dense: Vec<f64> = [2, 4, 6, 8].iter().map(|&k| dense_moment(k, &one, &dirac)).collect::<ier_spectra::Result<_>>()?;
    println!("   inf  {:?}  (Catalan numbers)", dense);

    let report = limiting_moment(6, 5.0, &one, &dirac)?;
    println!("\nm6 at λ = 5 term by term:");
    for c in &report.per_partition {
        println!("  {:24} |γπ| = {}  λ^{:<3} t = {}", c.partition.to_string(), c.gamma_blocks, c.exponent, c.density);
    }

    let rank1 = Kernel::Rank1(Profile::Linear(1.0));
    let mu = WeightModel::discrete(vec![0.5, 1.0, 1.5], vec![0.25, 0.5, 0.25])?;
    println!("\nrank-1 kernel r(x) = x against μ_w ⊠ semicircle:");
    for k in [2, 4, 6, 8] {
        let a = dense_moment(k, &rank1, &mu)?;
        let b = free_mult_semicircle_moment(k, &mu)?;
        println!("  k = {k}: {a:.12} vs {b:.12}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
