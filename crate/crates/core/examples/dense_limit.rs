//! The dense (λ → ∞) equation: semicircle recovery, smoothed density, and
//! moments read back off the transform by a contour integral.
//!
//! cargo run --release --example dense_limit

use ier_spectra::kernels::{Kernel, Profile, WeightModel};
use ier_spectra::moments::dense_moment;
use ier_spectra::stieltjes::{
    density_from_stieltjes, moments_from_stieltjes, semicircle_stieltjes, stieltjes_dense, stieltjes_dense_path,
};
use num_complex::Complex64;

pub fn run_example() -> ier_spectra::Result<()> {
    let (one, dirac) = (Kernel::Constant(1.0), WeightModel::dirac(1.0)?);
    let z = Complex64::new(0.0, 2.0);
    let s = stieltjes_dense(z, &one, &dirac)?;
    println!("f = 1: St(2i) = {:.12} after {} iterations (exact {:.12})", s.stieltjes, s.iterations, semicircle_stieltjes(z));

    let eta = 0.02;
    let xs: Vec<f64> = (0..=40).map(|i| -2.5 + 0.125 * i as f64).collect();
    let st = stieltjes_dense_path(&xs, eta, &one, &dirac)?;
    let dens: Vec<f64> = st.iter().map(|s| s.im / std::f64::consts::PI).collect();
    println!("\n    x   density   semicircle");
    for (x, d) in xs.iter().zip(&dens).step_by(4) {
        let exact = (4.0 - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI);
        println!("{x:6.3}  {d:.5}   {exact:.5}");
    }

    let rank1 = Kernel::Rank1(Profile::Linear(1.0));
    let mu = WeightModel::discrete(vec![0.5, 1.0, 1.5], vec![0.25, 0.5, 0.25])?;
    let transform = |z: Complex64| stieltjes_dense(z, &rank1, &mu).map(|s| s.stieltjes);
    let m = moments_from_stieltjes(transform, 3.0, 256, 8)?;
    println!("\nrank-1 kernel, contour moments against partition sums:");
    for k in [2, 4, 6, 8] {
        println!("  m{k}: {:.9}  {:.9}", m[k], dense_moment(k, &rank1, &mu)?);
    }

    let d = density_from_stieltjes(transform, &[0.0, 0.5, 1.0], 0.05)?;
    println!("smoothed density at 0, 0.5, 1: {d:.5?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
