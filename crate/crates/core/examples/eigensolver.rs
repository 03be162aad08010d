//! The in-house symmetric eigensolver on a random dense matrix and a sparse
//! graph adjacency.
//!
//! cargo run --release --example eigensolver

use ier_spectra::eigen::{eigen_symmetric, eigenvalues_symmetric};
use ier_spectra::ensembles::EnsembleConfig;
use ier_spectra::linalg::SymMatrix;
use ier_spectra::spectra::adjacency_eigenvalues;

pub fn run_example() -> ier_spectra::Result<()> {
    let n = 600;
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let m = SymMatrix::from_lower(n, |_, _| next());
    let t = std::time::Instant::now();
    let vals = eigenvalues_symmetric(&m)?;
    println!("N = {n}: eigenvalues in {:.2?}", t.elapsed());
    let sum: f64 = vals.iter().sum();
    let sq: f64 = vals.iter().map(|v| v * v).sum();
    println!("  Σλ = {sum:.10}, trace = {:.10}", m.trace());
    println!("  Σλ² = {sq:.10}, ‖M‖_F² = {:.10}", m.frobenius_sq());

    let small = m.submatrix(&(0..120).collect::<Vec<_>>());
    let (vals, vecs) = eigen_symmetric(&small)?;
    let k = 120;
    let mut worst = 0.0f64;
    for c in 0..k {
        let v = &vecs[c * k..(c + 1) * k];
        let mv = small.matvec(v);
        worst = worst.max(mv.iter().zip(v).map(|(a, b)| (a - vals[c] * b).abs()).fold(0.0, f64::max));
    }
    println!("  eigenvector residual on a 120 block: {worst:.2e}");

    let cfg = EnsembleConfig::homogeneous(3000, 3.0, 5);
    let adj = ier_spectra::ensembles::sample_adjacency(&cfg)?;
    let t = std::time::Instant::now();
    let vals = adjacency_eigenvalues(&adj, 3f64.sqrt())?;
    let zeros = vals.iter().filter(|v| v.abs() < 1e-9).count();
    println!("sparse graph N = 3000, λ = 3: {:.2?}, {zeros} zero eigenvalues", t.elapsed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
