//! A figure job at reduced size: histogram of a sampled homogeneous graph
//! next to the fixed-point density overlay.
//!
//! cargo run --release --example figure [-- N]

use ier_spectra::cli::{figure, FigureName, FigureOptions};

pub fn run_example() -> ier_spectra::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1500);
    let out = std::env::temp_dir().join(format!("ier-spectra-figure-{}", std::process::id()));
    let opts = FigureOptions { out: out.clone(), n, seed: 1, memory_mb: 1024, eta: 0.1, points: 25, xmin: -3.0, xmax: 3.0 };
    figure(FigureName::ErrgLam5, &opts)?;

    let read = |name: &str| -> ier_spectra::Result<Vec<Vec<f64>>> {
        let text = std::fs::read_to_string(out.join(name))?;
        Ok(text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap_or(f64::NAN)).collect())
            .collect())
    };
    let hist = read("errg_lam5_errg_histogram.csv")?;
    let overlay = read("errg_lam5_overlay.csv")?;
    let total: f64 = hist.iter().map(|r| r[2]).sum();
    println!("N = {n}, λ = 5: histogram density vs overlay");
    for row in overlay.iter().step_by(2) {
        let x = row[0];
        let bin = hist.iter().find(|r| r[0] <= x && x < r[1]);
        let h = bin.map(|r| r[2] / (total * (r[1] - r[0]))).unwrap_or(0.0);
        println!("{x:6.2}  histogram {h:.4}  overlay {:.4}", row[1]);
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
