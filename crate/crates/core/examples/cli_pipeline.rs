//! Drives the command line in-process: moments, a sampled spectrum and a
//! density, written under the system temp directory.
//!
//! cargo run --release --example cli_pipeline

use ier_spectra::cli::run_from;

pub fn run_example() -> ier_spectra::Result<()> {
    let dir = std::env::temp_dir().join(format!("ier-spectra-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let cfg = dir.join("er.json");
    std::fs::write(&cfg, r#"{"n": 800, "lambda": 6, "model": "homogeneous", "seed": 3}"#)?;
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let cfg = cfg.to_string_lossy().into_owned();

    let jobs: Vec<Vec<String>> = vec![
        vec!["moments".into(), "--k-max".into(), "6".into(), "--config".into(), cfg.clone(), "--out".into(), path("moments.csv")],
        vec!["spectrum".into(), "--config".into(), cfg.clone(), "--seeds".into(), "1..3".into(), "--out".into(), path("report.json")],
        vec![
            "density".into(), "--lambda".into(), "6".into(), "--eta".into(), "0.1".into(), "--xmin".into(), "-3".into(),
            "--xmax".into(), "3".into(), "--n".into(), "25".into(), "--out".into(), path("density.csv"),
        ],
    ];
    for args in jobs {
        let code = run_from(std::iter::once("ier-spectra".to_string()).chain(args.iter().cloned()));
        println!("ier-spectra {} -> exit {code}", args[0]);
        if code != 0 {
            return Err(ier_spectra::Error::Config(format!("{} failed with exit code {code}", args[0])));
        }
    }
    for name in ["moments.csv", "histogram.csv", "density.csv"] {
        let text = std::fs::read_to_string(dir.join(name))?;
        println!("\n{name}:");
        for line in text.lines().take(8) {
            println!("  {line}");
        }
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
