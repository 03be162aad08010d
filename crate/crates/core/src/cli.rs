//! The `ier-spectra` command line. Every subcommand is a plain function of
//! its parsed arguments, so tests and examples can drive it in-process via
//! [`run_from`].
//!
//! CSV outputs start with one `#` line carrying the config hash and seed;
//! everything after it is byte-identical across re-runs with equal inputs.
//! JSON outputs carry the same fields as keys. Floats are written with
//! shortest round-trip formatting.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{parse_complex, Config, LoadedConfig};
use crate::ensembles::{coupled_realizations, coupled_sample, sample_adjacency, EnsembleConfig};
use crate::error::{Error, Result};
use crate::kernels::{Kernel, WeightModel};
use crate::moments::{dense_moment_report, limiting_moment};
use crate::partitions::{build_partition_graph, enumerate_set_partitions, enumerate_ss};
use crate::spectra::{
    adjacency_eigenvalues, empirical_moment, hw_bound_adjacency, levy_distance_sorted, sample_spectrum, Binning,
    Histogram, Metadata, SpectralReport,
};
use crate::stieltjes::{stieltjes_dense, stieltjes_dense_path, SparseSolution};

/// Caps the worker pool when `--threads` is not given.
pub const THREADS_ENV: &str = "IER_SPECTRA_THREADS";

/// Default memory budget for `figure`, in MiB.
pub const FIGURE_MEMORY_MB: u64 = 1024;

#[derive(Debug, Parser)]
#[command(name = "ier-spectra", version, about = "Spectra of sparse inhomogeneous Erdős–Rényi graphs")]
pub struct Cli {
    /// Worker threads; overrides IER_SPECTRA_THREADS.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaArg {
    Finite(f64),
    Infinite,
}

impl std::fmt::Display for LambdaArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LambdaArg::Finite(l) => write!(f, "{l}"),
            LambdaArg::Infinite => f.write_str("inf"),
        }
    }
}

fn parse_lambda(s: &str) -> std::result::Result<LambdaArg, String> {
    match s.trim() {
        "inf" | "infinity" | "Inf" | "∞" => Ok(LambdaArg::Infinite),
        t => match t.parse::<f64>() {
            Ok(l) if l.is_infinite() && l > 0.0 => Ok(LambdaArg::Infinite),
            Ok(l) if l > 0.0 => Ok(LambdaArg::Finite(l)),
            _ => Err(format!("lambda must be a positive number or `inf`, got {s:?}")),
        },
    }
}

/// A seed list: `a..b` (inclusive), `a..=b`, a single seed, or a comma list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds(pub Vec<u64>);

impl std::str::FromStr for Seeds {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_seeds(s).map(Seeds)
    }
}

pub fn parse_seeds(s: &str) -> std::result::Result<Vec<u64>, String> {
    let bad = |e: &dyn std::fmt::Display| format!("bad seed list {s:?}: {e}");
    let t = s.trim();
    if let Some((a, b)) = t.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let a: u64 = a.trim().parse().map_err(|e| bad(&e))?;
        let b: u64 = b.trim().parse().map_err(|e| bad(&e))?;
        if b < a {
            return Err(bad(&"empty range"));
        }
        return Ok((a..=b).collect());
    }
    t.split(',').map(|x| x.trim().parse::<u64>().map_err(|e| bad(&e))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Graphs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FigureName {
    ErrgLam5,
    ErrgLam10,
    ClGrgNr,
    IrgLam5,
    IrgLam10,
}

impl FigureName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureName::ErrgLam5 => "errg_lam5",
            FigureName::ErrgLam10 => "errg_lam10",
            FigureName::ClGrgNr => "cl_grg_nr",
            FigureName::IrgLam5 => "irg_lam5",
            FigureName::IrgLam10 => "irg_lam10",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List set partitions of [k] in block notation.
    Partitions {
        #[arg(long)]
        k: usize,
        /// Only Special Symmetric partitions.
        #[arg(long)]
        ss_only: bool,
        /// Also write each partition graph as `vertex_a,vertex_b,multiplicity`
        /// into `<out stem>_graphs/`.
        #[arg(long, value_enum)]
        emit: Option<Emit>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limiting moments as CSV `k,lambda,value,nc2_part,remainder`.
    Moments {
        #[arg(long)]
        k_max: usize,
        /// Positive number or `inf` for the dense limit; defaults to the config.
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<LambdaArg>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample one graph; writes the edge list `i,j` (1-based) and a metadata
    /// JSON next to it.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Eigenvalue spectra over a seed range; writes the report plus
    /// `histogram.csv` and `eigenvalues.csv` beside it.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "1")]
        seeds: Seeds,
        #[arg(long)]
        out: PathBuf,
    },
    /// Limiting Stieltjes transform at one point with solver diagnostics.
    Stieltjes {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<LambdaArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smoothed limiting density `(1/π) Im St(x + ιη)` on a grid, CSV
    /// `x,density`, with a diagnostics JSON beside it.
    Density {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_lambda)]
        lambda: LambdaArg,
        #[arg(long)]
        eta: f64,
        #[arg(long, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        xmax: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coupled samples of two configs: Lévy distance against the
    /// Hoffman–Wielandt bound per seed.
    Compare {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        #[arg(long, default_value = "1")]
        seeds: Seeds,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram and limiting-density overlay for one of the figure ensembles.
    Figure {
        #[arg(long, value_enum)]
        name: FigureName,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = FIGURE_MEMORY_MB)]
        memory_mb: u64,
        /// Overlay smoothing `Im z`.
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
        /// Overlay grid size.
        #[arg(long, default_value_t = 121)]
        points: usize,
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        xmin: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        xmax: f64,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    configure_threads(cli.threads);
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ier-spectra: {e}");
            e.exit_code()
        }
    }
}

/// Sizes the global rayon pool from `--threads` or [`THREADS_ENV`]. Only the
/// first call in a process has an effect.
fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()));
    if let Some(n) = n.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Partitions { k, ss_only, emit, out } => partitions(k, ss_only, emit.is_some(), out.as_deref()),
        Command::Moments { k_max, lambda, config, out } => moments(k_max, lambda, config.as_deref(), out.as_deref()),
        Command::Sample { config, seed, out } => sample(&config, seed, &out),
        Command::Spectrum { config, seeds, out } => spectrum(&config, &seeds.0, &out),
        Command::Stieltjes { config, z, lambda, out } => stieltjes(config.as_deref(), &z, lambda, out.as_deref()),
        Command::Density { config, lambda, eta, xmin, xmax, n, out } => {
            density(config.as_deref(), lambda, eta, xmin, xmax, n, &out)
        }
        Command::Compare { config_a, config_b, seeds, out } => compare(&config_a, &config_b, &seeds.0, out.as_deref()),
        Command::Figure { name, out, n, seed, memory_mb, eta, points, xmin, xmax } => figure(
            name,
            &FigureOptions { out, n, seed, memory_mb, eta, points, xmin, xmax },
        ),
    }
}

fn load(path: Option<&Path>) -> Result<LoadedConfig> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(LoadedConfig::from_config(Config::default())),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialises");
    s.push('\n');
    s
}

fn comment_line(fields: &[(&str, String)]) -> String {
    let mut s = String::from("#");
    for (k, v) in fields {
        let _ = write!(s, " {k}={v}");
    }
    s.push('\n');
    s
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().map(|d| d.join(name)).unwrap_or_else(|| PathBuf::from(name))
}

fn partitions(k: usize, ss_only: bool, graphs: bool, out: Option<&Path>) -> Result<()> {
    let list = if ss_only { enumerate_ss(k)? } else { enumerate_set_partitions(k)? };
    let mut text = String::new();
    for p in &list {
        let _ = writeln!(text, "{p}");
    }
    emit(out, &text)?;
    if graphs {
        let out = out.ok_or_else(|| Error::config("--emit graphs needs --out"))?;
        let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "partitions".into());
        let dir = sibling(out, &format!("{stem}_graphs"));
        std::fs::create_dir_all(&dir)?;
        let width = list.len().to_string().len().max(4);
        for (i, p) in list.iter().enumerate() {
            let g = build_partition_graph(p);
            let mut csv = String::from("vertex_a,vertex_b,multiplicity\n");
            for (&(a, b), m) in &g.walk_multiplicity {
                let _ = writeln!(csv, "{},{},{m}", a + 1, b + 1);
            }
            std::fs::write(dir.join(format!("{:0width$}.csv", i + 1)), csv)?;
        }
    }
    Ok(())
}

fn moments(k_max: usize, lambda: Option<LambdaArg>, config: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let cfg = load(config)?;
    let (f, mu) = (cfg.kernel()?, cfg.weights()?);
    let lambda = match lambda {
        Some(l) => l,
        None => LambdaArg::Finite(cfg.lambda()?),
    };
    let mut text = comment_line(&[("config_hash", cfg.config.hash()), ("seed", cfg.config.seed.to_string())]);
    text.push_str("k,lambda,value,nc2_part,remainder\n");
    for k in 1..=k_max {
        let r = match lambda {
            LambdaArg::Finite(l) => limiting_moment(k, l, &f, &mu)?,
            LambdaArg::Infinite => dense_moment_report(k, &f, &mu)?,
        };
        let _ = writeln!(text, "{k},{lambda},{},{},{}", r.value, r.nc2_part(), r.remainder());
    }
    emit(out, &text)
}

fn sample(config: &Path, seed: Option<u64>, out: &Path) -> Result<()> {
    let cfg = Config::load(config)?;
    let ec = cfg.ensemble(seed)?;
    let e = ec.realize()?;
    let adj = sample_adjacency(&ec)?;
    let hash = cfg.config.hash();
    let mut text = comment_line(&[("config_hash", hash.clone()), ("seed", ec.seed.to_string())]);
    text.push_str("i,j\n");
    for &(i, j) in &adj.edges {
        let _ = writeln!(text, "{},{}", i + 1, j + 1);
    }
    write_file(out, &text)?;
    let meta = json!({
        "config_hash": hash,
        "seed": ec.seed,
        "n": e.n,
        "lambda": e.lambda(),
        "epsilon": e.epsilon,
        "variant": ec.variant.name(),
        "scale": e.scale,
        "zero_diagonal": ec.zero_diagonal,
        "edges": adj.num_edges(),
        "loops": adj.num_loops(),
    });
    write_file(&out.with_extension("json"), &json_text(&meta))
}

fn histogram_csv(header: &str, h: &Histogram) -> String {
    let mut text = header.to_string();
    text.push_str("bin_left,bin_right,count\n");
    for (i, c) in h.counts.iter().enumerate() {
        let _ = writeln!(text, "{},{},{c}", h.edges[i], h.edges[i + 1]);
    }
    text
}

fn histogram_json(h: &Histogram) -> Value {
    json!({"edges": h.edges, "counts": h.counts})
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn seeds_text(seeds: &[u64]) -> String {
    seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn spectrum(config: &Path, seeds: &[u64], out: &Path) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::config("no seeds given"));
    }
    let cfg = Config::load(config)?;
    let hash = cfg.config.hash();
    let binning = cfg.binning();
    let reports = seeds
        .par_iter()
        .map(|&s| {
            let mut r = sample_spectrum(&cfg.ensemble(Some(s))?, &binning)?;
            r.metadata.config_hash = hash.clone();
            Ok(r)
        })
        .collect::<Result<Vec<SpectralReport>>>()?;

    let mut pooled: Vec<f64> = reports.iter().flat_map(|r| r.eigenvalues.iter().copied()).collect();
    pooled.sort_by(f64::total_cmp);
    let pooled_hist = Histogram::new(&pooled, &binning)?;
    let header = comment_line(&[("config_hash", hash.clone()), ("seeds", seeds_text(seeds))]);
    write_file(&sibling(out, "histogram.csv"), &histogram_csv(&header, &pooled_hist))?;

    let mut eig = header.clone();
    eig.push_str("seed,eigenvalue\n");
    for r in &reports {
        for v in &r.eigenvalues {
            let _ = writeln!(eig, "{},{v}", r.metadata.seed);
        }
    }
    write_file(&sibling(out, "eigenvalues.csv"), &eig)?;

    let summary: serde_json::Map<String, Value> = reports[0]
        .moments
        .keys()
        .map(|&k| {
            let xs: Vec<f64> = reports.iter().map(|r| r.moments[&k]).collect();
            let (mean, se) = mean_and_stderr(&xs);
            (k.to_string(), json!({"mean": mean, "stderr": se}))
        })
        .collect();
    let runs: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "seed": r.metadata.seed,
                "n": r.n(),
                "scale": r.metadata.scale,
                "moments": r.moments,
                "histogram": histogram_json(&r.histogram),
            })
        })
        .collect();
    let report = json!({
        "config_hash": hash,
        "seeds": seeds,
        "moments": summary,
        "histogram": histogram_json(&pooled_hist),
        "runs": runs,
    });
    write_file(out, &json_text(&report))
}

fn sparse_diagnostics(sol: &SparseSolution, cfg: &crate::stieltjes::SolverConfig) -> Value {
    json!({
        "residual": sol.phi.residual,
        "iterations": sol.phi.iterations,
        "truncation_bound": sol.truncation_bound(cfg),
        "max_exponential": sol.max_exponential(),
        "x_variation": sol.x_variation(),
        "v_max": cfg.v_max,
        "u_max": cfg.u_max(),
        "panels": cfg.panels,
        "n_v": cfg.n_v(),
        "tol": cfg.tol,
    })
}

fn stieltjes(config: Option<&Path>, z: &str, lambda: Option<LambdaArg>, out: Option<&Path>) -> Result<()> {
    let cfg = load(config)?;
    let (f, mu) = (cfg.kernel()?, cfg.weights()?);
    let z = parse_complex(z)?;
    let lambda = match lambda {
        Some(l) => l,
        None => LambdaArg::Finite(cfg.lambda()?),
    };
    let hash = cfg.config.hash();
    let report = match lambda {
        LambdaArg::Finite(l) => {
            let sc = cfg.solver(z, l);
            let sol = SparseSolution::solve(&sc, &f, &mu)?;
            json!({
                "config_hash": hash,
                "seed": cfg.config.seed,
                "method": "sparse",
                "z": complex_json(z),
                "lambda": l,
                "stieltjes": complex_json(sol.stieltjes()),
                "diagnostics": sparse_diagnostics(&sol, &sc),
            })
        }
        LambdaArg::Infinite => {
            let sol = stieltjes_dense(z, &f, &mu)?;
            json!({
                "config_hash": hash,
                "seed": cfg.config.seed,
                "method": "dense",
                "z": complex_json(z),
                "lambda": "inf",
                "stieltjes": complex_json(sol.stieltjes),
                "diagnostics": {"residual": sol.residual, "iterations": sol.iterations},
            })
        }
    };
    emit(out, &json_text(&report))
}

fn grid(xmin: f64, xmax: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !xmin.is_finite() || !xmax.is_finite() || (n > 1 && !(xmax > xmin)) {
        return Err(Error::config(format!("bad grid: n = {n} on [{xmin}, {xmax}]")));
    }
    if n == 1 {
        return Ok(vec![xmin]);
    }
    let h = (xmax - xmin) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { xmax } else { xmin + i as f64 * h }).collect())
}

/// Densities on `xs` plus one diagnostics record per point.
fn density_points(
    cfg: &LoadedConfig,
    f: &Kernel,
    mu: &WeightModel,
    lambda: LambdaArg,
    eta: f64,
    xs: &[f64],
) -> Result<(Vec<f64>, Vec<Value>)> {
    if !(eta > 0.0) {
        return Err(Error::config(format!("eta must be positive, got {eta}")));
    }
    let (st, diag): (Vec<Complex64>, Vec<Value>) = match lambda {
        LambdaArg::Finite(l) => xs
            .par_iter()
            .map(|&x| {
                let sc = cfg.solver(Complex64::new(x, eta), l);
                let sol = SparseSolution::solve(&sc, f, mu)?;
                let mut d = sparse_diagnostics(&sol, &sc);
                d["x"] = json!(x);
                Ok((sol.stieltjes(), d))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip(),
        LambdaArg::Infinite => {
            let st = stieltjes_dense_path(xs, eta, f, mu)?;
            let d = xs.iter().map(|&x| json!({"x": x})).collect();
            (st, d)
        }
    };
    let mut dens = Vec::with_capacity(xs.len());
    for (&x, s) in xs.iter().zip(&st) {
        let d = s.im / std::f64::consts::PI;
        if !(d >= -1e-8) {
            return Err(Error::Convergence {
                message: format!("density {d} at x = {x} is negative or undefined"),
                residual: d,
                iterations: 0,
            });
        }
        dens.push(d);
    }
    Ok((dens, diag))
}

fn density_csv(header: &str, xs: &[f64], dens: &[f64]) -> String {
    let mut text = header.to_string();
    text.push_str("x,density\n");
    for (x, d) in xs.iter().zip(dens) {
        let _ = writeln!(text, "{x},{d}");
    }
    text
}

fn density(
    config: Option<&Path>,
    lambda: LambdaArg,
    eta: f64,
    xmin: f64,
    xmax: f64,
    n: usize,
    out: &Path,
) -> Result<()> {
    let cfg = load(config)?;
    let (f, mu) = (cfg.kernel()?, cfg.weights()?);
    let xs = grid(xmin, xmax, n)?;
    let (dens, diag) = density_points(&cfg, &f, &mu, lambda, eta, &xs)?;
    let hash = cfg.config.hash();
    let header = comment_line(&[
        ("config_hash", hash.clone()),
        ("seed", cfg.config.seed.to_string()),
        ("lambda", lambda.to_string()),
        ("eta", eta.to_string()),
    ]);
    write_file(out, &density_csv(&header, &xs, &dens))?;
    let report = json!({
        "config_hash": hash,
        "seed": cfg.config.seed,
        "lambda": lambda.to_string(),
        "eta": eta,
        "method": if lambda == LambdaArg::Infinite { "dense" } else { "sparse" },
        "points": diag,
    });
    write_file(&out.with_extension("json"), &json_text(&report))
}

/// One coupled run: Lévy distance, Hoffman–Wielandt bound, and whether
/// `d_L³ ≤ bound` held.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledRun {
    pub seed: u64,
    pub levy: f64,
    pub hw_bound: f64,
}

impl CoupledRun {
    pub fn holds(&self) -> bool {
        self.levy.powi(3) <= self.hw_bound * (1.0 + 1e-12) + 1e-15
    }
}

/// Samples `a` and `b` from one shared uniform per edge and compares their
/// scaled spectra.
pub fn coupled_run(a: &EnsembleConfig, b: &EnsembleConfig, seed: u64) -> Result<CoupledRun> {
    let (adj_a, adj_b) = coupled_sample(a, b, seed)?;
    let (ea, eb) = coupled_realizations(a, b, seed)?;
    let va = adjacency_eigenvalues(&adj_a, ea.scale)?;
    let vb = adjacency_eigenvalues(&adj_b, eb.scale)?;
    Ok(CoupledRun {
        seed,
        levy: levy_distance_sorted(&va, &vb),
        hw_bound: hw_bound_adjacency(&adj_a, ea.scale, &adj_b, eb.scale)?,
    })
}

fn runs_json(runs: &[CoupledRun]) -> Value {
    let list: Vec<Value> = runs
        .iter()
        .map(|r| {
            json!({
                "seed": r.seed,
                "levy_distance": r.levy,
                "levy_cubed": r.levy.powi(3),
                "hw_bound": r.hw_bound,
                "holds": r.holds(),
            })
        })
        .collect();
    let n = runs.len().max(1) as f64;
    json!({
        "runs": list,
        "violations": runs.iter().filter(|r| !r.holds()).count(),
        "mean_levy_distance": runs.iter().map(|r| r.levy).sum::<f64>() / n,
        "mean_hw_bound": runs.iter().map(|r| r.hw_bound).sum::<f64>() / n,
    })
}

fn compare(config_a: &Path, config_b: &Path, seeds: &[u64], out: Option<&Path>) -> Result<()> {
    let (a, b) = (Config::load(config_a)?, Config::load(config_b)?);
    if a.config.n != b.config.n {
        return Err(Error::config(format!("mismatched N: {:?} vs {:?}", a.config.n, b.config.n)));
    }
    let runs = seeds
        .par_iter()
        .map(|&s| coupled_run(&a.ensemble(Some(s))?, &b.ensemble(Some(s))?, s))
        .collect::<Result<Vec<_>>>()?;
    let mut report = runs_json(&runs);
    report["config_hash_a"] = json!(a.config.hash());
    report["config_hash_b"] = json!(b.config.hash());
    report["n"] = json!(a.config.n);
    report["seeds"] = json!(seeds);
    emit(out, &json_text(&report))
}

pub struct FigureOptions {
    pub out: PathBuf,
    pub n: usize,
    pub seed: u64,
    pub memory_mb: u64,
    pub eta: f64,
    pub points: usize,
    pub xmin: f64,
    pub xmax: f64,
}

/// Bytes held by the dense eigensolve of an `n × n` matrix: the matrix
/// plus band and tridiagonal workspace.
pub fn figure_memory_bytes(n: usize) -> u64 {
    let n = n as u64;
    8 * n * n + 8 * n * (4 * crate::eigen::BAND as u64 + 8)
}

/// The ensemble behind each figure and the limit overlaid on it.
struct FigurePlan {
    samples: Vec<(&'static str, Config)>,
    overlay: Config,
}

fn figure_plan(name: FigureName, n: usize, seed: u64) -> FigurePlan {
    let parse = |s: String| Config::from_json(&s).expect("built-in figure config parses");
    let errg = |lambda: f64| {
        let c = parse(format!(r#"{{"n": {n}, "lambda": {lambda}, "model": "homogeneous", "seed": {seed}}}"#));
        FigurePlan { overlay: c.clone(), samples: vec![("errg", c)] }
    };
    let irg = |lambda: f64| {
        let kernel = r#"{"variant": "finite_rank", "profiles": [{"type": "saturating"}, {"type": "linear", "slope": 1}]}"#;
        let c = parse(format!(
            r#"{{"n": {n}, "lambda": {lambda}, "model": "generic_ier", "kernel": {kernel}, "weights": {{"law": "uniform01"}}, "seed": {seed}}}"#
        ));
        let overlay = parse(format!(
            r#"{{"lambda": {lambda}, "kernel": {kernel}, "weights": {{"law": "uniform01", "nodes": 16}}}}"#
        ));
        FigurePlan { overlay, samples: vec![("irg", c)] }
    };
    match name {
        FigureName::ErrgLam5 => errg(5.0),
        FigureName::ErrgLam10 => errg(10.0),
        FigureName::IrgLam5 => irg(5.0),
        FigureName::IrgLam10 => irg(10.0),
        FigureName::ClGrgNr => {
            let model = |m: &str| parse(format!(r#"{{"n": {n}, "model": "{m}", "seed": {seed}}}"#));
            // degrees uniform on {1,…,5}: w = d/5 uniform on {0.2,…,1}, λ = 25/3
            let overlay = parse(
                r#"{"lambda": 8.333333333333334, "kernel": {"variant": "chung_lu"},
                    "weights": {"law": "discrete", "atoms": [0.2, 0.4, 0.6, 0.8, 1.0], "probs": [0.2, 0.2, 0.2, 0.2, 0.2]}}"#
                    .to_string(),
            );
            FigurePlan {
                overlay,
                samples: vec![("chung_lu", model("chung_lu")), ("grg", model("grg")), ("norros_riettu", model("norros_riettu"))],
            }
        }
    }
}

/// Writes `<name>_<model>_histogram.csv`, `<name>_overlay.csv` and a
/// `<name>.json` summary into `opts.out`.
pub fn figure(name: FigureName, opts: &FigureOptions) -> Result<()> {
    let need = figure_memory_bytes(opts.n);
    let budget = opts.memory_mb.saturating_mul(1 << 20);
    if need > budget {
        return Err(Error::resource(format!(
            "figure at N = {} needs about {} MiB for the dense eigensolve, over the {} MiB budget",
            opts.n,
            need >> 20,
            opts.memory_mb
        )));
    }
    let plan = figure_plan(name, opts.n, opts.seed);
    let xs = grid(opts.xmin, opts.xmax, opts.points)?;
    let tag = name.as_str();
    std::fs::create_dir_all(&opts.out)?;

    let mut samples = Vec::new();
    for (model, cfg) in &plan.samples {
        let loaded = LoadedConfig::from_config(cfg.clone());
        let ec = loaded.ensemble(None)?;
        let e = ec.realize()?;
        let adj = sample_adjacency(&ec)?;
        let vals = adjacency_eigenvalues(&adj, e.scale)?;
        let report = SpectralReport::new(
            vals,
            &Binning::FreedmanDiaconis,
            Metadata { config_hash: cfg.hash(), seed: opts.seed, replicate: 0, scale: e.scale },
        )?;
        let header = comment_line(&[("config_hash", cfg.hash()), ("seed", opts.seed.to_string())]);
        write_file(
            &opts.out.join(format!("{tag}_{model}_histogram.csv")),
            &histogram_csv(&header, &report.histogram),
        )?;
        samples.push(json!({
            "model": model,
            "config_hash": cfg.hash(),
            "lambda": e.lambda(),
            "scale": e.scale,
            "edges": adj.num_edges(),
            "moments": {
                "2": empirical_moment(&report, 2),
                "4": empirical_moment(&report, 4),
                "6": empirical_moment(&report, 6),
            },
        }));
    }

    let mut pairs = Vec::new();
    if plan.samples.len() > 1 {
        let ecs = plan
            .samples
            .iter()
            .map(|(_, c)| LoadedConfig::from_config(c.clone()).ensemble(None))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..ecs.len() {
            for j in i + 1..ecs.len() {
                let run = coupled_run(&ecs[i], &ecs[j], opts.seed)?;
                pairs.push(json!({
                    "a": plan.samples[i].0,
                    "b": plan.samples[j].0,
                    "levy_distance": run.levy,
                    "hw_bound": run.hw_bound,
                    "holds": run.holds(),
                }));
            }
        }
    }

    let overlay = LoadedConfig::from_config(plan.overlay.clone());
    let lambda = LambdaArg::Finite(overlay.lambda()?);
    let (dens, diag) = density_points(&overlay, &overlay.kernel()?, &overlay.weights()?, lambda, opts.eta, &xs)?;
    let header = comment_line(&[
        ("config_hash", plan.overlay.hash()),
        ("seed", opts.seed.to_string()),
        ("lambda", lambda.to_string()),
        ("eta", opts.eta.to_string()),
    ]);
    write_file(&opts.out.join(format!("{tag}_overlay.csv")), &density_csv(&header, &xs, &dens))?;

    let max_residual = diag.iter().filter_map(|d| d["residual"].as_f64()).fold(0.0, f64::max);
    let summary = json!({
        "figure": tag,
        "n": opts.n,
        "seed": opts.seed,
        "memory_estimate_mib": need >> 20,
        "memory_budget_mib": opts.memory_mb,
        "samples": samples,
        "coupled_pairs": pairs,
        "overlay": {
            "config_hash": plan.overlay.hash(),
            "lambda": lambda.to_string(),
            "eta": opts.eta,
            "points": xs.len(),
            "max_residual": max_residual,
        },
    });
    write_file(&opts.out.join(format!("{tag}.json")), &json_text(&summary))
}
