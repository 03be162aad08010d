use std::path::Path;
use std::process::Command;

use ier_spectra::cli::run_from;

fn run(args: &[&str]) -> i32 {
    run_from(std::iter::once("ier-spectra").chain(args.iter().copied()))
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    p(dir, name)
}

fn read(path: &str) -> String {
    std::fs::read_to_string(path).unwrap()
}

/// The CSV without its leading `#` line.
fn body(path: &str) -> String {
    read(path).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

fn json(path: &str) -> serde_json::Value {
    serde_json::from_str(&read(path)).unwrap()
}

#[test]
fn partitions_lists_and_emits_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "ss8.txt");
    assert_eq!(run(&["partitions", "--k", "8", "--ss-only", "--emit", "graphs", "--out", &out]), 0);
    let lines: Vec<String> = read(&out).lines().map(String::from).collect();
    assert_eq!(lines.len(), 57);
    assert!(lines.contains(&"{1,4,5,8|2,3,6,7}".to_string()));
    let graphs = std::fs::read_dir(dir.path().join("ss8_graphs")).unwrap().count();
    assert_eq!(graphs, 57);
    let g = read(&p(&dir.path().join("ss8_graphs"), "0001.csv"));
    assert!(g.starts_with("vertex_a,vertex_b,multiplicity\n"));

    let all = p(dir.path(), "all4.txt");
    assert_eq!(run(&["partitions", "--k", "4", "--out", &all]), 0);
    assert_eq!(read(&all).lines().count(), 15);
    assert_eq!(run(&["partitions", "--k", "13"]), 4);
    assert_eq!(run(&["partitions", "--k", "4", "--emit", "graphs"]), 2);
}

#[test]
fn moments_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "m.csv");
    assert_eq!(run(&["moments", "--k-max", "8", "--lambda", "10", "--out", &out]), 0);
    let text = read(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config_hash="));
    assert_eq!(lines.next().unwrap(), "k,lambda,value,nc2_part,remainder");
    let row4: Vec<f64> = lines.nth(3).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row4[0], 4.0);
    assert!((row4[2] - 2.1).abs() < 1e-12 && row4[3] == 2.0 && (row4[4] - 0.1).abs() < 1e-12);

    let dense = p(dir.path(), "d.csv");
    assert_eq!(run(&["moments", "--k-max", "6", "--lambda", "inf", "--out", &dense]), 0);
    assert!(body(&dense).ends_with("6,inf,5,5,0"));
    assert_eq!(run(&["moments", "--k-max", "14", "--lambda", "3"]), 4);
}

#[test]
fn sample_writes_edges_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 500, "lambda": 3, "model": "homogeneous", "seed": 4, "zero_diagonal": true}"#);
    let out = p(dir.path(), "graph.csv");
    assert_eq!(run(&["sample", "--config", &cfg, "--seed", "7", "--out", &out]), 0);
    let meta = json(&p(dir.path(), "graph.json"));
    assert_eq!(meta["n"], 500);
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["variant"], "homogeneous");
    assert_eq!(meta["loops"], 0);
    assert!((meta["scale"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-15);
    let b = body(&out);
    let mut rows = b.lines();
    assert_eq!(rows.next(), Some("i,j"));
    let edges: Vec<(u32, u32)> = rows
        .map(|r| {
            let (i, j) = r.split_once(',').unwrap();
            (i.parse().unwrap(), j.parse().unwrap())
        })
        .collect();
    assert_eq!(edges.len() as u64, meta["edges"].as_u64().unwrap());
    assert!(edges.iter().all(|&(i, j)| 1 <= i && i < j && j <= 500));
    assert!(read(&out).starts_with(&format!("# config_hash={} seed=7\n", meta["config_hash"].as_str().unwrap())));
}

#[test]
fn spectrum_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 300, "lambda": 5, "model": "homogeneous", "histogram": {"bins": 25}}"#);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        assert_eq!(run(&["spectrum", "--config", &cfg, "--seeds", "1..4", "--out", &p(d, "report.json")]), 0);
    }
    for f in ["histogram.csv", "eigenvalues.csv", "report.json"] {
        assert_eq!(read(&p(&a, f)), read(&p(&b, f)), "{f}");
    }
    let h = body(&p(&a, "histogram.csv"));
    assert!(h.starts_with("bin_left,bin_right,count\n"));
    let total: u64 = h.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 1200);
    let report = json(&p(&a, "report.json"));
    assert_eq!(report["runs"].as_array().unwrap().len(), 4);
    assert_eq!(report["seeds"], serde_json::json!([1, 2, 3, 4]));
    assert!((report["moments"]["2"]["mean"].as_f64().unwrap() - 1.0).abs() < 0.1);
}

#[test]
fn stieltjes_and_density() {
    let dir = tempfile::tempdir().unwrap();
    let st = p(dir.path(), "st.json");
    assert_eq!(run(&["stieltjes", "--z", "0+2i", "--lambda", "50", "--out", &st]), 0);
    let v = json(&st);
    let im = v["stieltjes"][1].as_f64().unwrap();
    assert!((im - (2f64.sqrt() - 1.0)).abs() < 2e-2);
    for key in ["residual", "iterations", "truncation_bound", "max_exponential", "x_variation"] {
        assert!(v["diagnostics"][key].is_number(), "{key}");
    }

    let dens = p(dir.path(), "density.csv");
    let args = ["density", "--lambda", "inf", "--eta", "0.05", "--xmin", "-3", "--xmax", "3", "--n", "61", "--out", &dens];
    assert_eq!(run(&args), 0);
    let b = body(&dens);
    let rows: Vec<(f64, f64)> = b
        .lines()
        .skip(1)
        .map(|l| {
            let (x, d) = l.split_once(',').unwrap();
            (x.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 61);
    assert_eq!(rows[30].0, 0.0);
    assert!((rows[30].1 - 1.0 / std::f64::consts::PI).abs() < 0.01);
    assert!(json(&p(dir.path(), "density.json"))["points"].is_array());

    let cfg = write(dir.path(), "short.json", r#"{"solver": {"max_iter": 2}}"#);
    assert_eq!(run(&["stieltjes", "--config", &cfg, "--z", "0+1i", "--lambda", "3"]), 3);
    assert_eq!(run(&["stieltjes", "--z", "0-1i", "--lambda", "3"]), 2);
}

#[test]
fn compare_reports_coupled_distances() {
    let dir = tempfile::tempdir().unwrap();
    let cl = write(dir.path(), "cl.json", r#"{"n": 400, "model": "chung_lu"}"#);
    let grg = write(dir.path(), "grg.json", r#"{"n": 400, "model": "grg"}"#);
    let small = write(dir.path(), "small.json", r#"{"n": 300, "model": "grg"}"#);
    let out = p(dir.path(), "cmp.json");
    assert_eq!(run(&["compare", "--config-a", &cl, "--config-b", &cl, "--seeds", "1..3", "--out", &out]), 0);
    let same = json(&out);
    for r in same["runs"].as_array().unwrap() {
        assert_eq!(r["levy_distance"], 0.0);
        assert_eq!(r["hw_bound"], 0.0);
    }
    assert_eq!(run(&["compare", "--config-a", &cl, "--config-b", &grg, "--seeds", "1..5", "--out", &out]), 0);
    let v = json(&out);
    assert_eq!(v["violations"], 0);
    assert!(v["mean_hw_bound"].as_f64().unwrap() > 0.0);
    assert_eq!(run(&["compare", "--config-a", &cl, "--config-b", &small]), 2);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "typo.json", r#"{"n": 10, "lamda": 3}"#);
    assert_eq!(run(&["sample", "--config", &typo, "--out", &p(dir.path(), "g.csv")]), 2);
    assert_eq!(run(&["sample", "--config", &p(dir.path(), "missing.json"), "--out", &p(dir.path(), "g.csv")]), 2);
    assert_eq!(run(&["figure", "--name", "nope"]), 2);
    assert_eq!(run(&["density", "--lambda", "3", "--eta", "0", "--xmin", "0", "--xmax", "1", "--n", "3", "--out", &p(dir.path(), "d.csv")]), 2);
}

#[test]
fn figure_respects_the_memory_budget() {
    let dir = tempfile::tempdir().unwrap();
    let out = p(dir.path(), "fig");
    assert_eq!(run(&["figure", "--name", "errg_lam10", "--memory-mb", "64", "--out", &out]), 4);
    assert_eq!(run(&["figure", "--name", "irg_lam5", "--n", "600", "--points", "7", "--out", &out]), 0);
    for f in ["irg_lam5_irg_histogram.csv", "irg_lam5_overlay.csv", "irg_lam5.json"] {
        assert!(dir.path().join("fig").join(f).exists(), "{f}");
    }
}

#[test]
fn binary_output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"n": 500, "lambda": 4, "model": "homogeneous"}"#);
    let mut outputs = vec![];
    for threads in ["1", "3"] {
        let out = p(dir.path(), &format!("t{threads}/report.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_ier-spectra"))
            .env("IER_SPECTRA_THREADS", threads)
            .args(["spectrum", "--config", &cfg, "--seeds", "1..3", "--out", &out])
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(read(&p(dir.path(), &format!("t{threads}/eigenvalues.csv"))));
    }
    assert_eq!(outputs[0], outputs[1]);
    let status = Command::new(env!("CARGO_BIN_EXE_ier-spectra")).args(["moments", "--k-max", "20", "--lambda", "2"]).status().unwrap();
    assert_eq!(status.code(), Some(4));
}
