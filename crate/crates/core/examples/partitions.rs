//! Special Symmetric partitions: counts, γπ, the collapsed walk graph and the
//! Kreweras complement.
//!
//! cargo run --example partitions

use ier_spectra::partitions::{
    build_partition_graph, compose_gamma, enumerate_nc2, enumerate_set_partitions, enumerate_ss, is_special_symmetric,
    is_tree, kreweras_complement, Partition,
};

pub fn run_example() -> ier_spectra::Result<()> {
    println!(" k  |P(k)|  |SS(k)|  |NC2(k)|");
    for k in 1..=10 {
        let all = enumerate_set_partitions(k)?.len();
        let ss = enumerate_ss(k)?;
        let nc2 = enumerate_nc2(k)?.len();
        assert!(ss.iter().all(|p| is_tree(&build_partition_graph(p))));
        println!("{k:2}  {all:6}  {:7}  {nc2:8}", ss.len());
    }

    let p: Partition = "{1,2,5,6|3,4}".parse()?;
    let g = build_partition_graph(&p);
    println!("\nπ = {p}, γπ = {}", compose_gamma(&p));
    println!("graph vertices {:?}, edges {:?}, tree: {}", g.vertices, g.edges(), is_tree(&g));

    for s in ["{1,2,3,6|4,5,7,8}", "{1,4,5,8|2,3,6,7}", "{1,2,4,5|3,6,7,8}"] {
        let p: Partition = s.parse()?;
        println!("{s} special symmetric: {}", is_special_symmetric(&p));
    }

    let pairing: Partition = "{1,2|3,6|4,5|7,8}".parse()?;
    println!("\nK({pairing}) = {}", kreweras_complement(&pairing)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> ier_spectra::Result<()> {
    run_example()
}
