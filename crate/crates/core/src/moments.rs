//! Limiting moments: the sparse sum over Special Symmetric partitions, its
//! dense (non-crossing pairing) part, and free multiplicative convolution
//! moments with the semicircle.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kernels::{homomorphism_density, Kernel, WeightModel};
use crate::partitions::{
    build_partition_graph, enumerate_ss, kreweras_complement, Partition, PartitionGraph, MAX_K,
};

/// One term `λ^exponent · t(G_γπ, f, μ_w)` of the moment sum.
#[derive(Debug, Clone)]
pub struct Contribution {
    pub partition: Partition,
    /// `|γπ|`, the number of vertices of the walk graph.
    pub gamma_blocks: usize,
    /// `|γπ| - 1 - k/2`, between `1 - k/2` and `0`.
    pub exponent: i32,
    pub density: f64,
}

#[derive(Debug, Clone)]
pub struct MomentReport {
    pub k: usize,
    /// `f64::INFINITY` for the dense limit.
    pub lambda: f64,
    pub value: f64,
    pub per_partition: Vec<Contribution>,
}

impl MomentReport {
    /// The exponent-0 terms, i.e. the non-crossing pairings.
    pub fn nc2_part(&self) -> f64 {
        self.per_partition.iter().filter(|c| c.exponent == 0).fold(0.0, |s, c| s + c.density)
    }

    /// Everything beyond the non-crossing pairings.
    pub fn remainder(&self) -> f64 {
        self.value - self.nc2_part()
    }
}

fn ss_graphs(k: usize) -> Result<&'static [(Partition, PartitionGraph)]> {
    static CACHE: [OnceLock<Vec<(Partition, PartitionGraph)>>; MAX_K + 1] = [const { OnceLock::new() }; MAX_K + 1];
    if k > MAX_K {
        return Err(Error::resource(format!("moment order {k} above the cap {MAX_K}")));
    }
    if let Some(v) = CACHE[k].get() {
        return Ok(v);
    }
    let list = enumerate_ss(k)?
        .into_iter()
        .map(|p| {
            let g = build_partition_graph(&p);
            (p, g)
        })
        .collect();
    Ok(CACHE[k].get_or_init(|| list))
}

/// `m_k(μ_λ) = Σ_{π ∈ SS(k)} λ^{|γπ| - 1 - k/2} t(G_γπ, f, μ_w)`.
/// Odd `k` gives 0 and `k = 0` gives the total mass 1, both with no terms.
pub fn limiting_moment(k: usize, lambda: f64, f: &Kernel, mu: &WeightModel) -> Result<MomentReport> {
    if !(lambda > 0.0) {
        return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
    }
    moment_sum(k, lambda, f, mu, false)
}

/// The λ → ∞ limit: the same sum restricted to non-crossing pairings.
pub fn dense_moment(k: usize, f: &Kernel, mu: &WeightModel) -> Result<f64> {
    Ok(moment_sum(k, f64::INFINITY, f, mu, true)?.value)
}

/// Full report for the dense limit.
pub fn dense_moment_report(k: usize, f: &Kernel, mu: &WeightModel) -> Result<MomentReport> {
    moment_sum(k, f64::INFINITY, f, mu, true)
}

fn moment_sum(k: usize, lambda: f64, f: &Kernel, mu: &WeightModel, pairings_only: bool) -> Result<MomentReport> {
    let mut report = MomentReport {
        k,
        lambda,
        value: if k == 0 { 1.0 } else { 0.0 },
        per_partition: Vec::new(),
    };
    if k > MAX_K {
        return Err(Error::resource(format!("moment order {k} above the cap {MAX_K}")));
    }
    if k == 0 || k % 2 == 1 {
        return Ok(report);
    }
    let half = (k / 2) as i32;
    for (p, g) in ss_graphs(k)? {
        let exponent = g.num_vertices() as i32 - 1 - half;
        if pairings_only && exponent != 0 {
            continue;
        }
        let density = homomorphism_density(g, f, mu)?;
        report.per_partition.push(Contribution {
            partition: p.clone(),
            gamma_blocks: g.num_vertices(),
            exponent,
            density,
        });
    }
    report.value = report
        .per_partition
        .iter()
        .map(|c| if c.exponent == 0 { c.density } else { lambda.powi(c.exponent) * c.density })
        .sum();
    Ok(report)
}

/// Non-crossing pair partitions of `{1..k}`, built directly by matching 1
/// with an even-distance partner and recursing on the inside and outside.
pub fn noncrossing_pairings(k: usize) -> Vec<Partition> {
    fn rec(lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
        // pairings of lo..hi (inclusive-exclusive)
        if lo == hi {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for j in (lo + 1..hi).step_by(2) {
            for inner in rec(lo + 1, j) {
                for outer in rec(j + 1, hi) {
                    let mut b = vec![vec![lo, j]];
                    b.extend(inner.iter().cloned());
                    b.extend(outer.iter().cloned());
                    out.push(b);
                }
            }
        }
        out
    }
    if k % 2 == 1 {
        return Vec::new();
    }
    rec(1, k + 1)
        .into_iter()
        .map(|b| Partition::new(k, b).expect("pairing covers the ground set"))
        .collect()
}

/// `∫ x^k (μ_w ⊠ μ_s)(dx) = Σ_{π ∈ NC_2(k)} Π_j ∫ x^{b_j(K(π))} μ_w(dx)`.
pub fn free_mult_semicircle_moment(k: usize, mu: &WeightModel) -> Result<f64> {
    if k % 2 == 1 {
        return Err(Error::domain(format!("free multiplicative moments are defined for even k, got {k}")));
    }
    if k > MAX_K {
        return Err(Error::resource(format!("moment order {k} above the cap {MAX_K}")));
    }
    let (x, m) = mu.quadrature();
    let power_moment = |p: usize| -> f64 { x.iter().zip(&m).map(|(xi, mi)| mi * xi.powi(p as i32)).sum() };
    let mut total = 0.0;
    for pi in noncrossing_pairings(k) {
        let kc = kreweras_complement(&pi)?;
        total += kc.blocks().iter().map(|b| power_moment(b.len())).product::<f64>();
    }
    Ok(total)
}
