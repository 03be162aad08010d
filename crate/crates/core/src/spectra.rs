//! Empirical spectra: eigenvalues, histograms, moments, Stieltjes transforms,
//! resolvent diagonals, Lévy distances and the Hoffman–Wielandt bound.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::eigen::{eigen_symmetric, eigenvalues_owned};
use crate::ensembles::{sample_adjacency, Adjacency, EnsembleConfig};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Highest moment stored in a report by default.
pub const REPORT_MOMENTS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub enum Binning {
    FreedmanDiaconis,
    Bins(usize),
    Width(f64),
}

impl Default for Binning {
    fn default() -> Self {
        Binning::FreedmanDiaconis
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `counts.len() + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Bins sorted data. Every value lands in a bin; the last bin is closed.
    pub fn new(sorted: &[f64], binning: &Binning) -> Result<Self> {
        let n = sorted.len();
        if n == 0 {
            return Ok(Histogram { edges: vec![0.0, 1.0], counts: vec![0] });
        }
        let (lo, hi) = (sorted[0], sorted[n - 1]);
        let span = hi - lo;
        let bins = match binning {
            Binning::Bins(b) => {
                if *b == 0 {
                    return Err(Error::config("histogram needs at least one bin"));
                }
                *b
            }
            Binning::Width(w) => {
                if !(*w > 0.0) {
                    return Err(Error::config(format!("bin width must be positive, got {w}")));
                }
                ((span / w).ceil() as usize).max(1)
            }
            Binning::FreedmanDiaconis => {
                let iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
                let w = 2.0 * iqr / (n as f64).cbrt();
                if w > 0.0 && span > 0.0 {
                    ((span / w).ceil() as usize).clamp(1, 10_000)
                } else {
                    ((n as f64).sqrt().ceil() as usize).max(1)
                }
            }
        };
        let width = match binning {
            Binning::Width(w) => *w,
            _ if span > 0.0 => span / bins as f64,
            _ => 1.0,
        };
        let lo = if span > 0.0 { lo } else { lo - 0.5 * width * bins as f64 };
        let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0u64; bins];
        for &x in sorted {
            let b = (((x - lo) / width).floor() as isize).clamp(0, bins as isize - 1) as usize;
            counts[b] += 1;
        }
        Ok(Histogram { edges, counts })
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let i = h.floor() as usize;
    let f = h - i as f64;
    if i + 1 < sorted.len() {
        sorted[i] + f * (sorted[i + 1] - sorted[i])
    } else {
        sorted[i]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Metadata {
    pub config_hash: String,
    pub seed: u64,
    pub replicate: u64,
    /// The divisor applied to the adjacency matrix.
    pub scale: f64,
}

/// The empirical spectral distribution of one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub histogram: Histogram,
    /// `k → (1/N) Σ λ_i^k` for `k = 0..=8`.
    pub moments: BTreeMap<usize, f64>,
    pub metadata: Metadata,
}

impl SpectralReport {
    pub fn new(mut eigenvalues: Vec<f64>, binning: &Binning, metadata: Metadata) -> Result<Self> {
        eigenvalues.sort_by(f64::total_cmp);
        let histogram = Histogram::new(&eigenvalues, binning)?;
        let moments = (0..=REPORT_MOMENTS).map(|k| (k, power_mean(&eigenvalues, k))).collect();
        Ok(SpectralReport { eigenvalues, histogram, moments, metadata })
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn power_mean(vals: &[f64], k: usize) -> f64 {
    if vals.is_empty() {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    vals.iter().map(|x| x.powi(k as i32)).sum::<f64>() / vals.len() as f64
}

/// `(1/N) Σ λ_i^k`.
pub fn empirical_moment(r: &SpectralReport, k: usize) -> f64 {
    match r.moments.get(&k) {
        Some(v) => *v,
        None => power_mean(&r.eigenvalues, k),
    }
}

fn check_upper(z: Complex64) -> Result<()> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!("z must lie in the upper half plane, got {z}")));
    }
    Ok(())
}

/// `(1/N) Σ 1/(λ_i - z)`.
pub fn empirical_stieltjes(r: &SpectralReport, z: Complex64) -> Result<Complex64> {
    check_upper(z)?;
    Ok(stieltjes_of(&r.eigenvalues, z))
}

pub(crate) fn stieltjes_of(vals: &[f64], z: Complex64) -> Complex64 {
    let s: Complex64 = vals.iter().map(|&l| 1.0 / (l - z)).sum();
    s / vals.len() as f64
}

/// Connected components of an undirected graph given by its edges; each
/// component is listed in increasing vertex order.
fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, j) in edges {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

fn adjacency_components(adj: &Adjacency) -> Vec<Vec<usize>> {
    components(adj.n, adj.edges.iter().map(|&(i, j)| (i as usize, j as usize)))
}

fn matrix_components(m: &SymMatrix) -> Vec<Vec<usize>> {
    let n = m.n();
    let pairs = (0..n).flat_map(move |j| (j + 1..n).map(move |i| (i, j)));
    components(n, pairs.filter(|&(i, j)| m.get(i, j) != 0.0))
}

/// The dense principal block of `adj / scale` on `idx` (sorted).
fn adjacency_block(adj: &Adjacency, scale: f64, idx: &[usize]) -> SymMatrix {
    let mut pos = vec![usize::MAX; adj.n];
    for (k, &v) in idx.iter().enumerate() {
        pos[v] = k;
    }
    let mut m = SymMatrix::zeros(idx.len());
    for &(i, j) in &adj.edges {
        let (a, b) = (pos[i as usize], pos[j as usize]);
        if a != usize::MAX {
            m.set(a, b, 1.0 / scale);
        }
    }
    m
}

/// Eigenvalues of `adj / scale`, ascending, solved one connected component
/// at a time.
pub fn adjacency_eigenvalues(adj: &Adjacency, scale: f64) -> Result<Vec<f64>> {
    if !(scale > 0.0) {
        return Err(Error::domain(format!("scale must be positive, got {scale}")));
    }
    let mut vals = Vec::with_capacity(adj.n);
    let mut loops = vec![false; adj.n];
    for &(i, j) in &adj.edges {
        if i == j {
            loops[i as usize] = true;
        }
    }
    for comp in adjacency_components(adj) {
        if comp.len() == 1 {
            vals.push(if loops[comp[0]] { 1.0 / scale } else { 0.0 });
            continue;
        }
        vals.extend(eigenvalues_owned(adjacency_block(adj, scale, &comp))?);
    }
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Samples one graph from `cfg` and reports the spectrum of its scaled
/// adjacency matrix. `config_hash` is left empty.
pub fn sample_spectrum(cfg: &EnsembleConfig, binning: &Binning) -> Result<SpectralReport> {
    let e = cfg.realize()?;
    let adj = sample_adjacency(cfg)?;
    let scale = e.scale;
    let vals = adjacency_eigenvalues(&adj, scale)?;
    SpectralReport::new(
        vals,
        binning,
        Metadata { config_hash: String::new(), seed: cfg.seed, replicate: cfg.replicate, scale },
    )
}

/// One eigendecomposition per connected block, reused for every `z`.
#[derive(Debug, Clone)]
pub struct Resolvent {
    n: usize,
    /// `(vertices, eigenvalues, column-major eigenvectors)`.
    blocks: Vec<(Vec<usize>, Vec<f64>, Vec<f64>)>,
}

impl Resolvent {
    pub fn from_matrix(m: &SymMatrix) -> Result<Self> {
        let blocks = matrix_components(m)
            .into_iter()
            .map(|idx| {
                let sub = m.submatrix(&idx);
                let (vals, vecs) = eigen_symmetric(&sub)?;
                Ok((idx, vals, vecs))
            })
            .collect::<Result<_>>()?;
        Ok(Resolvent { n: m.n(), blocks })
    }

    pub fn from_adjacency(adj: &Adjacency, scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::domain(format!("scale must be positive, got {scale}")));
        }
        let blocks = adjacency_components(adj)
            .into_iter()
            .map(|idx| {
                let sub = adjacency_block(adj, scale, &idx);
                let (vals, vecs) = eigen_symmetric(&sub)?;
                Ok((idx, vals, vecs))
            })
            .collect::<Result<_>>()?;
        Ok(Resolvent { n: adj.n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.1.iter().copied()).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `r_ii = Σ_k v_k(i)² / (λ_k - z)`.
    pub fn diagonal(&self, z: Complex64) -> Result<Vec<Complex64>> {
        check_upper(z)?;
        let mut out = vec![Complex64::new(0.0, 0.0); self.n];
        for (idx, vals, vecs) in &self.blocks {
            let m = idx.len();
            let w: Vec<Complex64> = vals.iter().map(|&l| 1.0 / (l - z)).collect();
            for (c, wc) in w.iter().enumerate() {
                let col = &vecs[c * m..(c + 1) * m];
                for (r, v) in col.iter().enumerate() {
                    out[idx[r]] += wc * (v * v);
                }
            }
        }
        Ok(out)
    }

    /// `G_N(u, z) = (1/N) Σ exp(ι u r_ii(z))`.
    pub fn g_n(&self, u: f64, z: Complex64) -> Result<Complex64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("u must lie in [0, 1], got {u}")));
        }
        let d = self.diagonal(z)?;
        let i = Complex64::i();
        Ok(d.iter().map(|r| (i * u * r).exp()).sum::<Complex64>() / self.n as f64)
    }
}

pub fn resolvent_diagonal(m: &SymMatrix, z: Complex64) -> Result<Vec<Complex64>> {
    check_upper(z)?;
    Resolvent::from_matrix(m)?.diagonal(z)
}

#[allow(non_snake_case)]
pub fn compute_GN(m: &SymMatrix, u: f64, z: Complex64) -> Result<Complex64> {
    check_upper(z)?;
    Resolvent::from_matrix(m)?.g_n(u, z)
}

/// Lévy distance between the empirical distributions of two sorted samples:
/// the least `ε` with `F(x - ε) - ε ≤ G(x) ≤ F(x + ε) + ε` for all `x`.
pub fn levy_distance_sorted(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return if a.len() == b.len() { 0.0 } else { 1.0 };
    }
    let cdf = |s: &[f64], x: f64| s.partition_point(|&v| v <= x) as f64 / s.len() as f64;
    // both inequalities only need checking where the left side jumps
    let holds = |eps: f64| {
        let lower = a.iter().all(|&x| cdf(b, x + eps) >= cdf(a, x) - eps);
        let upper = b.iter().all(|&x| cdf(b, x) <= cdf(a, x + eps) + eps);
        let lower2 = b.iter().all(|&x| cdf(a, x + eps) >= cdf(b, x) - eps);
        let upper2 = a.iter().all(|&x| cdf(a, x) <= cdf(b, x + eps) + eps);
        lower && upper && lower2 && upper2
    };
    if holds(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn levy_distance(r1: &SpectralReport, r2: &SpectralReport) -> f64 {
    levy_distance_sorted(&r1.eigenvalues, &r2.eigenvalues)
}

/// `(1/N) Σ_ij (a_ij - b_ij)²`, which bounds the cubed Lévy distance.
pub fn hw_bound(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    if a.n() != b.n() {
        return Err(Error::domain(format!("shape mismatch: {} vs {}", a.n(), b.n())));
    }
    let s: f64 = a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok(s / a.n() as f64)
}

/// [`hw_bound`] for `a / sa` against `b / sb` without densifying.
pub fn hw_bound_adjacency(a: &Adjacency, sa: f64, b: &Adjacency, sb: f64) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::domain(format!("shape mismatch: {} vs {}", a.n, b.n)));
    }
    let (va, vb) = (1.0 / sa, 1.0 / sb);
    let (mut i, mut j, mut s) = (0, 0, 0.0);
    let mut add = |e: (u32, u32), d: f64| s += if e.0 == e.1 { d * d } else { 2.0 * d * d };
    while i < a.edges.len() || j < b.edges.len() {
        match (a.edges.get(i), b.edges.get(j)) {
            (Some(x), Some(y)) if x == y => {
                add(*x, va - vb);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                add(*x, va);
                i += 1;
            }
            (Some(x), None) => {
                add(*x, va);
                i += 1;
            }
            (_, Some(y)) => {
                add(*y, vb);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(s / a.n as f64)
}

/// `(1/N) Tr (A / scale)^k` from sparse walks, without eigenvalues.
pub fn normalized_trace_power(adj: &Adjacency, scale: f64, k: usize) -> f64 {
    let n = adj.n;
    if k == 0 {
        return 1.0;
    }
    let nb = adj.neighbours();
    let half = k / 2;
    let mut cur = vec![0.0f64; n];
    let mut next = vec![0.0f64; n];
    let mut total = 0.0;
    let mut touched: Vec<usize> = Vec::new();
    let mut flags = vec![false; n];
    for i in 0..n {
        // walk counts from i after `half` and `k - half` steps
        for &t in &touched {
            cur[t] = 0.0;
        }
        touched.clear();
        cur[i] = 1.0;
        touched.push(i);
        let mut after_half = Vec::new();
        for step in 1..=k - half {
            let mut new_touched = Vec::new();
            for &t in &touched {
                let c = cur[t];
                for &u in &nb[t] {
                    let u = u as usize;
                    if !flags[u] {
                        flags[u] = true;
                        new_touched.push(u);
                    }
                    next[u] += c;
                }
            }
            for &t in &touched {
                cur[t] = 0.0;
            }
            for &u in &new_touched {
                flags[u] = false;
                cur[u] = next[u];
                next[u] = 0.0;
            }
            touched = new_touched;
            if step == half {
                after_half = touched.iter().map(|&t| (t, cur[t])).collect();
            }
        }
        if half == 0 {
            total += cur[i];
        } else {
            total += after_half.iter().map(|&(t, c)| c * cur[t]).sum::<f64>();
        }
    }
    total / n as f64 / scale.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::EnsembleConfig;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn report(v: Vec<f64>) -> SpectralReport {
        SpectralReport::new(v, &Binning::default(), Metadata::default()).unwrap()
    }

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymMatrix::from_lower(n, |_, _| crate::kernels::unit(rng.next_u64()) * 2.0 - 1.0)
    }

    #[test]
    fn stieltjes_examples() {
        let r = report(vec![0.0]);
        assert!((empirical_stieltjes(&r, c(0.0, 1.0)).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
        let r = report(vec![1.0, -1.0]);
        let want = 0.5 * (1.0 / c(-1.0, -2.0) + 1.0 / c(1.0, -2.0));
        let got = empirical_stieltjes(&r, c(0.0, 2.0)).unwrap();
        assert!((got - want).norm() < 1e-15);
        assert!((got - c(0.0, 0.4)).norm() < 1e-15);
        assert!(empirical_stieltjes(&r, c(1.0, 0.0)).is_err());
        assert!(empirical_stieltjes(&r, c(1.0, -1.0)).is_err());
    }

    #[test]
    fn report_invariants() {
        let m = random_sym(50, 3);
        let r = report(crate::eigen::eigenvalues_symmetric(&m).unwrap());
        assert!(r.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.histogram.counts.iter().sum::<u64>(), 50);
        assert_eq!(r.histogram.edges.len(), r.histogram.counts.len() + 1);
        assert!((r.moments[&1] * 50.0 - m.trace()).abs() < 1e-8 * 50.0);
        assert!((r.moments[&2] * 50.0 - m.frobenius_sq()).abs() < 1e-8 * m.frobenius_sq());
        assert_eq!(empirical_moment(&r, 0), 1.0);
        for b in [Binning::Bins(7), Binning::Width(0.3)] {
            let h = Histogram::new(&r.eigenvalues, &b).unwrap();
            assert_eq!(h.counts.iter().sum::<u64>(), 50);
        }
        let h = Histogram::new(&[2.0, 2.0, 2.0], &Binning::default()).unwrap();
        assert_eq!(h.counts.iter().sum::<u64>(), 3);
        assert!(h.edges[0] < 2.0 && *h.edges.last().unwrap() > 2.0);
    }

    #[test]
    fn second_moment_of_scaled_adjacency() {
        let cfg = EnsembleConfig::homogeneous(300, 4.0, 11);
        let adj = sample_adjacency(&cfg).unwrap();
        let e = cfg.realize().unwrap();
        let r = sample_spectrum(&cfg, &Binning::default()).unwrap();
        let sum_sq = (2 * adj.num_edges() + adj.num_loops()) as f64;
        let want = sum_sq / (300.0 * e.lambda());
        assert!((empirical_moment(&r, 2) - want).abs() < 1e-10);
        for k in 1..=6 {
            let t = normalized_trace_power(&adj, e.scale, k);
            assert!((t - empirical_moment(&r, k)).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn component_split_matches_dense() {
        let cfg = EnsembleConfig::homogeneous(200, 1.5, 5);
        let adj = sample_adjacency(&cfg).unwrap();
        let split = adjacency_eigenvalues(&adj, 1.3).unwrap();
        let dense = crate::eigen::eigenvalues_symmetric(&adj.to_dense(1.3)).unwrap();
        for (a, b) in split.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn resolvent_examples() {
        let d = resolvent_diagonal(&SymMatrix::zeros(1), c(0.0, 1.0)).unwrap();
        assert!((d[0] - c(0.0, 1.0)).norm() < 1e-15);
        let diag = [0.5, -1.0, 2.0];
        let m = SymMatrix::from_lower(3, |i, j| if i == j { diag[i] } else { 0.0 });
        let z = c(0.3, 0.7);
        for (r, a) in resolvent_diagonal(&m, z).unwrap().iter().zip(diag) {
            assert!((r - 1.0 / (a - z)).norm() < 1e-14);
        }
        let g = compute_GN(&SymMatrix::zeros(1), 1.0, c(0.0, 1.0)).unwrap();
        assert!((g - c((-1f64).exp(), 0.0)).norm() < 1e-15);
        assert_eq!(compute_GN(&m, 0.0, z).unwrap(), c(1.0, 0.0));
    }

    /// `(M - zI)^{-1} e_i` by Gaussian elimination with partial pivoting.
    fn solve_column(m: &SymMatrix, z: Complex64, i: usize) -> Vec<Complex64> {
        let n = m.n();
        let mut a: Vec<Vec<Complex64>> = (0..n)
            .map(|r| {
                let mut row: Vec<Complex64> = (0..n).map(|c2| c(m.get(r, c2), 0.0)).collect();
                row[r] -= z;
                row.push(c(if r == i { 1.0 } else { 0.0 }, 0.0));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).unwrap();
            a.swap(col, p);
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c2 in col..=n {
                    let t = a[col][c2];
                    a[r][c2] -= f * t;
                }
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for r in (0..n).rev() {
            let mut s = a[r][n];
            for c2 in r + 1..n {
                s -= a[r][c2] * x[c2];
            }
            x[r] = s / a[r][r];
        }
        x
    }

    #[test]
    fn resolvent_matches_linear_solve() {
        let m = random_sym(3, 8);
        let z = c(0.2, 0.9);
        let d = resolvent_diagonal(&m, z).unwrap();
        for i in 0..3 {
            let x = solve_column(&m, z, i);
            assert!((d[i] - x[i]).norm() < 1e-10);
            assert!(d[i].im > 0.0 && d[i].norm() <= 1.0 / z.im + 1e-12);
        }
    }

    #[test]
    fn gn_derivative_at_zero() {
        let m = random_sym(40, 2);
        let z = c(0.1, 1.0);
        let res = Resolvent::from_matrix(&m).unwrap();
        let h = 1e-6;
        let fd = (res.g_n(h, z).unwrap() - 1.0) / h;
        let st = stieltjes_of(&res.eigenvalues(), z);
        assert!((fd - Complex64::i() * st).norm() < 1e-4);
        assert!(res.g_n(0.7, z).unwrap().norm() <= 1.0);
    }

    /// Lévy distance by scanning `ε` upward on a fine grid and testing the
    /// defining inequalities on a fine `x` grid.
    fn levy_oracle(a: &[f64], b: &[f64]) -> f64 {
        let cdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
        let xs: Vec<f64> = (0..=4000).map(|i| -2.0 + i as f64 * 0.001).collect();
        for step in 0..=1000 {
            let eps = step as f64 * 0.001;
            let ok = xs.iter().all(|&x| {
                cdf(a, x - eps) - eps <= cdf(b, x) + 1e-12 && cdf(b, x) <= cdf(a, x + eps) + eps + 1e-12
            });
            if ok {
                return eps;
            }
        }
        1.0
    }

    #[test]
    fn levy_examples() {
        let a = [0.1, 0.5, 0.9];
        assert_eq!(levy_distance_sorted(&a, &a), 0.0);
        let d = levy_distance_sorted(&[0.0], &[1.0]);
        assert!((d - levy_oracle(&[0.0], &[1.0])).abs() < 2e-3);
        assert!((d - 1.0).abs() < 1e-9);
        let d = levy_distance_sorted(&[0.0], &[0.3]);
        assert!((d - 0.3).abs() < 1e-9);
        let (x, y) = ([-0.4, 0.0, 0.2, 0.7], [-0.1, 0.1, 0.15, 0.5]);
        assert!((levy_distance_sorted(&x, &y) - levy_oracle(&x, &y)).abs() < 2e-3);
    }

    #[test]
    fn hw_examples() {
        let a = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let z = SymMatrix::zeros(2);
        assert_eq!(hw_bound(&a, &a).unwrap(), 0.0);
        assert_eq!(hw_bound(&a, &z).unwrap(), 1.0);
        assert!(hw_bound(&a, &SymMatrix::zeros(3)).is_err());
        let cfg_a = EnsembleConfig::homogeneous(60, 5.0, 1);
        let cfg_b = EnsembleConfig::homogeneous(60, 5.0, 2);
        let (x, y) = (sample_adjacency(&cfg_a).unwrap(), sample_adjacency(&cfg_b).unwrap());
        let sparse = hw_bound_adjacency(&x, 2.0, &y, 3.0).unwrap();
        let dense = hw_bound(&x.to_dense(2.0), &y.to_dense(3.0)).unwrap();
        assert!((sparse - dense).abs() < 1e-12);
    }
}
