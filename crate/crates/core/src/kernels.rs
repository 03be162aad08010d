//! Connectivity kernels `f(x, y)`, weight laws `μ_w`, the mean-degree
//! function `d_f` and homomorphism densities `t(H, f, μ_w)`.

use std::fmt;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::partitions::PartitionGraph;

/// Gauss–Legendre nodes per dimension for the uniform weight law.
pub const UNIFORM_NODES: usize = 64;

/// Largest graph the exact homomorphism-density backend accepts.
pub const MAX_HOM_VERTICES: usize = 8;

/// Largest `|atoms|^v` for brute-force summation over non-forest graphs.
pub const MAX_HOM_TERMS: f64 = 1e7;

/// A bounded profile `r` for rank-one and finite-rank kernels.
#[derive(Clone)]
pub enum Profile {
    /// `r(x) = c`.
    Constant(f64),
    /// `r(x) = a x`.
    Linear(f64),
    /// `r(x) = x / (1 + x)`.
    Saturating,
    /// `r(x) = x^p`, `p > 0`.
    Power(f64),
    /// User function with declared sup-norm and Lipschitz constant on the
    /// weight support.
    Custom {
        name: String,
        r: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        sup: f64,
        lipschitz: f64,
    },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Linear(a) => write!(f, "Linear({a})"),
            Profile::Saturating => write!(f, "Saturating"),
            Profile::Power(p) => write!(f, "Power({p})"),
            Profile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Profile {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Linear(a) => a * x,
            Profile::Saturating => x / (1.0 + x),
            Profile::Power(p) => x.powf(*p),
            Profile::Custom { r, .. } => r(x),
        }
    }

    fn sup(&self, s: f64) -> f64 {
        match self {
            Profile::Constant(c) => c.abs(),
            Profile::Linear(a) => a.abs() * s,
            Profile::Saturating => s / (1.0 + s),
            Profile::Power(p) => s.powf(*p),
            Profile::Custom { sup, .. } => *sup,
        }
    }

    fn lipschitz(&self, s: f64) -> f64 {
        match self {
            Profile::Constant(_) => 0.0,
            Profile::Linear(a) => a.abs(),
            Profile::Saturating => 1.0,
            Profile::Power(p) if *p >= 1.0 => p * s.powf(p - 1.0),
            Profile::Power(_) => f64::INFINITY,
            Profile::Custom { lipschitz, .. } => *lipschitz,
        }
    }
}

/// A kernel given on a square grid, interpolated bilinearly.
#[derive(Debug, Clone)]
pub struct Table {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    /// Builds a table from `(x, y, value)` triples covering a full square grid.
    /// The values are symmetrised by averaging `f(x, y)` and `f(y, x)`.
    pub fn from_triples(triples: &[(f64, f64, f64)]) -> Result<Self> {
        let mut grid: Vec<f64> = triples.iter().flat_map(|t| [t.0, t.1]).collect();
        if grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::config("table coordinates must be finite and nonnegative"));
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let n = grid.len();
        if n < 2 {
            return Err(Error::config("table needs at least two grid points"));
        }
        let mut values = vec![f64::NAN; n * n];
        let index = |v: f64| grid.binary_search_by(|g| g.total_cmp(&v)).unwrap();
        for &(x, y, v) in triples {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::config(format!("table value {v} at ({x}, {y}) must be finite and nonnegative")));
            }
            values[index(x) * n + index(y)] = v;
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::config("table does not cover the full square grid"));
        }
        let mut sym = values.clone();
        for i in 0..n {
            for j in 0..n {
                sym[i * n + j] = 0.5 * (values[i * n + j] + values[j * n + i]);
            }
        }
        Ok(Table { grid, values: sym })
    }

    pub fn max_coordinate(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn min_coordinate(&self) -> f64 {
        self.grid[0]
    }

    fn cell(&self, x: f64) -> (usize, f64) {
        let n = self.grid.len();
        let x = x.clamp(self.grid[0], self.grid[n - 1]);
        let i = match self.grid.binary_search_by(|g| g.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let t = (x - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        (i, t)
    }

    fn eval(&self, x: f64, y: f64) -> f64 {
        let n = self.grid.len();
        let (i, s) = self.cell(x);
        let (j, t) = self.cell(y);
        let v = |a: usize, b: usize| self.values[a * n + b];
        (1.0 - s) * (1.0 - t) * v(i, j) + s * (1.0 - t) * v(i + 1, j) + (1.0 - s) * t * v(i, j + 1) + s * t * v(i + 1, j + 1)
    }

    fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    fn max_slope(&self) -> f64 {
        let n = self.grid.len();
        let mut m: f64 = 0.0;
        for i in 0..n - 1 {
            let h = self.grid[i + 1] - self.grid[i];
            for j in 0..n {
                m = m.max((self.values[(i + 1) * n + j] - self.values[i * n + j]).abs() / h);
            }
        }
        m
    }
}

/// The connectivity function `f`.
#[derive(Debug, Clone)]
pub enum Kernel {
    Constant(f64),
    /// `f(x, y) = r(x) r(y)`.
    Rank1(Profile),
    /// `f(x, y) = Σ_i r_i(x) r_i(y)`.
    FiniteRank(Vec<Profile>),
    /// `min(xy, 1)`.
    ChungLu,
    /// `xy / (1 + xy)`.
    Grg,
    /// `1 - exp(-xy)`.
    NorrosRiettu,
    Tabulated(Table),
}

impl Kernel {
    /// `f(x, y)` without argument checks. Tabulated kernels clamp to their
    /// rectangle here; use [`eval_kernel`] for checked evaluation.
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Kernel::Constant(c) => *c,
            Kernel::Rank1(r) => r.eval(x) * r.eval(y),
            Kernel::FiniteRank(rs) => rs.iter().map(|r| r.eval(x) * r.eval(y)).sum(),
            Kernel::ChungLu => (x * y).min(1.0),
            Kernel::Grg => x * y / (1.0 + x * y),
            Kernel::NorrosRiettu => -(-x * y).exp_m1(),
            Kernel::Tabulated(t) => t.eval(x, y),
        }
    }

    /// `C_f`: a bound on `f` over `[0, support_max]²`.
    pub fn bound(&self, support_max: f64) -> f64 {
        let s = support_max;
        match self {
            Kernel::Constant(c) => c.abs(),
            Kernel::Rank1(r) => r.sup(s).powi(2),
            Kernel::FiniteRank(rs) => rs.iter().map(|r| r.sup(s).powi(2)).sum(),
            Kernel::ChungLu => (s * s).min(1.0),
            Kernel::Grg => s * s / (1.0 + s * s),
            Kernel::NorrosRiettu => -(-s * s).exp_m1(),
            Kernel::Tabulated(t) => t.max_value(),
        }
    }

    /// `C_L`: a Lipschitz constant in one coordinate over `[0, support_max]²`.
    pub fn lipschitz(&self, support_max: f64) -> f64 {
        let s = support_max;
        match self {
            Kernel::Constant(_) => 0.0,
            Kernel::Rank1(r) => r.lipschitz(s) * r.sup(s),
            Kernel::FiniteRank(rs) => rs.iter().map(|r| r.lipschitz(s) * r.sup(s)).sum(),
            Kernel::ChungLu | Kernel::Grg | Kernel::NorrosRiettu => s,
            Kernel::Tabulated(t) => t.max_slope(),
        }
    }

    /// Rejects weight laws whose support leaves the tabulated rectangle.
    pub fn check_support(&self, mu: &WeightModel) -> Result<()> {
        if let Kernel::Tabulated(t) = self {
            let (lo, hi) = mu.support_range();
            if lo < t.min_coordinate() || hi > t.max_coordinate() {
                return Err(Error::domain(format!(
                    "weights span [{lo}, {hi}] but the table covers [{}, {}]",
                    t.min_coordinate(),
                    t.max_coordinate()
                )));
            }
        }
        Ok(())
    }

    /// Spot-checks `0 ≤ f ≤ C_f` and symmetry on 10⁴ pseudo-random points of
    /// the weight support.
    pub fn check_bound(&self, mu: &WeightModel) -> Result<()> {
        self.check_support(mu)?;
        let (lo, hi) = mu.support_range();
        let c = self.bound(hi);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b65726e);
        for _ in 0..10_000 {
            let x = lo + (hi - lo) * unit(rng.next_u64());
            let y = lo + (hi - lo) * unit(rng.next_u64());
            let v = self.eval(x, y);
            let tol = 1e-12 * c.max(1.0);
            if !(v >= -tol && v <= c + tol) {
                return Err(Error::domain(format!("f({x}, {y}) = {v} violates 0 ≤ f ≤ C_f = {c}")));
            }
            if (v - self.eval(y, x)).abs() > tol {
                return Err(Error::domain(format!("f is not symmetric at ({x}, {y})")));
            }
        }
        Ok(())
    }
}

/// Uniform draw in `[0, 1)` from 53 random bits.
#[inline]
pub(crate) fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Checked `f(x, y)`: negative arguments and points off a table are domain
/// errors.
pub fn eval_kernel(f: &Kernel, x: f64, y: f64) -> Result<f64> {
    if !(x >= 0.0 && y >= 0.0) {
        return Err(Error::domain(format!("kernel arguments must be nonnegative, got ({x}, {y})")));
    }
    if let Kernel::Tabulated(t) = f {
        let (lo, hi) = (t.min_coordinate(), t.max_coordinate());
        if x < lo || y < lo || x > hi || y > hi {
            return Err(Error::domain(format!("({x}, {y}) lies outside the table [{lo}, {hi}]²")));
        }
    }
    Ok(f.eval(x, y))
}

/// The weight law `μ_w`.
#[derive(Debug, Clone)]
pub enum WeightModel {
    /// Equal mass `1/N` on each entry.
    Empirical(Vec<f64>),
    Discrete { atoms: Vec<f64>, probs: Vec<f64> },
    /// Uniform on `[0, 1]`, integrated with `nodes`-point Gauss–Legendre.
    Uniform01 { nodes: usize },
}

impl WeightModel {
    pub fn empirical(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::config("empirical weights are empty"));
        }
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::config("empirical weights must be finite and nonnegative"));
        }
        Ok(WeightModel::Empirical(w))
    }

    pub fn discrete(atoms: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if atoms.len() != probs.len() || atoms.is_empty() {
            return Err(Error::config("atoms and probs must be nonempty and of equal length"));
        }
        if atoms.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::config("atoms must be finite and nonnegative"));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::config("probs must be nonnegative"));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::config(format!("probs sum to {s}, not 1")));
        }
        Ok(WeightModel::Discrete { atoms, probs })
    }

    pub fn uniform01() -> Self {
        WeightModel::Uniform01 { nodes: UNIFORM_NODES }
    }

    /// Point mass at `c`.
    pub fn dirac(c: f64) -> Result<Self> {
        Self::discrete(vec![c], vec![1.0])
    }

    pub fn support_max(&self) -> f64 {
        self.support_range().1
    }

    pub(crate) fn support_range(&self) -> (f64, f64) {
        match self {
            WeightModel::Empirical(w) => range(w),
            WeightModel::Discrete { atoms, probs } => {
                let kept: Vec<f64> = atoms.iter().zip(probs).filter(|(_, p)| **p > 0.0).map(|(a, _)| *a).collect();
                range(&kept)
            }
            WeightModel::Uniform01 { .. } => (0.0, 1.0),
        }
    }

    /// The law as a finite quadrature `(nodes, masses)`. Empirical weights are
    /// merged on exact ties, which keeps nodes few for integer degrees.
    pub fn quadrature(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            WeightModel::Empirical(w) => {
                let mut sorted = w.clone();
                sorted.sort_by(f64::total_cmp);
                let mass = 1.0 / w.len() as f64;
                let mut nodes: Vec<f64> = Vec::new();
                let mut counts: Vec<usize> = Vec::new();
                for x in sorted {
                    if nodes.last() == Some(&x) {
                        *counts.last_mut().unwrap() += 1;
                    } else {
                        nodes.push(x);
                        counts.push(1);
                    }
                }
                let masses = counts.iter().map(|&c| c as f64 * mass).collect();
                (nodes, masses)
            }
            WeightModel::Discrete { atoms, probs } => (atoms.clone(), probs.clone()),
            WeightModel::Uniform01 { nodes } => {
                let g = GaussLegendre::new((*nodes).try_into().expect("at least one node"));
                let x = g.nodes().map(|t| 0.5 * (t + 1.0)).collect();
                let m = g.weights().map(|w| 0.5 * w).collect();
                (x, m)
            }
        }
    }

    /// `n` i.i.d. draws from the law using the given bit source. Empirical
    /// laws are resampled uniformly from their entries.
    pub fn sample(&self, n: usize, mut bits: impl FnMut() -> u64) -> Vec<f64> {
        match self {
            WeightModel::Uniform01 { .. } => (0..n).map(|_| unit(bits())).collect(),
            WeightModel::Empirical(w) => (0..n).map(|_| w[(unit(bits()) * w.len() as f64) as usize]).collect(),
            WeightModel::Discrete { atoms, probs } => (0..n)
                .map(|_| {
                    let u = unit(bits());
                    let mut acc = 0.0;
                    for (a, p) in atoms.iter().zip(probs) {
                        acc += p;
                        if u < acc {
                            return *a;
                        }
                    }
                    *atoms.last().unwrap()
                })
                .collect(),
        }
    }
}

fn range(w: &[f64]) -> (f64, f64) {
    w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// `d_f(y) = ∫ f(x, y) μ_w(dx)`.
pub fn mean_degree_function(f: &Kernel, mu: &WeightModel, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::domain(format!("d_f needs y ≥ 0, got {y}")));
    }
    let (x, m) = mu.quadrature();
    Ok(x.iter().zip(&m).map(|(xi, mi)| mi * f.eval(*xi, y)).sum())
}

/// Distinct edges of `h` including self-loops, as `(a, b)` with `a <= b`.
fn hom_edges(h: &PartitionGraph) -> Vec<(usize, usize)> {
    h.walk_multiplicity.keys().copied().collect()
}

/// `t(H, f, μ_w) = ∫ Π_{(a,b) ∈ E(H)} f(w_a, w_b) dμ_w^{⊗v}` over distinct
/// edges. Forests are summed by message passing; other graphs by brute force
/// over all `|atoms|^v` assignments.
pub fn homomorphism_density(h: &PartitionGraph, f: &Kernel, mu: &WeightModel) -> Result<f64> {
    let v = h.num_vertices();
    if v > MAX_HOM_VERTICES {
        return Err(Error::resource(format!(
            "graph has {v} vertices, above the exact cap of {MAX_HOM_VERTICES}; use homomorphism_density_mc"
        )));
    }
    f.check_support(mu)?;
    let (x, m) = mu.quadrature();
    let edges = hom_edges(h);
    let is_forest = edges.iter().all(|(a, b)| a != b) && edges.len() + components(v, &edges) == v;
    if is_forest {
        return Ok(forest_density(v, &edges, f, &x, &m));
    }
    let terms = (x.len() as f64).powi(v as i32);
    if terms > MAX_HOM_TERMS {
        return Err(Error::resource(format!(
            "{terms:e} terms exceed the exact cap of {MAX_HOM_TERMS:e}; use homomorphism_density_mc"
        )));
    }
    Ok(brute_force_density(v, &edges, f, &x, &m))
}

fn components(v: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut c = v;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            c -= 1;
        }
    }
    c
}

fn forest_density(v: usize, edges: &[(usize, usize)], f: &Kernel, x: &[f64], m: &[f64]) -> f64 {
    let n = x.len();
    let mut adj = vec![Vec::new(); v];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let kmat: Vec<f64> = (0..n * n).map(|ij| f.eval(x[ij / n], x[ij % n])).collect();
    // message[u][i]: integral over the subtree below u with w_u = x[i]
    fn message(u: usize, parent: usize, adj: &[Vec<usize>], kmat: &[f64], m: &[f64]) -> Vec<f64> {
        let n = m.len();
        let mut out = vec![1.0; n];
        for &c in &adj[u] {
            if c == parent {
                continue;
            }
            let child = message(c, u, adj, kmat, m);
            let weighted: Vec<f64> = child.iter().zip(m).map(|(a, b)| a * b).collect();
            for i in 0..n {
                let row = &kmat[i * n..(i + 1) * n];
                out[i] *= row.iter().zip(&weighted).map(|(k, w)| k * w).sum::<f64>();
            }
        }
        out
    }
    let mut seen = vec![false; v];
    let mut total = 1.0;
    for root in 0..v {
        if seen[root] {
            continue;
        }
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            if !seen[u] {
                seen[u] = true;
                stack.extend(adj[u].iter().copied());
            }
        }
        let msg = message(root, usize::MAX, &adj, &kmat, m);
        total *= msg.iter().zip(m).map(|(a, b)| a * b).sum::<f64>();
    }
    total
}

fn brute_force_density(v: usize, edges: &[(usize, usize)], f: &Kernel, x: &[f64], m: &[f64]) -> f64 {
    // edges grouped by their later endpoint so each is applied once both
    // ends are assigned
    let mut closing = vec![Vec::new(); v];
    for &(a, b) in edges {
        closing[a.max(b)].push(a.min(b));
    }
    fn rec(
        u: usize,
        assign: &mut Vec<usize>,
        acc: f64,
        closing: &[Vec<usize>],
        f: &Kernel,
        x: &[f64],
        m: &[f64],
    ) -> f64 {
        if u == closing.len() {
            return acc;
        }
        let mut s = 0.0;
        for i in 0..x.len() {
            assign[u] = i;
            let mut w = acc * m[i];
            for &a in &closing[u] {
                w *= f.eval(x[assign[a]], x[i]);
            }
            if w != 0.0 {
                s += rec(u + 1, assign, w, closing, f, x, m);
            }
        }
        s
    }
    let mut assign = vec![0; v];
    rec(0, &mut assign, 1.0, &closing, f, x, m)
}

/// Monte Carlo estimate of `t(H, f, μ_w)` with its standard error, for graphs
/// beyond the exact caps.
pub fn homomorphism_density_mc(h: &PartitionGraph, f: &Kernel, mu: &WeightModel, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::domain("need at least two samples"));
    }
    f.check_support(mu)?;
    let edges = hom_edges(h);
    let v = h.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..samples {
        let w = mu.sample(v, || rng.next_u64());
        let p: f64 = edges.iter().map(|&(a, b)| f.eval(w[a], w[b])).product();
        s += p;
        s2 += p * p;
    }
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
