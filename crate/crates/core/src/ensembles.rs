//! Sampling the graph ensembles: generic inhomogeneous Erdős–Rényi,
//! homogeneous, Chung–Lu, generalized random graph and Norros–Riettu.
//!
//! Every unordered pair `(i, j)`, diagonal included, owns one fixed 64-bit
//! word of a ChaCha8 stream keyed by the seed, with the replicate as the
//! stream id. Draws are therefore independent of iteration order and worker
//! count, and a coupled pair of models can share the uniform of each edge.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{unit, Kernel, WeightModel};
use crate::linalg::SymMatrix;

/// How sparse the graph is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sparsity {
    /// `ε_N = λ / N`.
    Lambda(f64),
    /// `ε_N` given directly.
    Epsilon(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// `p_ij = min(ε_N f(w_i, w_j), 1)`.
    GenericIer,
    /// `p_ij = ε_N`.
    Homogeneous,
    /// `p_ij = min(d_i d_j / m_1, 1)`.
    ChungLu { degrees: Option<Vec<f64>> },
    /// `p_ij = d_i d_j / (m_1 + d_i d_j)`.
    Grg { degrees: Option<Vec<f64>> },
    /// `p_ij = 1 - exp(-d_i d_j / m_1)`.
    NorrosRiettu { degrees: Option<Vec<f64>> },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::GenericIer => "generic_ier",
            Variant::Homogeneous => "homogeneous",
            Variant::ChungLu { .. } => "chung_lu",
            Variant::Grg { .. } => "grg",
            Variant::NorrosRiettu { .. } => "norros_riettu",
        }
    }

    fn degrees(&self) -> Option<&Option<Vec<f64>>> {
        match self {
            Variant::ChungLu { degrees } | Variant::Grg { degrees } | Variant::NorrosRiettu { degrees } => Some(degrees),
            _ => None,
        }
    }
}

/// Whether the matrix is divided by `√λ` or by the dense standard deviation
/// `√(N ε_N (1 - ε_N))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleMode {
    #[default]
    Sparse,
    Dense,
}

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub n: usize,
    pub sparsity: Sparsity,
    pub kernel: Kernel,
    pub weights: WeightModel,
    pub variant: Variant,
    pub seed: u64,
    pub replicate: u64,
    pub zero_diagonal: bool,
    pub scale_mode: ScaleMode,
}

impl EnsembleConfig {
    /// Homogeneous graph with mean degree `λ`.
    pub fn homogeneous(n: usize, lambda: f64, seed: u64) -> Self {
        EnsembleConfig {
            n,
            sparsity: Sparsity::Lambda(lambda),
            kernel: Kernel::Constant(1.0),
            weights: WeightModel::dirac(1.0).expect("unit atom"),
            variant: Variant::Homogeneous,
            seed,
            replicate: 0,
            zero_diagonal: false,
            scale_mode: ScaleMode::Sparse,
        }
    }

    /// Generic inhomogeneous graph `min(λ f(w_i, w_j) / N, 1)`.
    pub fn generic(n: usize, lambda: f64, kernel: Kernel, weights: WeightModel, seed: u64) -> Self {
        EnsembleConfig {
            kernel,
            weights,
            variant: Variant::GenericIer,
            ..Self::homogeneous(n, lambda, seed)
        }
    }

    /// A degree-driven model; `degrees = None` draws i.i.d. integers in
    /// `[1, 5]`.
    pub fn degree_model(n: usize, variant: Variant, seed: u64) -> Self {
        EnsembleConfig {
            variant,
            ..Self::homogeneous(n, 1.0, seed)
        }
    }

    pub fn with_replicate(mut self, replicate: u64) -> Self {
        self.replicate = replicate;
        self
    }

    pub fn with_zero_diagonal(mut self, zero: bool) -> Self {
        self.zero_diagonal = zero;
        self
    }

    /// Fixes weights and degrees, the realised `ε_N` and the scale.
    pub fn realize(&self) -> Result<Ensemble> {
        self.realize_with_seed(self.seed)
    }

    fn realize_with_seed(&self, seed: u64) -> Result<Ensemble> {
        let n = self.n;
        if n == 0 {
            return Err(Error::config("N must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(2 * self.replicate + 1);
        let mut bits = || rng.next_u64();

        if let Some(deg) = self.variant.degrees() {
            let d = match deg {
                Some(d) if d.len() == n => d.clone(),
                Some(d) => return Err(Error::config(format!("degree vector has length {}, expected N = {n}", d.len()))),
                None => (0..n).map(|_| 1.0 + (unit(bits()) * 5.0).floor()).collect(),
            };
            if d.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::config("degrees must be finite and nonnegative"));
            }
            let m1: f64 = d.iter().sum();
            let m_inf = d.iter().cloned().fold(0.0, f64::max);
            if !(m1 > 0.0) {
                return Err(Error::config("degree sum m_1 must be positive"));
            }
            let epsilon = m_inf * m_inf / m1;
            let model = match self.variant {
                Variant::ChungLu { .. } => Model::ChungLu,
                Variant::Grg { .. } => Model::Grg,
                _ => Model::NorrosRiettu,
            };
            return Ok(Ensemble {
                n,
                epsilon,
                scale: scale_for(self.scale_mode, n, epsilon)?,
                weights: d.iter().map(|x| x / m_inf).collect(),
                degrees: Some(d),
                m1,
                model,
                kernel: self.kernel.clone(),
            });
        }

        let epsilon = match self.sparsity {
            Sparsity::Lambda(l) => l / n as f64,
            Sparsity::Epsilon(e) => e,
        };
        if !(epsilon >= 0.0) {
            return Err(Error::config(format!("ε_N must be nonnegative, got {epsilon}")));
        }
        let (weights, model) = match self.variant {
            Variant::Homogeneous => (vec![1.0; n], Model::Homogeneous),
            _ => {
                let w = match &self.weights {
                    WeightModel::Empirical(w) if w.len() == n => w.clone(),
                    WeightModel::Empirical(w) => {
                        return Err(Error::config(format!("empirical weights have length {}, expected N = {n}", w.len())))
                    }
                    other => other.sample(n, &mut bits),
                };
                self.kernel.check_support(&self.weights)?;
                (w, Model::Generic)
            }
        };
        Ok(Ensemble {
            n,
            epsilon,
            scale: scale_for(self.scale_mode, n, epsilon).unwrap_or(0.0),
            weights,
            degrees: None,
            m1: 0.0,
            model,
            kernel: self.kernel.clone(),
        })
    }
}

fn scale_for(mode: ScaleMode, n: usize, epsilon: f64) -> Result<f64> {
    let s = match mode {
        ScaleMode::Sparse => (n as f64 * epsilon).sqrt(),
        ScaleMode::Dense => (n as f64 * epsilon * (1.0 - epsilon)).sqrt(),
    };
    if !(s > 0.0) {
        return Err(Error::domain("scale is zero"));
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy)]
enum Model {
    Generic,
    Homogeneous,
    ChungLu,
    Grg,
    NorrosRiettu,
}

/// A configuration with its random weights fixed.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub n: usize,
    /// Realised `ε_N`; for degree models `m_∞² / m_1`.
    pub epsilon: f64,
    /// Divisor used by [`scale_matrix`]; 0 when undefined.
    pub scale: f64,
    /// `w_i`; for degree models `d_i / m_∞`.
    pub weights: Vec<f64>,
    pub degrees: Option<Vec<f64>>,
    pub m1: f64,
    model: Model,
    kernel: Kernel,
}

impl Ensemble {
    /// `N ε_N`.
    pub fn lambda(&self) -> f64 {
        self.n as f64 * self.epsilon
    }

    /// `p_ij` for 0-based indices.
    #[inline]
    pub fn p(&self, i: usize, j: usize) -> f64 {
        match self.model {
            Model::Homogeneous => self.epsilon.min(1.0),
            Model::Generic => (self.epsilon * self.kernel.eval(self.weights[i], self.weights[j])).min(1.0),
            Model::ChungLu | Model::Grg | Model::NorrosRiettu => {
                let d = self.degrees.as_ref().unwrap();
                let x = d[i] * d[j];
                match self.model {
                    Model::ChungLu => (x / self.m1).min(1.0),
                    Model::Grg => x / (self.m1 + x),
                    _ => -(-x / self.m1).exp_m1(),
                }
            }
        }
    }
}

/// A symmetric 0/1 matrix as a sorted list of `(i, j)` with `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub zero_diagonal: bool,
}

impl Adjacency {
    /// Number of edges off the diagonal.
    pub fn num_edges(&self) -> usize {
        self.edges.iter().filter(|(i, j)| i != j).count()
    }

    pub fn num_loops(&self) -> usize {
        self.edges.len() - self.num_edges()
    }

    /// Neighbour lists; a loop appears once in its own list.
    pub fn neighbours(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            adj[i as usize].push(j);
            if i != j {
                adj[j as usize].push(i);
            }
        }
        adj
    }

    pub fn to_dense(&self, scale: f64) -> SymMatrix {
        let mut m = SymMatrix::zeros(self.n);
        let v = 1.0 / scale;
        for &(i, j) in &self.edges {
            m.set(i as usize, j as usize, v);
        }
        m
    }
}

#[inline]
fn pair_word(n: usize, i: usize) -> u128 {
    // upper-triangle row-major index of (i, i), two 32-bit words per draw
    let idx = i as u128 * n as u128 - (i as u128 * i.saturating_sub(1) as u128) / 2;
    2 * idx
}

fn row_stream(seed: u64, replicate: u64, n: usize, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * replicate);
    rng.set_word_pos(pair_word(n, i));
    rng
}

fn sample_rows(n: usize, seed: u64, replicate: u64, keep: impl Fn(usize, usize, f64) -> bool + Sync) -> Vec<(u32, u32)> {
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = row_stream(seed, replicate, n, i);
            let mut out = Vec::new();
            for j in i..n {
                if keep(i, j, unit(rng.next_u64())) {
                    out.push((i as u32, j as u32));
                }
            }
            out
        })
        .collect()
}

/// `p_ij` for 1-based indices.
pub fn edge_probability(config: &EnsembleConfig, i: usize, j: usize) -> Result<f64> {
    let e = config.realize()?;
    if i == 0 || j == 0 || i > e.n || j > e.n {
        return Err(Error::domain(format!("indices ({i}, {j}) outside 1..={}", e.n)));
    }
    Ok(e.p(i - 1, j - 1))
}

pub fn sample_adjacency(config: &EnsembleConfig) -> Result<Adjacency> {
    let e = config.realize()?;
    Ok(sample_realized(&e, config.seed, config.replicate, config.zero_diagonal))
}

/// Samples from an already realised ensemble.
pub fn sample_realized(e: &Ensemble, seed: u64, replicate: u64, zero_diagonal: bool) -> Adjacency {
    let edges = sample_rows(e.n, seed, replicate, |i, j, u| (i != j || !zero_diagonal) && u < e.p(i, j));
    Adjacency { n: e.n, edges, zero_diagonal }
}

/// Divides by the configured scale (`√λ`, or the dense standard deviation).
pub fn scale_matrix(a: &Adjacency, config: &EnsembleConfig) -> Result<SymMatrix> {
    let e = config.realize()?;
    let s = scale_for(config.scale_mode, e.n, e.epsilon)?;
    Ok(a.to_dense(s))
}

/// Two samples driven by one uniform per edge: `X = [U < p]`, `Y = [U < q]`,
/// so `P(X ≠ Y) = |p - q|`. Weights and default degrees of both models are
/// drawn from `seed`, so degree models share their degree sequence.
pub fn coupled_sample(a: &EnsembleConfig, b: &EnsembleConfig, seed: u64) -> Result<(Adjacency, Adjacency)> {
    if a.n != b.n {
        return Err(Error::domain(format!("coupled models need equal N, got {} and {}", a.n, b.n)));
    }
    let (ea, eb) = (a.realize_with_seed(seed)?, b.realize_with_seed(seed)?);
    let n = a.n;
    let both: Vec<(u32, u32, u8)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = row_stream(seed, a.replicate, n, i);
            let mut out = Vec::new();
            for j in i..n {
                let u = unit(rng.next_u64());
                let x = (i != j || !a.zero_diagonal) && u < ea.p(i, j);
                let y = (i != j || !b.zero_diagonal) && u < eb.p(i, j);
                if x || y {
                    out.push((i as u32, j as u32, x as u8 | (y as u8) << 1));
                }
            }
            out
        })
        .collect();
    let pick = |bit: u8, zero_diagonal| Adjacency {
        n,
        edges: both.iter().filter(|e| e.2 & bit != 0).map(|e| (e.0, e.1)).collect(),
        zero_diagonal,
    };
    Ok((pick(1, a.zero_diagonal), pick(2, b.zero_diagonal)))
}

/// Realised ensembles of a coupled pair, for reading off scales.
pub fn coupled_realizations(a: &EnsembleConfig, b: &EnsembleConfig, seed: u64) -> Result<(Ensemble, Ensemble)> {
    Ok((a.realize_with_seed(seed)?, b.realize_with_seed(seed)?))
}
