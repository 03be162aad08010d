//! The Bessel-kernel fixed point for the sparse limit and the dense
//! integral equation.
//!
//! The sparse limit is generated by `φ*`, the fixed point of
//!
//! ```text
//! F(φ)(x, u) = d_f(x) - ∫ f(x, y) e^{-λ d_f(y)} √u ∫₀^∞ J(2√(uv))/√v e^{ιvz} e^{λ φ(y, v/λ)} dv μ_w(dy)
//! ```
//!
//! discretised by composite Gauss–Legendre in `v`. The `u` grid is `{0}`
//! together with the `v` nodes divided by `λ`, so `φ(y, v/λ)` is read off the
//! grid with no interpolation.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{Kernel, WeightModel};

/// `J₁(x)` for `x ≥ 0`: power series up to 12, Hankel expansion beyond.
pub fn bessel_j1(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_j1 needs x >= 0, got {x}")));
    }
    Ok(j1(x))
}

pub(crate) fn j1(x: f64) -> f64 {
    if x <= 12.0 {
        let h = 0.5 * x;
        let q = -h * h;
        let mut term = h;
        let mut sum = h;
        for k in 1..60 {
            term *= q / (k as f64 * (k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return sum;
    }
    // a_k = Π_{j=1..k} (4 - (2j-1)²) / (k! 8^k)
    let mu = 4.0;
    let (mut p, mut q) = (1.0, 0.0);
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..40 {
        let j = (2 * k - 1) as f64;
        a *= (mu - j * j) / (k as f64 * 8.0 * x);
        if a.abs() >= last {
            break;
        }
        last = a.abs();
        // P takes even k with sign (-1)^{k/2}, Q odd k with (-1)^{(k-1)/2}
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
    }
    let chi = x - 0.75 * std::f64::consts::PI;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// `max` that keeps a NaN instead of dropping it.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Composite Gauss–Legendre nodes and weights on `[0, len]`.
fn composite_gl(len: f64, panels: usize, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let gl = GaussLegendre::new(per_panel.try_into().expect("at least two nodes"));
    let h = len / panels as f64;
    let mut x = Vec::with_capacity(panels * per_panel);
    let mut w = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        for (t, wt) in gl.nodes().zip(gl.weights()) {
            x.push(p as f64 * h + (t + 1.0) * 0.5 * h);
            w.push(wt * 0.5 * h);
        }
    }
    (x, w)
}

/// `|e^{ιuz} - (1 - √u ∫₀^∞ J(2√(uv))/√v e^{-ιv/z} dv)|`.
pub fn verify_exponential_identity(u: f64, z: Complex64) -> Result<f64> {
    if !(u >= 0.0) || !(z.im > 0.0) {
        return Err(Error::domain(format!("need u >= 0 and Im z > 0, got u = {u}, z = {z}")));
    }
    let i = Complex64::i();
    let lhs = (i * u * z).exp();
    if u == 0.0 {
        return Ok((lhs - 1.0).norm());
    }
    // e^{-ιv/z} decays like e^{-v Im z / |z|²}
    let rate = z.im / z.norm_sqr();
    let len = 45.0 / rate;
    let panels = ((len * (1.0 + u.sqrt())).ceil() as usize).clamp(64, 4096);
    let (v, w) = composite_gl(len, panels, 16);
    let integral: Complex64 = v
        .iter()
        .zip(&w)
        .map(|(&v, &w)| w * j1(2.0 * (u * v).sqrt()) / v.sqrt() * (-i * v / z).exp())
        .sum();
    Ok((lhs - (1.0 - u.sqrt() * integral)).norm())
}

/// Discretisation of the fixed-point problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub z: Complex64,
    pub lambda: f64,
    /// Truncation of the `v` integral; `η V_max ≥ 30` is required.
    pub v_max: f64,
    /// Gauss–Legendre panels on `[0, V_max]`, 16 nodes each.
    pub panels: usize,
    /// Weighted sup-norm tolerance on successive iterates.
    pub tol: f64,
    pub max_iter: usize,
}

impl SolverConfig {
    /// `V_max = 30/η`, panels of width at most 5 (at least 32 panels),
    /// tolerance `1e-10`.
    pub fn new(z: Complex64, lambda: f64) -> Self {
        let v_max = 30.0 / z.im;
        let panels = if v_max.is_finite() { ((v_max / 5.0).ceil() as usize).max(32) } else { 32 };
        SolverConfig { z, lambda, v_max, panels, tol: 1e-10, max_iter: 2000 }
    }

    pub fn eta(&self) -> f64 {
        self.z.im
    }

    /// Extent of the `u` grid, `V_max / λ`.
    pub fn u_max(&self) -> f64 {
        self.v_max / self.lambda
    }

    pub fn n_v(&self) -> usize {
        16 * self.panels
    }

    pub fn n_u(&self) -> usize {
        self.n_v() + 1
    }

    fn validate(&self) -> Result<()> {
        if !(self.z.im > 0.0) {
            return Err(Error::config(format!("Im z must be positive, got {}", self.z)));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::config(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.v_max * self.z.im >= 30.0 * (1.0 - 1e-12)) {
            return Err(Error::config(format!(
                "V_max * Im z = {} is below 30; raise V_max",
                self.v_max * self.z.im
            )));
        }
        if !(self.tol > 0.0) || self.panels == 0 || self.max_iter == 0 {
            return Err(Error::config("tol, panels and max_iter must be positive"));
        }
        Ok(())
    }
}

/// `φ` on (weight node) × (u node).
#[derive(Debug, Clone, PartialEq)]
pub struct PhiGrid {
    pub y_nodes: Vec<f64>,
    pub y_weights: Vec<f64>,
    /// `u_nodes[0] = 0`, then `v_j / λ`.
    pub u_nodes: Vec<f64>,
    /// Row-major, `values[y * n_u + u]`.
    pub values: Vec<Complex64>,
    pub z: Complex64,
    pub lambda: f64,
    /// Final `‖φ_{n+1} - φ_n‖` and iteration count when produced by the solver.
    pub residual: f64,
    pub iterations: usize,
}

impl PhiGrid {
    pub fn n_u(&self) -> usize {
        self.u_nodes.len()
    }

    pub fn value(&self, y: usize, u: usize) -> Complex64 {
        self.values[y * self.n_u() + u]
    }

    /// `φ(y_k, u)` at any `u ≥ 0` by monotone cubic interpolation of the real
    /// and imaginary parts. Beyond the grid the last value is used and the
    /// flag is set.
    pub fn interpolate(&self, y: usize, u: f64) -> (Complex64, bool) {
        let row = &self.values[y * self.n_u()..(y + 1) * self.n_u()];
        let last = *self.u_nodes.last().unwrap();
        if u > last {
            return (row[row.len() - 1], true);
        }
        let re: Vec<f64> = row.iter().map(|c| c.re).collect();
        let im: Vec<f64> = row.iter().map(|c| c.im).collect();
        (Complex64::new(monotone_cubic(&self.u_nodes, &re, u), monotone_cubic(&self.u_nodes, &im, u)), false)
    }

    /// `sup |φ| / √(1+u)`.
    pub fn weighted_norm(&self) -> f64 {
        let n_u = self.n_u();
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| v.norm() / (1.0 + self.u_nodes[k % n_u]).sqrt())
            .fold(0.0, nan_max)
    }
}

/// Fritsch–Carlson monotone cubic interpolation; linear on the end intervals.
pub fn monotone_cubic(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if n == 1 {
        return ys[0];
    }
    let k = xs.partition_point(|&t| t <= x).clamp(1, n - 1) - 1;
    let h = xs[k + 1] - xs[k];
    let t = (x - xs[k]) / h;
    let delta = |i: usize| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if k == 0 || k + 2 == n {
        return ys[k] + t * (ys[k + 1] - ys[k]);
    }
    let slope = |i: usize| {
        let (d0, d1) = (delta(i - 1), delta(i));
        if d0 * d1 <= 0.0 {
            0.0
        } else {
            let (h0, h1) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
            let (w1, w2) = (2.0 * h1 + h0, h1 + 2.0 * h0);
            (w1 + w2) / (w1 / d0 + w2 / d1)
        }
    };
    let (m0, m1) = (slope(k), slope(k + 1));
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * ys[k]
        + (t3 - 2.0 * t2 + t) * h * m0
        + (-2.0 * t3 + 3.0 * t2) * ys[k + 1]
        + (t3 - t2) * h * m1
}

/// Precomputed quadrature and kernel matrices shared by all iterations.
struct Discretization {
    lambda: f64,
    y: Vec<f64>,
    mw: Vec<f64>,
    /// `f(y_a, y_b)`, row-major.
    fmat: Vec<f64>,
    d: Vec<f64>,
    v: Vec<f64>,
    /// `w_j e^{ι v_j z}`.
    wez: Vec<Complex64>,
    u: Vec<f64>,
    /// `√u_i J(2√(u_i v_j)) / √v_j`, row-major over `(i, j)`.
    bessel: Vec<f64>,
}

impl Discretization {
    fn new(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<Self> {
        cfg.validate()?;
        f.check_support(mu)?;
        let (y, mw) = mu.quadrature();
        let ny = y.len();
        let mut fmat = vec![0.0; ny * ny];
        for a in 0..ny {
            for b in 0..ny {
                fmat[a * ny + b] = f.eval(y[a], y[b]);
            }
        }
        let d: Vec<f64> = (0..ny).map(|a| (0..ny).map(|b| mw[b] * fmat[a * ny + b]).sum()).collect();
        let (v, w) = composite_gl(cfg.v_max, cfg.panels, 16);
        let i = Complex64::i();
        let wez = v.iter().zip(&w).map(|(&v, &w)| w * (i * v * cfg.z).exp()).collect();
        let mut u = vec![0.0];
        u.extend(v.iter().map(|v| v / cfg.lambda));
        let bessel = bessel_matrix(&u, &v);
        Ok(Discretization { lambda: cfg.lambda, y, mw, fmat, d, v, wez, u, bessel })
    }

    fn n_u(&self) -> usize {
        self.u.len()
    }

    /// `g_y(v_j) = w_j e^{ι v_j z} e^{λ (φ(y, v_j/λ) - d_f(y))}`.
    fn g(&self, phi: &[Complex64]) -> Vec<Complex64> {
        let (nu, nv) = (self.n_u(), self.v.len());
        let mut g = vec![Complex64::new(0.0, 0.0); self.y.len() * nv];
        for b in 0..self.y.len() {
            for j in 0..nv {
                g[b * nv + j] = self.wez[j] * (self.lambda * (phi[b * nu + j + 1] - self.d[b])).exp();
            }
        }
        g
    }

    /// `I_y(u_i) = Σ_j bessel[i, j] g_y(v_j)`.
    fn bessel_integrals(&self, g: &[Complex64], rows: &[f64]) -> Vec<Complex64> {
        let nv = self.v.len();
        let ni = rows.len() / nv;
        let ny = self.y.len();
        (0..ny)
            .into_par_iter()
            .flat_map_iter(|b| {
                let gy = &g[b * nv..(b + 1) * nv];
                (0..ni).map(move |i| {
                    let row = &rows[i * nv..(i + 1) * nv];
                    row.iter().zip(gy).map(|(r, g)| g * *r).sum::<Complex64>()
                })
            })
            .collect()
    }

    fn apply(&self, phi: &[Complex64]) -> Vec<Complex64> {
        let nu = self.n_u();
        let ny = self.y.len();
        let g = self.g(phi);
        let integ = self.bessel_integrals(&g, &self.bessel[self.v.len()..]);
        let ni = nu - 1;
        let mut out = vec![Complex64::new(0.0, 0.0); ny * nu];
        for a in 0..ny {
            out[a * nu] = Complex64::new(self.d[a], 0.0);
            for i in 0..ni {
                let mut s = Complex64::new(0.0, 0.0);
                for b in 0..ny {
                    let c = self.mw[b] * self.fmat[a * ny + b];
                    if c != 0.0 {
                        s += c * integ[b * ni + i];
                    }
                }
                out[a * nu + i + 1] = self.d[a] - s;
            }
        }
        out
    }

    fn grid(&self, values: Vec<Complex64>, z: Complex64) -> PhiGrid {
        PhiGrid {
            y_nodes: self.y.clone(),
            y_weights: self.mw.clone(),
            u_nodes: self.u.clone(),
            values,
            z,
            lambda: self.lambda,
            residual: f64::NAN,
            iterations: 0,
        }
    }

    fn initial(&self) -> Vec<Complex64> {
        let nu = self.n_u();
        self.d.iter().flat_map(|&d| std::iter::repeat(Complex64::new(d, 0.0)).take(nu)).collect()
    }

    fn norm(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        let nu = self.n_u();
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(k, (x, y))| (x - y).norm() / (1.0 + self.u[k % nu]).sqrt())
            .fold(0.0, nan_max)
    }
}

fn bessel_matrix(u: &[f64], v: &[f64]) -> Vec<f64> {
    let nv = v.len();
    let mut m = vec![0.0; u.len() * nv];
    m.par_chunks_mut(nv).zip(u.par_iter()).for_each(|(row, &ui)| {
        if ui > 0.0 {
            let su = ui.sqrt();
            for (r, &vj) in row.iter_mut().zip(v) {
                *r = su * j1(2.0 * (ui * vj).sqrt()) / vj.sqrt();
            }
        }
    });
    m
}

fn check_grid(phi: &PhiGrid, disc: &Discretization) -> Result<()> {
    if phi.u_nodes != disc.u || phi.y_nodes != disc.y {
        return Err(Error::domain("phi grid does not match the solver discretisation"));
    }
    if phi.values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::domain("phi has non-finite values"));
    }
    Ok(())
}

/// One application of `F_z` on the grid of `phi`.
pub fn apply_f(phi: &PhiGrid, cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<PhiGrid> {
    let disc = Discretization::new(cfg, f, mu)?;
    check_grid(phi, &disc)?;
    Ok(disc.grid(disc.apply(&phi.values), cfg.z))
}

/// `φ₀(x, u) = d_f(x)` on the solver grid.
pub fn initial_grid(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<PhiGrid> {
    let disc = Discretization::new(cfg, f, mu)?;
    Ok(disc.grid(disc.initial(), cfg.z))
}

/// `max |a - b| / √(1 + u)` over a common grid.
pub fn weighted_sup_norm(a: &PhiGrid, b: &PhiGrid) -> Result<f64> {
    if a.u_nodes != b.u_nodes || a.y_nodes != b.y_nodes || a.values.len() != b.values.len() {
        return Err(Error::domain("weighted_sup_norm needs identical grids"));
    }
    let nu = a.n_u();
    Ok(a.values
        .iter()
        .zip(&b.values)
        .enumerate()
        .map(|(k, (x, y))| (x - y).norm() / (1.0 + a.u_nodes[k % nu]).sqrt())
        .fold(0.0, nan_max))
}

/// Iterates `φ_{n+1} = F(φ_n)` from `φ₀ = d_f`.
pub fn solve_fixed_point(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<PhiGrid> {
    let disc = Discretization::new(cfg, f, mu)?;
    solve_with(&disc, cfg)
}

fn solve_with(disc: &Discretization, cfg: &SolverConfig) -> Result<PhiGrid> {
    let mut phi = disc.initial();
    let mut prev_diff = f64::INFINITY;
    let mut slow = 0;
    for it in 1..=cfg.max_iter {
        let next = disc.apply(&phi);
        let diff = disc.norm(&next, &phi);
        if !diff.is_finite() {
            return Err(Error::Convergence {
                message: "fixed-point iterates blew up; refine the v-grid (more panels) or increase Im z".into(),
                residual: diff,
                iterations: it,
            });
        }
        phi = next;
        if diff < cfg.tol {
            let mut g = disc.grid(phi, cfg.z);
            // residual re-checked on the returned grid
            g.residual = disc.norm(&disc.apply(&g.values), &g.values);
            g.iterations = it;
            return Ok(g);
        }
        if diff >= 0.99 * prev_diff {
            slow += 1;
            if slow >= 10 {
                return Err(Error::Convergence {
                    message: format!("F_z is not contracting at Im z = {}; increase Im z", cfg.z.im),
                    residual: diff,
                    iterations: it,
                });
            }
        } else {
            slow = 0;
        }
        prev_diff = diff;
    }
    Err(Error::Convergence {
        message: "fixed-point iteration hit max_iter".into(),
        residual: prev_diff,
        iterations: cfg.max_iter,
    })
}

/// The solved fixed point with the quantities derived from it.
pub struct SparseSolution {
    disc: Discretization,
    pub phi: PhiGrid,
}

impl SparseSolution {
    pub fn solve(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<Self> {
        let disc = Discretization::new(cfg, f, mu)?;
        let phi = solve_with(&disc, cfg)?;
        Ok(SparseSolution { disc, phi })
    }

    /// `ι ∫ e^{-λ d_f(y)} ∫ e^{ιvz} e^{λ φ*(y, v/λ)} dv μ_w(dy)`.
    pub fn stieltjes(&self) -> Complex64 {
        let g = self.disc.g(&self.phi.values);
        let nv = self.disc.v.len();
        let s: Complex64 = (0..self.disc.y.len())
            .map(|b| self.disc.mw[b] * g[b * nv..(b + 1) * nv].iter().sum::<Complex64>())
            .sum();
        Complex64::i() * s
    }

    /// `1 - √u ∫ e^{-λ d_f(y)} ∫ J(2√(uv))/√v e^{ιvz} e^{λ φ*(y, v/λ)} dv μ_w(dy)`.
    pub fn limit_gn(&self, u: f64) -> Result<Complex64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::domain(format!("u must lie in [0, 1], got {u}")));
        }
        if u == 0.0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let row = bessel_matrix(&[u], &self.disc.v);
        let g = self.disc.g(&self.phi.values);
        let integ = self.disc.bessel_integrals(&g, &row);
        let s: Complex64 = integ.iter().zip(&self.disc.mw).map(|(i, m)| i * *m).sum();
        Ok(1.0 - s)
    }

    /// `max_{y, u} |e^{-λ d_f(y) + λ φ*(y, u)}|`, at most 1 in theory.
    pub fn max_exponential(&self) -> f64 {
        let nu = self.disc.n_u();
        self.phi
            .values
            .iter()
            .enumerate()
            .map(|(k, p)| (self.disc.lambda * (p.re - self.disc.d[k / nu])).exp())
            .fold(0.0, nan_max)
    }

    /// Largest spread of `φ*(·, u)` across weight nodes.
    pub fn x_variation(&self) -> f64 {
        let nu = self.disc.n_u();
        let ny = self.disc.y.len();
        (0..nu)
            .map(|i| {
                let first = self.phi.values[i];
                (1..ny).map(|b| (self.phi.values[b * nu + i] - first).norm()).fold(0.0, nan_max)
            })
            .fold(0.0, nan_max)
    }

    /// `e^{-η V_max} / η`, the size of the discarded `v` tail.
    pub fn truncation_bound(&self, cfg: &SolverConfig) -> f64 {
        (-cfg.eta() * cfg.v_max).exp() / cfg.eta()
    }
}

pub fn stieltjes_sparse(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<Complex64> {
    Ok(SparseSolution::solve(cfg, f, mu)?.stieltjes())
}

#[allow(non_snake_case)]
pub fn limit_GN(cfg: &SolverConfig, f: &Kernel, mu: &WeightModel, u: f64) -> Result<Complex64> {
    SparseSolution::solve(cfg, f, mu)?.limit_gn(u)
}

/// Empirical Lipschitz ratio `‖F(φ₁) - F(φ₂)‖ / ‖φ₁ - φ₂‖` for two grids.
pub fn lipschitz_ratio(a: &PhiGrid, b: &PhiGrid, cfg: &SolverConfig, f: &Kernel, mu: &WeightModel) -> Result<f64> {
    let disc = Discretization::new(cfg, f, mu)?;
    check_grid(a, &disc)?;
    check_grid(b, &disc)?;
    let (fa, fb) = (disc.apply(&a.values), disc.apply(&b.values));
    Ok(disc.norm(&fa, &fb) / disc.norm(&a.values, &b.values))
}

/// Result of the dense equation.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    pub stieltjes: Complex64,
    pub y_nodes: Vec<f64>,
    /// `H(z, y)` on `y_nodes`.
    pub h: Vec<Complex64>,
    pub residual: f64,
    pub iterations: usize,
}

const DENSE_TOL: f64 = 1e-12;
const DENSE_MAX_ITER: usize = 200_000;
const DENSE_DAMPING: f64 = 0.5;

/// Solves `H(z, x) = -1/(z + ∫ f(x, y) H(z, y) μ_w(dy))` by damped iteration
/// from `H₀ = -1/z` and returns `∫ H dμ_w` with the table of `H`.
pub fn stieltjes_dense(z: Complex64, f: &Kernel, mu: &WeightModel) -> Result<DenseSolution> {
    let (y, m) = mu.quadrature();
    let h0 = vec![-1.0 / z; y.len()];
    dense_from(z, f, &y, &m, h0)
}

fn dense_from(z: Complex64, f: &Kernel, y: &[f64], m: &[f64], mut h: Vec<Complex64>) -> Result<DenseSolution> {
    if !(z.im > 0.0) {
        return Err(Error::domain(format!("z must lie in the upper half plane, got {z}")));
    }
    let ny = y.len();
    let fm: Vec<f64> = (0..ny * ny).map(|k| m[k % ny] * f.eval(y[k / ny], y[k % ny])).collect();
    let update = |h: &[Complex64]| -> Vec<Complex64> {
        (0..ny)
            .map(|a| {
                let s: Complex64 = (0..ny).map(|b| h[b] * fm[a * ny + b]).sum();
                -1.0 / (z + s)
            })
            .collect()
    };
    for it in 1..=DENSE_MAX_ITER {
        let new = update(&h);
        let mut res = 0.0f64;
        for (old, n) in h.iter_mut().zip(&new) {
            res = nan_max(res, (n - *old).norm());
            *old = (1.0 - DENSE_DAMPING) * *old + DENSE_DAMPING * n;
        }
        if !res.is_finite() {
            break;
        }
        if res < DENSE_TOL {
            let residual = update(&h).iter().zip(&h).map(|(a, b)| (a - b).norm()).fold(0.0, nan_max);
            let st = h.iter().zip(m).map(|(h, m)| h * *m).sum();
            return Ok(DenseSolution { stieltjes: st, y_nodes: y.to_vec(), h, residual, iterations: it });
        }
    }
    Err(Error::Convergence {
        message: format!("dense iteration did not settle at Im z = {}; use a larger Im z and step it down", z.im),
        residual: f64::NAN,
        iterations: DENSE_MAX_ITER,
    })
}

/// Dense transforms along `x + ιη` for each `x`, each solve warm-started
/// from its neighbour. A point that fails from the warm start is retried by
/// stepping `Im z` down from 1.
pub fn stieltjes_dense_path(xs: &[f64], eta: f64, f: &Kernel, mu: &WeightModel) -> Result<Vec<Complex64>> {
    let (y, m) = mu.quadrature();
    let mut out = Vec::with_capacity(xs.len());
    let mut warm: Option<Vec<Complex64>> = None;
    for &x in xs {
        let z = Complex64::new(x, eta);
        let start = warm.clone().unwrap_or_else(|| vec![-1.0 / z; y.len()]);
        let sol = match dense_from(z, f, &y, &m, start) {
            Ok(s) => s,
            Err(_) => {
                let mut e = eta.max(1.0);
                let mut h = vec![-1.0 / Complex64::new(x, e); y.len()];
                loop {
                    let s = dense_from(Complex64::new(x, e), f, &y, &m, h)?;
                    if e == eta {
                        break s;
                    }
                    h = s.h;
                    e = (e * 0.5).max(eta);
                }
            }
        };
        out.push(sol.stieltjes);
        warm = Some(sol.h);
    }
    Ok(out)
}

/// `(1/π) Im S(x + ι η)` on the grid.
pub fn density_from_stieltjes(
    transform: impl Fn(Complex64) -> Result<Complex64>,
    x_grid: &[f64],
    eta: f64,
) -> Result<Vec<f64>> {
    if !(eta > 0.0) {
        return Err(Error::domain(format!("eta must be positive, got {eta}")));
    }
    x_grid
        .iter()
        .map(|&x| {
            let d = transform(Complex64::new(x, eta))?.im / std::f64::consts::PI;
            if d < -1e-8 {
                return Err(Error::Convergence {
                    message: format!("negative density {d} at x = {x}"),
                    residual: d,
                    iterations: 0,
                });
            }
            Ok(d)
        })
        .collect()
}

/// `(-z + √(z² - 4)) / 2` on the branch with positive imaginary part.
pub fn semicircle_stieltjes(z: Complex64) -> Complex64 {
    let r = (z * z - 4.0).sqrt();
    let a = (-z + r) / 2.0;
    if a.im > 0.0 {
        a
    } else {
        (-z - r) / 2.0
    }
}

/// Moments `m_0..=m_kmax` of a compactly supported law from its Stieltjes
/// transform, via `m_k = -(1/2πι) ∮ z^k S(z) dz` on `|z| = radius`. Only the
/// upper half circle is evaluated; the lower half uses `S(z̄) = conj S(z)`.
pub fn moments_from_stieltjes(
    transform: impl Fn(Complex64) -> Result<Complex64>,
    radius: f64,
    half_points: usize,
    kmax: usize,
) -> Result<Vec<f64>> {
    let mut m = vec![0.0; kmax + 1];
    let n = 2 * half_points;
    for j in 0..half_points {
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / half_points as f64;
        let e = Complex64::from_polar(1.0, theta);
        let s = transform(radius * e)?;
        for (k, mk) in m.iter_mut().enumerate() {
            // the conjugate point contributes the conjugate term
            let term = radius.powi(k as i32 + 1) * e.powu(k as u32 + 1) * s;
            *mk -= 2.0 * term.re / n as f64;
        }
    }
    Ok(m)
}
