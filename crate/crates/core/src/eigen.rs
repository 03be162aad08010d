//! Symmetric eigensolvers.
//!
//! Small matrices go through Householder tridiagonalization and implicit QL
//! with a Wilkinson shift. Large matrices use two stages: a blocked reduction
//! to a band of width `BAND` (its trailing updates are GEMMs), then Householder
//! bulge chasing from band to tridiagonal, then the same QL. Eigenvectors for
//! large matrices come from faer.

use faer::linalg::matmul::matmul;
use faer::linalg::matmul::triangular::{self as tri, BlockStructure::{Rectangular as Rect, StrictTriangularUpper, TriangularLower}};
use faer::reborrow::ReborrowMut;
use faer::{Accum, MatMut, MatRef, Par, Side};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Largest dimension accepted by the dense solvers.
pub const MAX_DENSE_N: usize = 20_000;

/// Bandwidth of the intermediate band matrix.
pub const BAND: usize = 32;

/// Below this size the one-stage reduction is used.
const TWO_STAGE_MIN: usize = 256;

/// Up to this size eigenvectors use the in-house QL with accumulation.
const OWN_VECTORS_MAX: usize = 400;

/// Relative deflation threshold of the QL iteration.
const DEFLATION: f64 = 1e-14;

/// Householder reflector `H = I - τ v vᵀ` with `v[0] = 1` and `H x = β e₁`.
/// On return `x[0] = β` and `x[1..]` holds `v[1..]`.
pub(crate) fn householder(x: &mut [f64]) -> (f64, f64) {
    let alpha = x[0];
    let sigma: f64 = x[1..].iter().map(|v| v * v).sum();
    if sigma == 0.0 {
        return (0.0, alpha);
    }
    let norm = (alpha * alpha + sigma).sqrt();
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    for v in x[1..].iter_mut() {
        *v *= scale;
    }
    x[0] = beta;
    (tau, beta)
}

/// Householder reduction of a full symmetric column-major matrix to
/// tridiagonal form. Returns `(d, e, reflectors)`; the reflectors are kept
/// only when `keep` is set.
fn tridiagonalize(a: &mut [f64], n: usize, keep: bool) -> (Vec<f64>, Vec<f64>, Vec<(Vec<f64>, f64)>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut refl = Vec::new();
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let col = k * n + k + 1;
        let (tau, beta) = householder(&mut a[col..col + m]);
        let mut v = a[col..col + m].to_vec();
        v[0] = 1.0;
        e[k] = beta;
        d[k] = a[k * n + k];
        if tau != 0.0 {
            // p = τ A22 v, w = p - ½ τ (pᵀ v) v, A22 -= v wᵀ + w vᵀ
            let off = k + 1;
            p[..m].iter_mut().for_each(|x| *x = 0.0);
            for c in 0..m {
                let vc = v[c];
                let colj = &a[(off + c) * n + off..(off + c) * n + off + m];
                for (pi, aij) in p[..m].iter_mut().zip(colj) {
                    *pi += aij * vc;
                }
            }
            let mut pv = 0.0;
            for i in 0..m {
                p[i] *= tau;
                pv += p[i] * v[i];
            }
            let kf = -0.5 * tau * pv;
            for i in 0..m {
                p[i] += kf * v[i];
            }
            for c in 0..m {
                let (vc, wc) = (v[c], p[c]);
                let colj = &mut a[(off + c) * n + off..(off + c) * n + off + m];
                for i in 0..m {
                    colj[i] -= v[i] * wc + p[i] * vc;
                }
            }
        }
        if keep {
            refl.push((v, tau));
        }
    }
    if n > 0 {
        d[n - 1] = a[(n - 1) * n + n - 1];
    }
    (d, e, refl)
}

/// Forms `Q = H₀ H₁ ⋯` from the reflectors of [`tridiagonalize`].
fn accumulate_q(n: usize, refl: &[(Vec<f64>, f64)]) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    for (k, (v, tau)) in refl.iter().enumerate().rev() {
        if *tau == 0.0 {
            continue;
        }
        let off = k + 1;
        let m = n - off;
        // rows off.. of Q, columns off..
        for c in off..n {
            let col = &mut q[c * n + off..c * n + off + m];
            let s: f64 = col.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() * tau;
            for (x, vi) in col.iter_mut().zip(v) {
                *x -= s * vi;
            }
        }
    }
    q
}

/// Implicit QL with a Wilkinson shift on the tridiagonal `(d, e)`, where
/// `e[i]` couples `i` and `i+1`. When `z` is given (column-major `n × n`),
/// the rotations are accumulated into its columns. Eigenvalues are left in
/// `d`, unsorted.
pub fn tridiagonal_ql(d: &mut [f64], e: &[f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e: Vec<f64> = e.to_vec();
    e.push(0.0);
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |a, b| a.max(b.abs()));
    let tol = DEFLATION * scale;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= tol || e[m].abs() <= f64::EPSILON * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence {
                    message: "QL iteration did not deflate".into(),
                    residual: e[l].abs(),
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zj = &mut hi[..n];
                    for k in 0..n {
                        let t = zj[k];
                        zj[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn mat<'a>(s: &'a [f64], rows: usize, cols: usize, ld: usize) -> MatRef<'a, f64> {
    MatRef::from_column_major_slice_with_stride(s, rows, cols, ld)
}

fn mat_mut<'a>(s: &'a mut [f64], rows: usize, cols: usize, ld: usize) -> MatMut<'a, f64> {
    MatMut::from_column_major_slice_with_stride_mut(s, rows, cols, ld)
}

/// Reduces the full symmetric column-major `a` to lower band form of width
/// `b`, returned in band storage with `2b + 1` rows per column (the extra
/// rows hold bulges during chasing).
fn dense_to_band(a: &mut [f64], n: usize, b: usize) -> Vec<f64> {
    let mut j = 0;
    while j + b + 2 <= n {
        let m = n - j - b;
        let cols = b.min(n - j);
        let kk = cols.min(m);
        let r0 = j + b;
        // panel QR of A[r0.., j..j+cols]
        let mut v = vec![0.0; m * kk];
        let mut taus = vec![0.0; kk];
        for c in 0..kk {
            let colstart = (j + c) * n + r0 + c;
            let (tau, _) = householder(&mut a[colstart..colstart + m - c]);
            taus[c] = tau;
            v[c * m + c] = 1.0;
            v[c * m + c + 1..(c + 1) * m].copy_from_slice(&a[colstart + 1..colstart + m - c]);
            for x in a[colstart + 1..colstart + m - c].iter_mut() {
                *x = 0.0;
            }
            if tau != 0.0 {
                let vc = &v[c * m + c..(c + 1) * m];
                for c2 in c + 1..cols {
                    let col = &mut a[(j + c2) * n + r0 + c..(j + c2) * n + r0 + m];
                    let s: f64 = col.iter().zip(vc).map(|(x, y)| x * y).sum::<f64>() * tau;
                    for (x, y) in col.iter_mut().zip(vc) {
                        *x -= s * y;
                    }
                }
            }
        }
        // T upper triangular with Q = I - V T Vᵀ
        let mut t = vec![0.0; kk * kk];
        for c in 0..kk {
            t[c * kk + c] = taus[c];
            if c == 0 || taus[c] == 0.0 {
                continue;
            }
            let vc = &v[c * m..(c + 1) * m];
            let z: Vec<f64> = (0..c)
                .map(|r| v[r * m..(r + 1) * m].iter().zip(vc).map(|(x, y)| x * y).sum())
                .collect();
            for r in 0..c {
                let mut s = 0.0;
                for q in r..c {
                    s += t[q * kk + r] * z[q];
                }
                t[c * kk + r] = -taus[c] * s;
            }
        }
        let vm = mat(&v, m, kk, m);
        let tm = mat(&t, kk, kk, kk);
        let mut vt = vec![0.0; m * kk];
        matmul(mat_mut(&mut vt, m, kk, m), Accum::Replace, vm, tm, 1.0, Par::Seq);
        let a22 = r0 * n + r0;
        // X = A22 V T
        let mut x = vec![0.0; m * kk];
        // only the lower triangle of A22 is kept current
        let a22m = mat(&a[a22..], m, m, n);
        let vtm = mat(&vt, m, kk, m);
        let mut xm = mat_mut(&mut x, m, kk, m);
        tri::matmul(xm.rb_mut(), Rect, Accum::Replace, a22m, TriangularLower, vtm, Rect, 1.0, Par::Seq);
        tri::matmul(xm, Rect, Accum::Add, a22m.transpose(), StrictTriangularUpper, vtm, Rect, 1.0, Par::Seq);
        // W = X - ½ V (Tᵀ (Vᵀ X))
        let mut y = vec![0.0; kk * kk];
        matmul(mat_mut(&mut y, kk, kk, kk), Accum::Replace, vm.transpose(), mat(&x, m, kk, m), 1.0, Par::Seq);
        let mut ty = vec![0.0; kk * kk];
        matmul(mat_mut(&mut ty, kk, kk, kk), Accum::Replace, tm.transpose(), mat(&y, kk, kk, kk), 1.0, Par::Seq);
        matmul(mat_mut(&mut x, m, kk, m), Accum::Add, vm, mat(&ty, kk, kk, kk), -0.5, Par::Seq);
        // A22 -= [V W] [W V]ᵀ
        let mut left = Vec::with_capacity(2 * m * kk);
        left.extend_from_slice(&v);
        left.extend_from_slice(&x);
        let mut right = Vec::with_capacity(2 * m * kk);
        right.extend_from_slice(&x);
        right.extend_from_slice(&v);
        tri::matmul(
            mat_mut(&mut a[a22..], m, m, n),
            TriangularLower,
            Accum::Add,
            mat(&left, m, 2 * kk, m),
            Rect,
            mat(&right, m, 2 * kk, m).transpose(),
            Rect,
            -1.0,
            Par::Seq,
        );
        j += b;
    }
    let ld = 2 * b + 1;
    let mut band = vec![0.0; ld * n];
    for p in 0..n {
        for q in p..(p + b + 1).min(n) {
            band[p * ld + q - p] = a[p * n + q];
        }
    }
    band
}

/// Bulge chasing from lower band of width `b` (storage from
/// [`dense_to_band`]) to tridiagonal `(d, e)`.
fn band_to_tridiagonal(band: &mut [f64], n: usize, b: usize) -> (Vec<f64>, Vec<f64>) {
    let ld = 2 * b + 1;
    let idx = |q: usize, p: usize| p * ld + q - p;
    let mut x = vec![0.0; b];
    let mut blk = vec![0.0; b * b];
    let mut pbuf = vec![0.0; b];
    for i in 0..n.saturating_sub(2) {
        let mut r0 = i + 1;
        let mut len = b.min(n - 1 - i);
        for q in 0..len {
            x[q] = band[idx(r0 + q, i)];
        }
        let (mut tau, beta) = householder(&mut x[..len]);
        band[idx(r0, i)] = beta;
        for q in 1..len {
            band[idx(r0 + q, i)] = 0.0;
        }
        let mut v = x[..len].to_vec();
        v[0] = 1.0;
        loop {
            // two-sided update of the diagonal block
            if tau != 0.0 {
                for c in 0..len {
                    for r in c..len {
                        let val = band[idx(r0 + r, r0 + c)];
                        blk[c * len + r] = val;
                        blk[r * len + c] = val;
                    }
                }
                let mut pv = 0.0;
                for r in 0..len {
                    let mut s = 0.0;
                    for c in 0..len {
                        s += blk[c * len + r] * v[c];
                    }
                    pbuf[r] = tau * s;
                    pv += pbuf[r] * v[r];
                }
                let kf = -0.5 * tau * pv;
                for r in 0..len {
                    pbuf[r] += kf * v[r];
                }
                for c in 0..len {
                    for r in c..len {
                        band[idx(r0 + r, r0 + c)] -= v[r] * pbuf[c] + pbuf[r] * v[c];
                    }
                }
            }
            // block below, rows s0..s0+m, columns r0..r0+len
            let s0 = r0 + len;
            if s0 >= n {
                break;
            }
            let m = b.min(n - s0);
            for c in 0..len {
                for r in 0..m {
                    let (q, p) = (s0 + r, r0 + c);
                    blk[c * m + r] = if q - p <= 2 * b { band[idx(q, p)] } else { 0.0 };
                }
            }
            if tau != 0.0 {
                for r in 0..m {
                    let mut s = 0.0;
                    for c in 0..len {
                        s += blk[c * m + r] * v[c];
                    }
                    s *= tau;
                    for c in 0..len {
                        blk[c * m + r] -= s * v[c];
                    }
                }
            }
            // new reflector from the first column, applied from the left
            let (tau2, beta2) = householder(&mut blk[..m]);
            let mut v2 = blk[..m].to_vec();
            v2[0] = 1.0;
            blk[0] = beta2;
            for r in 1..m {
                blk[r] = 0.0;
            }
            if tau2 != 0.0 {
                for c in 1..len {
                    let col = &mut blk[c * m..(c + 1) * m];
                    let s: f64 = col.iter().zip(&v2).map(|(a, b)| a * b).sum::<f64>() * tau2;
                    for (a, vv) in col.iter_mut().zip(&v2) {
                        *a -= s * vv;
                    }
                }
            }
            for c in 0..len {
                for r in 0..m {
                    let (q, p) = (s0 + r, r0 + c);
                    if q - p <= 2 * b {
                        band[idx(q, p)] = blk[c * m + r];
                    } else {
                        debug_assert!(blk[c * m + r].abs() < 1e-8, "bulge escaped the band storage");
                    }
                }
            }
            r0 = s0;
            len = m;
            v = v2;
            tau = tau2;
        }
    }
    let d = (0..n).map(|p| band[idx(p, p)]).collect();
    let e = (0..n.saturating_sub(1)).map(|p| band[idx(p + 1, p)]).collect();
    (d, e)
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_N {
        return Err(Error::resource(format!("dense eigensolve of N = {n} exceeds the cap {MAX_DENSE_N}")));
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn eigenvalues_symmetric(m: &SymMatrix) -> Result<Vec<f64>> {
    check_size(m.n())?;
    eigenvalues_from_vec(m.n(), m.as_slice().to_vec())
}

/// Same as [`eigenvalues_symmetric`] but consumes the storage.
pub fn eigenvalues_owned(m: SymMatrix) -> Result<Vec<f64>> {
    check_size(m.n())?;
    let n = m.n();
    eigenvalues_from_vec(n, m.into_vec())
}

fn eigenvalues_from_vec(n: usize, mut a: Vec<f64>) -> Result<Vec<f64>> {
    let (mut d, e) = if n >= TWO_STAGE_MIN {
        let mut band = dense_to_band(&mut a, n, BAND);
        drop(a);
        band_to_tridiagonal(&mut band, n, BAND)
    } else {
        let (d, e, _) = tridiagonalize(&mut a, n, false);
        (d, e)
    };
    tridiagonal_ql(&mut d, &e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// One-stage path regardless of size; kept for cross-checking the two-stage
/// reduction.
pub fn eigenvalues_one_stage(m: &SymMatrix) -> Result<Vec<f64>> {
    check_size(m.n())?;
    let mut a = m.as_slice().to_vec();
    let (mut d, e, _) = tridiagonalize(&mut a, m.n(), false);
    tridiagonal_ql(&mut d, &e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues ascending and the matching orthonormal eigenvectors as
/// columns of a column-major `n × n` matrix.
pub fn eigen_symmetric(m: &SymMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.n();
    check_size(n)?;
    if n > OWN_VECTORS_MAX {
        let fm = mat(m.as_slice(), n, n, n);
        let evd = fm
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Convergence { message: format!("eigendecomposition failed: {e:?}"), residual: f64::NAN, iterations: 0 })?;
        let s = evd.S();
        let u = evd.U();
        let vals: Vec<f64> = (0..n).map(|i| s[i]).collect();
        let mut vecs = vec![0.0; n * n];
        for c in 0..n {
            for r in 0..n {
                vecs[c * n + r] = u[(r, c)];
            }
        }
        return Ok((vals, vecs));
    }
    eigen_own(m)
}

/// In-house eigendecomposition (tridiagonalization, accumulated QL).
pub fn eigen_own(m: &SymMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let (mut d, e, refl) = tridiagonalize(&mut a, n, true);
    let mut z = accumulate_q(n, &refl);
    tridiagonal_ql(&mut d, &e, Some(&mut z))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let vals = order.iter().map(|&i| d[i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (c, &src) in order.iter().enumerate() {
        vecs[c * n..(c + 1) * n].copy_from_slice(&z[src * n..(src + 1) * n]);
    }
    Ok((vals, vecs))
}
