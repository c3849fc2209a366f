//! Nonsymmetric complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form, then single-shift complex
//! QR sweeps (Wilkinson shift, implicit bulge chasing with Givens rotations)
//! to a complex Schur form `T = Z^H M Z`. Eigenvectors come from back
//! substitution on `T` and are mapped back through `Z`.
//!
//! Defective matrices are reported honestly: repeated eigenvalues come with
//! nearly parallel vectors, never with fabricated independent ones.

use super::expm::lu_solve;
use super::{vec_norm, CMatrix, DenseError, C64, ONE, ZERO};

const EPS: f64 = f64::EPSILON;
const MAX_ITER_PER_EIGENVALUE: usize = 60;

#[derive(Clone, Debug)]
pub struct EigenResult {
    pub values: Vec<C64>,
    /// Right eigenvectors, unit Euclidean norm, largest component real positive.
    pub vectors: Vec<Vec<C64>>,
    /// Largest `‖Mv − λv‖ / ‖M‖_F` over the returned pairs.
    pub residual_bound: f64,
}

impl EigenResult {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (C64, &[C64])> {
        self.values.iter().copied().zip(self.vectors.iter().map(Vec::as_slice))
    }
}

/// Eigenvalues and right eigenvectors of a square complex matrix.
///
/// Fails with `NoConvergence` if the QR sweep stalls or if any pair's relative
/// residual exceeds `tol`.
pub fn eig(m: &CMatrix, tol: f64) -> Result<EigenResult, DenseError> {
    if !(tol > 0.0) {
        return Err(DenseError::BadTolerance(tol));
    }
    let n = m.square_dim()?;
    if !m.is_finite() {
        return Err(DenseError::NonFinite);
    }
    if n == 0 {
        return Ok(EigenResult { values: vec![], vectors: vec![], residual_bound: 0.0 });
    }

    let mut schur = Work::new(m);
    schur.hessenberg();
    schur.qr_iterate()?;
    let values: Vec<C64> = (0..n).map(|k| schur.h(k, k)).collect();
    let vectors: Vec<Vec<C64>> = (0..n).map(|k| schur.eigenvector(k)).collect();

    let norm = m.frobenius_norm();
    let mut worst = 0.0_f64;
    for (lambda, v) in values.iter().zip(&vectors) {
        let mv = m.mul_vec(v)?;
        let r = vec_norm(&mv.iter().zip(v).map(|(a, b)| a - lambda * b).collect::<Vec<_>>());
        worst = worst.max(if norm > 0.0 { r / norm } else { r });
        if !r.is_finite() {
            return Err(DenseError::NonFinite);
        }
    }
    if worst > tol {
        return Err(DenseError::NoConvergence { achieved: worst });
    }
    Ok(EigenResult { values, vectors, residual_bound: worst })
}

/// Eigenvector for an accurately known eigenvalue by inverse iteration on
/// `m − λI`, starting from `start`.
///
/// At a defective eigenvalue the plain eigensolver's vectors carry errors of
/// order `ε^{1/k}` for a `k×k` Jordan block; a few inverse steps with the
/// cluster mean as shift recover the eigenvector to working precision when
/// the eigenspace is one-dimensional. Normalized like [`eig`].
pub fn inverse_iteration(m: &CMatrix, lambda: C64, start: &[C64], steps: usize) -> Result<Vec<C64>, DenseError> {
    let n = m.square_dim()?;
    if start.len() != n {
        return Err(DenseError::DimensionMismatch { expected: n, found: start.len() });
    }
    if vec_norm(start) == 0.0 {
        return Err(DenseError::Singular);
    }
    let scale = m.frobenius_norm().max(1.0);
    let mut v = start.to_vec();
    for _ in 0..steps {
        let rhs = CMatrix::from_vec(n, 1, v.clone())?;
        let mut shift = lambda;
        let solved = loop {
            match lu_solve(m.shifted(shift), rhs.clone()) {
                Ok(x) => break x,
                // exactly singular: nudge the shift off the eigenvalue
                Err(DenseError::Singular) => shift += C64::new(EPS * scale, 0.0),
                Err(e) => return Err(e),
            }
        };
        v = solved.into_vec();
        let nrm = vec_norm(&v);
        if !nrm.is_finite() || nrm == 0.0 {
            return Err(DenseError::NonFinite);
        }
        v.iter_mut().for_each(|z| *z /= nrm);
    }
    normalize_phase(&mut v);
    Ok(v)
}

#[inline]
fn abs1(z: C64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Scales `v` to unit norm and rotates its largest-modulus entry onto the
/// positive real axis (first index wins ties).
pub(crate) fn normalize_phase(v: &mut [C64]) {
    let nrm = vec_norm(v);
    if nrm == 0.0 {
        return;
    }
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let phase = v[best] / v[best].norm();
    let s = phase.conj() / nrm;
    for z in v.iter_mut() {
        *z *= s;
    }
    v[best] = C64::new(v[best].re, 0.0);
}

struct Work {
    n: usize,
    h: Vec<C64>,
    z: Vec<C64>,
    norm: f64,
}

impl Work {
    fn new(m: &CMatrix) -> Self {
        let n = m.rows();
        let mut z = vec![ZERO; n * n];
        for i in 0..n {
            z[i * n + i] = ONE;
        }
        Work { n, h: m.as_slice().to_vec(), z, norm: m.frobenius_norm() }
    }

    #[inline]
    fn h(&self, i: usize, j: usize) -> C64 {
        self.h[i * self.n + j]
    }

    fn hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for k in 0..n - 2 {
            let x: Vec<C64> = (k + 1..n).map(|i| self.h[i * n + k]).collect();
            let alpha = vec_norm(&x);
            if alpha <= EPS * self.norm * 1e-3 || x[1..].iter().all(|z| *z == ZERO) {
                continue;
            }
            let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
            let mut v = x;
            v[0] += phase * alpha;
            let vn = vec_norm(&v);
            for z in v.iter_mut() {
                *z /= vn;
            }
            // H <- P H, P = I - 2 v v^H acting on rows k+1..n
            for j in 0..n {
                let mut s = ZERO;
                for (r, vi) in v.iter().enumerate() {
                    s += vi.conj() * self.h[(k + 1 + r) * n + j];
                }
                s *= 2.0;
                for (r, vi) in v.iter().enumerate() {
                    self.h[(k + 1 + r) * n + j] -= vi * s;
                }
            }
            // H <- H P, Z <- Z P on columns k+1..n
            for mat in [&mut self.h, &mut self.z] {
                for i in 0..n {
                    let row = &mut mat[i * n..(i + 1) * n];
                    let mut s = ZERO;
                    for (r, vi) in v.iter().enumerate() {
                        s += row[k + 1 + r] * vi;
                    }
                    s *= 2.0;
                    for (r, vi) in v.iter().enumerate() {
                        row[k + 1 + r] -= s * vi.conj();
                    }
                }
            }
            for i in k + 2..n {
                self.h[i * n + k] = ZERO;
            }
        }
    }

    fn qr_iterate(&mut self) -> Result<(), DenseError> {
        let n = self.n;
        let mut hi = n - 1;
        let mut iter = 0usize;
        let mut total = 0usize;
        let max_total = MAX_ITER_PER_EIGENVALUE * n.max(1);
        while hi > 0 {
            let mut lo = hi;
            while lo > 0 {
                let mut s = abs1(self.h(lo - 1, lo - 1)) + abs1(self.h(lo, lo));
                if s == 0.0 {
                    s = self.norm;
                }
                if abs1(self.h(lo, lo - 1)) <= EPS * s {
                    self.h[lo * n + lo - 1] = ZERO;
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                hi -= 1;
                iter = 0;
                continue;
            }
            iter += 1;
            total += 1;
            if total > max_total {
                let achieved = abs1(self.h(hi, hi - 1)) / self.norm.max(f64::MIN_POSITIVE);
                return Err(DenseError::NoConvergence { achieved });
            }
            let mu = if iter % 11 == 10 {
                // exceptional shift to break cycles
                self.h(hi, hi) + C64::new(0.75 * abs1(self.h(hi, hi - 1)), 0.0)
            } else {
                self.wilkinson_shift(hi)
            };
            self.qr_sweep(lo, hi, mu);
        }
        Ok(())
    }

    fn wilkinson_shift(&self, hi: usize) -> C64 {
        let a = self.h(hi - 1, hi - 1);
        let b = self.h(hi - 1, hi);
        let c = self.h(hi, hi - 1);
        let d = self.h(hi, hi);
        let half = (a - d) * 0.5;
        let disc = (half * half + b * c).sqrt();
        let mid = (a + d) * 0.5;
        let (m1, m2) = (mid + disc, mid - disc);
        if (m1 - d).norm() <= (m2 - d).norm() {
            m1
        } else {
            m2
        }
    }

    fn qr_sweep(&mut self, lo: usize, hi: usize, mu: C64) {
        let n = self.n;
        for k in lo..hi {
            let (x, y) = if k == lo {
                (self.h(lo, lo) - mu, self.h(lo + 1, lo))
            } else {
                (self.h(k, k - 1), self.h(k + 1, k - 1))
            };
            let Some((c, s)) = givens(x, y) else { continue };
            let col0 = if k == lo { lo } else { k - 1 };
            for j in col0..n {
                let u = self.h[k * n + j];
                let v = self.h[(k + 1) * n + j];
                self.h[k * n + j] = u * c + s * v;
                self.h[(k + 1) * n + j] = -s.conj() * u + v * c;
            }
            if k > lo {
                self.h[(k + 1) * n + k - 1] = ZERO;
            }
            let row_end = (k + 2).min(hi);
            for i in 0..=row_end {
                rotate_cols(&mut self.h[i * n..(i + 1) * n], k, c, s);
            }
            for i in 0..n {
                rotate_cols(&mut self.z[i * n..(i + 1) * n], k, c, s);
            }
        }
    }

    /// Eigenvector for diagonal entry `k` of the Schur form.
    fn eigenvector(&self, k: usize) -> Vec<C64> {
        let n = self.n;
        let lambda = self.h(k, k);
        let small = if self.norm > 0.0 { EPS * self.norm } else { 1.0 };
        let mut y = vec![ZERO; n];
        y[k] = ONE;
        for j in (0..k).rev() {
            let mut s = ZERO;
            for m in j + 1..=k {
                s += self.h(j, m) * y[m];
            }
            let mut d = self.h(j, j) - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            // divide through |d| first so tiny pivots cannot underflow |d|²
            let dn = d.norm();
            y[j] = -(s / dn) * (d.conj() / dn);
            let big = y[j..=k].iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for z in y[j..=k].iter_mut() {
                    *z /= big;
                }
            }
        }
        let mut v = vec![ZERO; n];
        for (i, vi) in v.iter_mut().enumerate() {
            let zrow = &self.z[i * n..(i + 1) * n];
            *vi = zrow[..=k].iter().zip(&y[..=k]).map(|(a, b)| a * b).sum();
        }
        normalize_phase(&mut v);
        v
    }
}

/// Unitary `[[c, s], [-conj(s), c]]` with real `c` mapping `(x, y)` to `(r, 0)`.
fn givens(x: C64, y: C64) -> Option<(f64, C64)> {
    if y == ZERO {
        return None;
    }
    let ax = x.norm();
    let nrm = ax.hypot(y.norm());
    let phase = if ax > 0.0 { x / ax } else { ONE };
    Some((ax / nrm, phase * y.conj() / nrm))
}

/// Right-multiplies columns `k, k+1` of a row by the adjoint rotation.
#[inline]
fn rotate_cols(row: &mut [C64], k: usize, c: f64, s: C64) {
    let p = row[k];
    let q = row[k + 1];
    row[k] = p * c + q * s.conj();
    row[k + 1] = -p * s + q * c;
}
