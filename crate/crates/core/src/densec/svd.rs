//! One-sided Jacobi singular values and numerical rank.

use super::{CMatrix, C64};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order (one-sided Hestenes-Jacobi).
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    // work on columns of the taller orientation
    let a = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let (rows, cols) = (a.rows(), a.cols());
    let mut colv: Vec<Vec<C64>> = (0..cols).map(|j| (0..rows).map(|i| a[(i, j)]).collect()).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colv[p].iter().zip(&colv[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // rotate a_q by the phase of gamma so the pair is a real 2x2 problem
                let phase = gamma.conj() / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = colv.split_at_mut(q);
                for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let w = *xq * phase;
                    let np = *xp * c - w * s;
                    let nq = *xp * s + w * c;
                    *xp = np;
                    *xq = nq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colv.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank of `m - lambda I`: singular values below
/// `tol * sigma_max` count as zero. Geometric multiplicity of `lambda` is
/// `dim - rank_at(..)`.
pub fn rank_at(m: &CMatrix, lambda: C64, tol: f64) -> usize {
    let shifted = m.shifted(lambda);
    let sv = singular_values(&shifted);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}
