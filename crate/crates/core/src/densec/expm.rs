//! Matrix exponential by scaling and squaring with Padé approximants.
//!
// Degree selection and the theta thresholds follow Higham, "The Scaling and
// Squaring Method for the Matrix Exponential Revisited" (2005).

use super::{vec_norm, CMatrix, DenseError, C64, I, ZERO};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `e^A` for a square complex matrix. Accurate to roughly unit roundoff in
/// the backward-error sense.
pub fn expm(a: &CMatrix) -> Result<CMatrix, DenseError> {
    let n = a.square_dim()?;
    if !a.is_finite() {
        return Err(DenseError::NonFinite);
    }
    let norm = a.norm_1();
    if norm == 0.0 {
        return Ok(CMatrix::identity(n));
    }
    for (deg, theta) in THETA {
        if norm <= theta {
            let (u, v) = pade_low(a, deg);
            return solve_pade(&u, &v);
        }
    }
    let squarings = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale(C64::new(2f64.powi(-squarings), 0.0));
    let (u, v) = pade13(&scaled);
    let mut r = solve_pade(&u, &v)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

fn add_scaled(acc: &mut CMatrix, m: &CMatrix, s: f64) {
    let n = acc.cols();
    for i in 0..acc.rows() {
        for j in 0..n {
            acc[(i, j)] += m[(i, j)] * s;
        }
    }
}

fn pade_low(a: &CMatrix, deg: usize) -> (CMatrix, CMatrix) {
    let b: &[f64] = match deg {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        _ => &B9,
    };
    let n = a.rows();
    let a2 = a * a;
    // even powers I, A^2, A^4, ...
    let mut powers = vec![CMatrix::identity(n), a2.clone()];
    while powers.len() < deg / 2 + 1 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        add_scaled(&mut u_inner, p, b[2 * k + 1]);
        add_scaled(&mut v, p, b[2 * k]);
    }
    (a * &u_inner, v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = &B13;
    let n = a.rows();
    let ident = CMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut u_hi = CMatrix::zeros(n, n);
    add_scaled(&mut u_hi, &a6, b[13]);
    add_scaled(&mut u_hi, &a4, b[11]);
    add_scaled(&mut u_hi, &a2, b[9]);
    let mut u_inner = &a6 * &u_hi;
    add_scaled(&mut u_inner, &a6, b[7]);
    add_scaled(&mut u_inner, &a4, b[5]);
    add_scaled(&mut u_inner, &a2, b[3]);
    add_scaled(&mut u_inner, &ident, b[1]);
    let u = a * &u_inner;

    let mut v_hi = CMatrix::zeros(n, n);
    add_scaled(&mut v_hi, &a6, b[12]);
    add_scaled(&mut v_hi, &a4, b[10]);
    add_scaled(&mut v_hi, &a2, b[8]);
    let mut v = &a6 * &v_hi;
    add_scaled(&mut v, &a6, b[6]);
    add_scaled(&mut v, &a4, b[4]);
    add_scaled(&mut v, &a2, b[2]);
    add_scaled(&mut v, &ident, b[0]);
    (u, v)
}

/// `(V - U)^{-1} (V + U)`.
fn solve_pade(u: &CMatrix, v: &CMatrix) -> Result<CMatrix, DenseError> {
    let p = v + u;
    let q = v - u;
    lu_solve(q, p)
}

/// Solves `A X = B` by LU with partial pivoting.
pub(crate) fn lu_solve(mut a: CMatrix, mut b: CMatrix) -> Result<CMatrix, DenseError> {
    let n = a.square_dim()?;
    if b.rows() != n {
        return Err(DenseError::DimensionMismatch { expected: n, found: b.rows() });
    }
    let m = b.cols();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap();
        if a[(piv, k)].norm() == 0.0 {
            return Err(DenseError::Singular);
        }
        if piv != k {
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(piv, j)];
                a[(piv, j)] = t;
            }
            for j in 0..m {
                let t = b[(k, j)];
                b[(k, j)] = b[(piv, j)];
                b[(piv, j)] = t;
            }
        }
        let d = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / d;
            if f == ZERO {
                continue;
            }
            for j in k..n {
                let t = a[(k, j)];
                a[(i, j)] -= f * t;
            }
            for j in 0..m {
                let t = b[(k, j)];
                b[(i, j)] -= f * t;
            }
        }
    }
    for k in (0..n).rev() {
        let d = a[(k, k)];
        for j in 0..m {
            let mut s = b[(k, j)];
            for l in k + 1..n {
                s -= a[(k, l)] * b[(l, j)];
            }
            b[(k, j)] = s / d;
        }
    }
    Ok(b)
}

/// Smallest tolerance [`propagate`] accepts.
pub const ACHIEVABLE_TOL: f64 = 1e-14;

/// `e^{-i m t} v`.
///
/// The exponential is computed to unit roundoff; `tol` is the caller's
/// requested relative accuracy and must not be below 1e-14.
pub fn propagate(m: &CMatrix, v: &[C64], t: f64, tol: f64) -> Result<Vec<C64>, DenseError> {
    let n = m.square_dim()?;
    if v.len() != n {
        return Err(DenseError::DimensionMismatch { expected: n, found: v.len() });
    }
    if !(tol >= ACHIEVABLE_TOL) {
        return Err(DenseError::BadTolerance(tol));
    }
    if t == 0.0 || vec_norm(v) == 0.0 {
        return Ok(v.to_vec());
    }
    let gen = m.scale(-I * t);
    expm(&gen)?.mul_vec(v)
}

/// Cached one-step propagator `e^{-i m dt}` for uniform time grids.
#[derive(Clone, Debug)]
pub struct Propagator {
    dt: f64,
    step: CMatrix,
}

impl Propagator {
    pub fn new(m: &CMatrix, dt: f64) -> Result<Self, DenseError> {
        m.square_dim()?;
        let step = expm(&m.scale(-I * dt))?;
        Ok(Propagator { dt, step })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.step
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>, DenseError> {
        self.step.mul_vec(v)
    }
}
