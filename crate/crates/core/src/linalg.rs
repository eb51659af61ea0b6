//! Small dense decompositions: singular values, Hermitian spectra, QR.
//!
//! Everything here targets matrices of a few hundred rows at most. The SVD is
//! one-sided (Hestenes) Jacobi, which reaches full relative accuracy on the
//! small singular values that decide Schmidt ranks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

const MAX_SWEEPS: usize = 100;
const JACOBI_EPS: f64 = 1e-15;
/// Columns with `‖c‖ ≤ JACOBI_EPS·‖A‖_F` are rounding noise. Rotating them
/// against large columns only feeds them fresh rounding error, so they are
/// left alone and treated as zero singular directions.
const NEGLIGIBLE_SQR: f64 = JACOBI_EPS * JACOBI_EPS;

/// `a = u · diag(singular_values) · v†` with singular values descending.
///
/// `u` is `m x k` and `v` is `n x k` with `k = min(m, n)`; both have
/// orthonormal columns.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

fn col_norm_sqr(c: &[C64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum()
}

fn col_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, &y)| x.conj() * y).sum()
}

fn columns_of(a: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..a.cols()).map(|j| a.column(j)).collect()
}

fn from_columns(rows: usize, cols: &[Vec<C64>]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Rotates columns `p` and `q` of both `work` and `acc`.
fn rotate_pair(work: &mut [Vec<C64>], acc: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for cols in [work, acc] {
        let (lo, hi) = cols.split_at_mut(q);
        let (cp, cq) = (&mut lo[p], &mut hi[0]);
        for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
            let yq = *y * phase;
            let xp = *x;
            *x = xp * c - yq * s;
            *y = xp * s + yq * c;
        }
    }
}

/// Singular value decomposition by one-sided Jacobi rotations.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = svd(&a.dagger())?;
        return Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    let (m, n) = (a.rows(), a.cols());
    let mut work = columns_of(a);
    let mut acc = columns_of(&ComplexMatrix::identity(n));
    let floor = NEGLIGIBLE_SQR * a.hs_norm_sqr();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = col_norm_sqr(&work[p]);
                let beta = col_norm_sqr(&work[q]);
                let gamma = col_inner(&work[p], &work[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= JACOBI_EPS * libm::sqrt(alpha * beta) || alpha.min(beta) <= floor {
                    continue;
                }
                rotated = true;
                // Rephase column q so the overlap is real and positive, then
                // apply the real rotation that zeroes it.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                rotate_pair(&mut work, &mut acc, p, q, c, c * t, phase);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!("Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")));
    }

    let mut order: Vec<(f64, usize)> = work.iter().enumerate().map(|(j, c)| (libm::sqrt(col_norm_sqr(c)), j)).collect();
    // Stable: ties keep the rotation order.
    order.sort_by(|x, y| y.0.total_cmp(&x.0));

    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut singular_values = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (rank, &(sigma, j)) in order.iter().enumerate() {
        singular_values.push(sigma);
        v_cols.push(acc[j].clone());
        if sigma > 0.0 && sigma * sigma > floor {
            u_cols.push(work[j].iter().map(|&z| z / sigma).collect());
        } else {
            u_cols.push(vec![ZERO; m]);
            missing.push(rank);
        }
    }
    complete_orthonormal(&mut u_cols, &missing, m);
    Ok(Svd { u: from_columns(m, &u_cols), singular_values, v: from_columns(n, &v_cols) })
}

/// Fills the listed zero columns with unit vectors orthogonal to the rest.
fn complete_orthonormal(cols: &mut [Vec<C64>], missing: &[usize], dim: usize) {
    let mut candidate = 0;
    for &slot in missing {
        while candidate < dim {
            let mut v = vec![ZERO; dim];
            v[candidate] = ONE;
            candidate += 1;
            for (k, other) in cols.iter().enumerate() {
                if k == slot || col_norm_sqr(other) == 0.0 {
                    continue;
                }
                let proj = col_inner(other, &v);
                for (x, &o) in v.iter_mut().zip(other) {
                    *x -= proj * o;
                }
            }
            let norm = libm::sqrt(col_norm_sqr(&v));
            if norm > 1e-8 {
                cols[slot] = v.into_iter().map(|z| z / norm).collect();
                break;
            }
        }
    }
}

/// Singular values only, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.singular_values)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled; cyclic Jacobi
/// diagonalizes the embedding.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::dim("eigenvalues of a non-square matrix"));
    }
    let n = h.rows();
    let scale = h.max_abs().max(1.0);
    if !h.is_hermitian(1e-9 * scale * n as f64) {
        return Err(Error::arg("matrix is not Hermitian"));
    }
    let m = 2 * n;
    let mut a = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            // Symmetrize while embedding so roundoff asymmetry cannot leak in.
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut evals = symmetric_jacobi(&mut a, m)?;
    evals.sort_by(f64::total_cmp);
    Ok(evals.into_iter().step_by(2).collect())
}

fn symmetric_jacobi(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        if off <= JACOBI_EPS * JACOBI_EPS * total {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if libm::fabs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Numerical(format!("Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps")))
}

/// Householder QR of a square matrix: `a = q·r`, `q` unitary, `r` upper
/// triangular. The diagonal of `r` carries arbitrary phases.
pub fn qr(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::dim("qr expects a square matrix"));
    }
    let n = a.rows();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let x: Vec<C64> = (k..n).map(|i| r[(i, k)]).collect();
        let norm = libm::sqrt(col_norm_sqr(&x));
        if norm == 0.0 {
            continue;
        }
        let lead = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let alpha = -lead * norm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = libm::sqrt(col_norm_sqr(&v));
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // r <- (I - 2vv†) r on rows k.., q <- q (I - 2vv†) on columns k..
        for j in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * r[(k + i, j)]).sum();
            for (i, &vi) in v.iter().enumerate() {
                r[(k + i, j)] -= vi * dot * 2.0;
            }
        }
        for i in 0..n {
            let dot: C64 = v.iter().enumerate().map(|(j, &vj)| q[(i, k + j)] * vj).sum();
            for (j, vj) in v.iter().enumerate() {
                q[(i, k + j)] -= dot * vj.conj() * 2.0;
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = ZERO;
        }
    }
    Ok((q, r))
}
