//! Action of the matrix exponential on a vector.
//!
//! Small matrices are exponentiated densely (Padé with scaling and
//! squaring); larger ones use an Arnoldi projection with adaptive
//! sub-stepping controlled by the standard a-posteriori error estimate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::sparse::CsrMatrix;

/// Largest dimension handled by the dense route.
pub const DENSE_LIMIT: usize = 512;

/// Target accuracy of the exponential action, relative to `‖v‖`.
pub const ACTION_TOLERANCE: f64 = 1e-12;

const KRYLOV_DIM: usize = 30;

/// `exp(scale · A) v`.
pub fn expm_action(a: &CsrMatrix, scale: f64, v: &[C64]) -> Vec<C64> {
    if scale == 0.0 || a.nnz() == 0 {
        return v.to_vec();
    }
    if a.dim() <= DENSE_LIMIT {
        dense_action(a, scale, v)
    } else {
        krylov_action(a, scale, v, ACTION_TOLERANCE)
    }
}

pub fn dense_action(a: &CsrMatrix, scale: f64, v: &[C64]) -> Vec<C64> {
    let m = a.to_dense() * C64::new(scale, 0.0);
    let u = m.exp();
    let x = DVector::from_column_slice(v);
    (u * x).iter().copied().collect()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn krylov_action(a: &CsrMatrix, scale: f64, v: &[C64], tol: f64) -> Vec<C64> {
    let n = a.dim();
    let total = scale.abs();
    let sign = scale.signum();
    let mut w = v.to_vec();
    let mut done = 0.0;
    let a_norm = a.norm_inf().max(f64::MIN_POSITIVE);
    // first guess at a step that keeps the projection well resolved
    let mut step = (KRYLOV_DIM as f64 / (2.0 * a_norm)).min(total);
    let m_max = KRYLOV_DIM.min(n);

    while done < total {
        let beta = norm(&w);
        if beta == 0.0 {
            break;
        }
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m_max + 1);
        basis.push(w.iter().map(|z| z / beta).collect());
        let mut h = DMatrix::<C64>::zeros(m_max + 1, m_max);
        let mut m = m_max;
        let mut breakdown = false;
        let mut p = vec![C64::new(0.0, 0.0); n];
        for j in 0..m_max {
            a.mul_vec(&basis[j], &mut p);
            for z in p.iter_mut() {
                *z *= sign;
            }
            // modified Gram–Schmidt with one reorthogonalization pass
            for _ in 0..2 {
                for (i, q) in basis.iter().enumerate() {
                    let c = dot(q, &p);
                    h[(i, j)] += c;
                    for (pk, qk) in p.iter_mut().zip(q) {
                        *pk -= c * qk;
                    }
                }
            }
            let next = norm(&p);
            h[(j + 1, j)] = C64::new(next, 0.0);
            if next <= 1e-14 * a_norm {
                m = j + 1;
                breakdown = true;
                break;
            }
            basis.push(p.iter().map(|z| z / next).collect());
        }

        let hm = h.view((0, 0), (m, m)).clone_owned();
        let h_next = h[(m, m - 1)].norm();
        let remaining = total - done;
        let mut dt = if breakdown { remaining } else { step.min(remaining) };
        let coeffs = loop {
            let e = (&hm * C64::new(dt, 0.0)).exp();
            let err = beta * h_next * dt * e[(m - 1, 0)].norm();
            if breakdown || err <= tol * beta * dt / total || dt < 1e-3 * total / 1e6 {
                break e.column(0).clone_owned();
            }
            dt *= 0.5;
        };
        let mut next_w = vec![C64::new(0.0, 0.0); n];
        for (k, q) in basis.iter().take(m).enumerate() {
            let c = coeffs[k] * beta;
            for (wk, qk) in next_w.iter_mut().zip(q) {
                *wk += c * qk;
            }
        }
        w = next_w;
        done += dt;
        step = (2.0 * dt).min(total);
        if remaining - dt <= 1e-15 * total {
            break;
        }
    }
    w
}
