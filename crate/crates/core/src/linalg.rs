//! Small dense eigen-solvers: shifted QR for general complex matrices and
//! cyclic Jacobi for real symmetric ones. Matrices are row-major slices.

use num_complex::Complex64;

use crate::error::{Error, Result};

fn check_square<T>(n: usize, a: &[T]) -> Result<()> {
    if a.len() != n * n {
        return Err(Error::Shape(format!(
            "{} entries for a {n}x{n} matrix",
            a.len()
        )));
    }
    Ok(())
}

/// Eigenvalues of a general complex matrix, in no particular order.
pub fn complex_eigenvalues(n: usize, a: &[Complex64]) -> Result<Vec<Complex64>> {
    check_square(n, a)?;
    let mut h = a.to_vec();
    hessenberg(n, &mut h);
    hessenberg_qr(n, &mut h)
}

/// Householder reduction to upper Hessenberg form, in place.
fn hessenberg(n: usize, h: &mut [Complex64]) {
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[i * n + k]).collect();
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v = x;
        v[0] += phase * norm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // H <- (I - 2vv*) H
        for j in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vi)| vi.conj() * h[(k + 1 + t) * n + j])
                .sum();
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t) * n + j] -= 2.0 * vi * s;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let s: Complex64 = v
                .iter()
                .enumerate()
                .map(|(t, vj)| h[i * n + k + 1 + t] * vj)
                .sum();
            for (t, vj) in v.iter().enumerate() {
                h[i * n + k + 1 + t] -= 2.0 * s * vj.conj();
            }
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if norm == 0.0 {
        return (1.0, Complex64::default());
    }
    if a.norm() == 0.0 {
        return (0.0, b.conj() / b.norm());
    }
    let phase = a / a.norm();
    (a.norm() / norm, phase * b.conj() / norm)
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) / 2.0;
    let root = (half * half + b * c).sqrt();
    let mean = (a + d) / 2.0;
    let (l1, l2) = (mean + root, mean - root);
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(n: usize, h: &mut [Complex64]) -> Result<Vec<Complex64>> {
    let mut eig = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eig);
    }
    let mut hi = n - 1;
    let mut iter = 0;
    loop {
        if hi == 0 {
            eig.push(h[0]);
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[l * n + l - 1].norm();
            let scale = h[l * n + l].norm() + h[(l - 1) * n + l - 1].norm();
            if sub <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
                h[l * n + l - 1] = Complex64::default();
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig.push(h[hi * n + hi]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::NoConvergence("complex QR iteration"));
        }
        let mu = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[hi * n + hi] + h[hi * n + hi - 1].norm() * 0.75
        } else {
            wilkinson(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };
        for i in l..=hi {
            h[i * n + i] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in k..=hi {
                let (x, y) = (h[k * n + j], h[(k + 1) * n + j]);
                h[k * n + j] = c * x + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + c * y;
            }
            rotations.push((c, s));
        }
        for (off, &(c, s)) in rotations.iter().enumerate() {
            let k = l + off;
            for i in l..=(k + 1).min(hi) {
                let (x, y) = (h[i * n + k], h[i * n + k + 1]);
                h[i * n + k] = x * c + y * s.conj();
                h[i * n + k + 1] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[i * n + i] += mu;
        }
    }
    Ok(eig)
}

/// Spectral decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub n: usize,
    /// Eigenvalues in decreasing order.
    pub values: Vec<f64>,
    /// Row-major; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
    /// Frobenius norm of the off-diagonal part at termination.
    pub off_norm: f64,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.vectors[i * self.n + j]).collect()
    }
}

pub const JACOBI_MAX_SWEEPS: usize = 100;

fn off_norm(n: usize, a: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j] * a[i * n + j];
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi with threshold sweeps. Stops when the off-diagonal norm is
/// below `1e-14` times the Frobenius norm (and never above `1e-12` absolute
/// for matrices of norm up to 100).
pub fn jacobi_eigen(n: usize, a: &[f64]) -> Result<SymmetricEigen> {
    check_square(n, a)?;
    for i in 0..n {
        for j in 0..i {
            if (a[i * n + j] - a[j * n + i]).abs() > 1e-12 * (1.0 + a[i * n + j].abs()) {
                return Err(Error::Precondition(format!(
                    "matrix not symmetric at ({i}, {j})"
                )));
            }
        }
    }
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-14 * frob.max(1e-300);
    let mut sweeps = 0;
    let mut off = off_norm(n, &a);
    while off > tol {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence("Jacobi sweeps"));
        }
        sweeps += 1;
        // skip negligible entries during the first sweeps
        let threshold = if sweeps < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                if sweeps > 4 && apq.abs() < f64::EPSILON * 1e-2 * (app.abs() + aqq.abs()) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
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
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        off = off_norm(n, &a);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new] = v[k * n + old];
        }
    }
    Ok(SymmetricEigen {
        n,
        values,
        vectors,
        off_norm: off,
        sweeps,
    })
}
