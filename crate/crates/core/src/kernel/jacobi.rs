//! Cyclic Jacobi diagonalization for Hermitian matrices.
//!
//! Each rotation is a complex plane rotation annihilating one off-diagonal
//! entry; sweeps repeat until the largest off-diagonal magnitude falls under
//! the sweep threshold. Simple and accurate at desk scale (dim <= 64).

use num::complex::Complex64;
use num::Zero;

use super::complex::{ComplexMatrix, HermitianMatrix};

const SWEEP_THRESHOLD: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = V diag(values) V†` with `values` ascending
/// and the columns of `V` orthonormal.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// `V diag(values) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled.set(i, j, scaled.get(i, j) * self.values[j]);
            }
        }
        scaled.mul(&self.vectors.adjoint()).expect("square")
    }

    /// `max |A - V diag(values) V†|` entrywise.
    pub fn reconstruction_residual(&self, a: &HermitianMatrix) -> f64 {
        self.reconstruct().max_diff(a.as_matrix())
    }

    /// Orthogonal projection onto the span of the eigenvectors whose
    /// eigenvalue satisfies the predicate.
    pub fn projection_where(&self, keep: impl Fn(f64) -> bool) -> HermitianMatrix {
        let n = self.values.len();
        let mut p = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            if !keep(lambda) {
                continue;
            }
            let col = self.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    let v = p.get(i, j) + col[i] * col[j].conj();
                    p.set(i, j, v);
                }
            }
        }
        HermitianMatrix::symmetrized(p)
    }
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(a: &HermitianMatrix) -> EigenDecomposition {
    let n = a.dim();
    let mut work = a.as_matrix().clone();
    let mut vectors = ComplexMatrix::identity(n);
    let scale = work.max_abs();
    if scale > 0.0 {
        let threshold = SWEEP_THRESHOLD * scale;
        for _ in 0..MAX_SWEEPS {
            if max_off_diagonal(&work) <= threshold {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut work, &mut vectors, p, q);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work.get(i, i).re.partial_cmp(&work.get(j, j).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| work.get(k, k).re).collect();
    let mut sorted = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            sorted.set(i, dst, vectors.get(i, src));
        }
    }
    EigenDecomposition {
        values,
        vectors: sorted,
    }
}

fn max_off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut m: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            m = m.max(a.get(i, j).norm());
        }
    }
    m
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (app - aqq) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + f64::hypot(1.0, tau))
    };
    let c = 1.0 / f64::hypot(1.0, t);
    let s = t * c;
    let n = a.rows();

    // a <- a * R, columns p and q.
    for i in 0..n {
        let aip = a.get(i, p);
        let aiq = a.get(i, q);
        a.set(i, p, aip * c + aiq * s * phase.conj());
        a.set(i, q, -aip * s * phase + aiq * c);
    }
    // a <- R† * a, rows p and q.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c + aqj * s * phase);
        a.set(q, j, -apj * s * phase.conj() + aqj * c);
    }
    // The rotation zeroes these analytically; pin them to kill drift.
    a.set(p, q, Complex64::zero());
    a.set(q, p, Complex64::zero());
    let dp = a.get(p, p);
    let dq = a.get(q, q);
    a.set(p, p, Complex64::new(dp.re, 0.0));
    a.set(q, q, Complex64::new(dq.re, 0.0));

    // v <- v * R.
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, vip * c + viq * s * phase.conj());
        v.set(i, q, -vip * s * phase + viq * c);
    }
}
