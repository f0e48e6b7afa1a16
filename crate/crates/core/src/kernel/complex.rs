//! Dense complex matrices and validated Hermitian matrices.

use num::complex::Complex64;
use num::Zero;

use super::KernelError;

pub type Complex = Complex64;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self, KernelError> {
        if rows == 0 || cols == 0 {
            return Err(KernelError::Empty);
        }
        if data.len() != rows * cols {
            return Err(KernelError::BadEntryCount {
                rows,
                cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
        if self.cols != other.rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix, KernelError> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(
        &self,
        other: &ComplexMatrix,
        f: impl Fn(Complex, Complex) -> Complex,
    ) -> Result<ComplexMatrix, KernelError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(KernelError::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        let data = self.data.iter().map(|&v| v * factor).collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `max |self - other|` entrywise.
    pub fn max_diff(&self, other: &ComplexMatrix) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (&a, &b)| m.max((a - b).norm()))
    }

    /// `max |adjoint(self) * self - I|`: zero for a unitary matrix.
    pub fn unitary_defect(&self) -> f64 {
        let gram = self.adjoint().mul(self).expect("square product");
        gram.max_diff(&ComplexMatrix::identity(self.cols))
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Square complex matrix validated to be Hermitian.
///
/// Construction rejects inputs whose conjugate-symmetry defect exceeds
/// [`HermitianMatrix::SYMMETRY_TOL`] and then averages the two triangles, so
/// a stored matrix is Hermitian to the last bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Maximum allowed `max |m[i][j] - conj(m[j][i])|` at construction.
    pub const SYMMETRY_TOL: f64 = 1e-12;

    pub fn new(dim: usize, data: Vec<Complex>) -> Result<Self, KernelError> {
        Self::from_matrix(ComplexMatrix::new(dim, dim, data)?)
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self, KernelError> {
        if m.rows() != m.cols() {
            return Err(KernelError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let defect = Self::symmetry_defect(&m);
        if defect > Self::SYMMETRY_TOL {
            return Err(KernelError::NotHermitian { defect });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without a defect check; for internal results that are
    /// Hermitian by construction up to roundoff (products `U† A U`, sums of
    /// Hermitian terms, and so on).
    pub(crate) fn symmetrized(m: ComplexMatrix) -> Self {
        let n = m.rows();
        let mut out = m.clone();
        for i in 0..n {
            out.set(i, i, Complex::new(m.get(i, i).re, 0.0));
            for j in i + 1..n {
                let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        Self { inner: out }
    }

    pub fn symmetry_defect(m: &ComplexMatrix) -> f64 {
        let n = m.rows();
        let mut defect: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((m.get(i, j) - m.get(j, i).conj()).norm());
            }
        }
        defect
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(dim),
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = ComplexMatrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, Complex::new(v, 0.0));
        }
        Self { inner: m }
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.inner.get(i, j)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<HermitianMatrix, KernelError> {
        Ok(Self {
            inner: self.inner.add(&other.inner)?,
        })
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Result<HermitianMatrix, KernelError> {
        Ok(Self {
            inner: self.inner.sub(&other.inner)?,
        })
    }

    pub fn scale(&self, factor: f64) -> HermitianMatrix {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    /// Matrix product; Hermitian only when the factors commute, so the
    /// result is returned as a plain complex matrix.
    pub fn mul(&self, other: &HermitianMatrix) -> ComplexMatrix {
        self.inner.mul(&other.inner).expect("same dimension")
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.max_abs()
    }

    pub fn max_diff(&self, other: &HermitianMatrix) -> f64 {
        self.inner.max_diff(&other.inner)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.get(i, i).re).sum()
    }

    /// `U† A U` for a unitary `U`, symmetrized.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> HermitianMatrix {
        let prod = u
            .adjoint()
            .mul(&self.inner)
            .and_then(|m| m.mul(u))
            .expect("conforming dimensions");
        Self::symmetrized(prod)
    }

    /// Real coordinates of the matrix: diagonal entries first, then
    /// `(re, im)` of each strict upper-triangle entry. A real-linear
    /// bijection onto `R^{d^2}` used by all span computations.
    pub fn flatten_real(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            out.push(self.get(i, i).re);
        }
        for i in 0..d {
            for j in i + 1..d {
                let v = self.get(i, j);
                out.push(v.re);
                out.push(v.im);
            }
        }
        out
    }

    /// Inverse of [`flatten_real`](Self::flatten_real).
    pub fn unflatten_real(dim: usize, coords: &[f64]) -> Result<Self, KernelError> {
        if coords.len() != dim * dim {
            return Err(KernelError::BadEntryCount {
                rows: dim,
                cols: dim,
                got: coords.len(),
            });
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex::new(coords[i], 0.0));
        }
        let mut k = dim;
        for i in 0..dim {
            for j in i + 1..dim {
                let v = Complex::new(coords[k], coords[k + 1]);
                k += 2;
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        Ok(Self { inner: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let err = HermitianMatrix::new(2, vec![c(1.0, 0.0), c(0.5, 0.1), c(0.5, 0.1), c(0.0, 0.0)]);
        assert!(matches!(err, Err(KernelError::NotHermitian { .. })));
    }

    #[test]
    fn accepts_and_symmetrizes_within_tolerance() {
        let eps = 1e-13;
        let m = HermitianMatrix::new(
            2,
            vec![c(1.0, 0.0), c(0.5, eps), c(0.5, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(m.get(0, 1), m.get(1, 0).conj());
    }

    #[test]
    fn flatten_roundtrip() {
        let m = HermitianMatrix::new(
            2,
            vec![c(0.3, 0.0), c(0.1, -0.2), c(0.1, 0.2), c(0.9, 0.0)],
        )
        .unwrap();
        let back = HermitianMatrix::unflatten_real(2, &m.flatten_real()).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn adjoint_and_unitary_defect() {
        let id = ComplexMatrix::identity(3);
        assert_eq!(id.unitary_defect(), 0.0);
        let swap = ComplexMatrix::new(
            2,
            2,
            vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(swap.unitary_defect() < 1e-15);
    }
}
