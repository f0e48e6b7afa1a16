//! Double-precision row reduction with partial pivoting. This mirrors the
//! rational engine for the quantum side, where effects are flattened to real
//! coordinate vectors and rank decisions carry a tolerance.

use super::KernelError;

/// Row-major dense matrix of `f64` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealSolution {
    pub values: Vec<f64>,
    pub unique: bool,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, KernelError> {
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

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, KernelError> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(KernelError::Empty);
        }
        let c = rows[0].len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(KernelError::DimensionMismatch {
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(r, c, data)
    }

    pub fn from_columns(cols: &[Vec<f64>]) -> Result<Self, KernelError> {
        let c = cols.len();
        if c == 0 || cols[0].is_empty() {
            return Err(KernelError::Empty);
        }
        let r = cols[0].len();
        let mut data = vec![0.0; r * c];
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(KernelError::DimensionMismatch {
                    expected: r,
                    got: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                data[i * c + j] = *v;
            }
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>, KernelError> {
        if x.len() != self.cols {
            return Err(KernelError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * x[j]).sum())
            .collect())
    }

    /// Rank with pivots below `tol` treated as zero.
    pub fn rank(&self, tol: f64) -> usize {
        self.clone().echelon(tol).len()
    }

    /// Solves `self * x = b`, pinning free variables to zero.
    ///
    /// Consistency is decided at `tol` against the scale of `b`.
    pub fn solve(&self, b: &[f64], tol: f64) -> Result<Option<RealSolution>, KernelError> {
        if b.len() != self.rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let scale = 1.0 + b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut aug = RealMatrix::new(self.rows, self.cols + 1, {
            let mut d = Vec::with_capacity(self.rows * (self.cols + 1));
            for i in 0..self.rows {
                d.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
                d.push(b[i]);
            }
            d
        })?;
        let pivots = aug.echelon_cols(tol, self.cols);
        // Any residue left in the augmented column marks inconsistency.
        let used: Vec<usize> = pivots.iter().map(|&(r, _)| r).collect();
        for r in 0..self.rows {
            if !used.contains(&r) && aug.get(r, self.cols).abs() > tol * scale {
                return Ok(None);
            }
        }
        let mut values = vec![0.0; self.cols];
        for &(r, c) in &pivots {
            values[c] = aug.get(r, self.cols);
        }
        let unique = pivots.len() == self.cols;
        Ok(Some(RealSolution { values, unique }))
    }

    /// Basis of the nullspace at tolerance `tol`.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<f64>> {
        let mut m = self.clone();
        let pivots = m.echelon_cols(tol, m.cols);
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0.0; self.cols];
            v[free] = 1.0;
            for &(r, c) in &pivots {
                v[c] = -m.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    fn echelon(&mut self, tol: f64) -> Vec<(usize, usize)> {
        let cols = self.cols;
        self.echelon_cols(tol, cols)
    }

    /// Reduced row echelon over the first `limit` columns, with partial
    /// pivoting; returns the pivot list.
    fn echelon_cols(&mut self, tol: f64, limit: usize) -> Vec<(usize, usize)> {
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..limit {
            if pivot_row == self.rows {
                break;
            }
            let src = (pivot_row..self.rows)
                .max_by(|&a, &b| {
                    self.get(a, col)
                        .abs()
                        .partial_cmp(&self.get(b, col).abs())
                        .unwrap()
                })
                .unwrap();
            if self.get(src, col).abs() <= tol {
                continue;
            }
            self.swap_rows(pivot_row, src);
            let inv = 1.0 / self.get(pivot_row, col);
            for j in col..self.cols {
                let v = self.get(pivot_row, j) * inv;
                self.set(pivot_row, j, v);
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.get(r, col);
                if factor == 0.0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = self.get(r, j) - factor * self.get(pivot_row, j);
                    self.set(r, j, v);
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    #[test]
    fn rank_with_tolerance() {
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0 + 1e-12]]).unwrap();
        assert_eq!(m.rank(TOL), 1);
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.1]]).unwrap();
        assert_eq!(m.rank(TOL), 2);
    }

    #[test]
    fn solve_square() {
        let m = RealMatrix::from_rows(&[vec![2.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let sol = m.solve(&[1.0, 1.0], TOL).unwrap().unwrap();
        assert!((sol.values[0] - 0.5).abs() < 1e-12);
        assert!((sol.values[1] - 0.5).abs() < 1e-12);
        assert!(sol.unique);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(m.solve(&[1.0, 2.0], TOL).unwrap().is_none());
    }

    #[test]
    fn nullspace_matches_rank() {
        let m = RealMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let basis = m.nullspace(TOL);
        assert_eq!(basis.len(), 1);
        let residual = m.mul_vec(&basis[0]).unwrap();
        assert!(residual.iter().all(|v| v.abs() < 1e-12));
    }
}
