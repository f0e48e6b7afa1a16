//! Dense matrices over arbitrary-precision rationals with exact Gaussian
//! elimination. No entry is ever rounded; rank, solve and nullspace results
//! are equalities, not approximations.

use num::{One, Zero};

use super::{KernelError, Rational};

/// Row-major dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Outcome of a consistent linear solve.
///
/// When the system is underdetermined the free variables are pinned to zero
/// and `unique` is false, so callers always receive a determinate witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSolution {
    pub values: Vec<Rational>,
    pub unique: bool,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, KernelError> {
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
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    /// Builds a matrix whose rows are the given vectors.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, KernelError> {
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
            data.extend(row.iter().cloned());
        }
        Self::new(r, c, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Result<Self, KernelError> {
        let c = cols.len();
        if c == 0 || cols[0].is_empty() {
            return Err(KernelError::Empty);
        }
        let r = cols[0].len();
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(KernelError::DimensionMismatch {
                    expected: r,
                    got: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                *m.get_mut(i, j) = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, KernelError> {
        if x.len() != self.cols {
            return Err(KernelError::DimensionMismatch {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Rank under exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        self.reduced_echelon().1.len()
    }

    /// Exact solution of `self * x = b`.
    ///
    /// Returns `Ok(None)` when the system is inconsistent. For an
    /// underdetermined consistent system, the free variables are pinned to
    /// zero and the solution is flagged non-unique.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<RationalSolution>, KernelError> {
        if b.len() != self.rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.get_mut(i, j) = self.get(i, j).clone();
            }
            *aug.get_mut(i, self.cols) = b[i].clone();
        }
        let (red, pivots) = aug.reduced_echelon();
        // A pivot in the augmented column means 0 = 1 somewhere.
        if pivots.iter().any(|&(_, c)| c == self.cols) {
            return Ok(None);
        }
        let mut values = vec![Rational::zero(); self.cols];
        for &(r, c) in &pivots {
            values[c] = red.get(r, self.cols).clone();
        }
        let unique = pivots.len() == self.cols;
        Ok(Some(RationalSolution { values, unique }))
    }

    /// Exact basis of `{x : self * x = 0}`; has `cols - rank` elements.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (red, pivots) = self.reduced_echelon();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for &(r, c) in &pivots {
                v[c] = -red.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Reduced row echelon form together with the (row, col) pivot list.
    fn reduced_echelon(&self) -> (RationalMatrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let candidate = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(src) = candidate else { continue };
            m.swap_rows(pivot_row, src);
            let inv = m.get(pivot_row, col).clone();
            for j in col..m.cols {
                let v = m.get(pivot_row, j).clone() / &inv;
                *m.get_mut(pivot_row, j) = v;
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j).clone() - &factor * m.get(pivot_row, j);
                    *m.get_mut(r, j) = v;
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
        (m, pivots)
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
    use num::FromPrimitive;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qi(n: i64) -> Rational {
        Rational::from_i64(n).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> RationalMatrix {
        let rows: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| qi(v)).collect())
            .collect();
        RationalMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn rank_identity() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(RationalMatrix::zeros(3, 3).rank(), 0);
    }

    #[test]
    fn rank_dependent_rows() {
        // Third row is the sum of the first two.
        let m = mat(&[&[1, 1, 0], &[0, 0, 1], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn solve_identity() {
        let m = RationalMatrix::identity(2);
        let sol = m.solve(&[q(1, 2), q(1, 3)]).unwrap().unwrap();
        assert_eq!(sol.values, vec![q(1, 2), q(1, 3)]);
        assert!(sol.unique);
    }

    #[test]
    fn solve_by_columns() {
        let m =
            RationalMatrix::from_columns(&[vec![qi(1), qi(1), qi(0)], vec![qi(0), qi(0), qi(1)]])
                .unwrap();
        let sol = m.solve(&[qi(1), qi(1), qi(1)]).unwrap().unwrap();
        assert_eq!(sol.values, vec![qi(1), qi(1)]);
        assert!(sol.unique);
    }

    #[test]
    fn solve_inconsistent() {
        let m = RationalMatrix::from_columns(&[vec![qi(1), qi(0)], vec![qi(2), qi(0)]]).unwrap();
        assert_eq!(m.solve(&[qi(0), qi(1)]).unwrap(), None);
    }

    #[test]
    fn solve_underdetermined_pins_free_variables() {
        // x + y = 1 has the pinned solution (1, 0).
        let m = mat(&[&[1, 1]]);
        let sol = m.solve(&[qi(1)]).unwrap().unwrap();
        assert_eq!(sol.values, vec![qi(1), qi(0)]);
        assert!(!sol.unique);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = RationalMatrix::identity(2);
        assert!(m.solve(&[qi(1)]).is_err());
    }

    #[test]
    fn nullspace_pair_indicators() {
        let m = mat(&[&[1, 1, 0, 0], &[0, 0, 1, 1], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![qi(1), qi(-1), qi(-1), qi(1)]);
        assert!(m.mul_vec(&basis[0]).unwrap().iter().all(|v| v.is_zero()));
    }

    #[test]
    fn nullspace_invertible_is_empty() {
        assert!(mat(&[&[2, 1], &[1, 1]]).nullspace().is_empty());
    }

    #[test]
    fn nullspace_single_row() {
        let basis = mat(&[&[1, 1]]).nullspace();
        assert_eq!(basis, vec![vec![qi(-1), qi(1)]]);
    }

    proptest! {
        #[test]
        fn rank_plus_nullity_is_cols(
            rows in 1usize..5, cols in 1usize..5,
            seed in proptest::collection::vec(-4i64..=4, 25),
        ) {
            let data: Vec<Rational> = seed.iter().take(rows * cols).map(|&v| qi(v)).collect();
            prop_assume!(data.len() == rows * cols);
            let m = RationalMatrix::new(rows, cols, data).unwrap();
            let null = m.nullspace();
            prop_assert_eq!(m.rank() + null.len(), cols);
            for v in &null {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solve_is_exact_when_consistent(
            rows in 1usize..5, cols in 1usize..5,
            seed in proptest::collection::vec(-4i64..=4, 25),
            xs in proptest::collection::vec(-4i64..=4, 5),
        ) {
            let data: Vec<Rational> = seed.iter().take(rows * cols).map(|&v| qi(v)).collect();
            prop_assume!(data.len() == rows * cols && xs.len() >= cols);
            let m = RationalMatrix::new(rows, cols, data).unwrap();
            // Build a consistent right-hand side from a known solution.
            let x: Vec<Rational> = xs.iter().take(cols).map(|&v| qi(v)).collect();
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&sol.values).unwrap(), b);
        }
    }
}
