//! Linear-algebra kernel: exact rational elimination on the classical side,
//! dense complex matrices and a cyclic Jacobi eigensolver on the quantum side.

mod complex;
mod jacobi;
mod rational;
mod real;

pub use complex::{ComplexMatrix, HermitianMatrix, Complex};
pub use jacobi::{hermitian_eig, EigenDecomposition};
pub use rational::{RationalMatrix, RationalSolution};
pub use real::{RealMatrix, RealSolution};

use thiserror::Error;

/// Exact rational scalar used throughout the classical side.
pub type Rational = num::BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be nonempty")]
    Empty,
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },
    #[error("matrix is not Hermitian (symmetry defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}
