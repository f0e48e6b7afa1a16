//! Finite-dimensional convex effect algebras.
//!
//! A convex effect algebra (CEA) is the interval `[0, u]` of an ordered real
//! linear space, the elements of which model yes-no measurements. This crate
//! works with the two finite-dimensional instances that cover classical and
//! quantum probability:
//!
//! * the simplex algebra `S_n` of `[0,1]`-valued vectors under the
//!   coordinatewise order, kept in exact rational arithmetic, and
//! * the full quantum algebra `E(H)` of operators between `0` and `I` on a
//!   finite-dimensional complex Hilbert space, kept in double precision.
//!
//! On top of the base algebras the crate builds convex subeffect algebras
//! with their lattice operations, observables and classical channels,
//! informational-completeness decisions for families of random variables,
//! and the strong-decomposition machinery for quantum effect families.
//!
//! The `cea` binary exposes the same functionality over JSON documents; see
//! the crate README for the document format.

pub mod algebra;
pub mod cli;
pub mod doc;
pub mod infocomplete;
pub mod kernel;
pub mod observables;
pub mod quantum;
pub mod report;
pub mod sample;
pub mod subalgebra;

/// Default tolerance for all quantum-side (floating point) comparisons.
///
/// Classical computations are exact and never consult a tolerance.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Default seed for the deterministic random weights used during
/// simultaneous diagonalization. Overridable via the `EA_SEED` environment
/// variable in the CLI.
pub const DEFAULT_SEED: u64 = 42;

pub use algebra::{BaseAlgebra, Effect, Payload, Scalar, State};
pub use infocomplete::{ICVerdict, Partition, RandomVariable};
pub use kernel::{ComplexMatrix, EigenDecomposition, HermitianMatrix, Rational, RationalMatrix};
pub use observables::{Channel, CoexistenceWitness, Observable};
pub use quantum::{StrongDecomposition, StrongifyOutcome};
pub use subalgebra::{Coefficients, StrongSpan, Subalgebra};
