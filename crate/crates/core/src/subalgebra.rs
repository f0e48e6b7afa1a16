//! Convex subeffect algebras (CSEAs).
//!
//! A CSEA of `E` is exactly `E` intersected with a linear subspace containing
//! the unit, so a subalgebra is represented by a base algebra plus a list of
//! linearly independent effect generators whose span contains `u`. All span
//! work happens on flattened coordinate vectors: exact rational elimination
//! classically, `f64` row reduction with partial pivoting (rank decisions at
//! the given tolerance) quantumly.

use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, BaseAlgebra, Effect, Payload};
use crate::kernel::{
    hermitian_eig, HermitianMatrix, KernelError, Rational, RationalMatrix, RealMatrix,
};

#[derive(Debug, Error)]
pub enum SubalgebraError {
    #[error("not a CSEA: unit missing from span")]
    UnitMissingFromSpan,
    #[error("generator list is empty")]
    NoGenerators,
    #[error("base algebra mismatch")]
    BaseMismatch,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("generator {index} is not strong")]
    GeneratorNotStrong { index: usize },
    #[error("generators sum to distance {defect} from the unit")]
    SumNotUnit { defect: f64 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Expansion coefficients in a generator basis: exact classically, floating
/// point quantumly.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Rational(Vec<Rational>),
    Real(Vec<f64>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Rational(v) => v.len(),
            Coefficients::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            Coefficients::Rational(v) => v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
            Coefficients::Real(v) => v.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&[Rational]> {
        match self {
            Coefficients::Rational(v) => Some(v),
            Coefficients::Real(_) => None,
        }
    }

    /// All coefficients inside `[0, 1]`: exactly for rationals, within `tol`
    /// for reals.
    pub fn within_unit_interval(&self, tol: f64) -> bool {
        match self {
            Coefficients::Rational(v) => v
                .iter()
                .all(|x| !x.is_negative() && *x <= Rational::one()),
            Coefficients::Real(v) => v.iter().all(|&x| x >= -tol && x <= 1.0 + tol),
        }
    }
}

fn flat_classical(e: &Effect) -> Vec<Rational> {
    e.as_classical().expect("classical payload").to_vec()
}

fn flat_quantum(e: &Effect) -> Vec<f64> {
    e.as_quantum().expect("quantum payload").flatten_real()
}

fn check_same_base(base: BaseAlgebra, effects: &[Effect]) -> Result<(), SubalgebraError> {
    if effects.iter().any(|e| e.algebra() != base) {
        return Err(SubalgebraError::BaseMismatch);
    }
    Ok(())
}

/// Whether the effects are linearly independent over the reals.
pub fn linearly_independent(effects: &[Effect], tol: f64) -> Result<bool, SubalgebraError> {
    if effects.is_empty() {
        return Err(SubalgebraError::NoGenerators);
    }
    let base = effects[0].algebra();
    check_same_base(base, effects)?;
    let rank = if base.is_classical() {
        let rows: Vec<Vec<Rational>> = effects.iter().map(flat_classical).collect();
        RationalMatrix::from_rows(&rows)?.rank()
    } else {
        let rows: Vec<Vec<f64>> = effects.iter().map(flat_quantum).collect();
        RealMatrix::from_rows(&rows)?.rank(tol)
    };
    Ok(rank == effects.len())
}

/// Solves `target = sum_i x_i * generators[i]` in the ambient linear space.
///
/// Returns `None` when the target lies outside the span. With linearly
/// independent generators the coefficients are unique.
pub fn span_coordinates(
    generators: &[Effect],
    target: &Effect,
    tol: f64,
) -> Result<Option<Coefficients>, SubalgebraError> {
    if generators.is_empty() {
        return Err(SubalgebraError::NoGenerators);
    }
    let base = generators[0].algebra();
    check_same_base(base, generators)?;
    if target.algebra() != base {
        return Err(SubalgebraError::BaseMismatch);
    }
    if base.is_classical() {
        let cols: Vec<Vec<Rational>> = generators.iter().map(flat_classical).collect();
        let m = RationalMatrix::from_columns(&cols)?;
        Ok(m.solve(&flat_classical(target))?
            .map(|s| Coefficients::Rational(s.values)))
    } else {
        let cols: Vec<Vec<f64>> = generators.iter().map(flat_quantum).collect();
        let m = RealMatrix::from_columns(&cols)?;
        Ok(m.solve(&flat_quantum(target), tol)?
            .map(|s| Coefficients::Real(s.values)))
    }
}

/// A convex subeffect algebra `F = E ∩ span(generators)`.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    base: BaseAlgebra,
    generators: Vec<Effect>,
    unit_coefficients: Coefficients,
}

impl Subalgebra {
    /// Builds the CSEA spanned by the given effects.
    ///
    /// The list is reduced to its first linearly independent subsequence.
    /// Fails when the unit does not lie in the span.
    pub fn from_generators(
        base: BaseAlgebra,
        effects: &[Effect],
        tol: f64,
    ) -> Result<Self, SubalgebraError> {
        check_same_base(base, effects)?;
        let mut kept: Vec<Effect> = Vec::new();
        for e in effects {
            let mut trial: Vec<Effect> = kept.clone();
            trial.push(e.clone());
            if linearly_independent(&trial, tol)? {
                kept = trial;
            }
        }
        if kept.is_empty() {
            return Err(SubalgebraError::NoGenerators);
        }
        let unit_coefficients = span_coordinates(&kept, &base.unit(), tol)?
            .ok_or(SubalgebraError::UnitMissingFromSpan)?;
        Ok(Self {
            base,
            generators: kept,
            unit_coefficients,
        })
    }

    pub fn base(&self) -> BaseAlgebra {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Effect] {
        &self.generators
    }

    /// Coefficients `r` with `sum r_i * a_i = u`.
    pub fn unit_coefficients(&self) -> &Coefficients {
        &self.unit_coefficients
    }

    /// Coordinates of an effect in the generator basis, when it lies in the
    /// span.
    pub fn coordinates(
        &self,
        a: &Effect,
        tol: f64,
    ) -> Result<Option<Coefficients>, SubalgebraError> {
        span_coordinates(&self.generators, a, tol)
    }

    /// Membership test: the effect lies in `span(generators)`, decided by
    /// rank not increasing when it is appended.
    pub fn contains(&self, a: &Effect, tol: f64) -> Result<bool, SubalgebraError> {
        if a.algebra() != self.base {
            return Err(SubalgebraError::BaseMismatch);
        }
        let mut trial = self.generators.clone();
        trial.push(a.clone());
        Ok(!linearly_independent(&trial, tol)?)
    }

    /// The linear combination `sum coeffs_i * a_i` as a raw payload.
    pub fn combination(&self, coeffs: &Coefficients) -> Result<Payload, SubalgebraError> {
        if coeffs.len() != self.generators.len() {
            return Err(SubalgebraError::Kernel(KernelError::DimensionMismatch {
                expected: self.generators.len(),
                got: coeffs.len(),
            }));
        }
        let mut acc = self.base.zero_effect().payload().clone();
        match coeffs {
            Coefficients::Rational(v) => {
                for (lambda, g) in v.iter().zip(&self.generators) {
                    acc = acc.add(&g.payload().scale(lambda))?;
                }
            }
            Coefficients::Real(v) => {
                for (&lambda, g) in v.iter().zip(&self.generators) {
                    acc = acc.add(&g.payload().scale_f64(lambda))?;
                }
            }
        }
        Ok(acc)
    }

    /// Largest CSEA contained in both: `E ∩ (V1 ∩ V2)`.
    pub fn meet(&self, other: &Subalgebra, tol: f64) -> Result<Subalgebra, SubalgebraError> {
        if self.base != other.base {
            return Err(SubalgebraError::BaseMismatch);
        }
        let mut gens = vec![self.base.unit()];
        if self.base.is_classical() {
            for w in intersection_basis_rational(&self.generators, &other.generators)? {
                if let Some(e) = effectize_classical(&w) {
                    gens.push(e);
                }
            }
        } else {
            let dim = match self.base {
                BaseAlgebra::Quantum { dim } => dim,
                BaseAlgebra::Classical { .. } => unreachable!(),
            };
            for w in intersection_basis_real(&self.generators, &other.generators, tol)? {
                let h = HermitianMatrix::unflatten_real(dim, &w)?;
                if let Some(e) = effectize_quantum(&h, tol) {
                    gens.push(e);
                }
            }
        }
        Subalgebra::from_generators(self.base, &gens, tol)
    }

    /// Smallest CSEA containing both: `E ∩ span(V1 ∪ V2)`.
    pub fn join(&self, other: &Subalgebra, tol: f64) -> Result<Subalgebra, SubalgebraError> {
        if self.base != other.base {
            return Err(SubalgebraError::BaseMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Subalgebra::from_generators(self.base, &gens, tol)
    }

    /// Separated means the meet is the trivial CSEA `{lambda * u}`.
    pub fn is_separated(&self, other: &Subalgebra, tol: f64) -> Result<bool, SubalgebraError> {
        Ok(self.meet(other, tol)?.dim() == 1)
    }
}

/// Basis of `V1 ∩ V2` for classical generator lists, via the exact nullspace
/// of `[G1^T | -G2^T]`.
fn intersection_basis_rational(
    gens1: &[Effect],
    gens2: &[Effect],
) -> Result<Vec<Vec<Rational>>, SubalgebraError> {
    let mut cols: Vec<Vec<Rational>> = gens1.iter().map(flat_classical).collect();
    for g in gens2 {
        cols.push(flat_classical(g).into_iter().map(|x| -x).collect());
    }
    let m = RationalMatrix::from_columns(&cols)?;
    let mut basis = Vec::new();
    for z in m.nullspace() {
        let n = cols[0].len();
        let mut w = vec![Rational::zero(); n];
        for (j, g) in gens1.iter().enumerate() {
            let flat = flat_classical(g);
            for i in 0..n {
                w[i] += &z[j] * &flat[i];
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
        }
    }
    Ok(basis)
}

fn intersection_basis_real(
    gens1: &[Effect],
    gens2: &[Effect],
    tol: f64,
) -> Result<Vec<Vec<f64>>, SubalgebraError> {
    let mut cols: Vec<Vec<f64>> = gens1.iter().map(flat_quantum).collect();
    for g in gens2 {
        cols.push(flat_quantum(g).into_iter().map(|x| -x).collect());
    }
    let m = RealMatrix::from_columns(&cols)?;
    let mut basis = Vec::new();
    for z in m.nullspace(tol) {
        let n = cols[0].len();
        let mut w = vec![0.0; n];
        for (j, g) in gens1.iter().enumerate() {
            let flat = flat_quantum(g);
            for i in 0..n {
                w[i] += z[j] * flat[i];
            }
        }
        if w.iter().any(|&x| x.abs() > tol) {
            basis.push(w);
        }
    }
    Ok(basis)
}

/// Shifts and scales a subspace vector into `[0, u]`: `(w - lo*u)/(hi - lo)`.
/// Returns `None` when `w` is (close to) a multiple of `u`, which the caller
/// already covers by including `u` itself.
fn effectize_classical(w: &[Rational]) -> Option<Effect> {
    let lo = w.iter().min()?.clone();
    let hi = w.iter().max()?.clone();
    if lo == hi {
        return None;
    }
    let range = &hi - &lo;
    let values: Vec<Rational> = w.iter().map(|x| (x - &lo) / &range).collect();
    Some(Effect::classical(values).expect("entries lie in [0, 1]"))
}

fn effectize_quantum(w: &HermitianMatrix, tol: f64) -> Option<Effect> {
    let eig = hermitian_eig(w);
    let lo = *eig.values().first()?;
    let hi = *eig.values().last()?;
    if hi - lo <= tol {
        return None;
    }
    let shifted = w
        .sub(&HermitianMatrix::identity(w.dim()).scale(lo))
        .expect("same dimension")
        .scale(1.0 / (hi - lo));
    Effect::quantum(shifted, tol.max(1e-9)).ok()
}

/// A CSEA presented by linearly independent strong generators that sum to
/// the unit; every member is a `[0, 1]`-combination of the generators.
#[derive(Debug, Clone)]
pub struct StrongSpan {
    inner: Subalgebra,
}

impl StrongSpan {
    pub fn new(effects: Vec<Effect>, tol: f64) -> Result<Self, SubalgebraError> {
        if effects.is_empty() {
            return Err(SubalgebraError::NoGenerators);
        }
        let base = effects[0].algebra();
        check_same_base(base, &effects)?;
        if !linearly_independent(&effects, tol)? {
            return Err(SubalgebraError::DependentGenerators);
        }
        for (index, e) in effects.iter().enumerate() {
            if !e.is_strong(tol) {
                return Err(SubalgebraError::GeneratorNotStrong { index });
            }
        }
        let mut sum = base.zero_effect().payload().clone();
        for e in &effects {
            sum = sum.add(e.payload())?;
        }
        let defect = sum.max_distance(base.unit().payload());
        // Exact comparison classically; the float distance only feeds the
        // error report.
        let ok = if base.is_classical() {
            sum == *base.unit().payload()
        } else {
            defect <= tol
        };
        if !ok {
            return Err(SubalgebraError::SumNotUnit { defect });
        }
        let m = effects.len();
        let unit_coefficients = if base.is_classical() {
            Coefficients::Rational(vec![Rational::one(); m])
        } else {
            Coefficients::Real(vec![1.0; m])
        };
        Ok(Self {
            inner: Subalgebra {
                base,
                generators: effects,
                unit_coefficients,
            },
        })
    }

    pub fn subalgebra(&self) -> &Subalgebra {
        &self.inner
    }

    pub fn base(&self) -> BaseAlgebra {
        self.inner.base
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn generators(&self) -> &[Effect] {
        self.inner.generators()
    }

    /// The unique `lambda` with `a = sum lambda_i a_i` and every
    /// `lambda_i` in `[0, 1]`, when it exists.
    pub fn strong_coordinates(
        &self,
        a: &Effect,
        tol: f64,
    ) -> Result<Option<Coefficients>, SubalgebraError> {
        let coords = self.inner.coordinates(a, tol)?;
        Ok(coords.filter(|c| c.within_unit_interval(tol)))
    }

    /// `sum coeffs_i * a_i`, validated as an effect.
    pub fn member_from_coordinates(
        &self,
        coeffs: &Coefficients,
        tol: f64,
    ) -> Result<Effect, SubalgebraError> {
        let payload = self.inner.combination(coeffs)?;
        Ok(Effect::new(self.inner.base, payload, tol)?)
    }
}
