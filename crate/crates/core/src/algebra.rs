//! Base convex effect algebras and their elements.
//!
//! Two base algebras are supported: the classical simplex algebra `S_n`
//! (exact rational coordinates in `[0, 1]`, unit `(1, ..., 1)`) and the full
//! quantum algebra `E(H)` (Hermitian operators with spectrum in `[0, 1]`,
//! unit `I`). Classical predicates are exact equalities; quantum predicates
//! take a tolerance.

use std::fmt;

use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::kernel::{hermitian_eig, HermitianMatrix, KernelError, Rational};

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("algebra size must be at least 1")]
    EmptySize,
    #[error("payload shape does not match algebra {algebra}")]
    ShapeMismatch { algebra: String },
    #[error("operands belong to different base algebras")]
    AlgebraMismatch,
    #[error("not an effect: {0}")]
    NotAnEffect(String),
    #[error("not a state: {0}")]
    NotAState(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// One of the two supported base algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseAlgebra {
    /// The simplex algebra `S_n` over exact rationals.
    Classical { size: usize },
    /// The full quantum algebra `E(H)` with `dim H = dim`.
    Quantum { dim: usize },
}

impl BaseAlgebra {
    pub fn classical(size: usize) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptySize);
        }
        Ok(BaseAlgebra::Classical { size })
    }

    pub fn quantum(dim: usize) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::EmptySize);
        }
        Ok(BaseAlgebra::Quantum { dim })
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, BaseAlgebra::Classical { .. })
    }

    /// Dimension of the ambient real linear space (`n`, or `d^2`).
    pub fn linear_dim(&self) -> usize {
        match self {
            BaseAlgebra::Classical { size } => *size,
            BaseAlgebra::Quantum { dim } => dim * dim,
        }
    }

    /// The unit effect: `(1, ..., 1)` or the identity operator.
    pub fn unit(&self) -> Effect {
        let payload = match self {
            BaseAlgebra::Classical { size } => Payload::Classical(vec![Rational::one(); *size]),
            BaseAlgebra::Quantum { dim } => Payload::Quantum(HermitianMatrix::identity(*dim)),
        };
        Effect {
            algebra: *self,
            payload,
        }
    }

    /// The zero effect.
    pub fn zero_effect(&self) -> Effect {
        let payload = match self {
            BaseAlgebra::Classical { size } => Payload::Classical(vec![Rational::zero(); *size]),
            BaseAlgebra::Quantum { dim } => Payload::Quantum(HermitianMatrix::zeros(*dim)),
        };
        Effect {
            algebra: *self,
            payload,
        }
    }
}

impl fmt::Display for BaseAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseAlgebra::Classical { size } => write!(f, "S_{size}"),
            BaseAlgebra::Quantum { dim } => write!(f, "E(C^{dim})"),
        }
    }
}

/// Raw element data: rational coordinates or a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Classical(Vec<Rational>),
    Quantum(HermitianMatrix),
}

impl Payload {
    pub fn shape_matches(&self, algebra: &BaseAlgebra) -> bool {
        match (self, algebra) {
            (Payload::Classical(v), BaseAlgebra::Classical { size }) => v.len() == *size,
            (Payload::Quantum(m), BaseAlgebra::Quantum { dim }) => m.dim() == *dim,
            _ => false,
        }
    }

    pub fn add(&self, other: &Payload) -> Result<Payload, AlgebraError> {
        match (self, other) {
            (Payload::Classical(a), Payload::Classical(b)) if a.len() == b.len() => Ok(
                Payload::Classical(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (Payload::Quantum(a), Payload::Quantum(b)) if a.dim() == b.dim() => {
                Ok(Payload::Quantum(a.add(b)?))
            }
            _ => Err(AlgebraError::AlgebraMismatch),
        }
    }

    pub fn sub(&self, other: &Payload) -> Result<Payload, AlgebraError> {
        match (self, other) {
            (Payload::Classical(a), Payload::Classical(b)) if a.len() == b.len() => Ok(
                Payload::Classical(a.iter().zip(b).map(|(x, y)| x - y).collect()),
            ),
            (Payload::Quantum(a), Payload::Quantum(b)) if a.dim() == b.dim() => {
                Ok(Payload::Quantum(a.sub(b)?))
            }
            _ => Err(AlgebraError::AlgebraMismatch),
        }
    }

    /// Scales by an exact rational; the quantum side falls back to `f64`.
    pub fn scale(&self, factor: &Rational) -> Payload {
        match self {
            Payload::Classical(v) => Payload::Classical(v.iter().map(|x| x * factor).collect()),
            Payload::Quantum(m) => {
                Payload::Quantum(m.scale(factor.to_f64().unwrap_or(f64::NAN)))
            }
        }
    }

    pub fn scale_f64(&self, factor: f64) -> Payload {
        match self {
            Payload::Classical(v) => {
                let f = Rational::from_float(factor).expect("finite scale factor");
                Payload::Classical(v.iter().map(|x| x * &f).collect())
            }
            Payload::Quantum(m) => Payload::Quantum(m.scale(factor)),
        }
    }

    /// Largest coordinate distance between two payloads, as `f64`.
    pub fn max_distance(&self, other: &Payload) -> f64 {
        match (self, other) {
            (Payload::Classical(a), Payload::Classical(b)) => a
                .iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs().to_f64().unwrap())),
            (Payload::Quantum(a), Payload::Quantum(b)) => a.max_diff(b),
            _ => f64::INFINITY,
        }
    }
}

/// Decides whether a payload is an effect of the algebra: `0 <= x <= u` in
/// the coordinatewise (classical, exact) or spectral (quantum, tolerance
/// `tol`) order.
pub fn is_effect(algebra: &BaseAlgebra, payload: &Payload, tol: f64) -> Result<bool, AlgebraError> {
    if !payload.shape_matches(algebra) {
        return Err(AlgebraError::ShapeMismatch {
            algebra: algebra.to_string(),
        });
    }
    Ok(match payload {
        Payload::Classical(v) => v
            .iter()
            .all(|x| !x.is_negative() && *x <= Rational::one()),
        Payload::Quantum(m) => {
            let eig = hermitian_eig(m);
            let lo = eig.values().first().copied().unwrap_or(0.0);
            let hi = eig.values().last().copied().unwrap_or(0.0);
            lo >= -tol && hi <= 1.0 + tol
        }
    })
}

/// An element of `[0, u]`, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    algebra: BaseAlgebra,
    payload: Payload,
}

impl Effect {
    pub fn new(algebra: BaseAlgebra, payload: Payload, tol: f64) -> Result<Self, AlgebraError> {
        if !is_effect(&algebra, &payload, tol)? {
            return Err(AlgebraError::NotAnEffect(format!(
                "payload violates 0 <= a <= u in {algebra}"
            )));
        }
        Ok(Self { algebra, payload })
    }

    /// Classical effect from exact coordinates; the algebra is `S_n` with
    /// `n` the coordinate count.
    pub fn classical(values: Vec<Rational>) -> Result<Self, AlgebraError> {
        let algebra = BaseAlgebra::classical(values.len())?;
        Self::new(algebra, Payload::Classical(values), 0.0)
    }

    pub fn quantum(matrix: HermitianMatrix, tol: f64) -> Result<Self, AlgebraError> {
        let algebra = BaseAlgebra::quantum(matrix.dim())?;
        Self::new(algebra, Payload::Quantum(matrix), tol)
    }

    pub(crate) fn from_payload_unchecked(algebra: BaseAlgebra, payload: Payload) -> Self {
        Self { algebra, payload }
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn as_classical(&self) -> Option<&[Rational]> {
        match &self.payload {
            Payload::Classical(v) => Some(v),
            Payload::Quantum(_) => None,
        }
    }

    pub fn as_quantum(&self) -> Option<&HermitianMatrix> {
        match &self.payload {
            Payload::Quantum(m) => Some(m),
            Payload::Classical(_) => None,
        }
    }

    /// The complement `u - a`; an involution.
    pub fn complement(&self) -> Effect {
        let u = self.algebra.unit();
        let payload = u.payload.sub(&self.payload).expect("same algebra");
        Effect {
            algebra: self.algebra,
            payload,
        }
    }

    /// `a <= b` in the cone order.
    pub fn leq(&self, other: &Effect, tol: f64) -> Result<bool, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(match (&self.payload, &other.payload) {
            (Payload::Classical(a), Payload::Classical(b)) => {
                a.iter().zip(b).all(|(x, y)| x <= y)
            }
            (Payload::Quantum(a), Payload::Quantum(b)) => {
                let diff = b.sub(a).expect("same dimension");
                hermitian_eig(&diff).values().first().copied().unwrap_or(0.0) >= -tol
            }
            _ => unreachable!("algebra equality implies matching payloads"),
        })
    }

    /// Orthogonality: `a + b` is still an effect, equivalently `a <= b'`.
    pub fn perp(&self, other: &Effect, tol: f64) -> Result<bool, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let sum = self.payload.add(&other.payload)?;
        is_effect(&self.algebra, &sum, tol)
    }

    /// Sharpness (`a` and `a'` have no common lower bound but zero):
    /// classically all coordinates are 0 or 1; quantumly `a` is a projection.
    pub fn is_sharp(&self, tol: f64) -> bool {
        match &self.payload {
            Payload::Classical(v) => v.iter().all(|x| x.is_zero() || x.is_one()),
            Payload::Quantum(m) => {
                let square = HermitianMatrix::symmetrized(m.mul(m));
                square.max_diff(m) <= tol
            }
        }
    }

    /// Strongness (`a` is below no `lambda * u` with `lambda < 1`):
    /// classically some coordinate equals 1; quantumly 1 is an eigenvalue.
    pub fn is_strong(&self, tol: f64) -> bool {
        match &self.payload {
            Payload::Classical(v) => v.iter().any(|x| x.is_one()),
            Payload::Quantum(m) => {
                hermitian_eig(m).values().last().copied().unwrap_or(0.0) >= 1.0 - tol
            }
        }
    }

    /// The orthogonal sum `a + b` when defined.
    pub fn orthogonal_sum(&self, other: &Effect, tol: f64) -> Result<Option<Effect>, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let sum = self.payload.add(&other.payload)?;
        Ok(if is_effect(&self.algebra, &sum, tol)? {
            Some(Effect {
                algebra: self.algebra,
                payload: sum,
            })
        } else {
            None
        })
    }

    /// The difference `a - b` when `b <= a`.
    pub fn minus(&self, other: &Effect, tol: f64) -> Result<Option<Effect>, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let diff = self.payload.sub(&other.payload)?;
        Ok(if is_effect(&self.algebra, &diff, tol)? {
            Some(Effect {
                algebra: self.algebra,
                payload: diff,
            })
        } else {
            None
        })
    }

    /// `lambda * a` when it stays inside `[0, u]`.
    pub fn scaled(&self, lambda: &Rational, tol: f64) -> Option<Effect> {
        if lambda.is_negative() {
            return None;
        }
        let payload = self.payload.scale(lambda);
        match is_effect(&self.algebra, &payload, tol) {
            Ok(true) => Some(Effect {
                algebra: self.algebra,
                payload,
            }),
            _ => None,
        }
    }

    /// Exact equality classically, max-norm closeness quantumly.
    pub fn approx_eq(&self, other: &Effect, tol: f64) -> bool {
        if self.algebra != other.algebra {
            return false;
        }
        match (&self.payload, &other.payload) {
            (Payload::Classical(a), Payload::Classical(b)) => a == b,
            _ => self.payload.max_distance(&other.payload) <= tol,
        }
    }

    pub fn max_distance(&self, other: &Effect) -> f64 {
        self.payload.max_distance(&other.payload)
    }
}

/// Probability value: exact on the classical side, floating point on the
/// quantum side.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Real(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Real(x) => *x,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Real(x) => write!(f, "{x}"),
        }
    }
}

/// A state: exact probability vector or density operator. Evaluating a
/// state on an effect yields the probability of the effect occurring.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    algebra: BaseAlgebra,
    payload: Payload,
}

impl State {
    pub fn new(algebra: BaseAlgebra, payload: Payload, tol: f64) -> Result<Self, AlgebraError> {
        if !payload.shape_matches(&algebra) {
            return Err(AlgebraError::ShapeMismatch {
                algebra: algebra.to_string(),
            });
        }
        match &payload {
            Payload::Classical(v) => {
                if v.iter().any(|x| x.is_negative()) {
                    return Err(AlgebraError::NotAState("negative probability".into()));
                }
                let total: Rational = v.iter().sum();
                if !total.is_one() {
                    return Err(AlgebraError::NotAState(format!(
                        "probabilities sum to {total}, not 1"
                    )));
                }
            }
            Payload::Quantum(m) => {
                let eig = hermitian_eig(m);
                if eig.values().first().copied().unwrap_or(0.0) < -tol {
                    return Err(AlgebraError::NotAState(
                        "density matrix is not positive semidefinite".into(),
                    ));
                }
                if (m.trace() - 1.0).abs() > tol {
                    return Err(AlgebraError::NotAState(format!(
                        "trace {} is not 1",
                        m.trace()
                    )));
                }
            }
        }
        Ok(Self { algebra, payload })
    }

    pub fn classical(probabilities: Vec<Rational>) -> Result<Self, AlgebraError> {
        let algebra = BaseAlgebra::classical(probabilities.len())?;
        Self::new(algebra, Payload::Classical(probabilities), 0.0)
    }

    pub fn quantum(density: HermitianMatrix, tol: f64) -> Result<Self, AlgebraError> {
        let algebra = BaseAlgebra::quantum(density.dim())?;
        Self::new(algebra, Payload::Quantum(density), tol)
    }

    pub fn algebra(&self) -> BaseAlgebra {
        self.algebra
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// `s(a)`: dot product (exact) or `Re tr(rho a)`.
    pub fn evaluate(&self, a: &Effect) -> Result<Scalar, AlgebraError> {
        if self.algebra != a.algebra {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(match (&self.payload, &a.payload) {
            (Payload::Classical(s), Payload::Classical(v)) => Scalar::Rational(
                s.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (x, y)| acc + x * y),
            ),
            (Payload::Quantum(rho), Payload::Quantum(m)) => {
                let d = rho.dim();
                let mut tr = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        tr += (rho.get(i, j) * m.get(j, i)).re;
                    }
                }
                Scalar::Real(tr)
            }
            _ => unreachable!("algebra equality implies matching payloads"),
        })
    }
}
