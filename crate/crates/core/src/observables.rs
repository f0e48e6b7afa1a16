//! Observables, classical channels and postprocessing.
//!
//! An observable is a finite family of effects summing to the unit; a
//! classical channel is a row-stochastic rational matrix acting on outcome
//! labels. A strong span's generators form an observable through which every
//! other observable in the span factors, and this module decides that
//! factorization constructively.

use std::fmt;

use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, BaseAlgebra, Effect, Scalar, State};
use crate::kernel::{KernelError, Rational};
use crate::subalgebra::{
    linearly_independent, span_coordinates, Coefficients, StrongSpan, SubalgebraError,
};

#[derive(Debug, Error)]
pub enum ObservableError {
    #[error("observable needs at least one outcome")]
    Empty,
    #[error("duplicate outcome label {0:?}")]
    DuplicateOutcome(String),
    #[error("outcome count {outcomes} does not match effect count {effects}")]
    OutcomeCountMismatch { outcomes: usize, effects: usize },
    #[error("not an observable: effects sum to distance {defect} from the unit")]
    SumNotUnit { defect: f64 },
    #[error("base algebra mismatch")]
    BaseMismatch,
    #[error("channel rows must be indexed by the source observable outcomes")]
    OutcomeSetMismatch,
    #[error("channel entry at ({row}, {col}) is outside [0, 1]")]
    EntryOutOfRange { row: String, col: String },
    #[error("channel row {row} sums to {sum}, not 1")]
    BadRowSum { row: String, sum: String },
    #[error("postprocessing source must have linearly independent effects")]
    DependentSource,
    #[error("effect {which} is not a [0,1]-combination of the span generators")]
    MembershipFailed { which: String },
    #[error("expected a classical effect with {expected} coordinates")]
    BadSimplexElement { expected: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Subalgebra(#[from] SubalgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A finite-outcome observable: labelled effects summing to the unit
/// (exactly on the classical side, within `tol` on the quantum side).
#[derive(Debug, Clone)]
pub struct Observable {
    base: BaseAlgebra,
    outcomes: Vec<String>,
    effects: Vec<Effect>,
}

impl Observable {
    pub fn new(
        outcomes: Vec<String>,
        effects: Vec<Effect>,
        tol: f64,
    ) -> Result<Self, ObservableError> {
        if outcomes.is_empty() || effects.is_empty() {
            return Err(ObservableError::Empty);
        }
        if outcomes.len() != effects.len() {
            return Err(ObservableError::OutcomeCountMismatch {
                outcomes: outcomes.len(),
                effects: effects.len(),
            });
        }
        for (i, label) in outcomes.iter().enumerate() {
            if outcomes[..i].contains(label) {
                return Err(ObservableError::DuplicateOutcome(label.clone()));
            }
        }
        let base = effects[0].algebra();
        if effects.iter().any(|e| e.algebra() != base) {
            return Err(ObservableError::BaseMismatch);
        }
        let mut sum = base.zero_effect().payload().clone();
        for e in &effects {
            sum = sum.add(e.payload())?;
        }
        let defect = sum.max_distance(base.unit().payload());
        // The classical comparison is exact; the float distance is only a
        // diagnostic there.
        let ok = if base.is_classical() {
            sum == *base.unit().payload()
        } else {
            defect <= tol
        };
        if !ok {
            return Err(ObservableError::SumNotUnit { defect });
        }
        Ok(Self {
            base,
            outcomes,
            effects,
        })
    }

    /// Observable with outcome labels `"1".."k"`.
    pub fn indexed(effects: Vec<Effect>, tol: f64) -> Result<Self, ObservableError> {
        let outcomes = (1..=effects.len()).map(|i| i.to_string()).collect();
        Self::new(outcomes, effects, tol)
    }

    pub fn base(&self) -> BaseAlgebra {
        self.base
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn effect_for(&self, outcome: &str) -> Option<&Effect> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| &self.effects[i])
    }

    /// The probability distribution of the observable in a state.
    pub fn distribution(&self, s: &State) -> Result<Vec<(String, Scalar)>, ObservableError> {
        self.outcomes
            .iter()
            .zip(&self.effects)
            .map(|(o, e)| Ok((o.clone(), s.evaluate(e)?)))
            .collect()
    }

    /// Linearly independent effects, each strong.
    pub fn is_strong(&self, tol: f64) -> Result<bool, ObservableError> {
        Ok(linearly_independent(&self.effects, tol)?
            && self.effects.iter().all(|e| e.is_strong(tol)))
    }
}

/// Row-stochastic rational matrix between outcome spaces. Rows are indexed
/// by source outcomes, columns by target outcomes; every row sums to 1
/// exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    source: Vec<String>,
    target: Vec<String>,
    matrix: Vec<Vec<Rational>>,
}

impl Channel {
    pub fn new(
        source: Vec<String>,
        target: Vec<String>,
        matrix: Vec<Vec<Rational>>,
    ) -> Result<Self, ObservableError> {
        if source.is_empty() || target.is_empty() {
            return Err(ObservableError::Empty);
        }
        if matrix.len() != source.len() {
            return Err(ObservableError::OutcomeCountMismatch {
                outcomes: source.len(),
                effects: matrix.len(),
            });
        }
        for (x, row) in matrix.iter().enumerate() {
            if row.len() != target.len() {
                return Err(ObservableError::OutcomeCountMismatch {
                    outcomes: target.len(),
                    effects: row.len(),
                });
            }
            for (y, v) in row.iter().enumerate() {
                if v.is_negative() || *v > Rational::one() {
                    return Err(ObservableError::EntryOutOfRange {
                        row: source[x].clone(),
                        col: target[y].clone(),
                    });
                }
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(ObservableError::BadRowSum {
                    row: source[x].clone(),
                    sum: sum.to_string(),
                });
            }
        }
        Ok(Self {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(labels: Vec<String>) -> Result<Self, ObservableError> {
        let n = labels.len();
        let matrix: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(labels.clone(), labels, matrix)
    }

    pub fn source(&self) -> &[String] {
        &self.source
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn get(&self, x: usize, y: usize) -> &Rational {
        &self.matrix[x][y]
    }

    /// Postprocesses an observable: `(nu ∘ A)(y) = sum_x nu_xy A(x)`.
    pub fn apply(&self, a: &Observable, tol: f64) -> Result<Observable, ObservableError> {
        if self.source.len() != a.len()
            || !self.source.iter().all(|s| a.outcomes().contains(s))
        {
            return Err(ObservableError::OutcomeSetMismatch);
        }
        let mut effects = Vec::with_capacity(self.target.len());
        for y in 0..self.target.len() {
            let mut payload = a.base().zero_effect().payload().clone();
            for (x, label) in self.source.iter().enumerate() {
                let ax = a.effect_for(label).expect("checked above");
                payload = payload.add(&ax.payload().scale(&self.matrix[x][y]))?;
            }
            effects.push(Effect::new(a.base(), payload, tol)?);
        }
        Observable::new(self.target.clone(), effects, tol)
    }
}

/// Result of searching for a channel factoring `B` through `A`.
#[derive(Debug, Clone)]
pub enum Postprocessing {
    Found(Channel),
    Infeasible(InfeasibleReason),
}

#[derive(Debug, Clone)]
pub enum InfeasibleReason {
    /// Some target effect is not in the span of the source effects.
    OutsideSpan { outcome: String },
    /// A solved coefficient fell outside `[0, 1]`.
    CoefficientOutOfRange {
        source: String,
        target: String,
        value: Scalar,
    },
    /// Coefficients are admissible but a source row does not sum to 1.
    RowSumNotOne { source: String, sum: Scalar },
    /// Quantum-side reconstruction missed the target beyond tolerance.
    NotReproduced { residual: f64 },
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibleReason::OutsideSpan { outcome } => {
                write!(f, "target effect {outcome:?} lies outside the source span")
            }
            InfeasibleReason::CoefficientOutOfRange {
                source,
                target,
                value,
            } => write!(
                f,
                "coefficient at ({source}, {target}) is {value}, outside [0, 1]"
            ),
            InfeasibleReason::RowSumNotOne { source, sum } => {
                write!(f, "row {source} sums to {sum}, not 1")
            }
            InfeasibleReason::NotReproduced { residual } => {
                write!(f, "channel reproduces the target only to residual {residual:e}")
            }
        }
    }
}

/// Finds the unique channel with `B = nu ∘ A`, requiring the source effects
/// to be linearly independent.
///
/// Per target outcome the expansion `B(y) = sum_x nu_xy A(x)` is solved in
/// the ambient span; the channel is returned only when every coefficient
/// lies in `[0, 1]` and every source row sums to 1, otherwise the offending
/// datum is reported.
pub fn find_postprocessing(
    a: &Observable,
    b: &Observable,
    tol: f64,
) -> Result<Postprocessing, ObservableError> {
    if a.base() != b.base() {
        return Err(ObservableError::BaseMismatch);
    }
    if !linearly_independent(a.effects(), tol)? {
        return Err(ObservableError::DependentSource);
    }
    let k = a.len();
    // columns[y][x] = nu_{x y}
    let mut columns: Vec<Coefficients> = Vec::with_capacity(b.len());
    for (label, effect) in b.outcomes().iter().zip(b.effects()) {
        match span_coordinates(a.effects(), effect, tol)? {
            Some(c) => columns.push(c),
            None => {
                return Ok(Postprocessing::Infeasible(InfeasibleReason::OutsideSpan {
                    outcome: label.clone(),
                }))
            }
        }
    }
    let exact = a.base().is_classical();
    let mut matrix: Vec<Vec<Rational>> = vec![vec![Rational::zero(); b.len()]; k];
    for (y, col) in columns.iter().enumerate() {
        match col {
            Coefficients::Rational(v) => {
                for (x, value) in v.iter().enumerate() {
                    if value.is_negative() || *value > Rational::one() {
                        return Ok(Postprocessing::Infeasible(
                            InfeasibleReason::CoefficientOutOfRange {
                                source: a.outcomes()[x].clone(),
                                target: b.outcomes()[y].clone(),
                                value: Scalar::Rational(value.clone()),
                            },
                        ));
                    }
                    matrix[x][y] = value.clone();
                }
            }
            Coefficients::Real(v) => {
                for (x, &value) in v.iter().enumerate() {
                    if !(-tol..=1.0 + tol).contains(&value) {
                        return Ok(Postprocessing::Infeasible(
                            InfeasibleReason::CoefficientOutOfRange {
                                source: a.outcomes()[x].clone(),
                                target: b.outcomes()[y].clone(),
                                value: Scalar::Real(value),
                            },
                        ));
                    }
                    let clamped = value.clamp(0.0, 1.0);
                    matrix[x][y] = Rational::from_float(clamped).expect("finite");
                }
            }
        }
    }
    // Row-stochasticity over the target outcomes.
    for (x, row) in matrix.iter_mut().enumerate() {
        let sum: Rational = row.iter().sum();
        if exact {
            if !sum.is_one() {
                return Ok(Postprocessing::Infeasible(InfeasibleReason::RowSumNotOne {
                    source: a.outcomes()[x].clone(),
                    sum: Scalar::Rational(sum),
                }));
            }
        } else {
            let gap = Rational::one() - &sum;
            let gap_f = gap.to_f64().unwrap_or(f64::INFINITY).abs();
            if gap_f > tol * (row.len() as f64 + 1.0) {
                return Ok(Postprocessing::Infeasible(InfeasibleReason::RowSumNotOne {
                    source: a.outcomes()[x].clone(),
                    sum: Scalar::Real(sum.to_f64().unwrap_or(f64::NAN)),
                }));
            }
            // Absorb the float-solve slack into the largest entry so rows
            // are stochastic exactly.
            let arg = (0..row.len())
                .max_by(|&i, &j| row[i].cmp(&row[j]))
                .expect("nonempty row");
            let fixed = &row[arg] + &gap;
            if fixed.is_negative() || fixed > Rational::one() {
                return Ok(Postprocessing::Infeasible(InfeasibleReason::RowSumNotOne {
                    source: a.outcomes()[x].clone(),
                    sum: Scalar::Real(sum.to_f64().unwrap_or(f64::NAN)),
                }));
            }
            row[arg] = fixed;
        }
    }
    let channel = Channel::new(a.outcomes().to_vec(), b.outcomes().to_vec(), matrix)?;
    if !exact {
        let rebuilt = channel.apply(a, tol.max(1e-6))?;
        let mut residual = 0.0f64;
        for (e1, e2) in rebuilt.effects().iter().zip(b.effects()) {
            residual = residual.max(e1.max_distance(e2));
        }
        if residual > tol * 16.0 {
            return Ok(Postprocessing::Infeasible(InfeasibleReason::NotReproduced {
                residual,
            }));
        }
    }
    Ok(Postprocessing::Found(channel))
}

/// The generator observable of a strong span, with labels `"1".."m"`.
pub fn generator_observable(span: &StrongSpan, tol: f64) -> Result<Observable, ObservableError> {
    Observable::indexed(span.generators().to_vec(), tol)
}

/// Joint-measurability witness for two members of a strong span: both
/// reconstruct by adding the common part to their rests, and the three
/// pieces extend to a single four-outcome observable.
#[derive(Debug, Clone)]
pub struct CoexistenceWitness {
    pub left_rest: Effect,
    pub right_rest: Effect,
    pub common: Effect,
}

impl CoexistenceWitness {
    pub fn reconstruct_left(&self) -> Effect {
        let payload = self
            .left_rest
            .payload()
            .add(self.common.payload())
            .expect("same algebra");
        Effect::from_payload_unchecked(self.left_rest.algebra(), payload)
    }

    pub fn reconstruct_right(&self) -> Effect {
        let payload = self
            .right_rest
            .payload()
            .add(self.common.payload())
            .expect("same algebra");
        Effect::from_payload_unchecked(self.right_rest.algebra(), payload)
    }

    /// The four-outcome observable `{left_rest, right_rest, common, rest}`.
    pub fn observable(&self, tol: f64) -> Result<Observable, ObservableError> {
        let sum = self
            .left_rest
            .payload()
            .add(self.right_rest.payload())?
            .add(self.common.payload())?;
        let triple = Effect::new(self.left_rest.algebra(), sum, tol)?;
        let rest = triple.complement();
        Observable::new(
            vec![
                "left".into(),
                "right".into(),
                "both".into(),
                "neither".into(),
            ],
            vec![
                self.left_rest.clone(),
                self.right_rest.clone(),
                self.common.clone(),
                rest,
            ],
            tol,
        )
    }
}

/// Builds the coexistence witness for two members of a strong span by
/// taking the coordinatewise minimum of their expansions.
pub fn coexistence_witness(
    span: &StrongSpan,
    left: &Effect,
    right: &Effect,
    tol: f64,
) -> Result<CoexistenceWitness, ObservableError> {
    let lam = span
        .strong_coordinates(left, tol)?
        .ok_or(ObservableError::MembershipFailed {
            which: "left".into(),
        })?;
    let mu = span
        .strong_coordinates(right, tol)?
        .ok_or(ObservableError::MembershipFailed {
            which: "right".into(),
        })?;
    let common_coords = match (&lam, &mu) {
        (Coefficients::Rational(a), Coefficients::Rational(b)) => Coefficients::Rational(
            a.iter()
                .zip(b)
                .map(|(x, y)| if x <= y { x.clone() } else { y.clone() })
                .collect(),
        ),
        (Coefficients::Real(a), Coefficients::Real(b)) => {
            Coefficients::Real(a.iter().zip(b).map(|(&x, &y)| x.min(y)).collect())
        }
        _ => unreachable!("same span yields one coefficient kind"),
    };
    let common_payload = span.subalgebra().combination(&common_coords)?;
    let common = Effect::new(span.base(), common_payload, tol)?;
    let left_rest = Effect::new(span.base(), left.payload().sub(common.payload())?, tol)?;
    let right_rest = Effect::new(span.base(), right.payload().sub(common.payload())?, tol)?;
    Ok(CoexistenceWitness {
        left_rest,
        right_rest,
        common,
    })
}

/// The affine isomorphism between a strong span and the simplex algebra of
/// its coordinates: members map to their generator expansions and back.
#[derive(Debug, Clone, Copy)]
pub struct ClassicalIso<'a> {
    span: &'a StrongSpan,
}

pub fn classical_iso(span: &StrongSpan) -> ClassicalIso<'_> {
    ClassicalIso { span }
}

impl ClassicalIso<'_> {
    pub fn simplex_algebra(&self) -> BaseAlgebra {
        BaseAlgebra::Classical {
            size: self.span.dim(),
        }
    }

    /// `J(a)`: the coordinate vector of a member, as an effect of `S_m`.
    pub fn to_simplex(&self, a: &Effect, tol: f64) -> Result<Effect, ObservableError> {
        let coords =
            self.span
                .strong_coordinates(a, tol)?
                .ok_or(ObservableError::MembershipFailed {
                    which: "argument".into(),
                })?;
        let values: Vec<Rational> = match coords {
            Coefficients::Rational(v) => v,
            Coefficients::Real(v) => v
                .iter()
                .map(|&x| Rational::from_float(x.clamp(0.0, 1.0)).expect("finite"))
                .collect(),
        };
        Ok(Effect::classical(values)?)
    }

    /// `J^{-1}(lambda)`: the member with the given simplex coordinates.
    pub fn from_simplex(&self, e: &Effect, tol: f64) -> Result<Effect, ObservableError> {
        let coords = e
            .as_classical()
            .ok_or(ObservableError::BadSimplexElement {
                expected: self.span.dim(),
            })?;
        if coords.len() != self.span.dim() {
            return Err(ObservableError::BadSimplexElement {
                expected: self.span.dim(),
            });
        }
        let coeffs = if self.span.base().is_classical() {
            Coefficients::Rational(coords.to_vec())
        } else {
            Coefficients::Real(coords.iter().map(|x| x.to_f64().unwrap()).collect())
        };
        Ok(self.span.member_from_coordinates(&coeffs, tol)?)
    }
}
