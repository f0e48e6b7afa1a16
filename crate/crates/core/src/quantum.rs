//! Quantum effect families: spectra, strong decompositions, block-matrix
//! constructions of noncommutative strong families, and the procedure that
//! turns a commuting family into strong generators.

use num::complex::Complex64;
use thiserror::Error;

use crate::algebra::{AlgebraError, Effect};
use crate::kernel::{
    hermitian_eig, ComplexMatrix, HermitianMatrix, KernelError, RealMatrix,
};
use crate::observables::{Observable, ObservableError};
use crate::subalgebra::{linearly_independent, SubalgebraError};

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("expected a quantum effect")]
    NotQuantum,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("generator {index} is not strong (largest eigenvalue {max})")]
    NotStrong { index: usize, max: f64 },
    #[error("generators are linearly dependent")]
    Dependent,
    #[error("generators sum to distance {defect:e} from the identity")]
    SumNotIdentity { defect: f64 },
    #[error("effects commute (commutator norm {norm:e} within tolerance)")]
    Commuting { norm: f64 },
    #[error("effects do not commute (commutator norm {norm:e})")]
    NotCommuting { norm: f64 },
    #[error("{which} has an eigenvalue within {margin:e} of {value}")]
    SpectrumTouches {
        which: String,
        value: f64,
        margin: f64,
    },
    #[error("identity is not in the span of the generators")]
    IdentityNotInSpan,
    #[error("simultaneous diagonalization failed (off-diagonal residue {residue:e})")]
    DiagonalizationFailed { residue: f64 },
    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Observable(#[from] ObservableError),
    #[error(transparent)]
    Subalgebra(#[from] SubalgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

fn quantum_matrix(e: &Effect) -> Result<&HermitianMatrix, QuantumError> {
    e.as_quantum().ok_or(QuantumError::NotQuantum)
}

/// Eigenvalues of a quantum effect, ascending.
pub fn spectrum(a: &Effect) -> Result<Vec<f64>, QuantumError> {
    Ok(hermitian_eig(quantum_matrix(a)?).values().to_vec())
}

/// Max-norm of the commutator `ab - ba`.
pub fn commutator_norm(a: &Effect, b: &Effect) -> Result<f64, QuantumError> {
    let (ma, mb) = (quantum_matrix(a)?, quantum_matrix(b)?);
    if ma.dim() != mb.dim() {
        return Err(QuantumError::DimMismatch(ma.dim(), mb.dim()));
    }
    Ok(ma.mul(mb).sub(&mb.mul(ma))?.max_abs())
}

fn max_pairwise_commutator(mats: &[&HermitianMatrix]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in mats.iter().enumerate() {
        for b in &mats[i + 1..] {
            let norm = a.mul(b).sub(&b.mul(a)).expect("same dim").max_abs();
            worst = worst.max(norm);
        }
    }
    worst
}

/// Result of splitting strong generators into unit-eigenspace projections
/// plus remainders: `a_i = P_i + Q a_i Q` with `P_1 + ... + P_m + Q = I`.
#[derive(Debug, Clone)]
pub struct StrongDecomposition {
    projections: Vec<HermitianMatrix>,
    q: HermitianMatrix,
    remainders: Vec<HermitianMatrix>,
    remainder_spectra: Vec<Vec<f64>>,
    reconstruction_residual: f64,
    partition_residual: f64,
    orthogonality_residual: f64,
    cross_residual: f64,
}

impl StrongDecomposition {
    pub fn projections(&self) -> &[HermitianMatrix] {
        &self.projections
    }

    pub fn q(&self) -> &HermitianMatrix {
        &self.q
    }

    pub fn remainders(&self) -> &[HermitianMatrix] {
        &self.remainders
    }

    /// Spectra of the remainders compressed to the range of `Q`.
    pub fn remainder_spectra(&self) -> &[Vec<f64>] {
        &self.remainder_spectra
    }

    /// `max_i |a_i - P_i - Q a_i Q|`.
    pub fn reconstruction_residual(&self) -> f64 {
        self.reconstruction_residual
    }

    /// `|P_1 + ... + P_m + Q - I|`.
    pub fn partition_residual(&self) -> f64 {
        self.partition_residual
    }

    /// `max_{i != j} |P_i P_j|`.
    pub fn orthogonality_residual(&self) -> f64 {
        self.orthogonality_residual
    }

    /// `max_{k != i} |a_k P_i|`: eigenvectors at 1 of one generator are
    /// annihilated by all the others.
    pub fn cross_residual(&self) -> f64 {
        self.cross_residual
    }
}

/// Decomposes a family of linearly independent strong quantum effects that
/// sums to the identity.
///
/// `P_i` is the projection onto the eigenspace of `a_i` for eigenvalues at
/// least `1 - tol` (degenerate clusters merge into one eigenspace), and
/// `Q = I - sum P_i`. Every invariant is verified before returning.
pub fn strong_decomposition(
    generators: &[Effect],
    tol: f64,
) -> Result<StrongDecomposition, QuantumError> {
    if generators.is_empty() {
        return Err(QuantumError::Dependent);
    }
    let mats: Vec<&HermitianMatrix> = generators
        .iter()
        .map(quantum_matrix)
        .collect::<Result<_, _>>()?;
    let n = mats[0].dim();
    for m in &mats {
        if m.dim() != n {
            return Err(QuantumError::DimMismatch(n, m.dim()));
        }
    }
    let m_count = mats.len();
    if m_count > n {
        return Err(QuantumError::DecompositionFailed(format!(
            "{m_count} independent strong generators cannot fit dimension {n}"
        )));
    }
    if !linearly_independent(generators, tol)? {
        return Err(QuantumError::Dependent);
    }
    let mut sum = HermitianMatrix::zeros(n);
    for m in &mats {
        sum = sum.add(m)?;
    }
    let sum_defect = sum.max_diff(&HermitianMatrix::identity(n));
    if sum_defect > tol {
        return Err(QuantumError::SumNotIdentity { defect: sum_defect });
    }

    let mut projections = Vec::with_capacity(m_count);
    for (index, m) in mats.iter().enumerate() {
        let eig = hermitian_eig(m);
        let max = eig.values().last().copied().unwrap_or(0.0);
        if max < 1.0 - tol {
            return Err(QuantumError::NotStrong { index, max });
        }
        projections.push(eig.projection_where(|l| l >= 1.0 - tol));
    }

    let mut p_sum = HermitianMatrix::zeros(n);
    for p in &projections {
        p_sum = p_sum.add(p)?;
    }
    let q = HermitianMatrix::identity(n).sub(&p_sum)?;

    let mut orthogonality_residual = 0.0f64;
    for (i, pi) in projections.iter().enumerate() {
        for pj in &projections[i + 1..] {
            orthogonality_residual = orthogonality_residual.max(pi.mul(pj).max_abs());
        }
    }
    if orthogonality_residual > tol {
        return Err(QuantumError::DecompositionFailed(format!(
            "unit eigenspaces overlap (residual {orthogonality_residual:e})"
        )));
    }
    let q_defect = HermitianMatrix::symmetrized(q.mul(&q)).max_diff(&q);
    if q_defect > tol * (m_count as f64 + 1.0) {
        return Err(QuantumError::DecompositionFailed(format!(
            "complement is not a projection (defect {q_defect:e})"
        )));
    }

    let mut cross_residual = 0.0f64;
    for (i, pi) in projections.iter().enumerate() {
        for (k, ak) in mats.iter().enumerate() {
            if k != i {
                cross_residual = cross_residual.max(ak.mul(pi).max_abs());
            }
        }
    }

    let mut remainders = Vec::with_capacity(m_count);
    let mut reconstruction_residual = 0.0f64;
    for (m, p) in mats.iter().zip(&projections) {
        let qa = HermitianMatrix::symmetrized(q.mul(m).mul(q.as_matrix()).expect("square"));
        let rebuilt = p.add(&qa)?;
        reconstruction_residual = reconstruction_residual.max(rebuilt.max_diff(m));
        remainders.push(qa);
    }
    if reconstruction_residual > tol {
        return Err(QuantumError::DecompositionFailed(format!(
            "reconstruction residual {reconstruction_residual:e} over tolerance"
        )));
    }

    let partition_residual = p_sum.add(&q)?.max_diff(&HermitianMatrix::identity(n));

    // Compress each remainder to range(Q); the ambient kernel contributes
    // spurious zeros, so the 0/1 exclusion is decided there.
    let q_eig = hermitian_eig(&q);
    let range_cols: Vec<usize> = q_eig
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &l)| l >= 0.5)
        .map(|(k, _)| k)
        .collect();
    let mut remainder_spectra = Vec::with_capacity(m_count);
    for (index, b) in remainders.iter().enumerate() {
        let spectrum = if range_cols.is_empty() {
            Vec::new()
        } else {
            let r = range_cols.len();
            let mut w = ComplexMatrix::zeros(n, r);
            for (c, &k) in range_cols.iter().enumerate() {
                for i in 0..n {
                    w.set(i, c, q_eig.vectors().get(i, k));
                }
            }
            let compressed = HermitianMatrix::symmetrized(
                w.adjoint().mul(b.as_matrix()).and_then(|m| m.mul(&w))?,
            );
            hermitian_eig(&compressed).values().to_vec()
        };
        for &l in &spectrum {
            if l.abs() <= tol || (l - 1.0).abs() <= tol {
                return Err(QuantumError::DecompositionFailed(format!(
                    "remainder {index} has eigenvalue {l} touching {{0, 1}} on range(Q)"
                )));
            }
        }
        remainder_spectra.push(spectrum);
    }

    Ok(StrongDecomposition {
        projections,
        q,
        remainders,
        remainder_spectra,
        reconstruction_residual,
        partition_residual,
        orthogonality_residual,
        cross_residual,
    })
}

fn spectrum_margin_check(
    m: &HermitianMatrix,
    which: &str,
    exclude: &[f64],
    margin: f64,
) -> Result<(), QuantumError> {
    let eig = hermitian_eig(m);
    for &value in exclude {
        if eig.values().iter().any(|&l| (l - value).abs() <= margin) {
            return Err(QuantumError::SpectrumTouches {
                which: which.to_string(),
                value,
                margin,
            });
        }
    }
    Ok(())
}

/// Builds the three-outcome qubit observable `{alpha/2, beta/2, rest}` from
/// a noncommuting pair with zero-free spectra. The members are pairwise
/// noncommuting, linearly independent, and none of them has 0 or 1 in its
/// spectrum, so the span is a noncommutative CSEA with no strong member
/// among its generators.
pub fn build_example6(
    alpha: &Effect,
    beta: &Effect,
    tol: f64,
) -> Result<Observable, QuantumError> {
    let (ma, mb) = (quantum_matrix(alpha)?, quantum_matrix(beta)?);
    for m in [ma, mb] {
        if m.dim() != 2 {
            return Err(QuantumError::WrongDimension {
                expected: 2,
                got: m.dim(),
            });
        }
    }
    let norm = commutator_norm(alpha, beta)?;
    if norm <= tol {
        return Err(QuantumError::Commuting { norm });
    }
    spectrum_margin_check(ma, "alpha", &[0.0], tol)?;
    spectrum_margin_check(mb, "beta", &[0.0], tol)?;

    let a1 = ma.scale(0.5);
    let a2 = mb.scale(0.5);
    let a3 = HermitianMatrix::identity(2).sub(&a1)?.sub(&a2)?;
    let effects = vec![
        Effect::quantum(a1, tol)?,
        Effect::quantum(a2, tol)?,
        Effect::quantum(a3, tol)?,
    ];
    for (i, e) in effects.iter().enumerate() {
        spectrum_margin_check(e.as_quantum().unwrap(), &format!("member {}", i + 1), &[0.0, 1.0], tol)?;
        for other in &effects[i + 1..] {
            let pair_norm = commutator_norm(e, other)?;
            if pair_norm <= tol {
                return Err(QuantumError::Commuting { norm: pair_norm });
            }
        }
    }
    if !linearly_independent(&effects, tol)? {
        return Err(QuantumError::Dependent);
    }
    Ok(Observable::new(
        vec!["a1".into(), "a2".into(), "a3".into()],
        effects,
        tol,
    )?)
}

/// Outcome of the dimension-five block construction: three strong effects
/// summing to the identity, noncommutative whenever the qubit blocks are.
#[derive(Debug, Clone)]
pub struct BlockFamily {
    pub effects: Vec<Effect>,
    pub commutative: bool,
    pub decomposition: StrongDecomposition,
}

/// Embeds three qubit effects with `b + c + d = I` and 0/1-free spectra as
/// the remainders of a strong family on a five-dimensional space: member
/// `i` has a unit entry in diagonal slot `i` and its qubit block in the
/// trailing corner.
pub fn build_example7(
    b: &Effect,
    c: &Effect,
    d: &Effect,
    tol: f64,
) -> Result<BlockFamily, QuantumError> {
    let blocks = [
        (quantum_matrix(b)?, "b"),
        (quantum_matrix(c)?, "c"),
        (quantum_matrix(d)?, "d"),
    ];
    for (m, name) in &blocks {
        if m.dim() != 2 {
            return Err(QuantumError::WrongDimension {
                expected: 2,
                got: m.dim(),
            });
        }
        spectrum_margin_check(m, name, &[0.0, 1.0], tol)?;
    }
    let sum = blocks[0].0.add(blocks[1].0)?.add(blocks[2].0)?;
    let defect = sum.max_diff(&HermitianMatrix::identity(2));
    if defect > tol {
        return Err(QuantumError::SumNotIdentity { defect });
    }

    let mut effects = Vec::with_capacity(3);
    for (slot, (block, _)) in blocks.iter().enumerate() {
        let mut m = ComplexMatrix::zeros(5, 5);
        m.set(slot, slot, Complex64::new(1.0, 0.0));
        for i in 0..2 {
            for j in 0..2 {
                m.set(3 + i, 3 + j, block.get(i, j));
            }
        }
        effects.push(Effect::quantum(
            HermitianMatrix::from_matrix(m)?,
            tol,
        )?);
    }
    let commutator = max_pairwise_commutator(&[blocks[0].0, blocks[1].0, blocks[2].0]);
    let decomposition = strong_decomposition(&effects, tol)?;
    Ok(BlockFamily {
        effects,
        commutative: commutator <= tol,
        decomposition,
    })
}

/// Common eigenbasis of a commuting Hermitian family.
///
/// Diagonalizes a generic random combination first (weights drawn from the
/// seeded RNG), then re-diagonalizes blockwise wherever degeneracy keeps a
/// family member off-diagonal. Returns the basis and each member's diagonal
/// in it.
pub fn simultaneous_diagonalize(
    mats: &[&HermitianMatrix],
    tol: f64,
    seed: u64,
) -> Result<(ComplexMatrix, Vec<Vec<f64>>), QuantumError> {
    use rand::Rng;
    let n = mats[0].dim();
    let mut rng = crate::sample::rng(seed);
    let mut combo = HermitianMatrix::zeros(n);
    for m in mats {
        combo = combo.add(&m.scale(0.5 + rng.random::<f64>()))?;
    }
    let eig = hermitian_eig(&combo);
    let mut basis = eig.vectors().clone();
    let scale = 1.0 + eig.values().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cluster_gap = 1e-8 * scale;
    let mut blocks: Vec<Vec<usize>> = cluster_indices(eig.values(), cluster_gap);

    for m in mats {
        let rotated = m.conjugate_by(&basis);
        let mut next_blocks = Vec::new();
        for block in &blocks {
            if block.len() == 1 {
                next_blocks.push(block.clone());
                continue;
            }
            let sub = submatrix(&rotated, block);
            let sub_eig = hermitian_eig(&sub);
            apply_block_rotation(&mut basis, block, sub_eig.vectors());
            // Partition the block by this member's eigenvalue clusters.
            for cluster in cluster_indices(sub_eig.values(), cluster_gap) {
                next_blocks.push(cluster.iter().map(|&k| block[k]).collect());
            }
        }
        blocks = next_blocks;
    }

    let mut diagonals = Vec::with_capacity(mats.len());
    let mut residue = 0.0f64;
    for m in mats {
        let rotated = m.conjugate_by(&basis);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    residue = residue.max(rotated.get(i, j).norm());
                }
            }
        }
        diagonals.push((0..n).map(|i| rotated.get(i, i).re).collect());
    }
    if residue > 100.0 * tol {
        return Err(QuantumError::DiagonalizationFailed { residue });
    }
    Ok((basis, diagonals))
}

fn cluster_indices(sorted_values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in sorted_values.iter().enumerate() {
        match blocks.last_mut() {
            Some(block) if (v - sorted_values[block[block.len() - 1]]).abs() <= gap => {
                block.push(i)
            }
            _ => blocks.push(vec![i]),
        }
    }
    blocks
}

fn submatrix(m: &HermitianMatrix, indices: &[usize]) -> HermitianMatrix {
    let r = indices.len();
    let mut out = ComplexMatrix::zeros(r, r);
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            out.set(a, b, m.get(i, j));
        }
    }
    HermitianMatrix::symmetrized(out)
}

fn apply_block_rotation(basis: &mut ComplexMatrix, block: &[usize], rotation: &ComplexMatrix) {
    let n = basis.rows();
    let r = block.len();
    for i in 0..n {
        let old: Vec<Complex64> = block.iter().map(|&c| basis.get(i, c)).collect();
        for (b, &c) in block.iter().enumerate() {
            let mut v = Complex64::new(0.0, 0.0);
            for a in 0..r {
                v += old[a] * rotation.get(a, b);
            }
            basis.set(i, c, v);
        }
    }
}

/// Result of [`strongify_commutative`]: either verified strong generators
/// for the span, or the diagonal data of an instance where no coordinate
/// selection produced effect-valued candidates.
#[derive(Debug, Clone)]
pub enum StrongifyOutcome {
    Strong(Vec<Effect>),
    ProofGap(ProofGapReport),
}

/// Diagnostic payload for a failed strongification: the family is a valid
/// commuting CSEA basis, yet no coordinate projection of its diagonal span
/// yielded candidates inside `[0, u]`.
#[derive(Debug, Clone)]
pub struct ProofGapReport {
    pub diagonals: Vec<Vec<f64>>,
    pub selections_tried: usize,
    pub detail: String,
}

/// Rewrites a commuting, linearly independent family whose span contains
/// the identity as strong generators of the same span.
///
/// The family is simultaneously diagonalized; coordinate subsets on which
/// the diagonal span projects bijectively are enumerated in index order,
/// and for each the preimages of the standard basis vectors are formed.
/// The first subset whose candidates verify (effects, strong, summing to
/// the identity) wins. If none verifies, a proof-gap report carrying the
/// diagonal data is returned instead.
pub fn strongify_commutative(
    generators: &[Effect],
    tol: f64,
    seed: u64,
) -> Result<StrongifyOutcome, QuantumError> {
    if generators.is_empty() {
        return Err(QuantumError::Dependent);
    }
    let mats: Vec<&HermitianMatrix> = generators
        .iter()
        .map(quantum_matrix)
        .collect::<Result<_, _>>()?;
    let n = mats[0].dim();
    for m in &mats {
        if m.dim() != n {
            return Err(QuantumError::DimMismatch(n, m.dim()));
        }
    }
    let worst = max_pairwise_commutator(&mats);
    if worst > tol {
        return Err(QuantumError::NotCommuting { norm: worst });
    }
    if !linearly_independent(generators, tol)? {
        return Err(QuantumError::Dependent);
    }
    let m_count = mats.len();
    let (_, diagonals) = simultaneous_diagonalize(&mats, tol, seed)?;

    // The identity must be a combination of the family.
    let columns = RealMatrix::from_columns(&diagonals)?;
    if columns.solve(&vec![1.0; n], tol.max(1e-12))?.is_none() {
        return Err(QuantumError::IdentityNotInSpan);
    }

    let accept = tol.max(1e-10) * 16.0;
    let mut selections_tried = 0usize;
    let mut first_failure = String::new();
    let mut selection = first_subset(m_count);
    while let Some(cols) = selection.as_ref() {
        if cols.iter().any(|&c| c >= n) {
            break;
        }
        // Coordinate matrix rows: the selected coordinates of each diagonal.
        let coord =
            RealMatrix::from_rows(&(0..m_count)
                .map(|i| cols.iter().map(|&c| diagonals[i][c]).collect::<Vec<f64>>())
                .collect::<Vec<_>>())?;
        if coord.rank(tol.max(1e-10)) == m_count {
            selections_tried += 1;
            match candidates_for_selection(&diagonals, cols, accept) {
                Ok(weights) => {
                    let effects = realize_candidates(generators, &weights, tol)?;
                    if let Some(effects) = effects {
                        return Ok(StrongifyOutcome::Strong(effects));
                    } else if first_failure.is_empty() {
                        first_failure =
                            format!("candidates for columns {cols:?} fail effect validation");
                    }
                }
                Err(reason) => {
                    if first_failure.is_empty() {
                        first_failure = format!("columns {cols:?}: {reason}");
                    }
                }
            }
        }
        selection = next_subset(selection.unwrap(), n);
    }
    Ok(StrongifyOutcome::ProofGap(ProofGapReport {
        diagonals,
        selections_tried,
        detail: if first_failure.is_empty() {
            "no coordinate subset projects bijectively".into()
        } else {
            first_failure
        },
    }))
}

fn first_subset(k: usize) -> Option<Vec<usize>> {
    Some((0..k).collect())
}

/// Next k-subset of `{0..n-1}` in lexicographic order.
fn next_subset(mut cols: Vec<usize>, n: usize) -> Option<Vec<usize>> {
    let k = cols.len();
    let mut i = k;
    loop {
        if i == 0 {
            return None;
        }
        i -= 1;
        if cols[i] < n - (k - i) {
            cols[i] += 1;
            for j in i + 1..k {
                cols[j] = cols[j - 1] + 1;
            }
            return Some(cols);
        }
    }
}

/// Solves for the combination weights sending the family onto the standard
/// basis of the selected coordinates, and screens the resulting diagonal
/// vectors.
fn candidates_for_selection(
    diagonals: &[Vec<f64>],
    cols: &[usize],
    accept: f64,
) -> Result<Vec<Vec<f64>>, String> {
    let m = diagonals.len();
    let n = diagonals[0].len();
    // Transposed coordinate system: row k is coordinate cols[k] across the
    // family members.
    let system = RealMatrix::from_rows(
        &(0..m)
            .map(|k| (0..m).map(|i| diagonals[i][cols[k]]).collect::<Vec<f64>>())
            .collect::<Vec<_>>(),
    )
    .map_err(|e| e.to_string())?;
    let mut weights = Vec::with_capacity(m);
    let mut sum = vec![0.0f64; n];
    for j in 0..m {
        let mut target = vec![0.0; m];
        target[j] = 1.0;
        let x = system
            .solve(&target, 1e-12)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| "coordinate system is singular".to_string())?;
        // Candidate diagonal vector.
        let mut v = vec![0.0f64; n];
        for (i, d) in diagonals.iter().enumerate() {
            for (c, vi) in v.iter_mut().enumerate() {
                *vi += x.values[i] * d[c];
            }
        }
        for (c, &vi) in v.iter().enumerate() {
            if !(-accept..=1.0 + accept).contains(&vi) {
                return Err(format!("candidate {j} has coordinate {vi} at position {c}"));
            }
            sum[c] += vi;
        }
        if !v.iter().any(|&vi| vi >= 1.0 - accept) {
            return Err(format!("candidate {j} is not strong"));
        }
        weights.push(x.values);
    }
    if sum.iter().any(|&s| (s - 1.0).abs() > accept) {
        return Err("candidates do not sum to the identity".into());
    }
    Ok(weights)
}

/// Builds the candidate matrices in the original basis and runs the final
/// verification at full matrix level.
fn realize_candidates(
    generators: &[Effect],
    weights: &[Vec<f64>],
    tol: f64,
) -> Result<Option<Vec<Effect>>, QuantumError> {
    let mats: Vec<&HermitianMatrix> = generators
        .iter()
        .map(quantum_matrix)
        .collect::<Result<_, _>>()?;
    let n = mats[0].dim();
    let mut effects = Vec::with_capacity(weights.len());
    let mut total = HermitianMatrix::zeros(n);
    for x in weights {
        let mut g = HermitianMatrix::zeros(n);
        for (m, &w) in mats.iter().zip(x) {
            g = g.add(&m.scale(w))?;
        }
        total = total.add(&g)?;
        match Effect::quantum(g, tol * 16.0) {
            Ok(e) => {
                if !e.is_strong(tol * 16.0) {
                    return Ok(None);
                }
                effects.push(e);
            }
            Err(_) => return Ok(None),
        }
    }
    if total.max_diff(&HermitianMatrix::identity(n)) > tol * 16.0 {
        return Ok(None);
    }
    if !linearly_independent(&effects, tol)? {
        return Ok(None);
    }
    Ok(Some(effects))
}
