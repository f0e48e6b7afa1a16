//! Deterministic, seedable generators for matrices, effects and spans.
//!
//! Everything here is driven by an explicit RNG so that test suites and
//! reports are reproducible run to run.

use num::complex::Complex64;
use num::{BigInt, One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Effect;
use crate::kernel::{ComplexMatrix, HermitianMatrix, Rational};
use crate::subalgebra::StrongSpan;

/// Seeded stream cipher RNG used everywhere randomness is needed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; the clamp keeps ln away from zero.
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-ish random unitary: Gram-Schmidt of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| random_complex(rng)).collect())
            .collect();
        let mut ok = true;
        for j in 0..dim {
            for k in 0..j {
                let proj: Complex64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..dim {
                    let v = cols[j][i] - proj * cols[k][i];
                    cols[j][i] = v;
                }
            }
            let norm: f64 = cols[j].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for v in cols[j].iter_mut() {
                *v /= norm;
            }
        }
        if !ok {
            continue;
        }
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        return m;
    }
}

/// Random Hermitian matrix with Gaussian entries of unit scale.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> HermitianMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        m.set(i, i, Complex64::new(standard_normal(rng), 0.0));
        for j in i + 1..dim {
            let v = random_complex(rng) * 0.5;
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    HermitianMatrix::from_matrix(m).expect("Hermitian by construction")
}

/// Hermitian matrix with exactly the given spectrum, in a random basis.
pub fn hermitian_with_spectrum(spectrum: &[f64], rng: &mut impl Rng) -> HermitianMatrix {
    let u = random_unitary(spectrum.len(), rng);
    HermitianMatrix::diagonal(spectrum).conjugate_by(&u)
}

/// Uniform-ish rational in `[0, 1]` with denominator at most `max_den`.
pub fn random_unit_rational(rng: &mut impl Rng, max_den: u64) -> Rational {
    let den = rng.random_range(1..=max_den);
    let num = rng.random_range(0..=den);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Random exact probability vector of length `n`.
pub fn random_probability_vector(n: usize, rng: &mut impl Rng) -> Vec<Rational> {
    let weights: Vec<u64> = (0..n).map(|_| rng.random_range(1..=20)).collect();
    let total: u64 = weights.iter().sum();
    weights
        .into_iter()
        .map(|w| Rational::new(BigInt::from(w), BigInt::from(total)))
        .collect()
}

/// Random exact row-stochastic matrix.
pub fn random_stochastic_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| random_probability_vector(cols, rng))
        .collect()
}

/// Random classical effect in `S_n`.
pub fn random_classical_effect(n: usize, rng: &mut impl Rng) -> Effect {
    let values: Vec<Rational> = (0..n).map(|_| random_unit_rational(rng, 12)).collect();
    Effect::classical(values).expect("entries lie in [0, 1]")
}

/// Random strong span of `S_n` with `m <= n` generators.
///
/// Coordinate `j < m` is split as the identity block (pinning strongness and
/// independence); each remaining coordinate distributes its unit mass across
/// the generators by a random exact probability column.
pub fn random_strong_span_classical(n: usize, m: usize, rng: &mut impl Rng) -> StrongSpan {
    assert!(m >= 1 && m <= n, "need 1 <= m <= n");
    let mut gens: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; m];
    for (i, gen) in gens.iter_mut().enumerate() {
        gen[i] = Rational::one();
    }
    for j in m..n {
        let col = random_probability_vector(m, rng);
        for (i, w) in col.into_iter().enumerate() {
            gens[i][j] = w;
        }
    }
    let effects: Vec<Effect> = gens
        .into_iter()
        .map(|g| Effect::classical(g).expect("entries lie in [0, 1]"))
        .collect();
    StrongSpan::new(effects, crate::DEFAULT_TOLERANCE).expect("strong span by construction")
}

/// Random commuting family of `m` quantum effects on dimension `dim` whose
/// real span contains the identity, conjugated into a common random basis.
pub fn random_commuting_family(dim: usize, m: usize, rng: &mut impl Rng) -> Vec<Effect> {
    assert!(m >= 1 && m <= dim, "need 1 <= m <= dim");
    let u = random_unitary(dim, rng);
    loop {
        let mut diags: Vec<Vec<f64>> = (0..m.saturating_sub(1))
            .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
            .collect();
        // Last member makes the all-ones vector a combination of the family.
        let sums: Vec<f64> = (0..dim)
            .map(|j| diags.iter().map(|d| d[j]).sum::<f64>())
            .collect();
        let c = sums.iter().cloned().fold(1.0f64, f64::max);
        let k = c.max(1.0);
        diags.push(sums.iter().map(|s| (c - s) / k).collect());
        // Independence check on the diagonal vectors.
        let flat = crate::kernel::RealMatrix::from_rows(&diags).expect("nonempty");
        if flat.rank(1e-9) < m {
            continue;
        }
        return diags
            .into_iter()
            .map(|d| {
                let h = HermitianMatrix::diagonal(&d).conjugate_by(&u);
                Effect::quantum(h, crate::DEFAULT_TOLERANCE).expect("diagonal entries in [0, 1]")
            })
            .collect();
    }
}

/// Random commuting family spanning a genuinely strong CSEA.
///
/// Strong diagonal generators (unit slots on the first `m` coordinates,
/// random unit-mass columns elsewhere) are mixed by a random invertible
/// matrix with entries in `[0, 1]`, which keeps every member an effect and
/// preserves the span, then everything is conjugated into a random basis.
pub fn random_strong_commuting_family(dim: usize, m: usize, rng: &mut impl Rng) -> Vec<Effect> {
    assert!(m >= 1 && m <= dim, "need 1 <= m <= dim");
    let mut gens = vec![vec![0.0f64; dim]; m];
    for (i, g) in gens.iter_mut().enumerate() {
        g[i] = 1.0;
    }
    for j in m..dim {
        let mut col: Vec<f64> = (0..m).map(|_| rng.random::<f64>() + 0.01).collect();
        let total: f64 = col.iter().sum();
        col.iter_mut().for_each(|w| *w /= total);
        for (i, w) in col.into_iter().enumerate() {
            gens[i][j] = w;
        }
    }
    let u = random_unitary(dim, rng);
    loop {
        let mix: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.random::<f64>()).collect())
            .collect();
        let mixed: Vec<Vec<f64>> = (0..m)
            .map(|j| {
                (0..dim)
                    .map(|c| (0..m).map(|k| mix[j][k] * gens[k][c]).sum())
                    .collect()
            })
            .collect();
        if crate::kernel::RealMatrix::from_rows(&mixed)
            .expect("nonempty")
            .rank(1e-6)
            < m
        {
            continue;
        }
        return mixed
            .into_iter()
            .map(|d| {
                let h = HermitianMatrix::diagonal(&d).conjugate_by(&u);
                Effect::quantum(h, crate::DEFAULT_TOLERANCE).expect("mixed entries in [0, 1]")
            })
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Signed;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(1);
        for dim in 1..=6 {
            let u = random_unitary(dim, &mut r);
            assert!(u.unitary_defect() <= 1e-12);
        }
    }

    #[test]
    fn planted_spectrum_is_recovered() {
        let mut r = rng(2);
        let spec = [0.1, 0.4, 1.0];
        let h = hermitian_with_spectrum(&spec, &mut r);
        let eig = crate::kernel::hermitian_eig(&h);
        for (a, b) in eig.values().iter().zip(spec.iter()) {
            assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn probability_vector_sums_to_one() {
        let mut r = rng(3);
        let p = random_probability_vector(5, &mut r);
        let total: Rational = p.iter().sum();
        assert!(total.is_one());
        assert!(p.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn commuting_family_commutes_and_spans_identity() {
        let mut r = rng(4);
        let fam = random_commuting_family(5, 3, &mut r);
        assert_eq!(fam.len(), 3);
        for a in &fam {
            for b in &fam {
                let am = a.as_quantum().unwrap();
                let bm = b.as_quantum().unwrap();
                let comm = am.mul(bm).sub(&bm.mul(am)).unwrap();
                assert!(comm.max_abs() <= 1e-9);
            }
        }
    }
}
