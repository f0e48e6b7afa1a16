//! Random variables on a finite outcome set, their level-set partitions,
//! complementarity notions, and the exact informational-completeness
//! decision with witness states.
//!
//! All predicates here are functions of partitions only: random variables
//! with the same level sets are indistinguishable by their distributions.
//! Informational completeness for a family is decided by the exact rank of
//! the stacked block-indicator rows. Distribution equality constraints are
//! linear and homogeneous in `w = mu - nu`, and any nonzero `w` with zero
//! coordinate sum scales into a difference of two probability vectors, so
//! kernel triviality is equivalent to the definition; a kernel vector is
//! turned into an explicit pair of distinct states with identical
//! distributions.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::kernel::{Rational, RationalMatrix};

#[derive(Debug, Error)]
pub enum InfoError {
    #[error("outcome set must be nonempty")]
    Empty,
    #[error("outcome set sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("blocks do not partition {{1..{n}}}")]
    NotAPartition { n: usize },
    #[error("need at least one random variable")]
    NoVariables,
    #[error("probability vector length {got} does not match outcome set size {expected}")]
    BadStateLength { expected: usize, got: usize },
}

/// A function on `X = {1..n}`, stored as one value label per point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomVariable {
    values: Vec<String>,
}

impl RandomVariable {
    pub fn new(values: Vec<String>) -> Result<Self, InfoError> {
        if values.is_empty() {
            return Err(InfoError::Empty);
        }
        Ok(Self { values })
    }

    /// A variable whose level sets are exactly the given partition, with
    /// block indices as values.
    pub fn from_partition(p: &Partition) -> Self {
        let mut values = vec![String::new(); p.size()];
        for (b, block) in p.blocks().iter().enumerate() {
            for &i in block {
                values[i] = format!("b{b}");
            }
        }
        Self { values }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|v| v == &self.values[0])
    }

    pub fn is_injective(&self) -> bool {
        self.partition().is_discrete()
    }

    /// The level-set partition `P(f)`, blocks ordered by least element.
    pub fn partition(&self) -> Partition {
        let mut seen: Vec<(&String, Vec<usize>)> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            match seen.iter_mut().find(|(label, _)| *label == v) {
                Some((_, block)) => block.push(i),
                None => seen.push((v, vec![i])),
            }
        }
        Partition {
            n: self.values.len(),
            blocks: seen.into_iter().map(|(_, b)| b).collect(),
        }
    }

    /// The distribution of the variable under an exact probability vector,
    /// in first-occurrence value order.
    pub fn distribution(
        &self,
        mu: &[Rational],
    ) -> Result<Vec<(String, Rational)>, InfoError> {
        if mu.len() != self.values.len() {
            return Err(InfoError::BadStateLength {
                expected: self.values.len(),
                got: mu.len(),
            });
        }
        let mut out: Vec<(String, Rational)> = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            match out.iter_mut().find(|(label, _)| label == v) {
                Some((_, mass)) => *mass += &mu[i],
                None => out.push((v.clone(), mu[i].clone())),
            }
        }
        Ok(out)
    }
}

/// A set partition of `{0..n-1}` in canonical form: each block ascending,
/// blocks ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, InfoError> {
        if n == 0 {
            return Err(InfoError::Empty);
        }
        let mut seen = vec![false; n];
        for block in &mut blocks {
            block.sort_unstable();
            for &i in block.iter() {
                if i >= n || seen[i] {
                    return Err(InfoError::NotAPartition { n });
                }
                seen[i] = true;
            }
            if block.is_empty() {
                return Err(InfoError::NotAPartition { n });
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(InfoError::NotAPartition { n });
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            n,
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn one_block(n: usize) -> Self {
        Self {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_singleton(&self, i: usize) -> bool {
        self.blocks.iter().any(|b| b.len() == 1 && b[0] == i)
    }

    /// Common refinement: all nonempty pairwise intersections.
    pub fn refine(&self, other: &Partition) -> Result<Partition, InfoError> {
        if self.n != other.n {
            return Err(InfoError::SizeMismatch(self.n, other.n));
        }
        let mut blocks = Vec::new();
        for a in &self.blocks {
            for b in &other.blocks {
                let both: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
                if !both.is_empty() {
                    blocks.push(both);
                }
            }
        }
        Partition::new(self.n, blocks)
    }

    /// Exact 0/1 indicator rows, one per block.
    pub fn indicator_rows(&self) -> Vec<Vec<Rational>> {
        self.blocks
            .iter()
            .map(|block| {
                let mut row = vec![Rational::zero(); self.n];
                for &i in block {
                    row[i] = Rational::one();
                }
                row
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    /// One-based block notation, `{{1,2},{3}}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, i) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

fn check_family(fs: &[RandomVariable]) -> Result<usize, InfoError> {
    let first = fs.first().ok_or(InfoError::NoVariables)?;
    let n = first.size();
    for f in fs {
        if f.size() != n {
            return Err(InfoError::SizeMismatch(n, f.size()));
        }
    }
    Ok(n)
}

/// Iterated common refinement of the family's partitions.
pub fn joint_refinement(fs: &[RandomVariable]) -> Result<Partition, InfoError> {
    check_family(fs)?;
    let mut acc = fs[0].partition();
    for f in &fs[1..] {
        acc = acc.refine(&f.partition())?;
    }
    Ok(acc)
}

/// Complementary: the joint refinement consists of singletons only.
pub fn is_complementary(fs: &[RandomVariable]) -> Result<bool, InfoError> {
    Ok(joint_refinement(fs)?.is_discrete())
}

/// Strongly complementary: every point is a singleton block of at least one
/// of the partitions.
pub fn is_strongly_complementary(fs: &[RandomVariable]) -> Result<bool, InfoError> {
    let n = check_family(fs)?;
    let partitions: Vec<Partition> = fs.iter().map(|f| f.partition()).collect();
    Ok((0..n).all(|i| partitions.iter().any(|p| p.is_singleton(i))))
}

/// Verdict of the informational-completeness decision. When the family is
/// not IC the witness is a pair of distinct probability vectors producing
/// identical distributions under every supplied variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICVerdict {
    pub ic: bool,
    pub witness: Option<ICWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICWitness {
    pub mu: Vec<Rational>,
    pub nu: Vec<Rational>,
}

/// Decides informational completeness of a family by the exact rank of the
/// stacked block-indicator rows.
///
/// When the rank falls short of `n`, the first nullspace basis vector `w`
/// (which automatically has zero coordinate sum) is centered on the uniform
/// state: `mu = 1/n + w/(2n max|w|)`, `nu = 1/n - w/(2n max|w|)`.
pub fn is_ic(fs: &[RandomVariable]) -> Result<ICVerdict, InfoError> {
    let n = check_family(fs)?;
    let mut rows = Vec::new();
    for f in fs {
        rows.extend(f.partition().indicator_rows());
    }
    let m = RationalMatrix::from_rows(&rows).expect("nonempty indicator rows");
    if m.rank() == n {
        return Ok(ICVerdict {
            ic: true,
            witness: None,
        });
    }
    let w = m
        .nullspace()
        .into_iter()
        .next()
        .expect("rank deficit implies a kernel vector");
    let max_abs = w
        .iter()
        .map(|x| x.abs())
        .max()
        .expect("nonzero kernel vector");
    let scale = Rational::one() / (Rational::from_integer((2 * n as i64).into()) * max_abs);
    let uniform = Rational::new(1.into(), (n as i64).into());
    let mu: Vec<Rational> = w.iter().map(|x| &uniform + x * &scale).collect();
    let nu: Vec<Rational> = w.iter().map(|x| &uniform - x * &scale).collect();
    debug_assert!(mu.iter().sum::<Rational>().is_one());
    debug_assert!(nu.iter().sum::<Rational>().is_one());
    Ok(ICVerdict {
        ic: false,
        witness: Some(ICWitness { mu, nu }),
    })
}

/// All set partitions of `{1..n}` via restricted growth strings, in
/// lexicographic order of the strings.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks_count = rgs.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); blocks_count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        out.push(Partition::new(n, blocks).expect("valid by construction"));
        // Advance the restricted growth string.
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let cap = rgs[..i].iter().copied().max().unwrap_or(0) + 1;
            if rgs[i] < cap {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Exhaustive verification data over all partition pairs at a given `n`:
/// singleton partitions are exactly the IC singles, strong complementarity
/// forces IC, IC forces complementarity, and both converses fail once `n`
/// is large enough.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub n: usize,
    pub partition_count: usize,
    pub single_ic_iff_discrete: bool,
    pub pair_count: usize,
    pub strongly_complementary_pairs: usize,
    pub ic_pairs: usize,
    pub complementary_pairs: usize,
    pub strong_implies_ic: bool,
    pub ic_implies_complementary: bool,
    pub complementary_not_ic: Option<(Partition, Partition)>,
    pub ic_not_strongly_complementary: Option<(Partition, Partition)>,
}

/// Runs the exhaustive implication sweep over all ordered pairs of
/// partitions of `{1..n}`.
pub fn sweep(n: usize) -> Result<SweepSummary, InfoError> {
    if n == 0 {
        return Err(InfoError::Empty);
    }
    let partitions = set_partitions(n);
    let variables: Vec<RandomVariable> = partitions
        .iter()
        .map(RandomVariable::from_partition)
        .collect();

    let mut single_ok = true;
    for (p, f) in partitions.iter().zip(&variables) {
        let verdict = is_ic(std::slice::from_ref(f))?;
        if verdict.ic != p.is_discrete() {
            single_ok = false;
        }
    }

    let mut strongly = 0usize;
    let mut ic_count = 0usize;
    let mut compl = 0usize;
    let mut strong_implies_ic = true;
    let mut ic_implies_compl = true;
    let mut compl_not_ic = None;
    let mut ic_not_strong = None;
    for (i, f) in variables.iter().enumerate() {
        for (j, g) in variables.iter().enumerate() {
            let pair = [f.clone(), g.clone()];
            let s = is_strongly_complementary(&pair)?;
            let c = is_complementary(&pair)?;
            let ic = is_ic(&pair)?.ic;
            strongly += s as usize;
            ic_count += ic as usize;
            compl += c as usize;
            if s && !ic {
                strong_implies_ic = false;
            }
            if ic && !c {
                ic_implies_compl = false;
            }
            if c && !ic && compl_not_ic.is_none() {
                compl_not_ic = Some((partitions[i].clone(), partitions[j].clone()));
            }
            if ic && !s && ic_not_strong.is_none() {
                ic_not_strong = Some((partitions[i].clone(), partitions[j].clone()));
            }
        }
    }
    Ok(SweepSummary {
        n,
        partition_count: partitions.len(),
        single_ic_iff_discrete: single_ok,
        pair_count: variables.len() * variables.len(),
        strongly_complementary_pairs: strongly,
        ic_pairs: ic_count,
        complementary_pairs: compl,
        strong_implies_ic,
        ic_implies_complementary: ic_implies_compl,
        complementary_not_ic: compl_not_ic,
        ic_not_strongly_complementary: ic_not_strong,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(values: &[&str]) -> RandomVariable {
        RandomVariable::new(values.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn part(n: usize, blocks: &[&[usize]]) -> Partition {
        Partition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn partition_of_level_sets() {
        assert_eq!(
            rv(&["a", "a", "b"]).partition(),
            part(3, &[&[0, 1], &[2]])
        );
        assert!(rv(&["x", "y", "z"]).partition().is_discrete());
        assert_eq!(rv(&["c", "c", "c"]).partition(), Partition::one_block(3));
    }

    #[test]
    fn partition_rejects_bad_blocks() {
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2, 3]]).is_err());
    }

    #[test]
    fn refine_examples() {
        let p = part(3, &[&[0, 1], &[2]]);
        let r = part(3, &[&[0], &[1, 2]]);
        assert_eq!(p.refine(&r).unwrap(), Partition::singletons(3));

        let h1 = part(5, &[&[0, 4], &[1], &[2, 3]]);
        let h2 = part(5, &[&[0], &[1, 2, 3], &[4]]);
        assert_eq!(
            h1.refine(&h2).unwrap(),
            part(5, &[&[0], &[1], &[2, 3], &[4]])
        );

        assert_eq!(p.refine(&p).unwrap(), p);
    }

    #[test]
    fn complementarity_examples() {
        // Both variables glue points 1 and 2: not complementary.
        let f = rv(&["a", "a", "b"]);
        let g = rv(&["c", "c", "d"]);
        assert!(!is_complementary(&[f, g]).unwrap());

        let f = rv(&["a", "a", "b"]);
        let g = rv(&["c", "d", "d"]);
        assert!(is_complementary(&[f, g]).unwrap());

        let h1 = RandomVariable::from_partition(&part(5, &[&[0, 4], &[1], &[2, 3]]));
        let h2 = RandomVariable::from_partition(&part(5, &[&[0], &[1, 2, 3], &[4]]));
        assert!(!is_complementary(&[h1, h2]).unwrap());

        assert!(is_complementary(&[rv(&["x", "y", "z"])]).unwrap());
    }

    #[test]
    fn strong_complementarity_examples() {
        let f = RandomVariable::from_partition(&part(4, &[&[0, 1], &[2], &[3]]));
        let g = RandomVariable::from_partition(&part(4, &[&[0], &[1], &[2, 3]]));
        assert!(is_strongly_complementary(&[f, g]).unwrap());

        let f = RandomVariable::from_partition(&part(4, &[&[0, 1], &[2, 3]]));
        let g = RandomVariable::from_partition(&part(4, &[&[0, 2], &[1, 3]]));
        assert!(!is_strongly_complementary(&[f, g]).unwrap());

        assert!(is_strongly_complementary(&[rv(&["x", "y"])]).unwrap());
    }

    #[test]
    fn ic_two_point_space() {
        // Non-constant on two points is IC; constant is not.
        assert!(is_ic(&[rv(&["a", "b"])]).unwrap().ic);
        let verdict = is_ic(&[rv(&["a", "a"])]).unwrap();
        assert!(!verdict.ic);
        let w = verdict.witness.unwrap();
        assert_ne!(w.mu, w.nu);
    }

    #[test]
    fn ic_three_point_pairs() {
        // Both glue {1,2}: not IC.
        let f = rv(&["a", "a", "b"]);
        let g = rv(&["c", "c", "d"]);
        let verdict = is_ic(&[f.clone(), g.clone()]).unwrap();
        assert!(!verdict.ic);
        let w = verdict.witness.unwrap();
        assert_eq!(f.distribution(&w.mu).unwrap(), f.distribution(&w.nu).unwrap());
        assert_eq!(g.distribution(&w.mu).unwrap(), g.distribution(&w.nu).unwrap());

        // f glues {1,2}, g glues {2,3}: IC.
        let f = rv(&["a", "a", "b"]);
        let g = rv(&["c", "d", "d"]);
        assert!(is_ic(&[f, g]).unwrap().ic);
    }

    #[test]
    fn ic_pair_indicator_kernel() {
        let f = RandomVariable::from_partition(&part(4, &[&[0, 1], &[2, 3]]));
        let g = RandomVariable::from_partition(&part(4, &[&[0, 2], &[1, 3]]));
        let verdict = is_ic(&[f.clone(), g.clone()]).unwrap();
        assert!(!verdict.ic);
        let w = verdict.witness.unwrap();
        // Constructed witness: centered on the uniform state by the kernel
        // vector (1, -1, -1, 1)/8.
        assert_eq!(w.mu, vec![q(3, 8), q(1, 8), q(1, 8), q(3, 8)]);
        assert_eq!(w.nu, vec![q(1, 8), q(3, 8), q(3, 8), q(1, 8)]);
        assert_eq!(f.distribution(&w.mu).unwrap(), f.distribution(&w.nu).unwrap());
        assert_eq!(g.distribution(&w.mu).unwrap(), g.distribution(&w.nu).unwrap());
    }

    #[test]
    fn distribution_examples() {
        let f = rv(&["a", "a", "b"]);
        let mu = [q(1, 2), q(1, 4), q(1, 4)];
        assert_eq!(
            f.distribution(&mu).unwrap(),
            vec![("a".into(), q(3, 4)), ("b".into(), q(1, 4))]
        );
        let inj = rv(&["x", "y", "z"]);
        assert_eq!(
            inj.distribution(&mu).unwrap(),
            vec![
                ("x".into(), q(1, 2)),
                ("y".into(), q(1, 4)),
                ("z".into(), q(1, 4))
            ]
        );
        let konst = rv(&["v", "v", "v"]);
        assert_eq!(
            konst.distribution(&mu).unwrap(),
            vec![("v".into(), Rational::one())]
        );
    }

    #[test]
    fn size_mismatch_error_paths() {
        let p = Partition::singletons(3);
        let r = Partition::singletons(4);
        assert!(matches!(p.refine(&r), Err(InfoError::SizeMismatch(3, 4))));
        let f = rv(&["a", "a", "b"]);
        let g = rv(&["a", "b"]);
        assert!(is_ic(&[f.clone(), g]).is_err());
        assert!(is_ic(&[]).is_err());
        assert!(f.distribution(&[q(1, 2), q(1, 2)]).is_err());
    }

    #[test]
    fn set_partition_counts_are_bell_numbers() {
        let bell = [1usize, 1, 2, 5, 15, 52, 203];
        for n in 1..=6 {
            assert_eq!(set_partitions(n).len(), bell[n]);
        }
    }

    #[test]
    fn sweep_small_cases() {
        let s = sweep(3).unwrap();
        assert!(s.single_ic_iff_discrete);
        assert!(s.strong_implies_ic);
        assert!(s.ic_implies_complementary);
        assert_eq!(s.partition_count, 5);
        assert_eq!(s.pair_count, 25);
        // IC without strong complementarity already exists at n = 3.
        assert!(s.ic_not_strongly_complementary.is_some());

        let s4 = sweep(4).unwrap();
        assert!(s4.complementary_not_ic.is_some());
    }

    #[test]
    fn witness_is_always_valid() {
        // Every non-IC verdict must ship a verifying witness.
        for p in set_partitions(4) {
            for r in set_partitions(4) {
                let f = RandomVariable::from_partition(&p);
                let g = RandomVariable::from_partition(&r);
                let verdict = is_ic(&[f.clone(), g.clone()]).unwrap();
                if let Some(w) = verdict.witness {
                    assert!(!verdict.ic);
                    assert_ne!(w.mu, w.nu);
                    assert!(w.mu.iter().sum::<Rational>().is_one());
                    assert!(w.nu.iter().sum::<Rational>().is_one());
                    assert!(w.mu.iter().all(|x| !x.is_negative()));
                    assert!(w.nu.iter().all(|x| !x.is_negative()));
                    assert_eq!(
                        f.distribution(&w.mu).unwrap(),
                        f.distribution(&w.nu).unwrap()
                    );
                    assert_eq!(
                        g.distribution(&w.mu).unwrap(),
                        g.distribution(&w.nu).unwrap()
                    );
                }
            }
        }
    }
}
