//! Randomized and exhaustive checks of `Q(B)` against exact linear algebra.
//!
//! Sample `s` of an experiment with master seed `seed` always reads from
//! `rng::stream(seed, s)`, so reports are reproducible.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::centralizer::{
    jordan_operator, nilpotent_centralizer_sample, ordering, se_pattern, sn_pattern, PatternMatrix,
};
use crate::field::{FieldMatrix, LinalgError, PrimeModulus};
use crate::oblak::{omega1, q_of};
use crate::partition::{Dominance, Partition};
use crate::rng::stream;

/// Enumeration budget for [`exhaustive_max_type`]: at most `2^24` assignments.
pub const EXHAUSTIVE_BUDGET_BITS: u32 = 24;

/// Primes tried in turn by [`exhaustive_ladder`].
pub const LADDER: [u32; 3] = [3, 5, 7];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("the empty partition has nothing to sample")]
    EmptyPartition,
    #[error("at least one sample is required")]
    NoSamples,
    #[error("{coords} coordinates over GF({prime}) exceed the enumeration budget of 2^{EXHAUSTIVE_BUDGET_BITS}")]
    BudgetExceeded { coords: usize, prime: u32 },
    #[error("pattern has size {found}, partition has size {expected}")]
    PatternSize { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    /// Triangular nilpotent subalgebra of the centralizer, Toeplitz ties kept.
    Sn,
    /// Same zero pattern with every tie broken.
    Se,
    /// A pattern supplied by the caller.
    File,
}

impl SampleKind {
    /// The built-in pattern; `None` for [`SampleKind::File`].
    pub fn pattern(self, b: &Partition) -> Option<PatternMatrix> {
        match self {
            SampleKind::Sn => Some(sn_pattern(b)),
            SampleKind::Se => Some(se_pattern(b)),
            SampleKind::File => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

impl Violation {
    fn new(kind: &str, detail: String) -> Self {
        Violation {
            kind: kind.to_string(),
            detail,
        }
    }
}

/// Elements of `types` not strictly dominated by another element.
pub fn maximal_elements<'a>(types: impl IntoIterator<Item = &'a Partition> + Clone) -> Vec<Partition> {
    types
        .clone()
        .into_iter()
        .filter(|t| {
            !types
                .clone()
                .into_iter()
                .any(|o| matches!(t.dominance_cmp(o), Ok(Dominance::Less)))
        })
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub partition: Partition,
    pub kind: SampleKind,
    pub prime: u32,
    pub samples: usize,
    pub seed: u64,
    pub q: Partition,
    /// Observed Jordan type and how often.
    pub observed: BTreeMap<Partition, usize>,
    /// Maximal observed types under dominance.
    pub maximal: Vec<Partition>,
    /// Samples whose nilpotency index equals `ω₁`.
    pub index_attained: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn attained(&self) -> bool {
        self.observed.contains_key(&self.q)
    }

    /// The unique maximal observed type, if there is one.
    pub fn max_observed(&self) -> Option<&Partition> {
        match self.maximal.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    /// No violations and `Q(B)` is the unique maximum observed.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.max_observed() == Some(&self.q)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "partition": self.partition,
            "kind": self.kind,
            "prime": self.prime,
            "samples": self.samples,
            "q": self.q,
            "max_observed": self.max_observed(),
            "maximal": self.maximal,
            "attained": self.attained(),
            "violations": self.violations,
            "seed": self.seed,
        })
    }
}

/// Draw `k` instantiations of the SN (or SE) pattern and record their Jordan types.
///
/// Flags a violation for any type not dominated by `Q(B)`, any nilpotency
/// index above `ω₁`, and (for SN) any sample not commuting with `J`.
pub fn sample_max_type(
    b: &Partition,
    m: PrimeModulus,
    k: usize,
    seed: u64,
    kind: SampleKind,
) -> Result<VerificationReport, VerifyError> {
    let pattern = kind.pattern(b).ok_or(VerifyError::PatternSize { expected: b.n(), found: 0 })?;
    sample_pattern(b, &pattern, m, k, seed, kind)
}

/// [`sample_max_type`] for an arbitrary pattern of size `|B|`.
///
/// Commutation with `J` is checked only for [`SampleKind::Sn`].
pub fn sample_pattern(
    b: &Partition,
    pattern: &PatternMatrix,
    m: PrimeModulus,
    k: usize,
    seed: u64,
    kind: SampleKind,
) -> Result<VerificationReport, VerifyError> {
    if b.is_empty() {
        return Err(VerifyError::EmptyPartition);
    }
    if k == 0 {
        return Err(VerifyError::NoSamples);
    }
    if pattern.n() != b.n() {
        return Err(VerifyError::PatternSize { expected: b.n(), found: pattern.n() });
    }
    let q = q_of(b);
    let w = omega1(b);
    let j = jordan_operator(b, &ordering(b, pattern.ordering), m);
    let mut observed = BTreeMap::new();
    let mut violations = Vec::new();
    let mut index_attained = 0;
    for s in 0..k {
        let x = pattern.instantiate_with(m, &mut stream(seed, s as u64));
        if kind == SampleKind::Sn && !x.commutes_with(&j)? {
            violations.push(Violation::new("commute", format!("sample {s} does not commute with J")));
        }
        let t = match x.jordan_type() {
            Ok(t) => t,
            Err(LinalgError::NotNilpotent) => {
                violations.push(Violation::new("nilpotent", format!("sample {s} is not nilpotent")));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let index = t.first();
        if index > w {
            violations.push(Violation::new("index", format!("sample {s} has index {index} > ω₁ = {w}")));
        }
        if index == w {
            index_attained += 1;
        }
        if !t.dominated_by(&q) {
            violations.push(Violation::new("dominance", format!("sample {s} has type {} not below {}", t.plain(), q.plain())));
        }
        *observed.entry(t).or_insert(0) += 1;
    }
    let maximal = maximal_elements(observed.keys());
    Ok(VerificationReport {
        partition: b.clone(),
        kind,
        prime: m.p(),
        samples: k,
        seed,
        q,
        observed,
        maximal,
        index_attained,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub partition: Partition,
    pub prime: u32,
    pub assignments: u64,
    pub q: Partition,
    pub maximal: Vec<Partition>,
    pub attained: bool,
    pub violations: Vec<Violation>,
}

impl ExhaustiveReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "partition": self.partition,
            "prime": self.prime,
            "assignments": self.assignments,
            "q": self.q,
            "maximal": self.maximal,
            "attained": self.attained,
            "violations": self.violations,
        })
    }
}

fn assignment_count(coords: usize, prime: u32) -> Option<u64> {
    let total = (prime as u64).checked_pow(coords as u32)?;
    (total <= 1 << EXHAUSTIVE_BUDGET_BITS).then_some(total)
}

/// Enumerate every SN assignment over GF(p).
pub fn exhaustive_max_type(b: &Partition, m: PrimeModulus) -> Result<ExhaustiveReport, VerifyError> {
    if b.is_empty() {
        return Err(VerifyError::EmptyPartition);
    }
    let pattern = sn_pattern(b);
    let d = pattern.coordinate_count();
    let total = assignment_count(d, m.p()).ok_or(VerifyError::BudgetExceeded { coords: d, prime: m.p() })?;
    let q = q_of(b);
    let mut seen: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut violations = Vec::new();
    let mut values = vec![0u32; d];
    for _ in 0..total {
        let x = pattern.instantiate_values(m, &values);
        match x.jordan_type() {
            Ok(t) => {
                if !t.dominated_by(&q) && !seen.contains_key(&t) {
                    violations.push(Violation::new("dominance", format!("{values:?} has type {}", t.plain())));
                }
                *seen.entry(t).or_insert(0) += 1;
            }
            Err(LinalgError::NotNilpotent) => {
                violations.push(Violation::new("nilpotent", format!("{values:?} is not nilpotent")));
            }
            Err(e) => return Err(e.into()),
        }
        for v in values.iter_mut() {
            *v += 1;
            if *v < m.p() {
                break;
            }
            *v = 0;
        }
    }
    Ok(ExhaustiveReport {
        partition: b.clone(),
        prime: m.p(),
        assignments: total,
        attained: seen.contains_key(&q),
        maximal: maximal_elements(seen.keys()),
        q,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderReport {
    pub runs: Vec<ExhaustiveReport>,
    /// Primes skipped because they exceed the budget.
    pub skipped: Vec<u32>,
}

impl LadderReport {
    pub fn attained_at(&self) -> Option<u32> {
        self.runs.iter().find(|r| r.attained).map(|r| r.prime)
    }

    pub fn violations(&self) -> usize {
        self.runs.iter().map(|r| r.violations.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0 && self.attained_at().is_some()
    }
}

/// Run [`exhaustive_max_type`] up the prime ladder until `Q(B)` is attained.
pub fn exhaustive_ladder(b: &Partition, primes: &[u32]) -> Result<LadderReport, VerifyError> {
    let mut runs = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        let m = PrimeModulus::new(p as u64)?;
        match exhaustive_max_type(b, m) {
            Ok(r) => {
                let done = r.attained;
                runs.push(r);
                if done {
                    break;
                }
            }
            Err(VerifyError::BudgetExceeded { .. }) => skipped.push(p),
            Err(e) => return Err(e),
        }
    }
    Ok(LadderReport { runs, skipped })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankMismatch {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub sn_rank: usize,
    pub se_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEquivalenceReport {
    pub trials: usize,
    pub full_rank_sn: usize,
    pub full_rank_se: usize,
    pub mismatches: Vec<RankMismatch>,
}

fn random_subset<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Compare submatrix ranks of SN and SE instantiations on random row/column subsets.
///
/// Each side's generic rank is estimated as the larger rank over two
/// independent instantiations, so a single unlucky draw cannot register as a
/// mismatch.
pub fn rank_pattern_equivalence(
    b: &Partition,
    m: PrimeModulus,
    trials: usize,
    seed: u64,
) -> Result<RankEquivalenceReport, VerifyError> {
    if b.is_empty() {
        return Err(VerifyError::EmptyPartition);
    }
    let sn = sn_pattern(b);
    let se = se_pattern(b);
    let draws = |p: &PatternMatrix, base: u64| -> [FieldMatrix; 2] {
        [
            p.instantiate_with(m, &mut stream(seed, base)),
            p.instantiate_with(m, &mut stream(seed, base + 1)),
        ]
    };
    let sn_x = draws(&sn, 0);
    let se_x = draws(&se, 2);
    let rank = |xs: &[FieldMatrix; 2], rows: &[usize], cols: &[usize]| {
        xs.iter().map(|x| x.submatrix(rows, cols).rank()).max().unwrap()
    };
    let all: Vec<usize> = (0..b.n()).collect();
    let full_rank_sn = rank(&sn_x, &all, &all);
    let full_rank_se = rank(&se_x, &all, &all);
    let mut rng = stream(seed, 4);
    let mut mismatches = Vec::new();
    for _ in 0..trials {
        let rows = random_subset(b.n(), &mut rng);
        let cols = random_subset(b.n(), &mut rng);
        let (a, c) = (rank(&sn_x, &rows, &cols), rank(&se_x, &rows, &cols));
        if a != c {
            mismatches.push(RankMismatch { rows, cols, sn_rank: a, se_rank: c });
        }
    }
    Ok(RankEquivalenceReport {
        trials,
        full_rank_sn,
        full_rank_se,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCountReport {
    pub expected: usize,
    pub samples: usize,
    /// Number of Jordan blocks and how many samples had it.
    pub counts: BTreeMap<usize, usize>,
}

impl BlockCountReport {
    pub fn attained_fraction(&self) -> f64 {
        self.counts.get(&self.expected).copied().unwrap_or(0) as f64 / self.samples as f64
    }

    /// No sample has fewer blocks than `r_B`.
    pub fn lower_bound_holds(&self) -> bool {
        self.counts.keys().all(|&c| c >= self.expected)
    }
}

/// Block counts of random nilpotent centralizer elements against `r_B`.
pub fn prop_r1_check(b: &Partition, m: PrimeModulus, k: usize, seed: u64) -> Result<BlockCountReport, VerifyError> {
    if b.is_empty() {
        return Err(VerifyError::EmptyPartition);
    }
    let (expected, _) = b.r_index().expect("nonempty");
    let mut counts = BTreeMap::new();
    for s in 0..k {
        let x = nilpotent_centralizer_sample(b, m, &mut stream(seed, s as u64));
        *counts.entry(x.jordan_type()?.len()).or_insert(0) += 1;
    }
    Ok(BlockCountReport {
        expected,
        samples: k,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerRankViolation {
    pub sample: usize,
    /// `"sn"` or `"centralizer"`.
    pub source: &'static str,
    pub m: usize,
    pub rank: usize,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerRankReport {
    pub s: usize,
    pub checked: usize,
    pub violations: Vec<PowerRankViolation>,
}

/// `rank (A^{s_B})^m ≤ rank J^m` on random nilpotent centralizer elements and SN samples.
pub fn prop_r2_check(b: &Partition, m: PrimeModulus, k: usize, seed: u64) -> Result<PowerRankReport, VerifyError> {
    if b.is_empty() {
        return Err(VerifyError::EmptyPartition);
    }
    let s = b.s_index().expect("nonempty");
    let profile = b.rank_profile();
    let sn = sn_pattern(b);
    let j = jordan_operator(b, &ordering(b, sn.ordering), m);
    let mut violations = Vec::new();
    let mut checked = 0;
    for idx in 0..k {
        let samples = [
            ("sn", sn.instantiate_with(m, &mut stream(seed, 2 * idx as u64))),
            (
                "centralizer",
                nilpotent_centralizer_sample(b, m, &mut stream(seed, 2 * idx as u64 + 1)),
            ),
        ];
        for (source, a) in samples {
            debug_assert!(a.commutes_with(&j).unwrap() || source == "centralizer");
            let base = a.pow(s)?;
            let mut power = base.clone();
            for step in 1..=profile.len() {
                let rank = power.rank();
                let bound = profile.get(step).copied().unwrap_or(0);
                checked += 1;
                if rank > bound {
                    violations.push(PowerRankViolation { sample: idx, source, m: step, rank, bound });
                }
                if rank == 0 {
                    break;
                }
                power = power.mul(&base)?;
            }
        }
    }
    Ok(PowerRankReport { s, checked, violations })
}
