//! The ω₁ maximization and the recursion `Q(B) = (ω₁, Q(B̂))`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OblakError {
    #[error("({i},{eps}) is not a candidate of {partition}")]
    NotACandidate {
        partition: Partition,
        i: usize,
        eps: u8,
    },
}

/// A legal pair `(i, ε)` and its value `2q_{i−1} + μ_{q_i}(q_i − q_{i−1}) + ε·μ_{q_{i+1}}(q_{i+1} − q_i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct OblakCandidate {
    pub i: usize,
    pub eps: u8,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OblakStep {
    pub omega1: usize,
    pub i_tilde: usize,
    pub eps_tilde: u8,
    pub b_hat: Partition,
}

/// How to choose among several maximizing candidates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Smallest `i`, then `ε = 1`.
    #[default]
    SmallestRun,
    /// Largest `i`, then `ε = 0`.
    LargestRun,
}

/// One level of the recursion, as emitted by `--trace`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    pub level: usize,
    pub partition: Partition,
    pub candidates: Vec<OblakCandidate>,
    pub omega1: usize,
    pub i_tilde: usize,
    pub eps_tilde: u8,
    pub b_hat: Partition,
}

/// Result of branching over every maximizer at every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllChoices {
    pub results: BTreeSet<Partition>,
    /// Number of distinct root-to-leaf choice sequences.
    pub branches: u64,
}

pub fn candidates(b: &Partition) -> Vec<OblakCandidate> {
    let runs = b.runs();
    let u = runs.u();
    let mut out = Vec::with_capacity(2 * u);
    for i in 1..=u {
        let base = 2 * runs.q(i - 1) + runs.value(i) * runs.multiplicity(i);
        out.push(OblakCandidate { i, eps: 0, value: base });
        if i < u && runs.value(i) - runs.value(i + 1) == 1 {
            let value = base + runs.value(i + 1) * runs.multiplicity(i + 1);
            out.push(OblakCandidate { i, eps: 1, value });
        }
    }
    out
}

/// Maximum candidate value; 0 for the empty partition.
pub fn omega1(b: &Partition) -> usize {
    candidates(b).iter().map(|c| c.value).max().unwrap_or(0)
}

/// All candidates attaining ω₁.
pub fn maximizers(b: &Partition) -> Vec<OblakCandidate> {
    let cands = candidates(b);
    let best = cands.iter().map(|c| c.value).max().unwrap_or(0);
    cands.into_iter().filter(|c| c.value == best).collect()
}

/// `None` for the empty partition.
pub fn select_step(b: &Partition, policy: TieBreak) -> Option<OblakStep> {
    let maxes = maximizers(b);
    let chosen = match policy {
        TieBreak::SmallestRun => maxes.iter().min_by_key(|c| (c.i, 1 - c.eps)),
        TieBreak::LargestRun => maxes.iter().max_by_key(|c| (c.i, 1 - c.eps)),
    }?;
    let b_hat = hat_of(b, chosen.i, chosen.eps).expect("maximizer is a candidate");
    Some(OblakStep {
        omega1: chosen.value,
        i_tilde: chosen.i,
        eps_tilde: chosen.eps,
        b_hat,
    })
}

/// Remove runs `i` and `i+ε`, lower the parts of earlier runs by 2, drop zeros.
pub fn hat_of(b: &Partition, i: usize, eps: u8) -> Result<Partition, OblakError> {
    let legal = candidates(b).iter().any(|c| c.i == i && c.eps == eps);
    if !legal {
        return Err(OblakError::NotACandidate {
            partition: b.clone(),
            i,
            eps,
        });
    }
    let runs = b.runs();
    let mut parts = Vec::with_capacity(b.len());
    for k in 1..=runs.u() {
        if k == i || (eps == 1 && k == i + 1) {
            continue;
        }
        let v = if k < i { runs.value(k) - 2 } else { runs.value(k) };
        parts.extend(std::iter::repeat(v).take(runs.multiplicity(k)));
    }
    Ok(Partition::normalized(parts))
}

pub fn q_of(b: &Partition) -> Partition {
    q_of_with(b, TieBreak::default())
}

pub fn q_of_with(b: &Partition, policy: TieBreak) -> Partition {
    let mut parts = Vec::new();
    let mut cur = b.clone();
    while let Some(step) = select_step(&cur, policy) {
        parts.push(step.omega1);
        cur = step.b_hat;
    }
    Partition::new(parts).expect("ω₁ is non-increasing along the recursion")
}

/// Every recursion level under the default policy.
pub fn q_trace(b: &Partition) -> Vec<TraceLevel> {
    let mut levels = Vec::new();
    let mut cur = b.clone();
    while let Some(step) = select_step(&cur, TieBreak::default()) {
        levels.push(TraceLevel {
            level: levels.len(),
            candidates: candidates(&cur),
            partition: cur,
            omega1: step.omega1,
            i_tilde: step.i_tilde,
            eps_tilde: step.eps_tilde,
            b_hat: step.b_hat.clone(),
        });
        cur = step.b_hat;
    }
    levels
}

pub fn q_all_choices(b: &Partition) -> AllChoices {
    fn rec(b: &Partition, memo: &mut HashMap<Partition, AllChoices>) -> AllChoices {
        if b.is_empty() {
            return AllChoices {
                results: BTreeSet::from([Partition::empty()]),
                branches: 1,
            };
        }
        if let Some(hit) = memo.get(b) {
            return hit.clone();
        }
        let mut results = BTreeSet::new();
        let mut branches = 0;
        for c in maximizers(b) {
            let hat = hat_of(b, c.i, c.eps).expect("maximizer is a candidate");
            let sub = rec(&hat, memo);
            branches += sub.branches;
            for tail in sub.results {
                let mut parts = vec![c.value];
                parts.extend_from_slice(tail.parts());
                results.insert(Partition::normalized(parts));
            }
        }
        let out = AllChoices { results, branches };
        memo.insert(b.clone(), out.clone());
        out
    }
    rec(b, &mut HashMap::new())
}
