//! Exhaustive property sweep of `Q` over all partitions up to a size.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::oblak::{omega1, q_all_choices, q_of, select_step, TieBreak};
use crate::partition::Partition;
use crate::rb_graph::{assign_rows, build_graph, delta_circle};

/// Failures recorded verbatim per check; later ones are only counted.
const KEEP_FAILURES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepCheck {
    /// `|Q(B)| = |B|`.
    Sum,
    /// Successive parts of `Q(B)` differ by at least 2.
    Gap,
    /// `Q(Q(B)) = Q(B)`.
    Idempotent,
    /// `Q(B) = B` iff successive parts of `B` differ by at least 2.
    FixedPoint,
    /// First part of `Q(B)` is `ω₁(B)`.
    Head,
    /// `Q(B)` has `r_B` parts.
    Length,
    /// Almost rectangular `B` gives `Q(B) = (n)`.
    AlmostRect,
    /// `|Δ°| = ω₁`.
    DeltaCircle,
    /// Every tie-break order gives the same `Q(B)`.
    Uniqueness,
    /// The longest path in `R_B` has `ω₁` vertices.
    Rows,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 10] = [
        SweepCheck::Sum,
        SweepCheck::Gap,
        SweepCheck::Idempotent,
        SweepCheck::FixedPoint,
        SweepCheck::Head,
        SweepCheck::Length,
        SweepCheck::AlmostRect,
        SweepCheck::DeltaCircle,
        SweepCheck::Uniqueness,
        SweepCheck::Rows,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepCheck::Sum => "sum",
            SweepCheck::Gap => "gap",
            SweepCheck::Idempotent => "idempotent",
            SweepCheck::FixedPoint => "fixed-point",
            SweepCheck::Head => "head",
            SweepCheck::Length => "length",
            SweepCheck::AlmostRect => "almost-rect",
            SweepCheck::DeltaCircle => "delta-circle",
            SweepCheck::Uniqueness => "uniqueness",
            SweepCheck::Rows => "rows",
        }
    }

    /// `None` when the check passes.
    fn run(self, b: &Partition, q: &Partition) -> Option<String> {
        let gaps_ok = |p: &Partition| p.parts().windows(2).all(|w| w[0] >= w[1] + 2);
        let ok = match self {
            SweepCheck::Sum => q.n() == b.n(),
            SweepCheck::Gap => gaps_ok(q),
            SweepCheck::Idempotent => q_of(q) == *q,
            SweepCheck::FixedPoint => (q == b) == gaps_ok(b),
            SweepCheck::Head => q.first() == omega1(b),
            SweepCheck::Length => q.len() == b.r_index().map_or(0, |(r, _)| r),
            SweepCheck::AlmostRect => {
                !b.is_almost_rectangular().unwrap_or(false) || q.parts() == [b.n()]
            }
            SweepCheck::DeltaCircle => {
                let step = select_step(b, TieBreak::default()).expect("nonempty");
                delta_circle(b, &step).len() == step.omega1
            }
            SweepCheck::Uniqueness => q_all_choices(b).results.len() == 1,
            SweepCheck::Rows => assign_rows(&build_graph(b)).map_or(false, |t| t.max_row + 1 == omega1(b)),
        };
        (!ok).then(|| format!("B = {}, Q(B) = {}", b.plain(), q.plain()))
    }
}

impl fmt::Display for SweepCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepCheck {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub check: SweepCheck,
    pub checked: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub max_n: usize,
    pub partitions: usize,
    pub results: Vec<CheckResult>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failed == 0)
    }
}

/// Run `checks` on every partition of every `n` in `1..=max_n`.
pub fn property_sweep(max_n: usize, checks: &[SweepCheck]) -> SweepReport {
    let mut results: Vec<CheckResult> = checks
        .iter()
        .map(|&check| CheckResult {
            check,
            checked: 0,
            failed: 0,
            failures: Vec::new(),
        })
        .collect();
    let mut partitions = 0;
    for n in 1..=max_n {
        for b in Partition::all(n) {
            partitions += 1;
            let q = q_of(&b);
            for r in results.iter_mut() {
                r.checked += 1;
                if let Some(msg) = r.check.run(&b, &q) {
                    r.failed += 1;
                    if r.failures.len() < KEEP_FAILURES {
                        r.failures.push(msg);
                    }
                }
            }
        }
    }
    SweepReport {
        max_n,
        partitions,
        results,
    }
}
