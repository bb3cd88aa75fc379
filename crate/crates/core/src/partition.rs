//! Integer partitions: parsing, run encoding, dominance, and the r/s indices.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Upper bound on the number of parts accepted by the parser.
const MAX_PARTS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-positive value at position {pos}")]
    NonPositive { pos: usize },
    #[error("increasing sequence at position {pos}")]
    Increasing { pos: usize },
    #[error("partitions of different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("operation requires a nonempty partition")]
    Empty,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("invalid rank profile: {0}")]
    InvalidRankProfile(String),
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

/// Run-length encoding of a partition.
///
/// Run indices are 1-based in the accessor methods: run `i` has value
/// `value(i)` and occupies part positions `q(i-1)+1 ..= q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunEncoding {
    pub values: Vec<usize>,
    pub cumulative: Vec<usize>,
}

/// Contiguous almost-rectangular segments, as 0-based half-open ranges of part positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArDecomposition {
    pub segments: Vec<Range<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl RunEncoding {
    pub fn u(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    /// `q(0) = 0`.
    pub fn q(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.cumulative[i - 1]
        }
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.q(i) - self.q(i - 1)
    }

    /// Expand back into parts.
    pub fn to_partition(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.q(self.u()));
        for i in 1..=self.u() {
            parts.extend(std::iter::repeat(self.value(i)).take(self.multiplicity(i)));
        }
        Partition::from_sorted_unchecked(parts)
    }
}

impl Partition {
    /// Validate and wrap a weakly decreasing sequence of positive parts.
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        for (k, &p) in parts.iter().enumerate() {
            if p == 0 {
                return Err(PartitionError::NonPositive { pos: k });
            }
            if k > 0 && p > parts[k - 1] {
                return Err(PartitionError::Increasing { pos: k });
            }
        }
        Ok(Self::from_sorted_unchecked(parts))
    }

    /// Sort descending and drop zeros.
    pub fn normalized(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted_unchecked(parts)
    }

    fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        let n = parts.iter().sum();
        Partition { parts, n }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Largest part, 0 for the empty partition.
    pub fn first(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn runs(&self) -> RunEncoding {
        let mut values = Vec::new();
        let mut cumulative = Vec::new();
        for (k, &p) in self.parts.iter().enumerate() {
            if values.last() == Some(&p) {
                *cumulative.last_mut().unwrap() = k + 1;
            } else {
                values.push(p);
                cumulative.push(k + 1);
            }
        }
        RunEncoding { values, cumulative }
    }

    pub fn dominance_cmp(&self, other: &Partition) -> Result<Dominance, PartitionError> {
        if self.n != other.n {
            return Err(PartitionError::SizeMismatch(self.n, other.n));
        }
        let len = self.len().max(other.len());
        let (mut a, mut b) = (0usize, 0usize);
        let (mut less, mut greater) = (false, false);
        for k in 0..len {
            a += self.parts.get(k).copied().unwrap_or(0);
            b += other.parts.get(k).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Less => less = true,
                Ordering::Greater => greater = true,
                Ordering::Equal => {}
            }
        }
        Ok(match (less, greater) {
            (false, false) => Dominance::Equal,
            (true, false) => Dominance::Less,
            (false, true) => Dominance::Greater,
            (true, true) => Dominance::Incomparable,
        })
    }

    /// `self ⊴ other` in dominance order. Partitions of different sizes are never comparable.
    pub fn dominated_by(&self, other: &Partition) -> bool {
        matches!(
            self.dominance_cmp(other),
            Ok(Dominance::Less) | Ok(Dominance::Equal)
        )
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.first();
        let parts = (1..=width)
            .map(|c| self.parts.iter().take_while(|&&p| p >= c).count())
            .collect();
        Self::from_sorted_unchecked(parts)
    }

    pub fn is_almost_rectangular(&self) -> Result<bool, PartitionError> {
        match (self.parts.first(), self.parts.last()) {
            (Some(&a), Some(&b)) => Ok(a - b <= 1),
            _ => Err(PartitionError::Empty),
        }
    }

    /// Minimal number of contiguous almost-rectangular segments, with a greedy witness.
    pub fn r_index(&self) -> Result<(usize, ArDecomposition), PartitionError> {
        if self.is_empty() {
            return Err(PartitionError::Empty);
        }
        let mut segments = Vec::new();
        let mut start = 0;
        while start < self.len() {
            let head = self.parts[start];
            let mut end = start + 1;
            while end < self.len() && head - self.parts[end] <= 1 {
                end += 1;
            }
            segments.push(start..end);
            start = end;
        }
        Ok((segments.len(), ArDecomposition { segments }))
    }

    /// Largest number of parts lying in a window `{v, v+1}`.
    pub fn s_index(&self) -> Result<usize, PartitionError> {
        if self.is_empty() {
            return Err(PartitionError::Empty);
        }
        let runs = self.runs();
        let best = (1..=runs.u())
            .map(|i| {
                let mut count = runs.multiplicity(i);
                if i < runs.u() && runs.value(i) - runs.value(i + 1) == 1 {
                    count += runs.multiplicity(i + 1);
                }
                count
            })
            .max()
            .unwrap_or(0);
        Ok(best)
    }

    /// Segment sums of an almost-rectangular decomposition, sorted decreasingly.
    pub fn tilde(&self, d: &ArDecomposition) -> Result<Partition, PartitionError> {
        let mut expected = 0;
        let mut sums = Vec::with_capacity(d.segments.len());
        for seg in &d.segments {
            if seg.start != expected || seg.end <= seg.start || seg.end > self.len() {
                return Err(PartitionError::InvalidDecomposition(format!(
                    "segment {seg:?} does not continue a cover of 0..{}",
                    self.len()
                )));
            }
            let slice = &self.parts[seg.clone()];
            if slice[0] - slice[slice.len() - 1] > 1 {
                return Err(PartitionError::InvalidDecomposition(format!(
                    "segment {seg:?} is not almost rectangular"
                )));
            }
            sums.push(slice.iter().sum());
            expected = seg.end;
        }
        if expected != self.len() {
            return Err(PartitionError::InvalidDecomposition(
                "segments do not cover every part".into(),
            ));
        }
        Ok(Self::normalized(sums))
    }

    /// Jordan type of the `s`-th power of a single `n`-block.
    ///
    /// # Panics
    /// If `s == 0`.
    pub fn jordan_power_type(n: usize, s: usize) -> Partition {
        assert!(s >= 1, "power must be positive");
        let (q, r) = (n / s, n % s);
        let mut parts = vec![q + 1; r];
        parts.extend(std::iter::repeat(q).take(s - r));
        Self::normalized(parts)
    }

    /// `r_m = Σ max(μ_i − m, 0)` for `m = 0..=μ₁`.
    pub fn rank_profile(&self) -> Vec<usize> {
        (0..=self.first())
            .map(|m| self.parts.iter().map(|&p| p.saturating_sub(m)).sum())
            .collect()
    }

    /// Inverse of [`Partition::rank_profile`]; trailing zeros are accepted.
    pub fn from_rank_profile(ranks: &[usize]) -> Result<Partition, PartitionError> {
        let bad = |msg: &str| Err(PartitionError::InvalidRankProfile(msg.to_string()));
        if ranks.last() != Some(&0) {
            return bad("profile must end at 0");
        }
        let zero_at = ranks.iter().position(|&r| r == 0).unwrap();
        if ranks[zero_at..].iter().any(|&r| r != 0) {
            return bad("profile must stay at 0 once reached");
        }
        let mut diffs = Vec::with_capacity(zero_at);
        for w in ranks[..=zero_at].windows(2) {
            if w[0] <= w[1] {
                return bad("profile is not strictly decreasing");
            }
            diffs.push(w[0] - w[1]);
        }
        if diffs.windows(2).any(|w| w[0] < w[1]) {
            return bad("successive drops must be weakly decreasing");
        }
        Ok(Self::from_sorted_unchecked(diffs).conjugate())
    }

    /// Subtract `h` from every part, dropping parts that vanish.
    pub fn lowered(&self, h: usize) -> Partition {
        Self::from_sorted_unchecked(
            self.parts
                .iter()
                .filter(|&&p| p > h)
                .map(|&p| p - h)
                .collect(),
        )
    }

    /// Comma-separated parts without exponents.
    pub fn plain(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(usize::to_string).collect();
        parts.join(",")
    }

    /// Every partition of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition::from_sorted_unchecked(cur.clone()));
                return;
            }
            for p in (1..=rest.min(cap)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on parts; a total order for use in ordered collections, not dominance.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("()");
        }
        let runs = self.runs();
        for i in 1..=runs.u() {
            if i > 1 {
                f.write_str(",")?;
            }
            match runs.multiplicity(i) {
                1 => write!(f, "{}", runs.value(i))?,
                m => write!(f, "{}^{}", runs.value(i), m)?,
            }
        }
        Ok(())
    }
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl Scanner<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn int(&mut self) -> Result<(usize, usize), PartitionError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            let msg = match self.peek() {
                Some('-') => return Err(PartitionError::NonPositive { pos: start }),
                Some(c) => format!("expected integer, found '{c}'"),
                None => "expected integer".to_string(),
            };
            return Err(PartitionError::Syntax { pos: start, msg });
        }
        let value = self.text[start..self.pos]
            .parse()
            .map_err(|_| PartitionError::Syntax {
                pos: start,
                msg: "integer out of range".into(),
            })?;
        Ok((start, value))
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// Grammar: `part ("," part)*`, `part = INT ("^" INT)?`, whitespace ignored.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut sc = Scanner { text, pos: 0 };
        let mut parts: Vec<usize> = Vec::new();
        loop {
            let (pos, value) = sc.int()?;
            if value == 0 {
                return Err(PartitionError::NonPositive { pos });
            }
            sc.skip_ws();
            let mut count = 1;
            if sc.peek() == Some('^') {
                sc.pos += 1;
                let (epos, e) = sc.int()?;
                if e == 0 {
                    return Err(PartitionError::NonPositive { pos: epos });
                }
                count = e;
                sc.skip_ws();
            }
            if parts.last().is_some_and(|&last| value > last) {
                return Err(PartitionError::Increasing { pos });
            }
            if parts.len() + count > MAX_PARTS {
                return Err(PartitionError::Syntax {
                    pos,
                    msg: "too many parts".into(),
                });
            }
            parts.extend(std::iter::repeat(value).take(count));
            match sc.peek() {
                None => break,
                Some(',') => sc.pos += 1,
                Some(c) => {
                    return Err(PartitionError::Syntax {
                        pos: sc.pos,
                        msg: format!("unexpected '{c}'"),
                    })
                }
            }
        }
        Ok(Self::from_sorted_unchecked(parts))
    }
}
