//! The labelled basis `Δ_B`, its two orderings, the Jordan operator, and the
//! symbolic patterns of the centralizer and of its maximal nilpotent
//! subalgebras with Toeplitz ties (`sn`) and without them (`se`).
//!
//! A basis vector `v_{μ,j}^l` is stored as `(i, j, l)` with `μ` the value of
//! run `i`. The Jordan operator raises `l`: `J v^l = v^{l+1}`, `J v^μ = 0`.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldMatrix, PrimeModulus};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("malformed pattern: {0}")]
    Malformed(String),
    #[error("pattern json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisVector {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    pub mu: usize,
}

impl BasisVector {
    /// Index of the `≺` group, `μ − l`.
    pub fn group(&self) -> usize {
        self.mu - self.l
    }

    pub fn label(&self) -> String {
        format!("v_{{{},{}}}^{}", self.mu, self.j, self.l)
    }

    /// The same block one step down (`l − 1`), if any.
    pub fn lowered(&self) -> Option<BasisVector> {
        (self.l > 1).then(|| BasisVector { l: self.l - 1, ..*self })
    }
}

impl fmt::Display for BasisVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderingKind {
    #[serde(rename = "delta")]
    DeltaB,
    #[serde(rename = "prec")]
    DeltaBPrec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisOrdering {
    pub kind: OrderingKind,
    pub order: Vec<BasisVector>,
    index: HashMap<BasisVector, usize>,
}

impl BasisOrdering {
    fn new(kind: OrderingKind, order: Vec<BasisVector>) -> Self {
        let index = order.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        BasisOrdering { kind, order, index }
    }

    pub fn position(&self, v: &BasisVector) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// `Δ_B` ordered by `(i asc, j desc, l desc)`.
pub fn delta_basis(b: &Partition) -> Vec<BasisVector> {
    let runs = b.runs();
    let mut out = Vec::with_capacity(b.n());
    for i in 1..=runs.u() {
        let mu = runs.value(i);
        for j in (1..=runs.multiplicity(i)).rev() {
            for l in (1..=mu).rev() {
                out.push(BasisVector { i, j, l, mu });
            }
        }
    }
    out
}

pub fn delta_ordering(b: &Partition) -> BasisOrdering {
    BasisOrdering::new(OrderingKind::DeltaB, delta_basis(b))
}

/// `Δ_{B,≺}`: sorted by `(μ − l, i, j)`, all ascending.
pub fn prec_ordering(b: &Partition) -> BasisOrdering {
    let mut order = delta_basis(b);
    order.sort_by_key(|v| (v.group(), v.i, v.j));
    BasisOrdering::new(OrderingKind::DeltaBPrec, order)
}

pub fn ordering(b: &Partition, kind: OrderingKind) -> BasisOrdering {
    match kind {
        OrderingKind::DeltaB => delta_ordering(b),
        OrderingKind::DeltaBPrec => prec_ordering(b),
    }
}

/// `t_h = |Δ_{B,h}|`, the number of parts `≥ h + 1`, for `h = 0..μ₁`.
pub fn group_sizes(b: &Partition) -> Vec<usize> {
    b.conjugate().parts().to_vec()
}

pub fn jordan_operator(b: &Partition, ord: &BasisOrdering, m: PrimeModulus) -> FieldMatrix {
    let n = ord.len();
    let mut x = FieldMatrix::zeros(n, n, m);
    for (col, v) in ord.order.iter().enumerate() {
        if v.l < v.mu {
            let up = BasisVector { l: v.l + 1, ..*v };
            x.set(ord.position(&up).expect("basis is closed under J"), col, 1);
        }
    }
    debug_assert_eq!(n, b.n());
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    /// The full centralizer.
    Centralizer,
    /// Leading-coefficient matrices strictly lower triangular, ties kept.
    Sn,
    /// Same zero set as `Sn`, every position independent.
    Se,
}

/// `(h, k, d)`: row block, column block, Toeplitz diagonal.
type TieKey = (usize, usize, usize);

/// Block index `h = q_i − j + 1` of the Jordan block containing `v`.
fn block_of(cumulative: &[usize], v: &BasisVector) -> usize {
    cumulative[v.i - 1] - v.j + 1
}

/// Tie key of entry `(row, col)` of a generic centralizer element, or `None` for a structural zero.
fn centralizer_key(cumulative: &[usize], row: &BasisVector, col: &BasisVector) -> Option<TieKey> {
    let d = if row.mu >= col.mu {
        (col.mu - col.l).checked_sub(row.mu - row.l)?
    } else {
        row.l.checked_sub(col.l)?
    };
    Some((block_of(cumulative, row), block_of(cumulative, col), d))
}

/// Whether `(row, col)` is generically nonzero in the nilpotent subalgebra (conditions ι₁–ι₄).
pub fn sn_nonzero(row: &BasisVector, col: &BasisVector) -> bool {
    use std::cmp::Ordering::*;
    match row.i.cmp(&col.i) {
        Less => row.mu - row.l <= col.mu - col.l,
        Equal => (row.j >= col.j && row.l > col.l) || (row.j < col.j && row.l >= col.l),
        Greater => row.l >= col.l,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternEntry {
    Zero,
    Coord(usize),
}

/// An `n × n` grid of zeros and coordinate ids; equal ids are tied entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternMatrix {
    n: usize,
    pub ordering: OrderingKind,
    entries: Vec<PatternEntry>,
    coordinate_count: usize,
}

#[derive(Serialize, Deserialize)]
struct PatternFile {
    n: usize,
    ordering: OrderingKind,
    entries: Vec<PatternFileEntry>,
}

#[derive(Serialize, Deserialize)]
struct PatternFileEntry {
    row: usize,
    col: usize,
    coord: usize,
}

pub fn build_pattern(b: &Partition, ord: &BasisOrdering, kind: PatternKind) -> PatternMatrix {
    let cumulative = b.runs().cumulative;
    let n = ord.len();
    let mut ids: HashMap<TieKey, usize> = HashMap::new();
    let mut next = 0;
    let mut entries = vec![PatternEntry::Zero; n * n];
    for (r, row) in ord.order.iter().enumerate() {
        for (c, col) in ord.order.iter().enumerate() {
            let Some(key) = centralizer_key(&cumulative, row, col) else {
                continue;
            };
            let leading_upper = row.i == col.i && row.j >= col.j && key.2 == 0;
            if kind != PatternKind::Centralizer && leading_upper {
                continue;
            }
            let id = if kind == PatternKind::Se {
                next += 1;
                next - 1
            } else {
                *ids.entry(key).or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            };
            entries[r * n + c] = PatternEntry::Coord(id);
        }
    }
    PatternMatrix {
        n,
        ordering: ord.kind,
        entries,
        coordinate_count: next,
    }
}

/// Generic element of the centralizer, in `Δ_B` order.
pub fn centralizer_pattern(b: &Partition) -> PatternMatrix {
    build_pattern(b, &delta_ordering(b), PatternKind::Centralizer)
}

/// Generic element of the nilpotent subalgebra with Toeplitz ties, in `≺` order.
pub fn sn_pattern(b: &Partition) -> PatternMatrix {
    build_pattern(b, &prec_ordering(b), PatternKind::Sn)
}

/// As [`sn_pattern`] with every tie broken.
pub fn se_pattern(b: &Partition) -> PatternMatrix {
    build_pattern(b, &prec_ordering(b), PatternKind::Se)
}

impl PatternMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coordinate_count(&self) -> usize {
        self.coordinate_count
    }

    pub fn get(&self, r: usize, c: usize) -> PatternEntry {
        self.entries[r * self.n + c]
    }

    pub fn is_nonzero(&self, r: usize, c: usize) -> bool {
        self.get(r, c) != PatternEntry::Zero
    }

    /// Row-major list of `(row, col, id)`.
    pub fn coords(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.entries.iter().enumerate().filter_map(|(k, e)| match e {
            PatternEntry::Coord(id) => Some((k / self.n, k % self.n, *id)),
            PatternEntry::Zero => None,
        })
    }

    pub fn nonzero_count(&self) -> usize {
        self.coords().count()
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.coords().all(|(r, c, _)| r < c)
    }

    /// Positions grouped by coordinate id.
    pub fn tie_classes(&self) -> Vec<Vec<(usize, usize)>> {
        let mut classes = vec![Vec::new(); self.coordinate_count];
        for (r, c, id) in self.coords() {
            classes[id].push((r, c));
        }
        classes
    }

    /// Row-major `n × n` mask; every `true` position gets a fresh coordinate.
    pub fn from_mask(n: usize, ordering: OrderingKind, mask: &[bool]) -> PatternMatrix {
        assert_eq!(mask.len(), n * n, "mask must be n × n");
        let mut next = 0;
        let entries = mask
            .iter()
            .map(|&on| {
                if on {
                    next += 1;
                    PatternEntry::Coord(next - 1)
                } else {
                    PatternEntry::Zero
                }
            })
            .collect();
        PatternMatrix {
            n,
            ordering,
            entries,
            coordinate_count: next,
        }
    }

    /// Same zero set, coordinates renumbered by first row-major occurrence.
    pub fn relabeled(&self) -> PatternMatrix {
        let mut map = HashMap::new();
        let entries = self
            .entries
            .iter()
            .map(|e| match e {
                PatternEntry::Zero => PatternEntry::Zero,
                PatternEntry::Coord(id) => {
                    let next = map.len();
                    PatternEntry::Coord(*map.entry(*id).or_insert(next))
                }
            })
            .collect();
        PatternMatrix {
            entries,
            coordinate_count: map.len(),
            ..*self
        }
    }

    /// Principal sub-pattern on the given indices, relabeled.
    pub fn principal(&self, idx: &[usize]) -> PatternMatrix {
        let n = idx.len();
        let mut entries = Vec::with_capacity(n * n);
        for &r in idx {
            for &c in idx {
                entries.push(self.get(r, c));
            }
        }
        PatternMatrix {
            n,
            ordering: self.ordering,
            entries,
            coordinate_count: self.coordinate_count,
        }
        .relabeled()
    }

    /// Substitute explicit coordinate values.
    pub fn instantiate_values(&self, m: PrimeModulus, values: &[u32]) -> FieldMatrix {
        assert_eq!(values.len(), self.coordinate_count, "one value per coordinate");
        FieldMatrix::from_fn(self.n, self.n, m, |r, c| match self.get(r, c) {
            PatternEntry::Zero => 0,
            PatternEntry::Coord(id) => values[id] as u64,
        })
    }

    /// Independent uniform values in `[0, p)` per coordinate.
    pub fn instantiate_with<R: Rng + ?Sized>(&self, m: PrimeModulus, rng: &mut R) -> FieldMatrix {
        let values: Vec<u32> = (0..self.coordinate_count)
            .map(|_| rng.gen_range(0..m.p()))
            .collect();
        self.instantiate_values(m, &values)
    }

    pub fn instantiate(&self, m: PrimeModulus, seed: u64) -> FieldMatrix {
        self.instantiate_with(m, &mut crate::rng::stream(seed, 0))
    }

    pub fn to_json(&self) -> String {
        let file = PatternFile {
            n: self.n,
            ordering: self.ordering,
            entries: self
                .coords()
                .map(|(row, col, coord)| PatternFileEntry { row, col, coord })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("pattern serializes")
    }

    pub fn from_json(text: &str) -> Result<PatternMatrix, PatternError> {
        let file: PatternFile =
            serde_json::from_str(text).map_err(|e| PatternError::Json(e.to_string()))?;
        let n = file.n;
        let mut entries = vec![PatternEntry::Zero; n * n];
        let mut seen = vec![false; file.entries.len()];
        for e in &file.entries {
            if e.row >= n || e.col >= n {
                return Err(PatternError::Malformed(format!(
                    "position ({}, {}) outside {n}x{n}",
                    e.row, e.col
                )));
            }
            if e.coord >= seen.len() {
                return Err(PatternError::Malformed(format!(
                    "coordinate id {} is not dense",
                    e.coord
                )));
            }
            let slot = &mut entries[e.row * n + e.col];
            if *slot != PatternEntry::Zero {
                return Err(PatternError::Malformed(format!(
                    "duplicate position ({}, {})",
                    e.row, e.col
                )));
            }
            *slot = PatternEntry::Coord(e.coord);
            seen[e.coord] = true;
        }
        let count = seen.iter().rposition(|&s| s).map_or(0, |k| k + 1);
        if seen[..count].iter().any(|&s| !s) {
            return Err(PatternError::Malformed("coordinate ids are not dense".into()));
        }
        Ok(PatternMatrix {
            n,
            ordering: file.ordering,
            entries,
            coordinate_count: count,
        })
    }
}

/// A random nilpotent element of the centralizer, in `Δ_B` order.
///
/// Every coordinate is uniform except the leading-coefficient matrix of each
/// run, which is drawn as `P L P⁻¹` with `L` strictly lower triangular, so the
/// sample is nilpotent but not confined to the triangular subalgebra.
pub fn nilpotent_centralizer_sample<R: Rng + ?Sized>(
    b: &Partition,
    m: PrimeModulus,
    rng: &mut R,
) -> FieldMatrix {
    let runs = b.runs();
    let ord = delta_ordering(b);
    let mut leading: HashMap<(usize, usize), u32> = HashMap::new();
    for i in 1..=runs.u() {
        let k = runs.multiplicity(i);
        let l = FieldMatrix::from_fn(k, k, m, |r, c| if r > c { rng.gen_range(0..m.p()) as u64 } else { 0 });
        let p = loop {
            let p = FieldMatrix::from_fn(k, k, m, |_, _| rng.gen_range(0..m.p()) as u64);
            if let Some(inv) = p.inverse().expect("square") {
                break (p, inv);
            }
        };
        let a = p.0.mul(&l).and_then(|x| x.mul(&p.1)).expect("dimensions agree");
        let first = runs.q(i - 1) + 1;
        for r in 0..k {
            for c in 0..k {
                leading.insert((first + r, first + c), a.get(r, c));
            }
        }
    }
    let cumulative = runs.cumulative;
    let mut values: HashMap<TieKey, u32> = HashMap::new();
    let n = ord.len();
    let mut x = FieldMatrix::zeros(n, n, m);
    for (r, row) in ord.order.iter().enumerate() {
        for (c, col) in ord.order.iter().enumerate() {
            let Some(key) = centralizer_key(&cumulative, row, col) else {
                continue;
            };
            let v = *values.entry(key).or_insert_with(|| {
                if row.i == col.i && key.2 == 0 {
                    leading[&(key.0, key.1)]
                } else {
                    rng.gen_range(0..m.p())
                }
            });
            x.set(r, c, v);
        }
    }
    x
}

/// Structural audits of [`sn_pattern`]; each returns the first discrepancy found.
pub mod audit {
    use super::*;

    fn t_at(t: &[usize], h: usize) -> usize {
        t.get(h).copied().unwrap_or(0)
    }

    /// Consecutive tied columns differ by the size of the earlier column's group.
    pub fn column_offsets(b: &Partition) -> Result<(), String> {
        let pat = sn_pattern(b);
        let ord = prec_ordering(b);
        let t = group_sizes(b);
        for class in pat.tie_classes() {
            let mut cols: Vec<usize> = class.iter().map(|&(_, c)| c).collect();
            cols.sort_unstable();
            for w in cols.windows(2) {
                let g = ord.order[w[0]].group();
                if w[1] - w[0] != t[g] {
                    return Err(format!("columns {} and {} tied, group size {}", w[0], w[1], t[g]));
                }
            }
        }
        Ok(())
    }

    /// Block `(h+1, k+1)` repeats block `(h, k)` entry by entry.
    pub fn nesting(b: &Partition) -> Result<(), String> {
        let pat = sn_pattern(b);
        let ord = prec_ordering(b);
        for row in &ord.order {
            for col in &ord.order {
                let (Some(r2), Some(c2)) = (row.lowered(), col.lowered()) else {
                    continue;
                };
                let outer = pat.get(ord.position(row).unwrap(), ord.position(col).unwrap());
                let inner = pat.get(ord.position(&r2).unwrap(), ord.position(&c2).unwrap());
                if outer != inner {
                    return Err(format!("{row},{col}: {outer:?} vs {r2},{c2}: {inner:?}"));
                }
            }
        }
        Ok(())
    }

    /// Dropping the first `h` groups leaves the pattern of `B` with every part lowered by `h`.
    pub fn sub_patterns(b: &Partition) -> Result<(), String> {
        let t = group_sizes(b);
        for kind in [PatternKind::Sn, PatternKind::Se] {
            let pat = build_pattern(b, &prec_ordering(b), kind);
            let mut start = 0;
            for h in 1..b.first() {
                start += t[h - 1];
                let idx: Vec<usize> = (start..b.n()).collect();
                let lower = b.lowered(h);
                let expect = build_pattern(&lower, &prec_ordering(&lower), kind);
                if pat.principal(&idx) != expect {
                    return Err(format!("{kind:?} sub-pattern at h={h} differs from pattern of {lower}"));
                }
            }
        }
        Ok(())
    }

    /// Entry `(i, i+1)` is nonzero unless `i` ends group `h` with `t_h > t_{μ₁−2}`.
    pub fn superdiagonal(b: &Partition) -> Result<(), String> {
        let pat = sn_pattern(b);
        let ord = prec_ordering(b);
        let t = group_sizes(b);
        let t_ref = if b.first() >= 2 { t[b.first() - 2] } else { 0 };
        for i in 0..b.n().saturating_sub(1) {
            let g = ord.order[i].group();
            let ends_group = ord.order[i + 1].group() != g;
            let expect = !ends_group || t[g] <= t_ref;
            if pat.is_nonzero(i, i + 1) != expect {
                return Err(format!("superdiagonal entry {i} expected nonzero={expect}"));
            }
        }
        Ok(())
    }

    /// Row bands of each block `A_{h,k}`, `h < k`, with leading zero columns as predicted by the `t_λ`.
    pub fn staircase(b: &Partition) -> Result<(), String> {
        let pat = sn_pattern(b);
        let t = group_sizes(b);
        let mu1 = b.first();
        let offsets: Vec<usize> = std::iter::once(0)
            .chain(t.iter().scan(0, |s, &x| {
                *s += x;
                Some(*s)
            }))
            .collect();
        for h in 0..mu1 {
            for k in h + 1..mu1 {
                let s = k - h;
                // (row count, zero column count) per band, top to bottom
                let mut bands = vec![(t_at(&t, mu1 - 1 - s), 0)];
                for lambda in (k + 1..mu1).rev() {
                    bands.push((t_at(&t, lambda - 1 - s) - t_at(&t, lambda - s), t[lambda]));
                }
                let mut r = offsets[h];
                for (rows, zeros) in bands {
                    for row in r..r + rows {
                        for (c, col) in (offsets[k]..offsets[k + 1]).enumerate() {
                            if pat.is_nonzero(row, col) != (c >= zeros) {
                                return Err(format!("block ({h},{k}) row {row} col {col}"));
                            }
                        }
                    }
                    r += rows;
                }
                if r != offsets[h + 1] {
                    return Err(format!("block ({h},{k}) bands cover {} rows", r - offsets[h]));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn gf() -> PrimeModulus {
        PrimeModulus::new(65521).unwrap()
    }

    fn labels(vs: &[BasisVector]) -> Vec<String> {
        vs.iter().map(|v| format!("{}{}^{}", v.mu, v.j, v.l)).collect()
    }

    #[test]
    fn delta_basis_order() {
        let d = delta_basis(&p("5,3,3,2,1"));
        assert_eq!(
            labels(&d[..9]),
            ["51^5", "51^4", "51^3", "51^2", "51^1", "32^3", "32^2", "32^1", "31^3"]
        );
        assert_eq!(labels(&d[d.len() - 3..]), ["21^2", "21^1", "11^1"]);
        assert_eq!(labels(&delta_basis(&p("1"))), ["11^1"]);
        assert_eq!(labels(&delta_basis(&p("4,3,3,2,1"))[..1]), ["41^4"]);
    }

    #[test]
    fn prec_order() {
        let b = p("4,3,3,2,1");
        let o = prec_ordering(&b);
        assert_eq!(labels(&o.order[..5]), ["41^4", "31^3", "32^3", "21^2", "11^1"]);
        assert_eq!(group_sizes(&b), vec![5, 4, 3, 1]);
        assert_eq!(labels(&prec_ordering(&p("3")).order), ["31^3", "31^2", "31^1"]);
    }

    #[test]
    fn jordan_operator_types() {
        let m = gf();
        for b in [p("3,2"), p("7,5,2"), p("2,2,1"), p("1^4")] {
            for ord in [delta_ordering(&b), prec_ordering(&b)] {
                let j = jordan_operator(&b, &ord, m);
                assert_eq!(j.jordan_type().unwrap(), b);
                assert!(j.is_strictly_upper());
            }
        }
        let j = jordan_operator(&p("3,2"), &delta_ordering(&p("3,2")), m);
        assert_eq!(j.rank_sequence().unwrap().ranks, vec![5, 3, 1, 0]);
    }

    #[test]
    fn coordinate_counts() {
        assert_eq!(centralizer_pattern(&p("3,3,3,2")).coordinate_count(), 41);
        assert_eq!(centralizer_pattern(&p("6")).coordinate_count(), 6);
        assert_eq!(centralizer_pattern(&p("1,1")).coordinate_count(), 4);
        let sn = sn_pattern(&p("2,1"));
        assert_eq!((sn.nonzero_count(), sn.coordinate_count()), (3, 3));
        let sn = sn_pattern(&p("2,2"));
        assert_eq!((sn.nonzero_count(), sn.coordinate_count()), (6, 5));
        let sizes: Vec<usize> = sn.tie_classes().iter().map(Vec::len).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 1);
        assert_eq!(se_pattern(&p("2,2")).coordinate_count(), 6);
    }

    #[test]
    fn sn_matches_iota_conditions() {
        for n in 1..=9 {
            for b in Partition::all(n) {
                let ord = prec_ordering(&b);
                let sn = sn_pattern(&b);
                let se = se_pattern(&b);
                assert!(sn.is_strictly_upper(), "{b}");
                for (r, row) in ord.order.iter().enumerate() {
                    for (c, col) in ord.order.iter().enumerate() {
                        assert_eq!(sn.is_nonzero(r, c), sn_nonzero(row, col), "{b} {row} {col}");
                        assert_eq!(sn.is_nonzero(r, c), se.is_nonzero(r, c));
                    }
                }
                assert!(se.tie_classes().iter().all(|c| c.len() == 1));
                let has_ties = sn.coordinate_count() < se.coordinate_count();
                assert_eq!(has_ties, sn.tie_classes().iter().any(|c| c.len() > 1));
            }
        }
    }

    /// Example (3,3,3,2): the leading-coefficient diagonal vanishes, everything else is free.
    #[test]
    fn three_three_three_two() {
        let b = p("3,3,3,2");
        let c = centralizer_pattern(&b);
        let ord = delta_ordering(&b);
        let sn = build_pattern(&b, &ord, PatternKind::Sn);
        let mut dropped = 0;
        for r in 0..11 {
            for col in 0..11 {
                if c.is_nonzero(r, col) && !sn.is_nonzero(r, col) {
                    dropped += 1;
                    let (v, w) = (ord.order[r], ord.order[col]);
                    assert!(v.i == w.i && v.j >= w.j && v.l == w.l);
                }
            }
        }
        // 6 leading coefficients on or above the diagonal of a 3x3, 3 positions each, plus the 2-block's own
        assert_eq!(dropped, 6 * 3 + 2);
        assert_eq!(sn.coordinate_count(), 41 - 6 - 1);
    }

    #[test]
    fn instantiation() {
        let m = gf();
        let b = p("2,2,1");
        let sn = sn_pattern(&b);
        assert_eq!(sn.instantiate(m, 5), sn.instantiate(m, 5));
        assert_ne!(sn.instantiate(m, 5), sn.instantiate(m, 6));
        let j = jordan_operator(&b, &prec_ordering(&b), m);
        for seed in 0..20 {
            let x = sn.instantiate(m, seed);
            assert!(x.commutes_with(&j).unwrap());
            assert!(x.jordan_type().is_ok());
        }
        let zero = PatternMatrix::from_json(r#"{"n":3,"ordering":"prec","entries":[]}"#).unwrap();
        assert!(zero.instantiate(m, 1).is_zero());
    }

    #[test]
    fn all_patterns_commute_with_j() {
        let m = gf();
        for n in 1..=7 {
            for b in Partition::all(n) {
                for ord in [delta_ordering(&b), prec_ordering(&b)] {
                    let j = jordan_operator(&b, &ord, m);
                    for kind in [PatternKind::Centralizer, PatternKind::Sn] {
                        let x = build_pattern(&b, &ord, kind).instantiate(m, n as u64);
                        assert!(x.commutes_with(&j).unwrap(), "{b} {kind:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn nilpotent_sampler() {
        let m = gf();
        let mut rng = crate::rng::stream(3, 0);
        for b in [p("3,3,1"), p("2,2,2,1,1"), p("4,2,2")] {
            let j = jordan_operator(&b, &delta_ordering(&b), m);
            for _ in 0..10 {
                let x = nilpotent_centralizer_sample(&b, m, &mut rng);
                assert!(x.commutes_with(&j).unwrap());
                assert!(x.jordan_type().is_ok());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let sn = sn_pattern(&p("3,2,2,1"));
        let back = PatternMatrix::from_json(&sn.to_json()).unwrap();
        assert_eq!(back, sn);
        assert!(PatternMatrix::from_json(r#"{"n":2,"ordering":"prec","entries":[{"row":0,"col":1,"coord":1}]}"#).is_err());
        assert!(PatternMatrix::from_json(r#"{"n":2,"ordering":"prec","entries":[{"row":0,"col":2,"coord":0}]}"#).is_err());
        assert!(PatternMatrix::from_json(r#"{"n":2,"ordering":"sideways","entries":[]}"#).is_err());
    }

    #[test]
    fn audits_hold() {
        for n in 1..=10 {
            for b in Partition::all(n) {
                audit::column_offsets(&b).unwrap_or_else(|e| panic!("{b}: {e}"));
                audit::nesting(&b).unwrap_or_else(|e| panic!("{b}: {e}"));
                audit::superdiagonal(&b).unwrap_or_else(|e| panic!("{b}: {e}"));
                audit::staircase(&b).unwrap_or_else(|e| panic!("{b}: {e}"));
                if n <= 8 {
                    audit::sub_patterns(&b).unwrap_or_else(|e| panic!("{b}: {e}"));
                }
            }
        }
    }
}
