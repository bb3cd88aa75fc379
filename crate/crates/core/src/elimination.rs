//! Row-profile reduction of strictly upper triangular matrices.
//!
//! `Φ(i)` is the column of the first nonzero entry of row `i` (1-based, `n+1`
//! for a zero row). When `Φ` is nondecreasing and strictly increasing below
//! `n+1`, the Jordan type is read off `Φ` alone. Otherwise a ★-submatrix is
//! selected, one entry is eliminated by a unipotent similarity, and a cyclic
//! permutation restores triangularity. The eliminated position receives
//! `F(U)` of the ★-submatrix `U`.

use rand::Rng;
use thiserror::Error;

use crate::centralizer::{OrderingKind, PatternMatrix};
use crate::field::{FieldMatrix, LinalgError, PrimeModulus};
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElimError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not strictly upper triangular")]
    NotStrictlyUpper,
    #[error("submatrix lacks property ★: nonzero entry at ({0}, {1}) below the diagonal")]
    NotStar(usize, usize),
    #[error("interior diagonal entry {0} is zero")]
    ZeroInteriorDiagonal(usize),
    #[error("invalid Φ map: {0}")]
    InvalidPhi(String),
    #[error("Φ is not monotone-regular")]
    NotMonotone,
    #[error("Φ is already monotone-regular; no ★-submatrix")]
    NoStarSubmatrix,
    #[error("reduction exceeded {0} steps")]
    IterationCap(usize),
    #[error("no generic instantiation after {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_star(u: &FieldMatrix) -> Result<(), ElimError> {
    if !u.is_square() || u.rows() < 2 {
        return Err(ElimError::NotSquare);
    }
    let p = u.rows();
    for r in 0..p {
        for c in 0..r {
            if u.get(r, c) != 0 {
                return Err(ElimError::NotStar(r + 1, c + 1));
            }
        }
    }
    for k in 1..p - 1 {
        if u.get(k, k) == 0 {
            return Err(ElimError::ZeroInteriorDiagonal(k + 1));
        }
    }
    Ok(())
}

/// `tail[h] = F(U_{(h)})` on rows/columns `h..p` (0-based), by the row recursion.
fn tail_values(u: &FieldMatrix) -> Vec<u32> {
    let m = u.modulus();
    let p = u.rows();
    let mut f = vec![0u32; p];
    for h in (0..p - 1).rev() {
        let mut acc = u.get(h, p - 1);
        for k in h + 1..p - 1 {
            let t = m.mul(m.mul(u.get(h, k), m.inv(u.get(k, k)).unwrap()), f[k]);
            acc = m.sub(acc, t);
        }
        f[h] = acc;
    }
    f
}

/// `head[h] = F(U^{(h)})` on rows/columns `0..=h` (0-based), by the column recursion.
fn head_values(u: &FieldMatrix) -> Vec<u32> {
    let m = u.modulus();
    let p = u.rows();
    let mut f = vec![0u32; p];
    for h in 1..p {
        let mut acc = u.get(0, h);
        for k in 1..h {
            let t = m.mul(m.mul(u.get(k, h), m.inv(u.get(k, k)).unwrap()), f[k]);
            acc = m.sub(acc, t);
        }
        f[h] = acc;
    }
    f
}

/// `F(U)` by the row recursion `F(U_{(h)}) = u_{h,p} − Σ u_{h,k} u_{k,k}⁻¹ F(U_{(k)})`.
pub fn f_u_recursive(u: &FieldMatrix) -> Result<u32, ElimError> {
    check_star(u)?;
    Ok(tail_values(u)[0])
}

/// `F(U)` by the column recursion `F(U^{(h)}) = u_{1,h} − Σ u_{k,h} u_{k,k}⁻¹ F(U^{(k)})`.
pub fn f_u_column_recursive(u: &FieldMatrix) -> Result<u32, ElimError> {
    check_star(u)?;
    Ok(head_values(u)[u.rows() - 1])
}

/// `F(U) = (−1)^p det Û / Π_{1<i<p} u_{i,i}`, with `Û` = `U` minus its first column and last row.
pub fn f_u_determinant(u: &FieldMatrix) -> Result<u32, ElimError> {
    check_star(u)?;
    let p = u.rows();
    let m = u.modulus();
    let hat = u.submatrix(&(0..p - 1).collect::<Vec<_>>(), &(1..p).collect::<Vec<_>>());
    let mut value = hat.det()?;
    if p % 2 == 1 {
        value = m.neg(value);
    }
    for k in 1..p - 1 {
        value = m.div(value, u.get(k, k))?;
    }
    Ok(value)
}

/// Determinant form extended to any upper triangular `U`: divide by every nonzero diagonal entry.
///
/// Agrees with [`f_u_determinant`] when `u_{1,1} = u_{p,p} = 0`.
pub fn f_u_extended(u: &FieldMatrix) -> Result<u32, ElimError> {
    if !u.is_square() || u.rows() < 2 {
        return Err(ElimError::NotSquare);
    }
    let p = u.rows();
    let m = u.modulus();
    let hat = u.submatrix(&(0..p - 1).collect::<Vec<_>>(), &(1..p).collect::<Vec<_>>());
    let mut value = hat.det()?;
    if p % 2 == 1 {
        value = m.neg(value);
    }
    for k in 0..p {
        if u.get(k, k) != 0 {
            value = m.div(value, u.get(k, k))?;
        }
    }
    Ok(value)
}

/// Coefficient of `u_{r,s}` (1-based, `r < s`) in `F(U)`.
pub fn f_u_coefficient(u: &FieldMatrix, r: usize, s: usize) -> Result<u32, ElimError> {
    check_star(u)?;
    let p = u.rows();
    if !(1 <= r && r < s && s <= p) {
        return Err(ElimError::NotStar(r, s));
    }
    let m = u.modulus();
    let tail = tail_values(u);
    let head = head_values(u);
    let inv = |k: usize| m.inv(u.get(k - 1, k - 1)).unwrap();
    Ok(match (r == 1, s == p) {
        (true, true) => 1,
        (false, true) => m.neg(m.mul(inv(r), head[r - 1])),
        (true, false) => m.neg(m.mul(inv(s), tail[s - 1])),
        (false, false) => m.mul(m.mul(inv(r), inv(s)), m.mul(tail[s - 1], head[r - 1])),
    })
}

/// A uniformly random order-`p` matrix with property ★: zero below the
/// diagonal, nonzero interior diagonal, everything else uniform.
pub fn random_star_matrix<R: Rng + ?Sized>(p: usize, m: PrimeModulus, rng: &mut R) -> FieldMatrix {
    FieldMatrix::from_fn(p, p, m, |r, c| {
        if c < r {
            0
        } else if r == c && r > 0 && r + 1 < p {
            rng.gen_range(1..m.p()) as u64
        } else {
            rng.gen_range(0..m.p()) as u64
        }
    })
}

/// `(−1)^{|S|} Π u_{k_a,k_{a+1}} / Π_{k∈S} u_{k,k}` over the chain `1 < S < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracMonomial {
    pub negative: bool,
    /// 1-based `(row, col)` numerator entries.
    pub numerator: Vec<(usize, usize)>,
    /// 1-based diagonal indices in the denominator.
    pub denominator: Vec<usize>,
}

/// The `2^{p−2}` fractional monomials whose sum is `F(U)` for order `p`.
pub fn fractional_monomials(p: usize) -> Vec<FracMonomial> {
    assert!(p >= 2);
    let interior = p - 2;
    (0u64..1 << interior)
        .map(|mask| {
            let chosen: Vec<usize> = (0..interior)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| b + 2)
                .collect();
            let mut chain = vec![1];
            chain.extend(&chosen);
            chain.push(p);
            FracMonomial {
                negative: chosen.len() % 2 == 1,
                numerator: chain.windows(2).map(|w| (w[0], w[1])).collect(),
                denominator: chosen,
            }
        })
        .collect()
}

impl FracMonomial {
    pub fn eval(&self, u: &FieldMatrix) -> Result<u32, ElimError> {
        let m = u.modulus();
        let mut v = 1;
        for &(r, c) in &self.numerator {
            v = m.mul(v, u.get(r - 1, c - 1));
        }
        for &k in &self.denominator {
            v = m.div(v, u.get(k - 1, k - 1))?;
        }
        Ok(if self.negative { m.neg(v) } else { v })
    }
}

/// First-nonzero-column map of a strictly upper triangular matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMap {
    n: usize,
    phi: Vec<usize>,
}

impl PhiMap {
    /// `phi[i-1] = Φ(i)`; requires `i < Φ(i) ≤ n+1`.
    pub fn new(phi: Vec<usize>) -> Result<Self, ElimError> {
        let n = phi.len();
        for (k, &v) in phi.iter().enumerate() {
            if v <= k + 1 || v > n + 1 {
                return Err(ElimError::InvalidPhi(format!("Φ({}) = {v}", k + 1)));
            }
        }
        Ok(PhiMap { n, phi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based; `Φ(n+1) = n+1`.
    pub fn get(&self, i: usize) -> usize {
        if i > self.n {
            self.n + 1
        } else {
            self.phi[i - 1]
        }
    }

    pub fn values(&self) -> &[usize] {
        &self.phi
    }

    /// Nondecreasing, and strictly increasing where the value is at most `n`.
    pub fn is_monotone_regular(&self) -> bool {
        self.phi
            .windows(2)
            .all(|w| w[0] < w[1] || (w[0] == w[1] && w[0] == self.n + 1))
    }

    pub fn power(&self, k: usize) -> PhiMap {
        let phi = (1..=self.n)
            .map(|i| (0..k).fold(i, |x, _| self.get(x)))
            .collect();
        PhiMap { n: self.n, phi }
    }

    /// Jordan type shared by every matrix with this monotone-regular profile.
    pub fn monotone_generic_type(&self) -> Result<Partition, ElimError> {
        if !self.is_monotone_regular() {
            return Err(ElimError::NotMonotone);
        }
        let mut ranks = vec![self.n];
        let mut cur: Vec<usize> = (1..=self.n).collect();
        while *ranks.last().unwrap() > 0 {
            cur = cur.iter().map(|&x| self.get(x)).collect();
            ranks.push(cur.iter().filter(|&&x| x <= self.n).count());
        }
        Ok(Partition::from_rank_profile(&ranks).expect("monotone profiles give valid ranks"))
    }
}

pub fn phi_of(y: &FieldMatrix) -> Result<PhiMap, ElimError> {
    if !y.is_square() {
        return Err(ElimError::NotSquare);
    }
    if !y.is_strictly_upper() {
        return Err(ElimError::NotStrictlyUpper);
    }
    let n = y.rows();
    let phi = (0..n)
        .map(|r| y.row(r).iter().position(|&v| v != 0).map_or(n + 1, |c| c + 1))
        .collect();
    Ok(PhiMap { n, phi })
}

/// Row and column indices (1-based) of a ★-submatrix; the last column may be `n+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarSubmatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl StarSubmatrix {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn first_row(&self) -> usize {
        self.rows[0]
    }

    pub fn terminal_col(&self) -> usize {
        *self.cols.last().unwrap()
    }

    /// The `p × p` submatrix of `y`; a column index of `n+1` reads as zeros.
    pub fn extract(&self, y: &FieldMatrix) -> FieldMatrix {
        let n = y.rows();
        FieldMatrix::from_fn(self.order(), self.order(), y.modulus(), |r, c| {
            let col = self.cols[c];
            if col > n {
                0
            } else {
                y.get(self.rows[r] - 1, col - 1) as u64
            }
        })
    }
}

/// The chain starting at row `a`, if `a` is irregular and the chain closes.
fn chain_from(phi: &PhiMap, a: usize) -> Option<StarSubmatrix> {
    let n = phi.n();
    if a >= n || phi.get(a + 1) > n || phi.get(a) < phi.get(a + 1) {
        return None;
    }
    let mut rows = vec![a, a + 1];
    let mut cols = vec![phi.get(a + 1)];
    loop {
        let next = rows.last().unwrap() + 1;
        let want = cols.last().unwrap() + 1;
        let f = phi.get(next);
        if f == want && want <= n {
            rows.push(next);
            cols.push(f);
        } else if f > want || (f == n + 1 && want == n + 1) {
            rows.push(next);
            cols.push(want);
            break;
        } else {
            return None;
        }
    }
    cols.insert(0, cols[0] - 1);
    Some(StarSubmatrix { rows, cols })
}

/// All admissible ★-chains, one per irregular starting row that closes.
pub fn star_candidates(phi: &PhiMap) -> Vec<StarSubmatrix> {
    (1..phi.n()).filter_map(|a| chain_from(phi, a)).collect()
}

/// The ★-submatrix with the smallest terminal column; ties go to the smallest first row.
pub fn find_star_submatrix(y: &FieldMatrix) -> Result<Option<StarSubmatrix>, ElimError> {
    let phi = phi_of(y)?;
    if phi.is_monotone_regular() {
        return Ok(None);
    }
    Ok(star_candidates(&phi)
        .into_iter()
        .min_by_key(|s| (s.terminal_col(), s.first_row())))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaStep {
    pub matrix: FieldMatrix,
    pub star: StarSubmatrix,
    /// Entry at `(i(1), j(p))` after elimination, before the permutation; 0 when `j(p) = n+1`.
    pub eliminated: u32,
    /// Multipliers `g_h` of the interior rows.
    pub multipliers: Vec<u32>,
}

/// One elimination-and-permutation step.
pub fn sigma_step(y: &FieldMatrix) -> Result<SigmaStep, ElimError> {
    let star = find_star_submatrix(y)?.ok_or(ElimError::NoStarSubmatrix)?;
    let m = y.modulus();
    let n = y.rows();
    let p = star.order();
    let a = star.rows[0] - 1;
    let interior: Vec<(usize, usize)> = (1..p - 1)
        .map(|h| (star.rows[h] - 1, star.cols[h] - 1))
        .collect();
    let mut g = Vec::with_capacity(interior.len());
    for (h, &(ih, jh)) in interior.iter().enumerate() {
        let mut acc = y.get(a, jh);
        for (k, &(ik, _)) in interior[..h].iter().enumerate() {
            acc = m.sub(acc, m.mul(y.get(ik, jh), g[k]));
        }
        let lead = y.get(ih, jh);
        if lead == 0 {
            return Err(ElimError::ZeroInteriorDiagonal(h + 2));
        }
        g.push(m.div(acc, lead)?);
    }
    let mut x = y.clone();
    for (&(ih, _), &gh) in interior.iter().zip(&g) {
        for c in 0..n {
            let v = m.sub(x.get(a, c), m.mul(gh, y.get(ih, c)));
            x.set(a, c, v);
        }
    }
    let col_a: Vec<u32> = (0..n).map(|r| x.get(r, a)).collect();
    for (&(ih, _), &gh) in interior.iter().zip(&g) {
        for (r, &v) in col_a.iter().enumerate() {
            if v != 0 {
                let w = m.add(x.get(r, ih), m.mul(gh, v));
                x.set(r, ih, w);
            }
        }
    }
    let jp = star.terminal_col();
    let eliminated = if jp <= n { x.get(a, jp - 1) } else { 0 };
    let last = interior.last().expect("chains have an interior row").0;
    let tau = |k: usize| match k {
        k if k == last => a,
        k if (a..last).contains(&k) => k + 1,
        k => k,
    };
    let permuted = FieldMatrix::from_fn(n, n, m, |r, c| x.get(tau(r), tau(c)) as u64);
    debug_assert!(permuted.is_strictly_upper());
    Ok(SigmaStep {
        matrix: permuted,
        star,
        eliminated,
        multipliers: g,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub star: StarSubmatrix,
    pub eliminated: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub final_phi: PhiMap,
    pub final_matrix: FieldMatrix,
}

impl ReductionTrace {
    pub fn m(&self) -> usize {
        self.steps.len()
    }
}

/// Iterate [`sigma_step`] until `Φ` is monotone-regular; capped at `n²` steps.
pub fn sigma_reduce(y: &FieldMatrix) -> Result<ReductionTrace, ElimError> {
    let n = y.rows();
    let cap = (n * n).max(1);
    let mut cur = y.clone();
    let mut steps = Vec::new();
    loop {
        if find_star_submatrix(&cur)?.is_none() {
            return Ok(ReductionTrace {
                steps,
                final_phi: phi_of(&cur)?,
                final_matrix: cur,
            });
        }
        if steps.len() == cap {
            return Err(ElimError::IterationCap(cap));
        }
        let s = sigma_step(&cur)?;
        steps.push(ReductionStep {
            star: s.star,
            eliminated: s.eliminated,
        });
        cur = s.matrix;
    }
}

/// Outcome of reducing a generic instantiation of a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericReduction {
    pub input: FieldMatrix,
    pub trace: ReductionTrace,
    /// Instantiations discarded because a pattern coordinate drew 0.
    pub retries: usize,
}

/// Instantiate `pattern` with nonzero values and reduce it.
///
/// A draw in which some coordinate is 0 is not generic for the pattern and is
/// discarded; the next draw from the same stream is used instead.
pub fn sigma_reduce_generic<R: Rng + ?Sized>(
    pattern: &PatternMatrix,
    m: PrimeModulus,
    rng: &mut R,
    max_attempts: usize,
) -> Result<GenericReduction, ElimError> {
    for attempt in 0..max_attempts {
        let values: Vec<u32> = (0..pattern.coordinate_count())
            .map(|_| rng.gen_range(0..m.p()))
            .collect();
        if values.contains(&0) {
            continue;
        }
        let input = pattern.instantiate_values(m, &values);
        let trace = sigma_reduce(&input)?;
        return Ok(GenericReduction {
            input,
            trace,
            retries: attempt,
        });
    }
    Err(ElimError::RetriesExhausted(max_attempts))
}

/// Build a pattern from rows of symbols: `.` or `0` is zero, anything else a fresh coordinate.
pub fn pattern_from_symbols(rows: &[&str]) -> PatternMatrix {
    let n = rows.len();
    let mut mask = Vec::with_capacity(n * n);
    for (r, line) in rows.iter().enumerate() {
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cells.len(), n, "row {r} has {} cells", cells.len());
        mask.extend(cells.iter().map(|c| *c != "." && *c != "0"));
    }
    PatternMatrix::from_mask(n, OrderingKind::DeltaB, &mask)
}
