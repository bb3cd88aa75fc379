//! Dense exact linear algebra over a prime field GF(p).

use serde::Serialize;
use thiserror::Error;

use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("moduli differ ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
}

/// A prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub const DEFAULT: u32 = 65521;

    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p < 2 || p >= 1 << 31 {
            return Err(LinalgError::NotPrime(p));
        }
        let mut d = 2;
        while d * d <= p {
            if p % d == 0 {
                return Err(LinalgError::NotPrime(p));
            }
            d += 1;
        }
        Ok(PrimeModulus(p as u32))
    }

    pub fn p(self) -> u32 {
        self.0
    }

    pub fn reduce(self, a: u64) -> u32 {
        (a % self.0 as u64) as u32
    }

    pub fn reduce_signed(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - b as u64) % self.0 as u64) as u32
    }

    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32, LinalgError> {
        if a % self.0 == 0 {
            return Err(LinalgError::ZeroInverse);
        }
        Ok(self.pow(a, self.0 as u64 - 2))
    }

    pub fn div(self, a: u32, b: u32) -> Result<u32, LinalgError> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
    modulus: PrimeModulus,
}

/// Ranks of `X^0, X^1, …` up to the first zero or the first repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSequence {
    pub ranks: Vec<usize>,
    pub nilpotent: bool,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: PrimeModulus) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            modulus,
        }
    }

    pub fn identity(n: usize, modulus: PrimeModulus) -> Self {
        let mut m = Self::zeros(n, n, modulus);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        modulus: PrimeModulus,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut m = Self::zeros(rows, cols, modulus);
        for r in 0..rows {
            for c in 0..cols {
                m.data[r * cols + c] = modulus.reduce(f(r, c));
            }
        }
        m
    }

    /// Entries are reduced modulo `p`; signed input is accepted.
    pub fn from_rows(rows: &[Vec<i64>], modulus: PrimeModulus) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&v| modulus.reduce_signed(v))
            .collect();
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            data,
            modulus,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = self.modulus.reduce(v as u64);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero on and below the diagonal.
    pub fn is_strictly_upper(&self) -> bool {
        (0..self.rows).all(|r| (0..=r.min(self.cols.saturating_sub(1))).all(|c| self.get(r, c) == 0))
    }

    fn check_same_field(&self, other: &Self) -> Result<(), LinalgError> {
        if self.modulus != other.modulus {
            return Err(LinalgError::ModulusMismatch(self.modulus.p(), other.modulus.p()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.modulus.p() as u64;
        let mut out = Self::zeros(self.rows, other.cols, self.modulus);
        let mut acc = vec![0u64; other.cols];
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.get(r, k) as u64;
                if a == 0 {
                    continue;
                }
                for (c, slot) in acc.iter_mut().enumerate() {
                    *slot = (*slot + a * other.get(k, c) as u64) % p;
                }
            }
            for (c, &v) in acc.iter().enumerate() {
                out.data[r * other.cols + c] = v as u32;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch("sub".into()));
        }
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| m.sub(a, b))
            .collect();
        Ok(FieldMatrix { data, ..*self })
    }

    pub fn pow(&self, k: usize) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut acc = Self::identity(self.rows, self.modulus);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool, LinalgError> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.modulus, |r, c| self.get(c, r) as u64)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), self.modulus, |r, c| {
            self.get(rows[r], cols[c]) as u64
        })
    }

    /// Row echelon rank, pivoting on the first nonzero entry of each column.
    pub fn rank(&self) -> usize {
        let m = self.modulus;
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&r| a.get(r, c) != 0) else {
                continue;
            };
            a.swap_rows(piv, rank);
            let inv = m.inv(a.get(rank, c)).expect("pivot is nonzero");
            for r in rank + 1..a.rows {
                let f = a.get(r, c);
                if f == 0 {
                    continue;
                }
                let f = m.mul(f, inv);
                for k in c..a.cols {
                    let v = m.sub(a.get(r, k), m.mul(f, a.get(rank, k)));
                    a.data[r * a.cols + k] = v;
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Rank by column operations, scanning rows; an independent path used to cross-check [`rank`](Self::rank).
    pub fn rank_by_columns(&self) -> usize {
        let m = self.modulus;
        let mut cols: Vec<Vec<u32>> = (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for r in 0..self.rows {
            let Some(piv) = (rank..cols.len()).find(|&c| cols[c][r] != 0) else {
                continue;
            };
            cols.swap(piv, rank);
            let inv = m.inv(cols[rank][r]).expect("pivot is nonzero");
            let pivot = cols[rank].clone();
            for col in cols.iter_mut().skip(rank + 1) {
                let f = m.mul(col[r], inv);
                if f == 0 {
                    continue;
                }
                for (x, &y) in col.iter_mut().zip(&pivot) {
                    *x = m.sub(*x, m.mul(f, y));
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn det(&self) -> Result<u32, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let m = self.modulus;
        let mut a = self.clone();
        let mut det = 1;
        for c in 0..a.cols {
            let Some(piv) = (c..a.rows).find(|&r| a.get(r, c) != 0) else {
                return Ok(0);
            };
            if piv != c {
                a.swap_rows(piv, c);
                det = m.neg(det);
            }
            let d = a.get(c, c);
            det = m.mul(det, d);
            let inv = m.inv(d)?;
            for r in c + 1..a.rows {
                let f = m.mul(a.get(r, c), inv);
                if f == 0 {
                    continue;
                }
                for k in c..a.cols {
                    let v = m.sub(a.get(r, k), m.mul(f, a.get(c, k)));
                    a.data[r * a.cols + k] = v;
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse; `None` for a singular matrix.
    pub fn inverse(&self) -> Result<Option<Self>, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let m = self.modulus;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n, m);
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a.get(r, c) != 0) else {
                return Ok(None);
            };
            a.swap_rows(piv, c);
            inv.swap_rows(piv, c);
            let s = m.inv(a.get(c, c))?;
            for k in 0..n {
                a.data[c * n + k] = m.mul(a.get(c, k), s);
                inv.data[c * n + k] = m.mul(inv.get(c, k), s);
            }
            for r in 0..n {
                let f = a.get(r, c);
                if r == c || f == 0 {
                    continue;
                }
                for k in 0..n {
                    a.data[r * n + k] = m.sub(a.get(r, k), m.mul(f, a.get(c, k)));
                    inv.data[r * n + k] = m.sub(inv.get(r, k), m.mul(f, inv.get(c, k)));
                }
            }
        }
        Ok(Some(inv))
    }

    pub fn rank_sequence(&self) -> Result<RankSequence, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let mut ranks = vec![self.rows];
        let mut power = Self::identity(self.rows, self.modulus);
        loop {
            let last = *ranks.last().unwrap();
            if last == 0 {
                return Ok(RankSequence { ranks, nilpotent: true });
            }
            power = power.mul(self)?;
            let r = power.rank();
            ranks.push(r);
            if r == last {
                return Ok(RankSequence { ranks, nilpotent: false });
            }
        }
    }

    pub fn jordan_type(&self) -> Result<Partition, LinalgError> {
        let seq = self.rank_sequence()?;
        if !seq.nilpotent {
            return Err(LinalgError::NotNilpotent);
        }
        Ok(Partition::from_rank_profile(&seq.ranks).expect("ranks of a nilpotent matrix form a valid profile"))
    }

    /// Least `m` with `X^m = 0`; 1 for the zero matrix.
    pub fn nilpotency_index(&self) -> Result<usize, LinalgError> {
        let seq = self.rank_sequence()?;
        if !seq.nilpotent {
            return Err(LinalgError::NotNilpotent);
        }
        Ok((seq.ranks.len() - 1).max(1))
    }
}
