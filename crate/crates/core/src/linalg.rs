//! Streaming row-echelon elimination over `Q` and over prime fields.
//!
//! Rows arrive one at a time from a [`RowSource`]; each is reduced against
//! the current basis and kept only if it is independent. Nothing but the
//! basis is retained, so a source can generate its rows lazily.
//!
//! Over `Q` every basis row remembers the combination of input rows that
//! produced it, which is what [`solve_left`] returns. Over `Z/p` rows are
//! dense in the columns seen so far; that path is used for rank and for the
//! modular pre-pass that picks which input rows to replay exactly.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::rational::{bit_length, reduce_mod, Rational};
use crate::system::{Coset, MtilingSystem};

/// Sorted by column, no stored zeros.
pub type SparseVector = Vec<(usize, Rational)>;

const NO_PIVOT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => f.write_str("rational"),
            FieldKind::Prime(p) => write!(f, "prime({p})"),
        }
    }
}

/// Anything that can stream sparse rational rows over a fixed column space.
pub trait RowSource {
    fn ncols(&self) -> usize;
    fn nrows(&self) -> usize;
    fn rows(&self) -> Box<dyn Iterator<Item = SparseVector> + '_>;
    /// Upper bound on the rank known from structure; lets elimination stop
    /// early once reached.
    fn rank_bound(&self) -> usize {
        self.ncols().min(self.nrows())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: Vec<SparseVector>,
    ncols: usize,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { rows: Vec::new(), ncols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.rows.push(vec![(i, Rational::one())]);
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, found: r.len() });
            }
            m.push_row(r.iter().cloned().enumerate().collect())?;
        }
        Ok(m)
    }

    /// Sorts, merges duplicate columns and drops zeros.
    pub fn push_row(&mut self, entries: Vec<(usize, Rational)>) -> Result<()> {
        self.rows.push(normalize(entries, self.ncols)?);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, i: usize) -> &SparseVector {
        &self.rows[i]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &SparseVector> {
        self.rows.iter()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `Σ_i c_i · row_i` for sparse `(row, coefficient)` pairs.
    pub fn combine_rows(&self, coefficients: &[(usize, Rational)]) -> SparseVector {
        let mut acc: SparseVector = Vec::new();
        for (i, c) in coefficients {
            acc = axpy(&acc, &-c.clone(), &self.rows[*i]);
        }
        acc
    }
}

impl RowSource for SparseMatrix {
    fn ncols(&self) -> usize {
        self.ncols
    }

    fn nrows(&self) -> usize {
        self.rows.len()
    }

    fn rows(&self) -> Box<dyn Iterator<Item = SparseVector> + '_> {
        Box::new(self.rows.iter().cloned())
    }
}

impl RowSource for MtilingSystem {
    fn ncols(&self) -> usize {
        self.column_count()
    }

    fn nrows(&self) -> usize {
        self.row_count() as usize
    }

    fn rows(&self) -> Box<dyn Iterator<Item = SparseVector> + '_> {
        Box::new(MtilingSystem::rows(self).map(|r| r.to_sparse()))
    }

    fn rank_bound(&self) -> usize {
        (self.variable_count() as usize).min(self.nrows())
    }
}

pub(crate) fn normalize(mut entries: Vec<(usize, Rational)>, ncols: usize) -> Result<SparseVector> {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVector = Vec::with_capacity(entries.len());
    for (c, v) in entries {
        if c >= ncols {
            return Err(Error::DimensionMismatch { expected: ncols, found: c + 1 });
        }
        match out.last_mut() {
            Some((last, acc)) if *last == c => *acc += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    Ok(out)
}

/// `x - a·y`, merged.
fn axpy(x: &[(usize, Rational)], a: &Rational, y: &[(usize, Rational)]) -> SparseVector {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let cx = x.get(i).map_or(usize::MAX, |e| e.0);
        let cy = y.get(j).map_or(usize::MAX, |e| e.0);
        if cx < cy {
            out.push(x[i].clone());
            i += 1;
        } else if cy < cx {
            out.push((cy, -(a * &y[j].1)));
            j += 1;
        } else {
            let v = &x[i].1 - a * &y[j].1;
            if !v.is_zero() {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup(x: &[(usize, Rational)], col: usize) -> Option<&Rational> {
    x.binary_search_by_key(&col, |e| e.0).ok().map(|i| &x[i].1)
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EliminationStats {
    pub rows_seen: usize,
    /// Stored basis nonzeros minus the nonzeros of the input rows they came from.
    pub fill_in: i64,
    /// Largest numerator or denominator bit length in the basis (rational only).
    pub max_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub field: FieldKind,
    /// Pivot columns, ascending.
    pub pivot_columns: Vec<usize>,
    /// Ordinals of the input rows that entered the basis, in stream order.
    pub pivot_rows: Vec<usize>,
    pub stats: EliminationStats,
}

/// Exact streaming echelon form over `Q`.
///
/// Pivot column of a new basis row: the entry whose column appears in the
/// fewest existing basis rows, ties broken by lower column index.
pub struct RationalEchelon {
    ncols: usize,
    basis: Vec<SparseVector>,
    combos: Option<Vec<SparseVector>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<u32>,
    col_count: Vec<u32>,
    pivot_rows: Vec<usize>,
    input_nnz: i64,
    rows_seen: usize,
}

impl RationalEchelon {
    /// With `track`, every basis row carries its combination of input rows.
    pub fn new(ncols: usize, track: bool) -> Self {
        RationalEchelon {
            ncols,
            basis: Vec::new(),
            combos: if track { Some(Vec::new()) } else { None },
            pivots: Vec::new(),
            pivot_of_col: vec![NO_PIVOT; ncols],
            col_count: vec![0; ncols],
            pivot_rows: Vec::new(),
            input_nnz: 0,
            rows_seen: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, x: &mut SparseVector, mut combo: Option<&mut SparseVector>) {
        let mut pending: BTreeSet<u32> = x
            .iter()
            .map(|e| self.pivot_of_col[e.0])
            .filter(|&b| b != NO_PIVOT)
            .collect();
        while let Some(i) = pending.pop_first() {
            let i = i as usize;
            let a = match lookup(x, self.pivots[i]) {
                Some(a) => a.clone(),
                None => continue,
            };
            let row = &self.basis[i];
            *x = axpy(x, &a, row);
            for &(c, _) in row {
                let b = self.pivot_of_col[c];
                if b != NO_PIVOT && b as usize > i {
                    pending.insert(b);
                }
            }
            if let (Some(combo), Some(combos)) = (combo.as_deref_mut(), self.combos.as_ref()) {
                *combo = axpy(combo, &a, &combos[i]);
            }
        }
    }

    /// Adds the next input row; returns whether it was independent.
    pub fn push(&mut self, mut row: SparseVector) -> bool {
        let ordinal = self.rows_seen;
        self.rows_seen += 1;
        let nnz = row.len() as i64;
        let mut combo: SparseVector = vec![(ordinal, Rational::one())];
        let tracking = self.combos.is_some();
        self.reduce(&mut row, if tracking { Some(&mut combo) } else { None });
        if row.is_empty() {
            return false;
        }
        let (pivot, pivot_value) = row
            .iter()
            .min_by_key(|e| (self.col_count[e.0], e.0))
            .map(|e| (e.0, e.1.clone()))
            .expect("nonempty");
        let inv = pivot_value.recip();
        for e in row.iter_mut() {
            e.1 *= &inv;
            self.col_count[e.0] += 1;
        }
        if let Some(combos) = self.combos.as_mut() {
            for e in combo.iter_mut() {
                e.1 *= &inv;
            }
            combos.push(combo);
        }
        self.pivot_of_col[pivot] = self.basis.len() as u32;
        self.pivots.push(pivot);
        self.pivot_rows.push(ordinal);
        self.input_nnz += nnz;
        self.basis.push(row);
        true
    }

    /// Input-row coefficients `c` with `Σ c_k row_k = target`, if any.
    pub fn express(&self, target: &SparseVector) -> Option<SparseVector> {
        assert!(self.combos.is_some(), "express needs a tracking echelon");
        let mut x = target.clone();
        let mut acc: SparseVector = Vec::new();
        self.reduce(&mut x, Some(&mut acc));
        if !x.is_empty() {
            return None;
        }
        Some(acc.into_iter().map(|(c, v)| (c, -v)).collect())
    }

    pub fn result(&self) -> RankResult {
        let mut pivot_columns = self.pivots.clone();
        pivot_columns.sort_unstable();
        let stored: i64 = self.basis.iter().map(|r| r.len() as i64).sum();
        let max_bits = self
            .basis
            .iter()
            .flat_map(|r| r.iter().map(|e| bit_length(&e.1)))
            .max()
            .unwrap_or(0);
        RankResult {
            rank: self.basis.len(),
            field: FieldKind::Rational,
            pivot_columns,
            pivot_rows: self.pivot_rows.clone(),
            stats: EliminationStats {
                rows_seen: self.rows_seen,
                fill_in: stored - self.input_nnz,
                max_bits,
            },
        }
    }

    /// Basis of `{x : A x = 0}`, one dense vector per free column.
    pub fn kernel(mut self) -> Vec<Vec<Rational>> {
        // Back substitution to reduced echelon form. Row k never holds the
        // pivot of an earlier row, so clearing pivots from the last row
        // backwards keeps every processed row clean.
        let r = self.basis.len();
        for k in (0..r).rev() {
            let pk = self.pivots[k];
            let (head, tail) = self.basis.split_at_mut(k);
            let row_k = &tail[0];
            for row_i in head.iter_mut() {
                if let Some(a) = lookup(row_i, pk).cloned() {
                    *row_i = axpy(row_i, &a, row_k);
                }
            }
        }
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if self.pivot_of_col[free] != NO_PIVOT {
                continue;
            }
            let mut v = vec![Rational::zero(); self.ncols];
            v[free] = Rational::one();
            for (i, row) in self.basis.iter().enumerate() {
                if let Some(a) = lookup(row, free) {
                    v[self.pivots[i]] = -a.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// Barrett reduction for a modulus below `2^32`.
#[derive(Debug, Clone, Copy)]
struct Modulus {
    p: u64,
    m: u64,
}

impl Modulus {
    fn new(p: u64) -> Self {
        Modulus { p, m: u64::MAX / p }
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        let q = ((u128::from(x) * u128::from(self.m)) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime (Fermat).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A prime in `(2^30, 2^31)` drawn deterministically from `seed`.
pub fn random_prime(seed: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let candidate = (1u64 << 30) | (rng.next_u64() & ((1 << 30) - 1)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// Echelon form over `Z/p`, rows dense over the columns seen so far.
pub struct ModularEchelon {
    modulus: Modulus,
    dense_of_col: Vec<u32>,
    col_of_dense: Vec<usize>,
    basis: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    pivot_rows: Vec<usize>,
    input_nnz: i64,
    rows_seen: usize,
}

impl ModularEchelon {
    /// `p` must be a prime below `2^32`.
    pub fn new(ncols: usize, p: u64) -> Self {
        assert!(p > 1 && p < 1 << 32);
        ModularEchelon {
            modulus: Modulus::new(p),
            dense_of_col: vec![NO_PIVOT; ncols],
            col_of_dense: Vec::new(),
            basis: Vec::new(),
            pivots: Vec::new(),
            pivot_rows: Vec::new(),
            input_nnz: 0,
            rows_seen: 0,
        }
    }

    pub fn prime(&self) -> u64 {
        self.modulus.p
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn push(&mut self, row: &[(usize, Rational)]) -> Result<bool> {
        let p = self.modulus.p;
        let ordinal = self.rows_seen;
        self.rows_seen += 1;
        let mut entries = Vec::with_capacity(row.len());
        for (c, v) in row {
            let r = reduce_mod(v, p).ok_or(Error::UnluckyPrime(p))?;
            if self.dense_of_col[*c] == NO_PIVOT {
                self.dense_of_col[*c] = self.col_of_dense.len() as u32;
                self.col_of_dense.push(*c);
            }
            entries.push((self.dense_of_col[*c] as usize, r));
        }
        let mut x = vec![0u64; self.col_of_dense.len()];
        for (d, r) in entries {
            x[d] = (x[d] + r) % p;
        }
        for (row_i, &piv) in self.basis.iter().zip(&self.pivots) {
            let a = match x.get(piv) {
                Some(&a) if a != 0 => a,
                _ => continue,
            };
            let f = p - a;
            let m = self.modulus;
            // Basis rows vanish before their own pivot.
            for (xv, rv) in x[piv..].iter_mut().zip(&row_i[piv..]) {
                *xv = m.reduce(*xv + f * rv);
            }
        }
        let Some(pivot) = x.iter().position(|&v| v != 0) else {
            return Ok(false);
        };
        let inv = inv_mod(x[pivot], p);
        for v in x.iter_mut() {
            *v = self.modulus.reduce(*v * inv);
        }
        self.pivots.push(pivot);
        self.pivot_rows.push(ordinal);
        self.input_nnz += row.len() as i64;
        self.basis.push(x);
        Ok(true)
    }

    pub fn result(&self) -> RankResult {
        let mut pivot_columns: Vec<usize> = self.pivots.iter().map(|&d| self.col_of_dense[d]).collect();
        pivot_columns.sort_unstable();
        let stored: i64 = self.basis.iter().map(|r| r.iter().filter(|&&v| v != 0).count() as i64).sum();
        RankResult {
            rank: self.basis.len(),
            field: FieldKind::Prime(self.modulus.p),
            pivot_columns,
            pivot_rows: self.pivot_rows.clone(),
            stats: EliminationStats {
                rows_seen: self.rows_seen,
                fill_in: stored - self.input_nnz,
                max_bits: 0,
            },
        }
    }
}

/// Row-echelon rank. Over a prime field the result is exact for that field
/// and a lower bound for the rank over `Q`.
pub fn rank(source: &dyn RowSource, field: FieldKind) -> Result<RankResult> {
    let bound = source.rank_bound();
    match field {
        FieldKind::Rational => {
            let mut ech = RationalEchelon::new(source.ncols(), false);
            for row in source.rows() {
                if ech.rank() >= bound {
                    break;
                }
                ech.push(row);
            }
            Ok(ech.result())
        }
        FieldKind::Prime(p) => {
            let mut ech = ModularEchelon::new(source.ncols(), p);
            for row in source.rows() {
                if ech.rank() >= bound {
                    break;
                }
                ech.push(&row)?;
            }
            Ok(ech.result())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftSolution {
    /// `(input row ordinal, weight)`, ascending, nonzero.
    pub coefficients: SparseVector,
    /// Prime used for the pivot-row pre-pass.
    pub prime: u64,
    /// Whether the exact replay needed every row rather than just the
    /// rows selected modulo the prime.
    pub full_replay: bool,
}

/// Finds `c` with `cᵀA = target` exactly, or `None` if the target is outside
/// the row space.
///
/// Rows that are dependent on earlier rows modulo a seeded random prime are
/// skipped in the exact pass. If that subset does not reach the target, the
/// exact pass is rerun over all rows, so `None` is always a true answer.
pub fn solve_left(source: &dyn RowSource, target: &SparseVector, seed: u64) -> Result<Option<LeftSolution>> {
    let target = normalize(target.clone(), source.ncols())?;
    let prime = random_prime(seed);
    let pre = rank(source, FieldKind::Prime(prime));
    let selected: Option<Vec<usize>> = match pre {
        Ok(r) => Some(r.pivot_rows),
        Err(Error::UnluckyPrime(_)) => None,
        Err(e) => return Err(e),
    };
    if let Some(selected) = selected {
        if let Some(c) = exact_solve(source, &target, Some(&selected)) {
            return Ok(Some(LeftSolution { coefficients: c, prime, full_replay: false }));
        }
    }
    Ok(exact_solve(source, &target, None).map(|c| LeftSolution { coefficients: c, prime, full_replay: true }))
}

fn exact_solve(source: &dyn RowSource, target: &SparseVector, only: Option<&[usize]>) -> Option<SparseVector> {
    let mut ech = RationalEchelon::new(source.ncols(), true);
    let mut ordinals = Vec::new();
    let mut wanted = only.map(|s| s.iter().copied().peekable());
    for (k, row) in source.rows().enumerate() {
        if let Some(w) = wanted.as_mut() {
            match w.peek() {
                Some(&next) if next == k => {
                    w.next();
                }
                Some(_) => continue,
                None => break,
            }
        }
        ordinals.push(k);
        ech.push(row);
    }
    ech.express(target)
        .map(|c| c.into_iter().map(|(local, v)| (ordinals[local], v)).collect())
}

/// Basis of the right kernel `{x : A x = 0}` over `Q`.
pub fn kernel_basis(source: &dyn RowSource) -> Vec<Vec<Rational>> {
    let mut ech = RationalEchelon::new(source.ncols(), false);
    for row in source.rows() {
        ech.push(row);
    }
    ech.kernel()
}

/// `Σ_k c_k · row_k` streamed from the source.
pub fn combine(source: &dyn RowSource, coefficients: &SparseVector) -> SparseVector {
    let mut acc: SparseVector = Vec::new();
    let mut it = coefficients.iter().peekable();
    for (k, row) in source.rows().enumerate() {
        match it.peek() {
            Some((idx, c)) if *idx == k => {
                acc = axpy(&acc, &-c.clone(), &row);
                it.next();
            }
            Some(_) => {}
            None => break,
        }
    }
    acc
}

/// Rank of an Mtiling system. Rows never mix parity cosets, so the two
/// cosets of a `Both` system are eliminated separately and added up;
/// reported pivot rows use the `Both` stream ordinals.
pub fn system_rank(system: &MtilingSystem, field: FieldKind, cap: usize) -> Result<RankResult> {
    if system.coset() != Coset::Both {
        return rank(system, field);
    }
    let n = system.n();
    let mut merged: Option<RankResult> = None;
    for coset in [Coset::Even, Coset::Odd] {
        let part = crate::system::build_system(n, coset, cap)?;
        let mut r = rank(&part, field)?;
        r.pivot_rows = r
            .pivot_rows
            .iter()
            .map(|&i| {
                let (g, d) = part.row_key(i as u64);
                system.row_index(g, d) as usize
            })
            .collect();
        merged = Some(match merged {
            None => r,
            Some(mut m) => {
                m.rank += r.rank;
                m.pivot_columns.extend(r.pivot_columns);
                m.pivot_columns.sort_unstable();
                m.pivot_rows.extend(r.pivot_rows);
                m.pivot_rows.sort_unstable();
                m.stats.rows_seen += r.stats.rows_seen;
                m.stats.fill_in += r.stats.fill_in;
                m.stats.max_bits = m.stats.max_bits.max(r.stats.max_bits);
                m
            }
        });
    }
    Ok(merged.expect("two cosets"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::from_i64;
    use crate::system::build_system;
    use crate::walsh::{SignVector, WalshPolynomial};
    use crate::oracle;

    fn q(v: i64) -> Rational {
        from_i64(v)
    }

    #[test]
    fn identity_rank_and_solve() {
        let id = SparseMatrix::identity(4);
        assert_eq!(rank(&id, FieldKind::Rational).unwrap().rank, 4);
        assert_eq!(rank(&id, FieldKind::Prime(random_prime(1))).unwrap().rank, 4);
        let sol = solve_left(&id, &vec![(0, q(1))], 7).unwrap().unwrap();
        assert_eq!(sol.coefficients, vec![(0, q(1))]);
        assert!(kernel_basis(&id).is_empty());
    }

    #[test]
    fn push_row_validates_columns() {
        let mut m = SparseMatrix::new(3);
        assert!(m.push_row(vec![(3, q(1))]).is_err());
        m.push_row(vec![(2, q(1)), (0, q(2)), (2, q(-1))]).unwrap();
        assert_eq!(m.row(0), &vec![(0, q(2))]);
    }

    #[test]
    fn dependent_rows_and_kernel() {
        let rows: Vec<Vec<Rational>> = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        let m = SparseMatrix::from_dense(&rows).unwrap();
        let r = rank(&m, FieldKind::Rational).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_rows, vec![0, 2]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        for row in &rows {
            let dot = row.iter().zip(&k[0]).fold(q(0), |a, (x, y)| a + x * y);
            assert!(dot.is_zero());
        }
        let target = vec![(0, q(1)), (1, q(3)), (2, q(4))];
        let sol = solve_left(&m, &target, 3).unwrap().unwrap();
        assert_eq!(combine(&m, &sol.coefficients), target);
        assert!(sol.coefficients.iter().all(|(i, _)| *i != 1));
        assert!(solve_left(&m, &vec![(2, q(1))], 3).unwrap().is_none());
    }

    #[test]
    fn primes_are_in_range_and_deterministic() {
        for seed in 0..5 {
            let p = random_prime(seed);
            assert!(p > 1 << 30 && p < 1 << 31);
            assert!(is_prime(p));
            assert_eq!(p, random_prime(seed));
        }
        assert_ne!(random_prime(1), random_prime(2));
    }

    #[test]
    fn barrett_matches_remainder() {
        let p = random_prime(9);
        let m = Modulus::new(p);
        for x in [0u64, 1, p - 1, p, p + 1, u64::MAX, (p - 1) * (p - 1) + p - 1, 1 << 63] {
            assert_eq!(m.reduce(x), x % p);
        }
    }

    #[test]
    fn order_four_system_is_rank_deficient() {
        let sys = build_system(4, Coset::Both, 24).unwrap();
        let r = rank(&sys, FieldKind::Rational).unwrap();
        assert!(r.rank < 16);
        assert_eq!(r.rank, 8);
        assert_eq!(system_rank(&sys, FieldKind::Rational, 24).unwrap().rank, 8);
        let u = SignVector::from_entries(&[-1, 1, 1, 1]).unwrap();
        let m = WalshPolynomial::character_table(&u);
        assert!(sys.rows().all(|row| row.apply(&m).is_zero()));
        assert!(solve_left(&sys, &vec![(0, q(1))], 11).unwrap().is_none());
    }

    #[test]
    fn order_four_kernel_contains_every_generator() {
        let sys = build_system(4, Coset::Both, 24).unwrap();
        let kernel = kernel_basis(&sys);
        assert_eq!(kernel.len(), 8);
        for v in &kernel {
            for row in sys.rows() {
                assert!(row.apply(v).is_zero());
            }
        }
        let basis = SparseMatrix::from_dense(&kernel).unwrap();
        let gens = oracle::brute_force_generators(4, false).unwrap().generators;
        assert_eq!(gens.len(), 8);
        for u in gens {
            let chars: SparseVector =
                WalshPolynomial::character_table(&u).into_iter().enumerate().collect();
            let sol = solve_left(&basis, &chars, 5).unwrap();
            assert!(sol.is_some(), "{u} not in kernel span");
        }
    }

    #[test]
    fn order_eight_system_has_full_rank() {
        let sys = build_system(8, Coset::Both, 24).unwrap();
        assert_eq!(system_rank(&sys, FieldKind::Rational, 24).unwrap().rank, 256);
        let even = build_system(8, Coset::Even, 24).unwrap();
        let r = rank(&even, FieldKind::Rational).unwrap();
        assert_eq!(r.rank, 128);
    }

    #[test]
    fn modular_and_rational_ranks_agree() {
        let primes = [random_prime(101), random_prime(202), random_prime(303)];
        assert!(primes[0] != primes[1] && primes[1] != primes[2] && primes[0] != primes[2]);
        for n in [2usize, 4, 6, 8] {
            for coset in [Coset::Even, Coset::Odd, Coset::Both] {
                let sys = build_system(n, coset, 24).unwrap();
                let exact = rank(&sys, FieldKind::Rational).unwrap().rank;
                for &p in &primes {
                    assert_eq!(rank(&sys, FieldKind::Prime(p)).unwrap().rank, exact, "n={n} {coset} p={p}");
                }
            }
        }
    }

    #[test]
    fn unlucky_prime_is_reported() {
        let mut m = SparseMatrix::new(1);
        m.push_row(vec![(0, Rational::new(1.into(), 7.into()))]).unwrap();
        assert_eq!(rank(&m, FieldKind::Prime(7)).unwrap_err(), Error::UnluckyPrime(7));
    }
}
