//! The group `Z₂ⁿ`, its characters, and the Walsh transform.
//!
//! A [`GroupElement`] is an `n`-bit mask. It plays two roles: a character
//! `γ` of the dual group and a point `x` of `Z₂ⁿ`. The pairing between
//! them is `x^γ = (-1)^{|x ∧ γ|}`. Sign vectors map onto masks with a set
//! bit meaning `-1`, so the all-ones vector is the identity.
//!
//! Coordinates are 1-based at every public entry point and bit `j - 1`
//! stores coordinate `j`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::MAX_ORDER;

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        Err(Error::InvalidOrder(n))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    n: usize,
    bits: u64,
}

impl GroupElement {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_order(n)?;
        if bits & !low_mask(n) != 0 {
            return Err(Error::Parse(alloc::format!(
                "mask {bits:#x} has bits above position {}",
                n - 1
            )));
        }
        Ok(GroupElement { n, bits })
    }

    /// Caller guarantees `bits` fits in `n` bits.
    pub(crate) fn from_raw(n: usize, bits: u64) -> Self {
        debug_assert_eq!(bits & !low_mask(n), 0);
        GroupElement { n, bits }
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn all_ones(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(GroupElement { n, bits: low_mask(n) })
    }

    /// `π_j`, the element with a single 1 at coordinate `j` (1-based).
    pub fn basis(j: usize, n: usize) -> Result<Self> {
        check_order(n)?;
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, n });
        }
        Ok(GroupElement { n, bits: 1 << (j - 1) })
    }

    /// Sum of basis elements; repeated indices cancel.
    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut acc = Self::zero(n)?;
        for &j in indices {
            acc = acc + Self::basis(j, n)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_even(&self) -> bool {
        self.weight() % 2 == 0
    }

    /// 1-based coordinates where the element is 1, ascending.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.bits >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// `x^γ` with `self` as the character and `x` as the point.
    pub fn pair(&self, x: &GroupElement) -> i8 {
        character_sign(self.bits, x.bits)
    }
}

impl Add for GroupElement {
    type Output = GroupElement;

    /// Group addition (XOR). Panics if the orders differ.
    fn add(self, rhs: GroupElement) -> GroupElement {
        assert_eq!(self.n, rhs.n, "adding group elements of different orders");
        GroupElement { n: self.n, bits: self.bits ^ rhs.bits }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.bits)
    }
}

#[inline]
pub(crate) fn character_sign(gamma: u64, x: u64) -> i8 {
    if (gamma & x).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn weight(gamma: &GroupElement) -> u32 {
    gamma.weight()
}

pub fn basis_element(j: usize, n: usize) -> Result<GroupElement> {
    GroupElement::basis(j, n)
}

/// `u^γ`, the product of `u_j` over the coordinates where `γ` is 1.
pub fn evaluate_character(gamma: &GroupElement, u: &SignVector) -> Result<i8> {
    if gamma.n != u.n {
        return Err(Error::OrderMismatch { left: gamma.n, right: u.n });
    }
    Ok(character_sign(gamma.bits, u.mask))
}

/// A ±1 vector. Stored as the mask of its `-1` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector {
    n: usize,
    mask: u64,
}

impl SignVector {
    pub fn from_entries(entries: &[i64]) -> Result<Self> {
        check_order(entries.len())?;
        let mut mask = 0u64;
        for (i, &e) in entries.iter().enumerate() {
            match e {
                1 => {}
                -1 => mask |= 1 << i,
                other => return Err(Error::NotSign(other)),
            }
        }
        Ok(SignVector { n: entries.len(), mask })
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(SignVector { n, mask: 0 })
    }

    pub fn from_group_element(x: &GroupElement) -> Self {
        SignVector { n: x.n, mask: x.bits }
    }

    pub(crate) fn from_raw(n: usize, mask: u64) -> Self {
        debug_assert_eq!(mask & !low_mask(n), 0);
        SignVector { n, mask }
    }

    pub fn to_group_element(&self) -> GroupElement {
        GroupElement { n: self.n, bits: self.mask }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mask of the `-1` positions.
    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// Entry at 1-based coordinate `j`.
    pub fn get(&self, j: usize) -> Result<i8> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        Ok(if self.mask >> (j - 1) & 1 == 1 { -1 } else { 1 })
    }

    pub fn entries(&self) -> Vec<i8> {
        (0..self.n).map(|i| if self.mask >> i & 1 == 1 { -1 } else { 1 }).collect()
    }

    pub fn negated(&self) -> Self {
        SignVector { n: self.n, mask: self.mask ^ low_mask(self.n) }
    }

    /// Coordinate-wise quotient `a / b`. For ±1 entries this is the product.
    pub fn quotient(&self, other: &SignVector) -> Result<SignVector> {
        if self.n != other.n {
            return Err(Error::OrderMismatch { left: self.n, right: other.n });
        }
        Ok(SignVector { n: self.n, mask: self.mask ^ other.mask })
    }

    /// Cyclic shift: entry `j` of the result is entry `j + s` of `self`.
    pub fn rotated(&self, s: usize) -> SignVector {
        SignVector { n: self.n, mask: rotate_right(self.mask, s % self.n, self.n) }
    }
}

pub(crate) fn rotate_right(mask: u64, s: usize, n: usize) -> u64 {
    if s == 0 {
        return mask;
    }
    ((mask >> s) | (mask << (n - s))) & low_mask(n)
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// An `n × n` matrix with ±1 entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for &e in row {
                if e != 1 && e != -1 {
                    return Err(Error::NotSign(e));
                }
                entries.push(e as i8);
            }
        }
        Ok(SignMatrix { n, entries })
    }

    /// `c_{i,j} = x_{j-i+1}` with indices reduced into `1..=n`.
    pub fn circulant(u: &SignVector) -> Self {
        let n = u.n;
        let x = u.entries();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(x[(j + n - i) % n]);
            }
        }
        SignMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    /// Column `j` (1-based) as an element of `Z₂ⁿ`.
    pub fn column(&self, j: usize) -> Result<SignVector> {
        if j == 0 || j > self.n {
            return Err(Error::IndexOutOfRange { index: j, n: self.n });
        }
        let mut mask = 0u64;
        for i in 0..self.n {
            if self.entries[i * self.n + (j - 1)] == -1 {
                mask |= 1 << i;
            }
        }
        Ok(SignVector { n: self.n, mask })
    }

    pub fn columns(&self) -> Vec<SignVector> {
        (1..=self.n).map(|j| self.column(j).expect("in range")).collect()
    }

    /// Whether all pairs of distinct rows are orthogonal.
    pub fn is_hadamard(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| {
            (a + 1..n).all(|b| {
                let dot: i64 = (0..n)
                    .map(|c| i64::from(self.entries[a * n + c] * self.entries[b * n + c]))
                    .sum();
                dot == 0
            })
        })
    }
}

/// `Â(γ) = Σ_j a_j^γ` over the columns `a_j` of `a`.
pub fn matrix_fourier(a: &SignMatrix, gamma: &GroupElement) -> Result<i64> {
    if a.n != gamma.n {
        return Err(Error::OrderMismatch { left: a.n, right: gamma.n });
    }
    Ok(a.columns().iter().map(|c| i64::from(character_sign(gamma.bits, c.mask))).sum())
}

/// `Σ_{j,k} (a_j / a_k)^γ`, the expansion of `|Â(γ)|²` over column pairs.
pub fn character_double_sum(a: &SignMatrix, gamma: &GroupElement) -> Result<i64> {
    if a.n != gamma.n {
        return Err(Error::OrderMismatch { left: a.n, right: gamma.n });
    }
    let cols = a.columns();
    let mut total = 0i64;
    for aj in &cols {
        for ak in &cols {
            let q = aj.quotient(ak)?;
            total += i64::from(evaluate_character(gamma, &q)?);
        }
    }
    Ok(total)
}

/// Value of `Σ_{j,k} (h_j / h_k)^γ` at `γ = (1, …, 1)` forced on any `n × n`
/// ±1 matrix with pairwise orthogonal columns.
///
/// Diagonal terms give 1 each. Two orthogonal columns disagree in exactly
/// `n / 2` coordinates, so every off-diagonal quotient has `n / 2` entries
/// equal to -1 and its all-ones character is `(-1)^{n/2}`.
pub fn orthogonal_all_ones_double_sum(n: usize) -> Result<i64> {
    check_order(n)?;
    if n % 2 == 1 && n > 1 {
        return Err(Error::OddOrder(n));
    }
    let n = n as i64;
    let off_diagonal = if (n / 2) % 2 == 0 { 1 } else { -1 };
    Ok(n + n * (n - 1) * off_diagonal)
}

/// Unnormalised Walsh transform: `out[x] = Σ_γ f[γ]·x^γ`.
///
/// Applying it twice multiplies by the length.
pub fn walsh_transform<T>(values: &[T]) -> Result<Vec<T>>
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let mut out = values.to_vec();
    walsh_transform_in_place(&mut out)?;
    Ok(out)
}

pub fn walsh_transform_in_place<T>(values: &mut [T]) -> Result<()>
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let len = values.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let mut half = 1;
    while half < len {
        for block in values.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let sum = a.clone() + b.clone();
                let diff = a.clone() - b.clone();
                *a = sum;
                *b = diff;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// Sparse exact-rational function on `Z₂ⁿ`; absent keys are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshPolynomial {
    n: usize,
    coeffs: BTreeMap<u64, Rational>,
}

impl WalshPolynomial {
    pub fn new(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(WalshPolynomial { n, coeffs: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, gamma: &GroupElement, c: &Rational) -> Result<()> {
        if gamma.n != self.n {
            return Err(Error::OrderMismatch { left: self.n, right: gamma.n });
        }
        self.add_raw(gamma.bits, c);
        Ok(())
    }

    pub(crate) fn add_raw(&mut self, key: u64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn get(&self, gamma: &GroupElement) -> Rational {
        self.coeffs.get(&gamma.bits).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero terms in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (GroupElement, &Rational)> + '_ {
        let n = self.n;
        self.coeffs.iter().map(move |(&k, v)| (GroupElement::from_raw(n, k), v))
    }

    pub fn sum_of_coefficients(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// `Σ_γ c_γ u^γ`.
    pub fn evaluate(&self, u: &SignVector) -> Result<Rational> {
        if u.n != self.n {
            return Err(Error::OrderMismatch { left: self.n, right: u.n });
        }
        let mut acc = Rational::zero();
        for (&k, v) in &self.coeffs {
            if character_sign(k, u.mask) == 1 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        Ok(acc)
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); 1usize << self.n];
        for (&k, v) in &self.coeffs {
            out[k as usize] = v.clone();
        }
        out
    }

    pub fn from_dense(n: usize, values: &[Rational]) -> Result<Self> {
        check_order(n)?;
        if values.len() != 1usize << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, found: values.len() });
        }
        let coeffs = values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k as u64, v.clone()))
            .collect();
        Ok(WalshPolynomial { n, coeffs })
    }

    /// The unit function at `γ = 0`.
    pub fn delta(n: usize) -> Result<Self> {
        let mut p = Self::new(n)?;
        p.add_raw(0, &Rational::one());
        Ok(p)
    }

    /// The function `γ ↦ u^γ` as a dense vector.
    pub fn character_table(u: &SignVector) -> Vec<Rational> {
        (0..1u64 << u.n)
            .map(|g| crate::rational::from_i64(i64::from(character_sign(g, u.mask))))
            .collect()
    }
}

impl Add<&WalshPolynomial> for WalshPolynomial {
    type Output = WalshPolynomial;

    fn add(mut self, rhs: &WalshPolynomial) -> WalshPolynomial {
        assert_eq!(self.n, rhs.n, "adding polynomials of different orders");
        for (&k, v) in &rhs.coeffs {
            self.add_raw(k, v);
        }
        self
    }
}
