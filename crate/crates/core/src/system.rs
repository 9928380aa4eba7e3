//! The pair-shift system and the `S` polynomial.
//!
//! For a generator `u` and every shift `d`, cyclic orthogonality gives
//! `Σ_{j-k≡d} M(γ + π_j + π_k) = u^γ Σ_j u_j u_{j+d} = 0`. Each `(γ, d)`
//! yields one sparse row over the unknowns `M(γ')`. At `d = n/2` every
//! antipodal pair is counted once (see [`crate::CONVENTION_TAG`]).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{from_i64, Rational};
use crate::walsh::{self, check_order, walsh_transform, GroupElement, WalshPolynomial};

/// Which parity classes of `γ` contribute rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coset {
    Even,
    Odd,
    Both,
}

impl Coset {
    pub fn contains(&self, mask: u64) -> bool {
        match self {
            Coset::Even => mask.count_ones() % 2 == 0,
            Coset::Odd => mask.count_ones() % 2 == 1,
            Coset::Both => true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Coset::Even => "even",
            Coset::Odd => "odd",
            Coset::Both => "both",
        }
    }

    /// Number of masks of `Z₂ⁿ` in this coset.
    pub fn size(&self, n: usize) -> u64 {
        match self {
            Coset::Both => 1 << n,
            _ => 1 << (n - 1),
        }
    }

    /// Position of `mask` in the ascending list of this coset's members.
    ///
    /// Each pair `{2i, 2i + 1}` holds exactly one element of either parity.
    pub fn position(&self, mask: u64) -> u64 {
        match self {
            Coset::Both => mask,
            _ => mask >> 1,
        }
    }

    /// Inverse of [`Coset::position`].
    pub fn member(&self, pos: u64) -> u64 {
        match self {
            Coset::Both => pos,
            Coset::Even | Coset::Odd => {
                let m = pos << 1;
                let want_odd = *self == Coset::Odd;
                if (m.count_ones() % 2 == 1) == want_odd {
                    m
                } else {
                    m | 1
                }
            }
        }
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Coset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Coset::Even),
            "odd" => Ok(Coset::Odd),
            "both" => Ok(Coset::Both),
            other => Err(Error::Parse(alloc::format!("unknown coset {other:?}"))),
        }
    }
}

/// One row `Σ_{j-k≡d} M(γ + π_j + π_k)` with accumulated coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquationRow {
    gamma: GroupElement,
    d: usize,
    terms: Vec<(u64, u32)>,
}

impl EquationRow {
    pub fn gamma(&self) -> GroupElement {
        self.gamma
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(γ', coefficient)` in ascending mask order.
    pub fn terms(&self) -> impl Iterator<Item = (GroupElement, u32)> + '_ {
        let n = self.gamma.n();
        self.terms.iter().map(move |&(k, c)| (GroupElement::from_raw(n, k), c))
    }

    pub fn raw_terms(&self) -> &[(u64, u32)] {
        &self.terms
    }

    pub fn coefficient(&self, key: &GroupElement) -> u32 {
        self.terms
            .binary_search_by_key(&key.bits(), |&(k, _)| k)
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.terms.iter().map(|&(_, c)| u64::from(c)).sum()
    }

    /// `Σ coefficient · values[γ']` for a dense assignment of the unknowns.
    pub fn apply(&self, values: &[Rational]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, &(k, c)| {
            acc + &values[k as usize] * from_i64(i64::from(c))
        })
    }

    /// Columns are masks.
    pub fn to_sparse(&self) -> Vec<(usize, Rational)> {
        self.terms.iter().map(|&(k, c)| (k as usize, from_i64(i64::from(c)))).collect()
    }
}

fn check_shift(d: usize, n: usize) -> Result<()> {
    check_order(n)?;
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if d == 0 || d > n / 2 {
        return Err(Error::ShiftOutOfRange { d, n });
    }
    Ok(())
}

/// Masks `π_j + π_{j-d}`: `j = 1..=n` for `d < n/2`, `j = 1..=n/2` at `d = n/2`.
pub fn pair_masks(n: usize, d: usize) -> Result<Vec<u64>> {
    check_shift(d, n)?;
    let span = if 2 * d == n { n / 2 } else { n };
    Ok((0..span).map(|i| (1u64 << i) | (1u64 << ((i + n - d) % n))).collect())
}

fn row_from_pairs(gamma: GroupElement, d: usize, pairs: &[u64]) -> EquationRow {
    let mut keys: Vec<u64> = pairs.iter().map(|p| p ^ gamma.bits()).collect();
    keys.sort_unstable();
    let mut terms: Vec<(u64, u32)> = Vec::with_capacity(keys.len());
    for k in keys {
        match terms.last_mut() {
            Some((last, c)) if *last == k => *c += 1,
            _ => terms.push((k, 1)),
        }
    }
    EquationRow { gamma, d, terms }
}

pub fn build_row(gamma: &GroupElement, d: usize, n: usize) -> Result<EquationRow> {
    if gamma.n() != n {
        return Err(Error::OrderMismatch { left: n, right: gamma.n() });
    }
    Ok(row_from_pairs(*gamma, d, &pair_masks(n, d)?))
}

/// The system of all rows `(γ, d)` with `γ` in a coset, streamed in
/// lexicographic `(γ, d)` order.
#[derive(Debug, Clone)]
pub struct MtilingSystem {
    n: usize,
    coset: Coset,
    pairs: Vec<Vec<u64>>,
}

pub fn build_system(n: usize, coset: Coset, cap: usize) -> Result<MtilingSystem> {
    check_order(n)?;
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n > cap {
        return Err(Error::OrderTooLarge { n, cap });
    }
    let pairs = (1..=n / 2).map(|d| pair_masks(n, d)).collect::<Result<Vec<_>>>()?;
    Ok(MtilingSystem { n, coset, pairs })
}

impl MtilingSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coset(&self) -> Coset {
        self.coset
    }

    pub fn shifts(&self) -> usize {
        self.n / 2
    }

    pub fn row_count(&self) -> u64 {
        self.shifts() as u64 * self.coset.size(self.n)
    }

    /// Unknowns `M(γ')` that rows of this coset can touch.
    pub fn variable_count(&self) -> u64 {
        self.coset.size(self.n)
    }

    /// Column index space: every mask of `Z₂ⁿ`.
    pub fn column_count(&self) -> usize {
        1usize << self.n
    }

    pub fn gammas(&self) -> impl Iterator<Item = u64> + '_ {
        let coset = self.coset;
        (0..coset.size(self.n)).map(move |p| coset.member(p))
    }

    pub fn row(&self, gamma: u64, d: usize) -> EquationRow {
        row_from_pairs(GroupElement::from_raw(self.n, gamma), d, &self.pairs[d - 1])
    }

    pub fn row_index(&self, gamma: u64, d: usize) -> u64 {
        self.coset.position(gamma) * self.shifts() as u64 + (d as u64 - 1)
    }

    pub fn row_key(&self, index: u64) -> (u64, usize) {
        let h = self.shifts() as u64;
        (self.coset.member(index / h), (index % h) as usize + 1)
    }

    pub fn rows(&self) -> impl Iterator<Item = EquationRow> + '_ {
        self.rows_in(0..self.coset.size(self.n))
    }

    /// Rows whose `γ` has coset position in `positions`.
    pub fn rows_in(&self, positions: Range<u64>) -> impl Iterator<Item = EquationRow> + '_ {
        positions.flat_map(move |p| {
            let g = self.coset.member(p);
            (1..=self.shifts()).map(move |d| self.row(g, d))
        })
    }
}

/// Coefficients of `Σ_{d=1}^{n-1} (Σ_j u_j u_{j+d})²` in the basis `u^γ`.
pub fn s_coefficients(n: usize) -> Result<WalshPolynomial> {
    check_order(n)?;
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for d in 1..n {
        let pairs: Vec<u64> = (0..n).map(|j| (1u64 << j) ^ (1u64 << ((j + d) % n))).collect();
        for a in &pairs {
            for b in &pairs {
                *counts.entry(a ^ b).or_insert(0) += 1;
            }
        }
    }
    let mut s = WalshPolynomial::new(n)?;
    for (k, c) in counts {
        s.add_raw(k, &from_i64(c));
    }
    Ok(s)
}

/// `(S ∗ M)(γ) = Σ_ρ M(γ + ρ) S(ρ)`, summed directly over the support of `S`.
pub fn convolve(s: &WalshPolynomial, m: &[Rational]) -> Result<Vec<Rational>> {
    let len = 1usize << s.n();
    if m.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: m.len() });
    }
    let terms: Vec<(u64, &Rational)> = s.iter().map(|(g, c)| (g.bits(), c)).collect();
    Ok((0..len as u64)
        .map(|g| {
            terms
                .iter()
                .fold(Rational::zero(), |acc, &(rho, c)| acc + &m[(g ^ rho) as usize] * c)
        })
        .collect())
}

/// Same as [`convolve`] through three Walsh transforms.
pub fn convolve_via_transform(s: &WalshPolynomial, m: &[Rational]) -> Result<Vec<Rational>> {
    let len = 1usize << s.n();
    if m.len() != len {
        return Err(Error::DimensionMismatch { expected: len, found: m.len() });
    }
    let fs = walsh_transform(&s.to_dense())?;
    let fm = walsh_transform(m)?;
    let product: Vec<Rational> = fs.iter().zip(&fm).map(|(a, b)| a * b).collect();
    let scale = from_i64(len as i64);
    Ok(walsh_transform(&product)?.into_iter().map(|v| v / &scale).collect())
}

/// `Σ_j u_j u_{j+d}` for a sign mask; shared with the oracle.
pub(crate) fn autocorrelation_raw(mask: u64, n: usize, d: usize) -> i64 {
    let rotated = walsh::rotate_right(mask, d % n, n);
    n as i64 - 2 * i64::from((mask ^ rotated).count_ones())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::{basis_element, SignVector};
    use alloc::vec;
    use num_traits::One;

    fn ge(n: usize, idx: &[usize]) -> u64 {
        GroupElement::from_indices(n, idx).unwrap().bits()
    }

    #[test]
    fn order_four_rows() {
        let zero = GroupElement::zero(4).unwrap();
        let r1 = build_row(&zero, 1, 4).unwrap();
        let keys: Vec<u64> = r1.raw_terms().iter().map(|t| t.0).collect();
        let mut want = vec![ge(4, &[1, 2]), ge(4, &[2, 3]), ge(4, &[3, 4]), ge(4, &[4, 1])];
        want.sort();
        assert_eq!(keys, want);
        assert!(r1.raw_terms().iter().all(|t| t.1 == 1));

        let r2 = build_row(&zero, 2, 4).unwrap();
        let keys: Vec<u64> = r2.raw_terms().iter().map(|t| t.0).collect();
        assert_eq!(keys, vec![ge(4, &[1, 3]), ge(4, &[2, 4])]);
        assert_eq!(r2.coefficient_sum(), 2);

        let g = GroupElement::from_indices(4, &[1, 2]).unwrap();
        let shifted = build_row(&g, 1, 4).unwrap();
        assert_eq!(shifted.coefficient(&zero), 1);
        for (k, c) in r1.terms() {
            assert_eq!(shifted.coefficient(&(k + g)), c);
        }
    }

    #[test]
    fn row_errors() {
        let z = GroupElement::zero(4).unwrap();
        assert_eq!(build_row(&z, 0, 4), Err(Error::ShiftOutOfRange { d: 0, n: 4 }));
        assert_eq!(build_row(&z, 3, 4), Err(Error::ShiftOutOfRange { d: 3, n: 4 }));
        let z5 = GroupElement::zero(5).unwrap();
        assert_eq!(build_row(&z5, 1, 5), Err(Error::OddOrder(5)));
        assert!(build_row(&z, 1, 6).is_err());
    }

    #[test]
    fn system_counts() {
        let s = build_system(4, Coset::Even, 24).unwrap();
        assert_eq!(s.row_count(), 16);
        assert_eq!(s.variable_count(), 8);
        assert_eq!(s.rows().count(), 16);
        let s = build_system(8, Coset::Both, 24).unwrap();
        assert_eq!(s.row_count(), 1024);
        assert_eq!(s.rows().count(), 1024);
        assert_eq!(build_system(26, Coset::Even, 24).unwrap_err(), Error::OrderTooLarge { n: 26, cap: 24 });
        assert_eq!(build_system(7, Coset::Even, 24).unwrap_err(), Error::OddOrder(7));
    }

    #[test]
    fn row_indices_follow_stream_order() {
        for coset in [Coset::Even, Coset::Odd, Coset::Both] {
            let s = build_system(6, coset, 24).unwrap();
            for (i, row) in s.rows().enumerate() {
                let g = row.gamma().bits();
                assert!(coset.contains(g));
                assert_eq!(s.row_index(g, row.d()), i as u64);
                assert_eq!(s.row_key(i as u64), (g, row.d()));
            }
        }
    }

    #[test]
    fn emitted_rows_satisfy_row_invariants() {
        for n in (2..=10).step_by(2) {
            let s = build_system(n, Coset::Both, 24).unwrap();
            for row in s.rows() {
                let parity = row.gamma().weight() % 2;
                assert!(row.terms().all(|(k, _)| k.weight() % 2 == parity));
                let want = if 2 * row.d() == n { n / 2 } else { n };
                assert_eq!(row.coefficient_sum(), want as u64);
            }
        }
    }

    #[test]
    fn rows_encode_cyclic_orthogonality() {
        // Σ coeff·u^{key} = u^γ · (Σ_j u_j u_{j+d}), halved at d = n/2.
        for n in (2..=10).step_by(2) {
            let sys = build_system(n, Coset::Both, 24).unwrap();
            let gammas: Vec<u64> = if n <= 8 { (0..1 << n).collect() } else { (0..1 << n).step_by(5).collect() };
            for &g in &gammas {
                for d in 1..=n / 2 {
                    let row = sys.row(g, d);
                    for u in 0..1u64 << n {
                        let lhs: i64 = row
                            .raw_terms()
                            .iter()
                            .map(|&(k, c)| i64::from(c) * i64::from(walsh::character_sign(k, u)))
                            .sum();
                        let auto = autocorrelation_raw(u, n, d);
                        let auto = if 2 * d == n {
                            assert_eq!(auto % 2, 0);
                            auto / 2
                        } else {
                            auto
                        };
                        assert_eq!(lhs, i64::from(walsh::character_sign(g, u)) * auto);
                    }
                }
            }
        }
    }

    #[test]
    fn rows_are_translates_of_the_zero_row() {
        for n in (2..=8).step_by(2) {
            let sys = build_system(n, Coset::Both, 24).unwrap();
            for d in 1..=n / 2 {
                let base = sys.row(0, d);
                for g in 0..1u64 << n {
                    let row = sys.row(g, d);
                    let mut moved: Vec<(u64, u32)> = base.raw_terms().iter().map(|&(k, c)| (k ^ g, c)).collect();
                    moved.sort();
                    assert_eq!(row.raw_terms(), &moved[..]);
                }
            }
        }
    }

    #[test]
    fn s_polynomial_small_orders() {
        for n in [4usize, 6, 8] {
            let s = s_coefficients(n).unwrap();
            let nn = (n * n) as i64;
            assert_eq!(s.get(&GroupElement::zero(n).unwrap()), from_i64(nn));
            assert_eq!(s.sum_of_coefficients(), from_i64((n as i64 - 1) * nn));
            for (g, _) in s.iter() {
                assert!(g.is_even());
                assert!([0, 2, 4].contains(&g.weight()));
            }
        }
    }

    /// Expands every `(d, j, k)` product of `Σ_d (Σ_j u_j u_{j+d})²` as an
    /// explicit monomial in `u` and collects exponents mod 2.
    fn symbolic_s(n: usize) -> BTreeMap<u64, i64> {
        let mut out = BTreeMap::new();
        for d in 1..n {
            for j in 0..n {
                for k in 0..n {
                    let mut exps = vec![0u8; n];
                    for idx in [j, (j + d) % n, k, (k + d) % n] {
                        exps[idx] += 1;
                    }
                    let key = exps.iter().enumerate().filter(|(_, e)| **e % 2 == 1).fold(0u64, |m, (i, _)| m | 1 << i);
                    *out.entry(key).or_insert(0) += 1;
                }
            }
        }
        out
    }

    #[test]
    fn s_polynomial_matches_symbolic_expansion() {
        for n in [4usize, 6] {
            let s = s_coefficients(n).unwrap();
            let sym = symbolic_s(n);
            assert_eq!(s.len(), sym.len());
            for (k, c) in sym {
                assert_eq!(s.get(&GroupElement::new(n, k).unwrap()), from_i64(c));
            }
        }
    }

    #[test]
    fn s_transform_is_the_autocorrelation_energy() {
        for n in 1..=8usize {
            let s = s_coefficients(n).unwrap();
            let values = walsh_transform(&s.to_dense()).unwrap();
            for u in 0..1u64 << n {
                let direct: i64 = (1..n).map(|d| autocorrelation_raw(u, n, d).pow(2)).sum();
                assert_eq!(values[u as usize], from_i64(direct));
                assert!(direct >= 0);
            }
        }
        let s4 = walsh_transform(&s_coefficients(4).unwrap().to_dense()).unwrap();
        let u = SignVector::from_entries(&[-1, 1, 1, 1]).unwrap();
        assert!(s4[u.mask() as usize].is_zero());
        assert_eq!(s4.iter().filter(|v| v.is_zero()).count(), 8);
    }

    #[test]
    fn convolution_cases() {
        let n = 4;
        let s = s_coefficients(n).unwrap();
        let delta = WalshPolynomial::delta(n).unwrap();
        let m: Vec<Rational> = (0..16).map(|i| from_i64(i * 3 - 7)).collect();
        assert_eq!(convolve(&delta, &m).unwrap(), m);

        let u = SignVector::from_entries(&[-1, 1, 1, 1]).unwrap();
        let chars = WalshPolynomial::character_table(&u);
        assert!(convolve(&s, &chars).unwrap().iter().all(Zero::is_zero));

        let mut e0 = vec![Rational::zero(); 16];
        e0[0] = Rational::one();
        assert_eq!(convolve(&s, &e0).unwrap(), s.to_dense());

        for m in [m, chars, e0] {
            assert_eq!(convolve(&s, &m).unwrap(), convolve_via_transform(&s, &m).unwrap());
        }
        assert!(convolve(&s, &[Rational::one()]).is_err());
    }

    #[test]
    fn basis_rows_use_one_based_pairs() {
        let p = pair_masks(6, 1).unwrap();
        assert!(p.contains(&(basis_element(1, 6).unwrap() + basis_element(6, 6).unwrap()).bits()));
        assert_eq!(pair_masks(6, 3).unwrap().len(), 3);
    }
}
