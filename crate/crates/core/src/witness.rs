//! Non-existence certificates.
//!
//! A certificate is a set of rational weights on rows of the pair-shift
//! system whose weighted sum is exactly the functional `M(0)`. Three forms
//! are produced:
//!
//! * `full`: one weight per row `(γ, d)`.
//! * `orbit-reduced`: one weight per row orbit under the symmetry group,
//!   keyed by the canonical row.
//! * `symmetric`: one weight `c_w` per even weight class; every row
//!   `(γ, d)` with `|γ| = w` gets `c_w`.
//!
//! Verification regenerates rows from scratch and never reuses solver state.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rank, solve_left, FieldKind, LeftSolution, SparseMatrix};
use crate::rational::{from_i64, Rational};
use crate::symmetry::{build_orbit_table, reduce_system, OrbitTable};
use crate::system::{build_system, Coset, MtilingSystem};
use crate::walsh::{check_order, GroupElement, WalshPolynomial};
use crate::CONVENTION_TAG;

/// Seed for the modular pre-pass unless the caller picks one.
pub const DEFAULT_PIVOT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertificateKind {
    Full,
    OrbitReduced,
    Symmetric,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            CertificateKind::Full => "full",
            CertificateKind::OrbitReduced => "orbit-reduced",
            CertificateKind::Symmetric => "symmetric",
        }
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CertificateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CertificateKind::Full),
            "orbit-reduced" => Ok(CertificateKind::OrbitReduced),
            "symmetric" => Ok(CertificateKind::Symmetric),
            other => Err(Error::Parse(alloc::format!("unknown certificate kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    Full,
    OrbitReduced,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub pivot_seed: u64,
    pub prime: u64,
    pub full_replay: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Weights {
    /// Keyed by `(γ mask, d)`.
    Rows(BTreeMap<(u64, usize), Rational>),
    /// Keyed by the weight `w` of `γ`.
    ByWeight(BTreeMap<usize, Rational>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub n: usize,
    pub kind: CertificateKind,
    pub convention: String,
    /// Coset the weighted rows come from.
    pub coset: Coset,
    pub provenance: Option<Provenance>,
    pub weights: Weights,
}

impl WitnessCertificate {
    pub fn weight_count(&self) -> usize {
        match &self.weights {
            Weights::Rows(w) => w.len(),
            Weights::ByWeight(w) => w.len(),
        }
    }

    /// Structural checks that do not need the rows.
    pub fn validate(&self) -> Result<()> {
        if self.convention != CONVENTION_TAG {
            return Err(Error::ConventionMismatch(self.convention.clone()));
        }
        check_order(self.n)?;
        if self.n % 2 == 1 {
            return Err(Error::OddOrder(self.n));
        }
        match (&self.kind, &self.weights) {
            (CertificateKind::Symmetric, Weights::ByWeight(w)) => {
                if self.coset != Coset::Even {
                    return Err(Error::Parse("symmetric certificates use the even coset".to_string()));
                }
                for &k in w.keys() {
                    if k % 2 == 1 || k > self.n {
                        return Err(Error::Parse(alloc::format!("weight class {k} is not an even weight ≤ {}", self.n)));
                    }
                }
                Ok(())
            }
            (CertificateKind::Full | CertificateKind::OrbitReduced, Weights::Rows(w)) => {
                for &(g, d) in w.keys() {
                    GroupElement::new(self.n, g)?;
                    if d == 0 || d > self.n / 2 {
                        return Err(Error::ShiftOutOfRange { d, n: self.n });
                    }
                    if !self.coset.contains(g) {
                        return Err(Error::Parse(alloc::format!("row {g:#x} is outside the {} coset", self.coset)));
                    }
                }
                Ok(())
            }
            _ => Err(Error::Parse(alloc::format!("weights do not match kind {}", self.kind))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WitnessOptions {
    pub coset: Coset,
    pub pivot_seed: u64,
    pub cap: usize,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { coset: Coset::Even, pivot_seed: DEFAULT_PIVOT_SEED, cap: crate::DEFAULT_ORDER_CAP }
    }
}

/// Weights on system rows summing to `M(0)`, or `None` when the system is
/// rank-deficient at `M(0)` (a circulant Hadamard matrix of order `n` exists).
///
/// Among the many witnesses, the one returned is supported on the rows that
/// are independent of earlier rows in stream order.
pub fn find_witness(n: usize, mode: WitnessMode, options: &WitnessOptions) -> Result<Option<WitnessCertificate>> {
    let system = build_system(n, options.coset, options.cap)?;
    if !options.coset.contains(0) {
        return Ok(None);
    }
    let target = vec![(0usize, Rational::one())];
    let (kind, weights, sol) = match mode {
        WitnessMode::Full => {
            let Some(sol) = solve_left(&system, &target, options.pivot_seed)? else {
                return Ok(None);
            };
            let weights = sol
                .coefficients
                .iter()
                .map(|(i, c)| (system.row_key(*i as u64), c.clone()))
                .collect();
            (CertificateKind::Full, weights, sol)
        }
        WitnessMode::OrbitReduced => {
            let orbits = build_orbit_table(n, options.cap)?;
            let reduced = reduce_system(&system, &orbits)?;
            let target = reduced.target().expect("coset holds 0");
            let Some(sol) = solve_left(reduced.matrix(), &target, options.pivot_seed)? else {
                return Ok(None);
            };
            (CertificateKind::OrbitReduced, reduced.weights_by_row(&sol.coefficients), sol)
        }
    };
    Ok(Some(WitnessCertificate {
        n,
        kind,
        convention: CONVENTION_TAG.to_string(),
        coset: options.coset,
        provenance: Some(Provenance {
            pivot_seed: options.pivot_seed,
            prime: sol.prime,
            full_replay: sol.full_replay,
        }),
        weights: Weights::Rows(weights),
    }))
}

/// Coefficients of the aggregated single-weight expressions.
///
/// Row `w` (even) expresses `Σ_{|γ|=w} Σ_d Σ_{j-k≡d} M(γ + π_j + π_k)` in
/// the basis `B_v = Σ_{|γ'|=v} M(γ')`. Since every unordered position
/// pair occurs once across `d = 1..=n/2`, the coefficient on `M(γ')` only
/// depends on `|γ'|`:
///
/// * `v = w - 2`: both flipped positions lie outside `γ'`, `C(n - w + 2, 2)`;
/// * `v = w`: one inside, one outside, `w (n - w)`;
/// * `v = w + 2`: both inside, `C(w + 2, 2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TridiagonalSystem {
    n: usize,
    /// `(sub, diag, super)` per row; out-of-range neighbours are 0.
    rows: Vec<[u64; 3]>,
}

fn choose2(m: u64) -> u64 {
    m * m.saturating_sub(1) / 2
}

pub fn build_tridiagonal(n: usize) -> Result<TridiagonalSystem> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    let size = n / 2 + 1;
    let nn = n as u64;
    let rows = (0..size)
        .map(|i| {
            let w = 2 * i as u64;
            let sub = if i > 0 { choose2(nn - w + 2) } else { 0 };
            let sup = if i + 1 < size { choose2(w + 2) } else { 0 };
            [sub, w * (nn - w), sup]
        })
        .collect();
    Ok(TridiagonalSystem { n, rows })
}

impl TridiagonalSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Coefficient of `B_v` in row `w` (both even weights).
    pub fn entry(&self, w: usize, v: usize) -> u64 {
        let (i, j) = (w / 2, v / 2);
        if i >= self.size() || j >= self.size() {
            return 0;
        }
        match j as isize - i as isize {
            -1 => self.rows[i][0],
            0 => self.rows[i][1],
            1 => self.rows[i][2],
            _ => 0,
        }
    }

    pub fn dense_rows(&self) -> Vec<Vec<u64>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.entry(2 * i, 2 * j)).collect())
            .collect()
    }

    /// Row `i` is the expression for weight `2i`, column `j` is `B_{2j}`.
    pub fn to_matrix(&self) -> SparseMatrix {
        let mut m = SparseMatrix::new(self.size());
        for i in 0..self.size() {
            let entries = (i.saturating_sub(1)..(i + 2).min(self.size()))
                .map(|j| (j, from_i64(self.entry(2 * i, 2 * j) as i64)))
                .collect();
            m.push_row(entries).expect("columns in range");
        }
        m
    }
}

pub fn tridiagonal_rank(t: &TridiagonalSystem) -> usize {
    rank(&t.to_matrix(), FieldKind::Rational).expect("rational rank").rank
}

fn symmetric_solution(n: usize) -> Result<Option<(BTreeMap<usize, Rational>, LeftSolution)>> {
    if n == 0 || n % 4 != 0 {
        return Err(Error::NotDivisibleByFour(n));
    }
    let t = build_tridiagonal(n)?;
    let target = vec![(0usize, Rational::one())];
    Ok(solve_left(&t.to_matrix(), &target, DEFAULT_PIVOT_SEED)?.map(|sol| {
        let weights = sol.coefficients.iter().map(|(i, c)| (2 * i, c.clone())).collect();
        (weights, sol)
    }))
}

/// Weights `c_w` with `Σ_w c_w · row_w = B_0 = M(0)`, or `None` when `M(0)`
/// is outside the span of the aggregated expressions.
pub fn symmetric_witness(n: usize) -> Result<Option<BTreeMap<usize, Rational>>> {
    Ok(symmetric_solution(n)?.map(|(w, _)| w))
}

pub fn symmetric_certificate(n: usize) -> Result<Option<WitnessCertificate>> {
    Ok(symmetric_solution(n)?.map(|(w, sol)| WitnessCertificate {
        n,
        kind: CertificateKind::Symmetric,
        convention: CONVENTION_TAG.to_string(),
        coset: Coset::Even,
        provenance: Some(Provenance { pivot_seed: DEFAULT_PIVOT_SEED, prime: sol.prime, full_replay: sol.full_replay }),
        weights: Weights::ByWeight(w),
    }))
}

/// `Σ_w c_w · row_w - B_0` in the single-weight basis, as `(v, value)` with
/// zeros dropped.
pub fn tridiagonal_residual(n: usize, weights: &BTreeMap<usize, Rational>) -> Result<Vec<(usize, Rational)>> {
    let t = build_tridiagonal(n)?;
    let mut out = Vec::new();
    for v in (0..=n).step_by(2) {
        let mut acc = if v == 0 { -Rational::one() } else { Rational::zero() };
        for (&w, c) in weights {
            acc += c * from_i64(t.entry(w, v) as i64);
        }
        if !acc.is_zero() {
            out.push((v, acc));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub n: usize,
    pub kind: CertificateKind,
    pub passed: bool,
    pub rows_used: u64,
    pub columns_checked: u64,
    /// Coefficient of `M(0)` in the combination.
    pub value_at_zero: Rational,
    /// Number of columns where the combination differs from `M(0)`.
    pub residual_count: usize,
    /// The first few nonzero residuals, by mask.
    pub residuals: Vec<(GroupElement, Rational)>,
}

/// Listed residuals are truncated to this many.
pub const MAX_LISTED_RESIDUALS: usize = 16;

/// Partial sum of weighted rows over a block of `γ` positions.
#[derive(Debug, Clone)]
pub struct PartialSum {
    pub sum: WalshPolynomial,
    pub rows_used: u64,
}

impl PartialSum {
    pub fn merge(mut self, other: PartialSum) -> PartialSum {
        self.sum = self.sum + &other.sum;
        self.rows_used += other.rows_used;
        self
    }
}

/// Independent verifier. Rows are rebuilt from `(γ, d)`; orbit-reduced
/// weights are lifted through a freshly built orbit table.
pub struct Verifier<'a> {
    cert: &'a WitnessCertificate,
    system: MtilingSystem,
    orbits: Option<OrbitTable>,
}

impl<'a> Verifier<'a> {
    pub fn new(cert: &'a WitnessCertificate, cap: usize) -> Result<Self> {
        cert.validate()?;
        let system = build_system(cert.n, cert.coset, cap)?;
        let orbits = match cert.kind {
            CertificateKind::OrbitReduced => {
                let table = build_orbit_table(cert.n, cap)?;
                if let Weights::Rows(w) = &cert.weights {
                    for &(g, d) in w.keys() {
                        if table.canonical_row(g, d) != (g, d) {
                            return Err(Error::Parse(alloc::format!("row ({g:#x}, {d}) is not a canonical orbit row")));
                        }
                    }
                }
                Some(table)
            }
            _ => None,
        };
        Ok(Verifier { cert, system, orbits })
    }

    /// Number of `γ` positions; blocks partition `0..positions()`.
    pub fn positions(&self) -> u64 {
        self.cert.coset.size(self.cert.n)
    }

    /// Weight the certificate puts on row `(γ, d)` once lifted to the full
    /// system.
    pub fn weight_of(&self, gamma: u64, d: usize) -> Option<&Rational> {
        if !self.cert.coset.contains(gamma) || d == 0 || d > self.cert.n / 2 {
            return None;
        }
        match (&self.cert.weights, &self.orbits) {
            (Weights::Rows(w), None) => w.get(&(gamma, d)),
            (Weights::Rows(w), Some(table)) => w.get(&table.canonical_row(gamma, d)),
            (Weights::ByWeight(w), _) => w.get(&(gamma.count_ones() as usize)),
        }
    }

    fn add_row(&self, acc: &mut PartialSum, gamma: u64, d: usize, c: &Rational) {
        let row = self.system.row(gamma, d);
        for &(k, coef) in row.raw_terms() {
            acc.sum.add_raw(k, &(c * from_i64(i64::from(coef))));
        }
        acc.rows_used += 1;
    }

    pub fn accumulate(&self, positions: Range<u64>) -> PartialSum {
        let n = self.cert.n;
        let coset = self.cert.coset;
        let mut acc = PartialSum { sum: WalshPolynomial::new(n).expect("valid order"), rows_used: 0 };
        match (&self.cert.weights, &self.orbits) {
            (Weights::Rows(w), None) => {
                for (&(g, d), c) in w {
                    if positions.contains(&coset.position(g)) {
                        self.add_row(&mut acc, g, d, c);
                    }
                }
            }
            (Weights::Rows(w), Some(table)) => {
                for pos in positions {
                    let g = coset.member(pos);
                    for d in 1..=n / 2 {
                        if let Some(c) = w.get(&table.canonical_row(g, d)) {
                            self.add_row(&mut acc, g, d, c);
                        }
                    }
                }
            }
            (Weights::ByWeight(w), _) => {
                for pos in positions {
                    let g = coset.member(pos);
                    if let Some(c) = w.get(&(g.count_ones() as usize)) {
                        for d in 1..=n / 2 {
                            self.add_row(&mut acc, g, d, c);
                        }
                    }
                }
            }
        }
        acc
    }

    /// Compares the total against the unit functional at `γ = 0`.
    pub fn finish(&self, total: PartialSum) -> VerificationReport {
        let n = self.cert.n;
        let mut residual = total.sum.clone();
        residual.add_raw(0, &-Rational::one());
        let residual_count = residual.len();
        let residuals = residual.iter().take(MAX_LISTED_RESIDUALS).map(|(g, v)| (g, v.clone())).collect();
        VerificationReport {
            n,
            kind: self.cert.kind,
            passed: residual_count == 0,
            rows_used: total.rows_used,
            columns_checked: 1 << n,
            value_at_zero: total.sum.get(&GroupElement::from_raw(n, 0)),
            residual_count,
            residuals,
        }
    }
}

/// Single-threaded verification.
pub fn verify_certificate(cert: &WitnessCertificate, cap: usize) -> Result<VerificationReport> {
    let v = Verifier::new(cert, cap)?;
    let total = v.accumulate(0..v.positions());
    Ok(v.finish(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_generators;
    use crate::system::build_row;

    fn q(v: i64) -> Rational {
        from_i64(v)
    }

    #[test]
    fn tridiagonal_small_orders() {
        assert_eq!(build_tridiagonal(4).unwrap().dense_rows(), vec![vec![0, 1, 0], vec![6, 4, 6], vec![0, 1, 0]]);
        let t8 = build_tridiagonal(8).unwrap();
        assert_eq!(
            t8.dense_rows(),
            vec![
                vec![0, 1, 0, 0, 0],
                vec![28, 12, 6, 0, 0],
                vec![0, 15, 16, 15, 0],
                vec![0, 0, 6, 12, 28],
                vec![0, 0, 0, 1, 0],
            ]
        );
        assert_eq!(tridiagonal_rank(&build_tridiagonal(4).unwrap()), 2);
        assert_eq!(tridiagonal_rank(&t8), 5);
        assert_eq!(tridiagonal_rank(&build_tridiagonal(16).unwrap()), 8);
        assert_eq!(tridiagonal_rank(&build_tridiagonal(12).unwrap()), 7);
        assert_eq!(tridiagonal_rank(&build_tridiagonal(36).unwrap()), 18);
        assert_eq!(tridiagonal_rank(&build_tridiagonal(100).unwrap()), 50);
        assert_eq!(build_tridiagonal(7).unwrap_err(), Error::OddOrder(7));
    }

    #[test]
    fn tridiagonal_is_persymmetric() {
        for n in (2..=40).step_by(2) {
            let t = build_tridiagonal(n).unwrap();
            for w in (0..=n).step_by(2) {
                for v in (0..=n).step_by(2) {
                    assert_eq!(t.entry(w, v), t.entry(n - w, n - v));
                }
            }
            assert_eq!(t.size(), n / 2 + 1);
        }
    }

    /// Expands the aggregated expression for each `w` term by term and checks
    /// that the coefficient on `M(γ')` only depends on `|γ'|`.
    fn expanded_tridiagonal(n: usize) -> Vec<Vec<u64>> {
        let size = n / 2 + 1;
        let mut out = vec![vec![0u64; size]; size];
        for w in (0..=n).step_by(2) {
            let mut acc: BTreeMap<u64, u64> = BTreeMap::new();
            for g in (0..1u64 << n).filter(|g| g.count_ones() as usize == w) {
                let gamma = GroupElement::new(n, g).unwrap();
                for d in 1..=n / 2 {
                    for (k, c) in build_row(&gamma, d, n).unwrap().terms() {
                        *acc.entry(k.bits()).or_insert(0) += u64::from(c);
                    }
                }
            }
            for v in (0..=n).step_by(2) {
                let coeffs: Vec<u64> = (0..1u64 << n)
                    .filter(|g| g.count_ones() as usize == v)
                    .map(|g| acc.get(&g).copied().unwrap_or(0))
                    .collect();
                assert!(coeffs.windows(2).all(|p| p[0] == p[1]), "n={n} w={w} v={v} not weight-constant");
                out[w / 2][v / 2] = coeffs[0];
            }
        }
        out
    }

    #[test]
    fn tridiagonal_matches_symbolic_expansion() {
        for n in [4usize, 6, 8] {
            assert_eq!(expanded_tridiagonal(n), build_tridiagonal(n).unwrap().dense_rows(), "n = {n}");
        }
    }

    #[test]
    fn rank_dichotomy_up_to_one_hundred() {
        for n in (4..=100).step_by(4) {
            let q: usize = n / 4;
            let square = q.isqrt() * q.isqrt() == q;
            let want = if square { n / 2 } else { n / 2 + 1 };
            assert_eq!(tridiagonal_rank(&build_tridiagonal(n).unwrap()), want, "n = {n}");
        }
    }

    #[test]
    fn symmetric_witnesses() {
        assert!(symmetric_witness(4).unwrap().is_none());
        assert!(symmetric_witness(16).unwrap().is_none());
        assert_eq!(symmetric_witness(6).unwrap_err(), Error::NotDivisibleByFour(6));
        for n in [8usize, 12, 20, 24] {
            let w = symmetric_witness(n).unwrap().expect("witness");
            assert!(tridiagonal_residual(n, &w).unwrap().is_empty());
        }
        for n in [8usize, 12] {
            let cert = symmetric_certificate(n).unwrap().unwrap();
            let report = verify_certificate(&cert, 24).unwrap();
            assert!(report.passed, "{report:?}");
            assert_eq!(report.value_at_zero, q(1));
        }
    }

    #[test]
    fn full_witness_at_eight_verifies_and_breaks_when_perturbed() {
        let cert = find_witness(8, WitnessMode::Full, &WitnessOptions::default()).unwrap().unwrap();
        let report = verify_certificate(&cert, 24).unwrap();
        assert!(report.passed);
        assert_eq!(report.residual_count, 0);
        assert_eq!(report.columns_checked, 256);

        let mut bad = cert.clone();
        if let Weights::Rows(w) = &mut bad.weights {
            let first = *w.keys().next().unwrap();
            *w.get_mut(&first).unwrap() += q(1);
        }
        let report = verify_certificate(&bad, 24).unwrap();
        assert!(!report.passed);
        assert!(report.residual_count > 0);
        assert!(!report.residuals.is_empty());
    }

    #[test]
    fn no_witness_at_order_four() {
        let opts = WitnessOptions::default();
        assert!(find_witness(4, WitnessMode::Full, &opts).unwrap().is_none());
        assert!(find_witness(4, WitnessMode::OrbitReduced, &opts).unwrap().is_none());
    }

    #[test]
    fn orbit_reduced_witness_at_twelve() {
        let cert = find_witness(12, WitnessMode::OrbitReduced, &WitnessOptions::default()).unwrap().unwrap();
        assert_eq!(cert.kind, CertificateKind::OrbitReduced);
        let report = verify_certificate(&cert, 24).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.columns_checked, 4096);
    }

    #[test]
    fn witness_and_generators_are_exclusive() {
        let opts = WitnessOptions::default();
        for n in (2..=12).step_by(2) {
            let gens = brute_force_generators(n, false).unwrap().count;
            let reduced = find_witness(n, WitnessMode::OrbitReduced, &opts).unwrap();
            assert_eq!(gens > 0, reduced.is_none(), "n = {n}");
            if let Some(cert) = reduced {
                assert!(verify_certificate(&cert, 24).unwrap().passed);
            }
            if n <= 8 {
                let full = find_witness(n, WitnessMode::Full, &opts).unwrap();
                assert_eq!(gens > 0, full.is_none(), "n = {n}");
                if let Some(cert) = full {
                    assert!(verify_certificate(&cert, 24).unwrap().passed);
                }
            }
        }
    }

    #[test]
    fn verifier_rejects_bad_certificates() {
        let mut cert = find_witness(8, WitnessMode::OrbitReduced, &WitnessOptions::default()).unwrap().unwrap();
        let good = cert.clone();
        cert.convention = "antipodal-double-count".to_string();
        assert!(matches!(verify_certificate(&cert, 24), Err(Error::ConventionMismatch(_))));

        let mut cert = good.clone();
        if let Weights::Rows(w) = &mut cert.weights {
            let (&(g, d), c) = w.iter().next().map(|(k, v)| (k, v.clone())).unwrap();
            w.remove(&(g, d));
            // A non-canonical member of the same orbit.
            let moved = crate::symmetry::IndexMap::new(1, 1, 8).unwrap().apply_mask(g);
            if moved != g {
                w.insert((moved, d), c);
                assert!(verify_certificate(&cert, 24).is_err());
            }
        }

        let mut cert = good;
        cert.kind = CertificateKind::Symmetric;
        assert!(verify_certificate(&cert, 24).is_err());
    }

    #[test]
    fn block_accumulation_is_order_independent() {
        let cert = find_witness(8, WitnessMode::OrbitReduced, &WitnessOptions::default()).unwrap().unwrap();
        let v = Verifier::new(&cert, 24).unwrap();
        let whole = v.accumulate(0..v.positions());
        let parts = [0..10, 10..64, 64..128];
        for (g, d) in [(0u64, 1usize), (3, 2), (0xff, 4), (0x81, 3)] {
            let lifted = v.weight_of(g, d);
            if let Weights::Rows(w) = &cert.weights {
                assert_eq!(lifted, w.get(&crate::symmetry::build_orbit_table(8, 24).unwrap().canonical_row(g, d)));
            }
        }
        assert!(v.weight_of(1, 1).is_none());
        let merged = parts.iter().rev().map(|r| v.accumulate(r.clone())).reduce(PartialSum::merge).unwrap();
        assert_eq!(merged.sum, whole.sum);
        assert_eq!(merged.rows_used, whole.rows_used);
        assert!(v.finish(merged).passed);
    }
}
