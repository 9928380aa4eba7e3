//! Brute-force ground truth, independent of the linear-algebra route.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;
use core::time::Duration;

use crate::error::{Error, Result};
use crate::system::autocorrelation_raw;
use crate::walsh::{check_order, low_mask, SignVector};

/// Exhaustive search without folding is allowed up to this order.
pub const UNFOLDED_CAP: usize = 24;
/// With `u₁ = 1` fixed (negation folded out).
pub const FOLDED_CAP: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub n: usize,
    /// Sorted by mask.
    pub generators: Vec<SignVector>,
    /// Unfolded total.
    pub count: u64,
    /// Filled in by callers that time the search.
    pub elapsed: Option<Duration>,
    pub folded: bool,
}

/// `Σ_j u_j u_{j+d}` with cyclic indices.
pub fn periodic_autocorrelation(u: &SignVector, d: usize) -> Result<i64> {
    if d >= u.n() {
        return Err(Error::LagOutOfRange { d, n: u.n() });
    }
    Ok(autocorrelation_raw(u.mask(), u.n(), d))
}

fn is_generator_mask(mask: u64, n: usize) -> bool {
    (1..=n / 2).all(|d| autocorrelation_raw(mask, n, d) == 0)
}

/// Autocorrelation vanishes for every `d = 1..=n/2` (`n - d` mirrors `d`).
pub fn is_circulant_hadamard(u: &SignVector) -> bool {
    is_generator_mask(u.mask(), u.n())
}

/// `Σ_{d=1}^{n-1} (Σ_j u_j u_{j+d})²`.
pub fn s_value(u: &SignVector) -> u64 {
    let n = u.n();
    (1..n).map(|d| autocorrelation_raw(u.mask(), n, d).pow(2) as u64).sum()
}

pub fn check_search_order(n: usize, fold: bool) -> Result<()> {
    check_order(n)?;
    let cap = if fold { FOLDED_CAP } else { UNFOLDED_CAP };
    if n > cap {
        return Err(Error::OrderTooLarge { n, cap });
    }
    Ok(())
}

/// Number of masks the search visits.
pub fn search_space(n: usize, fold: bool) -> u64 {
    if fold {
        1 << (n - 1)
    } else {
        1 << n
    }
}

/// Generators among the search indices in `range`. With `fold`, index `i`
/// stands for the mask `i << 1` (`u₁ = 1`) and each hit contributes its
/// negation as well. Output is sorted.
pub fn scan_generators(n: usize, fold: bool, range: Range<u64>) -> Vec<SignVector> {
    let mut out = Vec::new();
    for i in range {
        let mask = if fold { i << 1 } else { i };
        if is_generator_mask(mask, n) {
            out.push(SignVector::from_raw(n, mask));
            if fold {
                out.push(SignVector::from_raw(n, mask ^ low_mask(n)));
            }
        }
    }
    out.sort();
    out
}

pub fn brute_force_generators(n: usize, fold: bool) -> Result<SearchReport> {
    check_search_order(n, fold)?;
    let generators = scan_generators(n, fold, 0..search_space(n, fold));
    Ok(SearchReport { n, count: generators.len() as u64, generators, elapsed: None, folded: fold })
}

impl SearchReport {
    /// Combines partial scans; order of parts does not matter.
    pub fn from_parts(n: usize, fold: bool, parts: impl IntoIterator<Item = Vec<SignVector>>) -> Self {
        let mut generators: Vec<SignVector> = parts.into_iter().flatten().collect();
        generators.sort();
        generators.dedup();
        SearchReport { n, count: generators.len() as u64, generators, elapsed: None, folded: fold }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

fn is_prime_power(mut u: u64) -> bool {
    if u < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= u {
        if u % p == 0 {
            while u % p == 0 {
                u /= p;
            }
            return u == 1;
        }
        p += 1;
    }
    true
}

/// Necessary condition for a circulant Hadamard matrix of order `n > 4`:
/// `n = 4u²` with `u > 1` odd and not a prime power.
pub fn turyn_admissible(n: u64) -> Admissibility {
    let no = |reason: String| Admissibility { admissible: false, reason };
    if n == 0 {
        return no(String::from("n must be positive"));
    }
    if n % 4 != 0 {
        return no(format!("{n} is not divisible by 4"));
    }
    let q = n / 4;
    let u = q.isqrt();
    if u * u != q {
        return no(format!("{n}/4 = {q} is not a perfect square"));
    }
    if u == 1 {
        return no(String::from("u = 1: the order-4 case lies outside the n > 4 condition"));
    }
    if u % 2 == 0 {
        return no(format!("u = {u} is even"));
    }
    if is_prime_power(u) {
        return no(format!("u = {u} is a prime power"));
    }
    Admissibility { admissible: true, reason: format!("n = 4·{u}², u odd and not a prime power") }
}
