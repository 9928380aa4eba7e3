//! Symmetries of the pair-shift system.
//!
//! Index maps `j ↦ k·j + t (mod n)` with `gcd(k, n) = 1` permute the
//! coordinates and send solutions to solutions. They form a group of order
//! `n·φ(n)` (cyclic shifts, multiplier automorphisms, and reversal at
//! `k = n - 1`). A shift distance `d` is carried to `k·d` folded into
//! `1..=n/2`, which keeps `gcd(d, n)`.
//!
//! Canonical representatives are integer-minimal masks over the full orbit.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, SparseVector};
use crate::rational::{from_i64, Rational};
use crate::system::{Coset, MtilingSystem};
use crate::walsh::{check_order, GroupElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexMap {
    n: usize,
    k: usize,
    t: usize,
}

impl IndexMap {
    pub fn new(k: usize, t: usize, n: usize) -> Result<Self> {
        check_order(n)?;
        let k = k % n;
        if n > 1 && k.gcd(&n) != 1 {
            return Err(Error::NotCoprime { k, n });
        }
        Ok(IndexMap { n, k, t: t % n })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(1, 0, n)
    }

    pub fn multiplier(&self) -> usize {
        self.k
    }

    pub fn shift(&self) -> usize {
        self.t
    }

    /// Image of the 1-based index `j`, in `1..=n`.
    pub fn apply_index(&self, j: usize) -> usize {
        (self.k * j + self.t + self.n - 1) % self.n + 1
    }

    pub fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out |= 1 << (self.apply_index(i + 1) - 1);
            m &= m - 1;
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &IndexMap) -> IndexMap {
        debug_assert_eq!(self.n, other.n);
        let n = self.n;
        IndexMap { n, k: self.k * other.k % n, t: (self.k * other.t + self.t) % n }
    }

    pub fn inverse(&self) -> IndexMap {
        let n = self.n;
        let k_inv = inverse_unit(self.k, n);
        IndexMap { n, k: k_inv, t: (n - k_inv * self.t % n) % n }
    }

    /// Image of a shift distance, folded into `1..=n/2`.
    pub fn apply_shift(&self, d: usize) -> usize {
        fold_shift(self.k * d % self.n, self.n)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut cycles = 0;
        for start in 1..=self.n {
            if seen[start - 1] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !seen[j - 1] {
                seen[j - 1] = true;
                j = self.apply_index(j);
            }
        }
        cycles
    }
}

fn fold_shift(x: usize, n: usize) -> usize {
    x.min(n - x)
}

fn inverse_unit(k: usize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    (1..n).find(|&c| c * k % n == 1).expect("unit has an inverse")
}

/// `γ` with its coordinates relabelled by `j ↦ k·j + t`.
pub fn apply_index_map(gamma: &GroupElement, k: usize, t: usize, n: usize) -> Result<GroupElement> {
    if gamma.n() != n {
        return Err(Error::OrderMismatch { left: n, right: gamma.n() });
    }
    let map = IndexMap::new(k, t, n)?;
    Ok(GroupElement::from_raw(n, map.apply_mask(gamma.bits())))
}

#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    n: usize,
    elements: Vec<IndexMap>,
}

impl SymmetryGroup {
    /// Identity first, then ascending `(k, t)`.
    pub fn new(n: usize) -> Result<Self> {
        check_order(n)?;
        let units: Vec<usize> = if n == 1 { vec![0] } else { (1..n).filter(|k| k.gcd(&n) == 1).collect() };
        let mut elements = Vec::with_capacity(n * units.len());
        for &k in &units {
            for t in 0..n {
                elements.push(IndexMap { n, k, t });
            }
        }
        Ok(SymmetryGroup { n, elements })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IndexMap] {
        &self.elements
    }

    pub fn contains(&self, g: &IndexMap) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// An index map compiled to per-byte lookup tables.
struct CompiledMap {
    tables: Vec<[u64; 256]>,
    multiplier: u16,
    inverse_multiplier: u16,
}

impl CompiledMap {
    fn new(g: &IndexMap) -> Self {
        let chunks = g.n.div_ceil(8);
        let mut tables = vec![[0u64; 256]; chunks];
        for (c, table) in tables.iter_mut().enumerate() {
            for (byte, slot) in table.iter_mut().enumerate() {
                let mask = (byte as u64) << (8 * c);
                let mask = mask & crate::walsh::low_mask(g.n);
                *slot = g.apply_mask(mask);
            }
        }
        CompiledMap {
            tables,
            multiplier: g.k as u16,
            inverse_multiplier: g.inverse().k as u16,
        }
    }

    #[inline]
    fn apply(&self, mask: u64) -> u64 {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, t)| acc | t[((mask >> (8 * c)) & 0xff) as usize])
    }
}

/// Orbits of `Z₂ⁿ` under the symmetry group.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    n: usize,
    orbit_of: Vec<u32>,
    reps: Vec<u64>,
    sizes: Vec<u64>,
    /// Multiplier of some group element taking the mask to its representative.
    to_rep_multiplier: Vec<u16>,
    /// Distinct multipliers of the stabiliser of each representative.
    stabilizer_multipliers: Vec<Vec<u16>>,
}

pub fn build_orbit_table(n: usize, cap: usize) -> Result<OrbitTable> {
    check_order(n)?;
    if n > cap {
        return Err(Error::OrderTooLarge { n, cap });
    }
    let group = SymmetryGroup::new(n)?;
    let maps: Vec<CompiledMap> = group.elements().iter().map(CompiledMap::new).collect();
    let size = 1usize << n;
    let mut orbit_of = vec![u32::MAX; size];
    let mut to_rep_multiplier = vec![0u16; size];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    let mut stabilizer_multipliers = Vec::new();
    for mask in 0..size as u64 {
        if orbit_of[mask as usize] != u32::MAX {
            continue;
        }
        // Every smaller mask already belongs to a completed orbit, so this
        // one is the minimum of its own.
        let id = reps.len() as u32;
        let mut count = 0u64;
        let mut stab: Vec<u16> = Vec::new();
        for g in &maps {
            let img = g.apply(mask);
            if img == mask {
                stab.push(g.multiplier);
            }
            let slot = &mut orbit_of[img as usize];
            if *slot == u32::MAX {
                *slot = id;
                to_rep_multiplier[img as usize] = g.inverse_multiplier;
                count += 1;
            }
        }
        stab.sort_unstable();
        stab.dedup();
        reps.push(mask);
        sizes.push(count);
        stabilizer_multipliers.push(stab);
    }
    Ok(OrbitTable { n, orbit_of, reps, sizes, to_rep_multiplier, stabilizer_multipliers })
}

impl OrbitTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn orbit_count(&self) -> usize {
        self.reps.len()
    }

    /// Representatives, ascending.
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn orbit_index(&self, mask: u64) -> usize {
        self.orbit_of[mask as usize] as usize
    }

    pub fn rep(&self, mask: u64) -> u64 {
        self.reps[self.orbit_index(mask)]
    }

    pub fn is_rep(&self, mask: u64) -> bool {
        self.rep(mask) == mask
    }

    pub fn orbit_size(&self, mask: u64) -> u64 {
        self.sizes[self.orbit_index(mask)]
    }

    pub fn canonical(&self, gamma: &GroupElement) -> GroupElement {
        GroupElement::from_raw(self.n, self.rep(gamma.bits()))
    }

    /// Canonical form of the row `(γ, d)`: the lexicographically least
    /// `(g·γ, g·d)` over the group. Its mask is the orbit representative.
    pub fn canonical_row(&self, gamma: u64, d: usize) -> (u64, usize) {
        let n = self.n;
        let o = self.orbit_index(gamma);
        let k0 = usize::from(self.to_rep_multiplier[gamma as usize]);
        let d0 = k0 * d % n;
        let best = self.stabilizer_multipliers[o]
            .iter()
            .map(|&kh| fold_shift(usize::from(kh) * d0 % n, n))
            .min()
            .expect("stabiliser contains the identity");
        (self.reps[o], best)
    }
}

/// Equivalence class of a shift distance: `gcd(d, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DClass(pub usize);

pub fn d_class(d: usize, n: usize) -> DClass {
    DClass(d.gcd(&n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowOrbit {
    /// Canonical row: `gamma` is an orbit representative.
    pub gamma: u64,
    pub d: usize,
    /// Number of rows `(γ, d)` of the system in this orbit.
    pub size: u64,
}

/// Orbit-reduced system.
///
/// Entry `[R, O]` is the total coefficient that all rows of the row orbit
/// `R` place on the representative column of `O`. Weights constant on row
/// orbits produce a combination that is constant on column orbits, so it
/// is pinned down by its values on representatives.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    n: usize,
    coset: Coset,
    row_orbits: Vec<RowOrbit>,
    columns: Vec<u64>,
    matrix: SparseMatrix,
}

/// Recorded in certificates built from a reduced system.
pub const REDUCTION_SCALING: &str = "row-orbit-sum";

pub fn reduce_system(system: &MtilingSystem, orbits: &OrbitTable) -> Result<ReducedSystem> {
    let n = system.n();
    if orbits.n() != n {
        return Err(Error::OrderMismatch { left: n, right: orbits.n() });
    }
    let coset = system.coset();
    let columns: Vec<u64> = orbits.reps().iter().copied().filter(|&r| coset.contains(r)).collect();
    let column_index: BTreeMap<u64, usize> = columns.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut acc: BTreeMap<(u64, usize), (u64, BTreeMap<usize, i64>)> = BTreeMap::new();
    for row in system.rows() {
        let key = orbits.canonical_row(row.gamma().bits(), row.d());
        let slot = acc.entry(key).or_insert_with(|| (0, BTreeMap::new()));
        slot.0 += 1;
        for &(k, c) in row.raw_terms() {
            if let Some(&col) = column_index.get(&k) {
                *slot.1.entry(col).or_insert(0) += i64::from(c);
            }
        }
    }
    let mut matrix = SparseMatrix::new(columns.len());
    let mut row_orbits = Vec::with_capacity(acc.len());
    for ((gamma, d), (size, entries)) in acc {
        row_orbits.push(RowOrbit { gamma, d, size });
        matrix.push_row(entries.into_iter().map(|(c, v)| (c, from_i64(v))).collect())?;
    }
    Ok(ReducedSystem { n, coset, row_orbits, columns, matrix })
}

impl ReducedSystem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coset(&self) -> Coset {
        self.coset
    }

    pub fn row_orbits(&self) -> &[RowOrbit] {
        &self.row_orbits
    }

    /// Column representatives, ascending.
    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    /// Column holding the orbit of `γ = 0` (a singleton), if in the coset.
    pub fn target_column(&self) -> Option<usize> {
        self.columns.binary_search(&0).ok()
    }

    /// Unit vector at the orbit of 0.
    pub fn target(&self) -> Option<SparseVector> {
        self.target_column().map(|c| vec![(c, from_i64(1))])
    }

    /// Weights keyed by canonical row, dropping zeros.
    pub fn weights_by_row(&self, x: &SparseVector) -> BTreeMap<(u64, usize), Rational> {
        x.iter()
            .map(|(i, v)| {
                let r = &self.row_orbits[*i];
                ((r.gamma, r.d), v.clone())
            })
            .collect()
    }
}
