//! Torus fixed points of the Grassmannians, labelled by subsets of `{1..n}`.
//!
//! A subset is stored as a bitmask (bit `i` set means `i+1` belongs to it).
//! Within each cardinality the canonical order is the integer order of the
//! mask, and every matrix in the workspace is indexed in that order.

use serde::{Deserialize, Serialize};

/// A `k`-subset of `{1..n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedPoint {
    pub mask: u32,
    pub k: usize,
}

impl FixedPoint {
    /// Fixed point for a mask; `k` is its popcount.
    pub fn new(mask: u32) -> Self {
        FixedPoint {
            mask,
            k: mask.count_ones() as usize,
        }
    }

    /// Whether the zero-based index `i` belongs to the subset.
    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Zero-based members in increasing order.
    pub fn members(&self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `{1..n}` in canonical order; empty when `k > n`.
pub fn enumerate_fixed_points(n: usize, k: usize) -> Vec<FixedPoint> {
    if k > n {
        return Vec::new();
    }
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(FixedPoint::new)
        .collect()
}

/// Lookup tables between masks and their position inside their sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorTable {
    n: usize,
    sectors: Vec<Vec<u32>>,
    position: Vec<usize>,
}

impl SectorTable {
    /// Tables for chain length `n`.
    pub fn new(n: usize) -> Self {
        let mut sectors = vec![Vec::new(); n + 1];
        let mut position = vec![0; 1 << n];
        for mask in 0u32..1 << n {
            let k = mask.count_ones() as usize;
            position[mask as usize] = sectors[k].len();
            sectors[k].push(mask);
        }
        SectorTable { n, sectors, position }
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Masks of sector `k` in canonical order.
    pub fn sector(&self, k: usize) -> &[u32] {
        &self.sectors[k]
    }

    /// Dimension of sector `k`.
    pub fn dim(&self, k: usize) -> usize {
        self.sectors.get(k).map_or(0, Vec::len)
    }

    /// Position of a mask within its sector.
    pub fn position(&self, mask: u32) -> usize {
        self.position[mask as usize]
    }
}
