//! Twisted monodromy matrix of the inhomogeneous XXZ chain.
//!
//! Each site carries a two-dimensional space with basis `nu0` (spin up, bit
//! clear) and `nu1` (spin down, bit set). With `sh = hbar^{1/2}`,
//! `c = sh - 1/sh`, `xi_i = a_i^{1/2}` and `w = u / xi_i`, the site L-operator
//! in the spectral gauge is
//!
//! ```text
//! L_00 = w sh - 1/(w sh) on nu0,   w - 1/w on nu1
//! L_11 = w - 1/w on nu0,           w sh - 1/(w sh) on nu1
//! L_01 = c hbar^{1/4} f            (f: nu0 -> nu1)
//! L_10 = c hbar^{-1/4} e           (e: nu1 -> nu0)
//! ```
//!
//! and `T(u) = L_1(u) ... L_n(u) diag(Z, 1/Z)` in the auxiliary space, with
//! `A, B, C, D` its entries. `B` raises the number of down spins by one and
//! `C` lowers it.
//!
//! The polynomial gauge uses `x = u^{-2}` and
//!
//! ```text
//! L~_00 = sh - a x / sh on nu0,   1 - a x on nu1
//! L~_11 = 1 - a x on nu0,         sh - a x / sh on nu1
//! L~_01 = c hbar^{1/4} f,         L~_10 = c a x hbar^{-1/4} e
//! ```
//!
//! which is affine in `x`. The two are related by
//! `T(u) = (prod_i u/xi_i) G T~(x) G^{-1}` for a diagonal gauge `G` acting on
//! both the auxiliary and the quantum spaces, so their traces have the same
//! eigenvectors up to a diagonal change of basis, and eigenvalues that differ by
//! the factor `prod_i u/xi_i`.

use crate::ChainError;
use kxxz_core::{binomial, c64, GradedOperator, ModelParams, SectorTable, C64};
use nalgebra::{DMatrix, DVector};

/// One of the four entries of the monodromy matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    A,
    B,
    C,
    D,
}

impl Entry {
    fn indices(self) -> (usize, usize) {
        match self {
            Entry::A => (0, 0),
            Entry::B => (0, 1),
            Entry::C => (1, 0),
            Entry::D => (1, 1),
        }
    }

    /// Change in the number of down spins.
    pub fn shift(self) -> i32 {
        match self {
            Entry::A | Entry::D => 0,
            Entry::B => 1,
            Entry::C => -1,
        }
    }
}

/// Local data of one L-operator: diagonal entries on `nu0` and `nu1`, and the
/// coefficients of the raising and lowering parts.
#[derive(Clone, Copy, Debug)]
struct Site {
    l00: [C64; 2],
    l11: [C64; 2],
    raise: C64,
    lower: C64,
}

/// The monodromy matrix at one spectral point, applied without forming
/// `2^n x 2^n` matrices.
#[derive(Clone, Debug)]
pub struct Monodromy {
    n: usize,
    twist: C64,
    sites: Vec<Site>,
}

/// Spectral-gauge monodromy `T(u)`.
pub fn build_monodromy(u: C64, twist: C64, params: &ModelParams) -> Result<Monodromy, ChainError> {
    Monodromy::spectral(u, twist, params)
}

/// Spectral-gauge transfer matrix `tr T(u) = A(u) + D(u)`.
pub fn transfer(u: C64, twist: C64, params: &ModelParams) -> Result<GradedOperator, ChainError> {
    Ok(Monodromy::spectral(u, twist, params)?.transfer())
}

/// Coefficients `t_0..t_n` of the polynomial-gauge transfer matrix
/// `tr T~(x) = sum_m t_m x^m`.
///
/// The trace has degree `n` in `x`; coefficients are recovered exactly (up
/// to rounding) from its values at the `(n+1)`-th roots of unity.
pub fn transfer_polynomial(twist: C64, params: &ModelParams) -> Vec<GradedOperator> {
    let n = params.n();
    let pts = n + 1;
    let omega = |j: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / pts as f64);
    let values: Vec<GradedOperator> = (0..pts)
        .map(|j| Monodromy::polynomial(omega(j), twist, params).transfer())
        .collect();
    (0..pts)
        .map(|m| {
            let terms: Vec<GradedOperator> = values
                .iter()
                .enumerate()
                .map(|(j, v)| v.scale(&(omega((j * m) % pts).conj() / pts as f64)))
                .collect();
            GradedOperator::sum(&terms).expect("at least one point")
        })
        .collect()
}

impl Monodromy {
    /// Spectral gauge at `u`; `u` must be nonzero.
    pub fn spectral(u: C64, twist: C64, params: &ModelParams) -> Result<Self, ChainError> {
        if u.norm() == 0.0 || !u.is_finite() {
            return Err(ChainError::ZeroSpectralParameter);
        }
        check_twist(twist)?;
        let br = params.branches();
        let sh = br.sqrt_hbar;
        let c = sh - sh.inv();
        let sites = br
            .sqrt_a
            .iter()
            .map(|&xi| {
                let w = u / xi;
                let strong = w * sh - (w * sh).inv();
                let weak = w - w.inv();
                Site {
                    l00: [strong, weak],
                    l11: [weak, strong],
                    raise: c * br.quarter_hbar,
                    lower: c / br.quarter_hbar,
                }
            })
            .collect();
        Ok(Monodromy {
            n: params.n(),
            twist,
            sites,
        })
    }

    /// Polynomial gauge at `x = u^{-2}`; any `x` is allowed.
    pub fn polynomial(x: C64, twist: C64, params: &ModelParams) -> Self {
        let br = params.branches();
        let sh = br.sqrt_hbar;
        let c = sh - sh.inv();
        let sites = params
            .a()
            .iter()
            .map(|&a| {
                let ax = a * x;
                let strong = sh - ax / sh;
                let weak = c64(1.0, 0.0) - ax;
                Site {
                    l00: [strong, weak],
                    l11: [weak, strong],
                    raise: c * br.quarter_hbar,
                    lower: c * ax / br.quarter_hbar,
                }
            })
            .collect();
        Monodromy {
            n: params.n(),
            twist,
            sites,
        }
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies one entry of the monodromy to a chain vector (length `2^n`,
    /// indexed by mask).
    ///
    /// The auxiliary state is a pair of chain vectors propagated from the last
    /// site to the first: operators on different sites commute, so the
    /// ordered product over auxiliary indices can be applied right to left.
    pub fn apply(&self, entry: Entry, v: &DVector<C64>) -> DVector<C64> {
        let (row, col) = entry.indices();
        let dim = 1usize << self.n;
        assert_eq!(v.len(), dim, "vector length must be 2^n");
        let tw = if col == 0 { self.twist } else { self.twist.inv() };
        let zero = DVector::from_element(dim, C64::new(0.0, 0.0));
        let mut aux = [zero.clone(), zero];
        aux[col] = v * tw;
        for (i, site) in self.sites.iter().enumerate().rev() {
            aux = self.site_step(i, site, &aux);
        }
        let [p0, p1] = aux;
        if row == 0 {
            p0
        } else {
            p1
        }
    }

    /// One site: `new[r] = sum_c L_i[r][c] old[c]`.
    fn site_step(&self, i: usize, site: &Site, old: &[DVector<C64>; 2]) -> [DVector<C64>; 2] {
        let dim = old[0].len();
        let bit = 1usize << i;
        let mut new0 = DVector::from_element(dim, C64::new(0.0, 0.0));
        let mut new1 = new0.clone();
        for m in 0..dim {
            let b = usize::from(m & bit != 0);
            new0[m] += site.l00[b] * old[0][m];
            new1[m] += site.l11[b] * old[1][m];
            if b == 0 {
                // f: nu0 -> nu1 sits in the (0,1) auxiliary entry.
                new0[m | bit] += site.raise * old[1][m];
            } else {
                // e: nu1 -> nu0 sits in the (1,0) auxiliary entry.
                new1[m & !bit] += site.lower * old[0][m];
            }
        }
        [new0, new1]
    }

    /// `(A + D) v`.
    pub fn apply_transfer(&self, v: &DVector<C64>) -> DVector<C64> {
        self.apply(Entry::A, v) + self.apply(Entry::D, v)
    }

    /// Materializes one entry as a graded operator.
    pub fn entry(&self, entry: Entry) -> GradedOperator {
        self.materialize(entry.shift(), |v| self.apply(entry, v))
    }

    /// Materializes `tr T = A + D`.
    pub fn transfer(&self) -> GradedOperator {
        self.materialize(0, |v| self.apply_transfer(v))
    }

    fn materialize(&self, shift: i32, f: impl Fn(&DVector<C64>) -> DVector<C64>) -> GradedOperator {
        let n = self.n;
        let table = SectorTable::new(n);
        let dim = 1usize << n;
        GradedOperator::from_block_fn(n, shift, |k, t| {
            let mut block = DMatrix::from_element(binomial(n, t), binomial(n, k), C64::new(0.0, 0.0));
            for (j, &src) in table.sector(k).iter().enumerate() {
                let mut e = DVector::from_element(dim, C64::new(0.0, 0.0));
                e[src as usize] = C64::new(1.0, 0.0);
                let img = f(&e);
                for (i, &dst) in table.sector(t).iter().enumerate() {
                    block[(i, j)] = img[dst as usize];
                }
            }
            block
        })
    }
}

fn check_twist(twist: C64) -> Result<(), ChainError> {
    if twist.norm() == 0.0 || !twist.is_finite() {
        return Err(ChainError::ZeroTwist);
    }
    Ok(())
}

/// `alpha(u) = Z prod_i (w_i sh - 1/(w_i sh))`, the eigenvalue of `A(u)` on the
/// all-up vector.
pub fn alpha(u: C64, twist: C64, params: &ModelParams) -> C64 {
    let sh = params.branches().sqrt_hbar;
    params
        .branches()
        .sqrt_a
        .iter()
        .fold(twist, |acc, &xi| acc * (u / xi * sh - (u / xi * sh).inv()))
}

/// `delta(u) = Z^{-1} prod_i (w_i - 1/w_i)`, the eigenvalue of `D(u)` on the
/// all-up vector.
pub fn delta(u: C64, twist: C64, params: &ModelParams) -> C64 {
    params
        .branches()
        .sqrt_a
        .iter()
        .fold(twist.inv(), |acc, &xi| acc * (u / xi - xi / u))
}
