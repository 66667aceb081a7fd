//! The three equivalent forms of the Bethe equations and the dictionary
//! between them.
//!
//! The canonical form is the geometric one,
//!
//! ```text
//! prod_j (s_i - a_j) / (hbar a_j - s_i) = z hbar^{-n/2} prod_{j != i} (hbar s_i - s_j) / (s_i - hbar s_j)
//! ```
//!
//! The saddle-point form coincides with it. The algebraic Bethe ansatz form
//! for a chain with anisotropy `hbar_c` and twist `Z` is
//!
//! ```text
//! prod_j (a_j/hbar_c - s_i) / (a_j - s_i) = Z^{-2} hbar_c^{-n/2} prod_{j != i} (s_i - s_j/hbar_c) / (s_i/hbar_c - s_j)
//! ```
//!
//! Inverting both sides and comparing shows it is the geometric form at
//! `hbar = 1/hbar_c` and `z = (-1)^n Z^2`; the table below stores exactly that.

use serde::{Deserialize, Serialize};

/// Which presentation of the Bethe equations a system uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Quantum K-theory form with deformation `z`.
    Geometric,
    /// Saddle-point form of the vertex function asymptotics.
    Saddle,
    /// Algebraic Bethe ansatz form; the deformation is the squared twist `Z^2`.
    Aba,
}

impl Convention {
    /// All conventions in a fixed order.
    pub const ALL: [Convention; 3] = [Convention::Geometric, Convention::Saddle, Convention::Aba];

    /// Lower-case name used on the wire.
    pub fn name(self) -> &'static str {
        match self {
            Convention::Geometric => "geometric",
            Convention::Saddle => "saddle",
            Convention::Aba => "aba",
        }
    }
}

/// How a convention's `(hbar, deformation)` map to the canonical geometric
/// `(hbar_g, z_g)`:
///
/// `hbar_g = hbar^{hbar_power}` and
/// `z_g = (-1)^{n * sign_n} * hbar^{half_power / 2} * deformation`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConventionMap {
    pub convention: Convention,
    pub hbar_power: i32,
    pub sign_n: u32,
    pub half_power: i32,
}

/// The resolved dictionary, frozen as data.
pub const CONVENTION_TABLE: [ConventionMap; 3] = [
    ConventionMap {
        convention: Convention::Geometric,
        hbar_power: 1,
        sign_n: 0,
        half_power: 0,
    },
    ConventionMap {
        convention: Convention::Saddle,
        hbar_power: 1,
        sign_n: 0,
        half_power: 0,
    },
    ConventionMap {
        convention: Convention::Aba,
        hbar_power: -1,
        sign_n: 1,
        half_power: 0,
    },
];

/// Table entry for a convention.
pub fn convention_map(c: Convention) -> ConventionMap {
    *CONVENTION_TABLE
        .iter()
        .find(|m| m.convention == c)
        .expect("every convention has an entry")
}
