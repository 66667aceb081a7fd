//! Complex scalar types shared by every crate in the workspace.
//!
//! Almost everything computes in [`C64`]. Operator construction in the
//! algebra crate is generic over [`Field`], so the same code can also run in
//! exact complex-rational arithmetic ([`ExactComplex`]) when a run asks for
//! more than 53 bits.

use nalgebra::{ClosedAddAssign, ClosedMulAssign, ClosedSubAssign, Scalar};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::ops::{Div, Neg};

/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Exact complex number with arbitrary-size rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Shorthand constructor for [`C64`].
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Scalar field usable as the entry type of a [`crate::GradedOperator`].
pub trait Field:
    Scalar
    + Zero
    + One
    + ClosedAddAssign
    + ClosedSubAssign
    + ClosedMulAssign
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Converts a double-precision value. Exact for [`ExactComplex`], since
    /// every finite `f64` is a dyadic rational.
    fn from_c64(z: C64) -> Self;

    /// Rounds to double precision.
    fn to_c64(&self) -> C64;

    /// Whether arithmetic in this field is exact.
    fn is_exact() -> bool;

    /// Magnitude rounded to double precision.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Integer power by repeated squaring; negative exponents invert.
    fn powi(&self, e: i32) -> Self {
        let mut base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }
}

impl Field for C64 {
    fn from_c64(z: C64) -> Self {
        z
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn is_exact() -> bool {
        false
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl Field for ExactComplex {
    fn from_c64(z: C64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).expect("finite value required for exact conversion");
        Complex::new(conv(z.re), conv(z.im))
    }

    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn is_exact() -> bool {
        true
    }
}

/// Principal-branch powers of the parameters, computed once per parameter set.
///
/// Every module reads `hbar^{1/2}`, `hbar^{1/4}`, `q^{1/2}` and `a_i^{1/2}`
/// from here so that formulas mixing half powers from different places agree
/// on the branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Branches {
    /// Principal `hbar^{1/2}`.
    pub sqrt_hbar: C64,
    /// Principal square root of `sqrt_hbar`.
    pub quarter_hbar: C64,
    /// Principal `q^{1/2}`.
    pub sqrt_q: C64,
    /// Principal `a_i^{1/2}` (the chain inhomogeneities `xi_i`).
    pub sqrt_a: Vec<C64>,
}

impl Branches {
    /// Computes principal roots for the given parameters.
    pub fn principal(a: &[C64], hbar: C64, q: C64) -> Self {
        let sqrt_hbar = hbar.sqrt();
        Branches {
            sqrt_hbar,
            quarter_hbar: sqrt_hbar.sqrt(),
            sqrt_q: q.sqrt(),
            sqrt_a: a.iter().map(|x| x.sqrt()).collect(),
        }
    }

    /// `hbar^{m/2}` on the cached branch.
    pub fn hbar_half_pow(&self, m: i32) -> C64 {
        self.sqrt_hbar.powi(m)
    }

    /// `hbar^{m/4}` on the cached branch.
    pub fn hbar_quarter_pow(&self, m: i32) -> C64 {
        self.quarter_hbar.powi(m)
    }

    /// `q^{m/2}` on the cached branch.
    pub fn q_half_pow(&self, m: i32) -> C64 {
        self.sqrt_q.powi(m)
    }
}

/// Maximum of `|z|` over a slice, zero for an empty slice.
pub fn max_modulus(values: &[C64]) -> f64 {
    values.iter().fold(0.0, |m, z| m.max(z.norm()))
}
