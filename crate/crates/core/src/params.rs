//! Model parameters and their genericity diagnostics.

use crate::error::CoreError;
use crate::scalar::{Branches, C64};
use serde::{Deserialize, Serialize};

/// Default relative tolerance for coincidences and resonances.
pub const DEFAULT_GENERICITY_TOL: f64 = 1e-6;

/// Largest chain length accepted. Dense blocks of size `C(n, k)` stay small.
pub const MAX_SITES: usize = 12;

/// A non-fatal genericity warning attached to a parameter set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GenericityFlag {
    /// `|hbar|` lies within the tolerance band around the unit circle.
    HbarNearUnitCircle { modulus: f64 },
    /// `a_i / a_j` is within tolerance of `hbar^m`.
    ResonantRatio { i: usize, j: usize, m: i32 },
}

/// Collected genericity warnings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub flags: Vec<GenericityFlag>,
}

impl GenericityReport {
    /// True when no warning was raised.
    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Validated, immutable model parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    n: usize,
    a: Vec<C64>,
    hbar: C64,
    q: C64,
    precision_bits: u32,
    genericity_tol: f64,
    branches: Branches,
    genericity: GenericityReport,
}

/// Builds validated parameters with the default genericity tolerance.
pub fn make_params(
    n: usize,
    a: &[C64],
    hbar: C64,
    q: C64,
    precision_bits: u32,
) -> Result<ModelParams, CoreError> {
    make_params_with_tol(n, a, hbar, q, precision_bits, DEFAULT_GENERICITY_TOL)
}

/// Builds validated parameters with an explicit genericity tolerance.
pub fn make_params_with_tol(
    n: usize,
    a: &[C64],
    hbar: C64,
    q: C64,
    precision_bits: u32,
    genericity_tol: f64,
) -> Result<ModelParams, CoreError> {
    if n == 0 || n > MAX_SITES {
        return Err(CoreError::InvalidParameters(format!(
            "chain length must be in 1..={MAX_SITES}, got {n}"
        )));
    }
    if a.len() != n {
        return Err(CoreError::InvalidParameters(format!(
            "expected {n} equivariant parameters, got {}",
            a.len()
        )));
    }
    let finite = |z: &C64| z.re.is_finite() && z.im.is_finite();
    if !a.iter().all(finite) || !finite(&hbar) || !finite(&q) {
        return Err(CoreError::InvalidParameters("non-finite parameter".into()));
    }
    if a.iter().any(|x| x.norm() == 0.0) {
        return Err(CoreError::InvalidParameters("a_i must be nonzero".into()));
    }
    if hbar.norm() == 0.0 {
        return Err(CoreError::InvalidParameters("hbar must be nonzero".into()));
    }
    if precision_bits == 0 {
        return Err(CoreError::InvalidParameters("precision must be positive".into()));
    }
    if genericity_tol.is_nan() || genericity_tol <= 0.0 {
        return Err(CoreError::InvalidParameters("genericity tolerance must be positive".into()));
    }
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.norm()));
    for i in 0..n {
        for j in i + 1..n {
            if (a[i] - a[j]).norm() / scale <= genericity_tol {
                return Err(CoreError::DegenerateParameters { i: i + 1, j: j + 1 });
            }
        }
    }
    let genericity = genericity_flags(a, hbar, genericity_tol);
    Ok(ModelParams {
        n,
        a: a.to_vec(),
        hbar,
        q,
        precision_bits,
        genericity_tol,
        branches: Branches::principal(a, hbar, q),
        genericity,
    })
}

fn genericity_flags(a: &[C64], hbar: C64, tol: f64) -> GenericityReport {
    let n = a.len() as i32;
    let mut flags = Vec::new();
    let modulus = hbar.norm();
    if (modulus - 1.0).abs() <= tol {
        flags.push(GenericityFlag::HbarNearUnitCircle { modulus });
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if i == j {
                continue;
            }
            let ratio = a[i] / a[j];
            for m in -2 * n..=2 * n {
                if m == 0 {
                    continue;
                }
                let p = hbar.powi(m);
                if (ratio - p).norm() <= tol * p.norm().max(1.0) {
                    flags.push(GenericityFlag::ResonantRatio { i: i + 1, j: j + 1, m });
                }
            }
        }
    }
    GenericityReport { flags }
}

impl ModelParams {
    /// Chain length (rank of the tautological bundle's ambient space).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Equivariant parameters `a_1..a_n`.
    pub fn a(&self) -> &[C64] {
        &self.a
    }

    /// Anisotropy `hbar`.
    pub fn hbar(&self) -> C64 {
        self.hbar
    }

    /// Degree-counting parameter `q`.
    pub fn q(&self) -> C64 {
        self.q
    }

    /// Requested working precision in bits.
    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Relative tolerance used for coincidence and resonance tests.
    pub fn genericity_tol(&self) -> f64 {
        self.genericity_tol
    }

    /// Cached principal roots.
    pub fn branches(&self) -> &Branches {
        &self.branches
    }

    /// Genericity warnings found at construction.
    pub fn genericity(&self) -> &GenericityReport {
        &self.genericity
    }

    /// Largest `|a_i|`.
    pub fn a_scale(&self) -> f64 {
        self.a.iter().fold(0.0, |m, x| m.max(x.norm()))
    }

    /// Parameters with `hbar` replaced by `1/hbar`.
    ///
    /// The cached roots are inverted rather than recomputed, so that
    /// `sqrt(1/hbar) = 1/sqrt(hbar)` holds even on the branch cut.
    pub fn with_inverted_hbar(&self) -> ModelParams {
        let hbar = self.hbar.inv();
        let mut branches = self.branches.clone();
        branches.sqrt_hbar = self.branches.sqrt_hbar.inv();
        branches.quarter_hbar = self.branches.quarter_hbar.inv();
        ModelParams {
            hbar,
            genericity: genericity_flags(&self.a, hbar, self.genericity_tol),
            branches,
            ..self.clone()
        }
    }

    /// Parameters with a different `q`, keeping every other field.
    pub fn with_q(&self, q: C64) -> ModelParams {
        let mut branches = self.branches.clone();
        branches.sqrt_q = q.sqrt();
        ModelParams {
            q,
            branches,
            ..self.clone()
        }
    }

    /// Parameters with a different requested precision.
    pub fn with_precision(&self, precision_bits: u32) -> ModelParams {
        ModelParams {
            precision_bits,
            ..self.clone()
        }
    }
}
