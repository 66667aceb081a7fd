//! Quantum tautological classes from the universal formula.
//!
//! In the fixed-point basis the classical exterior powers `Lambda^l` act
//! diagonally with eigenvalue `e_l(a_p)` on `O_p`. Their quantum deformations
//! are
//!
//! ```text
//! Lambda-hat^l(z) = sum_{m=0}^{l} a_m(z) F_0^m Lambda^{l-m} E_{-1}^m
//! O-hat(1)(z)     = B(z) O(1),   B(z) = sum_m a_m(z) F_0^m E_0^m
//! ```
//!
//! with `O(1)` diagonal with eigenvalue `prod_{i in p} a_i`.

use crate::coefficients::{coeff_a_with, FormulaOptions};
use crate::QopError;
use kxxz_core::{c64, GradedOperator, ModelParams, SymmetricFunctionSpec, C64};
use kxxz_uq::DrinfeldGenerators;

/// How an operator was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    CombinatorialFormula,
    SpectralSynthesis,
}

/// Which class an operator represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassLabel {
    /// The `l`-th exterior power of the tautological bundle.
    Exterior(usize),
    /// The determinant line bundle `O(1)`.
    LineBundle,
}

/// A quantum class as a sector-preserving operator on the fixed-point basis.
#[derive(Clone, Debug)]
pub struct QuantumClassOperator {
    pub label: ClassLabel,
    pub z: C64,
    pub operator: GradedOperator,
    pub provenance: Provenance,
}

/// Classical `Lambda^l`: diagonal with eigenvalue `e_l(a_p)`.
pub fn classical_exterior(l: usize, params: &ModelParams) -> GradedOperator {
    diagonal_symmetric(params, &SymmetricFunctionSpec::Elementary(l))
}

/// Diagonal operator with eigenvalue `f(a_p)` on `O_p`.
pub fn diagonal_symmetric(params: &ModelParams, f: &SymmetricFunctionSpec) -> GradedOperator {
    GradedOperator::diagonal(params.n(), |mask| {
        let members: Vec<C64> = (0..params.n())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| params.a()[i])
            .collect();
        f.eval(&members)
    })
}

/// Table `a_m(z)` on every sector `k`, for `m <= max_m`. Entries are zero
/// where `F^m ... E^m` vanishes (`m > k`), so resonances there are harmless.
fn coefficient_table(max_m: usize, z: C64, params: &ModelParams, opts: &FormulaOptions) -> Result<Vec<Vec<C64>>, QopError> {
    (0..=max_m)
        .map(|m| {
            (0..=params.n())
                .map(|k| if m > k { Ok(c64(0.0, 0.0)) } else { coeff_a_with(m, z, params, k, opts) })
                .collect()
        })
        .collect()
}

/// `Lambda-hat^l(z)`.
pub fn quantum_exterior(l: usize, z: C64, params: &ModelParams) -> Result<QuantumClassOperator, QopError> {
    quantum_exterior_with(l, z, params, &FormulaOptions::default())
}

/// `Lambda-hat^l(z)` with explicit formula options.
pub fn quantum_exterior_with(
    l: usize,
    z: C64,
    params: &ModelParams,
    opts: &FormulaOptions,
) -> Result<QuantumClassOperator, QopError> {
    let n = params.n();
    let g = DrinfeldGenerators::new(params);
    let e = g.op_e(-1)?;
    let f = g.op_f(0)?;
    let table = coefficient_table(l, z, params, opts)?;
    let mut total = GradedOperator::zero(n, 0);
    let mut e_pow = GradedOperator::identity(n);
    let mut f_pow = GradedOperator::identity(n);
    for (m, row) in table.iter().enumerate() {
        if m > 0 {
            e_pow = e.compose(&e_pow)?;
            f_pow = f_pow.compose(&f)?;
        }
        let term = f_pow
            .compose(&classical_exterior(l - m, params).compose(&e_pow)?)?
            .scale_by_target_sector(|k| row[k]);
        total = total.try_add(&term)?;
    }
    Ok(QuantumClassOperator {
        label: ClassLabel::Exterior(l),
        z,
        operator: total,
        provenance: Provenance::CombinatorialFormula,
    })
}

/// `O-hat(1)(z) = B(z) O(1)`.
pub fn quantum_line_bundle(z: C64, params: &ModelParams) -> Result<QuantumClassOperator, QopError> {
    quantum_line_bundle_with(z, params, &FormulaOptions::default())
}

/// [`quantum_line_bundle`] with explicit formula options.
pub fn quantum_line_bundle_with(z: C64, params: &ModelParams, opts: &FormulaOptions) -> Result<QuantumClassOperator, QopError> {
    let n = params.n();
    let g = DrinfeldGenerators::new(params);
    let e = g.op_e(0)?;
    let f = g.op_f(0)?;
    let table = coefficient_table(n, z, params, opts)?;
    let mut b = GradedOperator::zero(n, 0);
    let mut e_pow = GradedOperator::identity(n);
    let mut f_pow = GradedOperator::identity(n);
    for (m, row) in table.iter().enumerate() {
        if m > 0 {
            e_pow = e.compose(&e_pow)?;
            f_pow = f_pow.compose(&f)?;
        }
        b = b.try_add(&f_pow.compose(&e_pow)?.scale_by_target_sector(|k| row[k]))?;
    }
    let det = GradedOperator::diagonal(n, |mask| {
        (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(c64(1.0, 0.0), |acc, i| acc * params.a()[i])
    });
    Ok(QuantumClassOperator {
        label: ClassLabel::LineBundle,
        z,
        operator: b.compose(&det)?,
        provenance: Provenance::CombinatorialFormula,
    })
}
