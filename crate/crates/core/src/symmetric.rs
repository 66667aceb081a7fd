//! Symmetric Laurent polynomials in the Bethe roots, presented as evaluable data.

use crate::scalar::C64;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::Arc;

/// Evaluator signature for user-supplied symmetric functions.
pub type CustomEvaluator = Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>;

/// A symmetric Laurent polynomial `tau(s_1..s_k)` of any arity.
#[derive(Clone)]
pub enum SymmetricFunctionSpec {
    /// The elementary symmetric polynomial `e_l`.
    Elementary(usize),
    /// The power sum `sum_i s_i^m`; negative `m` is allowed.
    PowerSum(i32),
    /// `prod_i (1 + x s_i)`, the generating function of all `e_l`.
    WeightedExterior(C64),
    /// Any evaluator; the caller is responsible for its symmetry.
    Custom(CustomEvaluator),
}

impl fmt::Debug for SymmetricFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Elementary(l) => write!(f, "Elementary({l})"),
            Self::PowerSum(m) => write!(f, "PowerSum({m})"),
            Self::WeightedExterior(x) => write!(f, "WeightedExterior({x})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl SymmetricFunctionSpec {
    /// Evaluates at the given roots.
    pub fn eval(&self, roots: &[C64]) -> C64 {
        match self {
            Self::Elementary(l) => elementary_all(roots).get(*l).copied().unwrap_or_else(C64::zero),
            Self::PowerSum(m) => roots.iter().map(|s| s.powi(*m)).sum(),
            Self::WeightedExterior(x) => roots.iter().fold(C64::one(), |acc, s| acc * (C64::one() + x * s)),
            Self::Custom(f) => f(roots),
        }
    }
}

/// Evaluates a symmetric function at the roots; free-function form.
pub fn symmetric_eval(spec: &SymmetricFunctionSpec, roots: &[C64]) -> C64 {
    spec.eval(roots)
}

/// All elementary symmetric polynomials `e_0..e_k` of the inputs.
///
/// Computed from the expansion of `prod (1 + s_i t)` one factor at a time.
pub fn elementary_all(values: &[C64]) -> Vec<C64> {
    let mut e = vec![C64::zero(); values.len() + 1];
    e[0] = C64::one();
    for (i, v) in values.iter().enumerate() {
        for l in (1..=i + 1).rev() {
            let prev = e[l - 1];
            e[l] += prev * v;
        }
    }
    e
}
