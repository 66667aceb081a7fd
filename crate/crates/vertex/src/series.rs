//! Truncated vertex series.
//!
//! For a fixed point `p` with characters `x_1..x_k` (the `a_i` in `p`),
//!
//! ```text
//! V_p^(tau)(z) = sum_{d_1..d_k >= 0} z^d q^{n d / 2}
//!     prod_{i,j} {x_i/x_j}^{-1}_{d_i - d_j} prod_{i=1}^k prod_{j=1}^n {x_i/a_j}_{d_i}
//!     tau(x_1 q^{-d_1}, .., x_k q^{-d_k})
//! ```
//!
//! with `d = d_1 + .. + d_k`. The series is stored through `z^{d_max}`.

use crate::bracket::{bracket, bracket_inverse};
use crate::VertexError;
use kxxz_core::{c64, FixedPoint, ModelParams, PowerSeries, SeriesVar, SymmetricFunctionSpec, C64};
use rayon::prelude::*;

/// A vertex function truncated at degree `d_max` in `z`.
#[derive(Clone, Debug)]
pub struct VertexSeries {
    pub fixed_point: FixedPoint,
    pub tau: SymmetricFunctionSpec,
    pub d_max: usize,
    pub q: C64,
    /// Coefficients of `z^0 .. z^{d_max}`.
    pub series: PowerSeries,
}

impl VertexSeries {
    /// Value of the truncated series at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        self.series.eval(z)
    }

    /// Size of the two highest-degree terms at `z` relative to the value.
    ///
    /// The terms decay factorially once the degree exceeds `|z| / |1 - q|`,
    /// so this is a sound estimate of the truncation error in that regime.
    pub fn relative_tail(&self, z: C64) -> f64 {
        let d = self.d_max;
        let term = |i: usize| (self.series.coeff(i) * z.powi(i as i32)).norm();
        let tail = if d == 0 { 0.0 } else { term(d) + term(d - 1) };
        tail / self.eval(z).norm()
    }
}

/// All `k`-tuples of non-negative integers with sum `d`, in lexicographic order.
fn compositions(k: usize, d: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in compositions(k - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Brackets needed by every term, tabulated once per series.
struct BracketTables {
    d_max: usize,
    /// `{x_i/x_j}^{-1}_e` for `i != j`, indexed `[i][j][e + d_max]`.
    pair_inverse: Vec<Vec<Vec<C64>>>,
    /// `prod_j {x_i/a_j}_d`, indexed `[i][d]`.
    site: Vec<Vec<C64>>,
}

impl BracketTables {
    fn build(x: &[C64], params: &ModelParams, d_max: usize) -> Result<Self, VertexError> {
        let k = x.len();
        let span = d_max as i64;
        let mut pair_inverse = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    pair_inverse[i][j] = (-span..=span)
                        .map(|e| bracket_inverse(x[i] / x[j], e, params))
                        .collect::<Result<_, _>>()?;
                }
            }
        }
        let site = x
            .iter()
            .map(|&xi| {
                (0..=span)
                    .map(|d| {
                        params
                            .a()
                            .iter()
                            .try_fold(c64(1.0, 0.0), |acc, &aj| Ok::<_, VertexError>(acc * bracket(xi / aj, d, params)?))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(BracketTables { d_max, pair_inverse, site })
    }

    /// Product of all brackets for one degree tuple.
    fn weight(&self, degrees: &[usize]) -> C64 {
        let k = degrees.len();
        let mut w = c64(1.0, 0.0);
        for i in 0..k {
            w *= self.site[i][degrees[i]];
            for j in 0..k {
                if i != j {
                    let e = degrees[i] as i64 - degrees[j] as i64 + self.d_max as i64;
                    w *= self.pair_inverse[i][j][e as usize];
                }
            }
        }
        w
    }
}

/// The vertex series `V_p^(tau)` at the parameters' `q`, through `z^{d_max}`.
///
/// The sum over degree tuples is split by total degree; each degree is
/// summed in lexicographic order of the tuples, so the result does not depend
/// on thread scheduling.
pub fn vertex_coefficient(
    p: FixedPoint,
    tau: &SymmetricFunctionSpec,
    d_max: usize,
    params: &ModelParams,
) -> Result<VertexSeries, VertexError> {
    let n = params.n();
    if n < 32 && p.mask >> n != 0 {
        return Err(VertexError::InvalidFixedPoint { mask: p.mask, n });
    }
    let x: Vec<C64> = p.members().iter().map(|&i| params.a()[i]).collect();
    let q = params.q();
    let tables = BracketTables::build(&x, params, d_max)?;
    let q_step = params.branches().q_half_pow(n as i32);
    let coeffs: Vec<C64> = (0..=d_max)
        .into_par_iter()
        .map(|d| {
            let sum = compositions(x.len(), d).iter().fold(c64(0.0, 0.0), |acc, degrees| {
                let shifted: Vec<C64> = x.iter().zip(degrees).map(|(&xi, &di)| xi * q.powi(-(di as i32))).collect();
                acc + tables.weight(degrees) * tau.eval(&shifted)
            });
            sum * q_step.powi(d as i32)
        })
        .collect();
    Ok(VertexSeries {
        fixed_point: p,
        tau: tau.clone(),
        d_max,
        q,
        series: PowerSeries::new(SeriesVar::Z, coeffs),
    })
}
