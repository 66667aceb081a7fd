//! Homotopy continuation of Bethe roots from the classical limit.
//!
//! For `|z| <= 1` each solution is continued from `z = 0`, where the roots are
//! a `k`-subset of the `a_j`, along `z(t) = z (t + i beta t (1 - t))`. The
//! straight path `beta = 0` is tried first; if it fails, detours with
//! `beta != 0` step around points where two paths meet. For `|z| > 1` the equations are divided by
//! `z` and continued in `w = 1/z` from `w = 0`, where the roots are a
//! `k`-subset of the `hbar a_j`.
//!
//! Each step is an Euler predictor followed by Newton correction on the
//! cleared residual, in logarithmic coordinates when every root is away from
//! zero. Steps halve on failure and double after three clean steps.

use crate::system::{classical_solutions, combine, BetheSystem};
use crate::{BetheError, Convention};
use kxxz_core::wire::params_hash;
use kxxz_core::{binomial, c64, enumerate_fixed_points, ModelParams, C64};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Where a continuation path starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OriginKind {
    /// `z = 0`; roots are `a_j` for `j` in the origin subset.
    Zero,
    /// `z = infinity`; roots are `hbar a_j` for `j` in the origin subset.
    Infinity,
}

/// Step control for the continuation.
#[derive(Clone, Debug)]
pub struct StepControl {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Newton iterations allowed per corrector step.
    pub max_newton: usize,
    /// Scaled residual required at the end of the path.
    pub tol: f64,
    /// Relative root separation below which a path is declared colliding.
    pub collision_tol: f64,
    /// Detour parameters tried in order.
    pub betas: Vec<f64>,
    /// Allow Newton in logarithmic coordinates.
    pub log_coordinates: bool,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            initial_step: 0.02,
            min_step: 1e-10,
            max_step: 0.1,
            max_newton: 6,
            tol: 1e-10,
            collision_tol: 1e-5,
            betas: vec![0.0, 0.7, -0.7, 1.5, -1.5],
            log_coordinates: true,
        }
    }
}

/// One solution of a Bethe system.
#[derive(Clone, Debug, PartialEq)]
pub struct BetheSolution {
    /// Roots sorted by real part, then imaginary part.
    pub roots: Vec<C64>,
    /// Deformation in the system's own convention.
    pub z: C64,
    /// Largest scaled residual of the geometric form.
    pub residual_norm: f64,
    /// Subset the path starts from (bit `j` set means index `j`).
    pub origin: u32,
    pub origin_kind: OriginKind,
    pub path_steps: usize,
    pub convention: Convention,
}

/// All solutions found for one system.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub n: usize,
    pub k: usize,
    pub z: C64,
    pub convention: Convention,
    /// Sorted by origin subset.
    pub solutions: Vec<BetheSolution>,
    /// Whether `C(n, k)` distinct admissible solutions were found.
    pub complete: bool,
    /// Hash of the model parameters the set was computed for.
    pub params_hash: String,
    /// Merges, excluded roots and other non-fatal events.
    pub warnings: Vec<String>,
}

/// Sorts roots by real part, then imaginary part.
pub fn canonical_sort(roots: &mut [C64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Whether two root multisets agree within `tol` relative, by greedy matching.
pub fn same_multiset(a: &[C64], b: &[C64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm() / x.norm().max(y.norm()).max(1e-300)))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Relative admissibility check: distinct roots, no `s_i = hbar^{+-1} s_j`.
pub fn admissibility_violation(roots: &[C64], hbar: C64, tol: f64) -> Option<(usize, usize)> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let (s, t) = (roots[i], roots[j]);
            let rel = |x: C64, y: C64| (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
            if rel(s, t) < tol || rel(s, hbar * t) < tol || rel(t, hbar * s) < tol {
                return Some((i, j));
            }
        }
    }
    None
}

/// The two families of paths.
#[derive(Clone, Copy, Debug)]
struct Path {
    kind: OriginKind,
    /// `z` for the zero origin, `1/z` for the infinity origin.
    target: C64,
    beta: f64,
    hbar_pow: C64,
}

impl Path {
    /// `(alpha(t), gamma(t), alpha'(t), gamma'(t))` of `F = alpha A - gamma B`.
    fn coefficients(&self, t: f64) -> (C64, C64, C64, C64) {
        let i = c64(0.0, 1.0);
        let p = self.target * (t + i * self.beta * t * (1.0 - t));
        let dp = self.target * (1.0 + i * self.beta * (1.0 - 2.0 * t));
        match self.kind {
            OriginKind::Zero => (c64(1.0, 0.0), p * self.hbar_pow, c64(0.0, 0.0), dp * self.hbar_pow),
            OriginKind::Infinity => (p, self.hbar_pow, dp, c64(0.0, 0.0)),
        }
    }
}

/// Tracks one set of roots along a path.
struct Tracker<'a> {
    system: &'a BetheSystem,
    ctl: &'a StepControl,
    path: Path,
}

enum Coordinates {
    Affine,
    Log,
}

impl Tracker<'_> {
    fn coordinates(&self, s: &[C64]) -> Coordinates {
        let scale = self.system.geometric().a.iter().fold(0.0f64, |m, a| m.max(a.norm()));
        if self.ctl.log_coordinates && s.iter().all(|x| x.norm() > 1e-6 * scale) {
            Coordinates::Log
        } else {
            Coordinates::Affine
        }
    }

    /// Residual and Jacobian at `t` with respect to the chosen coordinates.
    fn system_at(&self, s: &[C64], t: f64, coords: &Coordinates) -> (DVector<C64>, DMatrix<C64>) {
        let (alpha, gamma, _, _) = self.path.coefficients(t);
        let ev = self.system.geometric().evaluate(s);
        let (f, mut j) = combine(&ev, alpha, gamma);
        if let Coordinates::Log = coords {
            for (v, &sv) in s.iter().enumerate() {
                let mut col = j.column_mut(v);
                col *= sv;
            }
        }
        (f, j)
    }

    /// `ds/dt` from `J ds/dt = -dF/dt`.
    fn tangent(&self, s: &[C64], t: f64) -> Option<DVector<C64>> {
        let (_, _, dalpha, dgamma) = self.path.coefficients(t);
        let ev = self.system.geometric().evaluate(s);
        let (alpha, gamma, _, _) = self.path.coefficients(t);
        let (_, j) = combine(&ev, alpha, gamma);
        let ft = DVector::from_iterator(s.len(), ev.a.iter().zip(&ev.b).map(|(a, b)| dalpha * a - dgamma * b));
        j.lu().solve(&(-ft))
    }

    /// Newton at fixed `t`. Fails on divergence or slow contraction.
    fn correct(&self, start: &[C64], t: f64, max_iter: usize, tol: f64) -> Option<Vec<C64>> {
        let mut s = start.to_vec();
        let mut last = f64::INFINITY;
        for it in 0..max_iter {
            let coords = self.coordinates(&s);
            let (f, j) = self.system_at(&s, t, &coords);
            let dx = j.lu().solve(&(-f))?;
            let size = dx
                .iter()
                .zip(&s)
                .map(|(d, x)| match coords {
                    Coordinates::Log => d.norm(),
                    Coordinates::Affine => d.norm() / x.norm().max(1e-12),
                })
                .fold(0.0, f64::max);
            if !size.is_finite() || (it > 0 && size > 0.5 * last && size > 1e-12) {
                return None;
            }
            for (x, d) in s.iter_mut().zip(dx.iter()) {
                *x = match coords {
                    Coordinates::Log => *x * d.exp(),
                    Coordinates::Affine => *x + d,
                };
            }
            last = size;
            if size < tol {
                return Some(s);
            }
        }
        None
    }

    fn min_separation(&self, s: &[C64]) -> f64 {
        let h = self.system.geometric().hbar;
        let mut sep = f64::INFINITY;
        for i in 0..s.len() {
            for j in 0..s.len() {
                if i != j {
                    let rel = |x: C64, y: C64| (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
                    sep = sep.min(rel(s[i], s[j])).min(rel(s[i], h * s[j]));
                }
            }
        }
        sep
    }

    /// Tracks from `t = 0` to `t = 1` and polishes the endpoint.
    fn track(&self, start: Vec<C64>) -> Result<(Vec<C64>, usize), BetheError> {
        let ctl = self.ctl;
        let mut s = start;
        let mut t = 0.0f64;
        let mut dt = ctl.initial_step;
        let mut clean = 0;
        let mut steps = 0usize;
        while t < 1.0 {
            let h = dt.min(1.0 - t);
            let pred = self.tangent(&s, t).map(|v| {
                s.iter().zip(v.iter()).map(|(x, d)| x + d * h).collect::<Vec<_>>()
            });
            let next = pred.and_then(|p| {
                let corrected = self.correct(&p, t + h, ctl.max_newton, 1e-11)?;
                // Reject jumps: the corrector must stay close to the prediction
                // relative to the distance between roots.
                let jump = corrected
                    .iter()
                    .zip(&p)
                    .map(|(c, q)| (c - q).norm() / c.norm().max(1e-300))
                    .fold(0.0, f64::max);
                let sep = self.min_separation(&corrected);
                (jump < 0.25 * sep.max(1e-300) || s.len() < 2 && jump < 0.25).then_some(corrected)
            });
            match next {
                Some(c) => {
                    s = c;
                    t += h;
                    steps += 1;
                    if s.len() > 1 && self.min_separation(&s) < ctl.collision_tol {
                        return Err(BetheError::PathCollision { t });
                    }
                    clean += 1;
                    if clean >= 3 {
                        dt = (dt * 2.0).min(ctl.max_step);
                        clean = 0;
                    }
                }
                None => {
                    dt *= 0.5;
                    clean = 0;
                    if dt < ctl.min_step {
                        return Err(BetheError::StepUnderflow { t });
                    }
                }
            }
        }
        let polished = self.polish(s)?;
        Ok((polished, steps))
    }

    /// Newton at `t = 1` until the residual stops decreasing.
    fn polish(&self, mut s: Vec<C64>) -> Result<Vec<C64>, BetheError> {
        let (alpha, gamma, _, _) = self.path.coefficients(1.0);
        let g = self.system.geometric();
        let mut best = g.scaled_residual(&s, alpha, gamma);
        for _ in 0..20 {
            let coords = self.coordinates(&s);
            let (f, j) = self.system_at(&s, 1.0, &coords);
            let Some(dx) = j.lu().solve(&(-f)) else { break };
            let cand: Vec<C64> = s
                .iter()
                .zip(dx.iter())
                .map(|(x, d)| match coords {
                    Coordinates::Log => *x * d.exp(),
                    Coordinates::Affine => *x + d,
                })
                .collect();
            let r = g.scaled_residual(&cand, alpha, gamma);
            // Stop on no progress or a NaN residual.
            if r.partial_cmp(&best) != Some(std::cmp::Ordering::Less) {
                break;
            }
            s = cand;
            best = r;
            if best < 1e-15 {
                break;
            }
        }
        if best < self.ctl.tol {
            Ok(s)
        } else {
            Err(BetheError::NotConverged { residual: best })
        }
    }
}

fn origin_kind(system: &BetheSystem) -> OriginKind {
    if system.geometric().z.norm() > 1.0 {
        OriginKind::Infinity
    } else {
        OriginKind::Zero
    }
}

/// Starting roots for an origin subset.
pub fn origin_roots(system: &BetheSystem, origin: u32, kind: OriginKind) -> Vec<C64> {
    let g = system.geometric();
    (0..system.n())
        .filter(|&j| origin >> j & 1 == 1)
        .map(|j| match kind {
            OriginKind::Zero => g.a[j],
            OriginKind::Infinity => g.hbar * g.a[j],
        })
        .collect()
}

/// Continues one origin subset to the deformation `z_target` (in the system's
/// own convention), trying each detour in turn.
pub fn continue_solution(
    origin: u32,
    z_target: C64,
    system: &BetheSystem,
    ctl: &StepControl,
) -> Result<BetheSolution, BetheError> {
    let system = system.with_deformation(z_target)?;
    let kind = origin_kind(&system);
    let start = origin_roots(&system, origin, kind);
    continue_from_roots(start, origin, &system, ctl, &ctl.betas)
}

/// Continues explicit starting roots (the origin subset in any order).
pub fn continue_from_roots(
    start: Vec<C64>,
    origin: u32,
    system: &BetheSystem,
    ctl: &StepControl,
    betas: &[f64],
) -> Result<BetheSolution, BetheError> {
    if start.len() != system.k() {
        return Err(BetheError::InvalidSystem("origin size differs from k".into()));
    }
    let g = system.geometric();
    let kind = origin_kind(system);
    let finish = |mut roots: Vec<C64>, steps: usize| {
        canonical_sort(&mut roots);
        BetheSolution {
            residual_norm: system.scaled_residual(&roots),
            roots,
            z: system.deformation(),
            origin,
            origin_kind: kind,
            path_steps: steps,
            convention: system.convention(),
        }
    };
    if g.z.norm() == 0.0 || system.k() == 0 {
        return Ok(finish(start, 0));
    }
    let target = match kind {
        OriginKind::Zero => g.z,
        OriginKind::Infinity => g.z.inv(),
    };
    let mut last_err = BetheError::InvalidSystem("no detour parameters".into());
    for &beta in betas {
        let tracker = Tracker {
            system,
            ctl,
            path: Path {
                kind,
                target,
                beta,
                hbar_pow: g.hbar_pow,
            },
        };
        match tracker.track(start.clone()) {
            Ok((roots, steps)) => return Ok(finish(roots, steps)),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Solves a system completely: one path per origin subset, in parallel,
/// followed by deduplication and retries for merged paths.
pub fn solve_all(system: &BetheSystem, ctl: &StepControl) -> Result<SolutionSet, BetheError> {
    let n = system.n();
    let k = system.k();
    let origins: Vec<u32> = enumerate_fixed_points(n, k).into_iter().map(|p| p.mask).collect();
    let hbar = system.geometric().hbar;
    let mut warnings = Vec::new();

    let results: Vec<Result<BetheSolution, BetheError>> =
        origins
        .par_iter()
        .map(|&o| {
            let kind = origin_kind(system);
            continue_from_roots(origin_roots(system, o, kind), o, system, ctl, &ctl.betas)
        })
        .collect();

    let mut accepted: Vec<BetheSolution> = Vec::new();
    let mut retry: Vec<u32> = Vec::new();
    for (o, r) in origins.iter().zip(results) {
        match r {
            Ok(sol) => accept(sol, hbar, &mut accepted, &mut retry, &mut warnings),
            Err(e) => {
                warnings.push(format!("origin {o:#b}: {e}"));
                retry.push(*o);
            }
        }
    }

    // Merged or failed paths get another chance with the detours in reverse
    // order, so the second attempt does not repeat the first path.
    let reversed: Vec<f64> = ctl.betas.iter().rev().copied().collect();
    for o in std::mem::take(&mut retry) {
        let kind = origin_kind(system);
        let start = origin_roots(system, o, kind);
        match continue_from_roots(start, o, system, ctl, &reversed) {
            Ok(sol) => {
                let mut dropped = Vec::new();
                accept(sol, hbar, &mut accepted, &mut dropped, &mut warnings);
            }
            Err(e) => warnings.push(format!("origin {o:#b} after retries: {e}")),
        }
    }

    accepted.sort_by_key(|s| s.origin);
    let complete = accepted.len() == binomial(n, k);
    let set = SolutionSet {
        n,
        k,
        z: system.deformation(),
        convention: system.convention(),
        solutions: accepted,
        complete,
        params_hash: params_hash(system.params()),
        warnings,
    };
    if complete {
        Ok(set)
    } else {
        Err(BetheError::IncompleteSet {
            found: set.solutions.len(),
            expected: binomial(n, k),
            partial: Box::new(set),
        })
    }
}

fn accept(
    sol: BetheSolution,
    hbar: C64,
    accepted: &mut Vec<BetheSolution>,
    retry: &mut Vec<u32>,
    warnings: &mut Vec<String>,
) {
    if let Some((i, j)) = admissibility_violation(&sol.roots, hbar, 1e-8) {
        warnings.push(format!("origin {:#b}: inadmissible roots s_{i}, s_{j} excluded", sol.origin));
        retry.push(sol.origin);
        return;
    }
    if let Some(prev) = accepted.iter().find(|p| same_multiset(&p.roots, &sol.roots, 1e-8)) {
        warnings.push(format!(
            "origin {:#b} merged with origin {:#b}; genericity warning",
            sol.origin, prev.origin
        ));
        retry.push(sol.origin);
        return;
    }
    accepted.push(sol);
}

/// The classical solution set at `z = 0`.
pub fn classical_set(n: usize, k: usize, params: &ModelParams, convention: Convention) -> SolutionSet {
    let solutions = classical_solutions(n, k, params)
        .into_iter()
        .zip(enumerate_fixed_points(n, k))
        .map(|(mut roots, p)| {
            canonical_sort(&mut roots);
            BetheSolution {
                roots,
                z: c64(0.0, 0.0),
                residual_norm: 0.0,
                origin: p.mask,
                origin_kind: OriginKind::Zero,
                path_steps: 0,
                convention,
            }
        })
        .collect();
    SolutionSet {
        n,
        k,
        z: c64(0.0, 0.0),
        convention,
        solutions,
        complete: true,
        params_hash: params_hash(params),
        warnings: Vec::new(),
    }
}
