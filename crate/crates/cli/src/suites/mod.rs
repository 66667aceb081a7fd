//! Verification suites behind a common trait, looked up by name.

mod algebra;
mod qop;
mod transfer;
mod vertex;

pub use algebra::AlgebraSuite;
pub use qop::{QopSuite, TqSuite, WronskianSuite};
pub use transfer::TransferSuite;
pub use vertex::VertexSuite;

use kxxz_bethe::{BetheError, SolutionCache};
use kxxz_core::wire::params_hash;
use kxxz_core::{CheckEntry, ModelParams, RunMetadata, VerificationReport, C64};
use std::collections::BTreeMap;
use std::time::Instant;
use thiserror::Error;

/// Deliberate corruptions used as negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sabotage {
    /// Negate `K` in the algebra and drop the `(-1)^n` in the universal formula.
    pub sign: bool,
    /// Use `-Z` on the right-hand side of the Wronskian.
    pub branch: bool,
    /// Multiply `a_1` by `1 + 1e-3`.
    pub am: bool,
}

/// Everything a suite needs to run.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    pub params: ModelParams,
    /// Deformation values; each suite falls back to its defaults when empty.
    pub z: Vec<C64>,
    /// Order in `x` of Q-operator series.
    pub m: usize,
    /// Degree cutoff of vertex series.
    pub d_max: usize,
    pub sabotage: Sabotage,
    pub cache: Option<SolutionCache>,
    /// Seed for random probe points.
    pub seed: u64,
}

impl SuiteContext {
    /// A context with default knobs for the given parameters.
    pub fn new(params: ModelParams) -> Self {
        SuiteContext {
            params,
            z: Vec::new(),
            m: 6,
            d_max: 14,
            sabotage: Sabotage::default(),
            cache: None,
            seed: 7,
        }
    }

    /// The deformation list for a suite.
    pub fn z_for(&self, suite: &dyn Suite) -> Vec<C64> {
        if self.z.is_empty() {
            suite.default_z()
        } else {
            self.z.clone()
        }
    }
}

/// A suite that could not finish.
#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown tolerance `{0}`: the name must start with a suite name")]
    UnknownTolerance(String),
    #[error(transparent)]
    Bethe(#[from] BetheError),
    #[error("{0}")]
    Failed(String),
}

impl SuiteError {
    /// Wraps any error that has no dedicated variant.
    pub fn failed(e: impl std::fmt::Display) -> Self {
        SuiteError::Failed(e.to_string())
    }
}

/// A named group of checks.
pub trait Suite: Send + Sync {
    /// Name used on the command line and as the check-id prefix.
    fn name(&self) -> &'static str;
    /// One-line description.
    fn summary(&self) -> &'static str;
    /// Deformation values used when the run does not specify any.
    fn default_z(&self) -> Vec<C64>;
    /// Runs every check at the given deformations.
    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError>;
}

/// Appends `.z{j}` to every check id of a per-deformation report, so that
/// ids stay unique and prefix overrides still reach them.
pub(crate) fn tag_z(report: &mut VerificationReport, j: usize) {
    for e in &mut report.entries {
        e.check_id = format!("{}.z{j}", e.check_id);
    }
}

/// Tolerance overrides keyed by check-id prefix. The longest matching
/// prefix wins; a prefix matches an id equal to it or followed by a dot.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tolerances {
    overrides: BTreeMap<String, f64>,
}

impl Tolerances {
    /// Adds or replaces an override.
    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        self.overrides.insert(name.into(), value);
    }

    /// Parses `NAME=VALUE`.
    pub fn parse_assignment(text: &str) -> Option<(String, f64)> {
        let (name, value) = text.split_once('=')?;
        let value: f64 = value.trim().parse().ok()?;
        (value.is_finite() && value >= 0.0).then(|| (name.trim().to_string(), value))
    }

    /// All overrides in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&String, &f64)> {
        self.overrides.iter()
    }

    fn lookup(&self, id: &str) -> Option<f64> {
        self.overrides
            .iter()
            .filter(|(name, _)| id == name.as_str() || id.strip_prefix(name.as_str()).is_some_and(|r| r.starts_with('.')))
            .max_by_key(|(name, _)| name.len())
            .map(|(_, &v)| v)
    }

    /// Re-grades every entry that an override reaches.
    pub fn apply(&self, report: &mut VerificationReport) {
        for e in &mut report.entries {
            if let Some(tol) = self.lookup(&e.check_id) {
                *e = CheckEntry::new(e.check_id.clone(), e.anchor.clone(), e.residual, tol, e.bound);
            }
        }
    }
}

/// Suites registered by name, in a fixed order.
pub struct SuiteRegistry {
    suites: Vec<Box<dyn Suite>>,
}

impl Default for SuiteRegistry {
    fn default() -> Self {
        Self::standard()
    }
}

impl SuiteRegistry {
    /// An empty registry.
    pub fn empty() -> Self {
        SuiteRegistry { suites: Vec::new() }
    }

    /// The six standard suites.
    pub fn standard() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(AlgebraSuite));
        r.register(Box::new(TransferSuite));
        r.register(Box::new(QopSuite));
        r.register(Box::new(WronskianSuite));
        r.register(Box::new(TqSuite));
        r.register(Box::new(VertexSuite));
        r
    }

    /// Adds a suite; a suite with the same name is replaced in place.
    pub fn register(&mut self, suite: Box<dyn Suite>) {
        match self.suites.iter().position(|s| s.name() == suite.name()) {
            Some(i) => self.suites[i] = suite,
            None => self.suites.push(suite),
        }
    }

    /// Registered names in order.
    pub fn names(&self) -> Vec<&'static str> {
        self.suites.iter().map(|s| s.name()).collect()
    }

    /// The suite with the given name.
    pub fn get(&self, name: &str) -> Option<&dyn Suite> {
        self.suites.iter().find(|s| s.name() == name).map(|s| s.as_ref())
    }

    /// Checks that every override names a registered suite.
    pub fn validate_tolerances(&self, tol: &Tolerances) -> Result<(), SuiteError> {
        for (name, _) in tol.iter() {
            let head = name.split('.').next().unwrap_or("");
            if self.get(head).is_none() {
                return Err(SuiteError::UnknownTolerance(name.clone()));
            }
        }
        Ok(())
    }

    /// Runs the named suites (`all` expands to every suite), applies the
    /// overrides and fills in the metadata.
    pub fn run(&self, names: &[String], ctx: &SuiteContext, tol: &Tolerances) -> Result<VerificationReport, SuiteError> {
        self.validate_tolerances(tol)?;
        let mut selected: Vec<&dyn Suite> = Vec::new();
        for name in names {
            if name == "all" {
                selected.extend(self.suites.iter().map(|s| s.as_ref()));
            } else {
                selected.push(self.get(name).ok_or_else(|| SuiteError::UnknownSuite(name.clone()))?);
            }
        }
        let start = Instant::now();
        let mut report = VerificationReport::new(RunMetadata {
            params_hash: params_hash(&ctx.params),
            precision_bits: ctx.params.precision_bits(),
            wall_time_s: None,
        });
        let mut seen = Vec::new();
        for suite in selected {
            if seen.contains(&suite.name()) {
                continue;
            }
            seen.push(suite.name());
            report.merge(suite.run(ctx, &ctx.z_for(suite))?);
        }
        tol.apply(&mut report);
        report.metadata.wall_time_s = Some(start.elapsed().as_secs_f64());
        Ok(report)
    }
}

/// Solves a Bethe system, going through the cache when one is configured.
pub(crate) fn solve_cached(
    ctx: &SuiteContext,
    system: &kxxz_bethe::BetheSystem,
    ctl: &kxxz_bethe::StepControl,
) -> Result<kxxz_bethe::SolutionSet, BetheError> {
    if let Some(cache) = &ctx.cache {
        if let Some(set) = cache.load(system)? {
            return Ok(set);
        }
        let set = kxxz_bethe::solve_all(system, ctl)?;
        cache.store(system, &set)?;
        return Ok(set);
    }
    kxxz_bethe::solve_all(system, ctl)
}
