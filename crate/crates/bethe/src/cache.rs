//! On-disk cache of solution sets as JSON lines, one record per solution.
//!
//! Complex numbers are written as `re+imi` strings with shortest round-trip
//! formatting, so reading a file back reproduces every root bit for bit.

use crate::solver::{BetheSolution, OriginKind, SolutionSet};
use crate::system::BetheSystem;
use crate::{BetheError, Convention};
use kxxz_core::wire::{canonical_hash, format_c64, params_hash, parse_c64};
use kxxz_core::binomial;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// One line of a cache file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub n: usize,
    pub k: usize,
    pub convention: Convention,
    pub z: String,
    pub params_hash: String,
    pub origin: u32,
    pub origin_kind: OriginKind,
    pub roots: Vec<String>,
    pub residual: f64,
    pub path_steps: usize,
}

impl CacheRecord {
    fn from_solution(set: &SolutionSet, sol: &BetheSolution) -> Self {
        CacheRecord {
            n: set.n,
            k: set.k,
            convention: set.convention,
            z: format_c64(set.z),
            params_hash: set.params_hash.clone(),
            origin: sol.origin,
            origin_kind: sol.origin_kind,
            roots: sol.roots.iter().map(|&r| format_c64(r)).collect(),
            residual: sol.residual_norm,
            path_steps: sol.path_steps,
        }
    }

    fn to_solution(&self) -> Result<BetheSolution, BetheError> {
        Ok(BetheSolution {
            roots: self.roots.iter().map(|r| parse_c64(r)).collect::<Result<_, _>>()?,
            z: parse_c64(&self.z)?,
            residual_norm: self.residual,
            origin: self.origin,
            origin_kind: self.origin_kind,
            path_steps: self.path_steps,
            convention: self.convention,
        })
    }
}

/// Writes a solution set to `path`, replacing any existing file.
pub fn write_set(path: &Path, set: &SolutionSet) -> Result<(), BetheError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut out = fs::File::create(path)?;
    for sol in &set.solutions {
        let line = serde_json::to_string(&CacheRecord::from_solution(set, sol))?;
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a solution set written by [`write_set`]. Warnings are not stored;
/// completeness is recomputed from the number of records.
pub fn read_set(path: &Path) -> Result<SolutionSet, BetheError> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            records.push(serde_json::from_str::<CacheRecord>(&line)?);
        }
    }
    let first = records
        .first()
        .ok_or_else(|| BetheError::Cache(format!("{} holds no records", path.display())))?;
    let (n, k, convention, z, hash) = (first.n, first.k, first.convention, first.z.clone(), first.params_hash.clone());
    if records
        .iter()
        .any(|r| r.n != n || r.k != k || r.convention != convention || r.z != z || r.params_hash != hash)
    {
        return Err(BetheError::Cache(format!("{} mixes systems", path.display())));
    }
    let solutions = records.iter().map(CacheRecord::to_solution).collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionSet {
        n,
        k,
        z: parse_c64(&z)?,
        convention,
        complete: solutions.len() == binomial(n, k),
        solutions,
        params_hash: hash,
        warnings: Vec::new(),
    })
}

/// A directory of cached solution sets keyed by system.
#[derive(Clone, Debug)]
pub struct SolutionCache {
    dir: PathBuf,
}

impl SolutionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SolutionCache { dir: dir.into() }
    }

    /// File that holds the solutions of `system`.
    pub fn path_for(&self, system: &BetheSystem) -> PathBuf {
        let key = canonical_hash(&(
            params_hash(system.params()),
            system.k(),
            system.convention(),
            format_c64(system.deformation()),
        ));
        self.dir.join(format!("{}.jsonl", &key[..16]))
    }

    /// Cached complete set for `system`, if present.
    pub fn load(&self, system: &BetheSystem) -> Result<Option<SolutionSet>, BetheError> {
        let path = self.path_for(system);
        if !path.exists() {
            return Ok(None);
        }
        let set = read_set(&path)?;
        Ok(set.complete.then_some(set))
    }

    /// Stores a set under its system's key.
    pub fn store(&self, system: &BetheSystem, set: &SolutionSet) -> Result<PathBuf, BetheError> {
        let path = self.path_for(system);
        write_set(&path, set)?;
        Ok(path)
    }
}
