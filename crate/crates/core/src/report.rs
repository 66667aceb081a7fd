//! Verification reports: ordered check entries plus run metadata.
//!
//! A check passes when its residual is finite and on the right side of its
//! tolerance. Most checks are upper bounds (`residual <= tolerance`); a few,
//! such as numerical ranks or negative controls, are lower bounds.

use crate::wire::canonical_hash;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// Which side of the tolerance counts as a pass.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Pass iff `residual <= tolerance`.
    #[default]
    Upper,
    /// Pass iff `residual >= tolerance`.
    Lower,
}

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    /// Stable identifier, dotted by suite (for example `algebra.ef.m1.l0`).
    pub check_id: String,
    /// Short human description of the identity being checked.
    pub anchor: String,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub residual: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(default)]
    pub bound: BoundKind,
}

impl CheckEntry {
    /// Builds an entry and decides its status. Non-finite residuals fail.
    pub fn new(check_id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64, bound: BoundKind) -> Self {
        let ok = residual.is_finite()
            && match bound {
                BoundKind::Upper => residual <= tolerance,
                BoundKind::Lower => residual >= tolerance,
            };
        CheckEntry {
            check_id: check_id.into(),
            anchor: anchor.into(),
            residual,
            tolerance,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            bound,
        }
    }

    /// Whether the entry passed.
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Metadata describing the run that produced a report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub params_hash: String,
    pub precision_bits: u32,
    /// Wall time in seconds. Excluded from the checksum so that reruns of the
    /// same configuration produce identical checksums.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

/// Ordered list of checks with run metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub metadata: RunMetadata,
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    /// Empty report with the given metadata.
    pub fn new(metadata: RunMetadata) -> Self {
        VerificationReport { metadata, entries: Vec::new() }
    }

    /// Appends an upper-bound check.
    pub fn push(&mut self, check_id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) {
        self.entries.push(CheckEntry::new(check_id, anchor, residual, tolerance, BoundKind::Upper));
    }

    /// Appends a lower-bound check.
    pub fn push_lower(&mut self, check_id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64) {
        self.entries.push(CheckEntry::new(check_id, anchor, residual, tolerance, BoundKind::Lower));
    }

    /// Appends a check that either holds or does not; encoded as residual 0 or 1
    /// against tolerance 0.5.
    pub fn push_flag(&mut self, check_id: impl Into<String>, anchor: impl Into<String>, holds: bool) {
        self.push(check_id, anchor, if holds { 0.0 } else { 1.0 }, 0.5);
    }

    /// Appends all entries of another report, keeping their order.
    pub fn merge(&mut self, other: VerificationReport) {
        self.entries.extend(other.entries);
    }

    /// Overall status: pass iff every entry passes.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(CheckEntry::passed)
    }

    /// Failed entries in order.
    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    /// Largest residual among upper-bound entries whose id starts with `prefix`.
    pub fn max_residual(&self, prefix: &str) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.bound == BoundKind::Upper && e.check_id.starts_with(prefix))
            .map(|e| if e.residual.is_finite() { e.residual } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }

    /// Digest over entries, params hash and precision; wall time is excluded.
    pub fn checksum(&self) -> String {
        #[derive(Serialize)]
        struct Covered<'a> {
            params_hash: &'a str,
            precision_bits: u32,
            entries: &'a [CheckEntry],
        }
        canonical_hash(&Covered {
            params_hash: &self.metadata.params_hash,
            precision_bits: self.metadata.precision_bits,
            entries: &self.entries,
        })
    }
}

// Residuals may be NaN or infinite; JSON has no literal for those, so
// non-finite values travel as strings.
fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_str(&x.to_string())
    }
}

fn de_f64<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrText {
        Num(f64),
        Text(String),
    }
    match NumOrText::deserialize(d)? {
        NumOrText::Num(x) => Ok(x),
        NumOrText::Text(t) => t.parse().map_err(serde::de::Error::custom),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        let e = CheckEntry::new("x", "y", f64::NAN, 1.0, BoundKind::Upper);
        assert!(!e.passed());
        let e = CheckEntry::new("x", "y", f64::NAN, 1.0, BoundKind::Lower);
        assert!(!e.passed());
    }

    #[test]
    fn bounds_are_inclusive() {
        assert!(CheckEntry::new("x", "y", 1.0, 1.0, BoundKind::Upper).passed());
        assert!(CheckEntry::new("x", "y", 1.0, 1.0, BoundKind::Lower).passed());
        assert!(!CheckEntry::new("x", "y", 0.9, 1.0, BoundKind::Lower).passed());
    }

    #[test]
    fn overall_status_requires_every_entry() {
        let mut r = VerificationReport::default();
        assert!(r.passed());
        r.push("a", "first", 1e-12, 1e-10);
        assert!(r.passed());
        r.push_flag("b", "second", false);
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn checksum_ignores_wall_time_and_json_round_trips() {
        let mut r = VerificationReport::new(RunMetadata {
            params_hash: "abc".into(),
            precision_bits: 53,
            wall_time_s: None,
        });
        r.push("a", "first", f64::INFINITY, 1e-10);
        r.push("b", "second", 3.25e-13, 1e-10);
        let mut timed = r.clone();
        timed.metadata.wall_time_s = Some(1.5);
        assert_eq!(r.checksum(), timed.checksum());

        let text = serde_json::to_string(&timed).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, timed);
    }
}
