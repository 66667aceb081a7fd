//! Text encodings shared by the cache and the reports.
//!
//! Complex numbers travel as `re+imi` (or `re-imi`), each part printed with
//! the shortest decimal that round-trips the `f64` exactly.

use crate::error::CoreError;
use crate::params::ModelParams;
use crate::scalar::C64;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Formats a complex number as `re+imi`, exactly round-trippable.
pub fn format_c64(z: C64) -> String {
    let im = z.im;
    let sign = if im.is_sign_negative() || im.is_nan() { "" } else { "+" };
    format!("{}{}{}i", real_text(z.re), sign, real_text(im))
}

/// Shortest round-trip text for a float, in exponent form outside
/// `[1e-5, 1e16)` so that tiny imaginary parts stay short.
fn real_text(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Parses the output of [`format_c64`]. Bare real and bare imaginary numbers
/// are also accepted.
pub fn parse_c64(s: &str) -> Result<C64, CoreError> {
    let s = s.trim();
    let err = || CoreError::Parse(format!("not a complex number: {s:?}"));
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| err());
    };
    // The imaginary part starts at the last sign that is not an exponent sign
    // and not the leading character.
    let bytes = body.as_bytes();
    let Some(split) = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
    else {
        // Purely imaginary, like `0.5i` or `-2e-3i`.
        return body.parse::<f64>().map(|im| C64::new(0.0, im)).map_err(|_| err());
    };
    let re = body[..split].parse::<f64>().map_err(|_| err())?;
    let im_text = body[split..].strip_prefix('+').unwrap_or(&body[split..]);
    let im = im_text.parse::<f64>().map_err(|_| err())?;
    Ok(C64::new(re, im))
}

/// Hex SHA-256 digest of the canonical JSON serialization of `value`.
///
/// Field order follows the struct declaration, so the digest is stable as
/// long as the serialized type is.
pub fn canonical_hash<T: Serialize>(value: &T) -> String {
    let text = serde_json::to_string(value).expect("serializable value");
    hex_digest(text.as_bytes())
}

#[derive(Serialize)]
struct CanonicalParams {
    n: usize,
    a: Vec<String>,
    hbar: String,
    q: String,
    precision_bits: u32,
}

/// Digest identifying a parameter set; caches and reports carry it.
pub fn params_hash(params: &ModelParams) -> String {
    canonical_hash(&CanonicalParams {
        n: params.n(),
        a: params.a().iter().map(|&z| format_c64(z)).collect(),
        hbar: format_c64(params.hbar()),
        q: format_c64(params.q()),
        precision_bits: params.precision_bits(),
    })
}

/// Hex SHA-256 digest of raw bytes.
pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
