//! Locale-independent numeric formatting for file outputs.

/// Format with 12 significant digits in scientific notation. Used by every
/// CSV and JSON writer so outputs are byte-stable across runs and platforms.
pub fn sig12(x: f64) -> String {
    format!("{:.11e}", x)
}

/// Round to 12 significant digits, for values embedded in JSON documents.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig12(x).parse().unwrap_or(x)
}
