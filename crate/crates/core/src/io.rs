//! Shared output formatting.

/// Float formatting with 17 significant digits; negative zero prints as
/// zero.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x + 0.0)
}
