//! Deterministic number formatting for emitted files.

/// Formats `x` with nine significant digits in scientific notation.
///
/// Zero prints as `0`, non-finite values as `NaN`, `inf` or `-inf`. The
/// output is a pure function of the bit pattern of `x`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "NaN".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.8e}")
}

/// Rounds `x` to nine significant digits (for JSON emission).
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    sig9(x).parse().unwrap_or(x)
}
