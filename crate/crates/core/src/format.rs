//! Number formatting shared by every text output: six significant digits.

/// Rounds to six significant digits. Non-finite values pass through.
pub fn sig6(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

/// Text form used in CSV files: six significant digits, `inf`/`-inf`/`nan`
/// for non-finite values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_owned()
    } else if x == f64::INFINITY {
        "inf".to_owned()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_owned()
    } else {
        let r = sig6(x);
        // Display never uses exponents; normalise negative zero.
        if r == 0.0 {
            "0".to_owned()
        } else {
            format!("{r}")
        }
    }
}
