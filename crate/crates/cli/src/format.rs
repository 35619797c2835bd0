//! Significant-digit formatting shared by the human and machine output
//! paths, so both modes show the same rounded values.

/// Rounds to `digits` significant digits by a decimal round-trip, which
/// is exact for the digit counts the CLI accepts (1..=17).
pub fn round_sig(v: f64, digits: u8) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits as usize - 1, v)
        .parse()
        .expect("scientific notation round-trips")
}

/// Formats with `digits` significant digits, plain notation for moderate
/// magnitudes and scientific for extreme ones, trailing zeros trimmed.
pub fn format_sig(v: f64, digits: u8) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let exponent = v.abs().log10().floor() as i32;
    if exponent < -4 || exponent >= digits as i32 {
        let s = format!("{:.*e}", digits as usize - 1, v);
        trim_scientific(&s)
    } else {
        let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
        trim_plain(&format!("{v:.decimals$}"))
    }
}

fn trim_plain(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn trim_scientific(s: &str) -> String {
    match s.split_once('e') {
        Some((mantissa, exponent)) => format!("{}e{exponent}", trim_plain(mantissa)),
        None => s.to_string(),
    }
}
