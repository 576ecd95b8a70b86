//! Locale-independent number formatting with a fixed number of significant digits.

/// Significant digits used for every number the CLI prints.
pub const SIG_DIGITS: usize = 12;

/// Formats `x` like C's `%.12g`: twelve significant digits, trailing zeros
/// removed, scientific notation outside `1e-5 ≤ |x| < 1e12`.
pub fn sig(x: f64) -> String {
    sig_digits(x, SIG_DIGITS)
}

/// `%.{digits}g` formatting.
pub fn sig_digits(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".to_owned()
        } else if x > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    sig(x).parse().unwrap_or(x)
}
