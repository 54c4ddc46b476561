//! `%.Ng`-style number formatting.

/// Formats `v` with `digits` significant digits, dropping trailing zeros, in
/// fixed notation when the decimal exponent is in `[-5, digits)` and
/// scientific notation otherwise (the C `%g` rule).
///
/// With 17 digits the output always parses back to the same `f64`.
pub fn format_significant(v: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let mantissa_digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let body = if exp < -5 || exp >= digits as i32 {
        let mut m = mantissa_digits.clone();
        let tail = m.split_off(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{m}e{exp}")
        } else {
            format!("{m}.{tail}e{exp}")
        }
    } else if exp >= 0 {
        let split = exp as usize + 1;
        let (int, frac) = mantissa_digits.split_at(split);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", mantissa_digits.trim_end_matches('0'))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}
