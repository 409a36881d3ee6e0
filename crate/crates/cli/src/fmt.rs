//! Locale-independent number formatting for the CSV outputs.

/// Formats with 12 significant digits, dropping trailing zeros, switching to
/// exponential notation outside [1e-5, 1e12). Output is bit-stable for a
/// given input, which keeps repeated runs diffable.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp_form = format!("{x:.11e}");
    let (mantissa, exp) = exp_form
        .split_once('e')
        .expect("{:.11e} always contains an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);

    let body = if (-5..12).contains(&exp) {
        let point = exp + 1; // digits left of the decimal point
        let mut s = String::new();
        if point <= 0 {
            s.push_str("0.");
            for _ in 0..-point {
                s.push('0');
            }
            s.push_str(&digits);
        } else if point as usize >= digits.len() {
            s.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                s.push('0');
            }
        } else {
            s.push_str(&digits[..point as usize]);
            s.push('.');
            s.push_str(&digits[point as usize..]);
        }
        if s.contains('.') {
            while s.ends_with('0') {
                s.pop();
            }
            if s.ends_with('.') {
                s.pop();
            }
        }
        s
    } else {
        let mut d = digits;
        while d.len() > 1 && d.ends_with('0') {
            d.pop();
        }
        if d.len() == 1 {
            format!("{d}e{exp}")
        } else {
            format!("{}.{}e{exp}", &d[..1], &d[1..])
        }
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}
