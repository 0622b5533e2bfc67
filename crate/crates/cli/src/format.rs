//! Fixed number formatting for every artifact: 12 significant digits,
//! positional for 10⁻⁴ ≤ |x| < 10⁸ and scientific otherwise.

/// Formats `x` with 12 significant digits. Trailing zeros after the decimal
/// point are dropped; zero is `0`, non-finite values are `NaN`, `inf`, `-inf`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..8).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Zero abscissae as stored in the zero cache: 12 decimals.
pub fn gamma(x: f64) -> String {
    format!("{x:.12}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(-1234.5678), "-1234.5678");
        assert_eq!(num(12_345_678.912_345_67), "12345678.9123");
        assert_eq!(num(1e8), "1e8");
        assert_eq!(num(123_456_789.0), "1.23456789e8");
        assert_eq!(num(1e-4), "0.0001");
        assert_eq!(num(1.234_567_890_123_4e-5), "1.23456789012e-5");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn rounding_across_a_power_of_ten() {
        assert_eq!(num(9.999_999_999_999_9), "10");
        assert_eq!(num(99_999_999.999_999_9), "1e8");
        assert_eq!(num(9.999_999_999_999_9e-5), "0.0001");
    }

    #[test]
    fn gamma_has_twelve_decimals() {
        assert_eq!(gamma(14.134_725_141_734_693), "14.134725141735");
    }
}
