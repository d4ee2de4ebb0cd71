//! Deterministic float formatting shared by the CSV, JSON and SVG emitters.

/// Significant digits kept in machine-readable output.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to [`SIG_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Shortest round-trip text of `x` after rounding to 12 significant digits.
pub fn fmt_f64(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    let a = r.abs();
    if (1e-6..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Converts `x` into a JSON number rounded to 12 significant digits.
pub fn json_f64(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(round_sig(x))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps_digits() {
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.14159265359");
        assert_eq!(fmt_f64(4.0), "4");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(-2.5e-9), "-2.5e-9");
        assert_eq!(fmt_f64(0.0), "0");
    }

    #[test]
    fn json_numbers_are_rounded() {
        assert_eq!(json_f64(1.0 / 3.0).to_string(), "0.333333333333");
        assert!(json_f64(f64::NAN).is_null());
    }
}
