//! Locale-free number formatting shared by every emitted file.

use catlab_core::indices::IndexValue;
use num_bigint::BigInt;

/// 17 significant digits in scientific notation; parses back to the same `f64`.
pub fn float17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Integers print as integers, everything else through [`float17`].
pub fn index_value(v: &IndexValue) -> String {
    match v.exact {
        Some(exact) => exact.to_string(),
        None => float17(v.value),
    }
}

/// `numerator/denominator`, always with the slash.
pub fn rational(numer: &BigInt, denom: &BigInt) -> String {
    format!("{numer}/{denom}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float17_round_trips() {
        for x in [0.1, 1.0 / 3.0, 264.6209125, -2.5e-300, 0.0] {
            let s = float17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
        assert_eq!(float17(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn rationals_keep_the_denominator() {
        assert_eq!(rational(&BigInt::from(11), &BigInt::from(1)), "11/1");
    }
}
