//! Extended nonnegative arithmetic shared by every module.
//!
//! Values live in `[0, +inf]`. Products follow the measure-theoretic
//! convention `inf * 0 = 0` (an integral over a null set vanishes), sums
//! propagate `+inf`, and reciprocals exchange `0` and `+inf`.

/// Product under the convention `inf * 0 = 0`.
#[inline]
pub fn xmul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

/// Reciprocal on `[0, +inf]` with `0` and `+inf` exchanged.
#[inline]
pub fn xinv(a: f64) -> f64 {
    if a == 0.0 {
        f64::INFINITY
    } else if a == f64::INFINITY {
        0.0
    } else {
        1.0 / a
    }
}

/// True for values in `[0, +inf]` (rejects NaN and negatives).
#[inline]
pub fn is_ext_nonneg(a: f64) -> bool {
    !a.is_nan() && a >= 0.0
}

/// True for finite nonnegative values.
#[inline]
pub fn is_finite_nonneg(a: f64) -> bool {
    a.is_finite() && a >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_set_convention() {
        assert_eq!(xmul(f64::INFINITY, 0.0), 0.0);
        assert_eq!(xmul(0.0, f64::INFINITY), 0.0);
        assert_eq!(xmul(f64::INFINITY, 2.0), f64::INFINITY);
        assert_eq!(xmul(3.0, 2.0), 6.0);
    }

    #[test]
    fn reciprocal_exchanges_endpoints() {
        assert_eq!(xinv(0.0), f64::INFINITY);
        assert_eq!(xinv(f64::INFINITY), 0.0);
        assert_eq!(xinv(4.0), 0.25);
    }

    #[test]
    fn extended_range_predicate() {
        assert!(is_ext_nonneg(0.0));
        assert!(is_ext_nonneg(f64::INFINITY));
        assert!(!is_ext_nonneg(-1.0));
        assert!(!is_ext_nonneg(f64::NAN));
        assert!(!is_finite_nonneg(f64::INFINITY));
    }
}
