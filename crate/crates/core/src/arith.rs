//! Comparison policy for distance values.
//!
//! When both operands are integers representable exactly in an `f64`, every
//! comparison is exact. Otherwise equality uses a relative tolerance and
//! strict inequalities keep a small margin so that boundary points stay
//! excluded.

/// Relative tolerance used for equality and for non-strict inequalities.
pub const EQ_REL_TOL: f64 = 1e-9;

/// Margin applied to strict inequalities outside exact mode.
pub const STRICT_MARGIN: f64 = 1e-12;

const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0; // 2^53

pub fn is_exact(x: f64) -> bool {
    x.is_finite() && x.fract() == 0.0 && x.abs() <= EXACT_LIMIT
}

fn scale(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs()).max(1.0)
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    if is_exact(a) && is_exact(b) {
        a == b
    } else {
        (a - b).abs() <= EQ_REL_TOL * scale(a, b)
    }
}

/// `a <= b`, with tolerance outside exact mode.
pub fn at_most(a: f64, b: f64) -> bool {
    if is_exact(a) && is_exact(b) {
        a <= b
    } else {
        a <= b + EQ_REL_TOL * scale(a, b)
    }
}

/// `a < b`; outside exact mode `a` must clear `b` by the strict margin.
pub fn strictly_less(a: f64, b: f64) -> bool {
    if is_exact(a) && is_exact(b) {
        a < b
    } else {
        a < b - STRICT_MARGIN * scale(a, b)
    }
}

/// Formats a scalar without a trailing `.0` when it is integral.
pub fn format_scalar(x: f64) -> String {
    if is_exact(x) {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_compare_exactly() {
        assert!(strictly_less(7.0, 8.0));
        assert!(!strictly_less(8.0, 8.0));
        assert!(at_most(8.0, 8.0));
        assert!(!approx_eq(1e15, 1e15 + 1.0));
    }

    #[test]
    fn fractional_values_use_margins() {
        assert!(strictly_less(8.0, 8.5));
        assert!(!strictly_less(8.5 - 1e-14, 8.5));
        assert!(approx_eq(0.1 + 0.2, 0.3));
        assert!(at_most(0.3, 0.1 + 0.2));
    }

    #[test]
    fn scalar_formatting() {
        assert_eq!(format_scalar(3.0), "3");
        assert_eq!(format_scalar(0.5), "0.5");
        assert_eq!(format_scalar(-0.0), "0");
    }
}
