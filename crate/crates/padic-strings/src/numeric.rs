//! Conversions between exact big-number values and floating point that stay
//! finite far beyond the f64 exponent range.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer, computed from the top mantissa
/// bits so that values far above 1e308 still give a finite result.
pub fn ln_biguint(n: &BigUint) -> f64 {
    debug_assert!(!n.is_zero());
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().expect("small BigUint fits f64").ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().expect("53-bit mantissa fits f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_bigint_abs(n: &BigInt) -> f64 {
    ln_biguint(n.magnitude())
}

/// Natural log of a positive rational, exact in the exponent even when the
/// numerator or denominator overflows f64.
pub fn ln_rational(x: &BigRational) -> f64 {
    debug_assert!(x.is_positive());
    ln_bigint_abs(x.numer()) - ln_bigint_abs(x.denom())
}

/// Rational to f64, falling back to a log-domain computation when the
/// direct numerator/denominator conversion overflows.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let magnitude = (ln_bigint_abs(x.numer()) - ln_bigint_abs(x.denom())).exp();
    if x.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// BigUint to f64 with the same overflow fallback (returns +inf only when
/// even the log-domain magnitude overflows, i.e. never at desk scale).
pub fn biguint_to_f64(n: &BigUint) -> f64 {
    if let Some(v) = n.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    ln_biguint(n).exp()
}
