//! Logarithmic sample grids shared by the tube and dimension-fit
//! routines.
//!
//! Grid points are materialized as exact rationals (the dyadic value of
//! the f64 sample), so exact head sums and jump-window tests downstream
//! see the same number the caller saw.

use num_rational::BigRational;

use crate::error::Error;
use crate::numeric::ln_rational;

/// `count` points, log-uniform on the right-open interval [min, max):
/// ln eps_i = ln min + (i/count)(ln max - ln min).
pub fn log_uniform_grid(min: f64, max: f64, count: usize) -> Result<Vec<BigRational>, Error> {
    if !(min.is_finite() && max.is_finite()) || min <= 0.0 {
        return Err(Error::input("grid endpoints must be finite and positive"));
    }
    if min >= max {
        return Err(Error::input("grid needs min < max"));
    }
    if count == 0 {
        return Err(Error::input("grid needs at least one point"));
    }
    let lmin = min.ln();
    let lmax = max.ln();
    Ok((0..count)
        .map(|i| {
            let t = i as f64 / count as f64;
            let x = (lmin + t * (lmax - lmin)).exp();
            BigRational::from_float(x).expect("finite positive sample")
        })
        .collect())
}

/// Whether eps lies within `delta` periods of a jump of the length
/// sequence, measured in base-b log space: the lengths b^{-n} make the
/// tube volume jump exactly at integer values of -log_b eps.
pub fn near_jump(eps: &BigRational, base_ln: f64, delta: f64) -> bool {
    let t = -ln_rational(eps) / base_ln;
    (t - t.round()).abs() < delta
}

/// Number of decades covered by a set of natural logarithms.
pub fn decades_spanned(ln_values: &[f64]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in ln_values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        return 0.0;
    }
    (hi - lo) / std::f64::consts::LN_10
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational_to_f64;
    use proptest::prelude::*;

    #[test]
    fn grid_spacing_is_log_uniform() {
        let grid = log_uniform_grid(0.001, 1.0, 4).unwrap();
        assert_eq!(grid.len(), 4);
        let vals: Vec<f64> = grid.iter().map(rational_to_f64).collect();
        assert!((vals[0] - 1e-3).abs() < 1e-18);
        for w in vals.windows(2) {
            let ratio = w[1] / w[0];
            assert!((ratio - 10f64.powf(0.75)).abs() < 1e-12);
        }
        // right-open: 1.0 itself is not in the grid
        assert!(vals[3] < 1.0);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(log_uniform_grid(0.0, 1.0, 5).is_err());
        assert!(log_uniform_grid(0.5, 0.5, 5).is_err());
        assert!(log_uniform_grid(0.1, 1.0, 0).is_err());
        assert!(log_uniform_grid(f64::NAN, 1.0, 5).is_err());
    }

    #[test]
    fn jump_window_flags_breakpoints() {
        let ln2 = 2f64.ln();
        let at_break = BigRational::from_float(0.125).unwrap();
        assert!(near_jump(&at_break, ln2, 0.01));
        let between = BigRational::from_float(2f64.powf(-3.5)).unwrap();
        assert!(!near_jump(&between, ln2, 0.01));
        // delta = 0 excludes nothing
        assert!(!near_jump(&at_break, ln2, 0.0));
    }

    #[test]
    fn decades_of_known_span() {
        let lns = [1e-10f64.ln(), 1.0f64.ln(), 1e-4f64.ln()];
        assert!((decades_spanned(&lns) - 10.0).abs() < 1e-12);
        assert_eq!(decades_spanned(&[]), 0.0);
    }

    proptest! {
        #[test]
        fn grid_is_increasing_and_in_range(
            min_exp in -30.0f64..-1.0,
            span in 0.5f64..20.0,
            count in 1usize..50)
        {
            let min = min_exp.exp();
            let max = (min_exp + span).exp();
            let grid = log_uniform_grid(min, max, count).unwrap();
            prop_assert_eq!(grid.len(), count);
            let vals: Vec<f64> = grid.iter().map(rational_to_f64).collect();
            for w in vals.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            prop_assert!(vals[0] >= min * (1.0 - 1e-12));
            prop_assert!(*vals.last().unwrap() < max);
        }
    }
}
