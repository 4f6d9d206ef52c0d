//! Dimension estimates and Mellin-transform cross-checks.
//!
//! The Minkowski and growth fits recover the abscissa of convergence
//! from exact volume and counting data by least squares in log-log
//! space. The Mellin checks verify the transform identities that tie
//! the zeta function to the tube volume and the counting function,
//! evaluating the integral side in piecewise closed form with a
//! certified bound on the dropped tail.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::grid::decades_spanned;
use crate::numeric::{biguint_to_f64, ln_biguint, ln_rational, rational_to_f64};
use crate::strings::{FractalString, LengthLimit};
use crate::tube::thin_volume;

/// Slope/intercept of a least-squares line, plus the largest absolute
/// deviation of the data from the fit.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).abs())
        .fold(0.0f64, f64::max);
    (slope, intercept, residual)
}

#[derive(Clone, Copy, Debug)]
pub struct FitResult {
    pub estimate: f64,
    /// largest absolute log-space deviation from the fitted line
    pub residual: f64,
}

/// Minkowski dimension from exact tube volumes: fit ln V against ln eps
/// and return D = 1 - slope. The grid must span at least four decades
/// and every volume must be positive.
pub fn minkowski_fit(string: &FractalString, grid: &[BigRational]) -> Result<FitResult, Error> {
    if grid.len() < 2 {
        return Err(Error::DegenerateFit("need at least two grid points".into()));
    }
    let mut ln_eps = Vec::with_capacity(grid.len());
    let mut ln_v = Vec::with_capacity(grid.len());
    for eps in grid {
        let v = thin_volume(string, eps)?;
        if v.is_zero() {
            return Err(Error::DegenerateFit(
                "tube volume vanishes on the grid; no log-log fit".into(),
            ));
        }
        ln_eps.push(ln_rational(eps));
        ln_v.push(ln_rational(&v));
    }
    if decades_spanned(&ln_eps) < 4.0 {
        return Err(Error::DegenerateFit(
            "grid spans fewer than four decades".into(),
        ));
    }
    let (slope, _, residual) = least_squares(&ln_eps, &ln_v);
    Ok(FitResult {
        estimate: 1.0 - slope,
        residual,
    })
}

/// Growth rate of the counting function: slope of ln N against ln x over
/// the sample points with N >= 1.
pub fn growth_rate_fit(string: &FractalString, xs: &[f64]) -> Result<FitResult, Error> {
    let mut ln_x = Vec::with_capacity(xs.len());
    let mut ln_n = Vec::with_capacity(xs.len());
    for &x in xs {
        let n = string.counting_function(x)?;
        if n.is_zero() {
            continue;
        }
        ln_x.push(x.ln());
        ln_n.push(ln_biguint(&n));
    }
    if ln_x.len() < 2 {
        return Err(Error::DegenerateFit(
            "fewer than two sample points with N >= 1".into(),
        ));
    }
    let (slope, _, residual) = least_squares(&ln_x, &ln_n);
    Ok(FitResult {
        estimate: slope,
        residual,
    })
}

/// Default epsilon grid for the Minkowski fit: eps = base^{-e} with e
/// stepping by 1/4 through the phases 1/8, 3/8, 5/8, 7/8, staying well
/// away from the jumps at integer exponents.
pub fn default_minkowski_grid(string: &FractalString) -> Result<Vec<BigRational>, Error> {
    let base = string
        .base()
        .ok_or_else(|| Error::input("grid generation needs a base-generated spec"))?;
    let ln_p = base.ln();
    Ok((0..145)
        .map(|i| {
            let e = 4.125 + 0.25 * i as f64;
            BigRational::from_float((-e * ln_p).exp()).expect("in f64 range")
        })
        .collect())
}

/// Default sample points for the growth fit: x = base^e on a uniform
/// exponent ladder pushed as high as f64 allows (about 1e290).
pub fn default_growth_points(string: &FractalString) -> Result<Vec<f64>, Error> {
    let base = string
        .base()
        .ok_or_else(|| Error::input("grid generation needs a base-generated spec"))?;
    let ln_p = base.ln();
    let e_max = 290.0 * std::f64::consts::LN_10 / ln_p;
    let count = 120;
    Ok((0..count)
        .map(|i| {
            let e = 1.25 + (i as f64 + 0.5) * (e_max - 1.25) / count as f64;
            (e * ln_p).exp()
        })
        .collect())
}

/// min and max of V(eps) * eps^{-(1-d)} over the smallest decade of the
/// grid: a bracket on the average Minkowski content.
pub fn content_bracket(
    string: &FractalString,
    grid: &[BigRational],
    d: f64,
) -> Result<(f64, f64), Error> {
    let smallest = grid
        .iter()
        .min()
        .ok_or_else(|| Error::input("content bracket needs a nonempty grid"))?;
    let cutoff = smallest * BigRational::from_integer(BigInt::from(10));
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for eps in grid.iter().filter(|e| **e <= cutoff) {
        let v = rational_to_f64(&thin_volume(string, eps)?);
        let scaled = v * ((d - 1.0) * ln_rational(eps)).exp();
        lo = lo.min(scaled);
        hi = hi.max(scaled);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::DegenerateFit("empty content bracket".into()));
    }
    Ok((lo, hi))
}

/// One Mellin identity check: the closed-form zeta value against the
/// piecewise-exact integral side, with a certified bound on the part of
/// the integral the truncation dropped.
#[derive(Clone, Copy, Debug)]
pub struct MellinCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub certified_tail: f64,
    /// distinct entries evaluated in closed form
    pub terms: usize,
}

fn cpow(x: &BigRational, s: Complex64) -> Complex64 {
    (s * ln_rational(x)).exp()
}

fn length_exponent(base: crate::padic::Prime, l: &BigRational) -> i64 {
    (-ln_rational(l) / base.ln()).round() as i64
}

/// Entries plus tail data for a truncated Dirichlet evaluation: grow J
/// until the certified tail drops below tol (or the string runs out).
struct Truncation {
    entries: Vec<(BigRational, BigUint)>,
    finite: bool,
    /// bound on sum of m * l^a beyond the last returned entry
    tail_after_last: f64,
    /// bound on the same sum beyond the second-to-last entry
    tail_after_prev: f64,
}

fn truncate_for(string: &FractalString, a: f64, tol: f64) -> Result<Truncation, Error> {
    if let Some(all) = string.all_entries() {
        return Ok(Truncation {
            entries: all,
            finite: true,
            tail_after_last: 0.0,
            tail_after_prev: 0.0,
        });
    }
    let base = string.base().expect("infinite specs carry a base");
    let mut j = 32usize;
    loop {
        let entries = string.lengths(LengthLimit::Count(j))?;
        let last_exp = length_exponent(base, &entries.last().expect("j >= 1").0);
        let prev_exp = length_exponent(base, &entries[entries.len() - 2].0);
        let tail_after_last = string.tail_power_bound(a, last_exp)?;
        let tail_after_prev = string.tail_power_bound(a, prev_exp)?;
        if tail_after_prev < tol || j >= (1 << 21) {
            if tail_after_prev >= tol {
                return Err(Error::Numeric(format!(
                    "certified tail stalls at {tail_after_prev:.3e} after {j} terms"
                )));
            }
            return Ok(Truncation {
                entries,
                finite: false,
                tail_after_last,
                tail_after_prev,
            });
        }
        j *= 2;
    }
}

fn require_above(re: f64, bound: f64, what: &str) -> Result<(), Error> {
    if re <= bound {
        return Err(Error::Divergence(format!(
            "{what} diverges for Re(s) = {re} (needs Re(s) > {bound})"
        )));
    }
    Ok(())
}

/// Check zeta(s) = zeta(1) l_1^{s-1} + (1-s) integral of p V(eps)
/// eps^{s-2} over (0, l_1), the tube-volume Mellin identity at a
/// nonarchimedean place. The integral is a step-function sum evaluated
/// in closed form; `tol` controls the certified truncation tail.
pub fn mellin_check_v(
    string: &FractalString,
    s: Complex64,
    tol: f64,
) -> Result<MellinCheck, Error> {
    string
        .place()
        .prime()
        .ok_or_else(|| Error::input("the tube identity lives at nonarchimedean places"))?;
    if string.is_infinite() {
        require_above(s.re, string.abscissa(), "the volume integral")?;
    }
    let lhs = string.zeta_value(s)?;
    let trunc = truncate_for(string, s.re, tol)?;
    let entries = &trunc.entries;
    let total = string.total_length()?;
    let s1 = s - Complex64::new(1.0, 0.0);

    // piecewise: on (d_{i+1}, d_i) the volume is constant at T_{i+2}/p, so
    // (1-s) int p V eps^{s-2} collapses to -T_{i+2}(d_i^{s-1}-d_{i+1}^{s-1})
    let mut rhs = rational_to_f64(&total) * cpow(&entries[0].0, s1);
    let mut t = total;
    for i in 0..entries.len() - 1 {
        let (d, m) = &entries[i];
        t = t - d * BigRational::from_integer(BigInt::from(m.clone()));
        rhs -= rational_to_f64(&t) * (cpow(d, s1) - cpow(&entries[i + 1].0, s1));
    }
    let certified_tail = if trunc.finite {
        0.0
    } else {
        // rhs_J - zeta(s) = T_{J+1} d_{J+1}^{s-1} - dropped entries
        let (d_last, m_last) = entries.last().expect("nonempty");
        t = t - d_last * BigRational::from_integer(BigInt::from(m_last.clone()));
        rational_to_f64(&t) * ((s.re - 1.0) * ln_rational(d_last)).exp() + trunc.tail_after_prev
    };
    Ok(MellinCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        certified_tail,
        terms: entries.len(),
    })
}

/// Check zeta(s) = s integral of N(x) x^{-s-1} over (0, inf), valid at
/// any place for Re(s) above both the abscissa and 0.
pub fn mellin_check_n(
    string: &FractalString,
    s: Complex64,
    tol: f64,
) -> Result<MellinCheck, Error> {
    if string.is_infinite() {
        require_above(s.re, string.abscissa().max(0.0), "the counting integral")?;
    } else {
        require_above(s.re, 0.0, "the counting integral")?;
    }
    let lhs = string.zeta_value(s)?;
    let trunc = truncate_for(string, s.re, tol)?;
    let entries = &trunc.entries;

    // N(x) = C_i on (1/d_i, 1/d_{i+1}); each piece integrates to
    // C_i (d_i^s - d_{i+1}^s)
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut count = BigUint::zero();
    for i in 0..entries.len() - 1 {
        let (d, m) = &entries[i];
        count += m;
        rhs += biguint_to_f64(&count) * (cpow(d, s) - cpow(&entries[i + 1].0, s));
    }
    let certified_tail = if trunc.finite {
        let (d, m) = entries.last().expect("nonempty");
        count += m;
        rhs += biguint_to_f64(&count) * cpow(d, s);
        0.0
    } else {
        let (d_last, m_last) = entries.last().expect("nonempty");
        count += m_last;
        biguint_to_f64(&count) * (s.re * ln_rational(d_last)).exp() + trunc.tail_after_prev
    };
    Ok(MellinCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        certified_tail,
        terms: entries.len(),
    })
}

/// Check zeta(s) = s zeta(1) l_1^{s-1} + 2 s (1-s) integral of V(eps)
/// (2 eps)^{s-2} over (0, l_1/2) for strings at the archimedean place.
pub fn arch_mellin_check(
    string: &FractalString,
    s: Complex64,
    tol: f64,
) -> Result<MellinCheck, Error> {
    if !string.place().is_archimedean() {
        return Err(Error::input(
            "this identity lives at the archimedean place",
        ));
    }
    if string.is_infinite() {
        require_above(s.re, string.abscissa(), "the volume integral")?;
    }
    let lhs = string.zeta_value(s)?;
    let trunc = truncate_for(string, s.re, tol)?;
    let entries = &trunc.entries;
    let total = string.total_length()?;
    let one = Complex64::new(1.0, 0.0);
    let s1 = s - one;

    let mut rhs = s * rational_to_f64(&total) * cpow(&entries[0].0, s1);
    let mut count = BigUint::zero();
    let mut t = total;
    for i in 0..entries.len() - 1 {
        let (d, m) = &entries[i];
        count += m;
        t = t - d * BigRational::from_integer(BigInt::from(m.clone()));
        let d_next = &entries[i + 1].0;
        rhs += (one - s) * biguint_to_f64(&count) * (cpow(d, s) - cpow(d_next, s))
            - s * rational_to_f64(&t) * (cpow(d, s1) - cpow(d_next, s1));
    }
    let certified_tail = if trunc.finite {
        let (d, m) = entries.last().expect("nonempty");
        count += m;
        rhs += (one - s) * biguint_to_f64(&count) * cpow(d, s);
        0.0
    } else {
        let (d_last, m_last) = entries.last().expect("nonempty");
        let d_re = |a: f64| ((a) * ln_rational(d_last)).exp();
        count += m_last;
        t = t - d_last * BigRational::from_integer(BigInt::from(m_last.clone()));
        (one - s).norm() * (trunc.tail_after_prev + biguint_to_f64(&count) * d_re(s.re))
            + s.norm() * (rational_to_f64(&t) * d_re(s.re - 1.0) + trunc.tail_after_last)
    };
    Ok(MellinCheck {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        certified_tail,
        terms: entries.len(),
    })
}

/// Deterministic sample points with Re in (sigma + 0.2, 2) and Im in
/// (-3, 3).
pub fn seeded_s_points(sigma: f64, count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = sigma + 0.2;
    (0..count)
        .map(|_| {
            let re = lo + rng.gen::<f64>() * (2.0 - lo);
            let im = -3.0 + rng.gen::<f64>() * 6.0;
            Complex64::new(re, im)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DimensionReport {
    pub name: String,
    pub sigma: f64,
    pub minkowski: FitResult,
    pub growth: FitResult,
    pub content: (f64, f64),
    pub tol: f64,
    pub pass: bool,
}

/// Compare the abscissa of convergence against the Minkowski and growth
/// estimates on the default grids; pass means both land within tol.
pub fn dimension_equality_report(
    string: &FractalString,
    tol: f64,
) -> Result<DimensionReport, Error> {
    if string.place().prime().is_none() {
        return Err(Error::NotApplicable(
            "dimension reports cover nonarchimedean strings".into(),
        ));
    }
    if !string.is_infinite() {
        return Err(Error::NotApplicable(
            "a finite string has Minkowski dimension zero trivially".into(),
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    let sigma = string.abscissa();
    let grid = default_minkowski_grid(string)?;
    let minkowski = minkowski_fit(string, &grid)?;
    let growth = growth_rate_fit(string, &default_growth_points(string)?)?;
    let content = content_bracket(string, &grid, sigma)?;
    let pass = (minkowski.estimate - sigma).abs() <= tol && (growth.estimate - sigma).abs() <= tol;
    Ok(DimensionReport {
        name: string.name().to_string(),
        sigma,
        minkowski,
        growth,
        content,
        tol,
        pass,
    })
}
