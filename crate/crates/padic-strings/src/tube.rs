//! Inner tube volumes: exact rational values, the step-function form of
//! the volume, and the truncated explicit formula driven by complex
//! dimensions.
//!
//! At a nonarchimedean place the volume of the inner epsilon-tube is a
//! pure step function of epsilon: V(eps) = p^{-1} * sum of the lengths
//! below eps. The explicit formula reproduces it as a sum over the poles
//! of the geometric zeta function, with no error term; truncating each
//! dimension line to finitely many poles leaves the Gibbs ringing that
//! the jump-exclusion window in `TubeReport` accounts for.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::Error;
use crate::grid::near_jump;
use crate::numeric::rational_to_f64;
use crate::strings::{FractalString, LengthLimit};
use crate::zeta::{zeta_closed_form, DimensionSet, Window};

fn nonarch_prime(string: &FractalString) -> Result<crate::padic::Prime, Error> {
    string
        .place()
        .prime()
        .ok_or_else(|| Error::input("this volume is defined at nonarchimedean places"))
}

fn check_eps(eps: &BigRational) -> Result<(), Error> {
    if *eps <= BigRational::zero() {
        return Err(Error::input("epsilon must be positive"));
    }
    Ok(())
}

/// V(eps) = p^{-1} * sum of lengths strictly below eps, exact.
pub fn thin_volume(string: &FractalString, eps: &BigRational) -> Result<BigRational, Error> {
    let p = nonarch_prime(string)?;
    check_eps(eps)?;
    let total = string.total_length()?;
    let (_, head_mass) = string.head_sums(eps)?;
    Ok((total - head_mass) / p.power(1))
}

/// zeta(1) - p^{-1} * sum of lengths at least eps, exact. Differs from
/// the thin volume by the constant (1 - 1/p) * zeta(1).
pub fn thick_volume(string: &FractalString, eps: &BigRational) -> Result<BigRational, Error> {
    let p = nonarch_prime(string)?;
    check_eps(eps)?;
    let total = string.total_length()?;
    let (_, head_mass) = string.head_sums(eps)?;
    Ok(total - head_mass / p.power(1))
}

/// Archimedean inner tube volume: intervals shorter than 2*eps flood
/// completely, longer ones contribute 2*eps.
pub fn arch_volume(string: &FractalString, eps: &BigRational) -> Result<BigRational, Error> {
    if !string.place().is_archimedean() {
        return Err(Error::input(
            "this volume is defined at the archimedean place",
        ));
    }
    check_eps(eps)?;
    let two_eps = eps * BigRational::from_integer(BigInt::from(2));
    let total = string.total_length()?;
    let (count, head_mass) = string.head_sums(&two_eps)?;
    Ok(&two_eps * BigRational::from_integer(BigInt::from(count)) + (total - head_mass))
}

/// What the volume does below the smallest materialized breakpoint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepTail {
    /// every length is accounted for; the volume is zero from here down
    Zero,
    /// more jumps exist below the materialized range
    Continues,
}

/// The thin volume as an explicit step function. The value paired with a
/// breakpoint is V at that point; V is constant on each interval that is
/// open below and closed above, and jumps upward as eps crosses a length
/// from below.
#[derive(Clone, Debug)]
pub struct StepFunction {
    head_value: BigRational,
    breaks: Vec<(BigRational, BigRational)>,
    floor: BigRational,
    tail: StepTail,
}

impl StepFunction {
    /// Value for eps above the largest breakpoint: zeta(1)/p.
    pub fn head_value(&self) -> &BigRational {
        &self.head_value
    }

    /// (eps_i, V(eps_i)) with eps_i strictly decreasing.
    pub fn breaks(&self) -> &[(BigRational, BigRational)] {
        &self.breaks
    }

    pub fn tail(&self) -> StepTail {
        self.tail
    }

    /// Exact V(eps) where the function is materialized; None below the
    /// construction threshold of a sequence that continues further down.
    pub fn eval(&self, eps: &BigRational) -> Option<BigRational> {
        match self.breaks.first() {
            None => {
                if *eps > self.floor {
                    return Some(self.head_value.clone());
                }
            }
            Some((largest, _)) => {
                if eps > largest {
                    return Some(self.head_value.clone());
                }
                // constant on (eps_{i+1}, eps_i]: the first break at or
                // above eps carries the value
                let mut current = None;
                for (b, v) in &self.breaks {
                    if b >= eps {
                        current = Some(v.clone());
                    } else {
                        break;
                    }
                }
                if let Some(v) = current {
                    let below_all = self.breaks.last().map(|(b, _)| eps <= b).unwrap_or(false);
                    if !below_all || *eps > self.floor || self.tail == StepTail::Zero {
                        return Some(v);
                    }
                }
            }
        }
        match self.tail {
            StepTail::Zero => Some(BigRational::zero()),
            StepTail::Continues => None,
        }
    }
}

/// The thin volume of a nonarchimedean string as a step function,
/// materialized down to eps_min.
pub fn volume_step_function(
    string: &FractalString,
    eps_min: &BigRational,
) -> Result<StepFunction, Error> {
    let p = nonarch_prime(string)?;
    check_eps(eps_min)?;
    let total = string.total_length()?;
    let entries = string.lengths(LengthLimit::Threshold(eps_min.clone()))?;
    let p_rat = p.power(1);
    let mut running = total.clone();
    let mut breaks = Vec::with_capacity(entries.len());
    for (l, m) in &entries {
        running = running - l * BigRational::from_integer(BigInt::from(m.clone()));
        breaks.push((l.clone(), &running / &p_rat));
    }
    let exhausted = match string.all_entries() {
        Some(all) => all.len() == entries.len(),
        None => false,
    };
    Ok(StepFunction {
        head_value: total / p_rat,
        breaks,
        floor: eps_min.clone(),
        tail: if exhausted {
            StepTail::Zero
        } else {
            StepTail::Continues
        },
    })
}

/// Truncation control for the explicit formula: poles nu = -terms..terms
/// on each dimension line, and the half-width (in log-base periods) of
/// the window around each jump that error statistics ignore.
#[derive(Clone, Copy, Debug)]
pub struct TruncationPolicy {
    pub terms: usize,
    pub jump_window: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            terms: 500,
            jump_window: 0.01,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.jump_window.is_finite() || self.jump_window < 0.0 || self.jump_window >= 0.5 {
            return Err(Error::input("jump window must lie in [0, 0.5)"));
        }
        Ok(())
    }
}

/// Truncated explicit formula from a precomputed set of dimension lines:
/// sum over each line of residue/p * eps^{1-omega}/(1-omega) for the
/// poles omega with |Im| within `terms` periods.
pub fn tube_formula_from_dimensions(
    dims: &DimensionSet,
    eps: f64,
    policy: &TruncationPolicy,
) -> Result<f64, Error> {
    policy.validate()?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::input("epsilon must be positive"));
    }
    let p = dims.prime().get() as f64;
    let log_eps = eps.ln();
    let n = policy.terms as i64;
    let mut total = Complex64::new(0.0, 0.0);
    for line in dims.lines() {
        if line.multiplicity != 1 {
            return Err(Error::UnsupportedMultiplicity(line.multiplicity));
        }
        let coeff = line.residue_base.expect("simple pole carries a residue") / p;
        for nu in -n..=n {
            let omega = Complex64::new(line.real_part, line.base_imag + nu as f64 * line.period);
            let one_minus = Complex64::new(1.0, 0.0) - omega;
            if one_minus.norm() < 1e-12 {
                return Err(Error::FormulaSingularity);
            }
            total += coeff * (one_minus * log_eps).exp() / one_minus;
        }
    }
    Ok(total.re)
}

/// Truncated explicit formula for the thin volume of a nonarchimedean
/// string.
pub fn tube_formula_truncated(
    string: &FractalString,
    eps: f64,
    policy: &TruncationPolicy,
) -> Result<f64, Error> {
    nonarch_prime(string)?;
    let dims = zeta_closed_form(string)?.complex_dimensions(&Window::full_plane())?;
    tube_formula_from_dimensions(&dims, eps, policy)
}

/// One grid point of a formula-versus-exact comparison.
#[derive(Clone, Debug)]
pub struct TubeRow {
    pub epsilon: BigRational,
    pub v_exact: BigRational,
    pub v_formula: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub excluded: bool,
}

#[derive(Clone, Debug)]
pub struct TubeReport {
    pub rows: Vec<TubeRow>,
    /// largest relative error over rows outside the jump windows
    pub max_rel_err: f64,
    pub excluded_count: usize,
}

/// Compare the truncated formula against the exact volume on a grid.
/// Rows are computed in parallel and reported in grid order.
pub fn tube_report(
    string: &FractalString,
    grid: &[BigRational],
    policy: &TruncationPolicy,
) -> Result<TubeReport, Error> {
    let p = nonarch_prime(string)?;
    policy.validate()?;
    let dims = zeta_closed_form(string)?.complex_dimensions(&Window::full_plane())?;
    let base_ln = p.ln();
    let rows = grid
        .par_iter()
        .map(|eps| -> Result<TubeRow, Error> {
            check_eps(eps)?;
            let v_exact = thin_volume(string, eps)?;
            let v_formula = tube_formula_from_dimensions(&dims, rational_to_f64(eps), policy)?;
            let ve = rational_to_f64(&v_exact);
            let abs_err = (v_formula - ve).abs();
            let rel_err = if ve != 0.0 {
                abs_err / ve.abs()
            } else if abs_err == 0.0 {
                0.0
            } else {
                f64::INFINITY
            };
            Ok(TubeRow {
                epsilon: eps.clone(),
                v_exact,
                v_formula,
                abs_err,
                rel_err,
                excluded: near_jump(eps, base_ln, policy.jump_window),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let max_rel_err = rows
        .iter()
        .filter(|r| !r.excluded)
        .map(|r| r.rel_err)
        .fold(0.0f64, f64::max);
    let excluded_count = rows.iter().filter(|r| r.excluded).count();
    Ok(TubeReport {
        rows,
        max_rel_err,
        excluded_count,
    })
}

/// V(eps) = eps^{alpha} * G(log_base(1/eps)) for a string with exactly one
/// simple dimension line on the real axis: returns (alpha, G) with G
/// periodic of period 1, truncated to `terms` oscillatory harmonics.
#[allow(clippy::type_complexity)]
pub fn periodic_form(
    string: &FractalString,
    terms: usize,
) -> Result<(f64, Box<dyn Fn(f64) -> f64 + Send + Sync>), Error> {
    let p = nonarch_prime(string)?;
    let dims = zeta_closed_form(string)?.complex_dimensions(&Window::full_plane())?;
    let lines = dims.lines();
    if lines.len() != 1 {
        return Err(Error::NotApplicable(format!(
            "periodic form needs exactly one dimension line, found {}",
            lines.len()
        )));
    }
    let line = &lines[0];
    if line.multiplicity != 1 {
        return Err(Error::UnsupportedMultiplicity(line.multiplicity));
    }
    if line.base_imag.abs() > 1e-9 {
        return Err(Error::NotApplicable(
            "periodic form needs the line centered on the real axis".into(),
        ));
    }
    let d = line.real_part;
    let period = line.period;
    let coeff = line.residue_base.expect("simple pole carries a residue") / p.get() as f64;
    let base_ln = p.ln();
    let n = terms as i64;
    let sampler = move |u: f64| -> f64 {
        let mut g = Complex64::new(0.0, 0.0);
        for nu in -n..=n {
            let t = nu as f64 * period;
            let denom = Complex64::new(1.0 - d, -t);
            // e^{i t u ln p} has period 1 in u because t is nu * 2pi/ln p
            g += coeff * Complex64::new(0.0, t * u * base_ln).exp() / denom;
        }
        g.re
    };
    Ok((1.0 - d, Box::new(sampler)))
}

/// Truncated Fourier expansion of base^{-{x}} over the fractional part
/// {x}: ((base-1)/base) * sum over |n| <= terms of e^{2 pi i n x} /
/// (ln base + 2 pi i n), folded to a real cosine/sine series. Integer x
/// sits on a jump of the target function, where the series converges to
/// the midpoint instead; that is reported as an error.
pub fn fractional_power_fourier(base: f64, x: f64, terms: usize) -> Result<f64, Error> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::input("base must exceed 1"));
    }
    if !x.is_finite() {
        return Err(Error::input("x must be finite"));
    }
    if x.fract() == 0.0 {
        return Err(Error::JumpPoint(x));
    }
    let a = base.ln();
    let mut sum = 1.0 / a;
    for n in 1..=terms {
        let w = std::f64::consts::TAU * n as f64;
        let phase = w * x;
        sum += 2.0 * (a * phase.cos() + w * phase.sin()) / (a * a + w * w);
    }
    Ok((base - 1.0) / base * sum)
}
