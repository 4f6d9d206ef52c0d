//! Geometric zeta functions of lattice strings: rational functions of
//! z = p^{-s} with exact coefficients.
//!
//! The rational form makes the analytic data finite: poles of the zeta
//! function in s are the nonzero roots of the denominator, repeated with
//! period 2*pi/ln p along vertical lines. Everything downstream (complex
//! dimensions, residues, tube formulas) reads off that root data, so the
//! polynomials are reduced by an exact gcd at construction and roots carry
//! symbolically detected multiplicities.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::numeric::{biguint_to_f64, ln_rational};
use crate::padic::Prime;
use crate::poly::RatPoly;
use crate::roots::{complex_roots, PolyRoot};
use crate::strings::{FractalString, LengthLimit, LengthSpec};

/// |Q(z)| below this (relative to 1 + |P(z)|) counts as a pole hit.
pub const DEFAULT_POLE_THRESHOLD: f64 = 1e-12;

/// A geometric zeta function P(z)/Q(z) in z = p^{-s}.
///
/// Stored reduced (gcd(P, Q) = 1) and normalized so that Q(0) = 1 when
/// Q(0) != 0, otherwise with Q monic. A root of Q at z = 0 corresponds to
/// no pole at any finite s and is skipped by the pole analysis.
#[derive(Clone, Debug)]
pub struct RationalZeta {
    prime: Prime,
    numer: RatPoly,
    denom: RatPoly,
}

impl RationalZeta {
    pub fn new(prime: Prime, numer: RatPoly, denom: RatPoly) -> Result<Self, Error> {
        if denom.is_zero() {
            return Err(Error::model("zeta denominator is identically zero"));
        }
        let g = numer.gcd(&denom);
        let (mut numer, mut denom) = if g.is_constant() {
            (numer, denom)
        } else {
            (numer.div_rem(&g).0, denom.div_rem(&g).0)
        };
        let q0 = denom.coeff(0);
        let scale = if q0.is_zero() {
            denom.leading_coeff().unwrap().recip()
        } else {
            q0.recip()
        };
        numer = numer.scale(&scale);
        denom = denom.scale(&scale);
        Ok(RationalZeta {
            prime,
            numer,
            denom,
        })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn numer(&self) -> &RatPoly {
        &self.numer
    }

    pub fn denom(&self) -> &RatPoly {
        &self.denom
    }

    fn z_of(&self, s: Complex64) -> Complex64 {
        (-s * self.prime.ln()).exp()
    }

    /// P(p^{-s})/Q(p^{-s}).
    pub fn eval(&self, s: Complex64) -> Result<Complex64, Error> {
        self.eval_with_threshold(s, DEFAULT_POLE_THRESHOLD)
    }

    pub fn eval_with_threshold(&self, s: Complex64, threshold: f64) -> Result<Complex64, Error> {
        let z = self.z_of(s);
        let p_val = self.numer.eval_complex(z);
        let q_val = self.denom.eval_complex(z);
        if q_val.norm() < threshold * (1.0 + p_val.norm()) {
            return Err(Error::EvalAtPole(s));
        }
        Ok(p_val / q_val)
    }

    /// Exact value at real integer-power points z = p^{-k}, bypassing
    /// floating point; errors at a pole.
    pub fn eval_exact_at(&self, z: &BigRational) -> Result<BigRational, Error> {
        let q = self.denom.eval(z);
        if q.is_zero() {
            return Err(Error::Divergence(format!("pole at z = {z}")));
        }
        Ok(self.numer.eval(z) / q)
    }

    /// Nonzero roots of the denominator: every pole line of the zeta
    /// function comes from exactly one of these.
    fn pole_roots(&self) -> Vec<PolyRoot> {
        complex_roots(&self.denom)
            .into_iter()
            .filter(|r| r.value.norm() > 1e-12)
            .collect()
    }

    /// Abscissa of convergence: log_p(1/rho) for rho the smallest nonzero
    /// root modulus of Q; −∞ when no such root exists (entire zeta).
    pub fn abscissa(&self) -> f64 {
        let rho = self
            .pole_roots()
            .iter()
            .map(|r| r.value.norm())
            .fold(f64::INFINITY, f64::min);
        if rho.is_infinite() {
            f64::NEG_INFINITY
        } else {
            -rho.ln() / self.prime.ln()
        }
    }

    /// Residue of the zeta function (as a function of s) at the simple
    /// pole omega: −P(z0)/(z0·Q′(z0)·ln p) with z0 = p^{-omega}.
    pub fn residue_at(&self, omega: Complex64) -> Result<Complex64, Error> {
        let z0 = (-omega * self.prime.ln()).exp();
        let root = self
            .pole_roots()
            .into_iter()
            .find(|r| (r.value - z0).norm() <= 1e-8 * (1.0 + z0.norm()))
            .ok_or_else(|| Error::input(format!("s = {omega} is not a pole")))?;
        if root.multiplicity != 1 {
            return Err(Error::UnsupportedMultiplicity(root.multiplicity));
        }
        Ok(self.residue_at_root(root.value))
    }

    fn residue_at_root(&self, z0: Complex64) -> Complex64 {
        let dq = self.denom.derivative().eval_complex(z0);
        -self.numer.eval_complex(z0) / (z0 * dq * self.prime.ln())
    }

    /// Poles of the zeta function grouped into vertical lines, restricted
    /// to the window. Entire zeta functions yield an empty set.
    pub fn complex_dimensions(&self, window: &Window) -> Result<DimensionSet, Error> {
        window.validate()?;
        let ln_p = self.prime.ln();
        let period = std::f64::consts::TAU / ln_p;
        let mut lines = Vec::new();
        for root in self.pole_roots() {
            let z0 = root.value;
            let real_part = -z0.norm().ln() / ln_p;
            let base_imag = (-z0.arg() / ln_p).rem_euclid(period);
            let line = DimensionLine {
                real_part,
                base_imag,
                period,
                multiplicity: root.multiplicity,
                residue_base: (root.multiplicity == 1).then(|| self.residue_at_root(z0)),
                source_root: z0,
            };
            if window.admits_line(&line) {
                lines.push(line);
            }
        }
        lines.sort_by(|a, b| {
            (b.real_part, a.base_imag)
                .partial_cmp(&(a.real_part, b.base_imag))
                .expect("finite line data")
        });
        debug_assert!({
            let sigma = self.abscissa();
            lines.iter().all(|l| l.real_part <= sigma + 1e-9)
        });
        Ok(DimensionSet {
            prime: self.prime,
            window: window.clone(),
            lines,
        })
    }

    /// The tubular zeta value p^{-1}·ζ(s)·ε^{1−s}/(1−s).
    pub fn tubular_zeta(&self, eps: f64, s: Complex64) -> Result<Complex64, Error> {
        if eps <= 0.0 {
            return Err(Error::input("epsilon must be positive"));
        }
        if (s - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
            return Err(Error::FormulaSingularity);
        }
        let zeta_s = self.eval(s)?;
        let one_minus_s = Complex64::new(1.0, 0.0) - s;
        let eps_pow = (one_minus_s * eps.ln()).exp();
        Ok(zeta_s * eps_pow / (one_minus_s * self.prime.get() as f64))
    }
}

impl fmt::Display for RationalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) / ({}) in z = {}^(-s)",
            self.numer, self.denom, self.prime
        )
    }
}

/// Region of the s-plane in which poles are reported.
#[derive(Clone, Debug, PartialEq)]
pub enum WindowKind {
    FullPlane,
    RightOfLine(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub kind: WindowKind,
    /// optional horizontal band (tMin, tMax) of imaginary parts
    pub imag_band: Option<(f64, f64)>,
}

impl Window {
    pub fn full_plane() -> Self {
        Window {
            kind: WindowKind::FullPlane,
            imag_band: None,
        }
    }

    pub fn right_of(real_bound: f64) -> Self {
        Window {
            kind: WindowKind::RightOfLine(real_bound),
            imag_band: None,
        }
    }

    pub fn with_imag_band(mut self, t_min: f64, t_max: f64) -> Self {
        self.imag_band = Some((t_min, t_max));
        self
    }

    fn validate(&self) -> Result<(), Error> {
        match self.imag_band {
            Some((a, b)) if a >= b => Err(Error::input("imaginary band is not well ordered")),
            _ => Ok(()),
        }
    }

    /// A line is admitted when its real part lies in the window and, with a
    /// band present, at least one of its poles has imaginary part inside.
    fn admits_line(&self, line: &DimensionLine) -> bool {
        if let WindowKind::RightOfLine(bound) = self.kind {
            if line.real_part < bound {
                return false;
            }
        }
        match self.imag_band {
            None => true,
            Some((t_min, t_max)) => {
                let nu = ((t_min - line.base_imag) / line.period).ceil();
                line.base_imag + nu * line.period <= t_max
            }
        }
    }
}

/// One vertical arithmetic progression of complex dimensions:
/// σ + i(θ + ν·2π/ln p) for ν ∈ Z, all sharing one residue.
#[derive(Clone, Debug)]
pub struct DimensionLine {
    pub real_part: f64,
    /// base imaginary part θ, normalized into [0, period)
    pub base_imag: f64,
    pub period: f64,
    pub multiplicity: usize,
    /// residue at every pole of the line; None for multiple poles
    pub residue_base: Option<Complex64>,
    /// the root z0 of Q this line comes from
    pub source_root: Complex64,
}

impl DimensionLine {
    /// The pole σ + i(θ + ν·period).
    pub fn pole(&self, nu: i64) -> Complex64 {
        Complex64::new(self.real_part, self.base_imag + nu as f64 * self.period)
    }
}

#[derive(Clone, Debug)]
pub struct DimensionSet {
    prime: Prime,
    window: Window,
    lines: Vec<DimensionLine>,
}

impl DimensionSet {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn lines(&self) -> &[DimensionLine] {
        &self.lines
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// The geometric zeta function of a base-generated string as a rational
/// function of z = base^{-s}.
pub fn zeta_closed_form(string: &FractalString) -> Result<RationalZeta, Error> {
    match string.spec() {
        LengthSpec::Euler { base } => {
            RationalZeta::new(*base, RatPoly::one(), RatPoly::from_integers(&[1, -1]))
        }
        LengthSpec::Lattice { zeta } => Ok(zeta.clone()),
        LengthSpec::Explicit { base, entries } => {
            // negative exponents shift into the denominator as z^k
            let min_e = entries.first().map(|(e, _)| *e).unwrap_or(0);
            let k = (-min_e).max(0) as usize;
            let mut numer = RatPoly::zero();
            for (e, m) in entries {
                numer = &numer
                    + &RatPoly::monomial(
                        BigRational::from_integer(BigInt::from(m.clone())),
                        (e + k as i64) as usize,
                    );
            }
            RationalZeta::new(*base, numer, RatPoly::monomial(BigRational::one(), k))
        }
        LengthSpec::ArchExplicit { .. } => Err(Error::model(
            "explicit archimedean lengths have no rational closed form",
        )),
    }
}

/// Dirichlet sum over the first `terms` distinct entries, together with a
/// certified upper bound on the dropped tail when one is available.
pub fn zeta_partial_sum(
    string: &FractalString,
    s: Complex64,
    terms: usize,
) -> Result<(Complex64, Option<f64>), Error> {
    let entries = string.lengths(LengthLimit::Count(terms))?;
    let value: Complex64 = entries
        .iter()
        .map(|(l, m)| biguint_to_f64(m) * (s * ln_rational(l)).exp())
        .sum();
    let tail = match string.all_entries() {
        Some(all) => Some(
            all.iter()
                .skip(entries.len())
                .map(|(l, m)| biguint_to_f64(m) * (s.re * ln_rational(l)).exp())
                .sum(),
        ),
        None if s.re <= string.abscissa() => None,
        None => {
            let base = string.base().expect("infinite specs carry a base");
            let last = entries.last().expect("terms >= 1 entries");
            let last_exp = (-ln_rational(&last.0) / base.ln()).round() as i64;
            string.tail_power_bound(s.re, last_exp).ok()
        }
    };
    Ok((value, tail))
}

/// ∏_{p ≤ pmax} 1/(1 − p^{-s}) over primes, the truncated Euler product of
/// the Riemann zeta function.
pub fn partial_euler_product(s: Complex64, pmax: u64) -> Result<Complex64, Error> {
    if pmax < 2 {
        return Err(Error::input("pmax must be at least 2"));
    }
    if s.re <= 1.0 {
        return Err(Error::Divergence(format!(
            "Euler product requires Re(s) > 1, got {}",
            s.re
        )));
    }
    let mut product = Complex64::new(1.0, 0.0);
    for p in primes_up_to(pmax) {
        let factor = Complex64::new(1.0, 0.0) - (-s * (p as f64).ln()).exp();
        product /= factor;
    }
    Ok(product)
}

/// Σ_{n ≤ nmax} n^{-s}, accumulated smallest terms first.
pub fn riemann_partial_sum(s: Complex64, nmax: u64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..=nmax).rev() {
        sum += (-s * (n as f64).ln()).exp();
    }
    sum
}

/// Primes up to and including n, by sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return vec![];
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for q in 2..=n {
        if !composite[q] {
            out.push(q as u64);
            let mut m = q * q;
            while m <= n {
                composite[m] = true;
                m += q;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn euler_zeta(p: u64) -> RationalZeta {
        RationalZeta::new(
            prime(p),
            RatPoly::one(),
            RatPoly::from_integers(&[1, -1]),
        )
        .unwrap()
    }

    fn cantor3_zeta() -> RationalZeta {
        RationalZeta::new(
            prime(3),
            RatPoly::from_integers(&[0, 1]),
            RatPoly::from_integers(&[1, -2]),
        )
        .unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_closed_forms() {
        let z = euler_zeta(2).eval(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(z.re, 2.0, max_relative = 1e-14);
        let z = cantor3_zeta().eval(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(z.re, 1.0, max_relative = 1e-13);
        // single interval of length 1/2: zeta = z
        let single = RationalZeta::new(prime(2), RatPoly::from_integers(&[0, 1]), RatPoly::one())
            .unwrap();
        let z = single.eval(c(0.0, 0.0)).unwrap();
        assert_relative_eq!(z.re, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn eval_at_pole_rejected() {
        assert!(matches!(
            euler_zeta(2).eval(c(0.0, 0.0)),
            Err(Error::EvalAtPole(_))
        ));
        // one period up the same line
        let period = std::f64::consts::TAU / 2f64.ln();
        assert!(matches!(
            euler_zeta(2).eval(c(0.0, period)),
            Err(Error::EvalAtPole(_))
        ));
    }

    #[test]
    fn eval_exact_at_total_length() {
        assert_eq!(euler_zeta(2).eval_exact_at(&rat(1, 2)).unwrap(), rat(2, 1));
        assert_eq!(cantor3_zeta().eval_exact_at(&rat(1, 3)).unwrap(), rat(1, 1));
        assert!(matches!(
            euler_zeta(2).eval_exact_at(&rat(1, 1)),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn reduction_cancels_shared_roots() {
        // (1-z)(1+z) / (1-z)(1-2z) reduces to (1+z)/(1-2z)
        let shared = RatPoly::from_integers(&[1, -1]);
        let numer = &shared * &RatPoly::from_integers(&[1, 1]);
        let denom = &shared * &RatPoly::from_integers(&[1, -2]);
        let zeta = RationalZeta::new(prime(2), numer, denom).unwrap();
        assert_eq!(zeta.denom().degree(), Some(1));
        // the canceled root must not surface as a pole
        let dims = zeta.complex_dimensions(&Window::full_plane()).unwrap();
        assert_eq!(dims.lines().len(), 1);
        assert_relative_eq!(dims.lines()[0].real_part, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn abscissa_values() {
        assert_relative_eq!(euler_zeta(2).abscissa(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(euler_zeta(5).abscissa(), 0.0, epsilon = 1e-12);
        assert_relative_eq!(
            cantor3_zeta().abscissa(),
            2f64.ln() / 3f64.ln(),
            max_relative = 1e-12
        );
        // polynomial zeta: entire, no poles
        let finite =
            RationalZeta::new(prime(2), RatPoly::from_integers(&[0, 1, 3]), RatPoly::one())
                .unwrap();
        assert_eq!(finite.abscissa(), f64::NEG_INFINITY);
        // denominator z^2: pole only at z = 0, which is no finite-s pole
        let neg = RationalZeta::new(
            prime(2),
            RatPoly::from_integers(&[1, 1]),
            RatPoly::from_integers(&[0, 0, 1]),
        )
        .unwrap();
        assert_eq!(neg.abscissa(), f64::NEG_INFINITY);
        assert!(neg
            .complex_dimensions(&Window::full_plane())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn euler_dimension_line() {
        for p in [2u64, 3, 5] {
            let dims = euler_zeta(p)
                .complex_dimensions(&Window::full_plane())
                .unwrap();
            assert_eq!(dims.lines().len(), 1);
            let line = &dims.lines()[0];
            assert_relative_eq!(line.real_part, 0.0, epsilon = 1e-12);
            assert_relative_eq!(line.base_imag, 0.0, epsilon = 1e-12);
            assert_relative_eq!(
                line.period,
                std::f64::consts::TAU / (p as f64).ln(),
                max_relative = 1e-14
            );
            assert_eq!(line.multiplicity, 1);
            let res = line.residue_base.unwrap();
            assert_relative_eq!(res.re, 1.0 / (p as f64).ln(), max_relative = 1e-13);
            assert!(res.im.abs() < 1e-13);
        }
    }

    #[test]
    fn cantor_dimension_line() {
        let dims = cantor3_zeta()
            .complex_dimensions(&Window::full_plane())
            .unwrap();
        assert_eq!(dims.lines().len(), 1);
        let line = &dims.lines()[0];
        assert_relative_eq!(line.real_part, 2f64.ln() / 3f64.ln(), max_relative = 1e-12);
        assert_relative_eq!(line.base_imag, 0.0, epsilon = 1e-12);
        let res = line.residue_base.unwrap();
        assert_relative_eq!(res.re, 1.0 / (2.0 * 3f64.ln()), max_relative = 1e-12);
    }

    #[test]
    fn window_restrictions() {
        let zeta = cantor3_zeta();
        let d = 2f64.ln() / 3f64.ln();
        assert!(!zeta
            .complex_dimensions(&Window::right_of(d - 0.01))
            .unwrap()
            .is_empty());
        assert!(zeta
            .complex_dimensions(&Window::right_of(d + 0.01))
            .unwrap()
            .is_empty());
        // band catching only the nu = 2 pole
        let period = std::f64::consts::TAU / 3f64.ln();
        let band = Window::full_plane().with_imag_band(1.5 * period, 2.5 * period);
        assert_eq!(zeta.complex_dimensions(&band).unwrap().lines().len(), 1);
        // band strictly between poles
        let gap = Window::full_plane().with_imag_band(0.25 * period, 0.75 * period);
        assert!(zeta.complex_dimensions(&gap).unwrap().is_empty());
        assert!(zeta
            .complex_dimensions(&Window::full_plane().with_imag_band(1.0, -1.0))
            .is_err());
    }

    #[test]
    fn residues_match_closed_forms() {
        for p in [2u64, 3, 5] {
            let res = euler_zeta(p).residue_at(c(0.0, 0.0)).unwrap();
            assert!((res.re - 1.0 / (p as f64).ln()).abs() < 1e-13);
            assert!(res.im.abs() < 1e-13);
        }
        let omega = c(2f64.ln() / 3f64.ln(), 0.0);
        let res = cantor3_zeta().residue_at(omega).unwrap();
        assert!((res.re - 1.0 / (2.0 * 3f64.ln())).abs() < 1e-13);
        // one period up the line the residue repeats
        let period = std::f64::consts::TAU / 2f64.ln();
        let res = euler_zeta(2).residue_at(c(0.0, period)).unwrap();
        assert!((res.re - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!(res.im.abs() < 1e-12);
    }

    #[test]
    fn residue_rejects_non_pole_and_multiple_pole() {
        assert!(matches!(
            euler_zeta(2).residue_at(c(0.5, 0.0)),
            Err(Error::Input(_))
        ));
        // double pole: P = z, Q = (1-2z)^2
        let q = RatPoly::from_integers(&[1, -2]);
        let double =
            RationalZeta::new(prime(3), RatPoly::from_integers(&[0, 1]), &q * &q).unwrap();
        let omega = c(2f64.ln() / 3f64.ln(), 0.0);
        assert!(matches!(
            double.residue_at(omega),
            Err(Error::UnsupportedMultiplicity(2))
        ));
        let dims = double.complex_dimensions(&Window::full_plane()).unwrap();
        assert_eq!(dims.lines()[0].multiplicity, 2);
        assert!(dims.lines()[0].residue_base.is_none());
    }

    #[test]
    fn tubular_zeta_values() {
        // (1/2)·ζ(2)·1/(1-2) with ζ(2) = 4/3
        let v = euler_zeta(2).tubular_zeta(1.0, c(2.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, -2.0 / 3.0, max_relative = 1e-13);
        assert!(v.im.abs() < 1e-14);

        let zeta = cantor3_zeta();
        let zeta2 = zeta.eval(c(2.0, 0.0)).unwrap();
        let v = zeta.tubular_zeta(1.0 / 3.0, c(2.0, 0.0)).unwrap();
        // (1/3)·ζ(2)·(1/3)^{-1}/(1-2) = -ζ(2)
        assert_relative_eq!(v.re, -zeta2.re, max_relative = 1e-12);

        // zero numerator: ζ(s) = 1 - 2^{-s} vanishes at s = 0
        let vanishing =
            RationalZeta::new(prime(2), RatPoly::from_integers(&[1, -1]), RatPoly::one())
                .unwrap();
        let v = vanishing.tubular_zeta(1.0, c(0.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-14);

        assert!(matches!(
            euler_zeta(2).tubular_zeta(1.0, c(1.0, 0.0)),
            Err(Error::FormulaSingularity)
        ));
    }

    #[test]
    fn zeta_is_periodic_in_s() {
        let zeta = cantor3_zeta();
        let period = std::f64::consts::TAU / 3f64.ln();
        for &(re, im) in &[(1.3, 0.4), (0.9, -2.0), (2.0, 7.7)] {
            let a = zeta.eval(c(re, im)).unwrap();
            let b = zeta.eval(c(re, im + period)).unwrap();
            assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn euler_product_values() {
        let v = partial_euler_product(c(2.0, 0.0), 2).unwrap();
        assert_relative_eq!(v.re, 4.0 / 3.0, max_relative = 1e-14);
        assert!(partial_euler_product(c(1.0, 0.0), 10).is_err());
        assert!(partial_euler_product(c(2.0, 0.0), 1).is_err());
        // against the Dirichlet sum at moderate cutoffs
        let prod = partial_euler_product(c(3.0, 0.0), 1000).unwrap();
        let sum = riemann_partial_sum(c(3.0, 0.0), 100_000);
        assert!((prod - sum).norm() < 1e-6);
    }

    #[test]
    fn sieve_finds_primes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(13), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    fn explicit_string(p: u64, entries: &[(i64, u64)]) -> FractalString {
        use crate::strings::Place;
        let base = Prime::new(p).unwrap();
        FractalString::new(
            Place::NonArchimedean(base),
            LengthSpec::Explicit {
                base,
                entries: entries
                    .iter()
                    .map(|&(e, m)| (e, num_bigint::BigUint::from(m)))
                    .collect(),
            },
            "test",
        )
        .unwrap()
    }

    #[test]
    fn closed_forms_of_specs() {
        let euler = zeta_closed_form(&FractalString::euler(2).unwrap()).unwrap();
        assert_eq!(euler.numer().coeffs(), &[rat(1, 1)]);
        assert_eq!(euler.denom().coeffs(), &[rat(1, 1), rat(-1, 1)]);

        let cantor = zeta_closed_form(&FractalString::cantor3()).unwrap();
        assert_eq!(cantor.numer().coeffs(), &[rat(0, 1), rat(1, 1)]);
        assert_eq!(cantor.denom().coeffs(), &[rat(1, 1), rat(-2, 1)]);

        let simple = zeta_closed_form(&explicit_string(3, &[(1, 2)])).unwrap();
        assert_eq!(simple.numer().coeffs(), &[rat(0, 1), rat(2, 1)]);
        assert_eq!(simple.denom().coeffs(), &[rat(1, 1)]);

        // a length above 1 shifts the denominator to z^k
        let shifted = zeta_closed_form(&explicit_string(2, &[(-1, 1), (0, 2)])).unwrap();
        assert_eq!(shifted.numer().coeffs(), &[rat(1, 1), rat(2, 1)]);
        assert_eq!(shifted.denom().coeffs(), &[rat(0, 1), rat(1, 1)]);
        let v = shifted.eval(c(1.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn partial_sums_approach_closed_forms() {
        for string in [FractalString::euler(2).unwrap(), FractalString::cantor3()] {
            let zeta = zeta_closed_form(&string).unwrap();
            for &(re, im) in &[(1.1, 0.0), (1.6, 2.3), (2.0, -5.0)] {
                let s = c(re, im);
                let exact = zeta.eval(s).unwrap();
                let (value, tail) = zeta_partial_sum(&string, s, 80).unwrap();
                let tail = tail.expect("certified tail for presets");
                assert!(
                    (value - exact).norm() <= tail + 1e-12,
                    "tail bound must cover the truncation error at {s}"
                );
                assert!((value - exact).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn partial_sum_of_finite_string_is_exact() {
        let string = explicit_string(2, &[(1, 1), (2, 3)]);
        let s = c(1.5, 0.0);
        let (value, tail) = zeta_partial_sum(&string, s, 1).unwrap();
        assert_relative_eq!(value.re, 0.5f64.powf(1.5), max_relative = 1e-14);
        assert_relative_eq!(
            tail.unwrap(),
            3.0 * 0.25f64.powf(1.5),
            max_relative = 1e-12
        );
        let (full, tail) = zeta_partial_sum(&string, s, 10).unwrap();
        assert_relative_eq!(
            full.re,
            0.5f64.powf(1.5) + 3.0 * 0.25f64.powf(1.5),
            max_relative = 1e-14
        );
        assert_eq!(tail, Some(0.0));
    }

    #[test]
    fn partial_sum_tail_unavailable_below_abscissa() {
        let cantor = FractalString::cantor3();
        let sigma = 2f64.ln() / 3f64.ln();
        let (_, tail) = zeta_partial_sum(&cantor, c(sigma - 0.2, 0.0), 40).unwrap();
        assert!(tail.is_none());
        let (_, tail) = zeta_partial_sum(&cantor, c(sigma + 0.3, 0.0), 40).unwrap();
        assert!(tail.is_some());
    }
}
