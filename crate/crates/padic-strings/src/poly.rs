//! Dense polynomials with exact rational coefficients.
//!
//! These back the rational functions in the zeta layer, so the operations
//! that matter are exact: division with remainder, monic gcd, and Yun's
//! square-free decomposition (which recovers root multiplicities without
//! any numerics). Floating-point evaluation is provided for the complex
//! analytic layer only.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numeric::rational_to_f64;

/// Polynomial in one variable, coefficients lowest degree first.
/// Trailing zero coefficients are never stored; the zero polynomial is an
/// empty coefficient list with degree `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        RatPoly::new(vec![c])
    }

    /// c * z^k
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.push(c);
        RatPoly::new(coeffs)
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        RatPoly::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + rational_to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Quotient and remainder with deg(rem) < deg(divisor). Exact over the
    /// rationals.
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let q = rem.last().unwrap() / lead;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = &q * c;
                rem[k + i] = &rem[k + i] - t;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
            quot[k] = q;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            Some(lead) if !lead.is_one() => {
                let inv = lead.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// Yun's square-free decomposition: returns pairs (g, m), each g monic,
    /// square-free, pairwise coprime, with self = lc * prod g^m. Constant
    /// input yields no factors.
    pub fn square_free_decomposition(&self) -> Vec<(RatPoly, usize)> {
        if self.is_constant() {
            return vec![];
        }
        let monic = {
            let inv = self.leading_coeff().unwrap().recip();
            self.scale(&inv)
        };
        let deriv = monic.derivative();
        let a0 = monic.gcd(&deriv);
        let mut b = monic.div_rem(&a0).0;
        let mut d = deriv.div_rem(&a0).0 - b.derivative();
        let mut out = Vec::new();
        let mut m = 1usize;
        while !b.is_constant() {
            let g = b.gcd(&d);
            if !g.is_constant() {
                out.push((g.clone(), m));
            }
            b = b.div_rem(&g).0;
            d = d.div_rem(&g).0 - b.derivative();
            m += 1;
        }
        out
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self - &rhs
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        RatPoly::new(coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "z")?,
                1 => write!(f, "{c}*z")?,
                _ if c.is_one() => write!(f, "z^{k}")?,
                _ => write!(f, "{c}*z^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = RatPoly::from_integers(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(RatPoly::from_integers(&[0]).degree(), None);
    }

    #[test]
    fn eval_both_ways() {
        let p = RatPoly::from_integers(&[-1, 0, 2]); // 2z^2 - 1
        assert_eq!(p.eval(&rat(3, 2)), rat(7, 2));
        let z = Complex64::new(1.5, 0.0);
        assert!((p.eval_complex(z).re - 3.5).abs() < 1e-14);
    }

    #[test]
    fn derivative_drops_degree() {
        let p = RatPoly::from_integers(&[5, 3, 0, 7]); // 7z^3 + 3z + 5
        assert_eq!(p.derivative(), RatPoly::from_integers(&[3, 0, 21]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = RatPoly::from_integers(&[2, -3, 0, 1, 4]);
        let b = RatPoly::from_integers(&[1, 0, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = RatPoly::from_integers(&[-1, 1]); // z - 1
        let g = RatPoly::from_integers(&[1, 1]); // z + 1
        let a = &f * &g;
        let b = &f * &RatPoly::from_integers(&[2, 0, 3]);
        assert_eq!(a.gcd(&b), f);
        assert_eq!(f.gcd(&RatPoly::zero()), f);
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (z-1)^2 (z+2), scaled by 3 to exercise the monic normalization
        let f1 = RatPoly::from_integers(&[-1, 1]);
        let f2 = RatPoly::from_integers(&[2, 1]);
        let p = (&(&f1 * &f1) * &f2).scale(&rat(3, 1));
        let dec = p.square_free_decomposition();
        assert_eq!(dec, vec![(f2, 1), (f1, 2)]);
    }

    #[test]
    fn square_free_of_square_free() {
        let p = RatPoly::from_integers(&[-2, 0, 1]); // z^2 - 2
        assert_eq!(p.square_free_decomposition(), vec![(p, 1)]);
        assert!(RatPoly::one().square_free_decomposition().is_empty());
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        proptest::collection::vec((-9i64..10, 1i64..5), 0..6)
            .prop_map(|cs| RatPoly::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn div_rem_is_exact(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.is_zero() || r.degree() < b.degree());
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly()) {
            let g = a.gcd(&b);
            prop_assume!(!g.is_zero());
            prop_assert!(a.div_rem(&g).1.is_zero());
            prop_assert!(b.div_rem(&g).1.is_zero());
        }

        #[test]
        fn square_free_product_reconstructs(a in small_poly()) {
            prop_assume!(!a.is_zero());
            let mut prod = RatPoly::constant(a.leading_coeff().unwrap().clone());
            for (g, m) in a.square_free_decomposition() {
                for _ in 0..m {
                    prod = &prod * &g;
                }
            }
            prop_assert_eq!(prod, a);
        }
    }
}
