//! Complex roots of exact rational polynomials, with multiplicities.
//!
//! Multiplicity detection is done symbolically first (Yun's square-free
//! decomposition over the rationals), so the numeric stage only ever sees
//! square-free factors with well-separated simple roots. Those are handled
//! by companion-matrix eigenvalues followed by a Newton polish against the
//! exact coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::rational_to_f64;
use crate::poly::RatPoly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyRoot {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// All complex roots of `p`, sorted by real part then imaginary part.
/// Constant polynomials have none.
pub fn complex_roots(p: &RatPoly) -> Vec<PolyRoot> {
    let mut out = Vec::new();
    for (factor, multiplicity) in p.square_free_decomposition() {
        for value in square_free_roots(&factor) {
            out.push(PolyRoot {
                value,
                multiplicity,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .expect("finite roots")
    });
    out
}

/// Roots of a square-free polynomial, each simple.
fn square_free_roots(g: &RatPoly) -> Vec<Complex64> {
    let n = match g.degree() {
        None | Some(0) => return vec![],
        Some(n) => n,
    };
    if n == 1 {
        // exact: -c0/c1
        let root = -(g.coeff(0) / g.coeff(1));
        return vec![Complex64::new(rational_to_f64(&root), 0.0)];
    }

    // companion matrix of the monic normalization
    let lead = rational_to_f64(g.leading_coeff().unwrap());
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -rational_to_f64(&g.coeff(i)) / lead;
    }
    let eigen = m.complex_eigenvalues();

    let deriv = g.derivative();
    let mut roots: Vec<Complex64> = eigen.iter().map(|&z| polish(g, &deriv, z)).collect();
    // guard against eigenvalue noise splitting or duplicating a root
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite"));
    roots.dedup_by(|a, b| (*a - *b).norm() <= 1e-10 * (1.0 + b.norm()));
    roots
}

fn polish(g: &RatPoly, deriv: &RatPoly, mut z: Complex64) -> Complex64 {
    for _ in 0..64 {
        let d = deriv.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = g.eval_complex(z) / d;
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    // tiny imaginary parts of real roots are iteration artifacts
    if z.im.abs() <= 1e-12 * (1.0 + z.re.abs()) {
        z.im = 0.0;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn poly_with_roots(roots: &[BigRational]) -> RatPoly {
        let mut p = RatPoly::one();
        for r in roots {
            p = &p * &RatPoly::new(vec![-r.clone(), rat(1, 1)]);
        }
        p
    }

    #[test]
    fn simple_rational_roots() {
        let p = poly_with_roots(&[rat(1, 2), rat(1, 3)]);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value.re - 1.0 / 3.0).abs() < 1e-14);
        assert!((roots[1].value.re - 0.5).abs() < 1e-14);
        assert!(roots.iter().all(|r| r.multiplicity == 1 && r.value.im == 0.0));
    }

    #[test]
    fn double_root_detected_symbolically() {
        let p = poly_with_roots(&[rat(1, 2), rat(1, 2), rat(-2, 1)]);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity, 1);
        assert!((roots[0].value.re + 2.0).abs() < 1e-12);
        assert_eq!(roots[1].multiplicity, 2);
        assert!((roots[1].value.re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn complex_pair() {
        let p = RatPoly::from_integers(&[1, 0, 1]); // z^2 + 1
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.value.re.abs() < 1e-14);
            assert!((r.value.im.abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_circle_quartic() {
        let p = RatPoly::from_integers(&[-1, 0, 0, 0, 1]); // z^4 - 1
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!((r.value.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clustered_real_roots_polish_tightly() {
        let exact: Vec<BigRational> = (1..=8).map(|k| rat(k, 10)).collect();
        let p = poly_with_roots(&exact);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 8);
        for (r, want) in roots.iter().zip(&exact) {
            assert!((r.value.re - rational_to_f64(want)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn recovers_constructed_multiset(
            base in proptest::collection::btree_set((-12i64..12, 1i64..5), 1..4),
            mults in proptest::collection::vec(1usize..4, 3))
        {
            // btree_set dedups pairs, not values; collapse by value
            let values: Vec<BigRational> = base
                .iter()
                .map(|&(n, d)| rat(n, d))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let mut expected: Vec<(BigRational, usize)> = Vec::new();
            let mut p = RatPoly::one();
            for (r, &m) in values.iter().zip(mults.iter()) {
                for _ in 0..m {
                    p = &p * &RatPoly::new(vec![-r.clone(), rat(1, 1)]);
                }
                expected.push((r.clone(), m));
            }
            expected.sort_by(|a, b| a.0.cmp(&b.0));
            let roots = complex_roots(&p);
            prop_assert_eq!(roots.len(), expected.len());
            for (got, (want, m)) in roots.iter().zip(&expected) {
                prop_assert_eq!(got.multiplicity, *m);
                prop_assert!((got.value.re - rational_to_f64(want)).abs() < 1e-9);
                prop_assert!(got.value.im == 0.0);
            }
        }
    }
}
