//! Fractal strings: a place (p-adic or archimedean) together with a
//! nonincreasing sequence of lengths and multiplicities.
//!
//! Length sequences are generated lazily from one of four specs. Three of
//! them (explicit exponent lists, the Euler preset, rational lattice
//! expansions) produce lengths that are integer powers of a fixed prime
//! base, so thresholds and head sums are computed with exact rational
//! arithmetic. The fourth carries explicit rational lengths at the
//! archimedean place. Validation happens at construction: a string that
//! exists has finite total length and nonnegative integer multiplicities.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::Error;
use crate::numeric::{biguint_to_f64, ln_rational};
use crate::padic::{BallSet, Prime};
use crate::poly::RatPoly;
use crate::zeta::RationalZeta;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Place {
    NonArchimedean(Prime),
    Archimedean,
}

impl Place {
    pub fn prime(&self) -> Option<Prime> {
        match self {
            Place::NonArchimedean(p) => Some(*p),
            Place::Archimedean => None,
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::NonArchimedean(p) => write!(f, "Q_{p}"),
            Place::Archimedean => write!(f, "R"),
        }
    }
}

/// How the length sequence is produced.
///
/// The first three variants generate lengths `base^{-n}`; `ArchExplicit`
/// carries arbitrary positive rational lengths and only lives at the
/// archimedean place.
#[derive(Clone, Debug)]
pub enum LengthSpec {
    /// finite list of (exponent, multiplicity), length = base^{-exponent}
    Explicit {
        base: Prime,
        entries: Vec<(i64, BigUint)>,
    },
    /// one length base^{-n} for every n >= 0
    Euler { base: Prime },
    /// multiplicities are the power-series coefficients of the zeta
    /// function P(z)/Q(z) in z = base^{-s}
    Lattice { zeta: RationalZeta },
    /// finite list of (length, multiplicity) at the archimedean place
    ArchExplicit {
        entries: Vec<(BigRational, BigUint)>,
    },
}

impl LengthSpec {
    fn base(&self) -> Option<Prime> {
        match self {
            LengthSpec::Explicit { base, .. } | LengthSpec::Euler { base } => Some(*base),
            LengthSpec::Lattice { zeta } => Some(zeta.prime()),
            LengthSpec::ArchExplicit { .. } => None,
        }
    }
}

/// Cut-off for `lengths`: either the first J distinct entries or every
/// entry of length at least the threshold.
#[derive(Clone, Debug)]
pub enum LengthLimit {
    Count(usize),
    Threshold(BigRational),
}

#[derive(Clone, Debug)]
pub struct FractalString {
    place: Place,
    spec: LengthSpec,
    name: String,
}

impl FractalString {
    pub fn new(place: Place, spec: LengthSpec, name: impl Into<String>) -> Result<Self, Error> {
        let spec = match (&place, spec) {
            (Place::NonArchimedean(p), spec @ (LengthSpec::Explicit { .. }
            | LengthSpec::Euler { .. }
            | LengthSpec::Lattice { .. })) => {
                let base = spec.base().expect("base-generated spec");
                if base != *p {
                    return Err(Error::PrimeMismatch(p.get(), base.get()));
                }
                spec
            }
            (Place::NonArchimedean(_), LengthSpec::ArchExplicit { .. }) => {
                return Err(Error::model(
                    "explicit rational lengths only exist at the archimedean place",
                ));
            }
            (Place::Archimedean, spec) => spec,
        };
        let spec = match spec {
            LengthSpec::Explicit { base, entries } => LengthSpec::Explicit {
                base,
                entries: normalize_exponent_entries(entries)?,
            },
            LengthSpec::Euler { base } => LengthSpec::Euler { base },
            LengthSpec::Lattice { zeta } => {
                validate_lattice(&zeta)?;
                LengthSpec::Lattice { zeta }
            }
            LengthSpec::ArchExplicit { entries } => LengthSpec::ArchExplicit {
                entries: normalize_rational_entries(entries)?,
            },
        };
        Ok(FractalString {
            place,
            spec,
            name: name.into(),
        })
    }

    /// Lengths of the maximal balls of a decomposed ball union.
    pub fn from_balls(balls: &BallSet) -> Result<Self, Error> {
        if balls.is_empty() {
            return Err(Error::model("empty ball set defines no string"));
        }
        let p = balls.prime();
        let entries = balls
            .canonical_decomposition()
            .balls()
            .iter()
            .map(|b| (b.radius_exp(), BigUint::one()))
            .collect();
        FractalString::new(
            Place::NonArchimedean(p),
            LengthSpec::Explicit { base: p, entries },
            "ball-union",
        )
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn spec(&self) -> &LengthSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Prime base of the generated lengths; None for ArchExplicit.
    pub fn base(&self) -> Option<Prime> {
        self.spec.base()
    }

    /// Whether the sequence has infinitely many entries.
    pub fn is_infinite(&self) -> bool {
        match &self.spec {
            LengthSpec::Euler { .. } => true,
            LengthSpec::Lattice { zeta } => !zeta.denom().is_constant(),
            LengthSpec::Explicit { .. } | LengthSpec::ArchExplicit { .. } => false,
        }
    }

    /// The first J distinct entries, or all entries with length >= theta,
    /// as nonincreasing (length, multiplicity) pairs.
    pub fn lengths(&self, limit: LengthLimit) -> Result<Vec<(BigRational, BigUint)>, Error> {
        match limit {
            LengthLimit::Count(j) => {
                if j == 0 {
                    return Err(Error::input("entry count must be positive"));
                }
                self.first_entries(j)
            }
            LengthLimit::Threshold(theta) => {
                if theta <= BigRational::zero() {
                    return Err(Error::input("threshold must be positive"));
                }
                match &self.spec {
                    LengthSpec::ArchExplicit { entries } => Ok(entries
                        .iter()
                        .filter(|(l, _)| *l >= theta)
                        .cloned()
                        .collect()),
                    _ => {
                        let base = self.base().expect("base-generated spec");
                        let cap = exponent_cutoff(base, &theta);
                        Ok(self
                            .entries_by_exponent(cap)?
                            .into_iter()
                            .map(|(e, m)| (base.power(-e), m))
                            .collect())
                    }
                }
            }
        }
    }

    fn first_entries(&self, j: usize) -> Result<Vec<(BigRational, BigUint)>, Error> {
        match &self.spec {
            LengthSpec::Explicit { base, entries } => Ok(entries
                .iter()
                .take(j)
                .map(|(e, m)| (base.power(-e), m.clone()))
                .collect()),
            LengthSpec::ArchExplicit { entries } => Ok(entries.iter().take(j).cloned().collect()),
            LengthSpec::Euler { base } => Ok((0..j as i64)
                .map(|n| (base.power(-n), BigUint::one()))
                .collect()),
            LengthSpec::Lattice { zeta } => {
                let q_deg = zeta.denom().degree().unwrap_or(0);
                let p_deg = zeta.numer().degree().unwrap_or(0);
                let cap = p_deg + j * q_deg.max(1) + 8;
                let coeffs = lattice_coefficients(zeta, cap)?;
                let base = zeta.prime();
                Ok(coeffs
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .take(j)
                    .map(|(n, c)| (base.power(-(n as i64)), c))
                    .collect())
            }
        }
    }

    /// Entries with exponent <= cap for base-generated specs, ascending.
    fn entries_by_exponent(&self, cap: i64) -> Result<Vec<(i64, BigUint)>, Error> {
        match &self.spec {
            LengthSpec::Explicit { entries, .. } => Ok(entries
                .iter()
                .filter(|(e, _)| *e <= cap)
                .cloned()
                .collect()),
            LengthSpec::Euler { .. } => Ok((0..=cap).map(|n| (n, BigUint::one())).collect()),
            LengthSpec::Lattice { zeta } => {
                if cap < 0 {
                    return Ok(vec![]);
                }
                Ok(lattice_coefficients(zeta, cap as usize)?
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(n, c)| (n as i64, c))
                    .collect())
            }
            LengthSpec::ArchExplicit { .. } => Err(Error::input(
                "exponent enumeration requires a base-generated spec",
            )),
        }
    }

    /// All entries of a finite spec; None when the sequence is infinite.
    pub(crate) fn all_entries(&self) -> Option<Vec<(BigRational, BigUint)>> {
        if self.is_infinite() {
            return None;
        }
        match &self.spec {
            LengthSpec::Explicit { base, entries } => Some(
                entries
                    .iter()
                    .map(|(e, m)| (base.power(-e), m.clone()))
                    .collect(),
            ),
            LengthSpec::ArchExplicit { entries } => Some(entries.clone()),
            LengthSpec::Lattice { zeta } => {
                // finite lattice: the zeta function is the polynomial P
                let coeffs = lattice_coefficients(zeta, zeta.numer().degree().unwrap_or(0))
                    .expect("validated at construction");
                let base = zeta.prime();
                Some(
                    coeffs
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(n, c)| (base.power(-(n as i64)), c))
                        .collect(),
                )
            }
            LengthSpec::Euler { .. } => unreachable!("Euler spec is infinite"),
        }
    }

    /// N(x): entries with 1/length <= x, counted with multiplicity.
    pub fn counting_function(&self, x: f64) -> Result<BigUint, Error> {
        if x <= 0.0 || !x.is_finite() {
            return Err(Error::input("counting function needs finite x > 0"));
        }
        match &self.spec {
            LengthSpec::ArchExplicit { entries } => {
                let xr = BigRational::from_float(x).expect("finite x");
                Ok(entries
                    .iter()
                    .filter(|(l, _)| l * &xr >= BigRational::one())
                    .map(|(_, m)| m)
                    .sum())
            }
            _ => {
                let base = self.base().expect("base-generated spec");
                // l = p^{-n} >= 1/x iff n <= log_p x; the tiny slack keeps
                // exact powers of p on the closed side of the comparison
                let cutoff = (x.ln() / base.ln() + 1e-9).floor() as i64;
                self.count_up_to_exponent(cutoff)
            }
        }
    }

    /// Total multiplicity of entries with exponent <= cutoff. This is
    /// N(base^cutoff) without any floating-point range limit.
    pub fn count_up_to_exponent(&self, cutoff: i64) -> Result<BigUint, Error> {
        Ok(self
            .entries_by_exponent(cutoff)?
            .into_iter()
            .map(|(_, m)| m)
            .sum())
    }

    /// (count, mass) of the head: entries with length >= eps.
    pub fn head_sums(&self, eps: &BigRational) -> Result<(BigUint, BigRational), Error> {
        if *eps <= BigRational::zero() {
            return Err(Error::input("threshold must be positive"));
        }
        let entries = self.lengths(LengthLimit::Threshold(eps.clone()))?;
        let count = entries.iter().map(|(_, m)| m).sum();
        let mass = entries
            .iter()
            .map(|(l, m)| l * BigRational::from_integer(BigInt::from(m.clone())))
            .sum();
        Ok((count, mass))
    }

    /// zeta(1): the total length, exact.
    pub fn total_length(&self) -> Result<BigRational, Error> {
        match &self.spec {
            LengthSpec::Explicit { base, entries } => Ok(entries
                .iter()
                .map(|(e, m)| base.power(-e) * BigRational::from_integer(BigInt::from(m.clone())))
                .sum()),
            LengthSpec::ArchExplicit { entries } => Ok(entries
                .iter()
                .map(|(l, m)| l * BigRational::from_integer(BigInt::from(m.clone())))
                .sum()),
            LengthSpec::Euler { .. } | LengthSpec::Lattice { .. } => {
                let zeta = crate::zeta::zeta_closed_form(self)?;
                let z1 = zeta.prime().power(-1);
                zeta.eval_exact_at(&z1)
                    .map_err(|_| Error::model("total length diverges"))
            }
        }
    }

    /// zeta(s) by the closed form when one exists, by the finite sum for
    /// explicit archimedean strings.
    pub fn zeta_value(&self, s: Complex64) -> Result<Complex64, Error> {
        match &self.spec {
            LengthSpec::ArchExplicit { entries } => Ok(entries
                .iter()
                .map(|(l, m)| biguint_to_f64(m) * (s * ln_rational(l)).exp())
                .sum()),
            _ => crate::zeta::zeta_closed_form(self)?.eval(s),
        }
    }

    /// Abscissa of convergence of the geometric zeta function.
    pub fn abscissa(&self) -> f64 {
        match &self.spec {
            LengthSpec::ArchExplicit { .. } => f64::NEG_INFINITY,
            _ => crate::zeta::zeta_closed_form(self)
                .expect("base-generated specs have closed forms")
                .abscissa(),
        }
    }

    /// Certified upper bound on the Dirichlet tail
    /// sum over entries with exponent n > after of m_n * base^{-n*a}.
    ///
    /// Exact for Euler and finite specs; a Perron-style envelope
    /// c_n <= A*g^n for lattice specs whose recurrence weights are all
    /// nonnegative. Lattice specs with mixed-sign weights have no
    /// certified bound here.
    pub fn tail_power_bound(&self, a: f64, after: i64) -> Result<f64, Error> {
        match &self.spec {
            LengthSpec::Explicit { base, entries } => Ok(entries
                .iter()
                .filter(|(e, _)| *e > after)
                .map(|(e, m)| biguint_to_f64(m) * (-(*e as f64) * a * base.ln()).exp())
                .sum()),
            LengthSpec::ArchExplicit { .. } => {
                Err(Error::input("tail bound by exponent needs a base"))
            }
            LengthSpec::Euler { base } => {
                let r = (-a * base.ln()).exp();
                if r >= 1.0 {
                    return Err(Error::Divergence(
                        "tail requires Re(s) above the abscissa".into(),
                    ));
                }
                let start = after.max(-1) + 1; // entries begin at exponent 0
                Ok((-(start as f64) * a * base.ln()).exp() / (1.0 - r))
            }
            LengthSpec::Lattice { zeta } => {
                let base = zeta.prime();
                if !self.is_infinite() {
                    // polynomial zeta: the tail is a finite exact sum
                    let deg = zeta.numer().degree().unwrap_or(0);
                    let coeffs = lattice_coefficients(zeta, deg)?;
                    return Ok(coeffs
                        .iter()
                        .enumerate()
                        .filter(|(n, _)| *n as i64 > after)
                        .map(|(n, c)| biguint_to_f64(c) * (-(n as f64) * a * base.ln()).exp())
                        .sum());
                }
                let (growth, amplitude) =
                    growth_envelope(zeta)?.ok_or(Error::TailUnavailable)?;
                let r = growth * (-a * base.ln()).exp();
                if r >= 1.0 {
                    return Err(Error::Divergence(
                        "tail requires Re(s) above the abscissa".into(),
                    ));
                }
                let start = after.max(-1) + 1;
                Ok(amplitude * r.powi(start as i32) / (1.0 - r))
            }
        }
    }
}

impl fmt::Display for FractalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.name.is_empty() {
            write!(f, "string over {}", self.place)
        } else {
            write!(f, "{} over {}", self.name, self.place)
        }
    }
}

fn normalize_exponent_entries(
    entries: Vec<(i64, BigUint)>,
) -> Result<Vec<(i64, BigUint)>, Error> {
    if entries.is_empty() {
        return Err(Error::model("a string needs at least one length"));
    }
    if entries.iter().any(|(_, m)| m.is_zero()) {
        return Err(Error::model("multiplicities must be positive"));
    }
    let mut entries = entries;
    entries.sort_by_key(|(e, _)| *e);
    let mut merged: Vec<(i64, BigUint)> = Vec::with_capacity(entries.len());
    for (e, m) in entries {
        match merged.last_mut() {
            Some((le, lm)) if *le == e => *lm += m,
            _ => merged.push((e, m)),
        }
    }
    Ok(merged)
}

fn normalize_rational_entries(
    entries: Vec<(BigRational, BigUint)>,
) -> Result<Vec<(BigRational, BigUint)>, Error> {
    if entries.is_empty() {
        return Err(Error::model("a string needs at least one length"));
    }
    if entries.iter().any(|(l, m)| *l <= BigRational::zero() || m.is_zero()) {
        return Err(Error::model("lengths and multiplicities must be positive"));
    }
    let mut entries = entries;
    entries.sort_by(|(a, _), (b, _)| b.cmp(a));
    let mut merged: Vec<(BigRational, BigUint)> = Vec::with_capacity(entries.len());
    for (l, m) in entries {
        match merged.last_mut() {
            Some((ll, lm)) if *ll == l => *lm += m,
            _ => merged.push((l, m)),
        }
    }
    Ok(merged)
}

/// Largest n with base^{-n} >= eps.
fn exponent_cutoff(base: Prime, eps: &BigRational) -> i64 {
    let mut n = (-ln_rational(eps) / base.ln()).floor() as i64;
    while base.power(-(n + 1)) >= *eps {
        n += 1;
    }
    while base.power(-n) < *eps {
        n -= 1;
    }
    n
}

/// Power-series coefficients c_0..c_up_to of P(z)/Q(z), each checked to be
/// a nonnegative integer.
fn lattice_coefficients(zeta: &RationalZeta, up_to: usize) -> Result<Vec<BigUint>, Error> {
    let q = zeta.denom();
    debug_assert!(q.coeff(0).is_one(), "normalized at construction");
    let q_deg = q.degree().unwrap_or(0);
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(up_to + 1);
    let mut out = Vec::with_capacity(up_to + 1);
    for n in 0..=up_to {
        let mut c = zeta.numer().coeff(n);
        for j in 1..=q_deg.min(n) {
            c = c - q.coeff(j) * &coeffs[n - j];
        }
        if c.is_negative() {
            return Err(Error::model(format!(
                "expansion coefficient of z^{n} is negative; not a length sequence"
            )));
        }
        if !c.is_integer() {
            return Err(Error::model(format!(
                "expansion coefficient of z^{n} is not an integer"
            )));
        }
        out.push(c.to_integer().to_biguint().expect("nonnegative"));
        coeffs.push(c);
    }
    Ok(out)
}

/// Construction-time checks for lattice specs: expandable at z = 0, a
/// valid multiplicity prefix, and finite total length.
fn validate_lattice(zeta: &RationalZeta) -> Result<(), Error> {
    if zeta.denom().coeff(0).is_zero() {
        return Err(Error::model(
            "zeta denominator vanishes at z = 0; no power-series expansion",
        ));
    }
    let prefix = zeta
        .numer()
        .degree()
        .unwrap_or(0)
        .max(zeta.denom().degree().unwrap_or(0));
    lattice_coefficients(zeta, prefix)?;
    // finite total length: abscissa < 1, i.e. every pole outside |z| = 1/p
    let p_inv = zeta.prime().power(-1);
    if zeta.denom().eval(&p_inv).is_zero() {
        return Err(Error::model("total length diverges (pole at s = 1)"));
    }
    if zeta.abscissa() >= 1.0 - 1e-9 {
        return Err(Error::model(
            "total length diverges (abscissa of convergence is not below 1)",
        ));
    }
    Ok(())
}

/// For a lattice spec with nonnegative recurrence weights, a certified
/// envelope (g, A) with c_n <= A*g^n for all n; Ok(None) when the weights
/// have mixed signs and no envelope is certified.
fn growth_envelope(zeta: &RationalZeta) -> Result<Option<(f64, f64)>, Error> {
    let q = zeta.denom();
    let q_deg = q.degree().unwrap_or(0);
    // Q = 1 - sum a_j z^j with a_j >= 0 required
    let mut weights = Vec::with_capacity(q_deg);
    for j in 1..=q_deg {
        let a = -q.coeff(j);
        if a.is_negative() {
            return Ok(None);
        }
        let af = crate::numeric::rational_to_f64(&a);
        if !a.is_zero() && af == 0.0 {
            // weight underflows; no trustworthy envelope
            return Ok(None);
        }
        weights.push(af);
    }
    let prefix_len = zeta.numer().degree().unwrap_or(0).max(q_deg);
    let coeffs = lattice_coefficients(zeta, prefix_len)?;
    if weights.iter().all(|&a| a == 0.0) {
        // polynomial zeta: nothing beyond the prefix
        return Ok(Some((0.0, 0.0)));
    }
    // growth rate: the positive solution of sum a_j g^{-j} = 1
    let f = |g: f64| -> f64 {
        weights
            .iter()
            .enumerate()
            .map(|(i, &a)| a * g.powi(-(i as i32 + 1)))
            .sum()
    };
    let mut lo = 1e-9;
    let mut hi = weights.iter().sum::<f64>().max(1.0) + 1.0;
    debug_assert!(f(lo) > 1.0 && f(hi) < 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // inflate until the envelope inequality provably holds in f64
    let mut growth = hi;
    for _ in 0..64 {
        if f(growth) <= 1.0 {
            break;
        }
        growth *= 1.0 + 1e-9;
    }
    let amplitude = coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| biguint_to_f64(c) / growth.powi(n as i32))
        .fold(0.0f64, f64::max)
        * (1.0 + 1e-9);
    Ok(Some((growth, amplitude)))
}

// presets

impl FractalString {
    /// Lengths p^{-n}, n >= 0, each once.
    pub fn euler(p: u64) -> Result<Self, Error> {
        let base = Prime::new(p)?;
        FractalString::new(
            Place::NonArchimedean(base),
            LengthSpec::Euler { base },
            format!("euler:p={p}"),
        )
    }

    /// The nonarchimedean Cantor string: zeta z/(1-2z) in z = 3^{-s}.
    pub fn cantor3() -> Self {
        let base = Prime::new(3).expect("3 is prime");
        let zeta = RationalZeta::new(
            base,
            RatPoly::from_integers(&[0, 1]),
            RatPoly::from_integers(&[1, -2]),
        )
        .expect("valid rational function");
        FractalString::new(
            Place::NonArchimedean(base),
            LengthSpec::Lattice { zeta },
            "cantor3",
        )
        .expect("preset is valid")
    }

    /// Real comparison string with lengths 2^{-n}, n >= 0.
    pub fn arch_geometric() -> Self {
        let base = Prime::new(2).expect("2 is prime");
        FractalString::new(
            Place::Archimedean,
            LengthSpec::Euler { base },
            "arch-geometric",
        )
        .expect("preset is valid")
    }

    /// Real comparison string with lengths 3^{-n} and multiplicities
    /// 2^{n-1}.
    pub fn arch_cantor3() -> Self {
        let base = Prime::new(3).expect("3 is prime");
        let zeta = RationalZeta::new(
            base,
            RatPoly::from_integers(&[0, 1]),
            RatPoly::from_integers(&[1, -2]),
        )
        .expect("valid rational function");
        FractalString::new(Place::Archimedean, LengthSpec::Lattice { zeta }, "arch-cantor3")
            .expect("preset is valid")
    }

    /// Resolve a preset name; Ok(None) when the name is not a preset.
    pub fn parse_preset(name: &str) -> Result<Option<Self>, Error> {
        if name == "cantor3" {
            return Ok(Some(FractalString::cantor3()));
        }
        if name == "arch-geometric" {
            return Ok(Some(FractalString::arch_geometric()));
        }
        if name == "arch-cantor3" {
            return Ok(Some(FractalString::arch_cantor3()));
        }
        if let Some(rest) = name.strip_prefix("euler:p=") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::parse(format!("bad prime in preset name {name:?}")))?;
            return FractalString::euler(p).map(Some);
        }
        Ok(None)
    }
}

// JSON string-spec schema

#[derive(Deserialize)]
struct StringSpecJson {
    place: PlaceJson,
    spec: SpecJson,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Deserialize)]
#[serde(tag = "type")]
enum PlaceJson {
    #[serde(rename = "padic")]
    Padic { p: u64 },
    #[serde(rename = "arch")]
    Arch,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum SpecJson {
    Euler {
        #[serde(default)]
        base: Option<u64>,
    },
    Explicit {
        #[serde(default)]
        base: Option<u64>,
        entries: Vec<(i64, u64)>,
    },
    Rational {
        #[serde(default)]
        base: Option<u64>,
        numerator: Vec<(usize, i64)>,
        denominator: Vec<(usize, i64)>,
    },
    ArchExplicit {
        entries: Vec<(i64, i64, u64)>,
    },
}

fn sparse_poly(terms: &[(usize, i64)]) -> RatPoly {
    let mut p = RatPoly::zero();
    for &(deg, coeff) in terms {
        p = &p + &RatPoly::monomial(BigRational::from_integer(coeff.into()), deg);
    }
    p
}

impl FractalString {
    /// Parse the JSON string-spec schema:
    /// `{"place": {"type": "padic", "p": 3} | {"type": "arch"},
    ///   "spec": {"type": "euler"} | {"type": "explicit", "entries": [[exp, mult], ...]}
    ///         | {"type": "rational", "numerator": [[deg, coeff], ...],
    ///            "denominator": [[deg, coeff], ...]}
    ///         | {"type": "arch-explicit", "entries": [[num, den, mult], ...]},
    ///   "name": "label"}`.
    ///
    /// Base-generated specs at the archimedean place carry the base in a
    /// `base` field; at a p-adic place the base defaults to p.
    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let parsed: StringSpecJson =
            serde_json::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
        let (place, default_base) = match parsed.place {
            PlaceJson::Padic { p } => {
                let prime = Prime::new(p)?;
                (Place::NonArchimedean(prime), Some(prime))
            }
            PlaceJson::Arch => (Place::Archimedean, None),
        };
        let resolve_base = |given: Option<u64>| -> Result<Prime, Error> {
            match (given, default_base) {
                (Some(b), Some(p)) if b != p.get() => Err(Error::PrimeMismatch(p.get(), b)),
                (Some(b), _) => Prime::new(b),
                (None, Some(p)) => Ok(p),
                (None, None) => Err(Error::model(
                    "spec at the archimedean place needs an explicit base",
                )),
            }
        };
        let spec = match parsed.spec {
            SpecJson::Euler { base } => LengthSpec::Euler {
                base: resolve_base(base)?,
            },
            SpecJson::Explicit { base, entries } => LengthSpec::Explicit {
                base: resolve_base(base)?,
                entries: entries
                    .into_iter()
                    .map(|(e, m)| (e, BigUint::from(m)))
                    .collect(),
            },
            SpecJson::Rational {
                base,
                numerator,
                denominator,
            } => LengthSpec::Lattice {
                zeta: RationalZeta::new(
                    resolve_base(base)?,
                    sparse_poly(&numerator),
                    sparse_poly(&denominator),
                )?,
            },
            SpecJson::ArchExplicit { entries } => {
                let entries = entries
                    .into_iter()
                    .map(|(num, den, m)| {
                        if den == 0 {
                            return Err(Error::parse("length denominator is zero"));
                        }
                        Ok((
                            BigRational::new(BigInt::from(num), BigInt::from(den)),
                            BigUint::from(m),
                        ))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                LengthSpec::ArchExplicit { entries }
            }
        };
        FractalString::new(place, spec, parsed.name.unwrap_or_default())
    }
}
