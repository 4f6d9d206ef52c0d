//! Exact p-adic arithmetic over the rationals: valuations, absolute values,
//! balls `a + p^e Z_p` with their Haar measures, and canonical decompositions
//! of finite ball unions into pairwise-disjoint maximal balls.
//!
//! Everything here is exact rational arithmetic. Comparisons against radii
//! and the sibling-merge detection depend on exact ties, so no floating
//! point is used anywhere in this module.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;

/// A prime number serving as the base of a p-adic place.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p >= 2 && is_prime_u64(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// p^k as an exact rational, for any integer k.
    pub fn power(self, k: i64) -> BigRational {
        let mag = self
            .to_bigint()
            .pow(u32::try_from(k.unsigned_abs()).expect("exponent magnitude fits u32"));
        if k >= 0 {
            BigRational::from_integer(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }

    /// Natural log of p.
    pub fn ln(self) -> f64 {
        (self.0 as f64).ln()
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// The exponent of p dividing a rational number.
///
/// Zero gets a dedicated sentinel rather than a large integer, so that no
/// arithmetic is ever silently performed on it. `Infinity` compares greater
/// than every finite valuation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn is_infinity(self) -> bool {
        matches!(self, Valuation::Infinity)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// True when the valuation is at least `e`, i.e. the value lies in
    /// p^e Z_p.
    pub fn at_least(self, e: i64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinity => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinity, Valuation::Infinity) => Ordering::Equal,
            (Valuation::Infinity, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Finite(_), Valuation::Infinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut v = 0i64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            return v;
        }
    }
}

/// p-adic valuation of an exact rational; `Infinity` for zero.
pub fn valuation(x: &BigRational, p: Prime) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinity;
    }
    let pb = p.to_bigint();
    Valuation::Finite(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb))
}

/// |x|_p = p^{-v}, and |0|_p = 0.
pub fn padic_abs(x: &BigRational, p: Prime) -> BigRational {
    match valuation(x, p) {
        Valuation::Infinity => BigRational::zero(),
        Valuation::Finite(v) => p.power(-v),
    }
}

/// Ultrametric distance |x - y|_p.
pub fn padic_dist(x: &BigRational, y: &BigRational, p: Prime) -> BigRational {
    padic_abs(&(x - y), p)
}

/// A rational number tagged with its p-adic place.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PAdicScalar {
    prime: Prime,
    value: BigRational,
}

impl PAdicScalar {
    pub fn new(value: BigRational, prime: Prime) -> Self {
        PAdicScalar { prime, value }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn valuation(&self) -> Valuation {
        valuation(&self.value, self.prime)
    }

    pub fn abs(&self) -> BigRational {
        padic_abs(&self.value, self.prime)
    }

    pub fn dist(&self, other: &Self) -> Result<BigRational, Error> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        Ok(padic_dist(&self.value, &other.value, self.prime))
    }
}

/// Canonical representative of `x` modulo `p^e Z_p`: the truncation of the
/// p-adic digit expansion of `x` below exponent `e`, a rational in `[0, p^e)`
/// with `v_p(x - r) >= e`.
pub fn canonical_residue(x: &BigRational, p: Prime, e: i64) -> BigRational {
    let v = match valuation(x, p) {
        Valuation::Infinity => return BigRational::zero(),
        Valuation::Finite(v) => v,
    };
    if v >= e {
        return BigRational::zero();
    }
    let digits = u32::try_from(e - v).expect("digit span fits u32");
    let modulus = p.to_bigint().pow(digits);
    // x = p^v * a/b with p dividing neither a nor b
    let unit = x * p.power(-v);
    let b_inv = mod_inverse(unit.denom(), &modulus);
    let d = (unit.numer() * b_inv).mod_floor(&modulus);
    p.power(v) * BigRational::from_integer(d)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let ext = a.extended_gcd(m);
    debug_assert!(ext.gcd.is_one(), "inverse modulo a prime power exists");
    ext.x.mod_floor(m)
}

/// How two balls over the same prime sit relative to each other. The
/// ultrametric leaves no other possibility: overlap without nesting cannot
/// occur.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BallRelation {
    Disjoint,
    Equal,
    FirstInsideSecond,
    SecondInsideFirst,
}

/// The ball `center + p^e Z_p`: all x with |x - center|_p <= p^{-e}.
///
/// Any member of a ball is a center for it, so equality is defined on the
/// underlying point set, not on the stored representative.
#[derive(Clone, Debug)]
pub struct Ball {
    prime: Prime,
    center: BigRational,
    radius_exp: i64,
}

impl Ball {
    pub fn new(prime: Prime, center: BigRational, radius_exp: i64) -> Self {
        Ball {
            prime,
            center,
            radius_exp,
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn center(&self) -> &BigRational {
        &self.center
    }

    pub fn radius_exp(&self) -> i64 {
        self.radius_exp
    }

    /// Haar measure p^{-e}, which coincides with the radius.
    pub fn measure(&self) -> BigRational {
        self.prime.power(-self.radius_exp)
    }

    /// Measure of the sphere {x : |x - center| = p^{-e}}, namely
    /// (1 - 1/p) * p^{-e}: the ball minus any one of its p children.
    pub fn sphere_measure(&self) -> BigRational {
        let p = self.prime.power(-1);
        (BigRational::one() - p) * self.measure()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        valuation(&(x - &self.center), self.prime).at_least(self.radius_exp)
    }

    pub fn contains_scalar(&self, x: &PAdicScalar) -> Result<bool, Error> {
        if x.prime() != self.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), x.prime().get()));
        }
        Ok(self.contains(x.value()))
    }

    pub fn relation(&self, other: &Ball) -> Result<BallRelation, Error> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime.get(), other.prime.get()));
        }
        let d = valuation(&(&self.center - &other.center), self.prime);
        Ok(match self.radius_exp.cmp(&other.radius_exp) {
            Ordering::Equal => {
                if d.at_least(self.radius_exp) {
                    BallRelation::Equal
                } else {
                    BallRelation::Disjoint
                }
            }
            // self is the larger ball
            Ordering::Less => {
                if d.at_least(self.radius_exp) {
                    BallRelation::SecondInsideFirst
                } else {
                    BallRelation::Disjoint
                }
            }
            Ordering::Greater => {
                if d.at_least(other.radius_exp) {
                    BallRelation::FirstInsideSecond
                } else {
                    BallRelation::Disjoint
                }
            }
        })
    }

    /// The canonical digit representative of the center modulo p^e.
    pub fn canonical_center(&self) -> BigRational {
        canonical_residue(&self.center, self.prime, self.radius_exp)
    }

    /// (radiusExp, canonical center): two balls are equal as sets iff their
    /// keys are equal.
    pub fn canonical_key(&self) -> (i64, BigRational) {
        (self.radius_exp, self.canonical_center())
    }

    /// The p children, each of measure p^{-(e+1)}, partitioning the ball.
    pub fn children(&self) -> Vec<Ball> {
        let step = self.prime.power(self.radius_exp);
        (0..self.prime.get())
            .map(|j| {
                Ball::new(
                    self.prime,
                    &self.center + &step * BigRational::from_integer(BigInt::from(j)),
                    self.radius_exp + 1,
                )
            })
            .collect()
    }
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.prime == other.prime && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for Ball {}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}^{}Z_{}",
            self.canonical_center(),
            self.prime,
            self.radius_exp,
            self.prime
        )
    }
}

/// A finite collection of balls over one prime.
#[derive(Clone, Debug)]
pub struct BallSet {
    prime: Prime,
    balls: Vec<Ball>,
}

impl BallSet {
    pub fn new(prime: Prime, balls: Vec<Ball>) -> Result<Self, Error> {
        for b in &balls {
            if b.prime() != prime {
                return Err(Error::PrimeMismatch(prime.get(), b.prime().get()));
            }
        }
        Ok(BallSet { prime, balls })
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Rewrites the union of the input balls as pairwise-disjoint maximal
    /// balls: nested balls are dropped, and every complete family of p
    /// siblings is merged into its parent, iterated to a fixed point.
    ///
    /// Output balls carry canonical centers and are sorted by radius
    /// exponent (largest balls first), then by canonical center.
    pub fn canonical_decomposition(&self) -> BallSet {
        let p = self.prime;

        // Drop balls contained in (or equal to) an earlier-kept ball.
        // Sorting by radius exponent puts every container before its
        // contents, so one pass suffices.
        let mut sorted: Vec<&Ball> = self.balls.iter().collect();
        sorted.sort_by_key(|b| b.radius_exp());
        let mut kept: Vec<&Ball> = Vec::new();
        'next: for b in sorted {
            for k in &kept {
                match k.relation(b).expect("same prime by construction") {
                    BallRelation::Equal | BallRelation::SecondInsideFirst => continue 'next,
                    _ => {}
                }
            }
            kept.push(b);
        }

        // Merge complete sibling families bottom-up. A merge at exponent e
        // creates a parent at e-1, which is examined when its level is
        // reached, so a single descending sweep reaches the fixed point.
        let mut levels: BTreeMap<i64, HashSet<BigRational>> = BTreeMap::new();
        for b in kept {
            levels
                .entry(b.radius_exp())
                .or_default()
                .insert(b.canonical_center());
        }
        let mut out: Vec<(i64, BigRational)> = Vec::new();
        while let Some((&e, _)) = levels.last_key_value() {
            let residues = levels.remove(&e).expect("level exists");
            let mut families: HashMap<BigRational, Vec<BigRational>> = HashMap::new();
            for r in residues {
                families
                    .entry(canonical_residue(&r, p, e - 1))
                    .or_default()
                    .push(r);
            }
            for (parent, members) in families {
                debug_assert!(members.len() as u64 <= p.get());
                if members.len() as u64 == p.get() {
                    levels.entry(e - 1).or_default().insert(parent);
                } else {
                    out.extend(members.into_iter().map(|r| (e, r)));
                }
            }
        }

        out.sort_by(|(e1, r1), (e2, r2)| e1.cmp(e2).then_with(|| r1.cmp(r2)));
        let balls = out
            .into_iter()
            .map(|(e, r)| Ball::new(p, r, e))
            .collect();
        BallSet { prime: p, balls }
    }

    /// Haar measure of the union, via the canonical decomposition.
    pub fn union_measure(&self) -> BigRational {
        self.canonical_decomposition()
            .balls
            .iter()
            .map(Ball::measure)
            .sum()
    }
}
