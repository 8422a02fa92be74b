//! Exact sums of square roots, used to rank data sets by distance to the origin.
//!
//! A [`RadicalSum`] is kept as a map from squarefree radicand `d` to a
//! nonnegative rational coefficient. Square roots of distinct squarefree
//! integers are linearly independent over Q, so two sums are equal exactly
//! when their maps are equal. Order between unequal sums is decided by
//! interval bounds on the difference, doubling the precision until the sign
//! is certain.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::field::Point;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadicalSum {
    coefficients: BTreeMap<u64, Ratio<u64>>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum::default()
    }

    /// Exact value of √k.
    pub fn sqrt(k: u64) -> Self {
        let mut out = RadicalSum::zero();
        out.add_sqrt(k, Ratio::one());
        out
    }

    /// Adds `coef * √k`, folding square factors of `k` into the coefficient.
    pub fn add_sqrt(&mut self, k: u64, coef: Ratio<u64>) {
        if k == 0 || coef.is_zero() {
            return;
        }
        let (outside, radicand) = squarefree_split(k);
        let c = coef * Ratio::from_integer(outside);
        let slot = self
            .coefficients
            .entry(radicand)
            .or_insert_with(Ratio::zero);
        *slot += c;
    }

    pub fn add(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (&d, &c) in &other.coefficients {
            out.add_sqrt(d, c);
        }
        out
    }

    pub fn coefficients(&self) -> &BTreeMap<u64, Ratio<u64>> {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Floating-point approximation, for display only.
    pub fn approx(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|(&d, c)| (*c.numer() as f64 / *c.denom() as f64) * (d as f64).sqrt())
            .sum()
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&d, c) in &self.coefficients {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (d, c.is_one()) {
                (1, _) => write!(f, "{c}")?,
                (_, true) => write!(f, "√{d}")?,
                _ => write!(f, "{c}√{d}")?,
            }
        }
        Ok(())
    }
}

impl PartialOrd for RadicalSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RadicalSum {
    fn cmp(&self, other: &Self) -> Ordering {
        radical_compare(self, other)
    }
}

/// `k = outside^2 * radicand` with `radicand` squarefree.
fn squarefree_split(mut k: u64) -> (u64, u64) {
    let mut outside = 1u64;
    let mut radicand = 1u64;
    let mut f = 2u64;
    while f * f <= k {
        let mut e = 0;
        while k.is_multiple_of(f) {
            k /= f;
            e += 1;
        }
        outside *= f.pow(e / 2);
        if e % 2 == 1 {
            radicand *= f;
        }
        f += 1;
    }
    radicand *= k;
    (outside, radicand)
}

/// Exact comparison of the real values of two radical sums.
pub fn radical_compare(u: &RadicalSum, v: &RadicalSum) -> Ordering {
    if u == v {
        return Ordering::Equal;
    }
    // difference u - v as (radicand, signed rational)
    let mut diff: BTreeMap<u64, BigRational> = BTreeMap::new();
    let to_big =
        |c: &Ratio<u64>| BigRational::new(BigInt::from(*c.numer()), BigInt::from(*c.denom()));
    for (&d, c) in &u.coefficients {
        *diff.entry(d).or_insert_with(BigRational::zero) += to_big(c);
    }
    for (&d, c) in &v.coefficients {
        *diff.entry(d).or_insert_with(BigRational::zero) -= to_big(c);
    }
    diff.retain(|_, c| !c.is_zero());
    debug_assert!(!diff.is_empty());

    let lcm = diff
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let terms: Vec<(u64, BigInt)> = diff
        .into_iter()
        .map(|(d, c)| (d, (c * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect();

    let mut bits = 32u64;
    loop {
        let (low, high) = bracket(&terms, bits);
        if low.is_positive() {
            return Ordering::Greater;
        }
        if high.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Bounds on `2^bits * Σ a·√d`.
fn bracket(terms: &[(u64, BigInt)], bits: u64) -> (BigInt, BigInt) {
    let mut low = BigInt::zero();
    let mut high = BigInt::zero();
    for (d, a) in terms {
        if *d == 1 {
            let exact = a << bits;
            low += &exact;
            high += exact;
            continue;
        }
        let scaled = BigUint::from(*d) << (2 * bits);
        let s = BigInt::from_biguint(Sign::Plus, scaled.sqrt());
        let s_up = &s + 1;
        if a.is_positive() {
            low += a * &s;
            high += a * s_up;
        } else {
            low += a * s_up;
            high += a * s;
        }
    }
    (low, high)
}

/// Sum of Euclidean distances from the origin, with coordinates read as the
/// integers 0..p-1.
pub fn set_distance<'a>(points: impl IntoIterator<Item = &'a Point>) -> RadicalSum {
    let mut out = RadicalSum::zero();
    for pt in points {
        let sq: u64 = pt.coords().iter().map(|&c| (c as u64) * (c as u64)).sum();
        out.add_sqrt(sq, Ratio::one());
    }
    out
}
