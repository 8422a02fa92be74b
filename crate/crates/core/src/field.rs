//! Prime fields Z_p and points of Z_p^n.
//!
//! Residues are stored as `u8`, so the modulus is limited to primes below 256.
//! The catalog itself only ever uses p = 2 and p = 3.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime representable with `u8` residues.
pub const MAX_PRIME: u32 = 251;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub fn new(p: u32) -> Result<Self> {
        if p > MAX_PRIME {
            return Err(Error::UnsupportedParameters(format!(
                "modulus {p} exceeds the supported maximum {MAX_PRIME}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::invalid(format!("modulus {p} is not prime")));
        }
        Ok(FieldSpec { p })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u32) -> u8 {
        (x % self.p) as u8
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    /// `base^exp` with `0^0 = 1`.
    pub fn pow(&self, base: u8, mut exp: u32) -> u8 {
        let mut acc = 1u32;
        let mut b = base as u32 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            exp >>= 1;
        }
        acc as u8
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inverse(&self, a: u8) -> Result<u8> {
        let a = a as i64;
        if a <= 0 || a >= self.p as i64 {
            return Err(Error::invalid(format!(
                "{a} has no inverse modulo {}",
                self.p
            )));
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i64, a);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i64) as u8)
    }

    /// Nonzero residues 1..p-1.
    pub fn units(&self) -> impl Iterator<Item = u8> {
        1..self.p as u8
    }

    pub fn residues(&self) -> impl Iterator<Item = u8> {
        0..self.p as u8
    }
}

impl TryFrom<u32> for FieldSpec {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        FieldSpec::new(p)
    }
}

impl From<FieldSpec> for u32 {
    fn from(f: FieldSpec) -> u32 {
        f.p
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo the field's prime.
pub fn field_inverse(a: u8, field: &FieldSpec) -> Result<u8> {
    field.inverse(a)
}

/// A point of Z_p^n. Coordinates are canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<u8>);

impl Point {
    pub fn new(coords: Vec<u8>, field: &FieldSpec) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("a point needs at least one coordinate"));
        }
        if let Some(c) = coords.iter().find(|&&c| c as u32 >= field.p()) {
            return Err(Error::invalid(format!(
                "coordinate {c} is not a residue modulo {}",
                field.p()
            )));
        }
        Ok(Point(coords))
    }

    /// Caller guarantees every coordinate is already reduced.
    pub(crate) fn from_reduced(coords: Vec<u8>) -> Self {
        Point(coords)
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![0; n])
    }

    #[inline]
    pub fn coords(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Position of the point in the lexicographic listing of Z_p^n
    /// (first coordinate most significant).
    pub fn grid_index(&self, p: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &c| acc * p as usize + c as usize)
    }

    pub fn from_grid_index(mut index: usize, p: u32, n: usize) -> Self {
        let mut coords = vec![0u8; n];
        for slot in coords.iter_mut().rev() {
            *slot = (index % p as usize) as u8;
            index /= p as usize;
        }
        Point(coords)
    }

    /// Coordinatewise `self <= other`.
    pub fn le_coordinatewise(&self, other: &Point) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Text form: one digit per coordinate when p <= 10 ("110"), otherwise
    /// dot-separated residues ("10.3").
    pub fn encode(&self, p: u32) -> String {
        if p <= 10 {
            self.0.iter().map(|&c| char::from(b'0' + c)).collect()
        } else {
            self.0
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    pub fn parse(text: &str, field: &FieldSpec, n: usize) -> Result<Self> {
        let text = text.trim();
        let coords: Vec<u8> = if field.p() <= 10 {
            text.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::parse(format!("bad digit {ch:?} in point {text:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split('.')
                .map(|s| {
                    s.parse::<u8>().map_err(|_| {
                        Error::parse(format!("bad coordinate {s:?} in point {text:?}"))
                    })
                })
                .collect::<Result<_>>()?
        };
        if coords.len() != n {
            return Err(Error::parse(format!(
                "point {text:?} has {} coordinates, expected {n}",
                coords.len()
            )));
        }
        Point::new(coords, field).map_err(|e| Error::parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_zero() {
        assert!(FieldSpec::new(4).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(0).is_err());
        assert!(matches!(
            FieldSpec::new(257),
            Err(Error::UnsupportedParameters(_))
        ));
        assert_eq!(FieldSpec::new(7).unwrap().p(), 7);
    }

    #[test]
    fn inverse_examples() {
        let f3 = FieldSpec::new(3).unwrap();
        assert_eq!(field_inverse(1, &f3).unwrap(), 1);
        assert_eq!(field_inverse(2, &f3).unwrap(), 2);
        // exhaustive search over 1..6 for the inverse of 3 mod 7
        let f7 = FieldSpec::new(7).unwrap();
        let brute = (1u8..7).find(|b| (3 * *b as u32) % 7 == 1).unwrap();
        assert_eq!(brute, 5);
        assert_eq!(field_inverse(3, &f7).unwrap(), brute);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = FieldSpec::new(5).unwrap();
        assert!(matches!(
            field_inverse(0, &f),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            field_inverse(5, &f),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn inverse_all_units_small_primes() {
        for p in [2u32, 3, 5, 7, 11, 13, 251] {
            let f = FieldSpec::new(p).unwrap();
            for a in f.units() {
                let b = f.inverse(a).unwrap();
                assert_eq!(f.mul(a, b), 1, "p={p} a={a}");
            }
        }
    }

    #[test]
    fn point_text_round_trip() {
        let f2 = FieldSpec::new(2).unwrap();
        let pt = Point::parse("110", &f2, 3).unwrap();
        assert_eq!(pt.coords(), &[1, 1, 0]);
        assert_eq!(pt.encode(2), "110");
        assert!(Point::parse("120", &f2, 3).is_err());
        assert!(Point::parse("11", &f2, 3).is_err());

        let f11 = FieldSpec::new(11).unwrap();
        let q = Point::parse("10.3", &f11, 2).unwrap();
        assert_eq!(q.encode(11), "10.3");
    }

    #[test]
    fn grid_index_matches_lex_order() {
        let n = 3;
        let pts: Vec<Point> = (0..27).map(|i| Point::from_grid_index(i, 3, n)).collect();
        for w in pts.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, pt) in pts.iter().enumerate() {
            assert_eq!(pt.grid_index(3), i);
        }
    }
}
