//! Monic monomials x1^e1 ... xn^en.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Point};

/// Exponent vector of a monic monomial.
///
/// Monomials are not tied to a modulus: model bases keep exponents at most
/// p-1, while Gröbner leading terms may reach p (e.g. `x2^2` over Z_2).
/// The derived `Ord` is plain lexicographic order on exponent vectors and is
/// only used for map keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn new(exponents: Vec<u8>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The variable x_{i+1}.
    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    #[inline]
    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn max_exponent(&self) -> u8 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// True iff `self` divides `other`; dimensions must agree.
    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Canonical display order: ascending total degree, then x1 > x2 > ... lex
    /// (so `1, x1, x2, x3, x1^2, x1x2, ...`).
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }

    /// Position in the exponent box {0..=bound}^n, first variable most significant.
    pub fn box_index(&self, bound: u8) -> usize {
        let base = bound as usize + 1;
        self.0.iter().fold(0, |acc, &e| acc * base + e as usize)
    }

    pub fn from_box_index(mut index: usize, bound: u8, n: usize) -> Self {
        let base = bound as usize + 1;
        let mut e = vec![0u8; n];
        for slot in e.iter_mut().rev() {
            *slot = (index % base) as u8;
            index /= base;
        }
        Monomial(e)
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let bad = |why: &str| Error::parse(format!("monomial {text:?}: {why}"));
        if text == "1" {
            return Ok(Monomial::one(n));
        }
        if text.is_empty() {
            return Err(bad("empty"));
        }
        let mut exps = vec![0u8; n];
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] != b'x' {
                return Err(bad("expected 'x'"));
            }
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let idx: usize = text[start..i]
                .parse()
                .map_err(|_| bad("missing variable index"))?;
            if idx == 0 || idx > n {
                return Err(bad(&format!("variable index {idx} outside 1..={n}")));
            }
            let mut exp = 1u32;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = text[start..i]
                    .parse()
                    .map_err(|_| bad("missing exponent"))?;
            }
            let slot = &mut exps[idx - 1];
            let total = *slot as u32 + exp;
            if total > u8::MAX as u32 {
                return Err(bad("exponent too large"));
            }
            *slot = total as u8;
        }
        Ok(Monomial(exps))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        Ok(())
    }
}

/// Value of `mono` at `x` modulo p, with 0^0 = 1.
pub fn eval_monomial(x: &Point, mono: &Monomial, field: &FieldSpec) -> Result<u8> {
    if x.dim() != mono.dim() {
        return Err(Error::invalid(format!(
            "point has {} coordinates but monomial has {} variables",
            x.dim(),
            mono.dim()
        )));
    }
    Ok(eval_unchecked(x.coords(), mono.exponents(), field))
}

#[inline]
pub(crate) fn eval_unchecked(coords: &[u8], exps: &[u8], field: &FieldSpec) -> u8 {
    let mut acc = 1u8;
    for (&c, &e) in coords.iter().zip(exps) {
        if e != 0 {
            acc = field.mul(acc, field.pow(c, e as u32));
        }
    }
    acc
}

pub fn monomial_divides(b: &Monomial, a: &Monomial) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::invalid(
            "monomials have different numbers of variables",
        ));
    }
    Ok(b.divides(a))
}

/// Sort monomials into canonical display order.
pub fn sort_canonical(monos: &mut [Monomial]) {
    monos.sort_by(|a, b| a.canonical_cmp(b));
}

/// `{1,x1,x2}`-style encoding of a monomial set in canonical order.
pub fn encode_set(monos: &[Monomial]) -> String {
    let mut sorted = monos.to_vec();
    sort_canonical(&mut sorted);
    let body: Vec<String> = sorted.iter().map(|m| m.to_string()).collect();
    format!("{{{}}}", body.join(","))
}

pub fn parse_set(text: &str, n: usize) -> Result<Vec<Monomial>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(t);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut monos = inner
        .split(',')
        .map(|s| Monomial::parse(s, n))
        .collect::<Result<Vec<_>>>()?;
    sort_canonical(&mut monos);
    let before = monos.len();
    monos.dedup();
    if monos.len() != before {
        return Err(Error::parse(format!("repeated monomial in {text:?}")));
    }
    Ok(monos)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str, n: usize) -> Monomial {
        Monomial::parse(s, n).unwrap()
    }

    #[test]
    fn text_format() {
        assert_eq!(m("x1x2", 2).exponents(), &[1, 1]);
        assert_eq!(m("x2^2", 2).exponents(), &[0, 2]);
        assert_eq!(m("1", 3).exponents(), &[0, 0, 0]);
        assert_eq!(m("x2^2", 2).to_string(), "x2^2");
        assert_eq!(Monomial::new(vec![1, 0, 2]).to_string(), "x1x3^2");
        assert_eq!(Monomial::one(2).to_string(), "1");
        assert!(Monomial::parse("x3", 2).is_err());
        assert!(Monomial::parse("y1", 2).is_err());
        assert!(Monomial::parse("x0", 2).is_err());
        assert!(Monomial::parse("", 2).is_err());
    }

    #[test]
    fn eval_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let f3 = FieldSpec::new(3).unwrap();
        let pt = |c: Vec<u8>, f: &FieldSpec| Point::new(c, f).unwrap();
        assert_eq!(
            eval_monomial(&pt(vec![1, 1], &f2), &m("x1x2", 2), &f2).unwrap(),
            1
        );
        assert_eq!(
            eval_monomial(&pt(vec![0, 1], &f2), &m("x1", 2), &f2).unwrap(),
            0
        );
        // 2 * 2^2 = 8 = 2 mod 3
        assert_eq!(
            eval_monomial(&pt(vec![2, 2], &f3), &m("x1x2^2", 2), &f3).unwrap(),
            2
        );
        // 0^0 = 1
        assert_eq!(
            eval_monomial(&pt(vec![0, 0], &f3), &m("1", 2), &f3).unwrap(),
            1
        );
        assert!(eval_monomial(&pt(vec![0, 0, 0], &f3), &m("1", 2), &f3).is_err());
    }

    #[test]
    fn divides_examples() {
        assert!(monomial_divides(&m("x2", 2), &m("x1x2", 2)).unwrap());
        assert!(monomial_divides(&m("1", 2), &m("x1x2", 2)).unwrap());
        assert!(!monomial_divides(&m("x1^2", 2), &m("x1x2", 2)).unwrap());
        assert!(monomial_divides(&m("1", 2), &m("1", 3)).is_err());
    }

    #[test]
    fn divisibility_is_a_partial_order_on_the_3x3_box() {
        let monos: Vec<Monomial> = (0..9).map(|i| Monomial::from_box_index(i, 2, 2)).collect();
        for a in &monos {
            assert!(a.divides(a));
            for b in &monos {
                if a.divides(b) && b.divides(a) {
                    assert_eq!(a, b);
                }
                for c in &monos {
                    if a.divides(b) && b.divides(c) {
                        assert!(a.divides(c));
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_set_encoding() {
        let set = parse_set("{1,x2,x3,x1,x1x2}", 3).unwrap();
        assert_eq!(encode_set(&set), "{1,x1,x2,x3,x1x2}");
        let set = parse_set("{1, x3, x2, x2x3, x1}", 3).unwrap();
        assert_eq!(encode_set(&set), "{1,x1,x2,x3,x2x3}");
        assert!(parse_set("{1,x1,x1}", 2).is_err());
    }

    #[test]
    fn box_index_round_trip() {
        for i in 0..27 {
            let mono = Monomial::from_box_index(i, 2, 3);
            assert_eq!(mono.box_index(2), i);
        }
    }
}
