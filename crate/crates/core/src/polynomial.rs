//! Sparse polynomials over Z_p.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Point};
use crate::monomial::{eval_unchecked, Monomial};

/// Map from monomial to nonzero coefficient. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, u8>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: u8, n: usize, field: &FieldSpec) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(n), c, field);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, 1);
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, u8)>, field: &FieldSpec) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c, field);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u8 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u8)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Monomial, c: u8, field: &FieldSpec) {
        let c = field.reduce(c as u32);
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = field.add(*e.get(), c);
                if sum == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial, field: &FieldSpec) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c, field);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial, field: &FieldSpec) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), field.neg(c), field);
        }
        out
    }

    pub fn scale(&self, c: u8, field: &FieldSpec) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, &a)| (m.clone(), field.mul(a, c))),
            field,
        )
    }

    /// `c * mono * self`
    pub fn mul_term(&self, mono: &Monomial, c: u8, field: &FieldSpec) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .map(|(m, &a)| (m.mul(mono), field.mul(a, c))),
            field,
        )
    }

    pub fn eval(&self, x: &Point, field: &FieldSpec) -> Result<u8> {
        let mut acc = 0u8;
        for (m, c) in self.terms() {
            if m.dim() != x.dim() {
                return Err(Error::invalid("polynomial and point dimensions differ"));
            }
            acc = field.add(
                acc,
                field.mul(c, eval_unchecked(x.coords(), m.exponents(), field)),
            );
        }
        Ok(acc)
    }

    /// Terms in display order: descending total degree, then x1 > x2 > ... lex.
    pub fn display_terms(&self) -> Vec<(&Monomial, u8)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|a, b| b.0.canonical_cmp(a.0));
        t
    }

    pub fn parse(text: &str, n: usize, field: &FieldSpec) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        if text == "0" {
            return Ok(Polynomial::zero());
        }
        let mut out = Polynomial::zero();
        for (negative, raw) in signed_terms(text) {
            let term = raw.trim();
            let digits = term.chars().take_while(|c| c.is_ascii_digit()).count();
            let (coef_txt, mono_txt) = term.split_at(digits);
            let coef: u32 = if coef_txt.is_empty() {
                1
            } else {
                coef_txt
                    .parse()
                    .map_err(|_| Error::parse(format!("bad coefficient in {term:?}")))?
            };
            let mono = if mono_txt.is_empty() {
                if coef_txt.is_empty() {
                    return Err(Error::parse(format!("empty term in {text:?}")));
                }
                Monomial::one(n)
            } else {
                Monomial::parse(mono_txt, n)?
            };
            let c = field.reduce(coef);
            out.add_term(mono, if negative { field.neg(c) } else { c }, field);
        }
        Ok(out)
    }
}

/// Splits on top-level `+` and `-`, flagging subtracted terms.
fn signed_terms(text: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == '+' || ch == '-' {
            out.push((negative, &text[start..i]));
            negative = ch == '-';
            start = i + 1;
        }
    }
    out.push((negative, &text[start..]));
    // a leading sign produces an empty first piece
    if out.len() > 1 && out[0].1.trim().is_empty() && !out[0].0 {
        out.remove(0);
    }
    out
}

fn write_term(f: &mut fmt::Formatter<'_>, m: &Monomial, c: u8) -> fmt::Result {
    if m.is_one() {
        write!(f, "{c}")
    } else if c == 1 {
        write!(f, "{m}")
    } else {
        write!(f, "{c}{m}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.display_terms().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write_term(f, m, c)?;
        }
        Ok(())
    }
}

/// A monic polynomial with a marked leading monomial, printed lead-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedPolynomial {
    pub leading: Monomial,
    pub poly: Polynomial,
}

impl MarkedPolynomial {
    /// Tail monomials, i.e. everything but the marked leading term.
    pub fn tail(&self) -> impl Iterator<Item = &Monomial> {
        self.poly.monomials().filter(move |m| **m != self.leading)
    }
}

impl fmt::Display for MarkedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, &self.leading, self.poly.coeff(&self.leading))?;
        for (m, c) in self.poly.display_terms() {
            if *m != self.leading {
                f.write_str(" + ")?;
                write_term(f, m, c)?;
            }
        }
        Ok(())
    }
}
