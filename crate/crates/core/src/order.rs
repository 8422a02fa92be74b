//! Term orders on monic monomials.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::Monomial;

/// A term order. Variable rankings are 0-based indices listed from the
/// largest variable down, so `[1, 0]` means x2 > x1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermOrderSpec {
    Lex {
        ranking: Vec<usize>,
    },
    Grevlex {
        ranking: Vec<usize>,
    },
    /// Compare by `w · exponents`, ties broken by lex on `ranking`.
    Weight {
        weights: Vec<u64>,
        ranking: Vec<usize>,
    },
}

impl TermOrderSpec {
    pub fn lex(n: usize) -> Self {
        TermOrderSpec::Lex {
            ranking: (0..n).collect(),
        }
    }

    pub fn grevlex(n: usize) -> Self {
        TermOrderSpec::Grevlex {
            ranking: (0..n).collect(),
        }
    }

    pub fn lex_with(ranking: Vec<usize>) -> Result<Self> {
        check_ranking(&ranking)?;
        Ok(TermOrderSpec::Lex { ranking })
    }

    pub fn grevlex_with(ranking: Vec<usize>) -> Result<Self> {
        check_ranking(&ranking)?;
        Ok(TermOrderSpec::Grevlex { ranking })
    }

    pub fn weighted(weights: Vec<u64>, ranking: Vec<usize>) -> Result<Self> {
        check_ranking(&ranking)?;
        if weights.len() != ranking.len() {
            return Err(Error::invalid(
                "weight vector length differs from variable count",
            ));
        }
        if weights.contains(&0) {
            return Err(Error::invalid("weights must be strictly positive"));
        }
        Ok(TermOrderSpec::Weight { weights, ranking })
    }

    pub fn num_vars(&self) -> usize {
        match self {
            TermOrderSpec::Lex { ranking }
            | TermOrderSpec::Grevlex { ranking }
            | TermOrderSpec::Weight { ranking, .. } => ranking.len(),
        }
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self {
            TermOrderSpec::Lex { ranking } => lex_cmp(ranking, ea, eb),
            TermOrderSpec::Grevlex { ranking } => a.degree().cmp(&b.degree()).then_with(|| {
                for &i in ranking.iter().rev() {
                    if ea[i] != eb[i] {
                        return eb[i].cmp(&ea[i]);
                    }
                }
                Ordering::Equal
            }),
            TermOrderSpec::Weight { weights, ranking } => {
                let wa: u64 = weights.iter().zip(ea).map(|(w, &e)| w * e as u64).sum();
                let wb: u64 = weights.iter().zip(eb).map(|(w, &e)| w * e as u64).sum();
                wa.cmp(&wb).then_with(|| lex_cmp(ranking, ea, eb))
            }
        }
    }

    /// Largest monomial of a collection under this order.
    pub fn max<'a>(&self, monos: impl IntoIterator<Item = &'a Monomial>) -> Option<&'a Monomial> {
        monos.into_iter().max_by(|a, b| self.cmp(a, b))
    }

    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let text = text.trim();
        let bad = |why: &str| Error::parse(format!("order {text:?}: {why}"));
        if let Some(rest) = text.strip_prefix("w:") {
            let (weights, tie) = rest
                .split_once('|')
                .ok_or_else(|| bad("weight order needs a '|lex:' tie-break"))?;
            let weights = weights
                .split(',')
                .map(|w| w.trim().parse::<u64>().map_err(|_| bad("bad weight")))
                .collect::<Result<Vec<_>>>()?;
            let ranking = match TermOrderSpec::parse(tie, n)? {
                TermOrderSpec::Lex { ranking } => ranking,
                _ => return Err(bad("tie-break must be lex")),
            };
            if weights.len() != n {
                return Err(bad("weight vector has the wrong length"));
            }
            return TermOrderSpec::weighted(weights, ranking).map_err(|e| bad(&e.to_string()));
        }
        let (kind, vars) = match text.split_once(':') {
            Some((k, v)) => (k, Some(v)),
            None => (text, None),
        };
        let ranking = match vars {
            None => (0..n).collect(),
            Some(v) => parse_ranking(v, n).map_err(|e| bad(&e.to_string()))?,
        };
        match kind {
            "lex" => Ok(TermOrderSpec::Lex { ranking }),
            "grevlex" => Ok(TermOrderSpec::Grevlex { ranking }),
            _ => Err(bad("unknown order kind")),
        }
    }
}

fn lex_cmp(ranking: &[usize], ea: &[u8], eb: &[u8]) -> Ordering {
    for &i in ranking {
        if ea[i] != eb[i] {
            return ea[i].cmp(&eb[i]);
        }
    }
    Ordering::Equal
}

fn check_ranking(ranking: &[usize]) -> Result<()> {
    let mut seen = vec![false; ranking.len()];
    for &i in ranking {
        if i >= ranking.len() || seen[i] {
            return Err(Error::invalid("variable ranking is not a permutation"));
        }
        seen[i] = true;
    }
    Ok(())
}

fn parse_ranking(text: &str, n: usize) -> Result<Vec<usize>> {
    let ranking = text
        .split('>')
        .map(|v| {
            v.trim()
                .strip_prefix('x')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= n)
                .map(|i| i - 1)
                .ok_or_else(|| Error::parse(format!("bad variable {v:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if ranking.len() != n {
        return Err(Error::parse(format!("ranking must list all {n} variables")));
    }
    check_ranking(&ranking)?;
    Ok(ranking)
}

fn fmt_ranking(ranking: &[usize]) -> String {
    ranking
        .iter()
        .map(|i| format!("x{}", i + 1))
        .collect::<Vec<_>>()
        .join(">")
}

impl fmt::Display for TermOrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermOrderSpec::Lex { ranking } => write!(f, "lex:{}", fmt_ranking(ranking)),
            TermOrderSpec::Grevlex { ranking } => write!(f, "grevlex:{}", fmt_ranking(ranking)),
            TermOrderSpec::Weight { weights, ranking } => {
                let w: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "w:{}|lex:{}", w.join(","), fmt_ranking(ranking))
            }
        }
    }
}
