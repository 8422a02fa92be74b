//! All model bases of a data set: order ideals that are identifiable by the
//! data and realized as standard-monomial sets by some term order.

use std::cmp::Ordering;
use std::fmt;

use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::fm::{positive_solution, satisfies};
use crate::ideals::{evaluation_matrix, is_identifiable};
use crate::linalg::Matrix;
use crate::monomial::{encode_set, eval_unchecked, parse_set, sort_canonical, Monomial};
use crate::polynomial::{MarkedPolynomial, Polynomial};

/// A divisibility-closed set of monomials with exponents below p, kept in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModelBasis {
    monomials: Vec<Monomial>,
}

impl ModelBasis {
    /// Validates closure under division and the exponent bound.
    pub fn new(mut monomials: Vec<Monomial>, p: u32) -> Result<Self> {
        sort_canonical(&mut monomials);
        if monomials.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("repeated monomial in basis"));
        }
        if monomials.iter().any(|m| m.max_exponent() as u32 >= p) {
            return Err(Error::invalid(format!("basis exponents must be below {p}")));
        }
        let closed = monomials.iter().all(|m| {
            (0..m.dim()).all(|i| {
                m.exponents()[i] == 0 || {
                    let mut e = m.exponents().to_vec();
                    e[i] -= 1;
                    monomials.contains(&Monomial::new(e))
                }
            })
        });
        if !closed {
            return Err(Error::invalid("basis is not closed under division"));
        }
        Ok(ModelBasis { monomials })
    }

    fn from_sorted_unchecked(monomials: Vec<Monomial>) -> Self {
        ModelBasis { monomials }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.contains(m)
    }

    pub fn encode(&self) -> String {
        encode_set(&self.monomials)
    }

    pub fn parse(text: &str, p: u32, n: usize) -> Result<Self> {
        ModelBasis::new(parse_set(text, n)?, p)
    }

    /// Minimal generators of the monomials outside the basis.
    pub fn corners(&self) -> Vec<Monomial> {
        let Some(first) = self.monomials.first() else {
            return Vec::new();
        };
        let n = first.dim();
        let bound = self
            .monomials
            .iter()
            .map(|m| m.max_exponent())
            .max()
            .unwrap_or(0)
            + 1;
        let size = (bound as usize + 1).pow(n as u32);
        let mut out: Vec<Monomial> = (0..size)
            .map(|i| Monomial::from_box_index(i, bound, n))
            .filter(|c| {
                !self.contains(c)
                    && (0..n).all(|i| {
                        c.exponents()[i] == 0 || {
                            let mut e = c.exponents().to_vec();
                            e[i] -= 1;
                            self.contains(&Monomial::new(e))
                        }
                    })
            })
            .collect();
        sort_canonical(&mut out);
        out
    }
}

impl Ord for ModelBasis {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_terms = self
            .monomials
            .iter()
            .zip(&other.monomials)
            .map(|(a, b)| a.canonical_cmp(b))
            .find(|o| o.is_ne());
        by_terms.unwrap_or_else(|| self.monomials.len().cmp(&other.monomials.len()))
    }
}

impl PartialOrd for ModelBasis {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// A realizable basis with its reduced Gröbner basis and a weight witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisAnnotation {
    pub basis: ModelBasis,
    pub corners: Vec<Monomial>,
    /// One marked polynomial per corner, in corner order.
    pub gb: Vec<MarkedPolynomial>,
    pub certificate: Vec<u64>,
}

/// All order ideals of size m inside the exponent box {0..p-1}^n.
pub fn enumerate_order_ideals(p: u32, n: usize, m: usize) -> Vec<ModelBasis> {
    let bound = (p - 1) as u8;
    let size = (p as usize).pow(n as u32);
    if m == 0 || m > size {
        return Vec::new();
    }
    let mut cells: Vec<Monomial> = (0..size)
        .map(|i| Monomial::from_box_index(i, bound, n))
        .collect();
    sort_canonical(&mut cells);
    // each cell's immediate divisors, as positions in `cells`
    let pos = |m: &Monomial| cells.iter().position(|c| c == m).expect("in box");
    let parents: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            (0..n)
                .filter(|&i| c.exponents()[i] > 0)
                .map(|i| {
                    let mut e = c.exponents().to_vec();
                    e[i] -= 1;
                    pos(&Monomial::new(e))
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut chosen = vec![false; size];
    fn walk(
        i: usize,
        count: usize,
        m: usize,
        parents: &[Vec<usize>],
        chosen: &mut Vec<bool>,
        cells: &[Monomial],
        out: &mut Vec<ModelBasis>,
    ) {
        if count == m {
            let monos = (0..cells.len())
                .filter(|&j| chosen[j])
                .map(|j| cells[j].clone())
                .collect();
            out.push(ModelBasis::from_sorted_unchecked(monos));
            return;
        }
        if i == cells.len() || cells.len() - i < m - count {
            return;
        }
        if parents[i].iter().all(|&q| chosen[q]) {
            chosen[i] = true;
            walk(i + 1, count + 1, m, parents, chosen, cells, out);
            chosen[i] = false;
        }
        walk(i + 1, count, m, parents, chosen, cells, out);
    }
    walk(0, 0, m, &parents, &mut chosen, &cells, &mut out);
    out.sort();
    out
}

/// For each corner `c` of `basis`, the polynomial `c - Σ k_b b` vanishing on S.
pub fn border_polynomials(s: &DataSet, basis: &ModelBasis) -> Result<Vec<MarkedPolynomial>> {
    check_shape(s, basis)?;
    let field = s.field();
    let em = evaluation_matrix(s, basis.monomials())?;
    let corners = basis.corners();
    let rhs = Matrix::from_rows(
        s.points()
            .iter()
            .map(|x| {
                corners
                    .iter()
                    .map(|c| eval_unchecked(x.coords(), c.exponents(), field))
                    .collect()
            })
            .collect(),
    );
    let coeffs = em
        .matrix
        .solve(&rhs, field)
        .map_err(|_| Error::SingularSystem(format!("basis {basis} is not identifiable")))?;
    Ok(corners
        .into_iter()
        .enumerate()
        .map(|(j, c)| {
            let mut poly = Polynomial::monomial(c.clone());
            for (i, b) in basis.monomials().iter().enumerate() {
                poly.add_term(b.clone(), field.neg(coeffs.get(i, j)), field);
            }
            MarkedPolynomial { leading: c, poly }
        })
        .collect())
}

fn check_shape(s: &DataSet, basis: &ModelBasis) -> Result<()> {
    if basis.len() != s.m() {
        return Err(Error::invalid(format!(
            "basis has {} monomials for {} points",
            basis.len(),
            s.m()
        )));
    }
    if basis.monomials().iter().any(|m| m.dim() != s.n()) {
        return Err(Error::invalid(
            "basis and data set have different dimensions",
        ));
    }
    Ok(())
}

/// Inequalities `w · (corner - tail) > 0` for each marked polynomial.
pub fn orientation_rows(gb: &[MarkedPolynomial]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = gb
        .iter()
        .flat_map(|g| {
            g.tail().map(move |a| {
                g.leading
                    .exponents()
                    .iter()
                    .zip(a.exponents())
                    .map(|(&c, &e)| c as i64 - e as i64)
                    .collect()
            })
        })
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// A positive integer weight vector under which every corner leads its
/// border polynomial, or `None` when no term order realizes the basis.
pub fn is_term_order_realizable(s: &DataSet, basis: &ModelBasis) -> Result<Option<Vec<u64>>> {
    check_shape(s, basis)?;
    if !is_identifiable(s, basis.monomials())? {
        return Err(Error::invalid(format!("basis {basis} is not identifiable")));
    }
    let gb = border_polynomials(s, basis)?;
    Ok(realize(&orientation_rows(&gb), s.n()))
}

fn realize(rows: &[Vec<i64>], n: usize) -> Option<Vec<u64>> {
    let ones = vec![1u64; n];
    if satisfies(rows, &ones) {
        return Some(ones);
    }
    positive_solution(rows, n)
}

/// Every model basis of S with its reduced Gröbner basis, sorted by basis.
pub fn enumerate_model_bases(s: &DataSet) -> Vec<BasisAnnotation> {
    let mut out = Vec::new();
    for basis in enumerate_order_ideals(s.p(), s.n(), s.m()) {
        let gb = match border_polynomials(s, &basis) {
            Ok(gb) => gb,
            Err(_) => continue,
        };
        match realize(&orientation_rows(&gb), s.n()) {
            Some(certificate) => out.push(BasisAnnotation {
                corners: gb.iter().map(|g| g.leading.clone()).collect(),
                basis,
                gb,
                certificate,
            }),
            None => log::info!(
                "order ideal {basis} is identifiable by {} but not realized by any term order",
                s.encode()
            ),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn ds(text: &str, p: u32, n: usize) -> DataSet {
        DataSet::parse(text, FieldSpec::new(p).unwrap(), n).unwrap()
    }

    fn basis(text: &str, p: u32, n: usize) -> ModelBasis {
        ModelBasis::parse(text, p, n).unwrap()
    }

    fn encodings(list: &[BasisAnnotation]) -> Vec<String> {
        list.iter().map(|a| a.basis.encode()).collect()
    }

    #[test]
    fn model_basis_validation() {
        assert!(ModelBasis::parse("{1,x1x2}", 2, 2).is_err());
        assert!(ModelBasis::parse("{1,x1^2,x1}", 2, 2).is_err());
        assert_eq!(basis("{x2,1,x1}", 2, 2).encode(), "{1,x1,x2}");
    }

    #[test]
    fn corners_examples() {
        assert_eq!(
            basis("{1,x2}", 2, 2).corners(),
            vec![
                Monomial::parse("x1", 2).unwrap(),
                Monomial::parse("x2^2", 2).unwrap()
            ]
        );
        let full = basis("{1,x1,x2,x1x2}", 2, 2).corners();
        assert_eq!(
            full.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            vec!["x1^2", "x2^2"]
        );
        let c = basis("{1,x1,x2,x3,x1x2}", 2, 3).corners();
        assert_eq!(
            c.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            vec!["x1^2", "x1x3", "x2^2", "x2x3", "x3^2"]
        );
    }

    #[test]
    fn order_ideal_examples() {
        let two: Vec<String> = enumerate_order_ideals(2, 2, 2)
            .iter()
            .map(|b| b.encode())
            .collect();
        assert_eq!(two, vec!["{1,x1}", "{1,x2}"]);
        for (p, n) in [(2, 2), (3, 2), (2, 4)] {
            let one = enumerate_order_ideals(p, n, 1);
            assert_eq!(one.len(), 1);
            assert_eq!(one[0].encode(), "{1}");
        }
        let full: Vec<String> = enumerate_order_ideals(2, 2, 4)
            .iter()
            .map(|b| b.encode())
            .collect();
        assert_eq!(full, vec!["{1,x1,x2,x1x2}"]);
    }

    /// Counts of downsets by brute force over all subsets of the box.
    #[test]
    fn order_ideal_counts_match_subset_scan() {
        for (p, n) in [(2u32, 3usize), (3, 2), (2, 4)] {
            let bound = (p - 1) as u8;
            let size = (p as usize).pow(n as u32);
            let cells: Vec<Monomial> = (0..size)
                .map(|i| Monomial::from_box_index(i, bound, n))
                .collect();
            let mut counts = vec![0usize; size + 1];
            for mask in 1u32..(1 << size) {
                let members: Vec<&Monomial> = (0..size)
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| &cells[i])
                    .collect();
                let closed = members
                    .iter()
                    .all(|m| cells.iter().all(|d| !d.divides(m) || members.contains(&d)));
                if closed {
                    counts[members.len()] += 1;
                }
            }
            for (m, &count) in counts.iter().enumerate().skip(1) {
                assert_eq!(
                    enumerate_order_ideals(p, n, m).len(),
                    count,
                    "p={p} n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn border_polynomial_examples() {
        let show = |gb: Vec<MarkedPolynomial>| gb.iter().map(|g| g.to_string()).collect::<Vec<_>>();
        let b = basis("{1,x2}", 2, 2);
        assert_eq!(
            show(border_polynomials(&ds("00,01", 2, 2), &b).unwrap()),
            vec!["x1", "x2^2 + x2"]
        );
        assert_eq!(
            show(border_polynomials(&ds("10,11", 2, 2), &b).unwrap()),
            vec!["x1 + 1", "x2^2 + x2"]
        );
        let full = DataSet::full_grid(FieldSpec::new(3).unwrap(), 2);
        let gb = border_polynomials(
            &full,
            &basis("{1,x1,x2,x1^2,x1x2,x2^2,x1^2x2,x1x2^2,x1^2x2^2}", 3, 2),
        )
        .unwrap();
        assert_eq!(show(gb), vec!["x1^3 + 2x1", "x2^3 + 2x2"]);
        assert!(matches!(
            border_polynomials(&ds("00,01", 2, 2), &basis("{1,x1}", 2, 2)),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn realizability_examples() {
        let s1 = ds("00,11", 2, 2);
        let w = is_term_order_realizable(&s1, &basis("{1,x2}", 2, 2))
            .unwrap()
            .unwrap();
        assert!(w[0] > w[1]);
        let w = is_term_order_realizable(&s1, &basis("{1,x1}", 2, 2))
            .unwrap()
            .unwrap();
        assert!(w[1] > w[0]);
        assert!(
            is_term_order_realizable(&ds("01", 2, 2), &basis("{1}", 2, 2))
                .unwrap()
                .is_some()
        );
        assert!(is_term_order_realizable(&ds("00,01", 2, 2), &basis("{1,x1}", 2, 2)).is_err());
    }

    #[test]
    fn model_bases_examples() {
        assert_eq!(
            encodings(&enumerate_model_bases(&ds("00,11", 2, 2))),
            vec!["{1,x1}", "{1,x2}"]
        );
        assert_eq!(
            encodings(&enumerate_model_bases(&ds("00,01", 2, 2))),
            vec!["{1,x2}"]
        );
        assert_eq!(
            encodings(&enumerate_model_bases(&ds("000,001,011,100,110", 2, 3))),
            vec!["{1,x1,x2,x3,x1x2}", "{1,x1,x2,x3,x2x3}"]
        );
    }

    #[test]
    fn same_bases_without_a_shift() {
        let f7 = FieldSpec::new(7).unwrap();
        let s = DataSet::parse("00,10,20", f7, 2).unwrap();
        let t = DataSet::parse("00,10,30", f7, 2).unwrap();
        assert_eq!(encodings(&enumerate_model_bases(&s)), vec!["{1,x1,x1^2}"]);
        assert_eq!(
            encodings(&enumerate_model_bases(&s)),
            encodings(&enumerate_model_bases(&t))
        );
        assert!(crate::shifts::shift_between(&s, &t).unwrap().is_none());
    }

    #[test]
    fn annotations_are_consistent() {
        let s = ds("000,001,010,100,111", 2, 3);
        for a in enumerate_model_bases(&s) {
            assert!(is_identifiable(&s, a.basis.monomials()).unwrap());
            assert!(satisfies(&orientation_rows(&a.gb), &a.certificate));
            for g in &a.gb {
                for x in s.points() {
                    assert_eq!(g.poly.eval(x, s.field()).unwrap(), 0);
                }
                assert!(g.tail().all(|t| a.basis.contains(t)));
            }
        }
    }
}
