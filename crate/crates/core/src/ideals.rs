//! Vanishing ideals of point sets: evaluation matrices, identifiability,
//! Buchberger-Moller Gröbner bases, normal forms, and model fitting.

use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::linalg::{IncrementalBasis, Matrix};
use crate::monomial::{eval_unchecked, Monomial};
use crate::order::TermOrderSpec;
use crate::polynomial::{MarkedPolynomial, Polynomial};

/// Points × monomials matrix of evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalMatrix {
    pub monomials: Vec<Monomial>,
    pub matrix: Matrix,
}

pub fn evaluation_matrix(s: &DataSet, monomials: &[Monomial]) -> Result<EvalMatrix> {
    if let Some(bad) = monomials.iter().find(|m| m.dim() != s.n()) {
        return Err(Error::invalid(format!(
            "monomial {bad} has {} variables, data set has dimension {}",
            bad.dim(),
            s.n()
        )));
    }
    let field = s.field();
    let rows = s
        .points()
        .iter()
        .map(|x| {
            monomials
                .iter()
                .map(|mono| eval_unchecked(x.coords(), mono.exponents(), field))
                .collect()
        })
        .collect();
    Ok(EvalMatrix {
        monomials: monomials.to_vec(),
        matrix: Matrix::from_rows(rows),
    })
}

/// True iff the square evaluation matrix is invertible over Z_p.
pub fn is_identifiable(s: &DataSet, monomials: &[Monomial]) -> Result<bool> {
    if monomials.len() != s.m() {
        return Err(Error::invalid(format!(
            "{} monomials for {} points",
            monomials.len(),
            s.m()
        )));
    }
    let em = evaluation_matrix(s, monomials)?;
    Ok(em.matrix.rank(s.field()) == s.m())
}

/// A reduced Gröbner basis with marked leading monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGB {
    pub field: FieldSpec,
    pub order: TermOrderSpec,
    /// Sorted by leading monomial in canonical display order.
    pub elements: Vec<MarkedPolynomial>,
}

impl ReducedGB {
    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().map(|g| g.leading.clone()).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.elements.iter().map(|g| g.to_string()).collect()
    }
}

/// Reduced Gröbner basis of I(S) and its standard monomials, by Buchberger-Moller.
///
/// Monomials with exponents up to p are visited in increasing order. A
/// monomial not divisible by a leading term found so far either has an
/// evaluation vector independent of the current standard monomials (and joins
/// them) or yields the basis element `t - Σ c_i s_i`.
pub fn bm_reduced_gb(s: &DataSet, order: &TermOrderSpec) -> Result<(ReducedGB, Vec<Monomial>)> {
    let n = s.n();
    if order.num_vars() != n {
        return Err(Error::invalid(
            "term order and data set have different variable counts",
        ));
    }
    let field = *s.field();
    let bound = field.p() as u8;
    let size = (bound as usize + 1).pow(n as u32);
    let mut stream: Vec<Monomial> = (0..size)
        .map(|i| Monomial::from_box_index(i, bound, n))
        .collect();
    stream.sort_by(|a, b| order.cmp(a, b));

    let mut standard: Vec<Monomial> = Vec::new();
    let mut elements: Vec<MarkedPolynomial> = Vec::new();
    let mut echelon = IncrementalBasis::new(s.m());
    for t in stream {
        if elements.iter().any(|g| g.leading.divides(&t)) {
            continue;
        }
        let column: Vec<u8> = s
            .points()
            .iter()
            .map(|x| eval_unchecked(x.coords(), t.exponents(), &field))
            .collect();
        match echelon.offer(&column, &field) {
            None => standard.push(t),
            Some(combo) => {
                let mut poly = Polynomial::monomial(t.clone());
                for (sm, &c) in standard.iter().zip(&combo) {
                    poly.add_term(sm.clone(), field.neg(c), &field);
                }
                elements.push(MarkedPolynomial { leading: t, poly });
            }
        }
    }
    debug_assert_eq!(standard.len(), s.m());
    elements.sort_by(|a, b| a.leading.canonical_cmp(&b.leading));
    standard.sort_by(|a, b| a.canonical_cmp(b));
    Ok((
        ReducedGB {
            field,
            order: order.clone(),
            elements,
        },
        standard,
    ))
}

/// Remainder of `f` on division by the basis, under the basis's term order.
pub fn normal_form(f: &Polynomial, gb: &ReducedGB) -> Polynomial {
    let field = &gb.field;
    let order = &gb.order;
    let mut rest = f.clone();
    let mut remainder = Polynomial::zero();
    while let Some(t) = order.max(rest.monomials()).cloned() {
        let c = rest.coeff(&t);
        match gb.elements.iter().find(|g| g.leading.divides(&t)) {
            Some(g) => {
                // g is monic in its leading term
                let q = t.div(&g.leading);
                rest = rest.sub(&g.poly.mul_term(&q, c, field), field);
            }
            None => {
                remainder.add_term(t.clone(), c, field);
                rest.add_term(t, field.neg(c), field);
            }
        }
    }
    remainder
}

/// Input-output observations for one network node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IOData {
    inputs: DataSet,
    outputs: Vec<u8>,
}

impl IOData {
    /// `outputs[j]` is the observation at the j-th point of `inputs` in sorted order.
    pub fn new(inputs: DataSet, outputs: Vec<u8>) -> Result<Self> {
        if outputs.len() != inputs.m() {
            return Err(Error::invalid(format!(
                "{} outputs for {} input points",
                outputs.len(),
                inputs.m()
            )));
        }
        if outputs.iter().any(|&t| t as u32 >= inputs.p()) {
            return Err(Error::invalid("outputs must be residues"));
        }
        Ok(IOData { inputs, outputs })
    }

    pub fn inputs(&self) -> &DataSet {
        &self.inputs
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }
}

/// The unique polynomial supported on `basis` that reproduces the outputs.
pub fn fit_minimal_model(data: &IOData, basis: &[Monomial]) -> Result<Polynomial> {
    let s = data.inputs();
    if basis.len() != s.m() {
        return Err(Error::invalid(format!(
            "basis has {} monomials for {} points",
            basis.len(),
            s.m()
        )));
    }
    let em = evaluation_matrix(s, basis)?;
    let rhs = Matrix::from_rows(data.outputs().iter().map(|&t| vec![t]).collect());
    let coeffs = em
        .matrix
        .solve(&rhs, s.field())
        .map_err(|_| Error::SingularSystem("basis is not identifiable by the data".into()))?;
    Ok(Polynomial::from_terms(
        basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), coeffs.get(i, 0))),
        s.field(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(text: &str, p: u32, n: usize) -> DataSet {
        DataSet::parse(text, FieldSpec::new(p).unwrap(), n).unwrap()
    }

    fn monos(list: &[&str], n: usize) -> Vec<Monomial> {
        list.iter()
            .map(|s| Monomial::parse(s, n).unwrap())
            .collect()
    }

    fn poly(s: &str, n: usize, p: u32) -> Polynomial {
        Polynomial::parse(s, n, &FieldSpec::new(p).unwrap()).unwrap()
    }

    #[test]
    fn evaluation_matrix_examples() {
        let s = ds("00,01", 2, 2);
        let em = evaluation_matrix(&s, &monos(&["1", "x2"], 2)).unwrap();
        assert_eq!(em.matrix.to_rows(), vec![vec![1, 0], vec![1, 1]]);
        let em = evaluation_matrix(&s, &monos(&["1", "x1"], 2)).unwrap();
        assert_eq!(em.matrix.to_rows(), vec![vec![1, 0], vec![1, 0]]);
        let em = evaluation_matrix(&ds("012,201,111", 3, 3), &monos(&["1"], 3)).unwrap();
        assert_eq!(em.matrix.to_rows(), vec![vec![1]; 3]);
        assert!(evaluation_matrix(&s, &monos(&["1"], 3)).is_err());
    }

    #[test]
    fn identifiability_examples() {
        let s = ds("00,01", 2, 2);
        assert!(is_identifiable(&s, &monos(&["1", "x2"], 2)).unwrap());
        assert!(!is_identifiable(&s, &monos(&["1", "x1"], 2)).unwrap());
        assert!(is_identifiable(&ds("10", 2, 2), &monos(&["1"], 2)).unwrap());
        assert!(is_identifiable(&s, &monos(&["1"], 2)).is_err());
    }

    fn gb_strings(s: &DataSet, order: &str) -> (Vec<String>, Vec<String>) {
        let o = TermOrderSpec::parse(order, s.n()).unwrap();
        let (gb, sm) = bm_reduced_gb(s, &o).unwrap();
        (gb.to_strings(), sm.iter().map(|m| m.to_string()).collect())
    }

    #[test]
    fn bm_examples() {
        // signs agree mod 2 with x1 - x2, x2^2 - x2
        let s1 = ds("00,11", 2, 2);
        let (gb, sm) = gb_strings(&s1, "lex:x1>x2");
        assert_eq!(gb, vec!["x1 + x2", "x2^2 + x2"]);
        assert_eq!(sm, vec!["1", "x2"]);
        let (gb, sm) = gb_strings(&s1, "lex:x2>x1");
        assert_eq!(gb, vec!["x2 + x1", "x1^2 + x1"]);
        assert_eq!(sm, vec!["1", "x1"]);

        for order in ["lex:x1>x2", "lex:x2>x1", "grevlex:x1>x2", "w:5,2|lex:x2>x1"] {
            let (gb, sm) = gb_strings(&ds("00,01", 2, 2), order);
            assert_eq!(gb, vec!["x1", "x2^2 + x2"]);
            assert_eq!(sm, vec!["1", "x2"]);
            let (gb, sm) = gb_strings(&ds("10,11", 2, 2), order);
            assert_eq!(gb, vec!["x1 + 1", "x2^2 + x2"]);
            assert_eq!(sm, vec!["1", "x2"]);
        }
    }

    #[test]
    fn bm_full_grid_gives_field_polynomials() {
        let full = DataSet::full_grid(FieldSpec::new(3).unwrap(), 2);
        let (gb, sm) = gb_strings(&full, "grevlex:x1>x2");
        assert_eq!(gb, vec!["x1^3 + 2x1", "x2^3 + 2x2"]);
        assert_eq!(sm.len(), 9);
    }

    #[test]
    fn normal_form_examples() {
        let s1 = ds("00,11", 2, 2);
        let (gb, _) = bm_reduced_gb(&s1, &TermOrderSpec::lex(2)).unwrap();
        assert_eq!(normal_form(&poly("x1", 2, 2), &gb), poly("x2", 2, 2));
        assert!(normal_form(&poly("x1 + x2", 2, 2), &gb).is_zero());
        assert_eq!(normal_form(&poly("x2", 2, 2), &gb), poly("x2", 2, 2));
        // x1^5 x2^3 = x1 x2 on these points = x2^2 = x2
        assert_eq!(
            normal_form(&poly("x1^5x2^3 + 1", 2, 2), &gb),
            poly("x2 + 1", 2, 2)
        );
    }

    #[test]
    fn fit_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let s = ds("00,11", 2, 2);
        let basis = monos(&["1", "x2"], 2);
        let fit =
            |t: Vec<u8>| fit_minimal_model(&IOData::new(s.clone(), t).unwrap(), &basis).unwrap();
        assert_eq!(fit(vec![0, 1]), poly("x2", 2, 2));
        assert_eq!(fit(vec![1, 1]), Polynomial::constant(1, 2, &f2));
        assert_eq!(fit(vec![1, 0]), poly("x2 + 1", 2, 2));

        let bad = monos(&["1", "x1"], 2);
        let data = IOData::new(ds("00,01", 2, 2), vec![0, 1]).unwrap();
        assert!(matches!(
            fit_minimal_model(&data, &bad),
            Err(Error::SingularSystem(_))
        ));
        assert!(IOData::new(s.clone(), vec![0]).is_err());
        assert!(IOData::new(s, vec![0, 2]).is_err());
    }

    fn arb_set() -> impl Strategy<Value = DataSet> {
        (prop_oneof![
            Just((2u32, 3usize)),
            Just((3, 2)),
            Just((5, 2)),
            Just((2, 4))
        ])
        .prop_flat_map(|(p, n)| {
            let grid = (p as usize).pow(n as u32);
            proptest::collection::btree_set(0..grid, 1..=grid.min(10)).prop_map(move |idx| {
                let mask = idx.into_iter().fold(0u128, |acc, i| acc | (1u128 << i));
                DataSet::from_mask(mask, FieldSpec::new(p).unwrap(), n)
            })
        })
    }

    fn arb_order(n: usize) -> impl Strategy<Value = TermOrderSpec> {
        let ranking = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (0u8..3, proptest::collection::vec(1u64..10, n), ranking).prop_map(|(k, w, r)| match k {
            0 => TermOrderSpec::Lex { ranking: r },
            1 => TermOrderSpec::Grevlex { ranking: r },
            _ => TermOrderSpec::Weight {
                weights: w,
                ranking: r,
            },
        })
    }

    fn arb_poly(s: &DataSet) -> impl Strategy<Value = Polynomial> {
        let (p, n, field) = (s.p(), s.n(), *s.field());
        proptest::collection::vec(
            (
                proptest::collection::vec(0u8..(p as u8 + 2), n),
                1u8..p as u8,
            ),
            0..6,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                terms.into_iter().map(|(e, c)| (Monomial::new(e), c)),
                &field,
            )
        })
    }

    proptest! {
        #[test]
        fn bm_invariants((s, order) in arb_set().prop_flat_map(|s| { let n = s.n(); (Just(s), arb_order(n)) })) {
            let (gb, sm) = bm_reduced_gb(&s, &order).unwrap();
            prop_assert_eq!(sm.len(), s.m());
            // closed under division
            for m in &sm {
                for i in 0..m.dim() {
                    if m.exponents()[i] > 0 {
                        let mut e = m.exponents().to_vec();
                        e[i] -= 1;
                        prop_assert!(sm.contains(&Monomial::new(e)));
                    }
                }
            }
            prop_assert!(is_identifiable(&s, &sm).unwrap());
            for g in &gb.elements {
                prop_assert_eq!(g.poly.coeff(&g.leading), 1);
                for x in s.points() {
                    prop_assert_eq!(g.poly.eval(x, s.field()).unwrap(), 0);
                }
                for t in g.tail() {
                    prop_assert!(sm.contains(t));
                    prop_assert_eq!(order.cmp(t, &g.leading), std::cmp::Ordering::Less);
                }
                // leading terms are minimal generators of the complement of sm
                prop_assert!(!sm.contains(&g.leading));
                for h in &gb.elements {
                    if h.leading != g.leading {
                        prop_assert!(!h.leading.divides(&g.leading));
                    }
                }
            }
        }

        #[test]
        fn normal_form_is_linear_and_idempotent(
            (s, order, f, g) in arb_set().prop_flat_map(|s| {
                let n = s.n();
                (Just(s.clone()), arb_order(n), arb_poly(&s), arb_poly(&s))
            })
        ) {
            let field = *s.field();
            let (gb, sm) = bm_reduced_gb(&s, &order).unwrap();
            let nf = normal_form(&f, &gb);
            prop_assert_eq!(normal_form(&nf, &gb), nf.clone());
            prop_assert_eq!(
                normal_form(&f.add(&g, &field), &gb),
                nf.add(&normal_form(&g, &gb), &field)
            );
            prop_assert!(nf.monomials().all(|m| sm.contains(m)));
            let diff = f.sub(&nf, &field);
            for x in s.points() {
                prop_assert_eq!(diff.eval(x, &field).unwrap(), 0);
            }
        }

        #[test]
        fn fitted_model_reproduces_outputs(
            (s, order, seed) in arb_set().prop_flat_map(|s| { let n = s.n(); (Just(s), arb_order(n), any::<u64>()) })
        ) {
            let (_, sm) = bm_reduced_gb(&s, &order).unwrap();
            let p = s.p() as u64;
            let outputs: Vec<u8> = (0..s.m() as u64)
                .map(|j| (seed.wrapping_mul(6364136223846793005).wrapping_add(j * 1442695040888963407) >> 33) % p)
                .map(|t| t as u8)
                .collect();
            let data = IOData::new(s.clone(), outputs.clone()).unwrap();
            let model = fit_minimal_model(&data, &sm).unwrap();
            for (x, &t) in s.points().iter().zip(&outputs) {
                prop_assert_eq!(model.eval(x, s.field()).unwrap(), t);
            }
        }
    }
}
