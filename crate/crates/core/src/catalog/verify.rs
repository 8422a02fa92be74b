//! Exhaustive checks of the divisibility, staircase, and shift-matrix
//! properties over one layer of a built catalog.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Catalog, CatalogRecord};
use crate::bases::ModelBasis;
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::ideals::is_identifiable;
use crate::radical::{set_distance, RadicalSum};
use crate::shifts::{binomial, is_staircase, shift_matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub checks: Vec<TheoremCheck>,
}

impl VerificationReport {
    /// True when no check failed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TheoremCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

/// Per-design facts, computed independently of the class structure.
struct Facts {
    staircase: bool,
    distance: RadicalSum,
    /// distinct sets per shift-matrix column
    distinct: Vec<usize>,
    equal_repetition: bool,
    identical_or_disjoint: bool,
    bases_ok: std::result::Result<(), String>,
}

fn facts(s: &DataSet, record: &CatalogRecord) -> Facts {
    let matrix = shift_matrix(s);
    let mut distinct = Vec::with_capacity(matrix.num_cols());
    let mut equal_repetition = true;
    for c in 0..matrix.num_cols() {
        let mut counts: HashMap<&DataSet, usize> = HashMap::new();
        for t in matrix.column(c) {
            *counts.entry(t).or_default() += 1;
        }
        let first = *counts.values().next().expect("nonempty column");
        equal_repetition &= counts.values().all(|&k| k == first);
        distinct.push(counts.len());
    }
    Facts {
        staircase: is_staircase(s),
        distance: set_distance(s.points()),
        distinct,
        equal_repetition,
        identical_or_disjoint: matrix.columns_identical_or_disjoint(),
        bases_ok: check_bases(s, record),
    }
}

fn check_bases(s: &DataSet, record: &CatalogRecord) -> std::result::Result<(), String> {
    if record.num_bases != record.bases.len()
        || record.lt_generators.len() != record.bases.len()
        || record.groebner_bases.len() != record.bases.len()
    {
        return Err(format!("{}: basis list lengths disagree", record.dataset));
    }
    for b in &record.bases {
        let basis =
            ModelBasis::parse(b, s.p(), s.n()).map_err(|e| format!("{}: {e}", record.dataset))?;
        if basis.len() != s.m() || !is_identifiable(s, basis.monomials()).unwrap_or(false) {
            return Err(format!("{}: basis {b} is not identifiable", record.dataset));
        }
    }
    Ok(())
}

fn power_exponent(mut x: usize, p: usize) -> Option<u32> {
    let mut k = 0;
    while x > 1 && x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    (x == 1).then_some(k)
}

struct Checks(Vec<TheoremCheck>);

impl Checks {
    fn push(&mut self, name: &str, failures: Vec<String>, pass_detail: String) {
        let (status, detail) = if failures.is_empty() {
            (CheckStatus::Pass, pass_detail)
        } else {
            let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
            (
                CheckStatus::Fail,
                format!("{} violation(s): {}", failures.len(), shown.join("; ")),
            )
        };
        self.0.push(TheoremCheck {
            name: name.into(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.0.push(TheoremCheck {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail: why.into(),
        });
    }
}

/// Runs every structural check on layer m. Failures are report entries.
pub fn verify_theorems(catalog: &Catalog, m: usize) -> Result<VerificationReport> {
    let (p, n) = (catalog.p(), catalog.n());
    let grid = (p as usize).pow(n as u32);
    let records: Vec<&CatalogRecord> = catalog.layer(m).collect();
    if records.is_empty() {
        return Err(Error::NotFound(format!(
            "layer m={m} is not in the catalog"
        )));
    }
    let sets: Vec<DataSet> = records
        .iter()
        .map(|r| r.parse_dataset())
        .collect::<Result<_>>()?;
    let all: Vec<Facts> = sets
        .par_iter()
        .zip(records.par_iter())
        .map(|(s, r)| facts(s, r))
        .collect();

    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, r) in records.iter().enumerate() {
        classes.entry(r.classlabel.as_str()).or_default().push(i);
    }
    let pu = p as usize;
    let expected_total = binomial(grid as u64, m as u64);
    let mut out = Checks(Vec::new());

    // partition
    let mut bad = Vec::new();
    if records.len() as u128 != expected_total {
        bad.push(format!(
            "{} records, expected {expected_total}",
            records.len()
        ));
    }
    for (label, members) in &classes {
        let reps = members
            .iter()
            .filter(|&&i| records[i].is_representative)
            .count();
        if reps != 1 {
            bad.push(format!("{label} has {reps} representatives"));
        }
    }
    out.push(
        "partition",
        bad,
        format!(
            "{} classes cover all {expected_total} data sets",
            classes.len()
        ),
    );

    // column structure
    let mut powers = Vec::new();
    let mut repetition = Vec::new();
    let mut dichotomy = Vec::new();
    let mut tfae = Vec::new();
    let mut exponents: Vec<u32> = Vec::with_capacity(all.len());
    for (s, f) in sets.iter().zip(&all) {
        let rs: Vec<Option<u32>> = f.distinct.iter().map(|&d| power_exponent(d, pu)).collect();
        if rs.iter().any(Option::is_none) {
            powers.push(format!("{}: column counts {:?}", s.encode(), f.distinct));
        }
        if !f.equal_repetition {
            repetition.push(s.encode());
        }
        if !f.identical_or_disjoint {
            dichotomy.push(s.encode());
        }
        let rs: Vec<u32> = rs.into_iter().flatten().collect();
        if rs.iter().all(|&r| r == 0) != (m == grid) {
            tfae.push(format!("{}: r = {rs:?}", s.encode()));
        }
        exponents.push(rs.into_iter().min().unwrap_or(0));
    }
    out.push(
        "column_counts_are_powers_of_p",
        powers,
        "every column holds p^r distinct sets".into(),
    );
    out.push(
        "column_repetition_equal",
        repetition,
        "every column repeats its sets equally".into(),
    );
    out.push(
        "columns_identical_or_disjoint",
        dichotomy,
        "all column pairs identical or disjoint".into(),
    );
    out.push(
        "all_exponents_zero_iff_full_grid",
        tfae,
        if m == grid {
            "all r_i = 0".into()
        } else {
            "some r_i > 0 for every set".into()
        },
    );

    // divisibility
    let mut ps = Vec::new();
    for members in classes.values() {
        let size = members.len();
        for &i in members {
            let s = exponents[i];
            if size % pu.pow(s) != 0 {
                ps.push(format!(
                    "class of {} has size {size}, s = {s}",
                    records[i].dataset
                ));
                break;
            }
        }
    }
    out.push(
        "class_size_divisible_by_p_pow_s",
        ps,
        "p^s divides every class size".into(),
    );

    if !m.is_multiple_of(pu) {
        let bad = classes
            .iter()
            .filter(|(_, v)| v.len() % grid != 0)
            .map(|(l, v)| format!("{l} has size {}", v.len()))
            .collect();
        out.push(
            "class_size_divisible_by_p_pow_n",
            bad,
            format!("{grid} divides every class size"),
        );
    } else {
        out.skip("class_size_divisible_by_p_pow_n", "p divides m");
    }

    if m < grid {
        let count = classes.len() as u128;
        let mut bad = Vec::new();
        if count * pu as u128 > expected_total {
            bad.push(format!("{count} classes > C/p"));
        }
        if !m.is_multiple_of(pu) && count * grid as u128 > expected_total {
            bad.push(format!("{count} classes > C/p^n"));
        }
        let bound = if !m.is_multiple_of(pu) {
            expected_total / grid as u128
        } else {
            expected_total / pu as u128
        };
        out.push(
            "class_count_bound",
            bad,
            format!("{count} classes <= {bound}"),
        );
        out.skip("full_grid_single_class", "m < p^n");
    } else {
        out.skip("class_count_bound", "m = p^n");
        let bad = if classes.len() == 1 && records.len() == 1 {
            Vec::new()
        } else {
            vec![format!("{} classes", classes.len())]
        };
        out.push("full_grid_single_class", bad, "one class of size 1".into());
    }

    // staircases
    let mut unique = Vec::new();
    let mut represent = Vec::new();
    let mut staircases = 0;
    for (label, members) in &classes {
        let stairs: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&i| all[i].staircase)
            .collect();
        staircases += stairs.len();
        if stairs.len() > 1 {
            unique.push(format!("{label} has {} staircases", stairs.len()));
        }
        if let Some(&i) = stairs.first() {
            let strictly_least = members
                .iter()
                .all(|&j| j == i || all[i].distance < all[j].distance);
            if !records[i].is_representative || !strictly_least {
                represent.push(format!(
                    "{label}: staircase {} is not the unique minimum",
                    records[i].dataset
                ));
            }
        }
    }
    out.push(
        "at_most_one_staircase_per_class",
        unique,
        format!("{staircases} staircases found"),
    );
    out.push(
        "staircase_is_representative",
        represent,
        "each staircase is the strict distance minimum of its class".into(),
    );

    // bases
    let mut invariance = Vec::new();
    for (label, members) in &classes {
        let first = &records[members[0]].bases;
        if members.iter().any(|&i| &records[i].bases != first) {
            invariance.push(format!("{label} members disagree on bases"));
        }
    }
    out.push(
        "bases_shared_within_class",
        invariance,
        "members of each class share one basis list".into(),
    );
    let identifiable = all
        .iter()
        .filter_map(|f| f.bases_ok.clone().err())
        .collect();
    out.push(
        "bases_identifiable",
        identifiable,
        "every basis passes the rank test".into(),
    );

    Ok(VerificationReport {
        p,
        n,
        m,
        checks: out.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::build_catalog;

    #[test]
    fn small_layers_pass() {
        let c = build_catalog(2, 2, false).unwrap();
        for m in 1..=4 {
            let report = verify_theorems(&c, m).unwrap();
            assert!(report.passed(), "{report:?}");
        }
        let full = verify_theorems(&c, 4).unwrap();
        assert_eq!(
            full.check("full_grid_single_class").unwrap().status,
            CheckStatus::Pass
        );
        assert_eq!(
            full.check("class_count_bound").unwrap().status,
            CheckStatus::Skipped
        );
        let two = verify_theorems(&c, 2).unwrap();
        assert_eq!(
            two.check("class_size_divisible_by_p_pow_n").unwrap().status,
            CheckStatus::Skipped
        );
    }

    #[test]
    fn tampered_records_fail() {
        let c = build_catalog(2, 2, false).unwrap();
        let mut records = c.records().to_vec();
        let i = records
            .iter()
            .position(|r| r.m == 2 && !r.is_representative)
            .unwrap();
        records[i].bases = vec!["{1,x1}".into()];
        records[i].lt_generators = vec![vec![]];
        records[i].groebner_bases = vec![vec![]];
        let bad = Catalog::from_records(2, 2, records).unwrap();
        let report = verify_theorems(&bad, 2).unwrap();
        assert!(!report.passed());
        assert_eq!(
            report.check("bases_shared_within_class").unwrap().status,
            CheckStatus::Fail
        );
        assert!(verify_theorems(&c, 7).is_err());
    }
}
