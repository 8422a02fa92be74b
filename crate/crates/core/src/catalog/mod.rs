//! The annotated catalog of linear-shift classes: build, query, summaries,
//! and add-a-point analysis.

mod store;
mod verify;

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::{enumerate_model_bases, BasisAnnotation};
use crate::dataset::DataSet;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Point};
use crate::monomial::{parse_set, sort_canonical, Monomial};
use crate::shifts::{binomial, partition_all};

pub use store::{
    export_catalog, import_catalog, layer_file_name, read_catalog, write_catalog, SCHEMA_VERSION,
};
pub use verify::{verify_theorems, CheckStatus, TheoremCheck, VerificationReport};

/// The (p, n) layers built without an explicit override.
pub const DEFAULT_LAYERS: [(u32, usize); 4] = [(2, 2), (2, 3), (2, 4), (3, 2)];

/// One data set with its class and every model basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub dataset: String,
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub classlabel: String,
    pub is_representative: bool,
    pub num_bases: usize,
    pub bases: Vec<String>,
    /// Minimal generators of the leading-term ideal, one list per basis.
    pub lt_generators: Vec<Vec<String>>,
    /// Reduced Gröbner basis, one list per basis, leading term first in each polynomial.
    pub groebner_bases: Vec<Vec<String>>,
}

impl CatalogRecord {
    /// Builds the record for S from its annotations.
    pub fn from_annotations(
        s: &DataSet,
        classlabel: String,
        is_representative: bool,
        annotations: &[BasisAnnotation],
    ) -> Self {
        CatalogRecord {
            dataset: s.encode(),
            p: s.p(),
            n: s.n(),
            m: s.m(),
            classlabel,
            is_representative,
            num_bases: annotations.len(),
            bases: annotations.iter().map(|a| a.basis.encode()).collect(),
            lt_generators: annotations
                .iter()
                .map(|a| a.corners.iter().map(|c| c.to_string()).collect())
                .collect(),
            groebner_bases: annotations
                .iter()
                .map(|a| a.gb.iter().map(|g| g.to_string()).collect())
                .collect(),
        }
    }

    pub fn parse_dataset(&self) -> Result<DataSet> {
        DataSet::parse(&self.dataset, FieldSpec::new(self.p)?, self.n)
    }

    /// True iff some basis contains the monomial.
    pub fn has_basis_monomial(&self, mono: &Monomial) -> bool {
        let text = mono.to_string();
        self.bases.iter().any(|b| basis_terms(b).any(|t| t == text))
    }

    /// Every monomial occurring in some basis.
    pub fn basis_monomials(&self) -> Result<BTreeSet<Monomial>> {
        let mut out = BTreeSet::new();
        for b in &self.bases {
            out.extend(parse_set(b, self.n)?);
        }
        Ok(out)
    }
}

fn basis_terms(encoding: &str) -> impl Iterator<Item = &str> {
    encoding
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .map(str::trim)
}

/// Every record of one (p, n), ordered by m and then by data set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    p: u32,
    n: usize,
    records: Vec<CatalogRecord>,
    index: HashMap<String, usize>,
}

impl Catalog {
    /// Wraps records, checking that they belong to the (p, n) layer.
    pub fn from_records(p: u32, n: usize, records: Vec<CatalogRecord>) -> Result<Self> {
        let mut index = HashMap::with_capacity(records.len());
        for (i, r) in records.iter().enumerate() {
            if r.p != p || r.n != n {
                return Err(Error::invalid(format!(
                    "record {} has p={}, n={} in a p={p}, n={n} catalog",
                    r.dataset, r.p, r.n
                )));
            }
            if index.insert(r.dataset.clone(), i).is_some() {
                return Err(Error::invalid(format!(
                    "record {} appears twice",
                    r.dataset
                )));
            }
        }
        Ok(Catalog {
            p,
            n,
            records,
            index,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        FieldSpec::new(self.p).expect("validated at build")
    }

    pub fn records(&self) -> &[CatalogRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Sizes m present in the catalog, ascending.
    pub fn layers(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.records.iter().map(|r| r.m).collect();
        set.into_iter().collect()
    }

    pub fn layer(&self, m: usize) -> impl Iterator<Item = &CatalogRecord> {
        self.records.iter().filter(move |r| r.m == m)
    }

    pub fn get(&self, s: &DataSet) -> Option<&CatalogRecord> {
        self.get_encoded(&s.encode())
    }

    pub fn get_encoded(&self, encoding: &str) -> Option<&CatalogRecord> {
        self.index.get(encoding).map(|&i| &self.records[i])
    }

    pub fn query(&self, filter: &QueryFilter) -> Vec<&CatalogRecord> {
        query(self, filter)
    }
}

/// Rejects (p, n) outside the default layers unless `allow_override` is set.
pub fn check_catalog_params(p: u32, n: usize, allow_override: bool) -> Result<FieldSpec> {
    let field = FieldSpec::new(p)?;
    if !allow_override && !DEFAULT_LAYERS.contains(&(p, n)) {
        return Err(Error::UnsupportedParameters(format!(
            "(p, n) = ({p}, {n}) is not a default catalog layer; pass the override to build it"
        )));
    }
    Ok(field)
}

/// The annotated record of a single data set, outside any catalog.
pub fn compute_record(s: &DataSet, classlabel: String, is_representative: bool) -> CatalogRecord {
    CatalogRecord::from_annotations(s, classlabel, is_representative, &enumerate_model_bases(s))
}

/// All records of size m in Z_p^n, sorted by data set.
pub fn build_layer(p: u32, n: usize, m: usize) -> Result<Vec<CatalogRecord>> {
    let classes = partition_all(p, n, m)?;
    let mut jobs: Vec<(DataSet, &str, bool)> = classes
        .iter()
        .flat_map(|c| {
            let label = c.label.as_deref().expect("labelled by partition_all");
            c.members
                .iter()
                .map(move |s| (s.clone(), label, *s == c.representative))
        })
        .collect();
    jobs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(jobs
        .par_iter()
        .map(|(s, label, rep)| compute_record(s, label.to_string(), *rep))
        .collect())
}

/// Builds every layer m = 1..p^n of (p, n).
pub fn build_catalog(p: u32, n: usize, allow_override: bool) -> Result<Catalog> {
    check_catalog_params(p, n, allow_override)?;
    let grid = (p as usize).pow(n as u32);
    let mut records = Vec::new();
    for m in 1..=grid {
        log::info!("building p={p} n={n} m={m}");
        records.extend(build_layer(p, n, m)?);
    }
    Catalog::from_records(p, n, records)
}

/// Conjunctive record filter; unset fields match everything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryFilter {
    pub m: Option<usize>,
    pub contains_monomial: Option<Monomial>,
    pub dataset: Option<DataSet>,
    pub classlabel: Option<String>,
    pub representatives_only: bool,
    pub min_bases: Option<usize>,
    pub max_bases: Option<usize>,
}

impl QueryFilter {
    /// Builds a filter from text fields, parsing encodings for (p, n).
    pub fn from_text(
        p: u32,
        n: usize,
        m: Option<usize>,
        contains_monomial: Option<&str>,
        dataset: Option<&str>,
        classlabel: Option<&str>,
        representatives_only: bool,
    ) -> Result<Self> {
        let field = FieldSpec::new(p)?;
        Ok(QueryFilter {
            m,
            contains_monomial: contains_monomial
                .map(|t| Monomial::parse(t, n))
                .transpose()?,
            dataset: dataset.map(|t| DataSet::parse(t, field, n)).transpose()?,
            classlabel: classlabel.map(str::to_string),
            representatives_only,
            min_bases: None,
            max_bases: None,
        })
    }

    pub fn matches(&self, r: &CatalogRecord) -> bool {
        self.m.is_none_or(|m| r.m == m)
            && self
                .dataset
                .as_ref()
                .is_none_or(|d| r.dataset == d.encode())
            && self.classlabel.as_ref().is_none_or(|l| &r.classlabel == l)
            && (!self.representatives_only || r.is_representative)
            && self.min_bases.is_none_or(|k| r.num_bases >= k)
            && self.max_bases.is_none_or(|k| r.num_bases <= k)
            && self
                .contains_monomial
                .as_ref()
                .is_none_or(|mono| r.has_basis_monomial(mono))
    }
}

/// Records matching every supplied field of the filter, in catalog order.
pub fn query<'a>(catalog: &'a Catalog, filter: &QueryFilter) -> Vec<&'a CatalogRecord> {
    catalog
        .records
        .iter()
        .filter(|r| filter.matches(r))
        .collect()
}

/// One class of a layer, as shown in summaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub classlabel: String,
    pub representative: String,
    pub size: usize,
    pub num_bases: usize,
    pub bases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub p: u32,
    pub n: usize,
    pub m: usize,
    pub class_count: usize,
    pub total_sets: usize,
    pub min_bases: usize,
    pub max_bases: usize,
    pub classes: Vec<ClassSummary>,
}

/// Summaries of the classes among `records`, in label order.
pub fn summarize<'a>(
    p: u32,
    n: usize,
    m: usize,
    records: impl IntoIterator<Item = &'a CatalogRecord>,
) -> Result<SummaryStats> {
    let mut classes: Vec<ClassSummary> = Vec::new();
    let mut slot: HashMap<&str, usize> = HashMap::new();
    for r in records {
        let i = *slot.entry(r.classlabel.as_str()).or_insert_with(|| {
            classes.push(ClassSummary {
                classlabel: r.classlabel.clone(),
                representative: String::new(),
                size: 0,
                num_bases: r.num_bases,
                bases: r.bases.clone(),
            });
            classes.len() - 1
        });
        let c = &mut classes[i];
        c.size += 1;
        if r.is_representative {
            c.representative = r.dataset.clone();
        }
    }
    if let Some(c) = classes.iter().find(|c| c.representative.is_empty()) {
        return Err(Error::Inconsistency(format!(
            "class {} has no representative",
            c.classlabel
        )));
    }
    classes.sort_by(|a, b| label_key(&a.classlabel).cmp(&label_key(&b.classlabel)));
    Ok(SummaryStats {
        p,
        n,
        m,
        class_count: classes.len(),
        total_sets: classes.iter().map(|c| c.size).sum(),
        min_bases: classes.iter().map(|c| c.num_bases).min().unwrap_or(0),
        max_bases: classes.iter().map(|c| c.num_bases).max().unwrap_or(0),
        classes,
    })
}

/// Orders `...-c2` before `...-c10`.
fn label_key(label: &str) -> (&str, usize) {
    match label.rsplit_once("-c") {
        Some((head, k)) => (head, k.parse().unwrap_or(usize::MAX)),
        None => (label, usize::MAX),
    }
}

/// Summary of the whole layer m.
pub fn class_summary(catalog: &Catalog, m: usize) -> Result<SummaryStats> {
    let grid = (catalog.p as usize).pow(catalog.n as u32);
    if m == 0 || m > grid {
        return Err(Error::invalid(format!("m = {m} outside 1..={grid}")));
    }
    let stats = summarize(catalog.p, catalog.n, m, catalog.layer(m))?;
    if stats.total_sets == 0 {
        return Err(Error::NotFound(format!(
            "layer m={m} is not in the catalog"
        )));
    }
    let expected = binomial(grid as u64, m as u64);
    if stats.total_sets as u128 != expected {
        return Err(Error::Inconsistency(format!(
            "layer m={m} has {} records, expected {expected}",
            stats.total_sets
        )));
    }
    Ok(stats)
}

/// Result of adding one point to a design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIf {
    pub dataset: String,
    pub add_point: String,
    pub record: CatalogRecord,
    /// Monomials in some new basis but in no basis of the original design.
    pub new_monomials: Vec<String>,
}

/// The record of S ∪ {x} and the monomials it newly identifies.
pub fn whatif_add_point(catalog: &Catalog, s: &DataSet, x: &Point) -> Result<WhatIf> {
    let grown = s.with_point(x.clone())?;
    let before = catalog
        .get(s)
        .ok_or_else(|| Error::NotFound(format!("data set {} is not in the catalog", s.encode())))?;
    let after = catalog.get(&grown).ok_or_else(|| {
        Error::NotFound(format!("data set {} is not in the catalog", grown.encode()))
    })?;
    let old = before.basis_monomials()?;
    let mut new: Vec<Monomial> = after
        .basis_monomials()?
        .into_iter()
        .filter(|m| !old.contains(m))
        .collect();
    sort_canonical(&mut new);
    Ok(WhatIf {
        dataset: s.encode(),
        add_point: x.encode(s.p()),
        record: after.clone(),
        new_monomials: new.iter().map(|m| m.to_string()).collect(),
    })
}
