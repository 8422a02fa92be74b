//! Linear shifts: coordinatewise affine maps x_k ↦ a_k x_k + b_k with a_k ≠ 0,
//! acting on data sets, and the equivalence classes (orbits) they induce.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::dataset::{DataSet, MASK_BITS};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Point};
use crate::radical::{set_distance, RadicalSum};

/// Upper limit on C(p^n, m) accepted by [`partition_all`].
pub const MAX_LAYER_SETS: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftMap {
    a: Vec<u8>,
    b: Vec<u8>,
}

impl ShiftMap {
    pub fn new(a: Vec<u8>, b: Vec<u8>, field: &FieldSpec) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::invalid("shift needs one (a, b) pair per coordinate"));
        }
        let p = field.p();
        if a.iter().any(|&x| x == 0 || x as u32 >= p) {
            return Err(Error::invalid("scale factors must be nonzero residues"));
        }
        if b.iter().any(|&x| x as u32 >= p) {
            return Err(Error::invalid("offsets must be residues"));
        }
        Ok(ShiftMap { a, b })
    }

    pub fn identity(n: usize) -> Self {
        ShiftMap {
            a: vec![1; n],
            b: vec![0; n],
        }
    }

    pub fn a(&self) -> &[u8] {
        &self.a
    }

    pub fn b(&self) -> &[u8] {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// φ⁻¹ = (a⁻¹, −a⁻¹b) coordinatewise.
    pub fn inverse(&self, field: &FieldSpec) -> ShiftMap {
        let a_inv: Vec<u8> = self
            .a
            .iter()
            .map(|&a| field.inverse(a).expect("unit"))
            .collect();
        let b = a_inv
            .iter()
            .zip(&self.b)
            .map(|(&ai, &b)| field.neg(field.mul(ai, b)))
            .collect();
        ShiftMap { a: a_inv, b }
    }

    pub fn apply_point(&self, x: &Point, field: &FieldSpec) -> Point {
        Point::from_reduced(
            x.coords()
                .iter()
                .zip(self.a.iter().zip(&self.b))
                .map(|(&c, (&a, &b))| field.add(field.mul(a, c), b))
                .collect(),
        )
    }

    /// `a*x1+b,...` text form.
    pub fn encode(&self) -> String {
        self.a
            .iter()
            .zip(&self.b)
            .enumerate()
            .map(|(i, (a, b))| format!("{a}*x{}+{b}", i + 1))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse(text: &str, field: &FieldSpec) -> Result<Self> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, part) in text.split(',').enumerate() {
            let bad = || Error::parse(format!("bad shift component {part:?}"));
            let part = part.trim();
            let (lhs, rhs) = part.split_once('+').ok_or_else(bad)?;
            let (coef, var) = lhs.split_once('*').ok_or_else(bad)?;
            if var.trim() != format!("x{}", i + 1) {
                return Err(bad());
            }
            a.push(coef.trim().parse().map_err(|_| bad())?);
            b.push(rhs.trim().parse().map_err(|_| bad())?);
        }
        ShiftMap::new(a, b, field).map_err(|e| Error::parse(e.to_string()))
    }
}

impl fmt::Display for ShiftMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// All n-tuples over `values`, first coordinate most significant.
fn tuples(values: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut t = prefix.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Scale vectors a ∈ (Z_p^×)^n in lexicographic order (the shift-matrix columns).
pub fn scale_vectors(field: &FieldSpec, n: usize) -> Vec<Vec<u8>> {
    tuples(&field.units().collect::<Vec<_>>(), n)
}

/// Offset vectors b ∈ Z_p^n in lexicographic order (the shift-matrix rows).
pub fn offset_vectors(field: &FieldSpec, n: usize) -> Vec<Vec<u8>> {
    tuples(&field.residues().collect::<Vec<_>>(), n)
}

/// Every shift map on Z_p^n, ((p-1)p)^n in total.
pub fn all_shift_maps(field: &FieldSpec, n: usize) -> Vec<ShiftMap> {
    let offsets = offset_vectors(field, n);
    scale_vectors(field, n)
        .into_iter()
        .flat_map(|a| {
            offsets.iter().map(move |b| ShiftMap {
                a: a.clone(),
                b: b.clone(),
            })
        })
        .collect()
}

pub fn apply_shift(s: &DataSet, phi: &ShiftMap) -> Result<DataSet> {
    if phi.dim() != s.n() {
        return Err(Error::invalid(format!(
            "shift acts on {} coordinates, data set has {}",
            phi.dim(),
            s.n()
        )));
    }
    let field = s.field();
    let mut pts: Vec<Point> = s
        .points()
        .iter()
        .map(|x| phi.apply_point(x, field))
        .collect();
    pts.sort();
    Ok(DataSet::from_sorted_unchecked(pts, *field, s.n()))
}

/// Some φ with φ(S) = T, or `None` when S and T are not linear shifts of each other.
pub fn shift_between(s: &DataSet, t: &DataSet) -> Result<Option<ShiftMap>> {
    if s.field() != t.field() || s.n() != t.n() || s.m() != t.m() {
        return Err(Error::invalid(
            "data sets differ in modulus, dimension, or size",
        ));
    }
    for phi in all_shift_maps(s.field(), s.n()) {
        if apply_shift(s, &phi)? == *t {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// True iff S is downward closed under the coordinatewise order.
pub fn is_staircase(s: &DataSet) -> bool {
    // closure under single-step decrements implies full downward closure
    s.points().iter().all(|u| {
        (0..u.dim()).all(|i| {
            let c = u.coords()[i];
            if c == 0 {
                return true;
            }
            let mut v = u.coords().to_vec();
            v[i] -= 1;
            s.contains(&Point::from_reduced(v))
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Sorted members.
    pub members: Vec<DataSet>,
    pub representative: DataSet,
    /// Assigned by [`partition_all`]; `None` for a standalone orbit.
    pub label: Option<String>,
}

impl EquivalenceClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, s: &DataSet) -> bool {
        self.members.binary_search(s).is_ok()
    }
}

/// The orbit of S under every shift map.
pub fn enumerate_class(s: &DataSet) -> EquivalenceClass {
    let maps = all_shift_maps(s.field(), s.n());
    let mut members: Vec<DataSet> = maps
        .iter()
        .map(|phi| apply_shift(s, phi).expect("dimensions agree"))
        .collect();
    members.sort();
    members.dedup();
    let representative = representative_of(&members);
    EquivalenceClass {
        members,
        representative,
        label: None,
    }
}

/// Member of minimal set distance, ties broken by the point-list order.
pub fn find_representative(class: &EquivalenceClass) -> DataSet {
    representative_of(&class.members)
}

fn representative_of(members: &[DataSet]) -> DataSet {
    let mut best: Option<(&DataSet, RadicalSum)> = None;
    for s in members {
        let d = set_distance(s.points());
        let better = match &best {
            None => true,
            Some((b, bd)) => match d.cmp(bd) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => s < *b,
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some((s, d));
        }
    }
    best.expect("class is nonempty").0.clone()
}

/// Shift maps realised as permutations of grid indices, for bitmask orbits.
#[derive(Debug, Clone)]
pub struct ShiftGroup {
    field: FieldSpec,
    n: usize,
    perms: Vec<Vec<u8>>,
}

impl ShiftGroup {
    pub fn new(field: FieldSpec, n: usize) -> Result<Self> {
        let size = (field.p() as usize)
            .checked_pow(n as u32)
            .filter(|&s| s <= MASK_BITS)
            .ok_or_else(|| {
                Error::UnsupportedParameters(format!(
                    "grid Z_{}^{n} has more than {MASK_BITS} points",
                    field.p()
                ))
            })?;
        let points: Vec<Point> = (0..size)
            .map(|i| Point::from_grid_index(i, field.p(), n))
            .collect();
        let perms = all_shift_maps(&field, n)
            .iter()
            .map(|phi| {
                points
                    .iter()
                    .map(|x| phi.apply_point(x, &field).grid_index(field.p()) as u8)
                    .collect()
            })
            .collect();
        Ok(ShiftGroup { field, n, perms })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    fn apply(&self, perm: &[u8], mask: u128) -> u128 {
        let mut out = 0u128;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out |= 1u128 << perm[i];
            rest &= rest - 1;
        }
        out
    }

    /// Sorted, deduplicated orbit of a bitmask set.
    pub fn orbit(&self, mask: u128) -> Vec<u128> {
        let mut out: Vec<u128> = self.perms.iter().map(|p| self.apply(p, mask)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Validates (p, n, m) for exhaustive enumeration.
pub fn check_layer(p: u32, n: usize, m: usize) -> Result<FieldSpec> {
    let field = FieldSpec::new(p)?;
    if n == 0 {
        return Err(Error::UnsupportedParameters("n must be at least 1".into()));
    }
    let grid = (p as usize).checked_pow(n as u32).unwrap_or(usize::MAX);
    if grid > MASK_BITS {
        return Err(Error::UnsupportedParameters(format!(
            "Z_{p}^{n} has {grid} points; at most {MASK_BITS} are supported"
        )));
    }
    if m == 0 || m > grid {
        return Err(Error::UnsupportedParameters(format!(
            "m = {m} outside 1..={grid}"
        )));
    }
    let count = binomial(grid as u64, m as u64);
    if count > MAX_LAYER_SETS {
        return Err(Error::UnsupportedParameters(format!(
            "C({grid}, {m}) = {count} data sets exceeds the limit {MAX_LAYER_SETS}"
        )));
    }
    Ok(field)
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All m-subsets of a `size`-point grid as bitmasks, in lexicographic order
/// of their sorted index lists.
pub(crate) fn subsets(size: usize, m: usize) -> Vec<u128> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        out.push(idx.iter().fold(0u128, |acc, &i| acc | (1u128 << i)));
        // advance to the next combination
        let mut k = m;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < size - m + k {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..m {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `p{p}n{n}m{m}-c{k}`
pub fn class_label(p: u32, n: usize, m: usize, k: usize) -> String {
    format!("p{p}n{n}m{m}-c{k}")
}

/// Partitions every m-point subset of Z_p^n into linear-shift classes.
///
/// Classes are ordered by representative and labelled `p{p}n{n}m{m}-c{k}`
/// with 1-based `k`.
pub fn partition_all(p: u32, n: usize, m: usize) -> Result<Vec<EquivalenceClass>> {
    let field = check_layer(p, n, m)?;
    let group = ShiftGroup::new(field, n)?;
    let size = (p as usize).pow(n as u32);

    let mut seen: HashSet<u128> = HashSet::new();
    let mut orbits: Vec<Vec<u128>> = Vec::new();
    for seed in subsets(size, m) {
        if seen.contains(&seed) {
            continue;
        }
        let orbit = group.orbit(seed);
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }

    let mut classes: Vec<EquivalenceClass> = orbits
        .into_iter()
        .map(|orbit| {
            let mut members: Vec<DataSet> = orbit
                .into_iter()
                .map(|mask| DataSet::from_mask(mask, field, n))
                .collect();
            members.sort();
            let representative = representative_of(&members);
            EquivalenceClass {
                members,
                representative,
                label: None,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.cmp(&b.representative));
    for (k, class) in classes.iter_mut().enumerate() {
        class.label = Some(class_label(p, n, m, k + 1));
    }
    Ok(classes)
}

/// Map from data set to the index of its class in `classes`.
pub fn class_index(classes: &[EquivalenceClass]) -> HashMap<DataSet, usize> {
    classes
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.members.iter().map(move |s| (s.clone(), i)))
        .collect()
}

/// The array of all shifted copies of S: rows indexed by offsets b, columns by
/// scale vectors a, both in lexicographic order.
#[derive(Debug, Clone)]
pub struct ShiftMatrix {
    pub source: DataSet,
    pub offsets: Vec<Vec<u8>>,
    pub scales: Vec<Vec<u8>>,
    /// `entries[row][col]`
    pub entries: Vec<Vec<DataSet>>,
}

impl ShiftMatrix {
    pub fn entry(&self, b: &[u8], a: &[u8]) -> Option<&DataSet> {
        let r = self.offsets.iter().position(|x| x == b)?;
        let c = self.scales.iter().position(|x| x == a)?;
        Some(&self.entries[r][c])
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = &DataSet> {
        self.entries.iter().map(move |row| &row[c])
    }

    pub fn num_rows(&self) -> usize {
        self.offsets.len()
    }

    pub fn num_cols(&self) -> usize {
        self.scales.len()
    }

    /// Any two columns hold either the same collection of sets or disjoint ones.
    pub fn columns_identical_or_disjoint(&self) -> bool {
        let sets: Vec<HashSet<&DataSet>> = (0..self.num_cols())
            .map(|c| self.column(c).collect())
            .collect();
        for i in 0..sets.len() {
            for j in i + 1..sets.len() {
                let common = sets[i].intersection(&sets[j]).count();
                if common != 0 && !(sets[i] == sets[j]) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn shift_matrix(s: &DataSet) -> ShiftMatrix {
    let field = *s.field();
    let offsets = offset_vectors(&field, s.n());
    let scales = scale_vectors(&field, s.n());
    let entries = offsets
        .iter()
        .map(|b| {
            scales
                .iter()
                .map(|a| {
                    let phi = ShiftMap {
                        a: a.clone(),
                        b: b.clone(),
                    };
                    apply_shift(s, &phi).expect("dimensions agree")
                })
                .collect()
        })
        .collect();
    ShiftMatrix {
        source: s.clone(),
        offsets,
        scales,
        entries,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnStat {
    pub scale: Vec<u8>,
    pub distinct: usize,
    pub repetition: usize,
    /// distinct = p^r
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnStats {
    pub columns: Vec<ColumnStat>,
    /// min r over all columns
    pub s: u32,
}

impl ColumnStats {
    pub fn exponents(&self) -> Vec<u32> {
        self.columns.iter().map(|c| c.r).collect()
    }
}

/// Per-column distinct counts, which must be powers of p with every distinct
/// set repeated equally often.
pub fn column_stats(matrix: &ShiftMatrix) -> Result<ColumnStats> {
    let p = matrix.source.p() as usize;
    let rows = matrix.num_rows();
    let mut columns = Vec::with_capacity(matrix.num_cols());
    for c in 0..matrix.num_cols() {
        let mut counts: BTreeMap<&DataSet, usize> = BTreeMap::new();
        for s in matrix.column(c) {
            *counts.entry(s).or_default() += 1;
        }
        let distinct = counts.len();
        let r = exact_log(distinct, p).ok_or_else(|| {
            Error::Inconsistency(format!(
                "column a={:?} of the shift matrix of {} has {distinct} distinct sets, not a power of {p}",
                matrix.scales[c], matrix.source
            ))
        })?;
        let repetition = rows / distinct;
        if counts.values().any(|&k| k != repetition) || repetition * distinct != rows {
            return Err(Error::Inconsistency(format!(
                "column a={:?} of the shift matrix of {} repeats its sets unequally",
                matrix.scales[c], matrix.source
            )));
        }
        columns.push(ColumnStat {
            scale: matrix.scales[c].clone(),
            distinct,
            repetition,
            r,
        });
    }
    let s = columns.iter().map(|c| c.r).min().unwrap_or(0);
    Ok(ColumnStats { columns, s })
}

fn exact_log(mut x: usize, base: usize) -> Option<u32> {
    let mut k = 0;
    while x > 1 {
        if !x.is_multiple_of(base) {
            return None;
        }
        x /= base;
        k += 1;
    }
    (x == 1).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(text: &str, p: u32, n: usize) -> DataSet {
        DataSet::parse(text, FieldSpec::new(p).unwrap(), n).unwrap()
    }

    fn shift(a: Vec<u8>, b: Vec<u8>, p: u32) -> ShiftMap {
        ShiftMap::new(a, b, &FieldSpec::new(p).unwrap()).unwrap()
    }

    #[test]
    fn apply_shift_examples() {
        let s = ds("01,10", 3, 2);
        let out = apply_shift(&s, &shift(vec![1, 2], vec![0, 2], 3)).unwrap();
        assert_eq!(out, ds("01,12", 3, 2));

        let s2 = ds("00,01", 2, 2);
        let out = apply_shift(&s2, &shift(vec![1, 1], vec![1, 0], 2)).unwrap();
        assert_eq!(out, ds("10,11", 2, 2));

        assert_eq!(apply_shift(&s, &ShiftMap::identity(2)).unwrap(), s);
        assert!(apply_shift(&s, &ShiftMap::identity(3)).is_err());
    }

    #[test]
    fn shift_map_validation_and_text() {
        let f3 = FieldSpec::new(3).unwrap();
        assert!(ShiftMap::new(vec![0, 1], vec![0, 0], &f3).is_err());
        assert!(ShiftMap::new(vec![1, 1], vec![0, 3], &f3).is_err());
        let phi = shift(vec![1, 2], vec![0, 2], 3);
        assert_eq!(phi.encode(), "1*x1+0,2*x2+2");
        assert_eq!(ShiftMap::parse(&phi.encode(), &f3).unwrap(), phi);
        assert!(ShiftMap::parse("1*x2+0", &f3).is_err());
    }

    #[test]
    fn shift_between_examples() {
        let s = ds("00,01", 2, 2);
        let t = ds("10,11", 2, 2);
        let phi = shift_between(&s, &t).unwrap().unwrap();
        assert_eq!(phi, shift(vec![1, 1], vec![1, 0], 2));

        let col = ds("00,01,02", 3, 2);
        let row = ds("00,10,20", 3, 2);
        assert_eq!(shift_between(&col, &row).unwrap(), None);

        assert_eq!(shift_between(&s, &s).unwrap(), Some(ShiftMap::identity(2)));
        assert!(shift_between(&s, &ds("00", 2, 2)).is_err());
    }

    #[test]
    fn enumerate_class_examples() {
        let c = enumerate_class(&ds("01,10", 3, 2));
        assert_eq!(c.size(), 18);

        let full = DataSet::full_grid(FieldSpec::new(3).unwrap(), 2);
        let c = enumerate_class(&full);
        assert_eq!(c.members, vec![full.clone()]);
        assert_eq!(c.representative, full);

        // p = 2 forces a = 1: the orbit is the 4 translations
        let c = enumerate_class(&ds("00,01", 2, 2));
        assert_eq!(c.members, vec![ds("00,01", 2, 2), ds("10,11", 2, 2)]);
    }

    #[test]
    fn partition_examples() {
        let classes = partition_all(3, 2, 4).unwrap();
        assert_eq!(classes.len(), 7);
        assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), 126);

        let classes = partition_all(2, 3, 5).unwrap();
        assert_eq!(classes.len(), 7);
        assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), 56);

        // the 36 two-point sets of Z_3^2: 9 vertical pairs, 9 horizontal
        // pairs, and the 18 pairs differing in both coordinates
        let classes = partition_all(3, 2, 2).unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.size()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![9, 9, 18]);
        let diag = enumerate_class(&ds("01,10", 3, 2));
        assert!(classes.iter().any(|c| c.members == diag.members));
    }

    #[test]
    fn partition_labels_are_deterministic() {
        let a = partition_all(3, 2, 3).unwrap();
        let b = partition_all(3, 2, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].label.as_deref(), Some("p3n2m3-c1"));
        for w in a.windows(2) {
            assert!(w[0].representative < w[1].representative);
        }
    }

    #[test]
    fn partition_rejects_bad_parameters() {
        assert!(matches!(
            partition_all(2, 3, 0),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(matches!(
            partition_all(2, 3, 9),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(matches!(
            partition_all(2, 8, 3),
            Err(Error::UnsupportedParameters(_))
        ));
        assert!(partition_all(4, 2, 3).is_err());
    }

    #[test]
    fn staircase_examples() {
        assert!(is_staircase(&ds("00,01,02", 3, 2)));
        assert!(!is_staircase(&ds("000,001,010,110", 2, 3)));
        assert!(is_staircase(&ds("000", 2, 3)));
        assert!(!is_staircase(&ds("01", 2, 2)));
    }

    #[test]
    fn representative_examples() {
        let s = ds("00,01,02", 3, 2);
        assert_eq!(find_representative(&enumerate_class(&s)), s);

        let s = ds("000,001,010,110", 2, 3);
        let t = ds("000,010,011,100", 2, 3);
        let class = enumerate_class(&s);
        assert!(class.contains(&t));
        assert_eq!(find_representative(&class), s);

        let full = DataSet::full_grid(FieldSpec::new(2).unwrap(), 3);
        assert_eq!(find_representative(&enumerate_class(&full)), full);
    }

    #[test]
    fn shift_matrix_examples() {
        let s = ds("01,10", 3, 2);
        let m = shift_matrix(&s);
        assert_eq!((m.num_rows(), m.num_cols()), (9, 4));
        assert_eq!(m.entry(&[0, 2], &[1, 2]).unwrap(), &ds("01,12", 3, 2));
        assert_eq!(m.entry(&[0, 0], &[1, 1]).unwrap(), &s);
        let stats = column_stats(&m).unwrap();
        assert_eq!(stats.exponents(), vec![2, 2, 2, 2]);
        assert_eq!(stats.s, 2);
        assert!(stats
            .columns
            .iter()
            .all(|c| c.distinct == 9 && c.repetition == 1));
        assert!(m.columns_identical_or_disjoint());
    }

    #[test]
    fn column_stats_examples() {
        let m = shift_matrix(&ds("00,01", 2, 2));
        let stats = column_stats(&m).unwrap();
        assert_eq!(stats.columns.len(), 1);
        assert_eq!(stats.columns[0].distinct, 2);
        assert_eq!(stats.columns[0].repetition, 2);
        assert_eq!(stats.columns[0].r, 1);

        let full = DataSet::full_grid(FieldSpec::new(3).unwrap(), 2);
        let stats = column_stats(&shift_matrix(&full)).unwrap();
        assert!(stats.exponents().iter().all(|&r| r == 0));
    }

    #[test]
    fn partition_agrees_with_pointwise_orbits() {
        // Orbits from apply_shift on point lists, independent of the bitmask group.
        for (p, n) in [(2, 2), (2, 3), (3, 2)] {
            let field = FieldSpec::new(p).unwrap();
            let grid = (p as usize).pow(n as u32);
            for m in 1..=grid {
                let fast: std::collections::BTreeSet<Vec<DataSet>> = partition_all(p, n, m)
                    .unwrap()
                    .into_iter()
                    .map(|c| c.members)
                    .collect();
                let slow: std::collections::BTreeSet<Vec<DataSet>> = subsets(grid, m)
                    .into_iter()
                    .map(|mask| enumerate_class(&DataSet::from_mask(mask, field, n)).members)
                    .collect();
                assert_eq!(fast, slow, "p={p} n={n} m={m}");
            }
        }
    }

    #[test]
    fn subsets_are_lexicographic() {
        let all = subsets(5, 2);
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], 0b11);
        assert_eq!(*all.last().unwrap(), 0b11000);
        assert_eq!(binomial(16, 8), 12870);
    }

    fn arb_case() -> impl Strategy<Value = (DataSet, ShiftMap)> {
        (prop_oneof![Just(2u32), Just(3), Just(5)], 1usize..4).prop_flat_map(|(p, n)| {
            let grid = (p as usize).pow(n as u32);
            let f = FieldSpec::new(p).unwrap();
            (
                proptest::collection::btree_set(0..grid, 1..=grid.min(6)),
                proptest::collection::vec((1..p as u8, 0..p as u8), n),
            )
                .prop_map(move |(idx, ab)| {
                    let pts = idx
                        .into_iter()
                        .map(|i| Point::from_grid_index(i, p, n))
                        .collect();
                    let s = DataSet::new(pts, f).unwrap();
                    let (a, b): (Vec<u8>, Vec<u8>) = ab.into_iter().unzip();
                    (s, ShiftMap::new(a, b, &f).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn inverse_shift_undoes_shift((s, phi) in arb_case()) {
            let t = apply_shift(&s, &phi).unwrap();
            prop_assert_eq!(t.m(), s.m());
            let back = apply_shift(&t, &phi.inverse(s.field())).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn shift_between_finds_a_witness((s, phi) in arb_case()) {
            let t = apply_shift(&s, &phi).unwrap();
            let found = shift_between(&s, &t).unwrap().unwrap();
            prop_assert_eq!(apply_shift(&s, &found).unwrap(), t);
        }
    }
}
