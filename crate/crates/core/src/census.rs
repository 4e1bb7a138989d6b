//! Census of monomial orders up to conjugation.
//!
//! Candidates are all levels with zero first row, zero diagonal and the
//! remaining `(n-1)^2` entries in `[0, bound]`. Orders among them are
//! grouped by canonical form and one representative per class is
//! classified.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_with, ClassificationReport};
use crate::error::{Error, Result};
use crate::level::{canonical_form_with, normalized_permutation_conjugates, LevelMatrix};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Filter {
    Gorenstein,
    Eichler,
    Hereditary,
    Bass,
    UpperTriangular,
}

impl Filter {
    pub const ALL: [Filter; 5] = [
        Filter::Gorenstein,
        Filter::Eichler,
        Filter::Hereditary,
        Filter::Bass,
        Filter::UpperTriangular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Filter::Gorenstein => "gorenstein",
            Filter::Eichler => "eichler",
            Filter::Hereditary => "hereditary",
            Filter::Bass => "bass",
            Filter::UpperTriangular => "upper_triangular",
        }
    }

    fn accepts(self, class: &CensusClass) -> bool {
        let r = &class.report;
        match self {
            Filter::Gorenstein => r.is_gorenstein == Some(true),
            Filter::Eichler => r.eichler.is_some(),
            Filter::Hereditary => r.is_hereditary == Some(true),
            Filter::Bass => r.is_bass == Some(true),
            Filter::UpperTriangular => class.has_triangular_conjugate,
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Filter::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown filter `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusQuery {
    pub n: usize,
    pub bound: i64,
    /// A class is kept when it passes every filter.
    pub filters: Vec<Filter>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusClass {
    pub canonical: LevelMatrix,
    pub report: ClassificationReport,
    /// Number of enumerated candidates falling into this class.
    pub count: u64,
    /// Some normalized permutation conjugate is upper triangular.
    pub has_triangular_conjugate: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTotals {
    pub classes: usize,
    pub gorenstein: usize,
    pub eichler: usize,
    pub hereditary: usize,
    pub bass: usize,
    pub upper_triangular: usize,
}

impl CensusTotals {
    pub fn get(&self, filter: Filter) -> usize {
        match filter {
            Filter::Gorenstein => self.gorenstein,
            Filter::Eichler => self.eichler,
            Filter::Hereditary => self.hereditary,
            Filter::Bass => self.bass,
            Filter::UpperTriangular => self.upper_triangular,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub query: CensusQuery,
    pub candidates: u64,
    pub orders: u64,
    /// Kept classes, sorted by canonical level.
    pub classes: Vec<CensusClass>,
    /// Counts over the kept classes.
    pub totals: CensusTotals,
}

/// Size of the raw candidate space, `(bound + 1)^((n-1)^2)`, saturating.
pub fn candidate_count(n: usize, bound: i64) -> u128 {
    let base = (bound.max(0) as u128) + 1;
    let free = (n.saturating_sub(1) * n.saturating_sub(1)) as u32;
    base.checked_pow(free).unwrap_or(u128::MAX)
}

pub fn census(q: &CensusQuery, limits: &Limits) -> Result<CensusResult> {
    if q.n == 0 {
        return Err(Error::Empty);
    }
    if q.n > limits.search_cap {
        return Err(Error::SearchTooLarge {
            n: q.n,
            cap: limits.search_cap,
        });
    }
    let raw = candidate_count(q.n, q.bound);
    if q.bound < 0 || raw > limits.budget as u128 {
        return Err(Error::BudgetExceeded {
            bound: raw,
            budget: limits.budget,
        });
    }
    let raw = raw as u64;
    let n = q.n;
    let base = q.bound + 1;
    let cap = limits.search_cap;

    let grouped: BTreeMap<LevelMatrix, u64> = (0..raw)
        .into_par_iter()
        .filter_map(|idx| {
            let m = decode(n, base, idx);
            m.is_order().then_some(m)
        })
        .map(|m| canonical_form_with(&m, cap).map(|c| c.level))
        .try_fold(BTreeMap::new, |mut acc, c| {
            *acc.entry(c?).or_insert(0u64) += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            Ok(a)
        })?;
    let orders = grouped.values().sum();

    let classes: Vec<CensusClass> = grouped
        .into_par_iter()
        .map(|(canonical, count)| {
            let report = classify_with(&canonical, cap)?;
            let has_triangular_conjugate = normalized_permutation_conjugates(&canonical, cap)?
                .iter()
                .any(|(l, _)| l.is_upper_triangular());
            Ok(CensusClass {
                canonical,
                report,
                count,
                has_triangular_conjugate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let classes: Vec<CensusClass> = classes
        .into_iter()
        .filter(|c| q.filters.iter().all(|f| f.accepts(c)))
        .collect();

    let mut totals = CensusTotals {
        classes: classes.len(),
        ..CensusTotals::default()
    };
    for c in &classes {
        totals.gorenstein += Filter::Gorenstein.accepts(c) as usize;
        totals.eichler += Filter::Eichler.accepts(c) as usize;
        totals.hereditary += Filter::Hereditary.accepts(c) as usize;
        totals.bass += Filter::Bass.accepts(c) as usize;
        totals.upper_triangular += Filter::UpperTriangular.accepts(c) as usize;
    }

    Ok(CensusResult {
        query: q.clone(),
        candidates: raw,
        orders,
        classes,
        totals,
    })
}

/// Candidate number `idx`: rows `1..n` off the diagonal, read as base-`base`
/// digits with the last free entry least significant.
fn decode(n: usize, base: i64, mut idx: u64) -> LevelMatrix {
    let mut entries = vec![0i64; n * n];
    for i in (1..n).rev() {
        for j in (0..n).rev() {
            if i == j {
                continue;
            }
            entries[i * n + j] = (idx % base as u64) as i64;
            idx /= base as u64;
        }
    }
    LevelMatrix::new(n, entries).expect("square")
}

/// Every candidate level of the census space, in enumeration order.
pub fn candidates(n: usize, bound: i64) -> impl Iterator<Item = LevelMatrix> {
    let raw = candidate_count(n, bound) as u64;
    (0..raw).map(move |idx| decode(n, bound + 1, idx))
}

/// `constant + a*coef_a + b*coef_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearExpr {
    pub constant: i64,
    pub coef_a: i64,
    pub coef_b: i64,
}

impl LinearExpr {
    pub fn eval(&self, a: i64, b: i64) -> i64 {
        self.constant + self.coef_a * a + self.coef_b * b
    }
}

impl FromStr for LinearExpr {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let mut e = LinearExpr {
            constant: 0,
            coef_a: 0,
            coef_b: 0,
        };
        for term in s.split('+') {
            let term = term.trim();
            let (coef, var) = match term.strip_suffix(['a', 'b']) {
                Some(c) => (c, term.chars().last()),
                None => (term, None),
            };
            let coef: i64 = match (coef, var) {
                ("", Some(_)) => 1,
                (c, _) => c.parse().map_err(|_| format!("bad term `{term}`"))?,
            };
            match var {
                Some('a') => e.coef_a += coef,
                Some('b') => e.coef_b += coef,
                _ => e.constant += coef,
            }
        }
        Ok(e)
    }
}

/// A level pattern whose entries are linear in two positive parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub name: String,
    pub n: usize,
    pub entries: Vec<LinearExpr>,
}

impl Family {
    pub fn uses_a(&self) -> bool {
        self.entries.iter().any(|e| e.coef_a != 0)
    }

    pub fn uses_b(&self) -> bool {
        self.entries.iter().any(|e| e.coef_b != 0)
    }

    pub fn instantiate(&self, a: i64, b: i64) -> LevelMatrix {
        LevelMatrix::new(self.n, self.entries.iter().map(|e| e.eval(a, b)).collect())
            .expect("family entries are square")
    }

    /// Parameter assignments with every entry in `[0, bound]`, each free
    /// parameter ranging over positive integers.
    pub fn instantiations_within(&self, bound: i64) -> Vec<FamilyMatch> {
        let a_range: Vec<Option<i64>> = if self.uses_a() {
            (1..=bound.max(0)).map(Some).collect()
        } else {
            vec![None]
        };
        let b_range: Vec<Option<i64>> = if self.uses_b() {
            (1..=bound.max(0)).map(Some).collect()
        } else {
            vec![None]
        };
        let mut out = Vec::new();
        for &a in &a_range {
            for &b in &b_range {
                let level = self.instantiate(a.unwrap_or(0), b.unwrap_or(0));
                if level.max_entry() <= bound && level.min_entry() >= 0 {
                    out.push(FamilyMatch { a, b });
                }
            }
        }
        out
    }
}

pub const GORENSTEIN_N4_FAMILIES: &str = include_str!("../fixtures/gorenstein_n4_families.txt");

pub fn parse_families(src: &str) -> Result<Vec<Family>> {
    let mut families: Vec<Family> = Vec::new();
    let mut rows_left = 0usize;
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |column: usize, message: String| Error::Parse {
            line: line_no,
            column,
            message,
        };
        if let Some(name) = line.strip_prefix("family ") {
            if rows_left != 0 {
                return Err(err(1, "previous family is incomplete".into()));
            }
            families.push(Family {
                name: name.trim().to_string(),
                n: 0,
                entries: Vec::new(),
            });
            rows_left = usize::MAX;
            continue;
        }
        let fam = families
            .last_mut()
            .ok_or_else(|| err(1, "row before any family header".into()))?;
        let row: Vec<LinearExpr> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|m| err(1, m)))
            .collect::<Result<_>>()?;
        if rows_left == usize::MAX {
            fam.n = row.len();
            rows_left = row.len();
        }
        if row.len() != fam.n {
            return Err(err(1, format!("expected {} entries", fam.n)));
        }
        fam.entries.extend(row);
        rows_left -= 1;
    }
    if rows_left != 0 {
        return Err(Error::Parse {
            line: src.lines().count(),
            column: 1,
            message: "last family is incomplete".into(),
        });
    }
    Ok(families)
}

/// The seven Gorenstein patterns of size 4 shipped with the crate.
pub fn gorenstein_n4_families() -> Vec<Family> {
    parse_families(GORENSTEIN_N4_FAMILIES).expect("bundled fixture parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub a: Option<i64>,
    pub b: Option<i64>,
}

impl fmt::Display for FamilyMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (None, None) => write!(f, "-"),
            (Some(a), None) => write!(f, "a={a}"),
            (None, Some(b)) => write!(f, "b={b}"),
            (Some(a), Some(b)) => write!(f, "a={a}, b={b}"),
        }
    }
}

/// Finds parameters making `family` conjugate to `level`.
///
/// Parameters are searched up to the largest `m[i][j] + m[j][i]`, a
/// conjugation invariant that bounds every parameter of these patterns.
pub fn match_family(level: &LevelMatrix, family: &Family) -> Option<FamilyMatch> {
    if level.n() != family.n || !level.is_order() {
        return None;
    }
    let target = canonical_form_with(level, family.n.max(1)).ok()?.level;
    let n = level.n();
    let reach = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| level.get(i, j) + level.get(j, i))
        .max()
        .unwrap_or(0)
        .max(1);
    let a_range: Vec<Option<i64>> = if family.uses_a() {
        (1..=reach).map(Some).collect()
    } else {
        vec![None]
    };
    let b_range: Vec<Option<i64>> = if family.uses_b() {
        (1..=reach).map(Some).collect()
    } else {
        vec![None]
    };
    for &a in &a_range {
        for &b in &b_range {
            let inst = family.instantiate(a.unwrap_or(0), b.unwrap_or(0));
            if !inst.is_order() {
                continue;
            }
            match canonical_form_with(&inst, n) {
                Ok(c) if c.level == target => return Some(FamilyMatch { a, b }),
                _ => {}
            }
        }
    }
    None
}
