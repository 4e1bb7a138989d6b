//! Level matrices and the extended Weyl group action on them.
//!
//! A level `m` is an `n x n` integer matrix; the standard monomial module of
//! level `m` has `(i, j)` entry ideal `P^{m[i][j]}`. It is an order exactly
//! when the diagonal vanishes and `m[i][k] <= m[i][j] + m[j][k]` for all
//! triples. Indices are 0-based throughout the library.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square integer matrix of valuation exponents.
///
/// Construction only checks the shape; the order condition is a query
/// ([`LevelMatrix::is_order`]) so intermediate levels stay representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "LevelRepr", into = "LevelRepr")]
pub struct LevelMatrix {
    n: usize,
    entries: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct LevelRepr {
    n: usize,
    m: Vec<Vec<i64>>,
}

impl TryFrom<LevelRepr> for LevelMatrix {
    type Error = Error;

    fn try_from(repr: LevelRepr) -> Result<Self> {
        if repr.m.len() != repr.n {
            return Err(Error::Dimension {
                expected: repr.n,
                found: repr.m.len(),
            });
        }
        LevelMatrix::from_rows(repr.m)
    }
}

impl From<LevelMatrix> for LevelRepr {
    fn from(level: LevelMatrix) -> Self {
        LevelRepr {
            n: level.n,
            m: level.to_rows(),
        }
    }
}

/// First failure of the order condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderViolation {
    /// `m[i][i] != 0`.
    Diagonal { i: usize },
    /// `m[i][k] > m[i][j] + m[j][k]`.
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OrderViolation::Diagonal { i } => {
                write!(f, "diagonal entry ({},{}) is nonzero", i + 1, i + 1)
            }
            OrderViolation::Triangle { i, j, k } => write!(
                f,
                "m{}{} > m{}{} + m{}{} at (i,j,k) = ({},{},{})",
                i + 1,
                k + 1,
                i + 1,
                j + 1,
                j + 1,
                k + 1,
                i + 1,
                j + 1,
                k + 1
            ),
        }
    }
}

impl LevelMatrix {
    /// Builds a level from row-major entries.
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if entries.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(LevelMatrix { n, entries })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: impl IntoIterator<Item = R>) -> Result<Self> {
        let rows: Vec<Vec<i64>> = rows.into_iter().map(|r| r.as_ref().to_vec()).collect();
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (row, values) in rows.into_iter().enumerate() {
            if values.len() != n {
                return Err(Error::Ragged {
                    row,
                    expected: n,
                    found: values.len(),
                });
            }
            entries.extend(values);
        }
        Ok(LevelMatrix { n, entries })
    }

    /// The level of the maximal order `Mat_n(O_D)`.
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "level matrices have n >= 1");
        LevelMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Applies `f(i, j, m[i][j])` entrywise.
    pub fn map(&self, mut f: impl FnMut(usize, usize, i64) -> i64) -> LevelMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|idx| f(idx / n, idx % n, self.entries[idx]))
            .collect();
        LevelMatrix { n, entries }
    }

    pub fn max_entry(&self) -> i64 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn min_entry(&self) -> i64 {
        self.entries.iter().copied().min().unwrap_or(0)
    }

    /// First violation of the order condition, scanning diagonals first and
    /// then triples `(i, j, k)` in lexicographic order.
    pub fn order_violation(&self) -> Option<OrderViolation> {
        let n = self.n;
        if let Some(i) = (0..n).find(|&i| self.get(i, i) != 0) {
            return Some(OrderViolation::Diagonal { i });
        }
        for i in 0..n {
            for j in 0..n {
                let m_ij = self.get(i, j);
                for k in 0..n {
                    if self.get(i, k) > m_ij + self.get(j, k) {
                        return Some(OrderViolation::Triangle { i, j, k });
                    }
                }
            }
        }
        None
    }

    pub fn is_order(&self) -> bool {
        self.order_violation().is_none()
    }

    pub(crate) fn require_order(&self) -> Result<()> {
        match self.order_violation() {
            None => Ok(()),
            Some(v) => Err(Error::NotAnOrder(v)),
        }
    }

    /// `m[i][j] == 0` whenever `i <= j`.
    pub fn is_upper_triangular(&self) -> bool {
        self.first_above_diagonal_nonzero().is_none()
    }

    pub(crate) fn first_above_diagonal_nonzero(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != 0)
    }

    /// Zero first row and no negative entries.
    pub fn is_positive_type(&self) -> bool {
        self.row(0).iter().all(|&x| x == 0) && self.entries.iter().all(|&x| x >= 0)
    }

    pub fn has_zero_first_row(&self) -> bool {
        self.row(0).iter().all(|&x| x == 0)
    }

    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.entries
            .iter()
            .position(|&x| x < 0)
            .map(|idx| (idx / self.n, idx % self.n))
    }
}

impl Index<(usize, usize)> for LevelMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.entries[i * self.n + j]
    }
}

/// Row-major lexicographic order on levels of equal size; smaller sizes
/// sort first.
impl Ord for LevelMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for LevelMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LevelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{}]", row.iter().join(","))?;
        }
        write!(f, "]")
    }
}

/// Element `diag(pi^{a_1}, ..., pi^{a_n}) * sigma` of the extended Weyl group.
///
/// Conjugation acts by `m'[sigma(i)][sigma(j)] = m[i][j] + a_i - a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeylElement {
    shifts: Vec<i64>,
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn new(shifts: Vec<i64>, perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        if shifts.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: shifts.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::InvalidPermutation(n));
            }
            seen[p] = true;
        }
        Ok(WeylElement { shifts, perm })
    }

    pub fn identity(n: usize) -> Self {
        WeylElement {
            shifts: vec![0; n],
            perm: (0..n).collect(),
        }
    }

    pub fn permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        WeylElement::new(vec![0; n], perm)
    }

    pub fn translation(shifts: Vec<i64>) -> Self {
        let n = shifts.len();
        WeylElement {
            shifts,
            perm: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.iter().all(|&a| a == 0) && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The element acting as `self` after `first`:
    /// `conjugate(conjugate(m, first), self) == conjugate(m, self.after(first))`.
    pub fn after(&self, first: &WeylElement) -> Result<WeylElement> {
        if self.n() != first.n() {
            return Err(Error::Dimension {
                expected: first.n(),
                found: self.n(),
            });
        }
        let shifts = (0..first.n())
            .map(|i| first.shifts[i] + self.shifts[first.perm[i]])
            .collect();
        let perm = first.perm.iter().map(|&p| self.perm[p]).collect();
        Ok(WeylElement { shifts, perm })
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut shifts = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            shifts[self.perm[i]] = -self.shifts[i];
        }
        WeylElement { shifts, perm }
    }

    /// Transforms a lattice type along with the level: if `l` is a lattice
    /// for `m`, the result is a lattice for `conjugate(m, self)`.
    pub fn act_on_type(&self, l: &[i64]) -> Vec<i64> {
        let mut out = vec![0; l.len()];
        for (i, &li) in l.iter().enumerate() {
            out[self.perm[i]] = li + self.shifts[i];
        }
        out
    }
}

pub fn conjugate(m: &LevelMatrix, w: &WeylElement) -> Result<LevelMatrix> {
    let n = m.n();
    if w.n() != n {
        return Err(Error::Dimension {
            expected: n,
            found: w.n(),
        });
    }
    let mut entries = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[w.perm[i] * n + w.perm[j]] = m.get(i, j) + w.shifts[i] - w.shifts[j];
        }
    }
    Ok(LevelMatrix { n, entries })
}

/// A positive-type conjugate together with the element that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveTypeForm {
    pub level: LevelMatrix,
    pub applied: WeylElement,
}

/// Conjugates by the diagonal element with `a_j = m[0][j]`, which zeroes the
/// first row; the order condition then forces every entry to be `>= 0`.
pub fn normalize_positive(m: &LevelMatrix) -> Result<PositiveTypeForm> {
    m.require_order()?;
    let applied = WeylElement::translation(m.row(0).to_vec());
    let level = conjugate(m, &applied)?;
    debug_assert!(level.is_positive_type());
    Ok(PositiveTypeForm { level, applied })
}

pub const DEFAULT_SEARCH_CAP: usize = 8;

/// Lex-minimal positive-type conjugate and an element reaching it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub level: LevelMatrix,
    pub witness: WeylElement,
}

pub fn canonical_form(m: &LevelMatrix) -> Result<CanonicalForm> {
    canonical_form_with(m, DEFAULT_SEARCH_CAP)
}

/// Searches all `n!` permutations; each permuted level is normalized to zero
/// first row and the row-major smallest result wins. Ties keep the first
/// permutation in lexicographic order.
pub fn canonical_form_with(m: &LevelMatrix, search_cap: usize) -> Result<CanonicalForm> {
    m.require_order()?;
    let n = m.n();
    if n > search_cap {
        return Err(Error::SearchTooLarge { n, cap: search_cap });
    }
    let mut best: Option<(Vec<i64>, Vec<usize>)> = None;
    let mut buf = vec![0i64; n * n];
    let mut inv = vec![0usize; n];
    for perm in (0..n).permutations(n) {
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        // new[x][y] = m[inv x][inv y] + m[r][inv x] - m[r][inv y], r = inv 0
        let r = inv[0];
        for x in 0..n {
            let ix = inv[x];
            let base = m.get(r, ix);
            for y in 0..n {
                let iy = inv[y];
                buf[x * n + y] = m.get(ix, iy) + base - m.get(r, iy);
            }
        }
        let better = match &best {
            None => true,
            Some((b, _)) => buf < *b,
        };
        if better {
            best = Some((buf.clone(), perm));
        }
    }
    let (entries, perm) = best.expect("at least one permutation");
    let r = perm.iter().position(|&p| p == 0).expect("bijection");
    let shifts = m.row(r).to_vec();
    Ok(CanonicalForm {
        level: LevelMatrix { n, entries },
        witness: WeylElement { shifts, perm },
    })
}

/// Every permutation conjugate normalized to zero first row, in
/// lexicographic permutation order.
pub(crate) fn normalized_permutation_conjugates(
    m: &LevelMatrix,
    search_cap: usize,
) -> Result<Vec<(LevelMatrix, WeylElement)>> {
    m.require_order()?;
    let n = m.n();
    if n > search_cap {
        return Err(Error::SearchTooLarge { n, cap: search_cap });
    }
    (0..n)
        .permutations(n)
        .map(|perm| {
            let w = WeylElement::permutation(perm)?;
            let permuted = conjugate(m, &w)?;
            let pos = normalize_positive(&permuted)?;
            Ok((pos.level, pos.applied.after(&w)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(rows: &[&[i64]]) -> LevelMatrix {
        LevelMatrix::from_rows(rows.iter().copied()).unwrap()
    }

    #[test]
    fn order_examples() {
        assert!(lv(&[&[0, 0], &[1, 0]]).is_order());
        let bad = lv(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(
            bad.order_violation(),
            Some(OrderViolation::Triangle { i: 2, j: 1, k: 0 })
        );
        assert!(LevelMatrix::zero(5).is_order());
        assert_eq!(
            lv(&[&[0, 0], &[0, 1]]).order_violation(),
            Some(OrderViolation::Diagonal { i: 1 })
        );
    }

    #[test]
    fn n_one_is_an_order() {
        let one = lv(&[&[0]]);
        assert!(one.is_order());
        assert_eq!(canonical_form(&one).unwrap().level, one);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = LevelMatrix::from_rows(vec![vec![0, 0], vec![1]]).unwrap_err();
        assert!(matches!(err, Error::Ragged { row: 1, .. }));
        assert_eq!(
            LevelMatrix::from_rows(Vec::<Vec<i64>>::new()).unwrap_err(),
            Error::Empty
        );
    }

    #[test]
    fn conjugate_examples() {
        let m = lv(&[&[0, 0], &[1, 0]]);
        let swap = WeylElement::permutation(vec![1, 0]).unwrap();
        assert_eq!(conjugate(&m, &swap).unwrap(), lv(&[&[0, 1], &[0, 0]]));
        assert_eq!(conjugate(&m, &WeylElement::identity(2)).unwrap(), m);
        let shift = WeylElement::translation(vec![0, -1]);
        assert_eq!(conjugate(&m, &shift).unwrap(), lv(&[&[0, 1], &[0, 0]]));
        assert!(conjugate(&m, &WeylElement::identity(3)).is_err());
    }

    #[test]
    fn invalid_permutation_rejected() {
        assert!(WeylElement::permutation(vec![0, 0]).is_err());
        assert!(WeylElement::permutation(vec![0, 2]).is_err());
        assert!(WeylElement::new(vec![0], vec![0, 1]).is_err());
    }

    #[test]
    fn normalize_examples() {
        let p = normalize_positive(&lv(&[&[0, 3], &[-1, 0]])).unwrap();
        assert_eq!(p.level, lv(&[&[0, 0], &[2, 0]]));
        assert_eq!(p.applied.shifts(), &[0, 3]);

        let m = lv(&[&[0, 0], &[1, 0]]);
        let p = normalize_positive(&m).unwrap();
        assert_eq!(p.level, m);
        assert!(p.applied.is_identity());

        let p = normalize_positive(&lv(&[&[0, 1, 1], &[-1, 0, 0], &[-1, 0, 0]])).unwrap();
        assert_eq!(p.level, LevelMatrix::zero(3));

        let bad = lv(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
        assert!(matches!(
            normalize_positive(&bad),
            Err(Error::NotAnOrder(_))
        ));
    }

    #[test]
    fn canonical_examples() {
        let c = canonical_form(&lv(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(c.level, lv(&[&[0, 0], &[1, 0]]));
        assert_eq!(
            conjugate(&lv(&[&[0, 1], &[0, 0]]), &c.witness).unwrap(),
            c.level
        );

        let z = canonical_form(&LevelMatrix::zero(3)).unwrap();
        assert_eq!(z.level, LevelMatrix::zero(3));
        assert!(z.witness.is_identity());

        // Eichler (1,2,1), a = 2: the rotation (2,1,1) is lex-smaller.
        let e = lv(&[&[0, 0, 0, 0], &[2, 0, 0, 0], &[2, 0, 0, 0], &[2, 2, 2, 0]]);
        let c = canonical_form(&e).unwrap();
        assert_eq!(
            c.level,
            lv(&[&[0, 0, 0, 0], &[0, 0, 0, 0], &[2, 2, 0, 0], &[2, 2, 2, 0]])
        );
        assert_eq!(conjugate(&e, &c.witness).unwrap(), c.level);
    }

    #[test]
    fn canonical_respects_cap() {
        let m = LevelMatrix::zero(4);
        assert_eq!(
            canonical_form_with(&m, 3).unwrap_err(),
            Error::SearchTooLarge { n: 4, cap: 3 }
        );
    }

    #[test]
    fn canonical_matches_slow_search() {
        let e = lv(&[&[0, 0, 0, 0], &[1, 0, 1, 0], &[1, 1, 0, 0], &[2, 1, 1, 0]]);
        let slow = normalized_permutation_conjugates(&e, 8)
            .unwrap()
            .into_iter()
            .min_by(|a, b| a.0.cmp(&b.0))
            .unwrap();
        assert_eq!(canonical_form(&e).unwrap().level, slow.0);
    }

    #[test]
    fn upper_triangular_examples() {
        assert!(lv(&[&[0, 0], &[3, 0]]).is_upper_triangular());
        assert!(
            !lv(&[&[0, 0, 0, 0], &[1, 0, 1, 0], &[1, 1, 0, 0], &[2, 1, 1, 0]])
                .is_upper_triangular()
        );
        assert!(LevelMatrix::zero(4).is_upper_triangular());
    }

    #[test]
    fn inverse_undoes_action() {
        let m = lv(&[&[0, 2, 1], &[0, 0, 0], &[1, 1, 0]]);
        let w = WeylElement::new(vec![3, -1, 2], vec![2, 0, 1]).unwrap();
        let back = conjugate(&conjugate(&m, &w).unwrap(), &w.inverse()).unwrap();
        assert_eq!(back, m);
        assert!(w.inverse().after(&w).unwrap().is_identity());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(lv(&[&[0, 0], &[1, 0]]).to_string(), "[[0,0],[1,0]]");
    }
}
