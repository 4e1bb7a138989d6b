//! Lattices in `D^n`, projectivity, the dual level and the Gorenstein test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{normalize_positive, LevelMatrix};

/// Exponents `[l_1, ..., l_n]` of the column lattice `[P^{l_1}, ..., P^{l_n}]^t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeType(pub Vec<i64>);

impl LatticeType {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn column_of(m: &LevelMatrix, j: usize) -> LatticeType {
        LatticeType(m.column(j))
    }
}

fn check_dim(m: &LevelMatrix, l: &LatticeType) -> Result<()> {
    if l.len() != m.n() {
        return Err(Error::Dimension {
            expected: m.n(),
            found: l.len(),
        });
    }
    Ok(())
}

/// First pair `(i, j)` with `m[i][j] + l[j] < l[i]`, or `None` when `l` is
/// stable under left multiplication by the order.
pub fn lattice_violation(m: &LevelMatrix, l: &LatticeType) -> Result<Option<(usize, usize)>> {
    check_dim(m, l)?;
    m.require_order()?;
    let n = m.n();
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| m.get(i, j) + l.0[j] < l.0[i]))
}

pub fn is_lattice(m: &LevelMatrix, l: &LatticeType) -> Result<bool> {
    Ok(lattice_violation(m, l)?.is_none())
}

/// `l[i] = m[i][column] + shift` for every `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveWitness {
    pub column: usize,
    pub shift: i64,
}

/// Projectivity of a lattice over an order with zero first row: the lattice
/// is projective exactly when it is a shifted column of the level.
///
/// Returns the smallest matching column, or `None` if the lattice is not
/// projective.
pub fn is_projective(m: &LevelMatrix, l: &LatticeType) -> Result<Option<ProjectiveWitness>> {
    check_dim(m, l)?;
    m.require_order()?;
    if !m.has_zero_first_row() {
        return Err(Error::NotNormalized);
    }
    if let Some((row, col)) = lattice_violation(m, l)? {
        return Err(Error::NotALattice { row, col });
    }
    Ok(column_match(m, &l.0))
}

fn column_match(m: &LevelMatrix, l: &[i64]) -> Option<ProjectiveWitness> {
    let n = m.n();
    (0..n).find_map(|j| {
        let shift = l[0] - m.get(0, j);
        (1..n)
            .all(|i| l[i] == m.get(i, j) + shift)
            .then_some(ProjectiveWitness { column: j, shift })
    })
}

/// Level of the `O`-linear dual `R^v` as a left `R`-module.
///
/// `raw[i][j] = -m[j][i]`. `normalized` rescales each column so the first row
/// vanishes (`normalized[i][j] = raw[i][j] - raw[0][j]`), which is an
/// isomorphism of left modules. Neither is an order in general.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualLevel {
    pub raw: LevelMatrix,
    pub normalized: LevelMatrix,
}

pub fn dual_level(m: &LevelMatrix) -> Result<DualLevel> {
    m.require_order()?;
    Ok(lattice_dual(m))
}

/// Dual of the lattice with level `m`, defined for any square level. Applying
/// it twice gives back `m`; `dual_level` is this restricted to orders.
pub fn lattice_dual(m: &LevelMatrix) -> DualLevel {
    let raw = m.map(|i, j, _| -m.get(j, i));
    let normalized = raw.map(|_, j, x| x - raw.get(0, j));
    DualLevel { raw, normalized }
}

/// For row `i`: `m[i][k] + m[k][column] == shift` for every `k`, i.e. the
/// negated row shifted by `shift` is column `column` of the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowWitness {
    pub row: usize,
    pub column: usize,
    pub shift: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum GorensteinVerdict {
    Gorenstein { rows: Vec<RowWitness> },
    NotGorenstein { failing_row: usize },
}

impl GorensteinVerdict {
    pub fn is_gorenstein(&self) -> bool {
        matches!(self, GorensteinVerdict::Gorenstein { .. })
    }
}

/// Row/column matching criterion: for every row `i` some column `j` makes
/// `m[i][k] + m[k][j]` independent of `k`.
///
/// Evaluated on the level as given; the verdict is invariant under
/// conjugation so no normalization is needed.
pub fn gorenstein(m: &LevelMatrix) -> Result<GorensteinVerdict> {
    m.require_order()?;
    let n = m.n();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let found = (0..n).find_map(|j| {
            let shift = m.get(i, 0) + m.get(0, j);
            (1..n)
                .all(|k| m.get(i, k) + m.get(k, j) == shift)
                .then_some(RowWitness {
                    row: i,
                    column: j,
                    shift,
                })
        });
        match found {
            Some(w) => rows.push(w),
            None => return Ok(GorensteinVerdict::NotGorenstein { failing_row: i }),
        }
    }
    Ok(GorensteinVerdict::Gorenstein { rows })
}

pub fn is_gorenstein(m: &LevelMatrix) -> Result<bool> {
    Ok(gorenstein(m)?.is_gorenstein())
}

/// Second route to the Gorenstein verdict: normalize the order, take the
/// module-normalized dual, and ask whether every one of its columns is a
/// projective lattice.
pub fn gorenstein_by_duality(m: &LevelMatrix) -> Result<bool> {
    let normalized = normalize_positive(m)?.level;
    let dual = lattice_dual(&normalized);
    for j in 0..normalized.n() {
        let l = LatticeType::column_of(&dual.normalized, j);
        if is_projective(&normalized, &l)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
