//! Definition-level oracles that bypass the structural criteria.
//!
//! Every order containing a standard monomial order is again standard
//! monomial, so the overorders of `m` are exactly the orders `m'` with
//! `-m[j][i] <= m'[i][j] <= m[i][j]`. The lower bound comes from
//! `m'[i][j] + m'[j][i] >= m'[i][i] = 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::is_gorenstein;
use crate::error::{Error, Result};
use crate::level::LevelMatrix;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverorderSet {
    pub base: LevelMatrix,
    /// Sorted row-major; includes `base` and the zero level.
    pub members: Vec<LevelMatrix>,
}

/// `prod_{i<j} (m[i][j] + m[j][i] + 1)`, saturating.
pub fn overorder_bound(m: &LevelMatrix) -> u128 {
    let n = m.n();
    let mut bound: u128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            let width = (m.get(i, j) + m.get(j, i) + 1).max(1) as u128;
            bound = bound.saturating_mul(width);
        }
    }
    bound
}

pub fn overorders(m: &LevelMatrix) -> Result<OverorderSet> {
    overorders_with_budget(m, DEFAULT_BUDGET)
}

pub fn overorders_with_budget(m: &LevelMatrix, budget: u64) -> Result<OverorderSet> {
    m.require_order()?;
    let bound = overorder_bound(m);
    if bound > budget as u128 {
        return Err(Error::BudgetExceeded { bound, budget });
    }
    let n = m.n();
    // pairs ordered by their larger index, so principal blocks fill first
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();

    let mut members: Vec<LevelMatrix> = match pairs.first() {
        None => vec![m.clone()],
        Some(&(i, j)) => pair_values(m, i, j)
            .collect::<Vec<_>>()
            .into_par_iter()
            .flat_map_iter(|(x, y)| {
                let mut search = Search::new(m, &pairs);
                search.assign(0, x, y);
                let mut found = Vec::new();
                if search.consistent(0) {
                    search.descend(1, &mut found);
                }
                found
            })
            .collect(),
    };
    members.sort();
    Ok(OverorderSet {
        base: m.clone(),
        members,
    })
}

/// `(m'[i][j], m'[j][i])` in the box with nonnegative sum.
fn pair_values(m: &LevelMatrix, i: usize, j: usize) -> impl Iterator<Item = (i64, i64)> {
    let (up, down) = (m.get(i, j), m.get(j, i));
    (-down..=up).flat_map(move |x| ((-x).max(-up)..=down).map(move |y| (x, y)))
}

struct Search<'a> {
    base: &'a LevelMatrix,
    pairs: &'a [(usize, usize)],
    n: usize,
    cur: Vec<i64>,
    set: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(base: &'a LevelMatrix, pairs: &'a [(usize, usize)]) -> Self {
        let n = base.n();
        let mut set = vec![false; n * n];
        for i in 0..n {
            set[i * n + i] = true;
        }
        Search {
            base,
            pairs,
            n,
            cur: vec![0; n * n],
            set,
        }
    }

    fn assign(&mut self, p: usize, x: i64, y: i64) {
        let (i, j) = self.pairs[p];
        let n = self.n;
        self.cur[i * n + j] = x;
        self.cur[j * n + i] = y;
        self.set[i * n + j] = true;
        self.set[j * n + i] = true;
    }

    fn unassign(&mut self, p: usize) {
        let (i, j) = self.pairs[p];
        let n = self.n;
        self.set[i * n + j] = false;
        self.set[j * n + i] = false;
    }

    /// Every triangle inequality whose three cells are now all set and
    /// which involves pair `p`.
    fn consistent(&self, p: usize) -> bool {
        let (i, j) = self.pairs[p];
        self.cell_ok(i, j) && self.cell_ok(j, i)
    }

    fn cell_ok(&self, a: usize, b: usize) -> bool {
        let n = self.n;
        let v = |r: usize, c: usize| self.cur[r * n + c];
        let s = |r: usize, c: usize| self.set[r * n + c];
        for k in 0..n {
            // (a,b) on the left
            if s(a, k) && s(k, b) && v(a, b) > v(a, k) + v(k, b) {
                return false;
            }
            // (a,b) as the first summand of m'[a][k]
            if s(a, k) && s(b, k) && v(a, k) > v(a, b) + v(b, k) {
                return false;
            }
            // (a,b) as the second summand of m'[k][b]
            if s(k, b) && s(k, a) && v(k, b) > v(k, a) + v(a, b) {
                return false;
            }
        }
        true
    }

    fn descend(&mut self, p: usize, out: &mut Vec<LevelMatrix>) {
        if p == self.pairs.len() {
            let level = LevelMatrix::new(self.n, self.cur.clone()).expect("square");
            debug_assert!(level.is_order());
            out.push(level);
            return;
        }
        let (i, j) = self.pairs[p];
        for (x, y) in pair_values(self.base, i, j) {
            self.assign(p, x, y);
            if self.consistent(p) {
                self.descend(p + 1, out);
            }
            self.unassign(p);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassOracleVerdict {
    pub is_bass: bool,
    /// A non-Gorenstein overorder: among all failures, the one with the
    /// largest entry sum (closest to the base), ties broken row-major.
    pub witness: Option<LevelMatrix>,
    pub overorder_count: usize,
}

pub fn bass_oracle(m: &LevelMatrix) -> Result<BassOracleVerdict> {
    bass_oracle_with_budget(m, DEFAULT_BUDGET)
}

/// Bass by definition: every overorder is Gorenstein.
pub fn bass_oracle_with_budget(m: &LevelMatrix, budget: u64) -> Result<BassOracleVerdict> {
    let set = overorders_with_budget(m, budget)?;
    let mut witness: Option<(i64, &LevelMatrix)> = None;
    for member in &set.members {
        if is_gorenstein(member)? {
            continue;
        }
        let sum: i64 = member.entries().iter().sum();
        if witness.is_none_or(|(best, _)| sum > best) {
            witness = Some((sum, member));
        }
    }
    Ok(BassOracleVerdict {
        is_bass: witness.is_none(),
        witness: witness.map(|(_, w)| w.clone()),
        overorder_count: set.members.len(),
    })
}
