//! Eichler shapes, hereditary and Bass verdicts, and the full report.

use serde::{Deserialize, Serialize};

use crate::duality::{gorenstein, GorensteinVerdict};
use crate::error::{Error, Result};
use crate::level::{
    canonical_form_with, normalized_permutation_conjugates, LevelMatrix, OrderViolation,
    WeylElement, DEFAULT_SEARCH_CAP,
};

/// Block data of an Eichler normal form: `t` diagonal blocks of sizes
/// `k_1..k_t`, zero on and above the block diagonal and `a` below it.
///
/// The invariant is kept at its lexicographically smallest cyclic rotation,
/// and `a` is absent exactly when `t == 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EichlerShape {
    period: usize,
    invariant: Vec<usize>,
    a: Option<i64>,
}

impl EichlerShape {
    /// Panics on an empty invariant, on `a` given for period one, or on a
    /// missing or non-positive `a` for longer periods.
    pub fn new(invariant: Vec<usize>, a: Option<i64>) -> Self {
        assert!(!invariant.is_empty() && invariant.iter().all(|&k| k > 0));
        let period = invariant.len();
        match (period, a) {
            (1, None) => {}
            (1, Some(_)) => panic!("period one carries no parameter"),
            (_, Some(a)) if a >= 1 => {}
            _ => panic!("period {period} needs a >= 1"),
        }
        EichlerShape {
            period,
            invariant: min_rotation(&invariant),
            a,
        }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn invariant(&self) -> &[usize] {
        &self.invariant
    }

    pub fn a(&self) -> Option<i64> {
        self.a
    }

    pub fn n(&self) -> usize {
        self.invariant.iter().sum()
    }

    /// The block level with invariant in stored order.
    pub fn level(&self) -> LevelMatrix {
        let block: Vec<usize> = self
            .invariant
            .iter()
            .enumerate()
            .flat_map(|(b, &k)| std::iter::repeat_n(b, k))
            .collect();
        let a = self.a.unwrap_or(0);
        LevelMatrix::zero(self.n()).map(|i, j, _| if block[i] > block[j] { a } else { 0 })
    }
}

fn min_rotation(v: &[usize]) -> Vec<usize> {
    (0..v.len())
        .map(|r| v[r..].iter().chain(&v[..r]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// Reads off the Eichler shape of an upper-triangular order, or `None` when
/// its below-diagonal entries take more than one nonzero value.
pub fn eichler_shape_of_triangular(m: &LevelMatrix) -> Result<Option<EichlerShape>> {
    m.require_order()?;
    if let Some((row, col)) = m.first_above_diagonal_nonzero() {
        return Err(Error::NotUpperTriangular { row, col });
    }
    Ok(triangular_shape(m))
}

fn triangular_shape(m: &LevelMatrix) -> Option<EichlerShape> {
    let n = m.n();
    let mut a = None;
    for i in 0..n {
        for j in 0..i {
            let x = m.get(i, j);
            if x == 0 {
                continue;
            }
            match a {
                None => a = Some(x),
                Some(v) if v == x => {}
                Some(_) => return None,
            }
        }
    }
    let Some(a) = a else {
        return Some(EichlerShape::new(vec![n], None));
    };
    // blocks break wherever the subdiagonal step is nonzero
    let mut block = vec![0usize; n];
    let mut sizes = vec![1usize];
    for (i, b) in block.iter_mut().enumerate().skip(1) {
        if m.get(i, i - 1) == a {
            sizes.push(1);
        } else {
            *sizes.last_mut().expect("nonempty") += 1;
        }
        *b = sizes.len() - 1;
    }
    for i in 0..n {
        for j in 0..i {
            let expected = if block[i] > block[j] { a } else { 0 };
            assert_eq!(
                m.get(i, j),
                expected,
                "order condition violated by the 0/a staircase of {m}"
            );
        }
    }
    Some(EichlerShape::new(sizes, Some(a)))
}

/// An upper-triangular Eichler conjugate and the element reaching it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EichlerForm {
    pub shape: EichlerShape,
    pub triangular: LevelMatrix,
    pub element: WeylElement,
}

/// Searches every normalized permutation conjugate for an upper-triangular
/// Eichler pattern. Among matches the smallest shape, then the smallest
/// triangular level, is returned.
pub fn find_eichler_form(m: &LevelMatrix, search_cap: usize) -> Result<Option<EichlerForm>> {
    let mut best: Option<EichlerForm> = None;
    for (level, element) in normalized_permutation_conjugates(m, search_cap)? {
        if !level.is_upper_triangular() {
            continue;
        }
        let Some(shape) = triangular_shape(&level) else {
            continue;
        };
        let candidate = EichlerForm {
            shape,
            triangular: level,
            element,
        };
        let replace = match &best {
            None => true,
            Some(b) => (&candidate.shape, &candidate.triangular) < (&b.shape, &b.triangular),
        };
        if replace {
            best = Some(candidate);
        }
    }
    Ok(best)
}

pub fn classify_eichler(m: &LevelMatrix) -> Result<Option<EichlerShape>> {
    classify_eichler_with(m, DEFAULT_SEARCH_CAP)
}

pub fn classify_eichler_with(m: &LevelMatrix, search_cap: usize) -> Result<Option<EichlerShape>> {
    Ok(find_eichler_form(m, search_cap)?.map(|f| f.shape))
}

fn shape_is_hereditary(shape: &Option<EichlerShape>) -> bool {
    matches!(shape, Some(s) if s.period == 1 || s.a == Some(1))
}

/// Eichler with `a = 1`, or the maximal order.
pub fn is_hereditary(m: &LevelMatrix) -> Result<bool> {
    Ok(shape_is_hereditary(&classify_eichler(m)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BassReason {
    Hereditary,
    EichlerPeriodTwo,
    NotBassWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BassVerdict {
    pub is_bass: bool,
    pub reason: BassReason,
}

fn bass_from_shape(shape: &Option<EichlerShape>) -> BassVerdict {
    if shape_is_hereditary(shape) {
        BassVerdict {
            is_bass: true,
            reason: BassReason::Hereditary,
        }
    } else if matches!(shape, Some(s) if s.period == 2) {
        BassVerdict {
            is_bass: true,
            reason: BassReason::EichlerPeriodTwo,
        }
    } else {
        BassVerdict {
            is_bass: false,
            reason: BassReason::NotBassWitness,
        }
    }
}

/// A monomial order is Bass exactly when it is hereditary or Eichler of
/// period two.
pub fn is_bass(m: &LevelMatrix) -> Result<BassVerdict> {
    is_bass_with(m, DEFAULT_SEARCH_CAP)
}

pub fn is_bass_with(m: &LevelMatrix, search_cap: usize) -> Result<BassVerdict> {
    Ok(bass_from_shape(&classify_eichler_with(m, search_cap)?))
}

/// Entrywise clamp of a positive-type level to `{0, 1}`.
pub fn truncate(m: &LevelMatrix) -> Result<LevelMatrix> {
    m.require_order()?;
    if let Some((row, col)) = m.first_negative() {
        return Err(Error::NegativeEntry { row, col });
    }
    let t = m.map(|_, _, x| x.min(1));
    assert!(t.is_order(), "truncation of {m} is not an order");
    Ok(t)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub order_violation: Option<OrderViolation>,
    pub canonical_element: Option<WeylElement>,
    pub gorenstein: Option<GorensteinVerdict>,
    pub eichler_form: Option<EichlerForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub level: LevelMatrix,
    pub is_order: bool,
    pub canonical: Option<LevelMatrix>,
    pub is_upper_triangular: bool,
    pub is_gorenstein: Option<bool>,
    pub eichler: Option<EichlerShape>,
    pub is_hereditary: Option<bool>,
    pub is_bass: Option<bool>,
    pub bass_reason: Option<BassReason>,
    pub witnesses: Witnesses,
}

pub fn classify(m: &LevelMatrix) -> Result<ClassificationReport> {
    classify_with(m, DEFAULT_SEARCH_CAP)
}

/// Runs every check. A non-order gives a report with only `is_order` and
/// its violation filled in; the only error is exceeding `search_cap`.
pub fn classify_with(m: &LevelMatrix, search_cap: usize) -> Result<ClassificationReport> {
    let mut report = ClassificationReport {
        level: m.clone(),
        is_order: false,
        canonical: None,
        is_upper_triangular: m.is_upper_triangular(),
        is_gorenstein: None,
        eichler: None,
        is_hereditary: None,
        is_bass: None,
        bass_reason: None,
        witnesses: Witnesses::default(),
    };
    if let Some(v) = m.order_violation() {
        report.witnesses.order_violation = Some(v);
        return Ok(report);
    }
    report.is_order = true;

    let canonical = canonical_form_with(m, search_cap)?;
    let verdict = gorenstein(m)?;
    let form = find_eichler_form(m, search_cap)?;
    let shape = form.as_ref().map(|f| f.shape.clone());
    let bass = bass_from_shape(&shape);

    report.canonical = Some(canonical.level);
    report.is_gorenstein = Some(verdict.is_gorenstein());
    report.is_hereditary = Some(shape_is_hereditary(&shape));
    report.is_bass = Some(bass.is_bass);
    report.bass_reason = Some(bass.reason);
    report.eichler = shape;
    report.witnesses.canonical_element = Some(canonical.witness);
    report.witnesses.gorenstein = Some(verdict);
    report.witnesses.eichler_form = form;

    debug_assert!(report.chain_holds());
    Ok(report)
}

impl ClassificationReport {
    /// hereditary => Bass => Gorenstein, and Eichler => Gorenstein.
    pub fn chain_holds(&self) -> bool {
        let g = self.is_gorenstein.unwrap_or(false);
        let b = self.is_bass.unwrap_or(false);
        let h = self.is_hereditary.unwrap_or(false);
        (!h || b) && (!b || g) && (self.eichler.is_none() || g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::conjugate;

    fn lv(rows: &[&[i64]]) -> LevelMatrix {
        LevelMatrix::from_rows(rows.iter().copied()).unwrap()
    }

    fn tagged() -> LevelMatrix {
        lv(&[&[0, 0, 0, 0], &[1, 0, 1, 0], &[1, 1, 0, 0], &[2, 1, 1, 0]])
    }

    #[test]
    fn shape_of_triangular_examples() {
        let e = lv(&[&[0, 0, 0, 0], &[2, 0, 0, 0], &[2, 0, 0, 0], &[2, 2, 2, 0]]);
        let s = eichler_shape_of_triangular(&e).unwrap().unwrap();
        assert_eq!(s.period(), 3);
        assert_eq!(s, EichlerShape::new(vec![1, 2, 1], Some(2)));
        // stored rotation is the lex-min one
        assert_eq!(s.invariant(), &[1, 1, 2]);
        assert_eq!(s.a(), Some(2));

        let mixed = lv(&[&[0, 0, 0], &[1, 0, 0], &[2, 1, 0]]);
        assert_eq!(eichler_shape_of_triangular(&mixed).unwrap(), None);

        let z = eichler_shape_of_triangular(&LevelMatrix::zero(3))
            .unwrap()
            .unwrap();
        assert_eq!((z.period(), z.invariant(), z.a()), (1, &[3usize][..], None));

        assert!(matches!(
            eichler_shape_of_triangular(&tagged()),
            Err(Error::NotUpperTriangular { row: 1, col: 2 })
        ));
    }

    #[test]
    fn shape_level_round_trips() {
        let s = EichlerShape::new(vec![2, 1, 3], Some(4));
        let m = s.level();
        assert!(m.is_order());
        assert_eq!(eichler_shape_of_triangular(&m).unwrap(), Some(s));
    }

    #[test]
    fn classify_eichler_examples() {
        let s = classify_eichler(&lv(&[&[0, 1], &[0, 0]])).unwrap().unwrap();
        assert_eq!(s, EichlerShape::new(vec![1, 1], Some(1)));
        assert_eq!(classify_eichler(&tagged()).unwrap(), None);
        assert_eq!(
            classify_eichler(&LevelMatrix::zero(4))
                .unwrap()
                .unwrap()
                .period(),
            1
        );
    }

    #[test]
    fn eichler_form_witness_conjugates() {
        let base = lv(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]]);
        let w = WeylElement::new(vec![0, 2, -1], vec![2, 0, 1]).unwrap();
        let m = conjugate(&base, &w).unwrap();
        let f = find_eichler_form(&m, 8).unwrap().unwrap();
        assert_eq!(conjugate(&m, &f.element).unwrap(), f.triangular);
        assert!(f.triangular.is_upper_triangular());
    }

    #[test]
    fn hereditary_examples() {
        assert!(is_hereditary(&lv(&[&[0, 0, 0], &[1, 0, 0], &[1, 1, 0]])).unwrap());
        assert!(!is_hereditary(&lv(&[&[0, 0], &[2, 0]])).unwrap());
        assert!(is_hereditary(&LevelMatrix::zero(3)).unwrap());
    }

    #[test]
    fn bass_examples() {
        assert_eq!(
            is_bass(&lv(&[&[0, 0], &[2, 0]])).unwrap(),
            BassVerdict {
                is_bass: true,
                reason: BassReason::EichlerPeriodTwo
            }
        );
        assert!(
            !is_bass(&lv(&[&[0, 0, 0], &[2, 0, 0], &[2, 2, 0]]))
                .unwrap()
                .is_bass
        );
        assert!(!is_bass(&tagged()).unwrap().is_bass);
        assert_eq!(
            is_bass(&lv(&[&[0, 0], &[1, 0]])).unwrap().reason,
            BassReason::Hereditary
        );
    }

    #[test]
    fn truncate_examples() {
        assert_eq!(
            truncate(&lv(&[&[0, 0], &[2, 0]])).unwrap(),
            lv(&[&[0, 0], &[1, 0]])
        );
        assert_eq!(
            truncate(&LevelMatrix::zero(3)).unwrap(),
            LevelMatrix::zero(3)
        );
        assert_eq!(
            truncate(&tagged()).unwrap(),
            lv(&[&[0, 0, 0, 0], &[1, 0, 1, 0], &[1, 1, 0, 0], &[1, 1, 1, 0]])
        );
        assert!(matches!(
            truncate(&lv(&[&[0, -1], &[1, 0]])),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        ));
    }

    #[test]
    fn report_examples() {
        let r = classify(&tagged()).unwrap();
        assert!(r.is_order);
        assert_eq!(r.is_gorenstein, Some(true));
        assert_eq!(r.eichler, None);
        assert_eq!(r.is_hereditary, Some(false));
        assert_eq!(r.is_bass, Some(false));

        let r = classify(&lv(&[&[0, 0], &[1, 0]])).unwrap();
        assert_eq!(r.is_gorenstein, Some(true));
        assert_eq!(r.eichler, Some(EichlerShape::new(vec![1, 1], Some(1))));
        assert_eq!(r.is_hereditary, Some(true));
        assert_eq!(r.is_bass, Some(true));
        assert_eq!(r.bass_reason, Some(BassReason::Hereditary));

        let r = classify(&lv(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]])).unwrap();
        assert!(!r.is_order);
        assert_eq!(
            r.witnesses.order_violation,
            Some(OrderViolation::Triangle { i: 2, j: 1, k: 0 })
        );
        assert_eq!(r.is_gorenstein, None);
        assert_eq!(r.is_bass, None);
        assert_eq!(r.canonical, None);
    }

    #[test]
    fn report_json_field_names() {
        let r = classify(&lv(&[&[0, 0], &[2, 0]])).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "is_order",
            "canonical",
            "is_gorenstein",
            "eichler",
            "is_hereditary",
            "is_bass",
            "bass_reason",
            "witnesses",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["bass_reason"], "eichler_period_two");
        assert_eq!(v["eichler"]["period"], 2);
        let back: ClassificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
