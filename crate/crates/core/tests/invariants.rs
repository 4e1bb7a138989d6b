mod common;

use monord::classify::{classify_eichler, find_eichler_form};
use monord::duality::{gorenstein, gorenstein_by_duality, GorensteinVerdict};
use monord::{
    canonical_form, classify, conjugate, dual_level, is_gorenstein, is_lattice, is_projective,
    lattice_dual, normalize_positive, LatticeType, LevelMatrix, WeylElement,
};
use proptest::prelude::*;

fn order(max_n: usize, bound: i64) -> impl Strategy<Value = LevelMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(0..=bound, n * n).prop_map(move |w| common::closure(n, &w))
    })
}

fn element(n: usize) -> impl Strategy<Value = WeylElement> {
    (
        proptest::collection::vec(-4i64..=4, n),
        Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
    )
        .prop_map(|(s, p)| WeylElement::new(s, p).unwrap())
}

fn order_and_elements() -> impl Strategy<Value = (LevelMatrix, WeylElement, WeylElement)> {
    order(5, 3).prop_flat_map(|m| {
        let n = m.n();
        (Just(m), element(n), element(n))
    })
}

proptest! {
    #[test]
    fn conjugation_is_a_group_action((m, w1, w2) in order_and_elements()) {
        let step = conjugate(&conjugate(&m, &w1).unwrap(), &w2).unwrap();
        prop_assert_eq!(&step, &conjugate(&m, &w2.after(&w1).unwrap()).unwrap());
        let back = conjugate(&conjugate(&m, &w1).unwrap(), &w1.inverse()).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert!(w1.inverse().after(&w1).unwrap().is_identity());
        prop_assert!(w1.after(&w1.inverse()).unwrap().is_identity());
    }

    #[test]
    fn verdicts_are_conjugation_invariant((m, w, _) in order_and_elements()) {
        let c = conjugate(&m, &w).unwrap();
        prop_assert!(c.is_order());
        prop_assert_eq!(canonical_form(&m).unwrap().level, canonical_form(&c).unwrap().level);
        prop_assert_eq!(is_gorenstein(&m).unwrap(), is_gorenstein(&c).unwrap());
        prop_assert_eq!(classify_eichler(&m).unwrap(), classify_eichler(&c).unwrap());
        let (a, b) = (classify(&m).unwrap(), classify(&c).unwrap());
        prop_assert_eq!(a.is_bass, b.is_bass);
        prop_assert_eq!(a.is_hereditary, b.is_hereditary);
    }

    #[test]
    fn canonical_form_is_idempotent_and_witnessed(m in order(5, 3)) {
        let cf = canonical_form(&m).unwrap();
        prop_assert_eq!(&conjugate(&m, &cf.witness).unwrap(), &cf.level);
        prop_assert!(cf.level.is_positive_type());
        prop_assert_eq!(&canonical_form(&cf.level).unwrap().level, &cf.level);
    }

    #[test]
    fn normalize_gives_positive_type((m, w, _) in order_and_elements()) {
        let c = conjugate(&m, &w).unwrap();
        let p = normalize_positive(&c).unwrap();
        prop_assert!(p.level.has_zero_first_row());
        prop_assert!(p.level.min_entry() >= 0);
        prop_assert_eq!(&conjugate(&c, &p.applied).unwrap(), &p.level);
    }

    #[test]
    fn gorenstein_witnesses_are_sound(m in order(5, 3)) {
        let n = m.n();
        match gorenstein(&m).unwrap() {
            GorensteinVerdict::Gorenstein { rows } => {
                prop_assert_eq!(rows.len(), n);
                for r in rows {
                    for k in 0..n {
                        prop_assert_eq!(m.get(r.row, k) + m.get(k, r.column), r.shift);
                    }
                }
            }
            GorensteinVerdict::NotGorenstein { failing_row: i } => {
                for j in 0..n {
                    let s: Vec<i64> = (0..n).map(|k| m.get(i, k) + m.get(k, j)).collect();
                    prop_assert!(s.iter().any(|&x| x != s[0]));
                }
            }
        }
        prop_assert_eq!(is_gorenstein(&m).unwrap(), gorenstein_by_duality(&m).unwrap());
    }

    #[test]
    fn eichler_witness_is_sound(m in order(4, 3)) {
        if let Some(form) = find_eichler_form(&m, 8).unwrap() {
            prop_assert_eq!(&conjugate(&m, &form.element).unwrap(), &form.triangular);
            prop_assert!(form.triangular.is_upper_triangular());
            let expect = form.shape.level();
            prop_assert_eq!(canonical_form(&expect).unwrap().level, canonical_form(&m).unwrap().level);
        }
    }

    #[test]
    fn dual_columns_are_lattices(m in order(5, 3)) {
        let d = dual_level(&m).unwrap();
        prop_assert_eq!(&lattice_dual(&d.raw).raw, &m);
        for j in 0..m.n() {
            let col = LatticeType::column_of(&d.raw, j);
            prop_assert!(is_lattice(&m, &col).unwrap());
            let shifted = LatticeType::column_of(&d.normalized, j);
            prop_assert!(is_lattice(&m, &shifted).unwrap());
        }
    }

    #[test]
    fn own_columns_are_projective(m in order(5, 3)) {
        let p = normalize_positive(&m).unwrap().level;
        for j in 0..p.n() {
            let col = LatticeType::column_of(&p, j);
            prop_assert!(is_projective(&p, &col).unwrap().is_some());
        }
    }

    #[test]
    fn gorenstein_normal_form_has_zero_column(m in order(5, 3)) {
        if is_gorenstein(&m).unwrap() {
            let p = normalize_positive(&m).unwrap().level;
            prop_assert!((0..p.n()).any(|j| p.column(j).iter().all(|&x| x == 0)));
        }
    }

    #[test]
    fn report_chain_holds(m in order(5, 3)) {
        let r = classify(&m).unwrap();
        prop_assert!(r.chain_holds());
        prop_assert_eq!(r.is_upper_triangular, m.is_upper_triangular());
    }
}

#[test]
fn gorenstein_normal_forms_have_zero_column_exhaustive() {
    for n in 1..=4 {
        for m in common::normalized_orders(n, 2) {
            if is_gorenstein(&m).unwrap() {
                assert!((0..n).any(|j| m.column(j).iter().all(|&x| x == 0)), "{m}");
            }
        }
    }
}
