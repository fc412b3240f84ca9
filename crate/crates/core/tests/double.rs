//! Law checker, duals, restriction and functors on small instances.

use dblcat::category::FinSetCategory;
use dblcat::cobord::cobordism_double_category_0;
use dblcat::diagram::{iso_double_category, morph_double_category, CartesianMonoidal, SpanDoubleCategory};
use dblcat::double::{
    check_double_category, check_double_functor, dual, is_bicategory_shaped, restrict, Budget, DoubleCategory,
    IdentityFunctor, Selection, StructuralError, Tabulated,
};
use dblcat::finset::{FinCategory, FinSet};
use proptest::prelude::*;

#[test]
fn identity_only_instance_passes() {
    let t = Tabulated::from_instance(&morph_double_category(FinCategory::discrete(1))).unwrap();
    assert_eq!((t.objects.len(), t.cells.len(), t.squares.len()), (1, 1, 1));
    let report = check_double_category(&t, &Budget::Exhaustive).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn scrambled_composite_is_reported_with_its_pair() {
    // In a group every cell has the same frame, so the table stays typed.
    let mut t = Tabulated::from_instance(&morph_double_category(FinCategory::cyclic_group(3))).unwrap();
    let (pair, old) = t
        .star
        .iter()
        .find(|((x, y), _)| x != y && t.unit.values().all(|u| u != x && u != y))
        .map(|(k, v)| (k.clone(), v.clone()))
        .expect("a non-unit composable pair");
    let other = t.cells.keys().find(|c| **c != old).unwrap().clone();
    t.star.insert(pair.clone(), other);
    let report = check_double_category(&t, &Budget::Exhaustive).unwrap();
    assert!(!report.passed());
    let cited = report
        .failing()
        .filter_map(|o| o.counterexample.as_deref())
        .any(|c| c.contains(&pair.0) && c.contains(&pair.1));
    assert!(cited, "{}", report.summary());
}

#[test]
fn dual_transposes_frames_of_morph() {
    let m = morph_double_category(FinCategory::linear_order(3));
    let d = dual(m.clone());
    for f in m.all_cells() {
        assert_eq!((d.d(&f), d.r(&f)), (m.r(&f), m.d(&f)));
    }
}

#[test]
fn dual_of_passing_instances_pass() {
    let m = morph_double_category(FinCategory::iso_and_arrow());
    assert!(check_double_category(&dual(m), &Budget::Exhaustive).unwrap().passed());
    let spans = SpanDoubleCategory::new((0..=2).map(FinSet::range).collect(), 4);
    let report = check_double_category(&dual(spans), &Budget::sampled(80, 1)).unwrap();
    assert!(report.passed(), "{}", report.summary());
    let report = check_double_category(&dual(cobordism_double_category_0(2, 1)), &Budget::sampled(80, 1)).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn tabulated_dual_is_an_involution() {
    let t = Tabulated::from_instance(&morph_double_category(FinCategory::linear_order(3))).unwrap();
    assert_eq!(t.dual().dual(), t);
    assert!(t.dual().validate().is_ok());
}

#[test]
fn identity_functor_passes() {
    let f = IdentityFunctor(morph_double_category(FinCategory::cyclic_group(3)));
    let report = check_double_functor(&f, &Budget::Exhaustive).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn selecting_everything_gives_the_instance() {
    let m = morph_double_category(FinCategory::linear_order(3));
    let r = restrict(m.clone(), Selection::everything(&m)).unwrap();
    assert_eq!(r.all_cells(), m.all_cells());
    assert_eq!(r.all_squares().len(), m.all_squares().len());
}

#[test]
fn bijections_of_finite_sets_form_a_sub_double_category() {
    let iso = iso_double_category(FinSetCategory::sizes_up_to(2)).unwrap();
    assert!(iso.all_cells().iter().all(|f| f.is_bijection()));
    let report = check_double_category(&iso, &Budget::Exhaustive).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn cell_without_its_object_is_not_closed() {
    let m = morph_double_category(FinCategory::linear_order(2));
    let mut s = Selection::everything(&m);
    let arrow = m.all_cells().into_iter().find(|f| m.d(f) != m.r(f)).unwrap();
    s.objects.retain(|a| *a != m.d(&arrow));
    assert!(matches!(restrict(m, s), Err(StructuralError::NotClosed { .. })));
}

#[test]
fn bicategory_shape() {
    assert!(is_bicategory_shaped(&CartesianMonoidal { universe: (0..=2).map(FinSet::range).collect() }));
    assert!(!is_bicategory_shaped(&morph_double_category(FinCategory::linear_order(2))));
    assert!(is_bicategory_shaped(&morph_double_category(FinCategory::discrete(0))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn span_instances_pass_for_any_seed(seed in any::<u64>()) {
        let spans = SpanDoubleCategory::new((0..=3).map(FinSet::range).collect(), seed);
        let report = check_double_category(&spans, &Budget::sampled(40, seed)).unwrap();
        prop_assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn sampled_reports_are_reproducible(seed in any::<u64>()) {
        let m = morph_double_category(FinCategory::linear_order(4));
        let a = check_double_category(&m, &Budget::sampled(30, seed)).unwrap();
        let b = check_double_category(&m, &Budget::sampled(30, seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}
