//! Actions on bundles, pointed sets and cells, checked against direct
//! fiber counts.

use dblcat::action::{
    check_action, check_characteristic_class, orbit, self_action, validate_subcategory, Action, IsoAction, Pointed,
    PullbackAction,
};
use dblcat::category::Category;
use dblcat::diagram::Morph;
use dblcat::double::{Budget, DoubleCategory};
use dblcat::finset::{FinCategory, FinFunction, FinSet};
use proptest::prelude::*;

fn function(dom: usize, cod: usize, map: &[usize]) -> FinFunction {
    FinFunction::new(FinSet::range(dom), FinSet::range(cod), map.to_vec()).unwrap()
}

#[test]
fn self_action_is_composition() {
    let c = FinCategory::linear_order(3);
    let a = self_action(Morph(c.clone()));
    for xi in a.double().all_cells() {
        for m in a.acted().objects().into_iter().filter(|m| a.project(m) == a.double().r(&xi)) {
            assert_eq!(a.act(&xi, &m), c.compose(&xi, &m));
        }
    }
    let cells = a.double().all_cells();
    assert!(a.associator(&cells[0], &cells[0], &cells[0]).is_none());
    assert!(a.unitor(&cells[0]).is_none());
}

#[test]
fn pulling_back_twice_agrees_with_the_composite() {
    let a = PullbackAction::new(3, 1, 0);
    let universe = a.universe().to_vec();
    let mut checked = 0;
    for b in &universe {
        for e in &universe {
            for pi in FinFunction::all(e, b) {
                for b1 in &universe {
                    for f in FinFunction::all(b1, b) {
                        for b2 in &universe {
                            for g in FinFunction::all(b2, b1) {
                                let twice = a.act(&g, &a.act(&f, &pi).unwrap()).unwrap();
                                let once = a.act(&g.then(&f).unwrap(), &pi).unwrap();
                                assert_eq!(twice.domain().len(), once.domain().len());
                                let w = a.associator(&g, &f, &pi).unwrap();
                                assert!(w.forward.u.is_bijection() && w.inverse.u.is_bijection());
                                checked += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    // Σ_b Σ_e b^e · Σ_{b1} b^{b1} · Σ_{b2} b1^{b2} over sizes 0..=3.
    assert_eq!(checked, 55_196);
}

#[test]
fn identity_pullback_is_the_bundle_up_to_the_unitor() {
    let a = PullbackAction::new(3, 1, 0);
    let pi = function(3, 2, &[0, 1, 1]);
    let pulled = a.act(&FinFunction::identity(pi.codomain()), &pi).unwrap();
    assert_eq!(pulled.domain().len(), 3);
    let w = a.unitor(&pi).unwrap();
    assert!(w.forward.u.is_bijection());
}

#[test]
fn transport_moves_the_point() {
    let a = IsoAction::new(3).unwrap();
    let p = Pointed { set: FinSet::range(3), point: 0 };
    let u = function(3, 3, &[2, 0, 1]);
    for xi in a.double().all_cells() {
        if a.double().r(&xi) == p.set && xi.is_bijection() {
            let q = a.act(&xi, &p).unwrap();
            assert_eq!(xi.at(q.point), p.point);
        }
    }
    let id = FinFunction::identity(&p.set);
    assert_eq!(a.act(&id, &p).unwrap(), p);
    let twice = a.act(&u, &a.act(&u, &p).unwrap()).unwrap();
    assert_eq!(twice, a.act(&u.then(&u).unwrap(), &p).unwrap());
}

#[test]
fn orbit_of_a_bundle_contains_its_pullbacks() {
    let a = PullbackAction::new(2, 2, 1);
    let pi = function(2, 2, &[0, 1]);
    let o = orbit(&a, &[pi.clone()], &[], 50_000).unwrap();
    validate_subcategory(&a, &o.objects, &o.morphisms).unwrap();
    for b in a.universe() {
        for f in FinFunction::all(b, pi.codomain()) {
            let pulled = a.act(&f, &pi).unwrap();
            let canonical = a.canonical(&pulled).map_or(pulled.clone(), |w| w.forward.g);
            assert!(o.objects.contains(&canonical) || o.objects.contains(&pulled), "{f:?}");
        }
    }
}

#[test]
fn orbit_of_a_pointed_set_is_its_class() {
    let a = IsoAction::new(3).unwrap();
    for n in 1..=3 {
        let o = orbit(&a, &[Pointed { set: FinSet::range(n), point: 0 }], &[], 10_000).unwrap();
        assert_eq!(o.objects.len(), n);
        assert!(o.objects.iter().all(|p| p.set.len() == n));
    }
}

#[test]
fn iso_action_passes() {
    let report = check_action(&IsoAction::new(2).unwrap(), &Budget::Exhaustive).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn fiber_class_on_universes_up_to_four() {
    let a = PullbackAction::new(4, 1, 0);
    let class = |pi: &FinFunction| PullbackAction::fiber_cardinalities(pi);
    let pull = |f: &FinFunction, h: &Vec<usize>| (0..f.domain().len()).map(|b| h[f.at(b)]).collect::<Vec<_>>();
    let report = check_characteristic_class(&a, &class, &pull, &Budget::Exhaustive).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fibers_of_a_pullback(
        e in prop::collection::vec(0usize..3, 0..5),
        f in prop::collection::vec(0usize..3, 0..5),
    ) {
        let a = PullbackAction::new(4, 1, 0);
        let pi = function(e.len(), 3, &e);
        let g = function(f.len(), 3, &f);
        let pulled = a.act(&g, &pi).unwrap();
        prop_assert_eq!(pulled.codomain().len(), f.len());
        let counts = PullbackAction::fiber_cardinalities(&pulled);
        for (b, &image) in f.iter().enumerate() {
            prop_assert_eq!(counts[b], e.iter().filter(|&&x| x == image).count());
        }
    }
}
