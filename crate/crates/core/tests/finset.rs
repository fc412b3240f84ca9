use std::collections::BTreeSet;

use dblcat::finset::{cartesian_product, check_pullback_universal, disjoint_union, pullback, FinFunction, FinSet};
use proptest::prelude::*;

fn function(dom: usize, cod: usize, map: &[usize]) -> FinFunction {
    FinFunction::new(FinSet::named("x", dom), FinSet::named("z", cod), map.to_vec()).unwrap()
}

fn cospan() -> impl Strategy<Value = (FinFunction, FinFunction)> {
    (1usize..=4).prop_flat_map(|z| {
        (prop::collection::vec(0..z, 0..=4), prop::collection::vec(0..z, 0..=4))
            .prop_map(move |(u, v)| (function(u.len(), z, &u), function(v.len(), z, &v)))
    })
}

proptest! {
    #[test]
    fn apex_is_the_set_of_matching_pairs((u, v) in cospan()) {
        let cone = pullback(&u, &v).unwrap();
        let expected: BTreeSet<(usize, usize)> = (0..u.domain().len())
            .flat_map(|i| (0..v.domain().len()).map(move |j| (i, j)))
            .filter(|&(i, j)| u.at(i) == v.at(j))
            .collect();
        let got: Vec<(usize, usize)> = (0..cone.apex.len()).map(|k| (cone.pi1.at(k), cone.pi2.at(k))).collect();
        prop_assert_eq!(got.len(), expected.len());
        prop_assert_eq!(got.into_iter().collect::<BTreeSet<_>>(), expected);
        prop_assert!(check_pullback_universal(&cone, 3));
    }

    #[test]
    fn sum_and_product_sizes(a in 0usize..5, b in 0usize..5) {
        let (x, y) = (FinSet::range(a), FinSet::range(b));
        prop_assert_eq!(disjoint_union(&x, &y).set.len(), a + b);
        prop_assert_eq!(cartesian_product(&x, &y).set.len(), a * b);
    }

    #[test]
    fn composition_is_associative(
        f in prop::collection::vec(0usize..3, 3),
        g in prop::collection::vec(0usize..3, 3),
        h in prop::collection::vec(0usize..3, 3),
    ) {
        let s = FinSet::range(3);
        let [f, g, h] = [f, g, h].map(|m| FinFunction::new(s.clone(), s.clone(), m).unwrap());
        prop_assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        prop_assert_eq!(FinFunction::identity(&s).then(&f).unwrap(), f.clone());
    }
}
