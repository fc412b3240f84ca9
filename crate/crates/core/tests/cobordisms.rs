//! Gluing, reversal and union of combinatorial cobordisms, and their
//! evaluation under the two theories.

use dblcat::cobord::{
    cobordism_double_category_0, cobordism_double_category_1, Cobordism, Cobordism1, Cobordism2, Oriented,
    SamplerParams, Surface,
};
use dblcat::double::{check_double_category, Budget, DoubleCategory};
use dblcat::linalg::{q, RationalMatrix};
use dblcat::tqft::{check_axioms, evaluate1, evaluate2, FrobeniusAlgebra, Theory, Theory1d};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn o(s: &str) -> Oriented {
    s.parse().unwrap()
}

fn chain<C: Cobordism>(seed: u64, bound: usize, len: usize) -> Vec<C> {
    let universe = Oriented::all_up_to(bound);
    let params = SamplerParams { max_closed: 2, max_genus: 2 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut source = universe[rng.gen_range(0..universe.len())].clone();
        let mut out: Vec<C> = Vec::new();
        while out.len() < len {
            let Some(c) = C::sample(&mut rng, &source, &universe, &params) else { break };
            source = c.target().clone();
            out.push(c);
        }
        if out.len() == len {
            return out;
        }
    }
}

/// State sum for a matching: every interval forces equal labels on its ends
/// and every circle contributes `n`. Column digits label the source, row
/// digits the target, most significant first.
fn state_sum(n: usize, c: &Cobordism1) -> RationalMatrix {
    let (a, b) = (c.source().len(), c.target().len());
    let digits = |mut index: usize, len: usize| {
        let mut d = vec![0; len];
        for slot in d.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        d
    };
    let circles = q(n.pow(c.loops() as u32) as i64);
    RationalMatrix::from_fn(n.pow(b as u32), n.pow(a as u32), |row, col| {
        let labels: Vec<usize> = digits(col, a).into_iter().chain(digits(row, b)).collect();
        if c.pairs().iter().all(|&(p, r)| labels[p] == labels[r]) {
            circles.clone()
        } else {
            q(0)
        }
    })
}

#[test]
fn identity_is_idempotent_without_loops() {
    let x = o("+-+");
    let id = Cobordism1::identity(&x);
    let twice = id.compose(&id).unwrap();
    assert_eq!(twice, id);
    assert_eq!(twice.loops(), 0);
    assert_eq!(Cobordism1::identity(&Oriented::empty()).pairs(), vec![]);
    assert_eq!(Cobordism1::identity(&o("+")).pairs(), vec![(0, 1)]);
}

#[test]
fn cylinder_is_idempotent() {
    let cyl = Cobordism2::identity(&o("+"));
    let twice = cyl.compose(&cyl).unwrap();
    assert_eq!(twice, cyl);
    assert_eq!(twice.components(), &[Surface { genus: 0, attachments: vec![0, 1] }]);
    assert_eq!(twice.euler_characteristic(), 0);
}

#[test]
fn identities_are_strict_units_on_samples() {
    for seed in 0..200 {
        let c = &chain::<Cobordism1>(seed, 4, 1)[0];
        assert_eq!(&Cobordism1::identity(c.source()).compose(c).unwrap(), c);
        assert_eq!(&c.compose(&Cobordism1::identity(c.target())).unwrap(), c);
    }
}

#[test]
fn union_with_empty_is_identity() {
    let e1 = Cobordism1::identity(&Oriented::empty());
    let e2 = Cobordism2::identity(&Oriented::empty());
    for seed in 0..50 {
        let c = &chain::<Cobordism1>(seed, 3, 1)[0];
        assert_eq!(&c.union(&e1), c);
        assert_eq!(&e1.union(c), c);
        let s = &chain::<Cobordism2>(seed, 2, 1)[0];
        assert_eq!(&s.union(&e2), s);
    }
}

#[test]
fn law_suites_at_full_size() {
    let report = check_double_category(&cobordism_double_category_0(4, 3), &Budget::sampled(500, 1)).unwrap();
    assert!(report.passed(), "{}", report.summary());
    let report = check_double_category(&cobordism_double_category_1(3, 2, 3), &Budget::sampled(300, 1)).unwrap();
    assert!(report.passed(), "{}", report.summary());
}

#[test]
fn object_dimensions_and_pairing() {
    let t = Theory1d::new(3);
    let x = o("+-");
    let zx = t.assign_object(&x);
    assert_eq!(zx.dim, 9);
    let zmx = t.assign_object(&x.reversed());
    assert_eq!(zmx.dim, 9);
    assert_eq!(zmx.factors, x.reversed().signs().to_vec());
    assert!(zx.pairing.is_invertible());
}

#[test]
fn circle_value_is_the_dimension() {
    for n in 1..=3 {
        let t = Theory1d::new(n);
        let circle = Cobordism1::coevaluation().compose(&Cobordism1::evaluation()).unwrap();
        assert_eq!(evaluate1(&t, &circle).matrix, RationalMatrix::from_i64(1, 1, &[n as i64]));
    }
}

#[test]
fn handle_on_two_circles_and_trivial_theory() {
    let a = FrobeniusAlgebra::dual_numbers();
    assert_eq!(a.assign_object(&o("++")).dim, 4);
    let glued = Cobordism2::copants().compose(&Cobordism2::pants()).unwrap();
    let z = |c: &Cobordism2| evaluate2(&a, c).matrix;
    assert_eq!(z(&glued), &z(&Cobordism2::pants()) * &z(&Cobordism2::copants()));
    assert_eq!(&z(&glued), a.handle());

    let dc = cobordism_double_category_1(2, 2, 9);
    let report = check_axioms(&FrobeniusAlgebra::trivial(), &dc, &Budget::sampled(50, 2)).unwrap();
    assert!(report.passed(), "{}", report.summary());
    for c in dc.all_cells().iter().take(40) {
        let m = evaluate2(&FrobeniusAlgebra::trivial(), c).matrix;
        assert_eq!((m.rows(), m.cols()), (1, 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn gluing_matchings_is_associative(seed in any::<u64>()) {
        let t: Vec<Cobordism1> = chain(seed, 4, 3);
        let left = t[0].compose(&t[1]).unwrap().compose(&t[2]).unwrap();
        let right = t[0].compose(&t[1].compose(&t[2]).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn euler_characteristic_adds(seed in any::<u64>()) {
        let p: Vec<Cobordism2> = chain(seed, 3, 2);
        let glued = p[0].compose(&p[1]).unwrap();
        prop_assert_eq!(glued.euler_characteristic(), p[0].euler_characteristic() + p[1].euler_characteristic());
        let loose = p[0].components().len() + p[1].components().len();
        prop_assert!(glued.components().len() <= loose);
    }

    #[test]
    fn reversal_is_an_involution_preserving_topology(seed in any::<u64>()) {
        let c = &chain::<Cobordism1>(seed, 4, 1)[0];
        prop_assert_eq!(&c.reverse().reverse(), c);
        prop_assert_eq!(c.reverse().loops(), c.loops());
        let s = &chain::<Cobordism2>(seed, 3, 1)[0];
        prop_assert_eq!(&s.reverse().reverse(), s);
        prop_assert_eq!(s.reverse().euler_characteristic(), s.euler_characteristic());
        let genera = |s: &Cobordism2| { let mut g: Vec<u32> = s.components().iter().map(|c| c.genus).collect(); g.sort(); g };
        prop_assert_eq!(genera(&s.reverse()), genera(s));
    }

    #[test]
    fn union_adds_loops_and_genus(seed in any::<u64>()) {
        let c = chain::<Cobordism1>(seed, 2, 2);
        prop_assert_eq!(c[0].union(&c[1]).loops(), c[0].loops() + c[1].loops());
        let s = chain::<Cobordism2>(seed, 2, 2);
        let u = s[0].union(&s[1]);
        prop_assert_eq!(u.euler_characteristic(), s[0].euler_characteristic() + s[1].euler_characteristic());
        prop_assert_eq!(u.components().len(), s[0].components().len() + s[1].components().len());
    }

    #[test]
    fn evaluation_is_the_state_sum(seed in any::<u64>(), n in 1usize..=3) {
        let c = &chain::<Cobordism1>(seed, 3, 1)[0];
        prop_assert_eq!(evaluate1(&Theory1d::new(n), c).matrix, state_sum(n, c));
    }

    #[test]
    fn evaluation_is_functorial(seed in any::<u64>()) {
        let t = Theory1d::new(2);
        let c: Vec<Cobordism1> = chain(seed, 3, 2);
        let glued = c[0].compose(&c[1]).unwrap();
        prop_assert_eq!(evaluate1(&t, &glued).matrix, &evaluate1(&t, &c[1]).matrix * &evaluate1(&t, &c[0]).matrix);
        prop_assert_eq!(
            evaluate1(&t, &c[0].union(&c[1])).matrix,
            evaluate1(&t, &c[0]).matrix.kron(&evaluate1(&t, &c[1]).matrix)
        );
        for a in FrobeniusAlgebra::corpus() {
            let s: Vec<Cobordism2> = chain(seed, 2, 2);
            let glued = s[0].compose(&s[1]).unwrap();
            prop_assert_eq!(evaluate2(&a, &glued).matrix, &evaluate2(&a, &s[1]).matrix * &evaluate2(&a, &s[0]).matrix);
        }
    }

    #[test]
    fn closed_surfaces_multiply(g1 in 0u32..3, g2 in 0u32..3) {
        let closed = |g| Cobordism2::new(Oriented::empty(), Oriented::empty(), vec![Surface { genus: g, attachments: vec![] }]).unwrap();
        for a in FrobeniusAlgebra::corpus() {
            let z = |c: &Cobordism2| evaluate2(&a, c).matrix;
            prop_assert_eq!(z(&closed(g1).union(&closed(g2))), &z(&closed(g1)) * &z(&closed(g2)));
        }
    }
}
