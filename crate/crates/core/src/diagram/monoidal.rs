use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::random_function;
use crate::double::{stable_hash, DoubleCategory, Strictness, Witness};
use crate::finset::{cartesian_product, product_associator, product_map, FinFunction, FinSet};

/// `(FinSet, ×, {*})` as a double category over the trivial category:
/// one object `()`, one 0-level morphism `()`, 1-cells are finite sets,
/// 2-cells are functions, `∗ = ×` and `ID = {*}`.
#[derive(Debug, Clone)]
pub struct CartesianMonoidal {
    pub universe: Vec<FinSet>,
}

impl DoubleCategory for CartesianMonoidal {
    type Obj = ();
    type Mor = ();
    type Cell1 = FinSet;
    type Cell2 = FinFunction;

    fn src0(&self, _: &()) {}
    fn tgt0(&self, _: &()) {}
    fn id0(&self, _: &()) {}
    fn compose0(&self, _: &(), _: &()) -> Option<()> {
        Some(())
    }
    fn d(&self, _: &FinSet) {}
    fn r(&self, _: &FinSet) {}
    fn src2(&self, f: &FinFunction) -> FinSet {
        f.domain().clone()
    }
    fn tgt2(&self, f: &FinFunction) -> FinSet {
        f.codomain().clone()
    }
    fn d2(&self, _: &FinFunction) {}
    fn r2(&self, _: &FinFunction) {}
    fn id2(&self, x: &FinSet) -> FinFunction {
        FinFunction::identity(x)
    }
    fn compose2(&self, f: &FinFunction, g: &FinFunction) -> Option<FinFunction> {
        f.then(g).ok()
    }
    fn star(&self, x: &FinSet, y: &FinSet) -> Option<FinSet> {
        Some(cartesian_product(x, y).set)
    }
    fn star2(&self, f: &FinFunction, g: &FinFunction) -> Option<FinFunction> {
        Some(product_map(f, g))
    }
    fn unit(&self, _: &()) -> FinSet {
        FinSet::point()
    }
    fn unit2(&self, _: &()) -> FinFunction {
        FinFunction::identity(&FinSet::point())
    }
    fn strictness(&self) -> Strictness {
        Strictness::Weak
    }
    fn associator(&self, x: &FinSet, y: &FinSet, z: &FinSet) -> Option<Witness<FinFunction>> {
        let forward = product_associator(x, y, z);
        let inverse = forward.inverse()?;
        Some(Witness::new(forward, inverse))
    }
    fn left_unitor(&self, x: &FinSet) -> Option<Witness<FinFunction>> {
        let ux = cartesian_product(&FinSet::point(), x);
        let inverse = FinFunction::from_fn(x, &ux.set, |i| i);
        Some(Witness::new(ux.p2, inverse))
    }
    fn right_unitor(&self, x: &FinSet) -> Option<Witness<FinFunction>> {
        let xu = cartesian_product(x, &FinSet::point());
        let inverse = FinFunction::from_fn(x, &xu.set, |i| i);
        Some(Witness::new(xu.p1, inverse))
    }

    fn objects(&self) -> Vec<()> {
        vec![()]
    }
    fn morphisms_from(&self, _: &()) -> Vec<()> {
        vec![()]
    }
    fn cells_from(&self, _: &()) -> Vec<FinSet> {
        self.universe.clone()
    }
    fn cells_into(&self, _: &()) -> Vec<FinSet> {
        self.universe.clone()
    }
    fn squares_from(&self, x: &FinSet) -> Vec<FinFunction> {
        self.universe.iter().flat_map(|y| FinFunction::all(x, y)).collect()
    }
}

/// A 1-cell `A ⇒ B` of the action construction: a carrier `X` with a
/// structure map `x: X × A → B`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionPair {
    pub a: FinSet,
    pub b: FinSet,
    pub carrier: FinSet,
    pub x: FinFunction,
}

impl fmt::Debug for ActionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}⇒{:?} via {:?}{:?}", self.a, self.b, self.carrier, self.x.indices())
    }
}

impl ActionPair {
    pub fn new(carrier: FinSet, x: FinFunction, a: FinSet) -> Option<ActionPair> {
        let ok = x.domain() == &cartesian_product(&carrier, &a).set;
        ok.then(|| ActionPair { b: x.codomain().clone(), a, carrier, x })
    }

    /// `x(c, a)` by indices.
    pub fn act(&self, c: usize, a: usize) -> usize {
        self.x.at(c * self.a.len() + a)
    }

    /// `ID_A`: carrier `{*}` acting by projection.
    pub fn identity(a: &FinSet) -> ActionPair {
        let p = cartesian_product(&FinSet::point(), a);
        ActionPair { a: a.clone(), b: a.clone(), carrier: FinSet::point(), x: p.p2 }
    }

    /// `self: A ⇒ B` then `next: B ⇒ B′`: carrier `X′ × X` and
    /// `x″((x′, x), a) = x′(x′, x(x, a))`.
    pub fn then(&self, next: &ActionPair) -> Option<ActionPair> {
        if self.b != next.a {
            return None;
        }
        let carrier = cartesian_product(&next.carrier, &self.carrier).set;
        let dom = cartesian_product(&carrier, &self.a).set;
        let (na, nx) = (self.a.len(), self.carrier.len());
        let x = FinFunction::from_fn(&dom, &next.b, |k| {
            let (p, a) = (k / na, k % na);
            let (c2, c1) = (p / nx, p % nx);
            next.act(c2, self.act(c1, a))
        });
        Some(ActionPair { a: self.a.clone(), b: next.b.clone(), carrier, x })
    }
}

/// A 2-cell `(f₁, f₂, f₃)` with `f₁: A → A′`, `f₂: B → B′`, `f₃: X → X′`
/// and `x′ ∘ (f₃ × f₁) = f₂ ∘ x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionCell {
    pub source: ActionPair,
    pub target: ActionPair,
    pub f1: FinFunction,
    pub f2: FinFunction,
    pub f3: FinFunction,
}

impl fmt::Debug for ActionCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?} ⇒ {:?} | f1={:?}, f2={:?}, f3={:?})",
            self.source,
            self.target,
            self.f1.indices(),
            self.f2.indices(),
            self.f3.indices()
        )
    }
}

impl ActionCell {
    pub fn is_valid(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        let shapes = self.f1.domain() == &s.a
            && self.f1.codomain() == &t.a
            && self.f2.domain() == &s.b
            && self.f2.codomain() == &t.b
            && self.f3.domain() == &s.carrier
            && self.f3.codomain() == &t.carrier;
        shapes && product_map(&self.f3, &self.f1).then(&t.x).ok() == s.x.then(&self.f2).ok()
    }
}

/// The action construction over `FinSet`: 1-cells `A ⇒ B` are pairs
/// `(X, x: X × A → B)`, composed by `X′ × X` with the composite structure
/// map; weak, with re-bracketing and unit-collapsing witnesses on carriers.
#[derive(Debug, Clone)]
pub struct ActionDoubleCategory {
    pub universe: Vec<FinSet>,
    pub carriers: Vec<FinSet>,
    pub per_pair: usize,
    pub squares_per_cell: usize,
    pub seed: u64,
}

impl ActionDoubleCategory {
    pub fn new(universe: Vec<FinSet>, carriers: Vec<FinSet>, seed: u64) -> Self {
        Self { universe, carriers, per_pair: 1, squares_per_cell: 3, seed }
    }

    fn rng(&self, salt: &str, key: &impl fmt::Debug) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stable_hash(&format!("{salt}{key:?}")))
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> FinSet {
        self.universe[rng.gen_range(0..self.universe.len())].clone()
    }

    fn pairs(&self, salt: &str, fixed: &FinSet, fixed_is_a: bool) -> Vec<ActionPair> {
        let mut out = vec![ActionPair::identity(fixed)];
        let mut rng = self.rng(salt, fixed);
        for other in &self.universe {
            let (a, b) = if fixed_is_a { (fixed, other) } else { (other, fixed) };
            for carrier in &self.carriers {
                for _ in 0..self.per_pair {
                    let dom = cartesian_product(carrier, a).set;
                    if let Some(x) = random_function(&mut rng, &dom, b) {
                        let p = ActionPair { a: a.clone(), b: b.clone(), carrier: carrier.clone(), x };
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    /// Builds a target `x′` on `X′ × A′` agreeing with `f₂ ∘ x` along
    /// `f₃ × f₁`, filling free points at random.
    fn solve_target(
        rng: &mut ChaCha8Rng,
        src: &ActionPair,
        f1: &FinFunction,
        f2: &FinFunction,
        f3: &FinFunction,
    ) -> Option<ActionCell> {
        let (a2, b2, x2) = (f1.codomain(), f2.codomain(), f3.codomain());
        let mut table: Vec<Option<usize>> = vec![None; x2.len() * a2.len()];
        for c in 0..src.carrier.len() {
            for a in 0..src.a.len() {
                let k = f3.at(c) * a2.len() + f1.at(a);
                let want = f2.at(src.act(c, a));
                match table[k] {
                    Some(j) if j != want => return None,
                    _ => table[k] = Some(want),
                }
            }
        }
        if b2.is_empty() && table.iter().any(Option::is_none) {
            return None;
        }
        let map = table.into_iter().map(|j| j.unwrap_or_else(|| rng.gen_range(0..b2.len()))).collect();
        let x = FinFunction::new(cartesian_product(x2, a2).set, b2.clone(), map).ok()?;
        let target = ActionPair { a: a2.clone(), b: b2.clone(), carrier: x2.clone(), x };
        Some(ActionCell { source: src.clone(), target, f1: f1.clone(), f2: f2.clone(), f3: f3.clone() })
    }

    /// A random 2-cell out of `src`; on inconsistent draws falls back to a
    /// constant `f₂`, then to `f₁ = id`, `f₃ = id`.
    fn random_cell(
        &self,
        rng: &mut ChaCha8Rng,
        src: &ActionPair,
        f1: Option<&FinFunction>,
        f2: Option<&FinFunction>,
    ) -> Option<ActionCell> {
        let x2 = self.carriers[rng.gen_range(0..self.carriers.len())].clone();
        let f3 = random_function(rng, &src.carrier, &x2)?;
        let f1v = match f1 {
            Some(f) => f.clone(),
            None => {
                let a2 = self.pick(rng);
                random_function(rng, &src.a, &a2)?
            }
        };
        let f2v = match f2 {
            Some(f) => f.clone(),
            None => {
                let b2 = self.pick(rng);
                random_function(rng, &src.b, &b2)?
            }
        };
        if let Some(c) = Self::solve_target(rng, src, &f1v, &f2v, &f3) {
            return Some(c);
        }
        if f2.is_none() && !f2v.codomain().is_empty() {
            let j = rng.gen_range(0..f2v.codomain().len());
            let constant = FinFunction::constant(&src.b, f2v.codomain(), j);
            if let Some(c) = Self::solve_target(rng, src, &f1v, &constant, &f3) {
                return Some(c);
            }
        }
        if f1.is_none() {
            let id1 = FinFunction::identity(&src.a);
            let id3 = FinFunction::identity(&src.carrier);
            return Self::solve_target(rng, src, &id1, &f2v, &id3);
        }
        None
    }

    fn cells_sampled(
        &self,
        salt: &str,
        key: &impl fmt::Debug,
        sources: Vec<ActionPair>,
        seeded: ActionCell,
        f1: Option<&FinFunction>,
        f2: Option<&FinFunction>,
    ) -> Vec<ActionCell> {
        let mut out = vec![seeded];
        let mut rng = self.rng(salt, key);
        for _ in 0..self.squares_per_cell * 8 {
            if out.len() >= self.squares_per_cell || sources.is_empty() {
                break;
            }
            let src = &sources[rng.gen_range(0..sources.len())];
            if let Some(c) = self.random_cell(&mut rng, src, f1, f2) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    fn carrier_cell(src: &ActionPair, tgt: &ActionPair, f3: FinFunction) -> ActionCell {
        ActionCell {
            source: src.clone(),
            target: tgt.clone(),
            f1: FinFunction::identity(&src.a),
            f2: FinFunction::identity(&src.b),
            f3,
        }
    }
}

impl DoubleCategory for ActionDoubleCategory {
    type Obj = FinSet;
    type Mor = FinFunction;
    type Cell1 = ActionPair;
    type Cell2 = ActionCell;

    fn src0(&self, f: &FinFunction) -> FinSet {
        f.domain().clone()
    }
    fn tgt0(&self, f: &FinFunction) -> FinSet {
        f.codomain().clone()
    }
    fn id0(&self, a: &FinSet) -> FinFunction {
        FinFunction::identity(a)
    }
    fn compose0(&self, f: &FinFunction, g: &FinFunction) -> Option<FinFunction> {
        f.then(g).ok()
    }
    fn d(&self, x: &ActionPair) -> FinSet {
        x.a.clone()
    }
    fn r(&self, x: &ActionPair) -> FinSet {
        x.b.clone()
    }
    fn src2(&self, c: &ActionCell) -> ActionPair {
        c.source.clone()
    }
    fn tgt2(&self, c: &ActionCell) -> ActionPair {
        c.target.clone()
    }
    fn d2(&self, c: &ActionCell) -> FinFunction {
        c.f1.clone()
    }
    fn r2(&self, c: &ActionCell) -> FinFunction {
        c.f2.clone()
    }
    fn id2(&self, x: &ActionPair) -> ActionCell {
        Self::carrier_cell(x, x, FinFunction::identity(&x.carrier))
    }
    fn compose2(&self, p: &ActionCell, q: &ActionCell) -> Option<ActionCell> {
        if p.target != q.source {
            return None;
        }
        Some(ActionCell {
            source: p.source.clone(),
            target: q.target.clone(),
            f1: p.f1.then(&q.f1).ok()?,
            f2: p.f2.then(&q.f2).ok()?,
            f3: p.f3.then(&q.f3).ok()?,
        })
    }
    fn star(&self, x: &ActionPair, y: &ActionPair) -> Option<ActionPair> {
        x.then(y)
    }
    fn star2(&self, p: &ActionCell, q: &ActionCell) -> Option<ActionCell> {
        if p.f2 != q.f1 {
            return None;
        }
        Some(ActionCell {
            source: p.source.then(&q.source)?,
            target: p.target.then(&q.target)?,
            f1: p.f1.clone(),
            f2: q.f2.clone(),
            f3: product_map(&q.f3, &p.f3),
        })
    }
    fn unit(&self, a: &FinSet) -> ActionPair {
        ActionPair::identity(a)
    }
    fn unit2(&self, f: &FinFunction) -> ActionCell {
        ActionCell {
            source: ActionPair::identity(f.domain()),
            target: ActionPair::identity(f.codomain()),
            f1: f.clone(),
            f2: f.clone(),
            f3: FinFunction::identity(&FinSet::point()),
        }
    }
    fn strictness(&self) -> Strictness {
        Strictness::Weak
    }

    // (ξ∗ξ′)∗ξ″ has carrier X″×(X′×X); ξ∗(ξ′∗ξ″) has carrier (X″×X′)×X.
    fn associator(&self, x: &ActionPair, y: &ActionPair, z: &ActionPair) -> Option<Witness<ActionCell>> {
        let left = x.then(y)?.then(z)?;
        let right = x.then(&y.then(z)?)?;
        let rebracket = product_associator(&z.carrier, &y.carrier, &x.carrier);
        let forward = rebracket.inverse()?;
        Some(Witness::new(Self::carrier_cell(&left, &right, forward), Self::carrier_cell(&right, &left, rebracket)))
    }
    // ID_A ∗ ξ has carrier X × {*}, ξ ∗ ID_B has carrier {*} × X; both
    // enumerate like X.
    fn left_unitor(&self, x: &ActionPair) -> Option<Witness<ActionCell>> {
        let collapsed = ActionPair::identity(&x.a).then(x)?;
        let forward = FinFunction::from_fn(&collapsed.carrier, &x.carrier, |i| i);
        let inverse = FinFunction::from_fn(&x.carrier, &collapsed.carrier, |i| i);
        Some(Witness::new(Self::carrier_cell(&collapsed, x, forward), Self::carrier_cell(x, &collapsed, inverse)))
    }
    fn right_unitor(&self, x: &ActionPair) -> Option<Witness<ActionCell>> {
        let collapsed = x.then(&ActionPair::identity(&x.b))?;
        let forward = FinFunction::from_fn(&collapsed.carrier, &x.carrier, |i| i);
        let inverse = FinFunction::from_fn(&x.carrier, &collapsed.carrier, |i| i);
        Some(Witness::new(Self::carrier_cell(&collapsed, x, forward), Self::carrier_cell(x, &collapsed, inverse)))
    }
    fn is_valid2(&self, c: &ActionCell) -> bool {
        c.is_valid()
    }

    fn objects(&self) -> Vec<FinSet> {
        self.universe.clone()
    }
    fn morphisms_from(&self, a: &FinSet) -> Vec<FinFunction> {
        self.universe.iter().flat_map(|b| FinFunction::all(a, b)).collect()
    }
    fn cells_from(&self, a: &FinSet) -> Vec<ActionPair> {
        self.pairs("from", a, true)
    }
    fn cells_into(&self, b: &FinSet) -> Vec<ActionPair> {
        self.pairs("into", b, false)
    }
    fn squares_from(&self, x: &ActionPair) -> Vec<ActionCell> {
        self.cells_sampled("sq", x, vec![x.clone()], self.id2(x), None, None)
    }
    fn squares_with_d(&self, f1: &FinFunction) -> Vec<ActionCell> {
        self.cells_sampled("sqd", f1, self.cells_from(f1.domain()), self.unit2(f1), Some(f1), None)
    }
    fn squares_with_r(&self, f2: &FinFunction) -> Vec<ActionCell> {
        self.cells_sampled("sqr", f2, self.cells_into(f2.domain()), self.unit2(f2), None, Some(f2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::{check_double_category, is_bicategory_shaped, Budget};

    #[test]
    fn trivial_base_is_bicategory_shaped_and_passes() {
        let dc = CartesianMonoidal { universe: (0..=2).map(FinSet::range).collect() };
        assert!(is_bicategory_shaped(&dc));
        let report = check_double_category(&dc, &Budget::sampled(300, 5)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }

    #[test]
    fn unit_object_is_neutral() {
        let dc = CartesianMonoidal { universe: vec![] };
        let x = FinSet::named("x", 3);
        let w = dc.left_unitor(&x).unwrap();
        assert!(w.forward.is_bijection());
        assert_eq!(w.forward.codomain(), &x);
    }

    #[test]
    fn composite_structure_map_applies_x_then_x_prime() {
        let (a, b, c) = (FinSet::range(2), FinSet::range(3), FinSet::range(2));
        let (xs, ys) = (FinSet::named("x", 2), FinSet::named("y", 3));
        let xi = ActionPair::new(
            xs.clone(),
            FinFunction::new(cartesian_product(&xs, &a).set, b.clone(), vec![0, 1, 2, 2]).unwrap(),
            a.clone(),
        )
        .unwrap();
        let eta = ActionPair::new(
            ys.clone(),
            FinFunction::new(cartesian_product(&ys, &b).set, c, vec![0, 1, 1, 1, 0, 0, 1, 1, 0]).unwrap(),
            b,
        )
        .unwrap();
        let comp = xi.then(&eta).unwrap();
        assert_eq!(comp.carrier.len(), 6);
        for y in 0..3 {
            for x in 0..2 {
                for e in 0..2 {
                    assert_eq!(comp.act(y * 2 + x, e), eta.act(y, xi.act(x, e)));
                }
            }
        }
    }

    #[test]
    fn action_instance_passes_weakly() {
        let universe: Vec<FinSet> = (1..=2).map(FinSet::range).collect();
        let dc = ActionDoubleCategory::new(universe, vec![FinSet::named("c", 1), FinSet::named("c", 2)], 9);
        let report = check_double_category(&dc, &Budget::sampled(150, 1)).unwrap();
        assert!(report.passed(), "{}", report.summary());
    }
}
