//! Ordinary categories with enumerable hom-sets, and commutative squares in them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::double::{stable_hash, Cell};
use crate::finset::{FinCategory, FinFunction, FinSet, Named};

/// A commutative square
///
/// ```text
///        u
///   A ───────→ A′
///   │          │
/// f │          │ g
///   ↓          ↓
///   B ───────→ B′
///        v
/// ```
///
/// with `f ; v = u ; g`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square<M> {
    pub f: M,
    pub g: M,
    pub u: M,
    pub v: M,
}

impl<M: fmt::Debug> fmt::Debug for Square<M> {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "□({:?} ⇒ {:?} | u={:?}, v={:?})", self.f, self.g, self.u, self.v)
    }
}

/// A category whose hom-sets can be enumerated (or sampled).
///
/// Composition is diagrammatic: `compose(f, g)` is "`f` then `g`".
pub trait Category {
    type Obj: Cell;
    type Mor: Cell;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
    fn objects(&self) -> Vec<Self::Obj>;
    fn morphisms_from(&self, a: &Self::Obj) -> Vec<Self::Mor>;

    fn morphisms_into(&self, b: &Self::Obj) -> Vec<Self::Mor> {
        self.objects().iter().flat_map(|a| self.morphisms_from(a)).filter(|f| &self.target(f) == b).collect()
    }

    fn morphisms_between(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor> {
        self.morphisms_from(a).into_iter().filter(|f| &self.target(f) == b).collect()
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let (a, b) = (self.source(f), self.target(f));
        let (ia, ib) = (self.identity(&a), self.identity(&b));
        self.morphisms_between(&b, &a)
            .into_iter()
            .find(|g| self.compose(f, g).as_ref() == Some(&ia) && self.compose(g, f).as_ref() == Some(&ib))
    }

    fn is_isomorphism(&self, f: &Self::Mor) -> bool {
        self.inverse(f).is_some()
    }

    fn commutes(&self, s: &Square<Self::Mor>) -> bool {
        let ok = self.source(&s.f) == self.source(&s.u)
            && self.target(&s.f) == self.source(&s.v)
            && self.source(&s.g) == self.target(&s.u)
            && self.target(&s.g) == self.target(&s.v);
        ok && self.compose(&s.f, &s.v).is_some() && self.compose(&s.f, &s.v) == self.compose(&s.u, &s.g)
    }

    /// Commutative squares whose left edge is `f`.
    fn squares_from(&self, f: &Self::Mor) -> Vec<Square<Self::Mor>> {
        let b = self.target(f);
        let mut out = Vec::new();
        for u in self.morphisms_from(&self.source(f)) {
            for g in self.morphisms_from(&self.target(&u)) {
                for v in self.morphisms_between(&b, &self.target(&g)) {
                    let s = Square { f: f.clone(), g: g.clone(), u: u.clone(), v };
                    if self.commutes(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// Commutative squares whose top edge is `u`.
    fn squares_with_top(&self, u: &Self::Mor) -> Vec<Square<Self::Mor>> {
        let mut out = Vec::new();
        for f in self.morphisms_from(&self.source(u)) {
            for g in self.morphisms_from(&self.target(u)) {
                for v in self.morphisms_between(&self.target(&f), &self.target(&g)) {
                    let s = Square { f: f.clone(), g: g.clone(), u: u.clone(), v };
                    if self.commutes(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }

    /// Commutative squares whose bottom edge is `v`.
    fn squares_with_bottom(&self, v: &Self::Mor) -> Vec<Square<Self::Mor>> {
        let mut out = Vec::new();
        for f in self.morphisms_into(&self.source(v)) {
            for g in self.morphisms_into(&self.target(v)) {
                for u in self.morphisms_between(&self.source(&f), &self.source(&g)) {
                    let s = Square { f: f.clone(), g: g.clone(), u, v: v.clone() };
                    if self.commutes(&s) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

impl Category for FinCategory {
    type Obj = Named;
    type Mor = Named;

    fn source(&self, f: &Named) -> Named {
        FinCategory::source(self, f)
    }
    fn target(&self, f: &Named) -> Named {
        FinCategory::target(self, f)
    }
    fn identity(&self, a: &Named) -> Named {
        FinCategory::identity(self, a)
    }
    fn compose(&self, f: &Named, g: &Named) -> Option<Named> {
        FinCategory::compose(self, f, g)
    }
    fn objects(&self) -> Vec<Named> {
        FinCategory::objects(self).to_vec()
    }
    fn morphisms_from(&self, a: &Named) -> Vec<Named> {
        self.morphisms().iter().filter(|f| &FinCategory::source(self, f) == a).cloned().collect()
    }
    fn morphisms_into(&self, b: &Named) -> Vec<Named> {
        self.morphisms().iter().filter(|f| &FinCategory::target(self, f) == b).cloned().collect()
    }
}

/// The full subcategory of finite sets on a universe.
///
/// Hom-sets are enumerated exhaustively. With `sampling` set, square
/// generators draw that many squares per call from a seeded generator
/// instead, which keeps large universes tractable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSetCategory {
    pub universe: Vec<FinSet>,
    pub sampling: Option<(usize, u64)>,
}

impl FinSetCategory {
    pub fn new(universe: Vec<FinSet>) -> Self {
        Self { universe, sampling: None }
    }

    /// `{∅, {0}, ..., {0..n-1}}`.
    pub fn sizes_up_to(n: usize) -> Self {
        Self::new((0..=n).map(FinSet::range).collect())
    }

    pub fn with_sampling(mut self, per_call: usize, seed: u64) -> Self {
        self.sampling = Some((per_call, seed));
        self
    }

    fn rng(&self, salt: &str, key: &impl fmt::Debug) -> ChaCha8Rng {
        let seed = self.sampling.map(|s| s.1).unwrap_or(0);
        ChaCha8Rng::seed_from_u64(seed ^ stable_hash(&format!("{salt}{key:?}")))
    }

    fn pick<'a>(&'a self, rng: &mut ChaCha8Rng) -> &'a FinSet {
        &self.universe[rng.gen_range(0..self.universe.len())]
    }

    fn sampled(
        &self,
        per: usize,
        seeded: Square<FinFunction>,
        mut draw: impl FnMut() -> Option<Square<FinFunction>>,
    ) -> Vec<Square<FinFunction>> {
        let mut out = vec![seeded];
        for _ in 0..per * 8 {
            if out.len() >= per {
                break;
            }
            if let Some(s) = draw() {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
}

/// A uniformly random function, or `None` into an empty codomain.
pub fn random_function(rng: &mut impl Rng, dom: &FinSet, cod: &FinSet) -> Option<FinFunction> {
    if cod.is_empty() && !dom.is_empty() {
        return None;
    }
    let map: Vec<usize> = (0..dom.len()).map(|_| rng.gen_range(0..cod.len())).collect();
    FinFunction::new(dom.clone(), cod.clone(), map).ok()
}

/// Solves `f ; v = w` for `v: cod(f) → cod(w)`, filling unconstrained points
/// at random. `None` if no solution exists.
fn solve_after(rng: &mut impl Rng, f: &FinFunction, w: &FinFunction) -> Option<FinFunction> {
    let (b, c) = (f.codomain(), w.codomain());
    let mut v: Vec<Option<usize>> = vec![None; b.len()];
    for i in 0..f.domain().len() {
        match v[f.at(i)] {
            Some(j) if j != w.at(i) => return None,
            _ => v[f.at(i)] = Some(w.at(i)),
        }
    }
    if c.is_empty() && v.iter().any(Option::is_none) {
        return None;
    }
    let map = v.into_iter().map(|j| j.unwrap_or_else(|| rng.gen_range(0..c.len()))).collect();
    FinFunction::new(b.clone(), c.clone(), map).ok()
}

/// Solves `u ; g = w` for `u: dom(w) → dom(g)`, choosing preimages at random.
pub(crate) fn solve_before(rng: &mut impl Rng, g: &FinFunction, w: &FinFunction) -> Option<FinFunction> {
    let map = (0..w.domain().len())
        .map(|i| {
            let pre = g.fiber(w.at(i));
            (!pre.is_empty()).then(|| pre[rng.gen_range(0..pre.len())])
        })
        .collect::<Option<Vec<_>>>()?;
    FinFunction::new(w.domain().clone(), g.domain().clone(), map).ok()
}

impl Category for FinSetCategory {
    type Obj = FinSet;
    type Mor = FinFunction;

    fn source(&self, f: &FinFunction) -> FinSet {
        f.domain().clone()
    }
    fn target(&self, f: &FinFunction) -> FinSet {
        f.codomain().clone()
    }
    fn identity(&self, a: &FinSet) -> FinFunction {
        FinFunction::identity(a)
    }
    fn compose(&self, f: &FinFunction, g: &FinFunction) -> Option<FinFunction> {
        f.then(g).ok()
    }
    fn objects(&self) -> Vec<FinSet> {
        self.universe.clone()
    }
    fn morphisms_from(&self, a: &FinSet) -> Vec<FinFunction> {
        self.universe.iter().flat_map(|b| FinFunction::all(a, b)).collect()
    }
    fn morphisms_into(&self, b: &FinSet) -> Vec<FinFunction> {
        self.universe.iter().flat_map(|a| FinFunction::all(a, b)).collect()
    }
    fn morphisms_between(&self, a: &FinSet, b: &FinSet) -> Vec<FinFunction> {
        FinFunction::all(a, b)
    }
    fn inverse(&self, f: &FinFunction) -> Option<FinFunction> {
        f.inverse()
    }

    fn squares_from(&self, f: &FinFunction) -> Vec<Square<FinFunction>> {
        let Some((per, _)) = self.sampling else {
            let b = f.codomain();
            let mut out = Vec::new();
            for u in self.morphisms_from(f.domain()) {
                for g in self.morphisms_from(u.codomain()) {
                    let w = u.then(&g).expect("composable");
                    for v in FinFunction::all(b, g.codomain()) {
                        if f.then(&v).as_ref() == Ok(&w) {
                            out.push(Square { f: f.clone(), g: g.clone(), u: u.clone(), v });
                        }
                    }
                }
            }
            return out;
        };
        let mut rng = self.rng("from", f);
        let (a, b) = (f.domain(), f.codomain());
        let id = Square { f: f.clone(), g: f.clone(), u: FinFunction::identity(a), v: FinFunction::identity(b) };
        self.sampled(per, id, || {
            let (a2, b2) = (self.pick(&mut rng).clone(), self.pick(&mut rng).clone());
            let u = random_function(&mut rng, a, &a2)?;
            let g = random_function(&mut rng, &a2, &b2)?;
            let v = solve_after(&mut rng, f, &u.then(&g).ok()?)?;
            Some(Square { f: f.clone(), g, u, v })
        })
    }

    fn squares_with_top(&self, u: &FinFunction) -> Vec<Square<FinFunction>> {
        let Some((per, _)) = self.sampling else {
            let mut out = Vec::new();
            for f in self.morphisms_from(u.domain()) {
                for g in self.morphisms_from(u.codomain()) {
                    let w = u.then(&g).expect("composable");
                    for v in FinFunction::all(f.codomain(), g.codomain()) {
                        if f.then(&v).as_ref() == Ok(&w) {
                            out.push(Square { f: f.clone(), g: g.clone(), u: u.clone(), v });
                        }
                    }
                }
            }
            return out;
        };
        let mut rng = self.rng("top", u);
        let (a, a2) = (u.domain(), u.codomain());
        let unit = Square { f: FinFunction::identity(a), g: FinFunction::identity(a2), u: u.clone(), v: u.clone() };
        self.sampled(per, unit, || {
            let (b, b2) = (self.pick(&mut rng).clone(), self.pick(&mut rng).clone());
            let f = random_function(&mut rng, a, &b)?;
            let g = random_function(&mut rng, a2, &b2)?;
            let v = solve_after(&mut rng, &f, &u.then(&g).ok()?)?;
            Some(Square { f, g, u: u.clone(), v })
        })
    }

    fn squares_with_bottom(&self, v: &FinFunction) -> Vec<Square<FinFunction>> {
        let Some((per, _)) = self.sampling else {
            let mut out = Vec::new();
            for f in self.morphisms_into(v.domain()) {
                for g in self.morphisms_into(v.codomain()) {
                    let w = f.then(v).expect("composable");
                    for u in FinFunction::all(f.domain(), g.domain()) {
                        if u.then(&g).as_ref() == Ok(&w) {
                            out.push(Square { f: f.clone(), g: g.clone(), u, v: v.clone() });
                        }
                    }
                }
            }
            return out;
        };
        let mut rng = self.rng("bottom", v);
        let (b, b2) = (v.domain(), v.codomain());
        let unit = Square { f: FinFunction::identity(b), g: FinFunction::identity(b2), u: v.clone(), v: v.clone() };
        self.sampled(per, unit, || {
            let (a, a2) = (self.pick(&mut rng).clone(), self.pick(&mut rng).clone());
            let f = random_function(&mut rng, &a, b)?;
            let g = random_function(&mut rng, &a2, b2)?;
            let u = solve_before(&mut rng, &g, &f.then(v).ok()?)?;
            Some(Square { f, g, u, v: v.clone() })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_squares_commute() {
        let c = FinSetCategory::sizes_up_to(3).with_sampling(12, 7);
        for f in c.morphisms_from(&FinSet::range(2)) {
            for s in c.squares_from(&f).iter().chain(&c.squares_with_top(&f)).chain(&c.squares_with_bottom(&f)) {
                assert!(c.commutes(s), "{s:?}");
            }
        }
    }

    #[test]
    fn exhaustive_and_generic_square_enumerations_agree() {
        let c = FinSetCategory::sizes_up_to(2);
        let f = FinFunction::identity(&FinSet::range(1));
        let generic = {
            let mut out = Vec::new();
            for u in c.morphisms_from(f.domain()) {
                for g in c.morphisms_from(u.codomain()) {
                    for v in c.morphisms_between(f.codomain(), g.codomain()) {
                        let s = Square { f: f.clone(), g: g.clone(), u: u.clone(), v };
                        if c.commutes(&s) {
                            out.push(s);
                        }
                    }
                }
            }
            out
        };
        assert_eq!(c.squares_from(&f), generic);
    }

    #[test]
    fn inverses_in_the_walking_isomorphism() {
        let c = FinCategory::iso_and_arrow();
        let i = c.morphism("i").unwrap();
        assert_eq!(Category::inverse(&c, &i), c.morphism("j"));
        assert!(!c.is_isomorphism(&c.morphism("a").unwrap()));
    }
}
