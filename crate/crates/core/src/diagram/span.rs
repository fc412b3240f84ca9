use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::random_function;
use crate::double::{stable_hash, DoubleCategory, Strictness, Witness};
use crate::finset::{pair_name, pullback, FinFunction, FinSet};

/// A span `A ←π M →f B` of finite sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub left: FinFunction,
    pub right: FinFunction,
}

impl fmt::Debug for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = (self.left.indices(), self.right.indices());
        write!(f, "{:?}←{:?}{:?}→{:?}", self.foot_left(), self.apex(), (l, r), self.foot_right())
    }
}

impl Span {
    /// `None` unless both legs leave the same apex.
    pub fn new(left: FinFunction, right: FinFunction) -> Option<Span> {
        (left.domain() == right.domain()).then_some(Span { left, right })
    }

    pub fn apex(&self) -> &FinSet {
        self.left.domain()
    }

    pub fn foot_left(&self) -> &FinSet {
        self.left.codomain()
    }

    pub fn foot_right(&self) -> &FinSet {
        self.right.codomain()
    }

    /// `A ←id A →id A`.
    pub fn identity(a: &FinSet) -> Span {
        Span { left: FinFunction::identity(a), right: FinFunction::identity(a) }
    }

    /// `self` then `next`: apex `M ×_B M′`, legs `π∘π₁` and `f′∘π₂`.
    pub fn then(&self, next: &Span) -> Option<Span> {
        let cone = pullback(&self.right, &next.left).ok()?;
        Some(Span { left: cone.pi1.then(&self.left).ok()?, right: cone.pi2.then(&next.right).ok()? })
    }
}

/// A morphism of spans `(u, v, w)`: `u` on the left feet, `v` on the apices,
/// `w` on the right feet, with `π′∘v = u∘π` and `f′∘v = w∘f`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpanCell {
    pub source: Span,
    pub target: Span,
    pub u: FinFunction,
    pub v: FinFunction,
    pub w: FinFunction,
}

impl fmt::Debug for SpanCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?} ⇒ {:?} | u={:?}, v={:?}, w={:?})",
            self.source,
            self.target,
            self.u.indices(),
            self.v.indices(),
            self.w.indices()
        )
    }
}

impl SpanCell {
    pub fn is_valid(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        let shapes = self.u.domain() == s.foot_left()
            && self.u.codomain() == t.foot_left()
            && self.w.domain() == s.foot_right()
            && self.w.codomain() == t.foot_right()
            && self.v.domain() == s.apex()
            && self.v.codomain() == t.apex();
        shapes && self.v.then(&t.left) == s.left.then(&self.u) && self.v.then(&t.right) == s.right.then(&self.w)
    }
}

/// `Span(FinSet)` over a universe of feet.
///
/// 1-cells from a foot are drawn deterministically from the seed
/// (`per_pair` spans per pair of feet, apices of size `≤ max_apex`), and
/// 2-cells either fix the apex (`v = id`) or enlarge it by one point.
/// Composition is by pullback, so the instance is weak: associators
/// re-bracket `((m,m′),m″) ↦ (m,(m′,m″))` and unitors collapse pullbacks
/// along identity legs.
#[derive(Debug, Clone)]
pub struct SpanDoubleCategory {
    pub universe: Vec<FinSet>,
    pub max_apex: usize,
    pub per_pair: usize,
    pub squares_per_cell: usize,
    pub seed: u64,
}

impl SpanDoubleCategory {
    pub fn new(universe: Vec<FinSet>, seed: u64) -> Self {
        Self { universe, max_apex: 3, per_pair: 2, squares_per_cell: 3, seed }
    }

    fn rng(&self, salt: &str, key: &impl fmt::Debug) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ stable_hash(&format!("{salt}{key:?}")))
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> FinSet {
        self.universe[rng.gen_range(0..self.universe.len())].clone()
    }

    fn random_span(&self, rng: &mut ChaCha8Rng, a: &FinSet, b: &FinSet) -> Option<Span> {
        let apex = FinSet::named("m", rng.gen_range(0..=self.max_apex));
        Span::new(random_function(rng, &apex, a)?, random_function(rng, &apex, b)?)
    }

    fn spans(&self, salt: &str, fixed: &FinSet, fixed_is_left: bool) -> Vec<Span> {
        let mut out = vec![Span::identity(fixed)];
        let mut rng = self.rng(salt, fixed);
        for other in &self.universe {
            let mut found = 0;
            for _ in 0..self.per_pair * 8 {
                if found == self.per_pair {
                    break;
                }
                let s = if fixed_is_left {
                    self.random_span(&mut rng, fixed, other)
                } else {
                    self.random_span(&mut rng, other, fixed)
                };
                if let Some(s) = s.filter(|s| !out.contains(s)) {
                    out.push(s);
                    found += 1;
                }
            }
        }
        out
    }

    /// A random 2-cell out of `x`, with `u`/`w` fixed when given.
    fn random_cell(
        &self,
        rng: &mut ChaCha8Rng,
        x: &Span,
        u: Option<&FinFunction>,
        w: Option<&FinFunction>,
    ) -> Option<SpanCell> {
        let u = match u {
            Some(u) => u.clone(),
            None => {
                let a2 = self.pick(rng);
                random_function(rng, x.foot_left(), &a2)?
            }
        };
        let w = match w {
            Some(w) => w.clone(),
            None => {
                let b2 = self.pick(rng);
                random_function(rng, x.foot_right(), &b2)?
            }
        };
        let left = x.left.then(&u).ok()?;
        let right = x.right.then(&w).ok()?;
        if rng.gen_bool(0.5) {
            let target = Span::new(left, right)?;
            return Some(SpanCell { source: x.clone(), target, u, v: FinFunction::identity(x.apex()), w });
        }
        // Enlarge the apex by one point with random legs.
        let m = x.apex();
        let mut names = m.elements().to_vec();
        names.push(format!("+{}", m.len()));
        let m2 = FinSet::new(names).ok()?;
        let (a2, b2) = (u.codomain(), w.codomain());
        if a2.is_empty() || b2.is_empty() {
            return None;
        }
        let (ea, eb) = (rng.gen_range(0..a2.len()), rng.gen_range(0..b2.len()));
        let n = m.len();
        let l2 = FinFunction::from_fn(&m2, a2, |i| if i < n { left.at(i) } else { ea });
        let r2 = FinFunction::from_fn(&m2, b2, |i| if i < n { right.at(i) } else { eb });
        let v = FinFunction::from_fn(m, &m2, |i| i);
        Some(SpanCell { source: x.clone(), target: Span::new(l2, r2)?, u, v, w })
    }

    fn cells_sampled(
        &self,
        salt: &str,
        key: &impl fmt::Debug,
        sources: Vec<Span>,
        seeded: Option<SpanCell>,
        u: Option<&FinFunction>,
        w: Option<&FinFunction>,
    ) -> Vec<SpanCell> {
        let mut out: Vec<SpanCell> = seeded.into_iter().collect();
        if sources.is_empty() {
            return out;
        }
        let mut rng = self.rng(salt, key);
        for _ in 0..self.squares_per_cell * 8 {
            if out.len() >= self.squares_per_cell {
                break;
            }
            let x = &sources[rng.gen_range(0..sources.len())];
            if let Some(c) = self.random_cell(&mut rng, x, u, w) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Re-indexes apex elements by name, with `rename` applied to each.
    fn rename(&self, from: &Span, to: &Span, rename: impl Fn(&str) -> Option<String>) -> Option<FinFunction> {
        let map = from.apex().elements().iter().map(|e| to.apex().index_of(&rename(e)?)).collect::<Option<Vec<_>>>()?;
        FinFunction::new(from.apex().clone(), to.apex().clone(), map).ok()
    }
}

/// Splits a canonical pair name `(x,y)` at its top-level comma.
pub(crate) fn split_pair(s: &str) -> Option<(&str, &str)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

impl DoubleCategory for SpanDoubleCategory {
    type Obj = FinSet;
    type Mor = FinFunction;
    type Cell1 = Span;
    type Cell2 = SpanCell;

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
    fn d(&self, x: &Span) -> FinSet {
        x.foot_left().clone()
    }
    fn r(&self, x: &Span) -> FinSet {
        x.foot_right().clone()
    }
    fn src2(&self, a: &SpanCell) -> Span {
        a.source.clone()
    }
    fn tgt2(&self, a: &SpanCell) -> Span {
        a.target.clone()
    }
    fn d2(&self, a: &SpanCell) -> FinFunction {
        a.u.clone()
    }
    fn r2(&self, a: &SpanCell) -> FinFunction {
        a.w.clone()
    }
    fn id2(&self, x: &Span) -> SpanCell {
        SpanCell {
            source: x.clone(),
            target: x.clone(),
            u: FinFunction::identity(x.foot_left()),
            v: FinFunction::identity(x.apex()),
            w: FinFunction::identity(x.foot_right()),
        }
    }
    fn compose2(&self, a: &SpanCell, b: &SpanCell) -> Option<SpanCell> {
        if a.target != b.source {
            return None;
        }
        Some(SpanCell {
            source: a.source.clone(),
            target: b.target.clone(),
            u: a.u.then(&b.u).ok()?,
            v: a.v.then(&b.v).ok()?,
            w: a.w.then(&b.w).ok()?,
        })
    }
    fn star(&self, x: &Span, y: &Span) -> Option<Span> {
        x.then(y)
    }
    fn star2(&self, a: &SpanCell, b: &SpanCell) -> Option<SpanCell> {
        if a.w != b.u {
            return None;
        }
        let source = a.source.then(&b.source)?;
        let target = a.target.then(&b.target)?;
        let v = self.rename(&source, &target, |e| {
            let (m, m2) = split_pair(e)?;
            Some(pair_name(a.v.apply(m)?, b.v.apply(m2)?))
        })?;
        Some(SpanCell { source, target, u: a.u.clone(), v, w: b.w.clone() })
    }
    fn unit(&self, a: &FinSet) -> Span {
        Span::identity(a)
    }
    fn unit2(&self, f: &FinFunction) -> SpanCell {
        SpanCell {
            source: Span::identity(f.domain()),
            target: Span::identity(f.codomain()),
            u: f.clone(),
            v: f.clone(),
            w: f.clone(),
        }
    }
    fn strictness(&self) -> Strictness {
        Strictness::Weak
    }

    fn associator(&self, x: &Span, y: &Span, z: &Span) -> Option<Witness<SpanCell>> {
        let left = x.then(y)?.then(z)?;
        let right = x.then(&y.then(z)?)?;
        let forward = self.rename(&left, &right, |e| {
            let (mm, m3) = split_pair(e)?;
            let (m1, m2) = split_pair(mm)?;
            Some(pair_name(m1, &pair_name(m2, m3)))
        })?;
        let inverse = self.rename(&right, &left, |e| {
            let (m1, mm) = split_pair(e)?;
            let (m2, m3) = split_pair(mm)?;
            Some(pair_name(&pair_name(m1, m2), m3))
        })?;
        let (ia, ib) = (FinFunction::identity(x.foot_left()), FinFunction::identity(z.foot_right()));
        Some(Witness::new(
            SpanCell { source: left.clone(), target: right.clone(), u: ia.clone(), v: forward, w: ib.clone() },
            SpanCell { source: right, target: left, u: ia, v: inverse, w: ib },
        ))
    }

    fn left_unitor(&self, x: &Span) -> Option<Witness<SpanCell>> {
        let collapsed = Span::identity(x.foot_left()).then(x)?;
        let forward = self.rename(&collapsed, x, |e| split_pair(e).map(|(_, m)| m.to_string()))?;
        let inverse = self.rename(x, &collapsed, |m| Some(pair_name(x.left.apply(m)?, m)))?;
        let (ia, ib) = (FinFunction::identity(x.foot_left()), FinFunction::identity(x.foot_right()));
        Some(Witness::new(
            SpanCell { source: collapsed.clone(), target: x.clone(), u: ia.clone(), v: forward, w: ib.clone() },
            SpanCell { source: x.clone(), target: collapsed, u: ia, v: inverse, w: ib },
        ))
    }

    fn right_unitor(&self, x: &Span) -> Option<Witness<SpanCell>> {
        let collapsed = x.then(&Span::identity(x.foot_right()))?;
        let forward = self.rename(&collapsed, x, |e| split_pair(e).map(|(m, _)| m.to_string()))?;
        let inverse = self.rename(x, &collapsed, |m| Some(pair_name(m, x.right.apply(m)?)))?;
        let (ia, ib) = (FinFunction::identity(x.foot_left()), FinFunction::identity(x.foot_right()));
        Some(Witness::new(
            SpanCell { source: collapsed.clone(), target: x.clone(), u: ia.clone(), v: forward, w: ib.clone() },
            SpanCell { source: x.clone(), target: collapsed, u: ia, v: inverse, w: ib },
        ))
    }

    fn is_valid2(&self, a: &SpanCell) -> bool {
        a.is_valid()
    }

    fn objects(&self) -> Vec<FinSet> {
        self.universe.clone()
    }
    fn morphisms_from(&self, a: &FinSet) -> Vec<FinFunction> {
        self.universe.iter().flat_map(|b| FinFunction::all(a, b)).collect()
    }
    fn cells_from(&self, a: &FinSet) -> Vec<Span> {
        self.spans("from", a, true)
    }
    fn cells_into(&self, b: &FinSet) -> Vec<Span> {
        self.spans("into", b, false)
    }
    fn squares_from(&self, x: &Span) -> Vec<SpanCell> {
        self.cells_sampled("sq", x, vec![x.clone()], Some(self.id2(x)), None, None)
    }
    fn squares_with_d(&self, u: &FinFunction) -> Vec<SpanCell> {
        let seeded = self.unit2(u);
        self.cells_sampled("sqd", u, self.cells_from(u.domain()), Some(seeded), Some(u), None)
    }
    fn squares_with_r(&self, w: &FinFunction) -> Vec<SpanCell> {
        let seeded = self.unit2(w);
        self.cells_sampled("sqr", w, self.cells_into(w.domain()), Some(seeded), None, Some(w))
    }
}
