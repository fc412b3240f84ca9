//! Left actions of a double category `D` on a category `M` over `D0`.
//!
//! An action has a projection `p: M → D0` and an action map `(ξ, m) ↦ ξ ∗ m`
//! defined when `p(m) = r(ξ)`, landing over `d(ξ)`. The same holds one level
//! up for 2-cells and morphisms. Coherence is carried by invertible
//! morphisms of `M`: the associativity witness
//! `φ_{ξ,ξ′,m}: (ξ ∗ ξ′) ∗ m → ξ ∗ (ξ′ ∗ m)` and the unit witness
//! `χ_{A,m}: ID_A ∗ m → m`.
//!
//! With the diagrammatic `∗` of this crate, `(ξ ∗ ξ′) ∗ m` is defined for
//! `ξ: A ⇒ B`, `ξ′: B ⇒ C` and `m` over `C`. Right actions are left actions
//! of [`Dual`].

use std::collections::{HashMap, HashSet};
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bimod::{AlgDoubleCategory, Algebra, AlgebraMap, Bimodule, BimoduleCell, FinDimAlgebra};
use crate::category::{random_function, solve_before, Category, FinSetCategory, Square};
use crate::diagram::{iso_double_category, Morph};
use crate::double::{
    stable_hash, walk, Budget, DoubleCategory, DoubleCategoryExt, Dual, LawReport, Restricted, StructuralError, Witness,
};
use crate::finset::{pullback, FinFunction, FinSet, PullbackCone};

pub type DObj<A> = <<A as Action>::D as DoubleCategory>::Obj;
pub type DMor<A> = <<A as Action>::D as DoubleCategory>::Mor;
pub type DCell<A> = <<A as Action>::D as DoubleCategory>::Cell1;
pub type DSq<A> = <<A as Action>::D as DoubleCategory>::Cell2;
pub type MObj<A> = <<A as Action>::M as Category>::Obj;
pub type MMor<A> = <<A as Action>::M as Category>::Mor;

/// A left action of `D` on `M`. Witnesses left as `None` mean the law holds
/// on the nose and the identity is used.
pub trait Action {
    type D: DoubleCategory;
    type M: Category;

    fn double(&self) -> &Self::D;
    fn acted(&self) -> &Self::M;
    fn project(&self, m: &MObj<Self>) -> DObj<Self>;
    fn project_mor(&self, u: &MMor<Self>) -> DMor<Self>;
    /// `ξ ∗ m`, for `p(m) = r(ξ)`.
    fn act(&self, xi: &DCell<Self>, m: &MObj<Self>) -> Option<MObj<Self>>;
    /// `α ∗ u`, for `p(u) = r(α)`.
    fn act_mor(&self, alpha: &DSq<Self>, u: &MMor<Self>) -> Option<MMor<Self>>;

    /// `(ξ ∗ ξ′) ∗ m → ξ ∗ (ξ′ ∗ m)`.
    fn associator(&self, _xi: &DCell<Self>, _xi2: &DCell<Self>, _m: &MObj<Self>) -> Option<Witness<MMor<Self>>> {
        None
    }

    /// `ID_{p m} ∗ m → m`.
    fn unitor(&self, _m: &MObj<Self>) -> Option<Witness<MMor<Self>>> {
        None
    }

    /// Morphisms out of `m` lying over `f`, used to build composable test
    /// chains. The default filters the enumeration.
    fn morphisms_over(&self, m: &MObj<Self>, f: &DMor<Self>) -> Vec<MMor<Self>> {
        self.acted().morphisms_from(m).into_iter().filter(|u| self.project_mor(u) == *f).collect()
    }

    /// What an object costs against an orbit budget; module-like actions
    /// whose objects grow under the action report their size.
    fn weight(&self, _m: &MObj<Self>) -> usize {
        1
    }

    /// An isomorphism from `m` to a canonical representative of its class,
    /// when the action produces ever-new names for isomorphic objects.
    fn canonical(&self, _m: &MObj<Self>) -> Option<Witness<MMor<Self>>> {
        None
    }
}

/// A predicate on objects of `M` that the action should preserve.
pub struct Invariant<'a, O> {
    pub name: &'a str,
    pub holds: &'a dyn Fn(&O) -> bool,
}

#[derive(Clone)]
enum Node<O, U, C, S> {
    Obj(O),
    Mor(U),
    Cell(C),
    Sq(S),
}

impl<O, U, C, S> Node<O, U, C, S> {
    fn obj(&self) -> &O {
        match self {
            Node::Obj(o) => o,
            _ => unreachable!("chain layout"),
        }
    }
    fn mor(&self) -> &U {
        match self {
            Node::Mor(u) => u,
            _ => unreachable!("chain layout"),
        }
    }
    fn cell(&self) -> &C {
        match self {
            Node::Cell(c) => c,
            _ => unreachable!("chain layout"),
        }
    }
    fn sq(&self) -> &S {
        match self {
            Node::Sq(s) => s,
            _ => unreachable!("chain layout"),
        }
    }
}

type N<A> = Node<MObj<A>, MMor<A>, DCell<A>, DSq<A>>;

fn undefined(op: &'static str, cells: impl Debug) -> StructuralError {
    StructuralError::Undefined { op, cells: format!("{cells:?}") }
}

fn must_act<A: Action + ?Sized>(a: &A, xi: &DCell<A>, m: &MObj<A>) -> Result<MObj<A>, StructuralError> {
    a.act(xi, m).ok_or_else(|| undefined("act", (xi, m)))
}

fn must_act_mor<A: Action + ?Sized>(a: &A, alpha: &DSq<A>, u: &MMor<A>) -> Result<MMor<A>, StructuralError> {
    a.act_mor(alpha, u).ok_or_else(|| undefined("act_mor", (alpha, u)))
}

fn must_compose<A: Action + ?Sized>(a: &A, u: &MMor<A>, v: &MMor<A>) -> Result<MMor<A>, StructuralError> {
    a.acted().compose(u, v).ok_or_else(|| undefined("compose", (u, v)))
}

/// A witness is typed `from → to`, lies over an identity, and is inverse to
/// its declared inverse.
fn witness_ok<A: Action + ?Sized>(a: &A, w: &Witness<MMor<A>>, from: &MObj<A>, to: &MObj<A>) -> bool {
    let m = a.acted();
    let d = a.double();
    let (f, g) = (&w.forward, &w.inverse);
    m.source(f) == *from
        && m.target(f) == *to
        && m.source(g) == *to
        && m.target(g) == *from
        && a.project_mor(f) == d.id0(&a.project(from))
        && m.compose(f, g) == Some(m.identity(from))
        && m.compose(g, f) == Some(m.identity(to))
}

fn witness_or_identity<A: Action + ?Sized>(
    a: &A,
    w: Option<Witness<MMor<A>>>,
    from: &MObj<A>,
    to: &MObj<A>,
) -> Option<Witness<MMor<A>>> {
    match w {
        Some(w) => Some(w),
        None if from == to => {
            let id = a.acted().identity(from);
            Some(Witness::new(id.clone(), id))
        }
        None => None,
    }
}

pub fn check_action<A: Action + ?Sized>(a: &A, budget: &Budget) -> Result<LawReport, StructuralError> {
    check_action_with_invariants(a, budget, &[])
}

/// Checks the projection law, functoriality of the action map, the
/// associativity and unit witnesses (typing, invertibility, naturality), and
/// preservation of each supplied invariant.
pub fn check_action_with_invariants<A: Action + ?Sized>(
    a: &A,
    budget: &Budget,
    invariants: &[Invariant<'_, MObj<A>>],
) -> Result<LawReport, StructuralError> {
    let (d, m) = (a.double(), a.acted());
    let mut report = LawReport::new();
    for law in [
        "action.projection",
        "action.functor",
        "associator.witness",
        "associator.naturality",
        "unitor.witness",
        "unitor.naturality",
    ] {
        report.declare(law);
    }
    let invariant_laws: Vec<String> = invariants.iter().map(|i| format!("invariant.{}", i.name)).collect();
    for law in &invariant_laws {
        report.declare(law);
    }

    let objects: Vec<N<A>> = m.objects().into_iter().map(Node::Obj).collect();
    let morphisms: Vec<N<A>> = m.objects().iter().flat_map(|o| m.morphisms_from(o)).map(Node::Mor).collect();

    let into_obj = |c: &[N<A>]| d.cells_into(&a.project(c[0].obj())).into_iter().map(Node::Cell).collect();
    let into_cell = |c: &[N<A>]| d.cells_into(&d.d(c[c.len() - 1].cell())).into_iter().map(Node::Cell).collect();
    let over_mor = |c: &[N<A>]| d.squares_with_r(&a.project_mor(c[0].mor())).into_iter().map(Node::Sq).collect();
    let over_sq = |c: &[N<A>]| d.squares_with_r(&d.d2(c[c.len() - 1].sq())).into_iter().map(Node::Sq).collect();

    // Objects: projection, identities, invariants.
    walk(budget, "action.objects", &objects, &[&into_obj], &mut |c| {
        let (mo, xi) = (c[0].obj(), c[1].cell());
        let acted = must_act(a, xi, mo)?;
        report.record("action.projection", a.project(&acted) == d.d(xi), || format!("{xi:?} ∗ {mo:?}"));
        let id = must_act_mor(a, &d.id2(xi), &m.identity(mo))?;
        report.record("action.functor", id == m.identity(&acted), || format!("identity at {xi:?} ∗ {mo:?}"));
        for (inv, law) in invariants.iter().zip(&invariant_laws) {
            report.record(law, !(inv.holds)(mo) || (inv.holds)(&acted), || format!("{xi:?} ∗ {mo:?}"));
        }
        Ok(())
    })?;

    // Morphisms: projection and typing of α ∗ u.
    walk(budget, "action.morphisms", &morphisms, &[&over_mor], &mut |c| {
        let (u, alpha) = (c[0].mor(), c[1].sq());
        let acted = must_act_mor(a, alpha, u)?;
        let ok = a.project_mor(&acted) == d.d2(alpha)
            && m.source(&acted) == must_act(a, &d.src2(alpha), &m.source(u))?
            && m.target(&acted) == must_act(a, &d.tgt2(alpha), &m.target(u))?;
        report.record("action.projection", ok, || format!("{alpha:?} ∗ {u:?}"));
        Ok(())
    })?;

    // Composition: (α ; β) ∗ (u ; v) = (α ∗ u) ; (β ∗ v).
    let after_alpha = |c: &[N<A>]| d.squares_from(&d.tgt2(c[1].sq())).into_iter().map(Node::Sq).collect();
    let over_beta = |c: &[N<A>]| {
        let target = m.target(c[0].mor());
        a.morphisms_over(&target, &d.r2(c[2].sq())).into_iter().map(Node::Mor).collect()
    };
    walk(budget, "action.composition", &morphisms, &[&over_mor, &after_alpha, &over_beta], &mut |c| {
        let (u, alpha, beta, v) = (c[0].mor(), c[1].sq(), c[2].sq(), c[3].mor());
        let lhs = must_act_mor(a, &d.must_compose2(alpha, beta)?, &must_compose(a, u, v)?)?;
        let rhs = must_compose(a, &must_act_mor(a, alpha, u)?, &must_act_mor(a, beta, v)?)?;
        report.record("action.functor", lhs == rhs, || format!("{alpha:?} ; {beta:?} over {u:?} ; {v:?}"));
        Ok(())
    })?;

    let assoc = |xi: &DCell<A>,
                 xi2: &DCell<A>,
                 mo: &MObj<A>|
     -> Result<(MObj<A>, MObj<A>, Option<Witness<MMor<A>>>), StructuralError> {
        let from = must_act(a, &d.must_star(xi, xi2)?, mo)?;
        let to = must_act(a, xi, &must_act(a, xi2, mo)?)?;
        let w = witness_or_identity(a, a.associator(xi, xi2, mo), &from, &to);
        Ok((from, to, w))
    };
    walk(budget, "associator.witness", &objects, &[&into_obj, &into_cell], &mut |c| {
        let (mo, xi2, xi) = (c[0].obj(), c[1].cell(), c[2].cell());
        let (from, to, w) = assoc(xi, xi2, mo)?;
        let ok = w.is_some_and(|w| witness_ok(a, &w, &from, &to));
        report.record("associator.witness", ok, || format!("({xi:?} ∗ {xi2:?}) ∗ {mo:?}"));
        Ok(())
    })?;
    walk(budget, "associator.naturality", &morphisms, &[&over_mor, &over_sq], &mut |c| {
        let (u, alpha2, alpha) = (c[0].mor(), c[1].sq(), c[2].sq());
        let (_, _, w_src) = assoc(&d.src2(alpha), &d.src2(alpha2), &m.source(u))?;
        let (_, _, w_tgt) = assoc(&d.tgt2(alpha), &d.tgt2(alpha2), &m.target(u))?;
        let ok = match (w_src, w_tgt) {
            (Some(ws), Some(wt)) => {
                let left = must_act_mor(a, &d.must_star2(alpha, alpha2)?, u)?;
                let right = must_act_mor(a, alpha, &must_act_mor(a, alpha2, u)?)?;
                must_compose(a, &left, &wt.forward)? == must_compose(a, &ws.forward, &right)?
            }
            _ => false,
        };
        report.record("associator.naturality", ok, || format!("({alpha:?} ∗ {alpha2:?}) ∗ {u:?}"));
        Ok(())
    })?;

    let unit = |mo: &MObj<A>| -> Result<(MObj<A>, Option<Witness<MMor<A>>>), StructuralError> {
        let from = must_act(a, &d.unit(&a.project(mo)), mo)?;
        let w = witness_or_identity(a, a.unitor(mo), &from, mo);
        Ok((from, w))
    };
    walk(budget, "unitor.witness", &objects, &[], &mut |c| {
        let mo = c[0].obj();
        let (from, w) = unit(mo)?;
        report.record("unitor.witness", w.is_some_and(|w| witness_ok(a, &w, &from, mo)), || format!("{mo:?}"));
        Ok(())
    })?;
    walk(budget, "unitor.naturality", &morphisms, &[], &mut |c| {
        let u = c[0].mor();
        let (_, ws) = unit(&m.source(u))?;
        let (_, wt) = unit(&m.target(u))?;
        let ok = match (ws, wt) {
            (Some(ws), Some(wt)) => {
                let lifted = must_act_mor(a, &d.unit2(&a.project_mor(u)), u)?;
                must_compose(a, &ws.forward, u)? == must_compose(a, &lifted, &wt.forward)?
            }
            _ => false,
        };
        report.record("unitor.naturality", ok, || format!("{u:?}"));
        Ok(())
    })?;
    Ok(report)
}

/// `c(ξ ∗ m) = H₁(ξ)(c(m))` on the sampled pairs `(ξ, m)`.
pub fn check_characteristic_class<A: Action + ?Sized, V: PartialEq + Debug>(
    a: &A,
    class: &dyn Fn(&MObj<A>) -> V,
    pull: &dyn Fn(&DCell<A>, &V) -> V,
    budget: &Budget,
) -> Result<LawReport, StructuralError> {
    let d = a.double();
    let mut report = LawReport::new();
    report.declare("class.naturality");
    let objects: Vec<N<A>> = a.acted().objects().into_iter().map(Node::Obj).collect();
    let into_obj = |c: &[N<A>]| d.cells_into(&a.project(c[0].obj())).into_iter().map(Node::Cell).collect();
    walk(budget, "class.naturality", &objects, &[&into_obj], &mut |c| {
        let (mo, xi) = (c[0].obj(), c[1].cell());
        let lhs = class(&must_act(a, xi, mo)?);
        let rhs = pull(xi, &class(mo));
        report.record("class.naturality", lhs == rhs, || format!("{xi:?} ∗ {mo:?}: {lhs:?} vs {rhs:?}"));
        Ok(())
    })?;
    Ok(report)
}

/// One application of the action recorded during an orbit computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub cell: String,
    pub from: usize,
    pub to: usize,
}

/// A subcategory of `M`: objects, morphisms, and which cell produced which
/// object (indices into `objects`).
#[derive(Debug, Clone)]
pub struct Orbit<O, U> {
    pub objects: Vec<O>,
    pub morphisms: Vec<U>,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Error)]
pub enum OrbitError<O: Debug, U: Debug> {
    #[error("budget of {budget} objects and morphisms exhausted before the fixpoint")]
    BudgetExhausted { budget: usize, partial: Orbit<O, U> },
    #[error("seed is not a subcategory: {0}")]
    BadSeed(String),
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

pub type OrbitResult<A> = Result<Orbit<MObj<A>, MMor<A>>, OrbitError<MObj<A>, MMor<A>>>;

fn normalize<A: Action + ?Sized>(a: &A, m: MObj<A>) -> MObj<A> {
    match a.canonical(&m) {
        Some(w) => a.acted().target(&w.forward),
        None => m,
    }
}

fn normalize_mor<A: Action + ?Sized>(a: &A, u: MMor<A>) -> Result<MMor<A>, StructuralError> {
    let cat = a.acted();
    let (s, t) = (a.canonical(&cat.source(&u)), a.canonical(&cat.target(&u)));
    let u = match s {
        Some(w) => must_compose(a, &w.inverse, &u)?,
        None => u,
    };
    match t {
        Some(w) => must_compose(a, &u, &w.forward),
        None => Ok(u),
    }
}

/// Enumerations of `D` that closure computations request repeatedly.
struct Frames<A: Action + ?Sized> {
    cells_into: HashMap<DObj<A>, Vec<DCell<A>>>,
    squares_with_r: HashMap<DMor<A>, Vec<DSq<A>>>,
}

impl<A: Action + ?Sized> Frames<A> {
    fn new() -> Self {
        Self { cells_into: HashMap::new(), squares_with_r: HashMap::new() }
    }

    fn cells_into(&mut self, a: &A, b: DObj<A>) -> Vec<DCell<A>> {
        self.cells_into.entry(b).or_insert_with_key(|b| a.double().cells_into(b)).clone()
    }

    fn squares_with_r(&mut self, a: &A, v: DMor<A>) -> Vec<DSq<A>> {
        self.squares_with_r.entry(v).or_insert_with_key(|v| a.double().squares_with_r(v)).clone()
    }
}

/// Objects and morphisms that closure requires once `mo` is present.
fn object_consequences<A: Action + ?Sized>(
    a: &A,
    frames: &mut Frames<A>,
    mo: &MObj<A>,
) -> Result<(Vec<(String, MObj<A>)>, MMor<A>), StructuralError> {
    let acted = frames
        .cells_into(a, a.project(mo))
        .into_iter()
        .map(|xi| Ok((format!("{xi:?}"), normalize(a, must_act(a, &xi, mo)?))))
        .collect::<Result<_, StructuralError>>()?;
    Ok((acted, a.acted().identity(mo)))
}

/// Morphisms that closure requires once `u` is present alongside `others`.
fn morphism_consequences<A: Action + ?Sized>(
    a: &A,
    frames: &mut Frames<A>,
    u: &MMor<A>,
    others: &[MMor<A>],
) -> Result<Vec<MMor<A>>, StructuralError> {
    let m = a.acted();
    let mut out = Vec::new();
    for alpha in frames.squares_with_r(a, a.project_mor(u)) {
        out.push(normalize_mor(a, must_act_mor(a, &alpha, u)?)?);
    }
    for v in others {
        if m.target(u) == m.source(v) {
            out.push(must_compose(a, u, v)?);
        }
        if m.target(v) == m.source(u) {
            out.push(must_compose(a, v, u)?);
        }
    }
    Ok(out)
}

struct Closure<O, U> {
    objects: Vec<O>,
    object_index: HashMap<O, usize>,
    morphisms: Vec<U>,
    morphism_set: HashSet<U>,
    trace: Vec<TraceStep>,
    budget: usize,
    spent: usize,
}

impl<O: Clone + Eq + std::hash::Hash + Debug, U: Clone + Eq + std::hash::Hash + Debug> Closure<O, U> {
    fn over_budget(&self) -> bool {
        self.spent > self.budget
    }

    fn exhausted(self) -> OrbitError<O, U> {
        OrbitError::BudgetExhausted {
            budget: self.budget,
            partial: Orbit { objects: self.objects, morphisms: self.morphisms, trace: self.trace },
        }
    }

    /// Index of `o`, charging `weight` if it is new.
    fn add_object(&mut self, o: O, weight: usize) -> usize {
        if let Some(&i) = self.object_index.get(&o) {
            return i;
        }
        self.spent += weight;
        self.object_index.insert(o.clone(), self.objects.len());
        self.objects.push(o);
        self.objects.len() - 1
    }

    fn add_morphism(&mut self, u: U) {
        if self.morphism_set.insert(u.clone()) {
            self.spent += 1;
            self.morphisms.push(u);
        }
    }
}

/// The least subcategory containing the seed that is closed under the action
/// (up to the canonical representatives of [`Action::canonical`]) and under
/// composition. `budget` caps the total [`Action::weight`] of the objects
/// plus the number of morphisms; orbits
/// that do not close within it come back as [`OrbitError::BudgetExhausted`]
/// with everything found so far.
pub fn orbit<A: Action + ?Sized>(
    a: &A,
    seed_objects: &[MObj<A>],
    seed_morphisms: &[MMor<A>],
    budget: usize,
) -> OrbitResult<A> {
    let m = a.acted();
    let mut c = Closure {
        objects: Vec::new(),
        object_index: HashMap::new(),
        morphisms: Vec::new(),
        morphism_set: HashSet::new(),
        trace: Vec::new(),
        budget,
        spent: 0,
    };
    let mut frames = Frames::new();
    let mut next_object = 0;
    let mut next_morphism = 0;
    for o in seed_objects {
        let o = normalize(a, o.clone());
        let w = a.weight(&o);
        c.add_object(o, w);
    }
    for u in seed_morphisms {
        if !c.object_index.contains_key(&m.source(u)) || !c.object_index.contains_key(&m.target(u)) {
            return Err(OrbitError::BadSeed(format!("{u:?} leaves the seed objects")));
        }
        c.add_morphism(u.clone());
    }
    // Objects are processed before morphisms; every pair of morphisms is
    // composed when the later of the two is processed.
    loop {
        if c.over_budget() {
            return Err(c.exhausted());
        }
        if next_object < c.objects.len() {
            let mo = c.objects[next_object].clone();
            let (acted, id) = object_consequences(a, &mut frames, &mo)?;
            for (cell, o) in acted {
                let w = a.weight(&o);
                let to = c.add_object(o, w);
                c.trace.push(TraceStep { cell, from: next_object, to });
                if c.over_budget() {
                    return Err(c.exhausted());
                }
            }
            c.add_morphism(id);
            next_object += 1;
        } else if next_morphism < c.morphisms.len() {
            let u = c.morphisms[next_morphism].clone();
            for v in morphism_consequences(a, &mut frames, &u, &c.morphisms[..=next_morphism])? {
                for end in [m.source(&v), m.target(&v)] {
                    let w = a.weight(&end);
                    c.add_object(end, w);
                }
                c.add_morphism(v);
                if c.over_budget() {
                    return Err(c.exhausted());
                }
            }
            next_morphism += 1;
        } else {
            break;
        }
    }
    let result = Orbit { objects: c.objects, morphisms: c.morphisms, trace: c.trace };
    validate_subcategory(a, &result.objects, &result.morphisms).map_err(OrbitError::BadSeed)?;
    Ok(result)
}

/// Closure of a candidate subcategory under identities, composition, and the
/// action (objects and morphisms, after normalization).
pub fn validate_subcategory<A: Action + ?Sized>(
    a: &A,
    objects: &[MObj<A>],
    morphisms: &[MMor<A>],
) -> Result<(), String> {
    let m = a.acted();
    let object_set: HashSet<&MObj<A>> = objects.iter().collect();
    let morphism_set: HashSet<&MMor<A>> = morphisms.iter().collect();
    for u in morphisms {
        if !object_set.contains(&m.source(u)) || !object_set.contains(&m.target(u)) {
            return Err(format!("endpoint of {u:?} missing"));
        }
    }
    let mut frames = Frames::new();
    for mo in objects {
        let (acted, id) = object_consequences(a, &mut frames, mo).map_err(|e| e.to_string())?;
        if let Some((cell, o)) = acted.iter().find(|(_, o)| !object_set.contains(o)) {
            return Err(format!("{cell} ∗ {mo:?} = {o:?} missing"));
        }
        if !morphism_set.contains(&id) {
            return Err(format!("identity of {mo:?} missing"));
        }
    }
    for (i, u) in morphisms.iter().enumerate() {
        let required = morphism_consequences(a, &mut frames, u, &morphisms[..=i]).map_err(|e| e.to_string())?;
        if let Some(v) = required.iter().find(|v| !morphism_set.contains(v)) {
            return Err(format!("{v:?} missing"));
        }
    }
    Ok(())
}

/// `D1` viewed as a category: 1-cells and vertical composition of 2-cells.
#[derive(Debug, Clone)]
pub struct CellCategory<D>(pub D);

impl<D: DoubleCategory> Category for CellCategory<D> {
    type Obj = D::Cell1;
    type Mor = D::Cell2;

    fn source(&self, f: &D::Cell2) -> D::Cell1 {
        self.0.src2(f)
    }
    fn target(&self, f: &D::Cell2) -> D::Cell1 {
        self.0.tgt2(f)
    }
    fn identity(&self, a: &D::Cell1) -> D::Cell2 {
        self.0.id2(a)
    }
    fn compose(&self, f: &D::Cell2, g: &D::Cell2) -> Option<D::Cell2> {
        self.0.compose2(f, g)
    }
    fn objects(&self) -> Vec<D::Cell1> {
        self.0.all_cells()
    }
    fn morphisms_from(&self, a: &D::Cell1) -> Vec<D::Cell2> {
        self.0.squares_from(a)
    }
}

/// `D` acting on `D1` by `∗`, with `p = d`. Witnesses are the associator and
/// left unitor of `D`.
#[derive(Debug, Clone)]
pub struct SelfAction<D> {
    cells: CellCategory<D>,
}

impl<D: DoubleCategory + Clone> SelfAction<D> {
    pub fn new(dc: D) -> Self {
        Self { cells: CellCategory(dc) }
    }
}

/// The left self-action of `D`.
pub fn self_action<D: DoubleCategory + Clone>(dc: D) -> SelfAction<D> {
    SelfAction::new(dc)
}

/// The right self-action of `D`, as the left self-action of its dual.
pub fn right_self_action<D: DoubleCategory + Clone>(dc: D) -> SelfAction<Dual<D>> {
    SelfAction::new(Dual(dc))
}

impl<D: DoubleCategory> Action for SelfAction<D> {
    type D = D;
    type M = CellCategory<D>;

    fn double(&self) -> &D {
        &self.cells.0
    }
    fn acted(&self) -> &CellCategory<D> {
        &self.cells
    }
    fn project(&self, m: &D::Cell1) -> D::Obj {
        self.cells.0.d(m)
    }
    fn project_mor(&self, u: &D::Cell2) -> D::Mor {
        self.cells.0.d2(u)
    }
    fn act(&self, xi: &D::Cell1, m: &D::Cell1) -> Option<D::Cell1> {
        self.cells.0.star(xi, m)
    }
    fn act_mor(&self, alpha: &D::Cell2, u: &D::Cell2) -> Option<D::Cell2> {
        (self.cells.0.r2(alpha) == self.cells.0.d2(u)).then_some(())?;
        self.cells.0.star2(alpha, u)
    }
    fn associator(&self, xi: &D::Cell1, xi2: &D::Cell1, m: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.cells.0.associator(xi, xi2, m)
    }
    fn unitor(&self, m: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.cells.0.left_unitor(m)
    }
    fn morphisms_over(&self, m: &D::Cell1, f: &D::Mor) -> Vec<D::Cell2> {
        let dc = &self.cells.0;
        let mut out: Vec<D::Cell2> = dc.squares_with_d(f).into_iter().filter(|s| dc.src2(s) == *m).collect();
        for s in dc.squares_from(m) {
            if dc.d2(&s) == *f && !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }
}

type FinMorph = Morph<FinSetCategory>;

/// Pairs `(i, j)` of a pullback apex, indexed.
fn pair_index(cone: &PullbackCone) -> HashMap<(usize, usize), usize> {
    (0..cone.apex.len()).map(|k| ((cone.pi1.at(k), cone.pi2.at(k)), k)).collect()
}

/// `Morph(FinSet)` acting on bundles `π: E → B` by pullback:
/// `f ∗ π = π₁: f*E → B′` for `f: B′ → B`.
///
/// Bundles and bundle maps are the 1-cells and 2-cells of `Morph(FinSet)`,
/// projected by `r` (the base).
#[derive(Debug, Clone)]
pub struct PullbackAction {
    cells: CellCategory<FinMorph>,
    pub seed: u64,
    pub per_call: usize,
}

impl PullbackAction {
    /// Finite sets of size at most `max_size`, with bundle-map generators
    /// drawing `per_call` maps from a seeded generator.
    pub fn new(max_size: usize, per_call: usize, seed: u64) -> Self {
        let base = FinSetCategory::sizes_up_to(max_size).with_sampling(per_call, seed);
        Self { cells: CellCategory(Morph(base)), seed, per_call }
    }

    pub fn universe(&self) -> &[FinSet] {
        &self.cells.0.base().universe
    }

    fn cone(f: &FinFunction, pi: &FinFunction) -> Option<PullbackCone> {
        pullback(f, pi).ok()
    }

    /// Fiber cardinalities of a bundle, indexed by the base.
    pub fn fiber_cardinalities(pi: &FinFunction) -> Vec<usize> {
        (0..pi.codomain().len()).map(|b| pi.fiber(b).len()).collect()
    }
}

impl Action for PullbackAction {
    type D = FinMorph;
    type M = CellCategory<FinMorph>;

    fn double(&self) -> &FinMorph {
        &self.cells.0
    }
    fn acted(&self) -> &CellCategory<FinMorph> {
        &self.cells
    }
    fn project(&self, pi: &FinFunction) -> FinSet {
        pi.codomain().clone()
    }
    fn project_mor(&self, w: &Square<FinFunction>) -> FinFunction {
        w.v.clone()
    }
    fn act(&self, f: &FinFunction, pi: &FinFunction) -> Option<FinFunction> {
        Some(Self::cone(f, pi)?.pi1)
    }
    fn act_mor(&self, alpha: &Square<FinFunction>, w: &Square<FinFunction>) -> Option<Square<FinFunction>> {
        if alpha.v != w.v {
            return None;
        }
        let (src, tgt) = (Self::cone(&alpha.f, &w.f)?, Self::cone(&alpha.g, &w.g)?);
        let index = pair_index(&tgt);
        let map: Option<Vec<usize>> = (0..src.apex.len())
            .map(|k| index.get(&(alpha.u.at(src.pi1.at(k)), w.u.at(src.pi2.at(k)))).copied())
            .collect();
        let top = FinFunction::new(src.apex.clone(), tgt.apex.clone(), map?).ok()?;
        Some(Square { f: src.pi1, g: tgt.pi1, u: top, v: alpha.u.clone() })
    }
    fn associator(
        &self,
        xi: &FinFunction,
        xi2: &FinFunction,
        pi: &FinFunction,
    ) -> Option<Witness<Square<FinFunction>>> {
        let composite = Self::cone(&xi.then(xi2).ok()?, pi)?;
        let inner = Self::cone(xi2, pi)?;
        let outer = Self::cone(xi, &inner.pi1)?;
        let (inner_index, outer_index) = (pair_index(&inner), pair_index(&outer));
        let forward: Option<Vec<usize>> = (0..composite.apex.len())
            .map(|k| {
                let (b2, e) = (composite.pi1.at(k), composite.pi2.at(k));
                let q = inner_index.get(&(xi.at(b2), e))?;
                outer_index.get(&(b2, *q)).copied()
            })
            .collect();
        let composite_index = pair_index(&composite);
        let inverse: Option<Vec<usize>> = (0..outer.apex.len())
            .map(|k| composite_index.get(&(outer.pi1.at(k), inner.pi2.at(outer.pi2.at(k)))).copied())
            .collect();
        let id = FinFunction::identity(xi.domain());
        let fwd = FinFunction::new(composite.apex.clone(), outer.apex.clone(), forward?).ok()?;
        let inv = FinFunction::new(outer.apex.clone(), composite.apex.clone(), inverse?).ok()?;
        Some(Witness::new(
            Square { f: composite.pi1.clone(), g: outer.pi1.clone(), u: fwd, v: id.clone() },
            Square { f: outer.pi1, g: composite.pi1, u: inv, v: id },
        ))
    }
    fn unitor(&self, pi: &FinFunction) -> Option<Witness<Square<FinFunction>>> {
        let base = pi.codomain();
        let cone = Self::cone(&FinFunction::identity(base), pi)?;
        let index = pair_index(&cone);
        let back = FinFunction::from_fn(pi.domain(), &cone.apex, |e| index[&(pi.at(e), e)]);
        let id = FinFunction::identity(base);
        Some(Witness::new(
            Square { f: cone.pi1.clone(), g: pi.clone(), u: cone.pi2.clone(), v: id.clone() },
            Square { f: pi.clone(), g: cone.pi1, u: back, v: id },
        ))
    }
    fn morphisms_over(&self, pi: &FinFunction, v: &FinFunction) -> Vec<Square<FinFunction>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ stable_hash(&format!("over{pi:?}{v:?}")));
        let mut out = Vec::new();
        if v.is_bijection() && v.domain() == v.codomain() && *v == FinFunction::identity(v.domain()) {
            out.push(self.cells.0.id2(pi));
        }
        let Ok(target) = pi.then(v) else { return out };
        for _ in 0..self.per_call * 4 {
            if out.len() > self.per_call {
                break;
            }
            let Some(total) = self.universe().choose(&mut rng) else { break };
            let Some(rho) = random_function(&mut rng, total, v.codomain()) else { continue };
            if let Some(u) = solve_before(&mut rng, &rho, &target) {
                let s = Square { f: pi.clone(), g: rho, u, v: v.clone() };
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }
    /// Renames the total set to `0..|E|`, ordered by base point and then by
    /// original position.
    fn canonical(&self, pi: &FinFunction) -> Option<Witness<Square<FinFunction>>> {
        let mut order: Vec<usize> = (0..pi.domain().len()).collect();
        order.sort_by_key(|&e| (pi.at(e), e));
        let total = FinSet::range(order.len());
        let mut position = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let canon = FinFunction::from_fn(&total, pi.codomain(), |k| pi.at(order[k]));
        let id = FinFunction::identity(pi.codomain());
        Some(Witness::new(
            Square {
                f: pi.clone(),
                g: canon.clone(),
                u: FinFunction::from_fn(pi.domain(), &total, |e| position[e]),
                v: id.clone(),
            },
            Square { f: canon, g: pi.clone(), u: FinFunction::from_fn(&total, pi.domain(), |k| order[k]), v: id },
        ))
    }
}

/// Left modules as `(A, ℚ)`-bimodules, with module maps over algebra maps.
#[derive(Debug, Clone)]
pub struct LeftModules {
    alg: AlgDoubleCategory,
    field: Algebra,
}

impl LeftModules {
    fn is_module(&self, m: &Bimodule) -> bool {
        *m.right() == self.field
    }
}

impl Category for LeftModules {
    type Obj = Bimodule;
    type Mor = BimoduleCell;

    fn source(&self, f: &BimoduleCell) -> Bimodule {
        f.source.clone()
    }
    fn target(&self, f: &BimoduleCell) -> Bimodule {
        f.target.clone()
    }
    fn identity(&self, a: &Bimodule) -> BimoduleCell {
        self.alg.id2(a)
    }
    fn compose(&self, f: &BimoduleCell, g: &BimoduleCell) -> Option<BimoduleCell> {
        self.alg.compose2(f, g)
    }
    fn objects(&self) -> Vec<Bimodule> {
        self.alg.bimodules.iter().filter(|m| self.is_module(m)).cloned().collect()
    }
    fn morphisms_from(&self, a: &Bimodule) -> Vec<BimoduleCell> {
        self.alg.squares_from(a).into_iter().filter(|c| self.is_module(&c.target)).collect()
    }
}

/// `ALG_k` acting on left modules: `ξ ∗ (B, M) = (A, ξ ⊗_B M)`.
#[derive(Debug, Clone)]
pub struct ModuleAction {
    modules: LeftModules,
}

impl ModuleAction {
    pub fn new(alg: AlgDoubleCategory) -> Self {
        let field = alg
            .algebras
            .iter()
            .find(|a| a.dim() == 1)
            .cloned()
            .unwrap_or_else(|| std::sync::Arc::new(FinDimAlgebra::rationals()));
        Self { modules: LeftModules { alg, field } }
    }
}

impl Action for ModuleAction {
    type D = AlgDoubleCategory;
    type M = LeftModules;

    fn double(&self) -> &AlgDoubleCategory {
        &self.modules.alg
    }
    fn acted(&self) -> &LeftModules {
        &self.modules
    }
    fn project(&self, m: &Bimodule) -> Algebra {
        m.left().clone()
    }
    fn project_mor(&self, u: &BimoduleCell) -> AlgebraMap {
        u.u.clone()
    }
    fn act(&self, xi: &Bimodule, m: &Bimodule) -> Option<Bimodule> {
        self.modules.alg.star(xi, m)
    }
    fn act_mor(&self, alpha: &BimoduleCell, u: &BimoduleCell) -> Option<BimoduleCell> {
        self.modules.alg.star2(alpha, u)
    }
    fn associator(&self, xi: &Bimodule, xi2: &Bimodule, m: &Bimodule) -> Option<Witness<BimoduleCell>> {
        self.modules.alg.associator(xi, xi2, m)
    }
    fn unitor(&self, m: &Bimodule) -> Option<Witness<BimoduleCell>> {
        self.modules.alg.left_unitor(m)
    }
    fn weight(&self, m: &Bimodule) -> usize {
        m.dim().max(1)
    }
    fn morphisms_over(&self, m: &Bimodule, f: &AlgebraMap) -> Vec<BimoduleCell> {
        let id = AlgebraMap::identity(&self.modules.field);
        let mut out = Vec::new();
        if f == &AlgebraMap::identity(m.left()) {
            out.push(self.modules.alg.id2(m));
        }
        for n in self.modules.objects().iter().filter(|n| n.left() == f.target()) {
            out.extend(self.modules.alg.derived(m, n, f, &id));
        }
        out
    }
}

/// A finite set with a chosen point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pointed {
    pub set: FinSet,
    pub point: usize,
}

impl Debug for Pointed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {})", self.set, self.set.element(self.point))
    }
}

/// Point-preserving functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointedMap {
    pub source: Pointed,
    pub target: Pointed,
    pub map: FinFunction,
}

impl Debug for PointedMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}→{:?}{:?}", self.source, self.target, self.map.indices())
    }
}

/// Pointed finite sets over a universe of nonempty sets; the forgetful
/// functor drops the point.
#[derive(Debug, Clone)]
pub struct PointedSets {
    pub universe: Vec<FinSet>,
}

impl PointedSets {
    pub fn objects_on(&self, s: &FinSet) -> Vec<Pointed> {
        (0..s.len()).map(|point| Pointed { set: s.clone(), point }).collect()
    }
}

impl Category for PointedSets {
    type Obj = Pointed;
    type Mor = PointedMap;

    fn source(&self, f: &PointedMap) -> Pointed {
        f.source.clone()
    }
    fn target(&self, f: &PointedMap) -> Pointed {
        f.target.clone()
    }
    fn identity(&self, a: &Pointed) -> PointedMap {
        PointedMap { source: a.clone(), target: a.clone(), map: FinFunction::identity(&a.set) }
    }
    fn compose(&self, f: &PointedMap, g: &PointedMap) -> Option<PointedMap> {
        (f.target == g.source).then_some(())?;
        Some(PointedMap { source: f.source.clone(), target: g.target.clone(), map: f.map.then(&g.map).ok()? })
    }
    fn objects(&self) -> Vec<Pointed> {
        self.universe.iter().flat_map(|s| self.objects_on(s)).collect()
    }
    fn morphisms_from(&self, a: &Pointed) -> Vec<PointedMap> {
        self.objects()
            .into_iter()
            .flat_map(|b| {
                FinFunction::all(&a.set, &b.set)
                    .into_iter()
                    .filter(|f| f.at(a.point) == b.point)
                    .map(|map| PointedMap { source: a.clone(), target: b.clone(), map })
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// `ISO(FinSet)` acting on pointed sets by transport of structure: for a
/// bijection `u: B → S`, `u ∗ (S, s) = (B, u⁻¹(s))`. Transport is strictly
/// associative and unital.
#[derive(Debug, Clone)]
pub struct IsoAction {
    iso: Restricted<FinMorph>,
    pointed: PointedSets,
}

impl IsoAction {
    /// Sets of size `1..=max_size` (pointed sets need a point).
    pub fn new(max_size: usize) -> Result<Self, StructuralError> {
        let iso = iso_double_category(FinSetCategory::sizes_up_to(max_size))?;
        let universe = (1..=max_size).map(FinSet::range).collect();
        Ok(Self { iso, pointed: PointedSets { universe } })
    }

    fn transport(u: &FinFunction, c: &Pointed) -> Option<Pointed> {
        if u.codomain() != &c.set {
            return None;
        }
        let pre = u.fiber(c.point);
        (pre.len() == 1).then(|| Pointed { set: u.domain().clone(), point: pre[0] })
    }
}

impl Action for IsoAction {
    type D = Restricted<FinMorph>;
    type M = PointedSets;

    fn double(&self) -> &Restricted<FinMorph> {
        &self.iso
    }
    fn acted(&self) -> &PointedSets {
        &self.pointed
    }
    fn project(&self, m: &Pointed) -> FinSet {
        m.set.clone()
    }
    fn project_mor(&self, u: &PointedMap) -> FinFunction {
        u.map.clone()
    }
    fn act(&self, xi: &FinFunction, m: &Pointed) -> Option<Pointed> {
        Self::transport(xi, m)
    }
    fn act_mor(&self, alpha: &Square<FinFunction>, w: &PointedMap) -> Option<PointedMap> {
        if alpha.v != w.map {
            return None;
        }
        let (source, target) = (Self::transport(&alpha.f, &w.source)?, Self::transport(&alpha.g, &w.target)?);
        (alpha.u.at(source.point) == target.point).then(|| PointedMap { source, target, map: alpha.u.clone() })
    }
    fn morphisms_over(&self, m: &Pointed, f: &FinFunction) -> Vec<PointedMap> {
        if f.domain() != &m.set {
            return Vec::new();
        }
        let target = Pointed { set: f.codomain().clone(), point: f.at(m.point) };
        vec![PointedMap { source: m.clone(), target, map: f.clone() }]
    }
}
