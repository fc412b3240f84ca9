//! The double-category interface and everything generic over it.
//!
//! A double category has a category `D0` of objects and 0-level morphisms, a
//! category `D1` whose objects are 1-cells `ξ: A ⇒ B` and whose morphisms are
//! 2-cells, source/target functors `d, r: D1 → D0`, a horizontal composition
//! `∗` defined when `r(ξ) = d(ξ′)`, and a unit `ID: D0 → D1`.
//!
//! Horizontal composition is written in diagrammatic order throughout:
//! `star(ξ, ξ′)` is "`ξ` then `ξ′`".

mod check;
mod dual;
mod functor;
mod product;
mod restrict;
mod tabulated;
mod walk;

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

pub use check::{check_double_category, is_bicategory_shaped};
pub use dual::{dual, Dual};
pub use functor::{check_double_functor, DoubleFunctor, IdentityFunctor};
pub use product::Product;
pub use restrict::{restrict, Restricted, Selection};
pub use tabulated::{SquareEntry, Tabulated};
pub use walk::{stable_hash, walk, Budget};

/// Bound for every cell type an instance exposes.
pub trait Cell: Clone + Eq + Hash + Debug {}
impl<T: Clone + Eq + Hash + Debug> Cell for T {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Strict,
    Weak,
}

/// An invertible 2-cell together with its declared inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness<C> {
    pub forward: C,
    pub inverse: C,
}

impl<C> Witness<C> {
    pub fn new(forward: C, inverse: C) -> Self {
        Self { forward, inverse }
    }

    pub fn flip(self) -> Self {
        Self { forward: self.inverse, inverse: self.forward }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructuralError {
    #[error("`{op}` undefined on {cells}")]
    Undefined { op: &'static str, cells: String },
    #[error("weak instance supplies no {kind} witness for {cells}")]
    MissingWitness { kind: &'static str, cells: String },
    #[error("dangling reference to `{name}` in {table}")]
    Dangling { table: &'static str, name: String },
    #[error("functor map `{map}` out of range on {cell}")]
    OutOfRange { map: &'static str, cell: String },
    #[error("selection not closed: {missing} is required by {reason}")]
    NotClosed { missing: String, reason: String },
}

/// A double category with finite (or bounded, deterministically sampled)
/// enumerations of its cells.
///
/// Composites are only requested on composable inputs; the framework checks
/// endpoints first. `None` from a composite on composable inputs is a
/// malformed instance.
pub trait DoubleCategory {
    type Obj: Cell;
    type Mor: Cell;
    type Cell1: Cell;
    type Cell2: Cell;

    fn src0(&self, f: &Self::Mor) -> Self::Obj;
    fn tgt0(&self, f: &Self::Mor) -> Self::Obj;
    fn id0(&self, a: &Self::Obj) -> Self::Mor;
    /// `f` then `g`.
    fn compose0(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;

    fn d(&self, x: &Self::Cell1) -> Self::Obj;
    fn r(&self, x: &Self::Cell1) -> Self::Obj;

    fn src2(&self, a: &Self::Cell2) -> Self::Cell1;
    fn tgt2(&self, a: &Self::Cell2) -> Self::Cell1;
    fn d2(&self, a: &Self::Cell2) -> Self::Mor;
    fn r2(&self, a: &Self::Cell2) -> Self::Mor;
    fn id2(&self, x: &Self::Cell1) -> Self::Cell2;
    /// Vertical composition inside `D1`: `a` then `b`.
    fn compose2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Option<Self::Cell2>;

    fn star(&self, x: &Self::Cell1, y: &Self::Cell1) -> Option<Self::Cell1>;
    fn star2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Option<Self::Cell2>;
    fn unit(&self, a: &Self::Obj) -> Self::Cell1;
    fn unit2(&self, f: &Self::Mor) -> Self::Cell2;

    fn strictness(&self) -> Strictness {
        Strictness::Strict
    }

    /// `(x ∗ y) ∗ z → x ∗ (y ∗ z)`.
    fn associator(&self, _x: &Self::Cell1, _y: &Self::Cell1, _z: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        None
    }

    /// `ID_{d x} ∗ x → x`.
    fn left_unitor(&self, _x: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        None
    }

    /// `x ∗ ID_{r x} → x`.
    fn right_unitor(&self, _x: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        None
    }

    /// Instance-specific well-formedness of a 2-cell (e.g. a square commutes).
    fn is_valid2(&self, _a: &Self::Cell2) -> bool {
        true
    }

    fn objects(&self) -> Vec<Self::Obj>;
    fn morphisms_from(&self, a: &Self::Obj) -> Vec<Self::Mor>;
    /// 1-cells `x` with `d(x) = a`.
    fn cells_from(&self, a: &Self::Obj) -> Vec<Self::Cell1>;
    /// 2-cells with the given source 1-cell.
    fn squares_from(&self, x: &Self::Cell1) -> Vec<Self::Cell2>;

    /// 1-cells `x` with `r(x) = b`.
    fn cells_into(&self, b: &Self::Obj) -> Vec<Self::Cell1> {
        self.objects().iter().flat_map(|a| self.cells_from(a)).filter(|x| &self.r(x) == b).collect()
    }

    /// 2-cells `a` with `d2(a) = f`.
    fn squares_with_d(&self, f: &Self::Mor) -> Vec<Self::Cell2> {
        self.cells_from(&self.src0(f)).iter().flat_map(|x| self.squares_from(x)).filter(|a| &self.d2(a) == f).collect()
    }

    /// 2-cells `a` with `r2(a) = f`.
    fn squares_with_r(&self, f: &Self::Mor) -> Vec<Self::Cell2> {
        self.cells_into(&self.src0(f)).iter().flat_map(|x| self.squares_from(x)).filter(|a| &self.r2(a) == f).collect()
    }

    fn all_morphisms(&self) -> Vec<Self::Mor> {
        self.objects().iter().flat_map(|a| self.morphisms_from(a)).collect()
    }

    fn all_cells(&self) -> Vec<Self::Cell1> {
        self.objects().iter().flat_map(|a| self.cells_from(a)).collect()
    }

    fn all_squares(&self) -> Vec<Self::Cell2> {
        self.all_cells().iter().flat_map(|x| self.squares_from(x)).collect()
    }
}

/// Helpers that turn `None` composites into structural errors.
pub(crate) trait DoubleCategoryExt: DoubleCategory {
    fn must_compose0(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor, StructuralError> {
        self.compose0(f, g).ok_or_else(|| undefined("compose0", (f, g)))
    }
    fn must_compose2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Result<Self::Cell2, StructuralError> {
        self.compose2(a, b).ok_or_else(|| undefined("compose2", (a, b)))
    }
    fn must_star(&self, x: &Self::Cell1, y: &Self::Cell1) -> Result<Self::Cell1, StructuralError> {
        self.star(x, y).ok_or_else(|| undefined("star", (x, y)))
    }
    fn must_star2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Result<Self::Cell2, StructuralError> {
        self.star2(a, b).ok_or_else(|| undefined("star2", (a, b)))
    }
}

impl<D: DoubleCategory + ?Sized> DoubleCategoryExt for D {}

pub(crate) fn undefined(op: &'static str, cells: impl Debug) -> StructuralError {
    StructuralError::Undefined { op, cells: format!("{cells:?}") }
}

/// Result of one law over all its checked instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawOutcome {
    pub law: String,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Per-law results; zero failures certifies every listed law on what was checked.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LawOutcome::passed)
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failures).sum()
    }

    pub fn checked(&self) -> usize {
        self.outcomes.iter().map(|o| o.checked).sum()
    }

    pub fn get(&self, law: &str) -> Option<&LawOutcome> {
        self.outcomes.iter().find(|o| o.law == law)
    }

    pub fn failing(&self) -> impl Iterator<Item = &LawOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    /// Registers a law so it is reported even when it had no instances.
    pub fn declare(&mut self, law: &str) -> usize {
        match self.outcomes.iter().position(|o| o.law == law) {
            Some(i) => i,
            None => {
                self.outcomes.push(LawOutcome { law: law.to_string(), checked: 0, failures: 0, counterexample: None });
                self.outcomes.len() - 1
            }
        }
    }

    /// Records one instance of `law`. The counterexample is rendered only for
    /// the first failure.
    pub fn record(&mut self, law: &str, ok: bool, counterexample: impl FnOnce() -> String) {
        let i = self.declare(law);
        let o = &mut self.outcomes[i];
        o.checked += 1;
        if !ok {
            o.failures += 1;
            if o.counterexample.is_none() {
                o.counterexample = Some(counterexample());
            }
        }
    }

    /// Appends another report's outcomes, prefixing law names.
    pub fn absorb(&mut self, prefix: &str, other: LawReport) {
        for mut o in other.outcomes {
            o.law = format!("{prefix}{}", o.law);
            self.outcomes.push(o);
        }
    }

    /// One `PASS`/`FAIL` line per law.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for o in &self.outcomes {
            let tag = if o.passed() { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {} ({} checked", o.law, o.checked));
            if o.failures > 0 {
                s.push_str(&format!(", {} failed", o.failures));
            }
            s.push(')');
            if let Some(c) = &o.counterexample {
                s.push_str(&format!(" counterexample: {c}"));
            }
            s.push('\n');
        }
        s
    }
}
