//! Double categories built from diagrams in a base category: squares
//! (`Morph`), invertible squares (`ISO`), spans of finite sets, and the two
//! cartesian monoidal constructions.

mod monoidal;
mod span;

pub use monoidal::{ActionCell, ActionDoubleCategory, ActionPair, CartesianMonoidal};
pub use span::{Span, SpanCell, SpanDoubleCategory};

use crate::category::{Category, Square};
use crate::double::{restrict, DoubleCategory, Restricted, Selection, StructuralError};
use crate::finset::FinCategory;

/// `Morph(C)`: 1-cells are the morphisms of `C` (`d(f)` its source, `r(f)`
/// its target), 2-cells are commutative squares with `d(α) = u` (top) and
/// `r(α) = v` (bottom), and `∗` is composition in `C`.
#[derive(Debug, Clone)]
pub struct Morph<C>(pub C);

pub fn morph_double_category(c: FinCategory) -> Morph<FinCategory> {
    Morph(c)
}

impl<C> Morph<C> {
    pub fn base(&self) -> &C {
        &self.0
    }
}

impl<C: Category> DoubleCategory for Morph<C> {
    type Obj = C::Obj;
    type Mor = C::Mor;
    type Cell1 = C::Mor;
    type Cell2 = Square<C::Mor>;

    fn src0(&self, f: &C::Mor) -> C::Obj {
        self.0.source(f)
    }
    fn tgt0(&self, f: &C::Mor) -> C::Obj {
        self.0.target(f)
    }
    fn id0(&self, a: &C::Obj) -> C::Mor {
        self.0.identity(a)
    }
    fn compose0(&self, f: &C::Mor, g: &C::Mor) -> Option<C::Mor> {
        self.0.compose(f, g)
    }
    fn d(&self, f: &C::Mor) -> C::Obj {
        self.0.source(f)
    }
    fn r(&self, f: &C::Mor) -> C::Obj {
        self.0.target(f)
    }
    fn src2(&self, a: &Square<C::Mor>) -> C::Mor {
        a.f.clone()
    }
    fn tgt2(&self, a: &Square<C::Mor>) -> C::Mor {
        a.g.clone()
    }
    fn d2(&self, a: &Square<C::Mor>) -> C::Mor {
        a.u.clone()
    }
    fn r2(&self, a: &Square<C::Mor>) -> C::Mor {
        a.v.clone()
    }
    fn id2(&self, f: &C::Mor) -> Square<C::Mor> {
        Square {
            f: f.clone(),
            g: f.clone(),
            u: self.0.identity(&self.0.source(f)),
            v: self.0.identity(&self.0.target(f)),
        }
    }
    fn compose2(&self, a: &Square<C::Mor>, b: &Square<C::Mor>) -> Option<Square<C::Mor>> {
        if a.g != b.f {
            return None;
        }
        Some(Square { f: a.f.clone(), g: b.g.clone(), u: self.0.compose(&a.u, &b.u)?, v: self.0.compose(&a.v, &b.v)? })
    }
    fn star(&self, f: &C::Mor, g: &C::Mor) -> Option<C::Mor> {
        self.0.compose(f, g)
    }
    // Horizontal pasting along the shared edge `a.v = b.u`.
    fn star2(&self, a: &Square<C::Mor>, b: &Square<C::Mor>) -> Option<Square<C::Mor>> {
        if a.v != b.u {
            return None;
        }
        Some(Square { f: self.0.compose(&a.f, &b.f)?, g: self.0.compose(&a.g, &b.g)?, u: a.u.clone(), v: b.v.clone() })
    }
    fn unit(&self, a: &C::Obj) -> C::Mor {
        self.0.identity(a)
    }
    fn unit2(&self, u: &C::Mor) -> Square<C::Mor> {
        Square {
            f: self.0.identity(&self.0.source(u)),
            g: self.0.identity(&self.0.target(u)),
            u: u.clone(),
            v: u.clone(),
        }
    }
    fn is_valid2(&self, a: &Square<C::Mor>) -> bool {
        self.0.commutes(a)
    }

    fn objects(&self) -> Vec<C::Obj> {
        self.0.objects()
    }
    fn morphisms_from(&self, a: &C::Obj) -> Vec<C::Mor> {
        self.0.morphisms_from(a)
    }
    fn cells_from(&self, a: &C::Obj) -> Vec<C::Mor> {
        self.0.morphisms_from(a)
    }
    fn cells_into(&self, b: &C::Obj) -> Vec<C::Mor> {
        self.0.morphisms_into(b)
    }
    fn squares_from(&self, f: &C::Mor) -> Vec<Square<C::Mor>> {
        self.0.squares_from(f)
    }
    fn squares_with_d(&self, u: &C::Mor) -> Vec<Square<C::Mor>> {
        self.0.squares_with_top(u)
    }
    fn squares_with_r(&self, v: &C::Mor) -> Vec<Square<C::Mor>> {
        self.0.squares_with_bottom(v)
    }
}

/// `ISO(C)`: the sub-double-category of `Morph(C)` whose 1-cells are the
/// isomorphisms of `C`, with every 0-level morphism and every square between
/// isomorphisms. Built through [`restrict`], so closure is verified.
pub fn iso_double_category<C: Category>(c: C) -> Result<Restricted<Morph<C>>, StructuralError> {
    let morph = Morph(c);
    let cells: Vec<C::Mor> = morph.all_cells().into_iter().filter(|f| morph.0.is_isomorphism(f)).collect();
    let squares = cells.iter().flat_map(|f| morph.squares_from(f)).filter(|s| morph.0.is_isomorphism(&s.g)).collect();
    let selection = Selection { objects: morph.objects(), morphisms: morph.all_morphisms(), cells, squares };
    restrict(morph, selection)
}
