use super::{DoubleCategory, Strictness, Witness};

/// The dual double category `D°`: `d` and `r` transposed at both cell levels,
/// so a 1-cell `ξ: A ⇒ B` of `D` is a 1-cell `B ⇒ A` of `D°`, and horizontal
/// composition is reversed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dual<D>(pub D);

pub fn dual<D: DoubleCategory>(d: D) -> Dual<D> {
    Dual(d)
}

impl<D> Dual<D> {
    pub fn inner(&self) -> &D {
        &self.0
    }

    pub fn into_inner(self) -> D {
        self.0
    }
}

impl<D: DoubleCategory> DoubleCategory for Dual<D> {
    type Obj = D::Obj;
    type Mor = D::Mor;
    type Cell1 = D::Cell1;
    type Cell2 = D::Cell2;

    fn src0(&self, f: &D::Mor) -> D::Obj {
        self.0.src0(f)
    }
    fn tgt0(&self, f: &D::Mor) -> D::Obj {
        self.0.tgt0(f)
    }
    fn id0(&self, a: &D::Obj) -> D::Mor {
        self.0.id0(a)
    }
    fn compose0(&self, f: &D::Mor, g: &D::Mor) -> Option<D::Mor> {
        self.0.compose0(f, g)
    }

    fn d(&self, x: &D::Cell1) -> D::Obj {
        self.0.r(x)
    }
    fn r(&self, x: &D::Cell1) -> D::Obj {
        self.0.d(x)
    }

    fn src2(&self, a: &D::Cell2) -> D::Cell1 {
        self.0.src2(a)
    }
    fn tgt2(&self, a: &D::Cell2) -> D::Cell1 {
        self.0.tgt2(a)
    }
    fn d2(&self, a: &D::Cell2) -> D::Mor {
        self.0.r2(a)
    }
    fn r2(&self, a: &D::Cell2) -> D::Mor {
        self.0.d2(a)
    }
    fn id2(&self, x: &D::Cell1) -> D::Cell2 {
        self.0.id2(x)
    }
    fn compose2(&self, a: &D::Cell2, b: &D::Cell2) -> Option<D::Cell2> {
        self.0.compose2(a, b)
    }

    fn star(&self, x: &D::Cell1, y: &D::Cell1) -> Option<D::Cell1> {
        self.0.star(y, x)
    }
    fn star2(&self, a: &D::Cell2, b: &D::Cell2) -> Option<D::Cell2> {
        self.0.star2(b, a)
    }
    fn unit(&self, a: &D::Obj) -> D::Cell1 {
        self.0.unit(a)
    }
    fn unit2(&self, f: &D::Mor) -> D::Cell2 {
        self.0.unit2(f)
    }

    fn strictness(&self) -> Strictness {
        self.0.strictness()
    }

    // (x ∗° y) ∗° z = z ∗ (y ∗ x) and x ∗° (y ∗° z) = (z ∗ y) ∗ x.
    fn associator(&self, x: &D::Cell1, y: &D::Cell1, z: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.0.associator(z, y, x).map(Witness::flip)
    }
    fn left_unitor(&self, x: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.0.right_unitor(x)
    }
    fn right_unitor(&self, x: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.0.left_unitor(x)
    }
    fn is_valid2(&self, a: &D::Cell2) -> bool {
        self.0.is_valid2(a)
    }

    fn objects(&self) -> Vec<D::Obj> {
        self.0.objects()
    }
    fn morphisms_from(&self, a: &D::Obj) -> Vec<D::Mor> {
        self.0.morphisms_from(a)
    }
    fn cells_from(&self, a: &D::Obj) -> Vec<D::Cell1> {
        self.0.cells_into(a)
    }
    fn cells_into(&self, b: &D::Obj) -> Vec<D::Cell1> {
        self.0.cells_from(b)
    }
    fn squares_from(&self, x: &D::Cell1) -> Vec<D::Cell2> {
        self.0.squares_from(x)
    }
    fn squares_with_d(&self, f: &D::Mor) -> Vec<D::Cell2> {
        self.0.squares_with_r(f)
    }
    fn squares_with_r(&self, f: &D::Mor) -> Vec<D::Cell2> {
        self.0.squares_with_d(f)
    }
}
