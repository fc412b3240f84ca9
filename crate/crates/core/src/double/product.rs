use super::{DoubleCategory, Strictness, Witness};

/// Componentwise product of two double categories.
#[derive(Debug, Clone)]
pub struct Product<A, B>(pub A, pub B);

fn pair<X, Y>(x: Option<X>, y: Option<Y>) -> Option<(X, Y)> {
    Some((x?, y?))
}

fn cross<X: Clone, Y: Clone>(xs: Vec<X>, ys: Vec<Y>) -> Vec<(X, Y)> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone()))).collect()
}

fn witness_or_identity<D: DoubleCategory>(
    dc: &D,
    w: Option<Witness<D::Cell2>>,
    from: Option<D::Cell1>,
) -> Option<Witness<D::Cell2>> {
    match w {
        Some(w) => Some(w),
        None if dc.strictness() == Strictness::Strict => {
            let id = dc.id2(&from?);
            Some(Witness::new(id.clone(), id))
        }
        None => None,
    }
}

impl<A: DoubleCategory, B: DoubleCategory> DoubleCategory for Product<A, B> {
    type Obj = (A::Obj, B::Obj);
    type Mor = (A::Mor, B::Mor);
    type Cell1 = (A::Cell1, B::Cell1);
    type Cell2 = (A::Cell2, B::Cell2);

    fn src0(&self, f: &Self::Mor) -> Self::Obj {
        (self.0.src0(&f.0), self.1.src0(&f.1))
    }
    fn tgt0(&self, f: &Self::Mor) -> Self::Obj {
        (self.0.tgt0(&f.0), self.1.tgt0(&f.1))
    }
    fn id0(&self, a: &Self::Obj) -> Self::Mor {
        (self.0.id0(&a.0), self.1.id0(&a.1))
    }
    fn compose0(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        pair(self.0.compose0(&f.0, &g.0), self.1.compose0(&f.1, &g.1))
    }
    fn d(&self, x: &Self::Cell1) -> Self::Obj {
        (self.0.d(&x.0), self.1.d(&x.1))
    }
    fn r(&self, x: &Self::Cell1) -> Self::Obj {
        (self.0.r(&x.0), self.1.r(&x.1))
    }
    fn src2(&self, a: &Self::Cell2) -> Self::Cell1 {
        (self.0.src2(&a.0), self.1.src2(&a.1))
    }
    fn tgt2(&self, a: &Self::Cell2) -> Self::Cell1 {
        (self.0.tgt2(&a.0), self.1.tgt2(&a.1))
    }
    fn d2(&self, a: &Self::Cell2) -> Self::Mor {
        (self.0.d2(&a.0), self.1.d2(&a.1))
    }
    fn r2(&self, a: &Self::Cell2) -> Self::Mor {
        (self.0.r2(&a.0), self.1.r2(&a.1))
    }
    fn id2(&self, x: &Self::Cell1) -> Self::Cell2 {
        (self.0.id2(&x.0), self.1.id2(&x.1))
    }
    fn compose2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Option<Self::Cell2> {
        pair(self.0.compose2(&a.0, &b.0), self.1.compose2(&a.1, &b.1))
    }
    fn star(&self, x: &Self::Cell1, y: &Self::Cell1) -> Option<Self::Cell1> {
        pair(self.0.star(&x.0, &y.0), self.1.star(&x.1, &y.1))
    }
    fn star2(&self, a: &Self::Cell2, b: &Self::Cell2) -> Option<Self::Cell2> {
        pair(self.0.star2(&a.0, &b.0), self.1.star2(&a.1, &b.1))
    }
    fn unit(&self, a: &Self::Obj) -> Self::Cell1 {
        (self.0.unit(&a.0), self.1.unit(&a.1))
    }
    fn unit2(&self, f: &Self::Mor) -> Self::Cell2 {
        (self.0.unit2(&f.0), self.1.unit2(&f.1))
    }

    fn strictness(&self) -> Strictness {
        match (self.0.strictness(), self.1.strictness()) {
            (Strictness::Strict, Strictness::Strict) => Strictness::Strict,
            _ => Strictness::Weak,
        }
    }

    fn associator(&self, x: &Self::Cell1, y: &Self::Cell1, z: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        let a_from = self.0.star(&x.0, &y.0).and_then(|xy| self.0.star(&xy, &z.0));
        let b_from = self.1.star(&x.1, &y.1).and_then(|xy| self.1.star(&xy, &z.1));
        let a = witness_or_identity(&self.0, self.0.associator(&x.0, &y.0, &z.0), a_from)?;
        let b = witness_or_identity(&self.1, self.1.associator(&x.1, &y.1, &z.1), b_from)?;
        Some(Witness::new((a.forward, b.forward), (a.inverse, b.inverse)))
    }

    fn left_unitor(&self, x: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        let a_from = self.0.star(&self.0.unit(&self.0.d(&x.0)), &x.0);
        let b_from = self.1.star(&self.1.unit(&self.1.d(&x.1)), &x.1);
        let a = witness_or_identity(&self.0, self.0.left_unitor(&x.0), a_from)?;
        let b = witness_or_identity(&self.1, self.1.left_unitor(&x.1), b_from)?;
        Some(Witness::new((a.forward, b.forward), (a.inverse, b.inverse)))
    }

    fn right_unitor(&self, x: &Self::Cell1) -> Option<Witness<Self::Cell2>> {
        let a_from = self.0.star(&x.0, &self.0.unit(&self.0.r(&x.0)));
        let b_from = self.1.star(&x.1, &self.1.unit(&self.1.r(&x.1)));
        let a = witness_or_identity(&self.0, self.0.right_unitor(&x.0), a_from)?;
        let b = witness_or_identity(&self.1, self.1.right_unitor(&x.1), b_from)?;
        Some(Witness::new((a.forward, b.forward), (a.inverse, b.inverse)))
    }

    fn is_valid2(&self, a: &Self::Cell2) -> bool {
        self.0.is_valid2(&a.0) && self.1.is_valid2(&a.1)
    }

    fn objects(&self) -> Vec<Self::Obj> {
        cross(self.0.objects(), self.1.objects())
    }
    fn morphisms_from(&self, a: &Self::Obj) -> Vec<Self::Mor> {
        cross(self.0.morphisms_from(&a.0), self.1.morphisms_from(&a.1))
    }
    fn cells_from(&self, a: &Self::Obj) -> Vec<Self::Cell1> {
        cross(self.0.cells_from(&a.0), self.1.cells_from(&a.1))
    }
    fn cells_into(&self, b: &Self::Obj) -> Vec<Self::Cell1> {
        cross(self.0.cells_into(&b.0), self.1.cells_into(&b.1))
    }
    fn squares_from(&self, x: &Self::Cell1) -> Vec<Self::Cell2> {
        cross(self.0.squares_from(&x.0), self.1.squares_from(&x.1))
    }
    fn squares_with_d(&self, f: &Self::Mor) -> Vec<Self::Cell2> {
        cross(self.0.squares_with_d(&f.0), self.1.squares_with_d(&f.1))
    }
    fn squares_with_r(&self, f: &Self::Mor) -> Vec<Self::Cell2> {
        cross(self.0.squares_with_r(&f.0), self.1.squares_with_r(&f.1))
    }
}
