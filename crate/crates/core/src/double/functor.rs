use std::fmt::Debug;

use super::check::witness_ok;
use super::walk::{walk, Budget};
use super::{DoubleCategory, DoubleCategoryExt, LawReport, StructuralError, Witness};

type S<F> = <F as DoubleFunctor>::Source;
type T<F> = <F as DoubleFunctor>::Target;
type SObj<F> = <S<F> as DoubleCategory>::Obj;
type SMor<F> = <S<F> as DoubleCategory>::Mor;
type SCell1<F> = <S<F> as DoubleCategory>::Cell1;
type SCell2<F> = <S<F> as DoubleCategory>::Cell2;
type TObj<F> = <T<F> as DoubleCategory>::Obj;
type TMor<F> = <T<F> as DoubleCategory>::Mor;
type TCell1<F> = <T<F> as DoubleCategory>::Cell1;
type TCell2<F> = <T<F> as DoubleCategory>::Cell2;

/// A map of double categories, given on all four cell levels.
///
/// Maps return `None` outside their range. `∗` and `ID` are preserved
/// strictly unless the functor supplies comparison witnesses.
pub trait DoubleFunctor {
    type Source: DoubleCategory;
    type Target: DoubleCategory;

    fn source(&self) -> &Self::Source;
    fn target(&self) -> &Self::Target;

    fn map_obj(&self, a: &SObj<Self>) -> Option<TObj<Self>>;
    fn map_mor(&self, f: &SMor<Self>) -> Option<TMor<Self>>;
    fn map_cell(&self, x: &SCell1<Self>) -> Option<TCell1<Self>>;
    fn map_square(&self, a: &SCell2<Self>) -> Option<TCell2<Self>>;

    /// `F(x) ∗ F(y) → F(x ∗ y)`; `None` means `∗` is preserved on the nose.
    fn star_comparison(&self, _x: &SCell1<Self>, _y: &SCell1<Self>) -> Option<Witness<TCell2<Self>>> {
        None
    }

    /// `ID_{F(a)} → F(ID_a)`; `None` means `ID` is preserved on the nose.
    fn unit_comparison(&self, _a: &SObj<Self>) -> Option<Witness<TCell2<Self>>> {
        None
    }
}

/// The identity double functor on an instance.
#[derive(Debug, Clone)]
pub struct IdentityFunctor<D>(pub D);

impl<D: DoubleCategory> DoubleFunctor for IdentityFunctor<D> {
    type Source = D;
    type Target = D;

    fn source(&self) -> &D {
        &self.0
    }
    fn target(&self) -> &D {
        &self.0
    }
    fn map_obj(&self, a: &D::Obj) -> Option<D::Obj> {
        Some(a.clone())
    }
    fn map_mor(&self, f: &D::Mor) -> Option<D::Mor> {
        Some(f.clone())
    }
    fn map_cell(&self, x: &D::Cell1) -> Option<D::Cell1> {
        Some(x.clone())
    }
    fn map_square(&self, a: &D::Cell2) -> Option<D::Cell2> {
        Some(a.clone())
    }
}

fn mapped<X: Debug, Y>(map: &'static str, x: &X, y: Option<Y>) -> Result<Y, StructuralError> {
    y.ok_or_else(|| StructuralError::OutOfRange { map, cell: format!("{x:?}") })
}

/// Checks map well-formedness, `d`/`r` equivariance, functoriality on `D0`
/// and `D1`, and preservation of `∗` and `ID` (strictly or via the declared
/// comparison witnesses).
pub fn check_double_functor<F: DoubleFunctor + ?Sized>(
    functor: &F,
    budget: &Budget,
) -> Result<LawReport, StructuralError> {
    let src = functor.source();
    let tgt = functor.target();
    let mut report = LawReport::new();
    for law in ["functor.endpoints", "functor.frame", "functor.d0", "functor.d1", "functor.star", "functor.unit"] {
        report.declare(law);
    }
    let fo = |a: &SObj<F>| mapped("obj0", a, functor.map_obj(a));
    let fm = |f: &SMor<F>| mapped("mor0", f, functor.map_mor(f));
    let fc = |x: &SCell1<F>| mapped("obj1", x, functor.map_cell(x));
    let fs = |a: &SCell2<F>| mapped("mor2", a, functor.map_square(a));

    let objects = src.objects();
    let morphisms = src.all_morphisms();
    let cells = src.all_cells();
    let squares = src.all_squares();

    for a in &objects {
        let ok = fm(&src.id0(a))? == tgt.id0(&fo(a)?);
        report.record("functor.d0", ok, || format!("id0 of {a:?}"));
        let unit_img = fc(&src.unit(a))?;
        let expected = tgt.unit(&fo(a)?);
        let ok = match functor.unit_comparison(a) {
            None => unit_img == expected,
            Some(w) => witness_ok(tgt, &w, &expected, &unit_img)?,
        };
        report.record("functor.unit", ok, || format!("ID of {a:?}"));
    }

    walk(budget, "functor.mor", &morphisms, &[], &mut |c| {
        let f = &c[0];
        let img = fm(f)?;
        let ok = tgt.src0(&img) == fo(&src.src0(f))? && tgt.tgt0(&img) == fo(&src.tgt0(f))?;
        report.record("functor.endpoints", ok, || format!("{f:?}"));
        let lhs = fs(&src.unit2(f))?;
        let rhs = tgt.unit2(&img);
        let ok = match (functor.unit_comparison(&src.src0(f)), functor.unit_comparison(&src.tgt0(f))) {
            (None, None) => lhs == rhs,
            (Some(ws), Some(wt)) => tgt.must_compose2(&rhs, &wt.forward)? == tgt.must_compose2(&ws.forward, &lhs)?,
            _ => false,
        };
        report.record("functor.unit", ok, || format!("ID of {f:?}"));
        Ok(())
    })?;
    let next_mor = |c: &[SMor<F>]| src.morphisms_from(&src.tgt0(&c[c.len() - 1]));
    walk(budget, "functor.d0", &morphisms, &[&next_mor], &mut |c| {
        let (f, g) = (&c[0], &c[1]);
        let lhs = fm(&src.must_compose0(f, g)?)?;
        let rhs = tgt.must_compose0(&fm(f)?, &fm(g)?)?;
        report.record("functor.d0", lhs == rhs, || format!("{:?}", (f, g)));
        Ok(())
    })?;

    for x in &cells {
        let img = fc(x)?;
        let ok = tgt.d(&img) == fo(&src.d(x))? && tgt.r(&img) == fo(&src.r(x))?;
        report.record("functor.frame", ok, || format!("{x:?}"));
        let ok = fs(&src.id2(x))? == tgt.id2(&img);
        report.record("functor.d1", ok, || format!("id2 of {x:?}"));
    }
    walk(budget, "functor.squares", &squares, &[], &mut |c| {
        let a = &c[0];
        let img = fs(a)?;
        let ok = tgt.src2(&img) == fc(&src.src2(a))? && tgt.tgt2(&img) == fc(&src.tgt2(a))? && tgt.is_valid2(&img);
        report.record("functor.endpoints", ok, || format!("{a:?}"));
        let ok = tgt.d2(&img) == fm(&src.d2(a))? && tgt.r2(&img) == fm(&src.r2(a))?;
        report.record("functor.frame", ok, || format!("{a:?}"));
        Ok(())
    })?;
    let next_sq = |c: &[SCell2<F>]| src.squares_from(&src.tgt2(&c[c.len() - 1]));
    walk(budget, "functor.d1", &squares, &[&next_sq], &mut |c| {
        let (a, b) = (&c[0], &c[1]);
        let lhs = fs(&src.must_compose2(a, b)?)?;
        let rhs = tgt.must_compose2(&fs(a)?, &fs(b)?)?;
        report.record("functor.d1", lhs == rhs, || format!("{:?}", (a, b)));
        Ok(())
    })?;

    let next_cell = |c: &[SCell1<F>]| src.cells_from(&src.r(&c[c.len() - 1]));
    walk(budget, "functor.star.cells", &cells, &[&next_cell], &mut |c| {
        let (x, y) = (&c[0], &c[1]);
        let lhs = fc(&src.must_star(x, y)?)?;
        let rhs = tgt.must_star(&fc(x)?, &fc(y)?)?;
        let ok = match functor.star_comparison(x, y) {
            None => lhs == rhs,
            Some(w) => witness_ok(tgt, &w, &rhs, &lhs)?,
        };
        report.record("functor.star", ok, || format!("{:?}", (x, y)));
        Ok(())
    })?;
    let beside = |c: &[SCell2<F>]| src.squares_with_d(&src.r2(&c[c.len() - 1]));
    walk(budget, "functor.star.squares", &squares, &[&beside], &mut |c| {
        let (a, b) = (&c[0], &c[1]);
        let lhs = fs(&src.must_star2(a, b)?)?;
        let rhs = tgt.must_star2(&fs(a)?, &fs(b)?)?;
        let ws = functor.star_comparison(&src.src2(a), &src.src2(b));
        let wt = functor.star_comparison(&src.tgt2(a), &src.tgt2(b));
        let ok = match (ws, wt) {
            (None, None) => lhs == rhs,
            (Some(ws), Some(wt)) => tgt.must_compose2(&rhs, &wt.forward)? == tgt.must_compose2(&ws.forward, &lhs)?,
            _ => false,
        };
        report.record("functor.star", ok, || format!("{:?}", (a, b)));
        Ok(())
    })?;
    Ok(report)
}
