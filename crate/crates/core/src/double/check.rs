use super::walk::{walk, Budget};
use super::{DoubleCategory, DoubleCategoryExt, LawReport, Strictness, StructuralError, Witness};

/// Checks every law of a double category on the instance's enumerations.
///
/// Covered: category laws of `D0` and `D1`, functoriality of `d` and `r`,
/// typing and functoriality of `∗` (including interchange), `ID` as a section
/// of `d, r` and as a functor, and associativity/unit laws. Strict instances
/// are checked for equality; weak instances for witness endpoints,
/// invertibility and naturality.
pub fn check_double_category<D: DoubleCategory + ?Sized>(
    dc: &D,
    budget: &Budget,
) -> Result<LawReport, StructuralError> {
    let mut c = Checker::new(dc, budget);
    c.d0_laws()?;
    c.d1_laws()?;
    c.frame_functors()?;
    c.star_laws()?;
    c.unit_laws()?;
    match dc.strictness() {
        Strictness::Strict => c.strict_coherence()?,
        Strictness::Weak => c.weak_coherence()?,
    }
    Ok(c.report)
}

/// True iff every 0-level morphism is an identity.
pub fn is_bicategory_shaped<D: DoubleCategory + ?Sized>(dc: &D) -> bool {
    dc.objects().iter().all(|a| dc.morphisms_from(a).iter().all(|f| *f == dc.id0(&dc.src0(f))))
}

struct Checker<'a, D: DoubleCategory + ?Sized> {
    dc: &'a D,
    budget: &'a Budget,
    report: LawReport,
    objects: Vec<D::Obj>,
    morphisms: Vec<D::Mor>,
    cells: Vec<D::Cell1>,
    squares: Vec<D::Cell2>,
}

impl<'a, D: DoubleCategory + ?Sized> Checker<'a, D> {
    fn new(dc: &'a D, budget: &'a Budget) -> Self {
        Self {
            dc,
            budget,
            report: LawReport::new(),
            objects: dc.objects(),
            morphisms: dc.all_morphisms(),
            cells: dc.all_cells(),
            squares: dc.all_squares(),
        }
    }

    fn d0_laws(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        for law in ["d0.identity", "d0.endpoints", "d0.associativity"] {
            report.declare(law);
        }
        walk(self.budget, "d0.identity", &self.morphisms, &[], &mut |c| {
            let f = &c[0];
            let left = dc.must_compose0(&dc.id0(&dc.src0(f)), f)?;
            let right = dc.must_compose0(f, &dc.id0(&dc.tgt0(f)))?;
            report.record("d0.identity", &left == f && &right == f, || format!("{f:?}"));
            Ok(())
        })?;
        let next = |c: &[D::Mor]| dc.morphisms_from(&dc.tgt0(&c[c.len() - 1]));
        walk(self.budget, "d0.endpoints", &self.morphisms, &[&next], &mut |c| {
            let fg = dc.must_compose0(&c[0], &c[1])?;
            let ok = dc.src0(&fg) == dc.src0(&c[0]) && dc.tgt0(&fg) == dc.tgt0(&c[1]);
            report.record("d0.endpoints", ok, || format!("{:?}", (&c[0], &c[1])));
            Ok(())
        })?;
        walk(self.budget, "d0.associativity", &self.morphisms, &[&next, &next], &mut |c| {
            let (f, g, h) = (&c[0], &c[1], &c[2]);
            let lhs = dc.must_compose0(&dc.must_compose0(f, g)?, h)?;
            let rhs = dc.must_compose0(f, &dc.must_compose0(g, h)?)?;
            report.record("d0.associativity", lhs == rhs, || format!("{:?}", (f, g, h)));
            Ok(())
        })?;
        Ok(())
    }

    fn d1_laws(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        for law in ["cells.valid", "d1.identity", "d1.endpoints", "d1.associativity"] {
            report.declare(law);
        }
        walk(self.budget, "d1.identity", &self.squares, &[], &mut |c| {
            let a = &c[0];
            report.record("cells.valid", dc.is_valid2(a), || format!("{a:?}"));
            let left = dc.must_compose2(&dc.id2(&dc.src2(a)), a)?;
            let right = dc.must_compose2(a, &dc.id2(&dc.tgt2(a)))?;
            report.record("d1.identity", &left == a && &right == a, || format!("{a:?}"));
            Ok(())
        })?;
        for x in &self.cells {
            let i = dc.id2(x);
            let ok = dc.src2(&i) == *x && dc.tgt2(&i) == *x && dc.is_valid2(&i);
            report.record("d1.identity", ok, || format!("id2 of {x:?}"));
        }
        let next = |c: &[D::Cell2]| dc.squares_from(&dc.tgt2(&c[c.len() - 1]));
        walk(self.budget, "d1.endpoints", &self.squares, &[&next], &mut |c| {
            let ab = dc.must_compose2(&c[0], &c[1])?;
            let ok = dc.src2(&ab) == dc.src2(&c[0]) && dc.tgt2(&ab) == dc.tgt2(&c[1]) && dc.is_valid2(&ab);
            report.record("d1.endpoints", ok, || format!("{:?}", (&c[0], &c[1])));
            Ok(())
        })?;
        walk(self.budget, "d1.associativity", &self.squares, &[&next, &next], &mut |c| {
            let (a, b, g) = (&c[0], &c[1], &c[2]);
            let lhs = dc.must_compose2(&dc.must_compose2(a, b)?, g)?;
            let rhs = dc.must_compose2(a, &dc.must_compose2(b, g)?)?;
            report.record("d1.associativity", lhs == rhs, || format!("{:?}", (a, b, g)));
            Ok(())
        })?;
        Ok(())
    }

    /// `d` and `r` are functors `D1 → D0`.
    fn frame_functors(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        report.declare("d.functor");
        report.declare("r.functor");
        for x in &self.cells {
            let i = dc.id2(x);
            report.record("d.functor", dc.d2(&i) == dc.id0(&dc.d(x)), || format!("id2 of {x:?}"));
            report.record("r.functor", dc.r2(&i) == dc.id0(&dc.r(x)), || format!("id2 of {x:?}"));
        }
        walk(self.budget, "frame.endpoints", &self.squares, &[], &mut |c| {
            let a = &c[0];
            let (s, t) = (dc.src2(a), dc.tgt2(a));
            let (fd, fr) = (dc.d2(a), dc.r2(a));
            let d_ok = dc.src0(&fd) == dc.d(&s) && dc.tgt0(&fd) == dc.d(&t);
            let r_ok = dc.src0(&fr) == dc.r(&s) && dc.tgt0(&fr) == dc.r(&t);
            report.record("d.functor", d_ok, || format!("{a:?}"));
            report.record("r.functor", r_ok, || format!("{a:?}"));
            Ok(())
        })?;
        let next = |c: &[D::Cell2]| dc.squares_from(&dc.tgt2(&c[c.len() - 1]));
        walk(self.budget, "frame.compose", &self.squares, &[&next], &mut |c| {
            let (a, b) = (&c[0], &c[1]);
            let ab = dc.must_compose2(a, b)?;
            let d_ok = dc.d2(&ab) == dc.must_compose0(&dc.d2(a), &dc.d2(b))?;
            let r_ok = dc.r2(&ab) == dc.must_compose0(&dc.r2(a), &dc.r2(b))?;
            report.record("d.functor", d_ok, || format!("{:?}", (a, b)));
            report.record("r.functor", r_ok, || format!("{:?}", (a, b)));
            Ok(())
        })?;
        Ok(())
    }

    fn star_laws(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        for law in ["star.endpoints", "star.identity", "star.interchange"] {
            report.declare(law);
        }
        let next_cell = |c: &[D::Cell1]| dc.cells_from(&dc.r(&c[c.len() - 1]));
        walk(self.budget, "star.cells", &self.cells, &[&next_cell], &mut |c| {
            let (x, y) = (&c[0], &c[1]);
            let xy = dc.must_star(x, y)?;
            let ok = dc.d(&xy) == dc.d(x) && dc.r(&xy) == dc.r(y);
            report.record("star.endpoints", ok, || format!("{:?}", (x, y)));
            let ids = dc.must_star2(&dc.id2(x), &dc.id2(y))?;
            report.record("star.identity", ids == dc.id2(&xy), || format!("{:?}", (x, y)));
            Ok(())
        })?;
        let beside = |c: &[D::Cell2]| dc.squares_with_d(&dc.r2(&c[c.len() - 1]));
        walk(self.budget, "star.squares", &self.squares, &[&beside], &mut |c| {
            let (a, b) = (&c[0], &c[1]);
            let ab = dc.must_star2(a, b)?;
            let ok = dc.src2(&ab) == dc.must_star(&dc.src2(a), &dc.src2(b))?
                && dc.tgt2(&ab) == dc.must_star(&dc.tgt2(a), &dc.tgt2(b))?
                && dc.d2(&ab) == dc.d2(a)
                && dc.r2(&ab) == dc.r2(b)
                && dc.is_valid2(&ab);
            report.record("star.endpoints", ok, || format!("{:?}", (a, b)));
            Ok(())
        })?;
        // Chain [α, α′, β, β′] with α;α′ and β;β′ vertical and α|β, α′|β′ horizontal.
        let below = |c: &[D::Cell2]| dc.squares_from(&dc.tgt2(&c[0]));
        let right_of_first = |c: &[D::Cell2]| dc.squares_with_d(&dc.r2(&c[0]));
        let below_right = |c: &[D::Cell2]| {
            let want = dc.r2(&c[1]);
            dc.squares_from(&dc.tgt2(&c[2])).into_iter().filter(|b2| dc.d2(b2) == want).collect()
        };
        walk(self.budget, "star.interchange", &self.squares, &[&below, &right_of_first, &below_right], &mut |c| {
            let (a, a2, b, b2) = (&c[0], &c[1], &c[2], &c[3]);
            let lhs = dc.must_star2(&dc.must_compose2(a, a2)?, &dc.must_compose2(b, b2)?)?;
            let rhs = dc.must_compose2(&dc.must_star2(a, b)?, &dc.must_star2(a2, b2)?)?;
            report.record("star.interchange", lhs == rhs, || format!("{:?}", (a, a2, b, b2)));
            Ok(())
        })?;
        Ok(())
    }

    fn unit_laws(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        report.declare("unit.section");
        report.declare("unit.functor");
        for a in &self.objects {
            let u = dc.unit(a);
            report.record("unit.section", dc.d(&u) == *a && dc.r(&u) == *a, || format!("{a:?}"));
            let ok = dc.unit2(&dc.id0(a)) == dc.id2(&u);
            report.record("unit.functor", ok, || format!("{a:?}"));
        }
        walk(self.budget, "unit.section", &self.morphisms, &[], &mut |c| {
            let f = &c[0];
            let u = dc.unit2(f);
            let ok = dc.d2(&u) == *f
                && dc.r2(&u) == *f
                && dc.src2(&u) == dc.unit(&dc.src0(f))
                && dc.tgt2(&u) == dc.unit(&dc.tgt0(f))
                && dc.is_valid2(&u);
            report.record("unit.section", ok, || format!("{f:?}"));
            Ok(())
        })?;
        let next = |c: &[D::Mor]| dc.morphisms_from(&dc.tgt0(&c[c.len() - 1]));
        walk(self.budget, "unit.functor", &self.morphisms, &[&next], &mut |c| {
            let (f, g) = (&c[0], &c[1]);
            let lhs = dc.unit2(&dc.must_compose0(f, g)?);
            let rhs = dc.must_compose2(&dc.unit2(f), &dc.unit2(g))?;
            report.record("unit.functor", lhs == rhs, || format!("{:?}", (f, g)));
            Ok(())
        })?;
        Ok(())
    }

    fn strict_coherence(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        for law in ["associativity.cells", "associativity.squares", "unit.left", "unit.right"] {
            report.declare(law);
        }
        let next_cell = |c: &[D::Cell1]| dc.cells_from(&dc.r(&c[c.len() - 1]));
        walk(self.budget, "assoc.cells", &self.cells, &[&next_cell, &next_cell], &mut |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let lhs = dc.must_star(&dc.must_star(x, y)?, z)?;
            let rhs = dc.must_star(x, &dc.must_star(y, z)?)?;
            report.record("associativity.cells", lhs == rhs, || format!("{:?}", (x, y, z)));
            Ok(())
        })?;
        let beside = |c: &[D::Cell2]| dc.squares_with_d(&dc.r2(&c[c.len() - 1]));
        walk(self.budget, "assoc.squares", &self.squares, &[&beside, &beside], &mut |c| {
            let (a, b, g) = (&c[0], &c[1], &c[2]);
            let lhs = dc.must_star2(&dc.must_star2(a, b)?, g)?;
            let rhs = dc.must_star2(a, &dc.must_star2(b, g)?)?;
            report.record("associativity.squares", lhs == rhs, || format!("{:?}", (a, b, g)));
            Ok(())
        })?;
        walk(self.budget, "unit.cells", &self.cells, &[], &mut |c| {
            let x = &c[0];
            let left = dc.must_star(&dc.unit(&dc.d(x)), x)?;
            let right = dc.must_star(x, &dc.unit(&dc.r(x)))?;
            report.record("unit.left", &left == x, || format!("{x:?}"));
            report.record("unit.right", &right == x, || format!("{x:?}"));
            Ok(())
        })?;
        walk(self.budget, "unit.squares", &self.squares, &[], &mut |c| {
            let a = &c[0];
            let left = dc.must_star2(&dc.unit2(&dc.d2(a)), a)?;
            let right = dc.must_star2(a, &dc.unit2(&dc.r2(a)))?;
            report.record("unit.left", &left == a, || format!("{a:?}"));
            report.record("unit.right", &right == a, || format!("{a:?}"));
            Ok(())
        })?;
        Ok(())
    }

    fn weak_coherence(&mut self) -> Result<(), StructuralError> {
        let dc = self.dc;
        let report = &mut self.report;
        for law in ["associator.witness", "associator.naturality", "unitor.witness", "unitor.naturality"] {
            report.declare(law);
        }
        let assoc = |x: &D::Cell1, y: &D::Cell1, z: &D::Cell1| {
            dc.associator(x, y, z).ok_or_else(|| StructuralError::MissingWitness {
                kind: "associator",
                cells: format!("{:?}", (x, y, z)),
            })
        };
        let lunit = |x: &D::Cell1| {
            dc.left_unitor(x)
                .ok_or_else(|| StructuralError::MissingWitness { kind: "left unitor", cells: format!("{x:?}") })
        };
        let runit = |x: &D::Cell1| {
            dc.right_unitor(x)
                .ok_or_else(|| StructuralError::MissingWitness { kind: "right unitor", cells: format!("{x:?}") })
        };

        let next_cell = |c: &[D::Cell1]| dc.cells_from(&dc.r(&c[c.len() - 1]));
        walk(self.budget, "assoc.witness", &self.cells, &[&next_cell, &next_cell], &mut |c| {
            let (x, y, z) = (&c[0], &c[1], &c[2]);
            let w = assoc(x, y, z)?;
            let from = dc.must_star(&dc.must_star(x, y)?, z)?;
            let to = dc.must_star(x, &dc.must_star(y, z)?)?;
            let ok = witness_ok(dc, &w, &from, &to)?;
            report.record("associator.witness", ok, || format!("{:?}", (x, y, z)));
            Ok(())
        })?;
        let beside = |c: &[D::Cell2]| dc.squares_with_d(&dc.r2(&c[c.len() - 1]));
        walk(self.budget, "assoc.naturality", &self.squares, &[&beside, &beside], &mut |c| {
            let (a, b, g) = (&c[0], &c[1], &c[2]);
            let w_src = assoc(&dc.src2(a), &dc.src2(b), &dc.src2(g))?;
            let w_tgt = assoc(&dc.tgt2(a), &dc.tgt2(b), &dc.tgt2(g))?;
            let left_bracket = dc.must_star2(&dc.must_star2(a, b)?, g)?;
            let right_bracket = dc.must_star2(a, &dc.must_star2(b, g)?)?;
            let lhs = dc.must_compose2(&left_bracket, &w_tgt.forward)?;
            let rhs = dc.must_compose2(&w_src.forward, &right_bracket)?;
            report.record("associator.naturality", lhs == rhs, || format!("{:?}", (a, b, g)));
            Ok(())
        })?;
        walk(self.budget, "unitor.witness", &self.cells, &[], &mut |c| {
            let x = &c[0];
            let l = lunit(x)?;
            let l_ok = witness_ok(dc, &l, &dc.must_star(&dc.unit(&dc.d(x)), x)?, x)?;
            let r = runit(x)?;
            let r_ok = witness_ok(dc, &r, &dc.must_star(x, &dc.unit(&dc.r(x)))?, x)?;
            report.record("unitor.witness", l_ok && r_ok, || format!("{x:?}"));
            Ok(())
        })?;
        walk(self.budget, "unitor.naturality", &self.squares, &[], &mut |c| {
            let a = &c[0];
            let (s, t) = (dc.src2(a), dc.tgt2(a));
            let left = dc.must_star2(&dc.unit2(&dc.d2(a)), a)?;
            let l_ok = dc.must_compose2(&left, &lunit(&t)?.forward)? == dc.must_compose2(&lunit(&s)?.forward, a)?;
            let right = dc.must_star2(a, &dc.unit2(&dc.r2(a)))?;
            let r_ok = dc.must_compose2(&right, &runit(&t)?.forward)? == dc.must_compose2(&runit(&s)?.forward, a)?;
            report.record("unitor.naturality", l_ok && r_ok, || format!("{a:?}"));
            Ok(())
        })?;
        Ok(())
    }
}

/// A witness `from → to` is well-typed, framed by identities, valid, and
/// mutually inverse with its declared inverse.
pub(crate) fn witness_ok<D: DoubleCategory + ?Sized>(
    dc: &D,
    w: &Witness<D::Cell2>,
    from: &D::Cell1,
    to: &D::Cell1,
) -> Result<bool, StructuralError> {
    let (f, g) = (&w.forward, &w.inverse);
    let typed = dc.src2(f) == *from
        && dc.tgt2(f) == *to
        && dc.src2(g) == *to
        && dc.tgt2(g) == *from
        && dc.d2(f) == dc.id0(&dc.d(from))
        && dc.r2(f) == dc.id0(&dc.r(from))
        && dc.d2(g) == dc.id0(&dc.d(to))
        && dc.r2(g) == dc.id0(&dc.r(to))
        && dc.is_valid2(f)
        && dc.is_valid2(g);
    if !typed {
        return Ok(false);
    }
    Ok(dc.must_compose2(f, g)? == dc.id2(from) && dc.must_compose2(g, f)? == dc.id2(to))
}
