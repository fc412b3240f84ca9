use std::collections::HashSet;

use super::{DoubleCategory, DoubleCategoryExt, Strictness, StructuralError, Witness};

/// Cells chosen at all four levels of a double category.
#[derive(Debug, Clone)]
pub struct Selection<D: DoubleCategory> {
    pub objects: Vec<D::Obj>,
    pub morphisms: Vec<D::Mor>,
    pub cells: Vec<D::Cell1>,
    pub squares: Vec<D::Cell2>,
}

impl<D: DoubleCategory> Selection<D> {
    /// Every enumerated cell of `base`.
    pub fn everything(base: &D) -> Self {
        Self {
            objects: base.objects(),
            morphisms: base.all_morphisms(),
            cells: base.all_cells(),
            squares: base.all_squares(),
        }
    }

    /// The enumerated cells of `base` satisfying the predicates.
    pub fn by_predicates(
        base: &D,
        obj: impl Fn(&D::Obj) -> bool,
        mor: impl Fn(&D::Mor) -> bool,
        cell: impl Fn(&D::Cell1) -> bool,
        square: impl Fn(&D::Cell2) -> bool,
    ) -> Self {
        let objects: Vec<_> = base.objects().into_iter().filter(|a| obj(a)).collect();
        let morphisms: Vec<_> = objects.iter().flat_map(|a| base.morphisms_from(a)).filter(|f| mor(f)).collect();
        let cells: Vec<_> = objects.iter().flat_map(|a| base.cells_from(a)).filter(|x| cell(x)).collect();
        let squares: Vec<_> = cells.iter().flat_map(|x| base.squares_from(x)).filter(|a| square(a)).collect();
        Self { objects, morphisms, cells, squares }
    }
}

/// A sub-double-category: the base instance seen through a closed selection.
#[derive(Debug, Clone)]
pub struct Restricted<D: DoubleCategory> {
    base: D,
    objects: Vec<D::Obj>,
    morphisms: Vec<D::Mor>,
    cells: Vec<D::Cell1>,
    squares: Vec<D::Cell2>,
    object_set: HashSet<D::Obj>,
    morphism_set: HashSet<D::Mor>,
    cell_set: HashSet<D::Cell1>,
    square_set: HashSet<D::Cell2>,
}

impl<D: DoubleCategory> Restricted<D> {
    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn contains_object(&self, a: &D::Obj) -> bool {
        self.object_set.contains(a)
    }

    pub fn contains_morphism(&self, f: &D::Mor) -> bool {
        self.morphism_set.contains(f)
    }

    pub fn contains_cell(&self, x: &D::Cell1) -> bool {
        self.cell_set.contains(x)
    }

    pub fn contains_square(&self, a: &D::Cell2) -> bool {
        self.square_set.contains(a)
    }
}

fn require<T: std::hash::Hash + Eq + std::fmt::Debug>(
    set: &HashSet<T>,
    item: &T,
    reason: impl FnOnce() -> String,
) -> Result<(), StructuralError> {
    if set.contains(item) {
        Ok(())
    } else {
        Err(StructuralError::NotClosed { missing: format!("{item:?}"), reason: reason() })
    }
}

/// Restricts `base` to `selection`, verifying closure under `d`, `r`, sources
/// and targets, identities, both compositions, `∗`, `ID`, and (for weak
/// instances) the coherence witnesses. Violations are reported, never repaired.
pub fn restrict<D: DoubleCategory>(base: D, selection: Selection<D>) -> Result<Restricted<D>, StructuralError> {
    let Selection { objects, morphisms, cells, squares } = selection;
    let object_set: HashSet<_> = objects.iter().cloned().collect();
    let morphism_set: HashSet<_> = morphisms.iter().cloned().collect();
    let cell_set: HashSet<_> = cells.iter().cloned().collect();
    let square_set: HashSet<_> = squares.iter().cloned().collect();
    let b = &base;

    for a in &objects {
        require(&morphism_set, &b.id0(a), || format!("id0 of {a:?}"))?;
        require(&cell_set, &b.unit(a), || format!("unit of {a:?}"))?;
    }
    for f in &morphisms {
        require(&object_set, &b.src0(f), || format!("source of {f:?}"))?;
        require(&object_set, &b.tgt0(f), || format!("target of {f:?}"))?;
        require(&square_set, &b.unit2(f), || format!("unit2 of {f:?}"))?;
    }
    for f in &morphisms {
        for g in morphisms.iter().filter(|g| b.src0(g) == b.tgt0(f)) {
            require(&morphism_set, &b.must_compose0(f, g)?, || format!("composite of {f:?} and {g:?}"))?;
        }
    }
    for x in &cells {
        require(&object_set, &b.d(x), || format!("d of {x:?}"))?;
        require(&object_set, &b.r(x), || format!("r of {x:?}"))?;
        require(&square_set, &b.id2(x), || format!("id2 of {x:?}"))?;
    }
    for x in &cells {
        for y in cells.iter().filter(|y| b.d(y) == b.r(x)) {
            require(&cell_set, &b.must_star(x, y)?, || format!("star of {x:?} and {y:?}"))?;
        }
    }
    for a in &squares {
        require(&cell_set, &b.src2(a), || format!("source of {a:?}"))?;
        require(&cell_set, &b.tgt2(a), || format!("target of {a:?}"))?;
        require(&morphism_set, &b.d2(a), || format!("d of {a:?}"))?;
        require(&morphism_set, &b.r2(a), || format!("r of {a:?}"))?;
    }
    for a in &squares {
        for c in squares.iter().filter(|c| b.src2(c) == b.tgt2(a)) {
            require(&square_set, &b.must_compose2(a, c)?, || format!("composite of {a:?} and {c:?}"))?;
        }
        for c in squares.iter().filter(|c| b.d2(c) == b.r2(a)) {
            require(&square_set, &b.must_star2(a, c)?, || format!("star2 of {a:?} and {c:?}"))?;
        }
    }
    if b.strictness() == Strictness::Weak {
        for x in &cells {
            for w in [b.left_unitor(x), b.right_unitor(x)].into_iter().flatten() {
                require(&square_set, &w.forward, || format!("unitor of {x:?}"))?;
                require(&square_set, &w.inverse, || format!("unitor of {x:?}"))?;
            }
        }
    }

    Ok(Restricted { base, objects, morphisms, cells, squares, object_set, morphism_set, cell_set, square_set })
}

impl<D: DoubleCategory> DoubleCategory for Restricted<D> {
    type Obj = D::Obj;
    type Mor = D::Mor;
    type Cell1 = D::Cell1;
    type Cell2 = D::Cell2;

    fn src0(&self, f: &D::Mor) -> D::Obj {
        self.base.src0(f)
    }
    fn tgt0(&self, f: &D::Mor) -> D::Obj {
        self.base.tgt0(f)
    }
    fn id0(&self, a: &D::Obj) -> D::Mor {
        self.base.id0(a)
    }
    fn compose0(&self, f: &D::Mor, g: &D::Mor) -> Option<D::Mor> {
        self.base.compose0(f, g)
    }
    fn d(&self, x: &D::Cell1) -> D::Obj {
        self.base.d(x)
    }
    fn r(&self, x: &D::Cell1) -> D::Obj {
        self.base.r(x)
    }
    fn src2(&self, a: &D::Cell2) -> D::Cell1 {
        self.base.src2(a)
    }
    fn tgt2(&self, a: &D::Cell2) -> D::Cell1 {
        self.base.tgt2(a)
    }
    fn d2(&self, a: &D::Cell2) -> D::Mor {
        self.base.d2(a)
    }
    fn r2(&self, a: &D::Cell2) -> D::Mor {
        self.base.r2(a)
    }
    fn id2(&self, x: &D::Cell1) -> D::Cell2 {
        self.base.id2(x)
    }
    fn compose2(&self, a: &D::Cell2, b: &D::Cell2) -> Option<D::Cell2> {
        self.base.compose2(a, b)
    }
    fn star(&self, x: &D::Cell1, y: &D::Cell1) -> Option<D::Cell1> {
        self.base.star(x, y)
    }
    fn star2(&self, a: &D::Cell2, b: &D::Cell2) -> Option<D::Cell2> {
        self.base.star2(a, b)
    }
    fn unit(&self, a: &D::Obj) -> D::Cell1 {
        self.base.unit(a)
    }
    fn unit2(&self, f: &D::Mor) -> D::Cell2 {
        self.base.unit2(f)
    }
    fn strictness(&self) -> Strictness {
        self.base.strictness()
    }
    fn associator(&self, x: &D::Cell1, y: &D::Cell1, z: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.base.associator(x, y, z)
    }
    fn left_unitor(&self, x: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.base.left_unitor(x)
    }
    fn right_unitor(&self, x: &D::Cell1) -> Option<Witness<D::Cell2>> {
        self.base.right_unitor(x)
    }
    fn is_valid2(&self, a: &D::Cell2) -> bool {
        self.base.is_valid2(a)
    }

    fn objects(&self) -> Vec<D::Obj> {
        self.objects.clone()
    }
    fn morphisms_from(&self, a: &D::Obj) -> Vec<D::Mor> {
        self.morphisms.iter().filter(|f| &self.base.src0(f) == a).cloned().collect()
    }
    fn cells_from(&self, a: &D::Obj) -> Vec<D::Cell1> {
        self.cells.iter().filter(|x| &self.base.d(x) == a).cloned().collect()
    }
    fn cells_into(&self, b: &D::Obj) -> Vec<D::Cell1> {
        self.cells.iter().filter(|x| &self.base.r(x) == b).cloned().collect()
    }
    fn squares_from(&self, x: &D::Cell1) -> Vec<D::Cell2> {
        self.squares.iter().filter(|a| &self.base.src2(a) == x).cloned().collect()
    }
    fn squares_with_d(&self, f: &D::Mor) -> Vec<D::Cell2> {
        self.squares.iter().filter(|a| &self.base.d2(a) == f).cloned().collect()
    }
    fn squares_with_r(&self, f: &D::Mor) -> Vec<D::Cell2> {
        self.squares.iter().filter(|a| &self.base.r2(a) == f).cloned().collect()
    }
    fn all_morphisms(&self) -> Vec<D::Mor> {
        self.morphisms.clone()
    }
    fn all_cells(&self) -> Vec<D::Cell1> {
        self.cells.clone()
    }
    fn all_squares(&self) -> Vec<D::Cell2> {
        self.squares.clone()
    }
}
